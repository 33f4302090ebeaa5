//! Rotation angles, exact when rational.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// A rotation angle θ, either `2πp/q` held exactly or a floating value in radians.
///
/// Rational angles keep `gcd(p, q) = 1` and `0 <= p < q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Rational { p: i64, q: i64 },
    Real(f64),
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

impl Theta {
    /// θ = 2πp/q. The fraction is reduced; it must lie in `[0, 1)`.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(invalid(format!("denominator must be positive, got {q}")));
        }
        let g = gcd(p, q).max(1);
        let (p, q) = (p / g, q / g);
        if !(0..q).contains(&p) {
            return Err(invalid(format!("need 0 <= p < q, got {p}/{q}")));
        }
        Ok(Theta::Rational { p, q })
    }

    pub fn real(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(invalid("theta must be finite"));
        }
        Ok(Theta::Real(value))
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Theta::Rational { p, q } => 2.0 * PI * p as f64 / q as f64,
            Theta::Real(v) => v,
        }
    }

    /// `e^{ikθ/2}`.
    ///
    /// Rational angles reduce `k·p` modulo `2q` in integer arithmetic before the single
    /// trigonometric evaluation, so long products never accumulate phase error.
    pub fn half_phase(&self, k: i64) -> Complex64 {
        match *self {
            Theta::Rational { p, q } => {
                let r = (k as i128 * p as i128).rem_euclid(2 * q as i128) as i64;
                unit_root(r, 2 * q)
            }
            Theta::Real(v) => Complex64::cis(k as f64 * v / 2.0),
        }
    }

    /// `e^{ikθ}`.
    pub fn phase(&self, k: i64) -> Complex64 {
        self.half_phase(k.checked_mul(2).expect("phase exponent overflow"))
    }
}

/// `e^{2πi r/n}` with exact values on the quarter turns.
pub(crate) fn unit_root(r: i64, n: i64) -> Complex64 {
    let r = r.rem_euclid(n);
    if (4 * r as i128) % n as i128 == 0 {
        return match (4 * r as i128 / n as i128) as i64 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::cis(2.0 * PI * r as f64 / n as f64)
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Rational { p, q } => write!(f, "2π·{p}/{q}"),
            Theta::Real(v) => write!(f, "{v} rad"),
        }
    }
}
