//! Generating function for the family `d_x` and the linear system that recovers each
//! `d_(p,q)` from the Taylor coefficients of that generating function.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, GroupPoint, PRUNE_THRESHOLD};
use crate::error::{invalid, Error, Result};
use crate::theta::Theta;

/// Phases whose sine falls below this are treated as resonant.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

/// `φ(u, x) = (1 − u²)/(1 + u² − ux)` for `|u| < 1`, `|x| ≤ 2`.
///
/// This is `Σ_m u^{|m|} z^m` evaluated at `x = z + z̄`, `|z| = 1`.
pub fn phi_scalar(u: f64, x: f64) -> Result<f64> {
    if !(u.abs() < 1.0) {
        return Err(invalid(format!("phi needs |u| < 1, got {u}")));
    }
    if !(x.abs() <= 2.0 + 1e-12) {
        return Err(invalid(format!("phi needs |x| <= 2, got {x}")));
    }
    Ok((1.0 - u * u) / (1.0 + u * u - u * x))
}

/// A truncated generating sum together with a certified ℓ¹ bound on what was dropped.
#[derive(Debug, Clone)]
pub struct GeneratingSum {
    pub element: AlgebraElement,
    /// ℓ¹ distance to the untruncated series is at most this.
    pub tail_bound: f64,
}

fn geometric_two_sided(r: f64, cutoff: u32) -> (f64, f64) {
    // (Σ_{|m|≤M} r^{|m|}, Σ_{|m|>M} r^{|m|}) for 0 ≤ r < 1
    let total = (1.0 + r) / (1.0 - r);
    let tail = 2.0 * r.powi(cutoff as i32 + 1) / (1.0 - r);
    (total - tail, tail)
}

/// `F(s,t) = Σ_{|m|,|n|≤M} s^{|m|} t^{|n|} e^{−imnθ/2} d_(m,n)`.
///
/// Each point `x ≠ 0` is reached by both `d_x` and `d_{−x}`, and `d_0 = 2δ_0`, so every
/// coefficient of the collected element is `2 s^{|m|} t^{|n|} e^{−imnθ/2}`.
pub fn generating_sum(s: f64, t: f64, theta: Theta, cutoff: u32) -> Result<GeneratingSum> {
    if !(s.abs() < 1.0 && t.abs() < 1.0) {
        return Err(invalid(format!("generating sum needs |s|, |t| < 1, got ({s}, {t})")));
    }
    if cutoff == 0 {
        return Err(invalid("cutoff must be at least 1"));
    }
    let m_max = cutoff as i64;
    let mut pruned = 0.0;
    let mut coeffs = Vec::with_capacity(((2 * m_max + 1) * (2 * m_max + 1)) as usize);
    for m in -m_max..=m_max {
        let sm = s.powi(m.unsigned_abs() as i32);
        for n in -m_max..=m_max {
            let weight = 2.0 * sm * t.powi(n.unsigned_abs() as i32);
            if weight.abs() < PRUNE_THRESHOLD {
                pruned += weight.abs();
            }
            coeffs.push((GroupPoint::new(m, n), theta.half_phase(-m * n) * weight));
        }
    }
    let element = AlgebraElement::from_coeffs(theta, coeffs);
    // points are distinct, so pruning drops exactly the tiny weights counted above

    let (s_in, s_out) = geometric_two_sided(s.abs(), cutoff);
    let (t_in, t_out) = geometric_two_sided(t.abs(), cutoff);
    let t_all = t_in + t_out;
    let tail_bound = 2.0 * (s_in * t_out + s_out * t_all) + pruned;
    Ok(GeneratingSum { element, tail_bound })
}

/// `A_pq = 2e^{−ipqθ/2} d_(p,q) + 2e^{ipqθ/2} d_(−p,q)` for `p, q ≥ 0`.
///
/// For `pq ≠ 0` this is the coefficient of `s^p t^q` in `F`. On the axes the formula
/// collapses to `4 d_(p,0)` and `4 d_(0,q)`, which is twice the actual Taylor
/// coefficient; see [`series_coefficient`].
pub fn coefficient_a(p: i64, q: i64, theta: Theta) -> Result<AlgebraElement> {
    if p < 0 || q < 0 {
        return Err(invalid(format!("coefficient indices must be nonnegative, got ({p}, {q})")));
    }
    let plus = AlgebraElement::d_generator(GroupPoint::new(p, q), theta)
        .scale(theta.half_phase(-p * q) * 2.0);
    let minus = AlgebraElement::d_generator(GroupPoint::new(-p, q), theta)
        .scale(theta.half_phase(p * q) * 2.0);
    plus.add(&minus)
}

/// The true Taylor coefficient of `s^p t^q` in `F(s,t)`, collected from the double sum.
pub fn series_coefficient(p: i64, q: i64, theta: Theta) -> Result<AlgebraElement> {
    if p < 0 || q < 0 {
        return Err(invalid(format!("coefficient indices must be nonnegative, got ({p}, {q})")));
    }
    let ms: &[i64] = if p == 0 { &[0] } else { &[p, -p] };
    let ns: &[i64] = if q == 0 { &[0] } else { &[q, -q] };
    let mut acc = AlgebraElement::zero(theta);
    for &m in ms {
        for &n in ns {
            let term = AlgebraElement::d_generator(GroupPoint::new(m, n), theta)
                .scale(theta.half_phase(-m * n));
            acc = acc.add(&term)?;
        }
    }
    Ok(acc)
}

/// Determinant `4(e^{−ipqθ} − e^{ipqθ}) = −8i·sin(pqθ)` of the 2×2 system pairing
/// `A_pq` with `A_pq*`.
pub fn system_determinant(p: i64, q: i64, theta: &Theta) -> Complex64 {
    let e = theta.phase(p * q);
    (e.conj() - e) * 4.0
}

/// Solves `A = 2a d₊ + 2ā d₋`, `A* = 2ā d₊ + 2a d₋` (with `a = e^{−ipqθ/2}`) for
/// `d₊ = d_(p,q)`.
pub fn recover_generator(
    p: i64,
    q: i64,
    a: &AlgebraElement,
    a_star: &AlgebraElement,
    theta: Theta,
) -> Result<AlgebraElement> {
    if p == 0 || q == 0 {
        return Err(invalid(format!(
            "recovery needs pq != 0, got ({p}, {q}); on the axes use A/4 directly"
        )));
    }
    let sine = theta.phase(p * q).im;
    if sine.abs() <= RESONANCE_TOLERANCE {
        return Err(Error::ResonantPhase { p, q, sine });
    }
    let det = system_determinant(p, q, &theta);
    let phase = theta.half_phase(-p * q);
    let lhs = a.scale(phase * 2.0 / det);
    let rhs = a_star.scale(phase.conj() * 2.0 / det);
    lhs.sub(&rhs)
}
