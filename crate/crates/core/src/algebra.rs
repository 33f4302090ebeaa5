//! The twisted convolution algebra ℓ¹(Z⊕Z, ω) on finitely supported elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::theta::Theta;

/// Coefficients below this modulus are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance of [`AlgebraElement::is_symmetric`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-14;

/// A point `(m, n)` of Z⊕Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupPoint {
    pub m: i64,
    pub n: i64,
}

impl GroupPoint {
    pub const ORIGIN: GroupPoint = GroupPoint { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    pub fn is_origin(&self) -> bool {
        self.m == 0 && self.n == 0
    }

    pub fn scaled(self, k: i64) -> Self {
        Self::new(self.m * k, self.n * k)
    }
}

impl Add for GroupPoint {
    type Output = GroupPoint;
    fn add(self, o: GroupPoint) -> GroupPoint {
        GroupPoint::new(self.m + o.m, self.n + o.n)
    }
}

impl Sub for GroupPoint {
    type Output = GroupPoint;
    fn sub(self, o: GroupPoint) -> GroupPoint {
        GroupPoint::new(self.m - o.m, self.n - o.n)
    }
}

impl Neg for GroupPoint {
    type Output = GroupPoint;
    fn neg(self) -> GroupPoint {
        GroupPoint::new(-self.m, -self.n)
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// The bicharacter `ω((m,n),(p,q)) = e^{i(np − mq)θ/2}`.
pub fn omega(x: GroupPoint, y: GroupPoint, theta: &Theta) -> Complex64 {
    theta.half_phase(x.n * y.m - x.m * y.n)
}

/// A finitely supported element of ℓ¹(Z⊕Z, ω).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ElementWire", try_from = "ElementWire")]
pub struct AlgebraElement {
    theta: Theta,
    coeffs: BTreeMap<GroupPoint, Complex64>,
}

impl AlgebraElement {
    pub fn zero(theta: Theta) -> Self {
        Self { theta, coeffs: BTreeMap::new() }
    }

    /// Builds an element from coefficients; repeated points are summed.
    pub fn from_coeffs(theta: Theta, coeffs: impl IntoIterator<Item = (GroupPoint, Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (x, c) in coeffs {
            *map.entry(x).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut out = Self { theta, coeffs: map };
        out.prune();
        out
    }

    /// The unit function δ_x.
    pub fn delta(x: GroupPoint, theta: Theta) -> Self {
        Self::from_coeffs(theta, [(x, Complex64::new(1.0, 0.0))])
    }

    /// `d_x = δ_x + δ_{−x}`.
    pub fn d_generator(x: GroupPoint, theta: Theta) -> Self {
        Self::from_coeffs(theta, [(x, Complex64::new(1.0, 0.0)), (-x, Complex64::new(1.0, 0.0))])
    }

    pub fn unit(theta: Theta) -> Self {
        Self::delta(GroupPoint::ORIGIN, theta)
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn coeff(&self, x: GroupPoint) -> Complex64 {
        self.coeffs.get(&x).copied().unwrap_or_default()
    }

    /// Nonzero coefficients in lexicographic order of `(m, n)`.
    pub fn iter(&self) -> impl Iterator<Item = (GroupPoint, Complex64)> + '_ {
        self.coeffs.iter().map(|(x, c)| (*x, *c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ|f(x)|`, summed in ascending magnitude so the value only depends on the multiset of
    /// coefficients and is unchanged by relabelling the support.
    pub fn l1_norm(&self) -> f64 {
        let mut mags: Vec<f64> = self.coeffs.values().map(|c| c.norm()).collect();
        mags.sort_by(f64::total_cmp);
        mags.iter().sum()
    }

    fn check_theta(&self, other: &Self) -> Result<()> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch {
                left: self.theta.to_string(),
                right: other.theta.to_string(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.theta, self.iter().map(|(x, c)| (x, c * s)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        Ok(Self::from_coeffs(self.theta, self.iter().chain(other.iter())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        Ok(Self::from_coeffs(self.theta, self.iter().chain(other.iter().map(|(x, c)| (x, -c)))))
    }

    /// Twisted convolution `f*g(x) = Σ_y ω(y,x) f(y) g(x−y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut acc: HashMap<GroupPoint, Complex64> =
            HashMap::with_capacity(self.support_len() * other.support_len());
        for (y, fy) in self.iter() {
            for (z, gz) in other.iter() {
                let x = y + z;
                *acc.entry(x).or_default() += omega(y, x, &self.theta) * fy * gz;
            }
        }
        Ok(Self::from_coeffs(self.theta, acc))
    }

    /// `f*(x) = conj(f(−x))`.
    pub fn involution(&self) -> Self {
        Self::from_coeffs(self.theta, self.iter().map(|(x, c)| (-x, c.conj())))
    }

    /// Membership in the symmetric subalgebra `{f : f(−x) = f(x)}`.
    pub fn is_symmetric(&self) -> bool {
        self.iter()
            .all(|(x, c)| (c - self.coeff(-x)).norm() <= SYMMETRY_TOLERANCE)
    }

    /// Symmetric part `½(f + f∘(−1))`, the projection onto the symmetric subalgebra.
    pub fn symmetrized(&self) -> Self {
        Self::from_coeffs(
            self.theta,
            self.iter().flat_map(|(x, c)| [(x, c * 0.5), (-x, c * 0.5)]),
        )
    }

    /// Largest coefficientwise deviation `max_x |f(x) − g(x)|`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.iter()
            .chain(other.iter())
            .map(|(x, _)| (self.coeff(x) - other.coeff(x)).norm())
            .fold(0.0, f64::max)
    }

    /// Pushes the element forward along a unimodular automorphism of Z⊕Z.
    pub fn sl2z_act(&self, alpha: &Sl2zMatrix) -> Self {
        Self::from_coeffs(self.theta, self.iter().map(|(x, c)| (alpha.apply(x), c)))
    }
}

/// An integer matrix `[[a, b], [c, d]]` with determinant ±1, acting by
/// `(m, n) ↦ (am + bn, cm + dn)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2zMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Sl2zMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            .ok_or_else(|| invalid("matrix entries overflow"))?;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular { a, b, c, d, det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: GroupPoint) -> GroupPoint {
        GroupPoint::new(self.a * x.m + self.b * x.n, self.c * x.m + self.d * x.n)
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ThetaWire {
    Rational { p: i64, q: i64 },
    Real { real: f64 },
}

#[derive(Serialize, Deserialize)]
struct ElementWire {
    theta: ThetaWire,
    coeffs: Vec<(i64, i64, f64, f64)>,
}

impl From<AlgebraElement> for ElementWire {
    fn from(f: AlgebraElement) -> Self {
        let theta = match f.theta {
            Theta::Rational { p, q } => ThetaWire::Rational { p, q },
            Theta::Real(real) => ThetaWire::Real { real },
        };
        let coeffs = f.iter().map(|(x, c)| (x.m, x.n, c.re, c.im)).collect();
        ElementWire { theta, coeffs }
    }
}

impl TryFrom<ElementWire> for AlgebraElement {
    type Error = Error;

    fn try_from(w: ElementWire) -> Result<Self> {
        let theta = match w.theta {
            ThetaWire::Rational { p, q } => {
                let t = Theta::rational(p, q)?;
                if t != (Theta::Rational { p, q }) {
                    return Err(invalid(format!("rational theta {p}/{q} is not reduced")));
                }
                t
            }
            ThetaWire::Real { real } => Theta::real(real)?,
        };
        Ok(AlgebraElement::from_coeffs(
            theta,
            w.coeffs
                .into_iter()
                .map(|(m, n, re, im)| (GroupPoint::new(m, n), Complex64::new(re, im))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn th() -> Theta {
        Theta::real(0.73).unwrap()
    }

    #[test]
    fn omega_on_generators() {
        let t = th();
        let w = omega(GroupPoint::new(1, 0), GroupPoint::new(0, 1), &t);
        assert!((w - Complex64::cis(-0.73 / 2.0)).norm() < 1e-15);
        let x = GroupPoint::new(3, -2);
        assert_eq!(omega(x, x, &t), c(1.0, 0.0));
    }

    #[test]
    fn delta_zero_is_unit() {
        let t = th();
        let f = AlgebraElement::from_coeffs(t, [(GroupPoint::new(1, 2), c(0.5, -1.0)), (GroupPoint::new(-3, 0), c(2.0, 0.0))]);
        let one = AlgebraElement::unit(t);
        assert!(f.convolve(&one).unwrap().max_deviation(&f) == 0.0);
        assert!(one.convolve(&f).unwrap().max_deviation(&f) == 0.0);
    }

    #[test]
    fn d_generator_parity_and_norm() {
        let t = th();
        let x = GroupPoint::new(2, -5);
        let d0 = AlgebraElement::d_generator(GroupPoint::ORIGIN, t);
        assert_eq!(d0, AlgebraElement::unit(t).scale(c(2.0, 0.0)));
        assert_eq!(AlgebraElement::d_generator(-x, t), AlgebraElement::d_generator(x, t));
        assert_eq!(AlgebraElement::d_generator(x, t).l1_norm(), 2.0);
        assert_eq!(AlgebraElement::d_generator(x, t).involution(), AlgebraElement::d_generator(x, t));
        assert!(AlgebraElement::d_generator(x, t).is_symmetric());
        assert!(!AlgebraElement::delta(x, t).is_symmetric());
    }

    #[test]
    fn involution_of_imaginary_delta() {
        let t = th();
        let x = GroupPoint::new(1, 1);
        let f = AlgebraElement::delta(x, t).scale(c(0.0, 1.0));
        assert_eq!(f.involution(), AlgebraElement::delta(-x, t).scale(c(0.0, -1.0)));
    }

    #[test]
    fn theta_mismatch_rejected() {
        let a = AlgebraElement::unit(Theta::real(0.1).unwrap());
        let b = AlgebraElement::unit(Theta::rational(1, 3).unwrap());
        assert!(matches!(a.convolve(&b), Err(Error::ThetaMismatch { .. })));
    }

    #[test]
    fn sl2z_validation() {
        assert!(Sl2zMatrix::new(2, 1, 1, 1).is_ok());
        assert!(Sl2zMatrix::new(0, 1, 1, 0).is_ok());
        assert!(matches!(Sl2zMatrix::new(2, 0, 0, 1), Err(Error::NotUnimodular { det: 2, .. })));
    }

    #[test]
    fn sl2z_identity_is_noop() {
        let t = th();
        let f = AlgebraElement::from_coeffs(t, [(GroupPoint::new(4, 1), c(1.0, 1.0))]);
        assert_eq!(f.sl2z_act(&Sl2zMatrix::identity()), f);
    }

    #[test]
    fn pruning_drops_tiny_coefficients() {
        let t = th();
        let f = AlgebraElement::from_coeffs(t, [(GroupPoint::new(1, 0), c(1e-16, 0.0)), (GroupPoint::new(0, 1), c(1.0, 0.0))]);
        assert_eq!(f.support_len(), 1);
    }

    #[test]
    fn json_layout() {
        let t = Theta::rational(1, 3).unwrap();
        let f = AlgebraElement::from_coeffs(t, [(GroupPoint::new(1, 0), c(1.0, 0.0)), (GroupPoint::new(-1, 2), c(0.0, -2.0))]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"theta":{"p":1,"q":3},"coeffs":[[-1,2,0.0,-2.0],[1,0,1.0,0.0]]}"#);
        let back: AlgebraElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);

        let r = AlgebraElement::delta(GroupPoint::new(0, 1), Theta::real(0.5).unwrap());
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"theta":{"real":0.5},"coeffs":[[0,1,1.0,0.0]]}"#);
        assert!(serde_json::from_str::<AlgebraElement>(r#"{"theta":{"p":2,"q":4},"coeffs":[]}"#).is_err());
    }
}
