//! Finite clock/shift realizations of `VU = e^{iθ}UV` at θ = 2πp/q.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, GroupPoint};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix};
use crate::theta::{gcd, Theta};

/// Clock and shift unitaries with boundary twists:
/// `U = e^{iφ₁} diag(e^{iθj})`, `V = e^{iφ₂}·(e_j ↦ e_{j−1 mod q})`.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    p: i64,
    q: i64,
    twist: (f64, f64),
    theta: Theta,
    u: CMatrix,
    v: CMatrix,
}

impl MatrixRep {
    pub fn clock_shift(p: i64, q: i64, phi1: f64, phi2: f64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidParameter(format!("q must be at least 1, got {q}")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        if !(phi1.is_finite() && phi2.is_finite()) {
            return Err(Error::InvalidParameter("twist phases must be finite".into()));
        }
        let theta = Theta::rational(p, q)?;
        let mut rep = Self {
            p,
            q,
            twist: (phi1, phi2),
            theta,
            u: linalg::zeros(0),
            v: linalg::zeros(0),
        };
        rep.u = rep.weyl(GroupPoint::new(1, 0));
        rep.v = rep.weyl(GroupPoint::new(0, 1));
        Ok(rep)
    }

    pub fn untwisted(p: i64, q: i64) -> Result<Self> {
        Self::clock_shift(p, q, 0.0, 0.0)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q as usize
    }

    pub fn twist(&self) -> (f64, f64) {
        self.twist
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    /// Nonzero entries `(row, col, value)` of the monomial matrix `W_(m,n)`; one per column.
    fn weyl_entries(&self, x: GroupPoint) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let (m, n) = (x.m, x.n);
        let q = self.q;
        let head = self.theta.half_phase(m * n)
            * Complex64::cis(m as f64 * self.twist.0 + n as f64 * self.twist.1);
        (0..q).map(move |j| {
            let row = (j - n).rem_euclid(q);
            (row as usize, j as usize, head * self.theta.phase(m * row))
        })
    }

    /// `W_(m,n) = e^{imnθ/2} U^m V^n`.
    pub fn weyl(&self, x: GroupPoint) -> CMatrix {
        let mut w = linalg::zeros(self.dim());
        for (r, c, val) in self.weyl_entries(x) {
            w[(r, c)] = val;
        }
        w
    }

    /// `D_x = W_x + W_{−x}`.
    pub fn d_op(&self, x: GroupPoint) -> HermitianMatrix {
        let mut d = linalg::zeros(self.dim());
        for (r, c, val) in self.weyl_entries(x).chain(self.weyl_entries(-x)) {
            d[(r, c)] += val;
        }
        HermitianMatrix::new(d).expect("W_x + W_-x is Hermitian")
    }

    fn check_theta(&self, f: &AlgebraElement) -> Result<()> {
        if *f.theta() != self.theta {
            return Err(Error::ThetaMismatch {
                left: f.theta().to_string(),
                right: self.theta.to_string(),
            });
        }
        Ok(())
    }

    /// `π(f) = Σ f(x) W_x`.
    pub fn represent(&self, f: &AlgebraElement) -> Result<CMatrix> {
        self.check_theta(f)?;
        let mut out = linalg::zeros(self.dim());
        for (x, c) in f.iter() {
            for (r, col, val) in self.weyl_entries(x) {
                out[(r, col)] += c * val;
            }
        }
        Ok(out)
    }

    /// `π(f) = ½ Σ f(x) D_x`, the form that only makes sense for symmetric `f`.
    pub fn represent_symmetric(&self, f: &AlgebraElement) -> Result<CMatrix> {
        self.check_theta(f)?;
        if !f.is_symmetric() {
            return Err(Error::InvalidParameter("element is not symmetric".into()));
        }
        let mut out = linalg::zeros(self.dim());
        for (x, c) in f.iter() {
            for (r, col, val) in self.weyl_entries(x).chain(self.weyl_entries(-x)) {
                out[(r, col)] += c * val * 0.5;
            }
        }
        Ok(out)
    }

    /// The index reversal `J: e_j ↦ e_{−j mod q}`, which implements `W_x ↦ W_{−x}` by
    /// conjugation. Only defined without twist.
    pub fn parity(&self) -> Result<CMatrix> {
        let (phi1, phi2) = self.twist;
        if !(is_trivial_phase(phi1) && is_trivial_phase(phi2)) {
            return Err(Error::TwistedParity { phi1, phi2 });
        }
        let mut j = linalg::zeros(self.dim());
        for k in 0..self.q {
            j[((-k).rem_euclid(self.q) as usize, k as usize)] = Complex64::new(1.0, 0.0);
        }
        Ok(j)
    }
}

fn is_trivial_phase(phi: f64) -> bool {
    let r = phi.rem_euclid(TAU);
    r.min(TAU - r) == 0.0
}

/// `tr(M)/dim`.
pub fn normalized_trace(m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "normalized trace of a non-square matrix");
    linalg::trace(m) / n as f64
}

/// Row-major CSV, each entry written as an `re,im` pair.
pub fn write_matrix_csv<W: Write>(mut w: W, m: &CMatrix) -> io::Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            // adding 0.0 turns -0 into 0
            .map(|j| format!("{},{}", m[(i, j)].re + 0.0, m[(i, j)].im + 0.0))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint, matmul, max_abs_diff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_case() {
        let rep = MatrixRep::untwisted(1, 2).unwrap();
        let u = rep.u();
        let v = rep.v();
        assert_eq!(u[(0, 0)], c(1.0, 0.0));
        assert_eq!(u[(1, 1)], c(-1.0, 0.0));
        assert_eq!(u[(0, 1)], c(0.0, 0.0));
        assert_eq!(v[(0, 1)], c(1.0, 0.0));
        assert_eq!(v[(1, 0)], c(1.0, 0.0));
        assert_eq!(v[(0, 0)], c(0.0, 0.0));
        let vu = matmul(v, u);
        let uv = matmul(u, v);
        assert_eq!(max_abs_diff(&vu, &linalg::scale(&uv, c(-1.0, 0.0))), 0.0);
    }

    #[test]
    fn one_dimensional_rep_is_scalar() {
        let rep = MatrixRep::clock_shift(0, 1, 0.3, 1.1).unwrap();
        assert!((rep.u()[(0, 0)] - Complex64::cis(0.3)).norm() < 1e-15);
        assert!((rep.v()[(0, 0)] - Complex64::cis(1.1)).norm() < 1e-15);
    }

    #[test]
    fn clock_spectrum_is_roots_of_unity() {
        let rep = MatrixRep::untwisted(3, 7).unwrap();
        for j in 0..7 {
            let z = rep.u()[(j, j)];
            assert!((z - Complex64::cis(TAU * 3.0 * j as f64 / 7.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(matches!(MatrixRep::untwisted(2, 4), Err(Error::NotCoprime { .. })));
        assert!(MatrixRep::untwisted(1, 0).is_err());
    }

    #[test]
    fn weyl_on_generators_and_origin() {
        let rep = MatrixRep::clock_shift(2, 5, 0.4, 0.9).unwrap();
        assert_eq!(max_abs_diff(&rep.weyl(GroupPoint::ORIGIN), &linalg::identity(5)), 0.0);
        assert!(max_abs_diff(&rep.weyl(GroupPoint::new(1, 0)), rep.u()) == 0.0);
        assert!(max_abs_diff(&rep.weyl(GroupPoint::new(0, 1)), rep.v()) == 0.0);
        let x = GroupPoint::new(3, -4);
        assert!(max_abs_diff(&adjoint(&rep.weyl(x)), &rep.weyl(-x)) < 1e-13);
    }

    #[test]
    fn weyl_relation_against_dense_powers() {
        // oracle: W_(m,n) from explicit products of U and V
        let rep = MatrixRep::clock_shift(3, 8, 0.2, -0.7).unwrap();
        let theta = rep.theta();
        let (m, n) = (2i64, 3i64);
        let mut dense = linalg::identity(8);
        for _ in 0..m {
            dense = matmul(&dense, rep.u());
        }
        for _ in 0..n {
            dense = matmul(&dense, rep.v());
        }
        dense = linalg::scale(&dense, theta.half_phase(m * n));
        assert!(max_abs_diff(&dense, &rep.weyl(GroupPoint::new(m, n))) < 1e-13);
    }

    #[test]
    fn d_op_basics() {
        let rep = MatrixRep::untwisted(5, 13).unwrap();
        let d0 = rep.d_op(GroupPoint::ORIGIN);
        assert_eq!(max_abs_diff(d0.matrix(), &linalg::scale(&linalg::identity(13), c(2.0, 0.0))), 0.0);
        let x = GroupPoint::new(2, 1);
        let dx = rep.d_op(x);
        let sq = matmul(dx.matrix(), dx.matrix());
        let rhs = linalg::add(rep.d_op(x.scaled(2)).matrix(), d0.matrix());
        assert!(max_abs_diff(&sq, &rhs) < 1e-12);
    }

    #[test]
    fn parity_requires_untwisted() {
        let rep = MatrixRep::clock_shift(1, 3, 0.5, 0.0).unwrap();
        assert!(matches!(rep.parity(), Err(Error::TwistedParity { .. })));
        let rep = MatrixRep::untwisted(1, 3).unwrap();
        let j = rep.parity().unwrap();
        assert_eq!(max_abs_diff(&matmul(&j, &j), &linalg::identity(3)), 0.0);
        let conj = matmul(&matmul(&j, rep.u()), &adjoint(&j));
        assert!(max_abs_diff(&conj, &adjoint(rep.u())) < 1e-15);
    }

    #[test]
    fn trace_of_full_period_is_phase() {
        let rep = MatrixRep::clock_shift(2, 5, 0.3, 0.0).unwrap();
        let t = normalized_trace(&rep.weyl(GroupPoint::new(5, 0)));
        // oracle: U^5 = e^{5iφ₁} I
        assert!((t - Complex64::cis(1.5)).norm() < 1e-13);
        assert!((t.norm() - 1.0).abs() < 1e-13);
        let untwisted = MatrixRep::untwisted(2, 5).unwrap();
        assert!(normalized_trace(&untwisted.weyl(GroupPoint::new(1, 0))).norm() < 1e-15);
        assert_eq!(normalized_trace(&linalg::identity(5)), c(1.0, 0.0));
    }

    #[test]
    fn represent_rejects_other_theta() {
        let rep = MatrixRep::untwisted(1, 3).unwrap();
        let f = AlgebraElement::unit(Theta::rational(1, 4).unwrap());
        assert!(matches!(rep.represent(&f), Err(Error::ThetaMismatch { .. })));
    }

    #[test]
    fn csv_export() {
        let rep = MatrixRep::untwisted(1, 2).unwrap();
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, rep.u()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,0,0,0\n0,0,-1,0\n");
    }
}
