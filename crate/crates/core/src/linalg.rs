//! Dense complex matrices and the Hermitian eigensolver.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Mat<Complex64>;

/// Hermiticity tolerance, relative to `max(1, max |entry|)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

pub fn zeros(n: usize) -> CMatrix {
    Mat::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    Mat::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

pub fn diagonal(d: &[Complex64]) -> CMatrix {
    let n = d.len();
    Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) })
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint().to_owned()
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b
}

pub fn scale(a: &CMatrix, s: Complex64) -> CMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a + b
}

pub fn sub(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a - b
}

/// `Σ cᵢ Aᵢ`.
pub fn combine(terms: &[(Complex64, &CMatrix)]) -> CMatrix {
    let (r, c) = (terms[0].1.nrows(), terms[0].1.ncols());
    Mat::from_fn(r, c, |i, j| terms.iter().map(|(s, m)| *s * m[(i, j)]).sum())
}

pub fn max_abs(a: &CMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max(a[(i, j)].norm());
        }
    }
    out
}

/// Entrywise `max |a − b|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    out
}

pub fn trace(a: &CMatrix) -> Complex64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let s = a.singular_values().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// `max |A*A − I|` entrywise.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(&matmul(&adjoint(a), a), &identity(a.nrows()))
}

fn hermitian_defect(a: &CMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j.min(a.nrows() - 1) {
            out = out.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    out
}

/// A square matrix equal to its conjugate transpose, within [`HERMITIAN_TOLERANCE`].
#[derive(Debug, Clone)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(a: CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, not square",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.nrows() == 0 {
            return Ok(Self(a));
        }
        let deviation = hermitian_defect(&a);
        if deviation > HERMITIAN_TOLERANCE * max_abs(&a).max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(a))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    fn is_real(&self) -> bool {
        let a = &self.0;
        (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].im == 0.0))
    }

    fn real_part(&self) -> Mat<f64> {
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.0[(i, j)].re)
    }

    /// Operator norm, `max |λ|`.
    pub fn norm(&self) -> Result<f64> {
        let ev = eig_hermitian(self)?;
        Ok(ev.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

/// Eigenvalues in ascending order. Real symmetric input takes a real solver.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Vec<f64>> {
    if h.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut ev = if h.is_real() {
        h.real_part().self_adjoint_eigenvalues(Side::Lower)
    } else {
        h.matrix().self_adjoint_eigenvalues(Side::Lower)
    }
    .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn eig_hermitian_vectors(h: &HermitianMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let evd = h
        .matrix()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S();
    let values: Vec<f64> = (0..h.dim()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// `f(H) = Σ f(λᵢ) vᵢvᵢ*` by the spectral theorem.
pub fn hermitian_function(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (values, vecs) = eig_hermitian_vectors(h)?;
    let n = h.dim();
    let scaled = Mat::from_fn(n, n, |i, j| vecs[(i, j)] * f(values[j]));
    Ok(matmul(&scaled, &adjoint(&vecs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_sorted() {
        let h = HermitianMatrix::new(diagonal(&[c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)])).unwrap();
        assert_eq!(eig_hermitian(&h).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = identity(3);
        a[(0, 1)] = c(0.0, 1e-9);
        assert!(matches!(HermitianMatrix::new(a), Err(Error::NotHermitian { .. })));
        let mut b = identity(3);
        b[(0, 1)] = c(0.0, 1.0);
        b[(1, 0)] = c(0.0, -1.0);
        assert!(HermitianMatrix::new(b).is_ok());
    }

    #[test]
    fn residuals_and_trace() {
        let n = 12;
        let a = Mat::from_fn(n, n, |i, j| {
            let (i, j) = (i as f64, j as f64);
            c((i + 2.0 * j).sin() + (j + 2.0 * i).sin(), (i - j) * 0.1 + (i * j).cos() - (j * i).cos())
        });
        let h = HermitianMatrix::new(add(&a, &adjoint(&a))).unwrap();
        let (vals, vecs) = eig_hermitian_vectors(&h).unwrap();
        let norm = h.norm().unwrap();
        for (k, &lam) in vals.iter().enumerate() {
            let v = Mat::from_fn(n, 1, |i, _| vecs[(i, k)]);
            let hv = matmul(h.matrix(), &v);
            let r = Mat::from_fn(n, 1, |i, _| hv[(i, 0)] - v[(i, 0)] * lam);
            assert!(max_abs(&r) <= 1e-9 * norm);
        }
        let plain = eig_hermitian(&h).unwrap();
        for (x, y) in plain.iter().zip(&vals) {
            assert!((x - y).abs() < 1e-10 * norm);
        }
        let tr: f64 = plain.iter().sum();
        assert!((tr - trace(h.matrix()).re).abs() <= 1e-9 * norm * n as f64);
    }

    #[test]
    fn spectral_function_inverts() {
        let h = HermitianMatrix::new(Mat::from_fn(4, 4, |i, j| {
            if i == j { c(3.0 + i as f64, 0.0) } else if i.abs_diff(j) == 1 { c(0.5, 0.0) } else { c(0.0, 0.0) }
        }))
        .unwrap();
        let inv = hermitian_function(&h, |x| 1.0 / x).unwrap();
        assert!(max_abs_diff(&matmul(h.matrix(), &inv), &identity(4)) < 1e-13);
    }
}
