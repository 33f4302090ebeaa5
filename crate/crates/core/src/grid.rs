//! Periodic grid model of L²(R) carrying `U_t f(x) = e^{itx} f(x)` and `V_t f(x) = f(x+t)`,
//! the discretized position/momentum pair built from them, and the Hamiltonian
//! `½P_τ² + v(Q_τ)`.
//!
//! The grid has `N` points `x_j = (j − N/2)h` with `h = sqrt(2πk/(m·N))` and step
//! `τ = m·h`. Then `τ·N·h = 2πk`, so `e^{iτx}` is periodic on the grid and every Weyl
//! relation used below holds exactly, at the price of an effective rotation angle
//! `θ = τ² = 2π·k·m/N` that is always rational.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::GroupPoint;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix};
use crate::theta::{unit_root, Theta};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A real potential `v`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `v(x) = c·x²/2`, `c > 0`.
    Harmonic { c: f64 },
    /// `v(x) = a·x² + b·x⁴`.
    Quartic { a: f64, b: f64 },
    /// Piecewise-linear through `(xs[i], vs[i])`, constant beyond the ends.
    Tabulated { xs: Vec<f64>, vs: Vec<f64> },
}

impl PotentialSpec {
    pub fn harmonic(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid(format!("harmonic coupling must be positive, got {c}")));
        }
        Ok(Self::Harmonic { c })
    }

    pub fn quartic(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid("quartic coefficients must be finite"));
        }
        Ok(Self::Quartic { a, b })
    }

    pub fn tabulated(xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != vs.len() {
            return Err(invalid("tabulated potential needs matching, nonempty x and v columns"));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("tabulated x values must be strictly increasing"));
        }
        if xs.iter().chain(&vs).any(|v| !v.is_finite()) {
            return Err(invalid("tabulated potential must be finite"));
        }
        Ok(Self::Tabulated { xs, vs })
    }

    pub fn constant(v0: f64) -> Result<Self> {
        Self::tabulated(vec![0.0], vec![v0])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Harmonic { c } => 0.5 * c * x * x,
            Self::Quartic { a, b } => {
                let x2 = x * x;
                a * x2 + b * x2 * x2
            }
            Self::Tabulated { xs, vs } => {
                let i = xs.partition_point(|&t| t <= x);
                if i == 0 {
                    vs[0]
                } else if i == xs.len() {
                    vs[xs.len() - 1]
                } else {
                    let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                    vs[i - 1] + w * (vs[i] - vs[i - 1])
                }
            }
        }
    }
}

/// The periodic grid.
#[derive(Debug, Clone)]
pub struct GridModel {
    n: usize,
    m_steps: i64,
    k: i64,
    h: f64,
    tau: f64,
    theta: Theta,
}

impl GridModel {
    /// `N` grid points (even), step `τ = m_steps·h`, and `τ·N·h = 2πk`.
    pub fn build(n: usize, m_steps: i64, k: i64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(invalid(format!("grid size must be even and at least 2, got {n}")));
        }
        if m_steps < 1 || k < 1 {
            return Err(invalid(format!("m_steps and k must be positive, got {m_steps}, {k}")));
        }
        let n_i = i64::try_from(n).map_err(|_| invalid("grid size overflows"))?;
        let km = k.checked_mul(m_steps).ok_or_else(|| invalid("k·m_steps overflows"))?;
        if km >= n_i {
            return Err(invalid(format!(
                "k·m_steps = {km} must be below N = {n} so that τ² lies in [0, 2π)"
            )));
        }
        let h = (2.0 * PI * k as f64 / (m_steps as f64 * n as f64)).sqrt();
        Ok(Self {
            n,
            m_steps,
            k,
            h,
            tau: m_steps as f64 * h,
            theta: Theta::rational(km, n_i)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m_steps(&self) -> i64 {
        self.m_steps
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Half-length `L = N·h/2` of the periodic box.
    pub fn half_length(&self) -> f64 {
        self.n as f64 * self.h / 2.0
    }

    /// `θ = τ²` as an exact rational multiple of 2π.
    pub fn theta_eff(&self) -> Theta {
        self.theta
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    fn offset(&self, j: usize) -> i128 {
        j as i128 - (self.n / 2) as i128
    }

    /// `e^{i·a·τ·x_j}` = `e^{2πi·a·k·(j − N/2)/N}` in exact integer phase.
    fn u_phase(&self, a: i64, j: usize) -> Complex64 {
        let n = self.n as i128;
        let r = (a as i128 * self.k as i128 * self.offset(j)).rem_euclid(n);
        unit_root(r as i64, self.n as i64)
    }

    fn steps_of(&self, t: f64) -> Result<i64> {
        let a = t / self.tau;
        let r = a.round();
        if (a - r).abs() > 1e-9 * a.abs().max(1.0) {
            return Err(invalid(format!("t = {t} is not an integer multiple of τ = {}", self.tau)));
        }
        Ok(r as i64)
    }

    /// `U_{aτ}`: diagonal `e^{iaτx_j}`.
    pub fn u_steps(&self, a: i64) -> CMatrix {
        let d: Vec<Complex64> = (0..self.n).map(|j| self.u_phase(a, j)).collect();
        linalg::diagonal(&d)
    }

    /// `V_{aτ}`: the cyclic shift `(Vf)_j = f_{j + a·m_steps}`.
    pub fn v_steps(&self, a: i64) -> CMatrix {
        self.shift(a * self.m_steps)
    }

    fn shift(&self, s: i64) -> CMatrix {
        let n = self.n as i64;
        let mut v = linalg::zeros(self.n);
        for j in 0..n {
            v[(j as usize, (j + s).rem_euclid(n) as usize)] = ONE;
        }
        v
    }

    /// `U_t`; `t` must be an integer multiple of τ.
    pub fn u_op(&self, t: f64) -> Result<CMatrix> {
        Ok(self.u_steps(self.steps_of(t)?))
    }

    /// `V_t`; `t` must be an integer multiple of τ.
    pub fn v_op(&self, t: f64) -> Result<CMatrix> {
        Ok(self.v_steps(self.steps_of(t)?))
    }

    /// `e^{i·s·t}` for `s = aτ`, `t = bτ`, as an exact phase.
    pub fn weyl_phase(&self, a: i64, b: i64) -> Complex64 {
        self.theta.phase(a * b)
    }

    /// `Ŵ_(m,n) = e^{imnτ²/2} U_{mτ} V_{nτ}`.
    pub fn grid_weyl(&self, x: GroupPoint) -> CMatrix {
        let n = self.n as i64;
        let head = self.theta.half_phase(x.m * x.n);
        let s = x.n * self.m_steps;
        let mut w = linalg::zeros(self.n);
        for j in 0..self.n {
            let col = (j as i64 + s).rem_euclid(n) as usize;
            w[(j, col)] = head * self.u_phase(x.m, j);
        }
        w
    }

    /// `Q_τ = (U_τ − U_{−τ})/(2iτ)`, diagonal `sin(τx_j)/τ`.
    pub fn q_tau(&self) -> HermitianMatrix {
        let d: Vec<Complex64> = (0..self.n)
            .map(|j| Complex64::new(self.u_phase(1, j).im / self.tau, 0.0))
            .collect();
        HermitianMatrix::new(linalg::diagonal(&d)).expect("real diagonal")
    }

    /// `P_τ = (V_τ − V_{−τ})/(2iτ)`.
    pub fn p_tau(&self) -> HermitianMatrix {
        let c = Complex64::new(0.0, -1.0 / (2.0 * self.tau));
        let m = linalg::combine(&[(c, &self.v_steps(1)), (-c, &self.v_steps(-1))]);
        HermitianMatrix::new(m).expect("P_tau is Hermitian")
    }

    /// `(Q̃_τ, P̃_τ) = ((U_τ + U_{−τ})/(2τ), (V_τ + V_{−τ})/(2τ))`.
    pub fn cosine_pair(&self) -> (HermitianMatrix, HermitianMatrix) {
        let d: Vec<Complex64> = (0..self.n)
            .map(|j| Complex64::new(self.u_phase(1, j).re / self.tau, 0.0))
            .collect();
        let q = HermitianMatrix::new(linalg::diagonal(&d)).expect("real diagonal");
        let c = Complex64::new(1.0 / (2.0 * self.tau), 0.0);
        let p = linalg::combine(&[(c, &self.v_steps(1)), (c, &self.v_steps(-1))]);
        (q, HermitianMatrix::new(p).expect("cosine momentum is Hermitian"))
    }

    /// `λ = π/(2τ)`.
    pub fn lambda(&self) -> f64 {
        PI / (2.0 * self.tau)
    }

    /// `(Rf)_j = f_{−j mod N}`, i.e. `x ↦ −x`.
    pub fn reflection(&self) -> CMatrix {
        let n = self.n;
        let mut r = linalg::zeros(n);
        for j in 0..n {
            r[(j, (n - j) % n)] = ONE;
        }
        r
    }

    /// `W = R U_{−λ} V_λ`, which carries the sine pair onto the cosine pair.
    ///
    /// `V_λ` is a shift by `λ/h = N/(4k)` points, and `e^{iλx}` is periodic on the grid only
    /// when `4·m_steps` divides `N`.
    pub fn intertwiner(&self) -> Result<CMatrix> {
        let n = self.n as i64;
        if n % (4 * self.k) != 0 {
            return Err(Error::GridMisaligned(format!("4k = {} does not divide N = {n}", 4 * self.k)));
        }
        if n % (4 * self.m_steps) != 0 {
            return Err(Error::GridMisaligned(format!(
                "4·m_steps = {} does not divide N = {n}",
                4 * self.m_steps
            )));
        }
        let shift = n / (4 * self.k);
        // e^{−iλx_j} = e^{−2πi (j − N/2)/(4m)}
        let u_minus_lambda: Vec<Complex64> = (0..self.n)
            .map(|j| unit_root(-(self.offset(j) as i64), 4 * self.m_steps))
            .collect();
        let r = self.reflection();
        let mut w = linalg::zeros(self.n);
        for row in 0..self.n {
            // R picks source index (N − row) mod N, then U_{−λ}, then V_λ shifts
            let src = (n - row as i64).rem_euclid(n) as usize;
            let col = (src as i64 + shift).rem_euclid(n) as usize;
            debug_assert_eq!(r[(row, src)], ONE);
            w[(row, col)] = u_minus_lambda[src];
        }
        Ok(w)
    }

    /// `H_τ = ½P_τ² + v(Q_τ)` with `½P_τ² = (2I − V_{2τ} − V_{−2τ})/(8τ²)`.
    pub fn hamiltonian(&self, v: &PotentialSpec) -> HermitianMatrix {
        let n = self.n as i64;
        let kin = 1.0 / (8.0 * self.tau * self.tau);
        let s = 2 * self.m_steps;
        let mut h = linalg::zeros(self.n);
        for j in 0..n {
            let ju = j as usize;
            h[(ju, ju)] += Complex64::new(2.0 * kin, 0.0);
            h[(ju, (j + s).rem_euclid(n) as usize)] -= Complex64::new(kin, 0.0);
            h[(ju, (j - s).rem_euclid(n) as usize)] -= Complex64::new(kin, 0.0);
            let q = self.u_phase(1, ju).im / self.tau;
            h[(ju, ju)] += Complex64::new(v.eval(q), 0.0);
        }
        HermitianMatrix::new(h).expect("H_tau is Hermitian")
    }

    /// Writes `H_τ` for `v(x) = cx²/2` as `μI + λ_aff·M₂` with
    /// `M₂ = Ṽ + Ṽ* + c(Ũ + Ũ*)`, `Ũ = U_{2τ}`, `Ṽ = V_{2τ}`.
    pub fn almost_mathieu_reduction(&self, v: &PotentialSpec) -> Result<AlmostMathieuReduction> {
        let PotentialSpec::Harmonic { c } = *v else {
            return Err(Error::NotHarmonic);
        };
        let u = self.u_steps(2);
        let vt = self.v_steps(2);
        let one = ONE;
        let cc = Complex64::new(c, 0.0);
        let m2 = linalg::combine(&[
            (one, &vt),
            (one, &linalg::adjoint(&vt)),
            (cc, &u),
            (cc, &linalg::adjoint(&u)),
        ]);
        let tau2 = self.tau * self.tau;
        Ok(AlmostMathieuReduction {
            m2: HermitianMatrix::new(m2)?,
            u_tilde: u,
            v_tilde: vt,
            commutation_phase: self.weyl_phase(2, 2),
            scale: -1.0 / (8.0 * tau2),
            offset: (1.0 + c) / (4.0 * tau2),
        })
    }
}

/// The affine identity `H_τ = offset·I + scale·M₂`.
#[derive(Debug, Clone)]
pub struct AlmostMathieuReduction {
    pub m2: HermitianMatrix,
    pub u_tilde: CMatrix,
    pub v_tilde: CMatrix,
    /// `e^{i4τ²}`, with `ṼŨ = e^{i4τ²}ŨṼ`.
    pub commutation_phase: Complex64,
    pub scale: f64,
    pub offset: f64,
}

impl AlmostMathieuReduction {
    /// `offset·I + scale·M₂`.
    pub fn affine_image(&self) -> CMatrix {
        let n = self.m2.dim();
        let id = linalg::identity(n);
        linalg::combine(&[
            (Complex64::new(self.offset, 0.0), &id),
            (Complex64::new(self.scale, 0.0), self.m2.matrix()),
        ])
    }
}

/// Dirichlet-truncated lattice used for continuum-limit studies.
///
/// `H_τ` only couples points a distance `2τ` apart, so on L²(R) it splits into copies acting on
/// the cosets `x₀ + 2τZ`. This model keeps the coset through the origin, cut to `[−L, L]` with
/// no wrap. The fine-grid alternative picks up spurious low-energy states near momentum `π/τ`,
/// where `sin(τp)` vanishes again.
#[derive(Debug, Clone)]
pub struct TruncatedLattice {
    tau: f64,
    half_width: f64,
    points: Vec<f64>,
}

impl TruncatedLattice {
    /// Sites `2τ·j` for `|2τj| ≤ L`; their number may not exceed `max_points`.
    pub fn new(max_points: usize, half_width: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid(format!("tau must be positive, got {tau}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(invalid(format!("L must be positive, got {half_width}")));
        }
        let k = (half_width / (2.0 * tau) + 1e-9).floor() as i64;
        let count = (2 * k + 1) as usize;
        if count > max_points {
            return Err(Error::DimensionTooLarge { dim: count, limit: max_points });
        }
        let points = (-k..=k).map(|j| 2.0 * tau * j as f64).collect();
        Ok(Self { tau, half_width, points })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `(2I − S − S*)/(8τ²) + v(sin(τx)/τ)`, `S` the nearest-site shift without wrap.
    pub fn hamiltonian(&self, v: &PotentialSpec) -> HermitianMatrix {
        let n = self.points.len();
        let kin = 1.0 / (8.0 * self.tau * self.tau);
        let mut h = linalg::zeros(n);
        for (j, &x) in self.points.iter().enumerate() {
            h[(j, j)] = Complex64::new(2.0 * kin + v.eval((self.tau * x).sin() / self.tau), 0.0);
            if j + 1 < n {
                h[(j, j + 1)] = Complex64::new(-kin, 0.0);
                h[(j + 1, j)] = Complex64::new(-kin, 0.0);
            }
        }
        HermitianMatrix::new(h).expect("real symmetric")
    }
}
