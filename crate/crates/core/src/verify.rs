//! Identity suites: each measures the largest deviation of one algebraic identity over a
//! seeded random or exhaustive sample and compares it with a fixed tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{omega, AlgebraElement, GroupPoint, Sl2zMatrix};
use crate::error::Result;
use crate::generating::{coefficient_a, generating_sum, phi_scalar, recover_generator, RESONANCE_TOLERANCE};
use crate::grid::{GridModel, PotentialSpec};
use crate::linalg::{self, adjoint, eig_hermitian, hermitian_function, matmul, max_abs, max_abs_diff};
use crate::rep::{normalized_trace, MatrixRep};
use crate::sample::{self, random_element, random_point};
use crate::spectra::golden_numerator;
use crate::theta::Theta;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub anchor: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, anchor: &str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            max_deviation,
            tolerance,
            // NaN deviations fail
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub checks: Vec<IdentityCheck>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Negative control: the expected side of the commutation relation uses `conj(ω)`.
    pub corrupt_omega_sign: bool,
}

/// Two rational and three irrational-looking angles.
pub fn standard_thetas() -> Vec<Theta> {
    vec![
        Theta::rational(13, 34).expect("reduced"),
        Theta::rational(27, 64).expect("reduced"),
        Theta::real(1.0).expect("finite"),
        Theta::real(2.0 * PI * 0.618_033_988_749_894_9).expect("finite"),
        Theta::real(std::f64::consts::SQRT_2).expect("finite"),
    ]
}

fn omega_for(x: GroupPoint, y: GroupPoint, theta: &Theta, corrupt: bool) -> Complex64 {
    let w = omega(x, y, theta);
    if corrupt {
        w.conj()
    } else {
        w
    }
}

/// `d_x * d_y = ω(x,y) d_{x+y} + ω(y,x) d_{x−y}`, coefficientwise.
pub fn ccr_algebra(rng: &mut ChaCha8Rng, thetas: &[Theta], pairs: usize, radius: i64, corrupt: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for theta in thetas {
        for _ in 0..pairs {
            let (x, y) = (random_point(rng, radius), random_point(rng, radius));
            let lhs = AlgebraElement::d_generator(x, *theta)
                .convolve(&AlgebraElement::d_generator(y, *theta))
                .expect("same theta");
            let rhs = AlgebraElement::d_generator(x + y, *theta)
                .scale(omega_for(x, y, theta, corrupt))
                .add(&AlgebraElement::d_generator(x - y, *theta).scale(omega_for(y, x, theta, corrupt)))
                .expect("same theta");
            worst = worst.max(lhs.max_deviation(&rhs));
        }
    }
    worst
}

/// `D_x D_y = ω(x,y) D_{x+y} + ω(y,x) D_{x−y}` entrywise on the given representations.
pub fn ccr_matrix(rng: &mut ChaCha8Rng, reps: &[MatrixRep], pairs: usize, radius: i64, corrupt: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for rep in reps {
        let theta = rep.theta();
        for _ in 0..pairs {
            let (x, y) = (random_point(rng, radius), random_point(rng, radius));
            let lhs = matmul(rep.d_op(x).matrix(), rep.d_op(y).matrix());
            let rhs = linalg::combine(&[
                (omega_for(x, y, &theta, corrupt), rep.d_op(x + y).matrix()),
                (omega_for(y, x, &theta, corrupt), rep.d_op(x - y).matrix()),
            ]);
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    worst
}

/// Worst violation among `D_0 = 2I`, `D_{−x} = D_x` and `‖D_x‖ ≤ 2`, over every `x` in the box.
pub fn generator_identities(reps: &[MatrixRep], radius: i64) -> Result<f64> {
    let per_rep = reps
        .par_iter()
        .map(|rep| {
            let two = linalg::scale(&linalg::identity(rep.dim()), Complex64::new(2.0, 0.0));
            let mut worst = max_abs_diff(rep.d_op(GroupPoint::ORIGIN).matrix(), &two);
            for m in -radius..=radius {
                for n in -radius..=radius {
                    let x = GroupPoint::new(m, n);
                    let d = rep.d_op(x);
                    worst = worst.max(max_abs_diff(rep.d_op(-x).matrix(), d.matrix()));
                    worst = worst.max((d.norm()? - 2.0).max(0.0));
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per_rep.into_iter().fold(0.0, f64::max))
}

/// `π(f)π(g) = π(f*g)`, relative to the size of `π(f*g)`.
pub fn homomorphism(rng: &mut ChaCha8Rng, reps: &[MatrixRep], pairs: usize, support: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for rep in reps {
        let theta = rep.theta();
        for _ in 0..pairs {
            let n_f = rng.random_range(1..=support);
            let n_g = rng.random_range(1..=support);
            let f = random_element(rng, theta, n_f, 8);
            let g = random_element(rng, theta, n_g, 8);
            let lhs = matmul(&rep.represent(&f)?, &rep.represent(&g)?);
            let rhs = rep.represent(&f.convolve(&g)?)?;
            worst = worst.max(max_abs_diff(&lhs, &rhs) / max_abs(&rhs).max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// `W_x W_y = ω(x,y) W_{x+y}`.
pub fn weyl_relation(rng: &mut ChaCha8Rng, reps: &[MatrixRep], pairs: usize, radius: i64) -> f64 {
    let mut worst: f64 = 0.0;
    for rep in reps {
        let theta = rep.theta();
        for _ in 0..pairs {
            let (x, y) = (random_point(rng, radius), random_point(rng, radius));
            let lhs = matmul(&rep.weyl(x), &rep.weyl(y));
            let rhs = linalg::scale(&rep.weyl(x + y), omega(x, y, &theta));
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    worst
}

/// `J W_x J* = W_{−x}` over every `x` in the box; representations must be untwisted.
pub fn parity_relation(reps: &[MatrixRep], radius: i64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for rep in reps {
        let j = rep.parity()?;
        let jt = adjoint(&j);
        for m in -radius..=radius {
            for n in -radius..=radius {
                let x = GroupPoint::new(m, n);
                let conj = matmul(&matmul(&j, &rep.weyl(x)), &jt);
                worst = worst.max(max_abs_diff(&conj, &rep.weyl(-x)));
            }
        }
    }
    Ok(worst)
}

/// `|tr(W_x)/q|` for every `x ≢ 0 mod q` in the box.
pub fn trace_vanishing(reps: &[MatrixRep], radius: i64) -> f64 {
    let mut worst: f64 = 0.0;
    for rep in reps {
        let q = rep.q();
        for m in -radius..=radius {
            for n in -radius..=radius {
                if m.rem_euclid(q) == 0 && n.rem_euclid(q) == 0 {
                    continue;
                }
                worst = worst.max(normalized_trace(&rep.weyl(GroupPoint::new(m, n))).norm());
            }
        }
    }
    worst
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Sl2zMatrix {
    let gens = [[1, 1, 0, 1], [1, 0, 1, 1], [0, -1, 1, 0], [0, 1, 1, 0]];
    let mut a = [1i64, 0, 0, 1];
    for _ in 0..rng.random_range(0..6) {
        let b = gens[rng.random_range(0..gens.len())];
        a = [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ];
    }
    Sl2zMatrix::new(a[0], a[1], a[2], a[3]).expect("product of unimodular generators")
}

/// `α(f*g) = α(f)*α(g)` when `det α = 1` and `α(g)*α(f)` when `det α = −1`; also reports any
/// change of ℓ¹ norm.
pub fn sl2z_action(rng: &mut ChaCha8Rng, thetas: &[Theta], pairs: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for theta in thetas {
        for _ in 0..pairs {
            let alpha = random_unimodular(rng);
            let f = random_element(rng, *theta, 6, 6);
            let g = random_element(rng, *theta, 6, 6);
            let (fa, ga) = (f.sl2z_act(&alpha), g.sl2z_act(&alpha));
            let pushed = f.convolve(&g).expect("same theta").sl2z_act(&alpha);
            let expected = if alpha.det() == 1 { fa.convolve(&ga) } else { ga.convolve(&fa) }.expect("same theta");
            worst = worst.max(pushed.max_deviation(&expected));
            worst = worst.max((fa.l1_norm() - f.l1_norm()).abs());
        }
    }
    worst
}

/// Operator norm of `π(F_M(s,t)) − 2φ(s, D_(1,0)) φ(t, D_(0,1))` on the untwisted
/// representation at `p/q`.
pub fn generating_identity(p: i64, q: i64, s: f64, t: f64, cutoff: u32) -> Result<f64> {
    let rep = MatrixRep::untwisted(p, q)?;
    let sum = generating_sum(s, t, rep.theta(), cutoff)?;
    let lhs = rep.represent(&sum.element)?;
    let phi = |u: f64| move |x: f64| phi_scalar(u, x.clamp(-2.0, 2.0)).expect("|u| < 1 and |x| <= 2");
    let fq = hermitian_function(&rep.d_op(GroupPoint::new(1, 0)), phi(s))?;
    let fp = hermitian_function(&rep.d_op(GroupPoint::new(0, 1)), phi(t))?;
    let rhs = linalg::scale(&matmul(&fq, &fp), Complex64::new(2.0, 0.0));
    linalg::operator_norm(&linalg::sub(&lhs, &rhs))
}

/// Recovers `d_(p,q)` from `A_pq` and `A_pq*` for random nonresonant `(p, q)`; returns the worst
/// coefficient error and the number of pairs tried.
pub fn generator_recovery(rng: &mut ChaCha8Rng, theta: Theta, count: usize) -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < count {
        let (p, q) = (rng.random_range(1..=12), rng.random_range(1..=12));
        if (theta.phase(p * q)).im.abs() <= RESONANCE_TOLERANCE {
            continue;
        }
        let a = coefficient_a(p, q, theta)?;
        let d = recover_generator(p, q, &a, &a.involution(), theta)?;
        worst = worst.max(d.max_deviation(&AlgebraElement::d_generator(GroupPoint::new(p, q), theta)));
        done += 1;
    }
    Ok((worst, done))
}

/// Worst deviation among the intertwiner identities: unitarity, `WU_sW* = e^{iλs}U_{−s}`,
/// `WV_tW* = e^{iλt}V_{−t}`, `e^{iλτ} = i`, `WQ_τW* = Q̃_τ`, `WP_τW* = P̃_τ`, and equal sorted
/// spectra of the sine and cosine pairs.
pub fn intertwiner_identities(grid: &GridModel) -> Result<f64> {
    let w = grid.intertwiner()?;
    let wt = adjoint(&w);
    let conj = |m: &linalg::CMatrix| matmul(&matmul(&w, m), &wt);
    let lambda = grid.lambda();
    let tau = grid.tau();
    let mut worst = linalg::unitarity_defect(&w);
    worst = worst.max((Complex64::cis(lambda * tau) - Complex64::i()).norm());
    for a in [1i64, 2, 3] {
        let s = a as f64 * tau;
        let phase = Complex64::cis(lambda * s);
        let u = conj(&grid.u_steps(a));
        worst = worst.max(max_abs_diff(&u, &linalg::scale(&grid.u_steps(-a), phase)));
        let v = conj(&grid.v_steps(a));
        worst = worst.max(max_abs_diff(&v, &linalg::scale(&grid.v_steps(-a), phase)));
    }
    let (qc, pc) = grid.cosine_pair();
    let (qs, ps) = (grid.q_tau(), grid.p_tau());
    worst = worst.max(max_abs_diff(&conj(qs.matrix()), qc.matrix()));
    worst = worst.max(max_abs_diff(&conj(ps.matrix()), pc.matrix()));
    for (a, b) in [(&qs, &qc), (&ps, &pc)] {
        let (ea, eb) = (eig_hermitian(a)?, eig_hermitian(b)?);
        let gap = ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst = worst.max(gap);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionDeviation {
    /// `max |H_τ − (μI + λ_aff M₂)|·τ²`.
    pub operator: f64,
    /// `max_i |E_i(H_τ) − (μ + λ_aff E(M₂))_i| / ‖H_τ‖` over sorted spectra.
    pub spectral: f64,
    /// `|ṼŨ − e^{i4τ²}ŨṼ|` entrywise.
    pub commutation: f64,
}

/// Compares `H_τ` for `v = cx²/2` with its almost Mathieu image by two independent eigensolves.
pub fn reduction_identity(grid: &GridModel, c: f64) -> Result<ReductionDeviation> {
    let v = PotentialSpec::harmonic(c)?;
    let h = grid.hamiltonian(&v);
    let red = grid.almost_mathieu_reduction(&v)?;
    let tau2 = grid.tau() * grid.tau();
    let operator = max_abs_diff(h.matrix(), &red.affine_image()) * tau2;
    let (eh, em) = rayon::join(|| eig_hermitian(&h), || eig_hermitian(&red.m2));
    let (eh, em) = (eh?, em?);
    let mut mapped: Vec<f64> = em.iter().map(|e| red.offset + red.scale * e).collect();
    mapped.sort_by(f64::total_cmp);
    let norm = eh.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let spectral = eh.iter().zip(&mapped).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / norm;
    let vu = matmul(&red.v_tilde, &red.u_tilde);
    let uv = linalg::scale(&matmul(&red.u_tilde, &red.v_tilde), red.commutation_phase);
    let commutation = max_abs_diff(&vu, &uv);
    Ok(ReductionDeviation { operator, spectral, commutation })
}

/// One representation per denominator, with the golden numerator and optional twist.
pub fn golden_reps(qs: impl IntoIterator<Item = i64>, twist: (f64, f64)) -> Result<Vec<MatrixRep>> {
    qs.into_iter()
        .map(|q| MatrixRep::clock_shift(golden_numerator(q), q, twist.0, twist.1))
        .collect()
}

/// Runs every suite at sizes meant for interactive use.
pub fn run_all(opts: VerifyOptions) -> Result<VerifyReport> {
    let mut rng = sample::rng(opts.seed);
    let thetas = standard_thetas();
    let matrix_reps: Vec<MatrixRep> = vec![
        MatrixRep::clock_shift(13, 34, 0.3, 1.7)?,
        MatrixRep::untwisted(27, 64)?,
    ];
    let untwisted = golden_reps([2, 5, 13, 34, 64], (0.0, 0.0))?;
    let twisted = golden_reps([3, 8, 21, 55], (0.9, 2.2))?;
    let all_reps: Vec<MatrixRep> = untwisted.iter().chain(&twisted).cloned().collect();
    let hom_reps = golden_reps([5, 13, 34, 64], (0.0, 0.0))?;
    let recovery_theta = Theta::real(1.0)?;
    let grid = GridModel::build(256, 1, 4)?;
    let am_grid = GridModel::build(128, 1, 1)?;

    let mut checks = vec![
        IdentityCheck::new(
            "ccr_relation_algebra",
            "d_x*d_y = w(x,y) d_{x+y} + w(y,x) d_{x-y}",
            ccr_algebra(&mut rng, &thetas, 200, 8, opts.corrupt_omega_sign),
            1e-13,
        ),
        IdentityCheck::new(
            "ccr_relation_matrix",
            "D_x D_y = w(x,y) D_{x+y} + w(y,x) D_{x-y}",
            ccr_matrix(&mut rng, &matrix_reps, 100, 8, opts.corrupt_omega_sign),
            1e-12,
        ),
        IdentityCheck::new(
            "generator_identities",
            "D_0 = 2I, D_{-x} = D_x, ||D_x|| <= 2",
            generator_identities(&all_reps, 4)?,
            1e-9,
        ),
        IdentityCheck::new(
            "representation_homomorphism",
            "pi(f) pi(g) = pi(f*g)",
            homomorphism(&mut rng, &hom_reps, 10, 10)?,
            1e-10,
        ),
        IdentityCheck::new(
            "weyl_relation",
            "W_x W_y = w(x,y) W_{x+y}",
            weyl_relation(&mut rng, &all_reps, 50, 8),
            1e-12,
        ),
        IdentityCheck::new("parity", "J W_x J* = W_{-x}", parity_relation(&untwisted, 8)?, 1e-12),
        IdentityCheck::new("trace_vanishing", "tr(W_x)/q = 0 for x != 0 mod q", trace_vanishing(&untwisted, 8), 1e-12),
        IdentityCheck::new(
            "sl2z_action",
            "a(f*g) = a(f)*a(g) if det a = 1, a(g)*a(f) if det a = -1",
            sl2z_action(&mut rng, &thetas, 40),
            1e-13,
        ),
        IdentityCheck::new(
            "generating_function",
            "sum s^|m| t^|n| e^{-imn theta/2} D_(m,n) = 2 phi(s,Q) phi(t,P)",
            generating_identity(1, 89, 0.5, 0.5, 60)?,
            1e-8,
        ),
        IdentityCheck::new(
            "generator_recovery",
            "d_(p,q) from A_pq and A_pq*",
            generator_recovery(&mut rng, recovery_theta, 50)?.0,
            1e-12,
        ),
        IdentityCheck::new(
            "intertwiner",
            "W U_s W* = e^{i lambda s} U_{-s}, W V_t W* = e^{i lambda t} V_{-t}, e^{i lambda tau} = i",
            intertwiner_identities(&grid)?,
            1e-10,
        ),
    ];
    let mut reduction = ReductionDeviation { operator: 0.0, spectral: 0.0, commutation: 0.0 };
    for c in [0.5, 1.0, 2.0] {
        let dev = reduction_identity(&am_grid, c)?;
        reduction.operator = reduction.operator.max(dev.operator);
        reduction.spectral = reduction.spectral.max(dev.spectral);
        reduction.commutation = reduction.commutation.max(dev.commutation);
    }
    checks.extend([
        IdentityCheck::new("almost_mathieu_operator", "H_tau = mu I + lambda M_2 (entries times tau^2)", reduction.operator, 1e-12),
        IdentityCheck::new("almost_mathieu_spectrum", "sigma(H_tau) = mu + lambda sigma(M_2)", reduction.spectral, 1e-9),
        IdentityCheck::new("almost_mathieu_commutation", "V U = e^{i 4 tau^2} U V", reduction.commutation, 1e-13),
    ]);
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    Ok(VerifyReport { seed: opts.seed, passed: first_failure.is_none(), first_failure, checks })
}
