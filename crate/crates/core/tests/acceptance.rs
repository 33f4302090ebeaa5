//! Acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! Run with `cargo test -p ccr-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccr_core::algebra::GroupPoint;
use ccr_core::grid::{GridModel, PotentialSpec, TruncatedLattice};
use ccr_core::linalg::eig_hermitian;
use ccr_core::rep::MatrixRep;
use ccr_core::sample;
use ccr_core::spectra::band_spectrum;
use ccr_core::theta::Theta;
use ccr_core::verify::{
    ccr_algebra, ccr_matrix, generating_identity, generator_identities, generator_recovery, golden_reps,
    homomorphism, intertwiner_identities, parity_relation, reduction_identity, standard_thetas, trace_vanishing,
    weyl_relation,
};
use ccr_core::witness::{chebyshev, chebyshev_witness, witness_map};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    let mut rng = sample::rng(SEED);
    let algebra = ccr_algebra(&mut rng, &standard_thetas(), 200, 8, false);
    let reps = [
        MatrixRep::untwisted(13, 34).unwrap(),
        MatrixRep::clock_shift(13, 34, 0.7, 2.9).unwrap(),
        MatrixRep::untwisted(27, 64).unwrap(),
        MatrixRep::clock_shift(27, 64, 1.3, 0.4).unwrap(),
    ];
    let matrix = ccr_matrix(&mut rng, &reps, 200, 8, false);
    check(
        algebra <= 1e-13 && matrix <= 1e-12,
        format!("algebra dev {algebra:.3e} (tol 1e-13), matrix dev {matrix:.3e} (tol 1e-12)"),
    )
}

fn criterion_2() -> Outcome {
    let reps = golden_reps(1..=64, (0.0, 0.0)).unwrap();
    let dev = generator_identities(&reps, 8).unwrap();
    // D_0 = 2I and D_{-x} = D_x hold exactly; only the norm bound carries slack
    let exact = reps.iter().all(|rep| {
        let mut two = ccr_core::linalg::identity(rep.dim());
        for i in 0..rep.dim() {
            two[(i, i)] *= 2.0;
        }
        ccr_core::linalg::max_abs_diff(rep.d_op(GroupPoint::ORIGIN).matrix(), &two) == 0.0
            && (-8..=8).all(|m| {
                (-8..=8).all(|n| {
                    let x = GroupPoint::new(m, n);
                    ccr_core::linalg::max_abs_diff(rep.d_op(-x).matrix(), rep.d_op(x).matrix()) == 0.0
                })
            })
    });
    check(exact && dev <= 1e-9, format!("exact identities {exact}, worst norm excess {dev:.3e} (tol 1e-9)"))
}

fn criterion_3() -> Outcome {
    let mut rng = sample::rng(SEED + 3);
    let reps: Vec<MatrixRep> = [(2, 5), (5, 13), (13, 34), (27, 64)]
        .iter()
        .map(|&(p, q)| MatrixRep::untwisted(p, q).unwrap())
        .collect();
    let dev = homomorphism(&mut rng, &reps, 100, 10).unwrap();
    check(dev <= 1e-10, format!("relative dev {dev:.3e} (tol 1e-10)"))
}

fn criterion_4() -> Outcome {
    let mut rng = sample::rng(SEED + 4);
    let untwisted = golden_reps(1..=64, (0.0, 0.0)).unwrap();
    let twisted = golden_reps(1..=64, (0.5, 1.9)).unwrap();
    let weyl = weyl_relation(&mut rng, &untwisted, 40, 8).max(weyl_relation(&mut rng, &twisted, 40, 8));
    let parity = parity_relation(&untwisted, 8).unwrap();
    let trace = trace_vanishing(&untwisted, 8);
    check(
        weyl <= 1e-12 && parity <= 1e-12 && trace <= 1e-12,
        format!("weyl {weyl:.3e}, parity {parity:.3e}, trace {trace:.3e} (tol 1e-12)"),
    )
}

fn criterion_5() -> Outcome {
    let op = generating_identity(1, 89, 0.5, 0.5, 60).unwrap();
    let mut rng = sample::rng(SEED + 5);
    let (rec_real, n_real) = generator_recovery(&mut rng, Theta::real(1.0).unwrap(), 25).unwrap();
    let (rec_rat, n_rat) = generator_recovery(&mut rng, Theta::rational(13, 34).unwrap(), 25).unwrap();
    let rec = rec_real.max(rec_rat);
    check(
        op <= 1e-8 && rec <= 1e-12 && n_real + n_rat == 50,
        format!("operator-norm dev {op:.3e} (tol 1e-8), recovery dev {rec:.3e} over {} pairs (tol 1e-12)", n_real + n_rat),
    )
}

fn criterion_6() -> Outcome {
    let grid = GridModel::build(1024, 1, 4).unwrap();
    let dev = intertwiner_identities(&grid).unwrap();
    check(dev <= 1e-10, format!("N = 1024, k = 4: worst dev {dev:.3e} (tol 1e-10)"))
}

fn criterion_7() -> Outcome {
    let grid = GridModel::build(512, 1, 1).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        let dev = reduction_identity(&grid, c).unwrap();
        worst = worst.max(dev.spectral);
        parts.push(format!("c={c}: {:.3e}", dev.spectral));
    }
    check(worst <= 1e-9, format!("relative spectral dev {} (tol 1e-9)", parts.join(", ")))
}

fn lowest_levels(tau: f64) -> Vec<f64> {
    let lattice = TruncatedLattice::new(4096, 12.0, tau).unwrap();
    let h = lattice.hamiltonian(&PotentialSpec::harmonic(1.0).unwrap());
    eig_hermitian(&h).unwrap().into_iter().take(5).collect()
}

fn criterion_8() -> Outcome {
    let coarse = lowest_levels(0.1);
    let fine = lowest_levels(0.05);
    let errors: Vec<f64> = coarse.iter().enumerate().map(|(n, e)| (e - (n as f64 + 0.5)).abs()).collect();
    let levels_ok = errors.iter().all(|&e| e <= 1e-2);
    let reduction = errors[0] / (fine[0] - 0.5).abs();
    let errs: Vec<String> = errors.iter().map(|e| format!("{e:.4}")).collect();
    check(
        levels_ok && reduction >= 3.0,
        format!(
            "tau = 0.1 level errors [{}] (tol 1e-2); |E0 - 0.5| shrinks by {reduction:.2} when tau halves (need >= 3)",
            errs.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let half = band_spectrum(21, 34, 0.5, 16).unwrap().measure;
    let critical_34 = band_spectrum(21, 34, 1.0, 16).unwrap().measure;
    let critical_5 = band_spectrum(3, 5, 1.0, 16).unwrap().measure;
    let rel = (half - 2.0).abs() / 2.0;
    check(
        rel <= 0.15 && critical_34 < 0.5 * critical_5,
        format!("c=0.5 measure {half:.4} ({:.1}% from 2), c=1 measure {critical_34:.4} at q=34 vs {critical_5:.4} at q=5", rel * 100.0),
    )
}

fn criterion_10() -> Outcome {
    let w = chebyshev_witness(20, 0.0).unwrap();
    let u = witness_map(0.0);
    let step = (chebyshev(25, u) / chebyshev(24, u)).abs().ln();
    let gap = (step - 3f64.ln()).abs();
    check(
        w.sup_x <= 1.0 + 1e-9 && gap <= 1e-3,
        format!("sup_X |p_20| = {:.12}, log growth at n = 25 off log 3 by {gap:.3e} (tol 1e-3)", w.sup_x),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("discretized commutation relation", criterion_1, Duration::from_secs(10)),
        ("generator unit, parity and norm", criterion_2, Duration::from_secs(10)),
        ("representation homomorphism", criterion_3, Duration::from_secs(30)),
        ("Weyl relation, parity, trace", criterion_4, Duration::from_secs(10)),
        ("generating function", criterion_5, Duration::from_secs(30)),
        ("sine/cosine intertwiner", criterion_6, Duration::from_secs(60)),
        ("almost Mathieu reduction", criterion_7, Duration::from_secs(60)),
        ("oscillator continuum limit", criterion_8, Duration::from_secs(180)),
        ("spectrum measure", criterion_9, Duration::from_secs(120)),
        ("Chebyshev witness", criterion_10, Duration::from_secs(1)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = outcome.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<34} {}  {} [{:.2}s of {}s]",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
