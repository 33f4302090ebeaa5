//! Chebyshev witnesses showing that point evaluation at `λ ∈ (−1, 1)` is unbounded with
//! respect to the sup norm on `X = [−2, −1] ∪ [1, 2]`.
//!
//! `u(x) = (2x² − 5)/3` maps `X` onto `[−1, 1]`, so `p_n = T_n ∘ u` has sup 1 on `X`, while
//! `|u(λ)| > 1` makes `|p_n(λ)|` grow like `ρ(λ)ⁿ/2` with `ρ = |u| + sqrt(u² − 1)`.

use crate::error::{invalid, Result};

/// Number of sample points per component of `X` used for `sup_X`.
pub const SAMPLES_PER_COMPONENT: usize = 5000;

/// `(2x² − 5)/3`.
pub fn witness_map(x: f64) -> f64 {
    (2.0 * x * x - 5.0) / 3.0
}

/// `T_n(u)` by the three-term recurrence.
pub fn chebyshev(n: u32, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * u * cur - prev);
    }
    cur
}

/// `ρ = |u| + sqrt(u² − 1)` for `|u| ≥ 1`.
pub fn growth_base(u: f64) -> f64 {
    u.abs() + (u * u - 1.0).max(0.0).sqrt()
}

/// Sample points covering both components of `X`, endpoints included.
pub fn sample_x(per_component: usize) -> Vec<f64> {
    let step = 1.0 / (per_component - 1) as f64;
    (0..per_component)
        .map(|i| 1.0 + i as f64 * step)
        .flat_map(|x| [x, -x])
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub lambda: f64,
    pub degree: u32,
    pub sup_x: f64,
    pub value_at_lambda: f64,
    pub ratio: f64,
    /// `|p_n(λ)/p_{n−1}(λ)|`, which tends to `ρ(λ)`.
    pub growth_base: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.abs() < 1.0) {
        return Err(invalid(format!(
            "witness needs |lambda| < 1, got {lambda}; there u(lambda) lies in [-1, 1]"
        )));
    }
    Ok(())
}

pub fn chebyshev_witness(degree: u32, lambda: f64) -> Result<WitnessReport> {
    if degree == 0 {
        return Err(invalid("witness degree must be at least 1"));
    }
    check_lambda(lambda)?;
    let sup_x = sample_x(SAMPLES_PER_COMPONENT)
        .into_iter()
        .map(|x| chebyshev(degree, witness_map(x)).abs())
        .fold(0.0, f64::max);
    let u = witness_map(lambda);
    let value = chebyshev(degree, u);
    let previous = chebyshev(degree - 1, u);
    Ok(WitnessReport {
        lambda,
        degree,
        sup_x,
        value_at_lambda: value,
        ratio: value.abs() / sup_x,
        growth_base: (value / previous).abs(),
    })
}

#[derive(Debug, Clone)]
pub struct ExtensionGapReport {
    pub lambda: f64,
    pub rho: f64,
    pub rows: Vec<WitnessReport>,
    pub interpretation: String,
}

/// Witnesses for degrees `1..=n_max`.
pub fn extension_gap_report(lambda: f64, n_max: u32) -> Result<ExtensionGapReport> {
    check_lambda(lambda)?;
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let rows = (1..=n_max)
        .map(|n| chebyshev_witness(n, lambda))
        .collect::<Result<Vec<_>>>()?;
    let rho = growth_base(witness_map(lambda));
    let last = rows.last().expect("n_max >= 1");
    let interpretation = format!(
        "a positive extension of f -> f({lambda}) to C(X) would force |p_n({lambda})| <= sup_X |p_n|; \
         at n = {} the ratio is {:.6e} and grows geometrically with base {rho:.12}",
        last.degree, last.ratio
    );
    Ok(ExtensionGapReport { lambda, rho, rows, interpretation })
}

/// `n,sup_X,value,ratio`.
pub fn write_witness_csv<W: std::io::Write>(mut w: W, report: &ExtensionGapReport) -> std::io::Result<()> {
    writeln!(w, "n,sup_X,value,ratio")?;
    for r in &report.rows {
        writeln!(w, "{},{},{},{}", r.degree, r.sup_x, r.value_at_lambda, r.ratio)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form: `cos(n·acos u)` inside, `±cosh(n·acosh|u|)` outside.
    fn chebyshev_closed(n: u32, u: f64) -> f64 {
        if u.abs() <= 1.0 {
            (n as f64 * u.acos()).cos()
        } else {
            let s = if u < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            s * (n as f64 * u.abs().acosh()).cosh()
        }
    }

    #[test]
    fn first_degree_at_zero() {
        let r = chebyshev_witness(1, 0.0).unwrap();
        assert!((r.value_at_lambda + 5.0 / 3.0).abs() < 1e-15);
        assert!((growth_base(witness_map(0.0)) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for &u in &[-1.6, -1.1, -0.3, 0.0, 0.7, 1.0, 1.4] {
            for n in 0..30 {
                let a = chebyshev(n, u);
                let b = chebyshev_closed(n, u);
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "n={n} u={u}");
            }
        }
    }

    #[test]
    fn recurrence_consistency_along_path() {
        let u = witness_map(0.3);
        for n in 1..30 {
            let lhs = chebyshev(n + 1, u);
            let rhs = 2.0 * u * chebyshev(n, u) - chebyshev(n - 1, u);
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs());
        }
    }

    #[test]
    fn map_covers_unit_interval() {
        let xs = sample_x(SAMPLES_PER_COMPONENT);
        let us: Vec<f64> = xs.iter().map(|&x| witness_map(x)).collect();
        let lo = us.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoints_have_unit_modulus() {
        for x in [1.0, -1.0, 2.0, -2.0] {
            for n in 1..12 {
                assert!((chebyshev(n, witness_map(x)).abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_example() {
        let u = witness_map(0.9);
        assert!((u - (1.62 - 5.0) / 3.0).abs() < 1e-15);
        let report = extension_gap_report(0.9, 5).unwrap();
        assert!((report.rho - (u.abs() + (u * u - 1.0).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn ratios_increase() {
        let report = extension_gap_report(0.0, 30).unwrap();
        assert!(report.rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
        assert!(report.rows.iter().all(|r| r.sup_x <= 1.0 + 1e-9));
    }

    #[test]
    fn naive_log_rate_lags_by_log_two() {
        // log(ratio_n)/n = log ρ + log((1 + ρ^{-2n})/2)/n; the halving correction removes the lag
        let report = extension_gap_report(0.0, 25).unwrap();
        let r = &report.rows[24];
        let naive = r.ratio.ln() / 25.0;
        let corrected = (2.0 * r.ratio).ln() / 25.0;
        assert!((naive - 3f64.ln() + 2f64.ln() / 25.0).abs() < 1e-10);
        assert!((corrected - 3f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn rejects_outside_gap() {
        assert!(chebyshev_witness(3, 1.0).is_err());
        assert!(chebyshev_witness(3, -1.5).is_err());
        assert!(chebyshev_witness(0, 0.0).is_err());
        assert!(extension_gap_report(0.0, 0).is_err());
    }
}
