//! Band spectra of the almost Mathieu family `M = U + U* + c(V + V*)` at rational flux.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::linalg::{self, eig_hermitian, HermitianMatrix};
use crate::rep::MatrixRep;
use crate::theta::gcd;

/// Largest denominator handled by the dense solver.
pub const MAX_DENSE_Q: i64 = 256;

/// Default phase lattice size per axis.
pub const DEFAULT_PHASES: usize = 16;

/// `(√5 − 1)/2`.
pub const GOLDEN_MEAN: f64 = 0.618_033_988_749_894_9;

/// How the boundary twists `(φ₁, φ₂)` are sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSampling {
    /// Uniform `n × n` lattice on `[0, 2π]²`, endpoints included.
    Lattice(usize),
    /// `φ₁, φ₂ ∈ {0, π/q}`. The spectrum depends on the twists only through `qφ₁` and `qφ₂`,
    /// so this pair of values reaches every band edge.
    BandEdges,
}

impl PhaseSampling {
    fn axis(&self, q: i64) -> Vec<f64> {
        match *self {
            PhaseSampling::Lattice(n) => (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect(),
            PhaseSampling::BandEdges => vec![0.0, PI / q as f64],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Band, tol: f64) -> bool {
        self.lo <= other.lo + tol && other.hi <= self.hi + tol
    }
}

#[derive(Debug, Clone)]
pub struct BandSpectrum {
    pub p: i64,
    pub q: i64,
    pub c: f64,
    /// Sampled `(φ₁, φ₂)`, row-major over the two axes.
    pub phases: Vec<(f64, f64)>,
    /// Ascending eigenvalues for each entry of `phases`.
    pub eigen_grid: Vec<Vec<f64>>,
    /// Band `i` spans the extremes of the `i`-th eigenvalue over all phases.
    pub bands: Vec<Band>,
    /// Length of the union of the bands.
    pub measure: f64,
}

impl BandSpectrum {
    pub fn flux(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// `M = U + U* + c(V + V*)` on the given representation.
pub fn almost_mathieu(rep: &MatrixRep, c: f64) -> HermitianMatrix {
    let one = Complex64::new(1.0, 0.0);
    let cc = Complex64::new(c, 0.0);
    let m = linalg::combine(&[
        (one, rep.u()),
        (one, &linalg::adjoint(rep.u())),
        (cc, rep.v()),
        (cc, &linalg::adjoint(rep.v())),
    ]);
    HermitianMatrix::new(m).expect("almost Mathieu operator is Hermitian")
}

/// Total length of a union of intervals.
pub fn union_measure(bands: &[Band]) -> f64 {
    let mut sorted: Vec<Band> = bands.to_vec();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut total = 0.0;
    let mut current: Option<Band> = None;
    for b in sorted {
        match current.as_mut() {
            Some(cur) if b.lo <= cur.hi => cur.hi = cur.hi.max(b.hi),
            Some(cur) => {
                total += cur.width();
                current = Some(b);
            }
            None => current = Some(b),
        }
    }
    total + current.map_or(0.0, |b| b.width())
}

/// Band spectrum over an `n_phase × n_phase` twist lattice.
pub fn band_spectrum(p: i64, q: i64, c: f64, n_phase: usize) -> Result<BandSpectrum> {
    band_spectrum_sampled(p, q, c, PhaseSampling::Lattice(n_phase))
}

pub fn band_spectrum_sampled(p: i64, q: i64, c: f64, sampling: PhaseSampling) -> Result<BandSpectrum> {
    if q < 1 {
        return Err(invalid(format!("q must be at least 1, got {q}")));
    }
    if q > MAX_DENSE_Q {
        return Err(crate::error::Error::DimensionTooLarge { dim: q as usize, limit: MAX_DENSE_Q as usize });
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(invalid(format!("coupling must be nonnegative, got {c}")));
    }
    if let PhaseSampling::Lattice(n) = sampling {
        if n < 2 {
            return Err(invalid(format!("phase lattice needs at least 2 points, got {n}")));
        }
    }
    MatrixRep::untwisted(p, q)?;

    let axis = sampling.axis(q);
    let phases: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
        .collect();
    let eigen_grid = phases
        .par_iter()
        .map(|&(phi1, phi2)| {
            let rep = MatrixRep::clock_shift(p, q, phi1, phi2)?;
            eig_hermitian(&almost_mathieu(&rep, c))
        })
        .collect::<Result<Vec<_>>>()?;

    let bands: Vec<Band> = (0..q as usize)
        .map(|i| {
            let (lo, hi) = eigen_grid
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), ev| (lo.min(ev[i]), hi.max(ev[i])));
            Band { lo, hi }
        })
        .collect();
    let measure = union_measure(&bands);
    Ok(BandSpectrum { p, q, c, phases, eigen_grid, bands, measure })
}

/// All reduced fractions `p/q`, `0 ≤ p < q ≤ q_max`, ordered by `q` then `p`.
pub fn reduced_fractions(q_max: i64) -> Vec<(i64, i64)> {
    (1..=q_max)
        .flat_map(|q| (0..q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
        .collect()
}

/// One band spectrum per reduced `p/q` with `q ≤ q_max`.
pub fn butterfly(q_max: i64, c: f64, n_phase: usize) -> Result<Vec<BandSpectrum>> {
    if q_max < 2 {
        return Err(invalid(format!("q_max must be at least 2, got {q_max}")));
    }
    reduced_fractions(q_max)
        .par_iter()
        .map(|&(p, q)| band_spectrum(p, q, c, n_phase))
        .collect()
}

/// `p,q,flux,band_lo,band_hi`, one row per band.
pub fn write_bands_csv<W: Write>(mut w: W, spectra: &[BandSpectrum]) -> io::Result<()> {
    writeln!(w, "p,q,flux,band_lo,band_hi")?;
    for s in spectra {
        for b in &s.bands {
            writeln!(w, "{},{},{},{},{}", s.p, s.q, s.flux(), b.lo, b.hi)?;
        }
    }
    Ok(())
}

/// `p,q,c,measure`, one row per spectrum.
pub fn write_measures_csv<W: Write>(mut w: W, spectra: &[BandSpectrum]) -> io::Result<()> {
    writeln!(w, "p,q,c,measure")?;
    for s in spectra {
        writeln!(w, "{},{},{},{}", s.p, s.q, s.c, s.measure)?;
    }
    Ok(())
}

/// The numerator closest to `q·(√5−1)/2` that is coprime to `q`.
pub fn golden_numerator(q: i64) -> i64 {
    if q == 1 {
        return 0;
    }
    let target = (q as f64 * GOLDEN_MEAN).round() as i64;
    (0..q)
        .flat_map(|d| [target - d, target + d])
        .find(|&p| (0..q).contains(&p) && gcd(p, q) == 1)
        .expect("1 is coprime to q")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendPoint {
    pub p: i64,
    pub q: i64,
    pub measure: f64,
}

#[derive(Debug, Clone)]
pub struct MeasureTrend {
    pub c: f64,
    pub points: Vec<TrendPoint>,
    /// Measures never increase along `q_list`.
    pub monotone_decreasing: bool,
}

/// Spectrum measures along golden-mean approximants, using exact band edges.
pub fn measure_trend(c: f64, q_list: &[i64]) -> Result<MeasureTrend> {
    let points = q_list
        .par_iter()
        .map(|&q| {
            let p = golden_numerator(q);
            let s = band_spectrum_sampled(p, q, c, PhaseSampling::BandEdges)?;
            Ok(TrendPoint { p, q, measure: s.measure })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone_decreasing = points.windows(2).all(|w| w[1].measure <= w[0].measure + 1e-12);
    Ok(MeasureTrend { c, points, monotone_decreasing })
}
