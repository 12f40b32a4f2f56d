//! Geometric measurements of the curve `Γ_n = (Re F_n, Im F_n)`.
//!
//! Every measurement is taken on the standard sample grid and, where possible,
//! turned into a certified enclosure using the exact sup norm of `F_n'`: a
//! curve point is never farther than `(π/M)·Σ p·v_p` from its nearest sample.

pub mod hull;
pub mod raster;

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::eval::{Curve, CurveSamples, DerivativeOrder, Method};
use crate::primes::{CoefficientTable, PrimeSieve};
use crate::spectrum::SpectralSummary;

/// Largest grid the arc-length refinement will try.
pub const ARC_LENGTH_SAMPLE_CAP: usize = 1 << 24;

/// A curve together with its exact spectral summary.
#[derive(Debug, Clone)]
pub struct MeasuredCurve {
    pub curve: Curve,
    pub summary: SpectralSummary,
}

impl MeasuredCurve {
    pub fn new(n: u64) -> Self {
        let table = PrimeSieve::new(n).coefficient_table(n);
        let summary = SpectralSummary::from_table(&table);
        MeasuredCurve {
            curve: Curve::from_table(table),
            summary,
        }
    }

    pub fn n(&self) -> u64 {
        self.curve.n()
    }

    /// `Σ p^k·v_p` as `f64`.
    pub fn sup(&self, order: DerivativeOrder) -> f64 {
        self.summary
            .lin_moment(order.as_u32())
            .and_then(ToPrimitive::to_f64)
            .unwrap_or(f64::INFINITY)
    }

    /// Grid samples of `F_n^{(order)}`, spectral when `M > n` and direct
    /// otherwise. The samples at `t = −π` (`j = 0`) and, for even `M`, at
    /// `t = 0` (`j = M/2`) are replaced by their exact integer values.
    pub fn samples(&self, m: usize, order: DerivativeOrder) -> Result<CurveSamples> {
        let method = if m as u128 > self.n() as u128 {
            Method::Spectral
        } else {
            Method::Direct
        };
        let mut samples = self.curve.sample(m, order, method)?;
        let (at_minus_pi, at_zero) = anchor_values(self.curve.table(), order);
        samples.values[0] = at_minus_pi;
        if m.is_multiple_of(2) {
            samples.values[m / 2] = at_zero;
        }
        Ok(samples)
    }
}

/// `F_n^{(k)}(−π)` and `F_n^{(k)}(0)`, both `i^k` times an integer.
fn anchor_values(table: &CoefficientTable, order: DerivativeOrder) -> (Complex64, Complex64) {
    let k = order.as_u32();
    let (mut alternating, mut plain) = (0i128, 0i128);
    for e in table.iter() {
        let term = (e.p as i128).pow(k) * e.v as i128;
        plain += term;
        alternating += if e.p % 2 == 0 { term } else { -term };
    }
    let unit = match order {
        DerivativeOrder::Value => Complex64::new(1.0, 0.0),
        DerivativeOrder::First => Complex64::new(0.0, 1.0),
        DerivativeOrder::Second => Complex64::new(-1.0, 0.0),
    };
    (unit * alternating as f64, unit * plain as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthResult {
    pub value: f64,
    pub samples_used: usize,
    /// Relative change between the last two grid levels.
    pub est_rel_error: f64,
}

/// A closed interval `[lo, hi]` known to contain the measured quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub lo: f64,
    pub hi: f64,
}

impl IntervalEstimate {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult {
    pub epsilon: f64,
    /// Distinct grid cells met by the closed sample polyline.
    pub grid_count: usize,
    /// `polyline_diameter / (√2·ε)`.
    pub theorem_floor: f64,
    pub polyline_diameter: f64,
    pub samples_used: usize,
    /// Sample spacing along the curve may exceed `ε` (`M < 2π·Σ p·v_p / ε`).
    pub undersampled: bool,
}

/// Periodic rectangle rule for `∫|F_n'|`, doubling `M` from `max(2n + 2, 64)`
/// until two successive values agree to `rel_tol`.
///
/// Hitting [`ARC_LENGTH_SAMPLE_CAP`] first yields
/// [`Error::ConvergenceCap`] carrying the last estimate.
pub fn arc_length(n: u64, rel_tol: f64) -> Result<LengthResult> {
    if rel_tol.is_nan() || rel_tol < 1e-12 {
        return Err(domain("arc_length", "rel_tol >= 1e-12", rel_tol));
    }
    if n < 1 {
        return Err(domain("arc_length", "n >= 1", n));
    }
    arc_length_of(&Curve::new(n), rel_tol)
}

pub fn arc_length_of(curve: &Curve, rel_tol: f64) -> Result<LengthResult> {
    arc_length_capped(curve, rel_tol, ARC_LENGTH_SAMPLE_CAP)
}

/// [`arc_length_of`] with an explicit sample cap.
pub fn arc_length_capped(curve: &Curve, rel_tol: f64, cap: usize) -> Result<LengthResult> {
    let start = usize::try_from(2 * curve.n() + 2)
        .unwrap_or(usize::MAX)
        .max(64);
    let mut m = start;
    let mut previous: Option<f64> = None;
    loop {
        let samples = curve.sample(m, DerivativeOrder::First, Method::Spectral)?;
        let value = TAU / m as f64 * samples.values.iter().map(|z| z.norm()).sum::<f64>();
        let change = match previous {
            Some(p) if value == p => 0.0,
            Some(p) => (value - p).abs() / value.abs().max(p.abs()),
            None => f64::INFINITY,
        };
        let result = LengthResult {
            value,
            samples_used: m,
            est_rel_error: change,
        };
        if change < rel_tol {
            return Ok(result);
        }
        match m.checked_mul(2) {
            Some(next) if next <= cap => {
                previous = Some(value);
                m = next;
            }
            _ => return Err(Error::ConvergenceCap { result }),
        }
    }
}

/// Diameter of `Γ_n` bracketed from `M` samples: `lo` is the largest sampled
/// pairwise distance, `hi = lo + 2π·Σ p·v_p / M`.
pub fn diameter(n: u64, m: usize) -> Result<IntervalEstimate> {
    if m < 2 {
        return Err(domain("diameter", "samples >= 2", m));
    }
    diameter_of(&MeasuredCurve::new(n), m)
}

pub fn diameter_of(curve: &MeasuredCurve, m: usize) -> Result<IntervalEstimate> {
    let samples = curve.samples(m, DerivativeOrder::Value)?;
    let lo = hull::diameter(&samples.values);
    let slack = TAU * curve.sup(DerivativeOrder::First) / m as f64;
    Ok(IntervalEstimate { lo, hi: lo + slack })
}

/// Grid cells of side `epsilon` met by the closed polyline through `M` samples.
pub fn box_count(n: u64, epsilon: f64, m: usize) -> Result<CoverResult> {
    box_count_of(&MeasuredCurve::new(n), epsilon, m)
}

pub fn box_count_of(curve: &MeasuredCurve, epsilon: f64, m: usize) -> Result<CoverResult> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(domain("box_count", "epsilon > 0", epsilon));
    }
    if m < 2 {
        return Err(domain("box_count", "samples >= 2", m));
    }
    let samples = curve.samples(m, DerivativeOrder::Value)?;
    let cells = raster::rasterize_closed_polyline(&samples.values, epsilon);
    let polyline_diameter = hull::diameter(&samples.values);
    Ok(CoverResult {
        epsilon,
        grid_count: cells.len(),
        theorem_floor: polyline_diameter / (SQRT_2 * epsilon),
        polyline_diameter,
        samples_used: m,
        undersampled: (m as f64) < recommended_samples(curve, epsilon),
    })
}

/// `2π·Σ p·v_p / ε`: enough samples that consecutive ones are at most `ε` apart.
pub fn recommended_samples(curve: &MeasuredCurve, epsilon: f64) -> f64 {
    TAU * curve.sup(DerivativeOrder::First) / epsilon
}

/// `‖F_n^{(order)}‖_∞` bracketed by the sampled maximum and the exact
/// coefficient sum (attained at `t = 0`).
pub fn sup_norm(n: u64, order: DerivativeOrder, m: usize) -> Result<IntervalEstimate> {
    sup_norm_of(&MeasuredCurve::new(n), order, m)
}

pub fn sup_norm_of(curve: &MeasuredCurve, order: DerivativeOrder, m: usize) -> Result<IntervalEstimate> {
    if m < 2 {
        return Err(domain("sup_norm", "samples >= 2", m));
    }
    let samples = curve.samples(m, order)?;
    let hi = curve.sup(order);
    let sampled = samples.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(IntervalEstimate {
        lo: sampled.min(hi),
        hi,
    })
}
