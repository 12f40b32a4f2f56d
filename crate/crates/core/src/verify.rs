//! Finite-`n` checks of the inequalities and identities behind the growth
//! results for `Γ_n`, and geometric sweeps over `n`.
//!
//! Each check compares two quantities produced by the other modules and
//! records both sides, so a failure can be read off the report directly.
//! Limits are never asserted; along a sweep the divergence claims are
//! represented by strict growth between values of `n` at least a factor two
//! apart.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::eval::{periodic_mean_square, DerivativeOrder, Method};
use crate::geometry::{self, hull, raster, MeasuredCurve};
use crate::primes::{valuation_within_bounds, PrimeFilter, PrimeSieve};
use crate::spectrum::{midrange_from_sieve, ChordMertensBound};

/// Relative tolerance for floating comparisons against exact values.
pub const FLOAT_REL_TOL: f64 = 1e-6;
/// Relative tolerance for the quadrature checks, where the rule is exact.
pub const EXACT_QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    ValuationBounds,
    Parseval1,
    Parseval2,
    Midrange,
    LengthChain,
    PaperSup,
    SupLower1,
    SupLower2,
    ChordIdentity,
    CoverFloor,
    ConnectedChain,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::ValuationBounds,
        CheckId::Parseval1,
        CheckId::Parseval2,
        CheckId::Midrange,
        CheckId::LengthChain,
        CheckId::PaperSup,
        CheckId::SupLower1,
        CheckId::SupLower2,
        CheckId::ChordIdentity,
        CheckId::CoverFloor,
        CheckId::ConnectedChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::ValuationBounds => "valuation_bounds",
            CheckId::Parseval1 => "parseval_1",
            CheckId::Parseval2 => "parseval_2",
            CheckId::Midrange => "midrange",
            CheckId::LengthChain => "length_chain",
            CheckId::PaperSup => "paper_sup",
            CheckId::SupLower1 => "sup_lower_1",
            CheckId::SupLower2 => "sup_lower_2",
            CheckId::ChordIdentity => "chord_identity",
            CheckId::CoverFloor => "cover_floor",
            CheckId::ConnectedChain => "connected_chain",
        }
    }

    /// Smallest `n` for which the check is defined.
    pub fn min_n(self) -> u64 {
        match self {
            CheckId::Midrange => 10,
            CheckId::LengthChain => 2,
            _ => 1,
        }
    }

    pub fn applies_to(self, n: u64) -> bool {
        n >= self.min_n()
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_owned()))
    }
}

/// One side of a checked comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Integer(BigInt),
    Real(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Integer(i) => i.to_f64().unwrap_or(f64::NAN),
            Quantity::Real(x) => *x,
        }
    }
}

impl From<BigUint> for Quantity {
    fn from(x: BigUint) -> Self {
        Quantity::Integer(x.into())
    }
}

impl From<u64> for Quantity {
    fn from(x: u64) -> Self {
        Quantity::Integer(x.into())
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Integer(i) => write!(f, "{i}"),
            Quantity::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: CheckId,
    pub n: u64,
    pub pass: bool,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} n={} lhs={} rhs={} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.n,
            self.lhs,
            self.rhs,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Cell side for the covering checks.
    pub epsilon: f64,
    /// Arc-length convergence tolerance.
    pub length_rel_tol: f64,
    /// Upper limit on samples for the covering checks.
    pub max_cover_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            epsilon: 1.0,
            length_rel_tol: 1e-8,
            max_cover_samples: 1 << 22,
        }
    }
}

struct CoverData {
    samples: usize,
    cells: std::collections::HashSet<raster::Cell>,
    pair: (num_complex::Complex64, num_complex::Complex64),
    diameter: f64,
    undersampled: bool,
}

/// All checks for one `n`, sharing the sieve, coefficients and polyline.
pub struct Verifier {
    n: u64,
    sieve: PrimeSieve,
    curve: MeasuredCurve,
    options: VerifyOptions,
    cover: OnceLock<Result<CoverData>>,
}

impl Verifier {
    pub fn new(n: u64) -> Self {
        Self::with_options(n, VerifyOptions::default())
    }

    pub fn with_options(n: u64, options: VerifyOptions) -> Self {
        let sieve = PrimeSieve::new(n);
        let table = sieve.coefficient_table(n);
        let curve = MeasuredCurve {
            summary: crate::spectrum::SpectralSummary::from_table(&table),
            curve: crate::eval::Curve::from_table(table),
        };
        Verifier {
            n,
            sieve,
            curve,
            options,
            cover: OnceLock::new(),
        }
    }

    pub fn run(&self, check: CheckId) -> Result<CheckReport> {
        let n = self.n;
        if !check.applies_to(n) {
            return Err(domain(check.name(), "n >= minimum for this check", n));
        }
        let s = &self.curve.summary;
        let report = |pass, lhs: Quantity, rhs: Quantity, detail: String| CheckReport {
            check,
            n,
            pass,
            lhs,
            rhs,
            detail,
        };

        Ok(match check {
            CheckId::ValuationBounds => {
                let table = self.curve.curve.table();
                let ok = table
                    .iter()
                    .filter(|e| valuation_within_bounds(e.p, n, e.v))
                    .count() as u64;
                let first_bad = table.iter().find(|e| !valuation_within_bounds(e.p, n, e.v));
                let detail = match first_bad {
                    None => "n/p - 1 <= v_p(n!) <= n/(p-1) for every prime p <= n".to_owned(),
                    Some(e) => format!("violated at p={} v={}", e.p, e.v),
                };
                report(ok == table.len() as u64, ok.into(), (table.len() as u64).into(), detail)
            }

            CheckId::Parseval1 | CheckId::Parseval2 => {
                let (order, moment) = if check == CheckId::Parseval1 {
                    (DerivativeOrder::First, &s.sq2)
                } else {
                    (DerivativeOrder::Second, &s.sq4)
                };
                let m = usize::try_from(2 * n + 8).expect("grid size");
                let samples = self.curve.curve.sample(m, order, Method::Spectral)?;
                let quad = periodic_mean_square(&samples);
                let exact = TAU * moment.to_f64().unwrap_or(f64::INFINITY);
                let pass = (quad - exact).abs() <= EXACT_QUADRATURE_TOL * exact;
                report(
                    pass,
                    quad.into(),
                    exact.into(),
                    format!("rectangle rule on M={m} vs 2*pi*sum p^{}v^2", 2 * order.as_u32()),
                )
            }

            CheckId::Midrange => {
                let entries = midrange_from_sieve(&self.sieve, n);
                let large: Vec<_> = entries.iter().filter(|e| e.square_exceeds_n).collect();
                let exact_two = large.iter().filter(|e| e.v == 2).count() as u64;
                let count = BigUint::from(entries.len());
                let n2 = BigUint::from(n).pow(2);
                let floor2 = BigUint::from(4u32) * &n2 * &count <= BigUint::from(9u32) * &s.sq2;
                let floor4 = BigUint::from(4u32) * &n2 * &n2 * &count <= BigUint::from(81u32) * &s.sq4;
                let flagged: Vec<u64> = entries.iter().filter(|e| e.is_flagged()).map(|e| e.p).collect();
                report(
                    exact_two == large.len() as u64 && floor2 && floor4,
                    exact_two.into(),
                    (large.len() as u64).into(),
                    format!(
                        "{} primes in (n/3, n/2], {} with p^2 > n; sum p^2v^2 >= 4(n/3)^2 count: {floor2}; \
                         sum p^4v^2 >= 4(n/3)^4 count: {floor4}; flagged: {flagged:?}",
                        entries.len(),
                        large.len()
                    ),
                )
            }

            CheckId::LengthChain => {
                let (length, note) = match geometry::arc_length_of(&self.curve.curve, self.options.length_rel_tol) {
                    Ok(r) => (r, ""),
                    Err(Error::ConvergenceCap { result }) => (result, " (sample cap reached)"),
                    Err(e) => return Err(e),
                };
                let bound = s.length_lower_bound()?;
                report(
                    length.value >= bound * (1.0 - FLOAT_REL_TOL),
                    length.value.into(),
                    bound.into(),
                    format!(
                        "L >= 2*pi*sum p^2v^2 / sum p v; M={} rel_change={:.2e}{note}",
                        length.samples_used, length.est_rel_error
                    ),
                )
            }

            CheckId::PaperSup => {
                let bound = BigUint::from(2u32) * n * self.sieve.count_up_to(n);
                report(
                    s.lin1 <= bound,
                    s.lin1.clone().into(),
                    bound.into(),
                    "sum p v_p <= 2 n pi(n)".to_owned(),
                )
            }

            CheckId::SupLower1 | CheckId::SupLower2 => {
                let (order, lin, sq) = if check == CheckId::SupLower1 {
                    (DerivativeOrder::First, &s.lin1, &s.sq2)
                } else {
                    (DerivativeOrder::Second, &s.lin2, &s.sq4)
                };
                // ‖f‖_∞ >= ‖f‖₂/√(2π)  ⇔  lin² >= sq
                let square = lin * lin;
                let m = sup_grid(n);
                let sampled = geometry::sup_norm_of(&self.curve, order, m)?;
                let attained = sampled.lo >= sampled.hi * (1.0 - FLOAT_REL_TOL);
                report(
                    square >= *sq && attained,
                    square.into(),
                    sq.clone().into(),
                    format!(
                        "sup^2 = (sum p^k v)^2 >= ||F^(k)||_2^2/(2 pi) = sum p^2k v^2; sampled sup on M={m}: [{}, {}]",
                        sampled.lo, sampled.hi
                    ),
                )
            }

            CheckId::ChordIdentity => {
                let at_zero = self.curve.curve.eval(0.0, DerivativeOrder::Value);
                let at_pi = self.curve.curve.eval(std::f64::consts::PI, DerivativeOrder::Value);
                let measured = (at_zero - at_pi).norm();
                let chord = s.chord.to_f64().unwrap_or(f64::INFINITY);
                let identity = (measured - chord).abs() <= 1e-9 * chord.max(1.0);
                let mertens = ChordMertensBound::compute(&self.sieve, n);
                report(
                    identity && mertens.holds(),
                    measured.into(),
                    s.chord.clone().into(),
                    format!(
                        "|F(0) - F(pi)| = 2 sum_odd v_p; 2 sum_odd v_p = {} >= 2(n sum_odd 1/p - #odd) = {:.6}: {}",
                        mertens.chord,
                        mertens.rhs(),
                        mertens.holds()
                    ),
                )
            }

            CheckId::CoverFloor => {
                let cover = self.cover()?;
                let eps = self.options.epsilon;
                let floor = cover.diameter / (SQRT_2 * eps);
                let chord_floor = s.chord.to_f64().unwrap_or(0.0) / (SQRT_2 * eps);
                let ratio = if n >= 3 {
                    format!("{:.6}", cover.diameter / (n as f64 * (n as f64).ln().ln()))
                } else {
                    "n/a".to_owned()
                };
                report(
                    cover.cells.len() as f64 >= floor,
                    (cover.cells.len() as u64).into(),
                    floor.into(),
                    format!(
                        "cells >= diam/(sqrt2 eps), eps={eps}, M={}{}; chord floor {:.6}; diam/(n loglog n) = {ratio}",
                        cover.samples,
                        if cover.undersampled { " (undersampled)" } else { "" },
                        chord_floor
                    ),
                )
            }

            CheckId::ConnectedChain => {
                let cover = self.cover()?;
                let eps = self.options.epsilon;
                let connected = raster::is_connected(&cover.cells);
                let from = raster::cell_of(cover.pair.0, eps);
                let to = raster::cell_of(cover.pair.1, eps);
                let chain = raster::chain_length(&cover.cells, from, to);
                let m = cover.cells.len();
                let k = chain.unwrap_or(usize::MAX);
                let reach = if chain.is_some() { k as f64 * SQRT_2 * eps } else { f64::INFINITY };
                report(
                    connected && k <= m && cover.diameter <= reach,
                    cover.diameter.into(),
                    reach.into(),
                    format!(
                        "diam <= k sqrt2 eps along a chain of k={} touching cells out of m={m}; connected: {connected}",
                        chain.map_or("none".to_owned(), |k| k.to_string())
                    ),
                )
            }
        })
    }

    /// Every check that applies to this `n`, in [`CheckId::ALL`] order.
    pub fn run_all(&self) -> Vec<Result<CheckReport>> {
        CheckId::ALL
            .into_iter()
            .filter(|c| c.applies_to(self.n))
            .map(|c| self.run(c))
            .collect()
    }

    fn cover(&self) -> Result<&CoverData> {
        self.cover
            .get_or_init(|| {
                let eps = self.options.epsilon;
                let wanted = geometry::recommended_samples(&self.curve, eps).ceil().max(64.0) as usize;
                let m = wanted
                    .max(2 * self.n as usize + 2)
                    .next_power_of_two()
                    .min(self.options.max_cover_samples.max(2));
                let samples = self.curve.samples(m, DerivativeOrder::Value)?;
                let cells = raster::rasterize_closed_polyline(&samples.values, eps);
                let (i, j, diameter) = hull::diameter_pair(&samples.values).unwrap_or((0, 0, 0.0));
                Ok(CoverData {
                    samples: m,
                    cells,
                    pair: (samples.values[i], samples.values[j]),
                    diameter,
                    undersampled: m < wanted,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// Even grid comfortably above the Nyquist size, so it contains `t = 0`.
fn sup_grid(n: u64) -> usize {
    (4 * n as usize + 4).next_power_of_two().max(64)
}

pub fn run_check(n: u64, check: CheckId) -> Result<CheckReport> {
    Verifier::new(n).run(check)
}

pub fn run_all(n: u64) -> Vec<Result<CheckReport>> {
    Verifier::new(n).run_all()
}

/// Measurements for one `n` in a growth sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: u64,
    pub length: f64,
    pub length_per_n: f64,
    /// `|F_n(0) − F_n(π)|`, an exact lower bound on the diameter.
    pub diam_lo: BigUint,
    /// `diam_lo / (n·log log n)`.
    pub diam_ratio: f64,
    pub sup1: BigUint,
    pub sup2: BigUint,
    /// `Σ p²·v_p²`, i.e. `‖F_n'‖²/(2π)`.
    pub l2sq_1: BigUint,
    /// `Σ p⁴·v_p²`.
    pub l2sq_2: BigUint,
    /// `Σ_{p<=n} 1/p − log log n`.
    pub mertens_gap: f64,
    /// `diam_lo / (√2·ε)`, the covering-number floor at the sweep's `ε`.
    pub cover_floor: f64,
}

/// A column that failed to grow strictly between two rows `n` and `n' >= 2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthViolation {
    pub column: &'static str,
    pub from_n: u64,
    pub to_n: u64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<(u64, Result<GrowthRow>)>,
    pub violations: Vec<GrowthViolation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.rows.iter().all(|(_, r)| r.is_ok())
    }
}

pub fn growth_row(n: u64, epsilon: f64, rel_tol: f64) -> Result<GrowthRow> {
    if n < 3 {
        return Err(domain("sweep", "n >= 3", n));
    }
    if rel_tol.is_nan() || rel_tol < 1e-12 {
        return Err(domain("sweep", "rel_tol >= 1e-12", rel_tol));
    }
    let sieve = PrimeSieve::new(n);
    let table = sieve.coefficient_table(n);
    let s = crate::spectrum::SpectralSummary::from_table(&table);
    let length = geometry::arc_length_of(&crate::eval::Curve::from_table(table), rel_tol)?.value;
    let nf = n as f64;
    let loglog = nf.ln().ln();
    let diam = s.chord.to_f64().unwrap_or(f64::INFINITY);
    Ok(GrowthRow {
        n,
        length,
        length_per_n: length / nf,
        diam_ratio: diam / (nf * loglog),
        cover_floor: diam / (SQRT_2 * epsilon),
        mertens_gap: sieve.reciprocal_sum(n, PrimeFilter::All) - loglog,
        diam_lo: s.chord,
        sup1: s.lin1,
        sup2: s.lin2,
        l2sq_1: s.sq2,
        l2sq_2: s.sq4,
    })
}

/// Growth measurements over ascending `n_values`, each `>= 3`.
///
/// Row failures are kept in place and the sweep continues. Between
/// consecutive successful rows whose `n` differ by at least a factor two,
/// every growth column must increase strictly; failures are collected in
/// [`SweepReport::violations`].
pub fn sweep(n_values: &[u64], epsilon: f64, rel_tol: f64) -> Result<SweepReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(domain("sweep", "epsilon > 0", epsilon));
    }
    if let Some(&n) = n_values.iter().find(|&&n| n < 3) {
        return Err(domain("sweep", "every n >= 3", n));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("sweep", "n values strictly ascending", format!("{n_values:?}")));
    }

    let rows: Vec<(u64, Result<GrowthRow>)> = n_values
        .iter()
        .map(|&n| (n, growth_row(n, epsilon, rel_tol)))
        .collect();

    let mut violations = Vec::new();
    let ok: Vec<&GrowthRow> = rows.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    for w in ok.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.n < 2 * a.n {
            continue;
        }
        let grew = [
            ("length", b.length > a.length),
            ("diam_lo", b.diam_lo > a.diam_lo),
            ("sup1", b.sup1 > a.sup1),
            ("sup2", b.sup2 > a.sup2),
            ("l2sq1", b.l2sq_1 > a.l2sq_1),
            ("l2sq2", b.l2sq_2 > a.l2sq_2),
        ];
        violations.extend(grew.into_iter().filter(|(_, g)| !g).map(|(column, _)| GrowthViolation {
            column,
            from_n: a.n,
            to_n: b.n,
        }));
    }
    Ok(SweepReport { rows, violations })
}

/// `start, start·factor, start·factor², …` up to `end`.
pub fn geometric_range(start: u64, end: u64, factor: u64) -> Result<Vec<u64>> {
    if factor < 2 {
        return Err(domain("sweep", "factor >= 2", factor));
    }
    if start < 1 || start > end {
        return Err(domain("sweep", "1 <= n-start <= n-end", format!("{start}..{end}")));
    }
    let mut out = vec![start];
    while let Some(next) = out.last().unwrap().checked_mul(factor).filter(|&x| x <= end) {
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
        }
        assert_eq!(
            "parseval_3".parse::<CheckId>().unwrap_err(),
            Error::UnknownCheck("parseval_3".into())
        );
    }

    #[test]
    fn examples_at_ten() {
        let v = Verifier::new(10);
        let r = v.run(CheckId::Parseval1).unwrap();
        assert!(r.pass);
        assert!((r.rhs.to_f64() - TAU * 549.0).abs() < 1e-9);
        assert!((r.lhs.to_f64() - TAU * 549.0).abs() < 1e-9 * TAU * 549.0);

        let r = v.run(CheckId::ChordIdentity).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.rhs, Quantity::from(14u64));
        assert!((r.lhs.to_f64() - 14.0).abs() < 1e-12);

        for r in v.run_all() {
            let r = r.unwrap();
            assert!(r.pass, "{r}");
        }
        assert_eq!(v.run_all().len(), 11);
    }

    #[test]
    fn vacuous_at_one() {
        let r = run_check(1, CheckId::ValuationBounds).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, Quantity::from(0u64));
        assert!(run_check(1, CheckId::LengthChain).is_err());
        assert!(run_check(9, CheckId::Midrange).is_err());
        let all = run_all(1);
        assert_eq!(all.len(), 9);
        assert!(all.into_iter().all(|r| r.unwrap().pass));
    }

    #[test]
    fn every_check_small_n() {
        for n in 2..=60 {
            let v = Verifier::new(n);
            for r in v.run_all() {
                let r = r.unwrap();
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let rep = sweep(&[4, 8], 1.0, 1e-8).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        let rows: Vec<_> = rep.rows.iter().map(|(_, r)| r.as_ref().unwrap()).collect();
        assert_eq!(rows[0].sup1, BigUint::from(9u32));
        assert_eq!(rows[1].sup1, BigUint::from(32u32));

        let rep = sweep(&[3], 1.0, 1e-8).unwrap();
        let row = rep.rows[0].1.as_ref().unwrap();
        assert!((row.mertens_gap - 0.739_285_505_716_634_2).abs() < 1e-12);

        let rep = sweep(&[10, 20, 40, 80], 1.0, 1e-8).unwrap();
        assert!(rep.passed());
        let diam: Vec<u64> = rep
            .rows
            .iter()
            .map(|(_, r)| r.as_ref().unwrap().diam_lo.to_u64().unwrap())
            .collect();
        assert_eq!(diam, vec![14, 36, 92, 214]);
    }

    #[test]
    fn sweep_preconditions() {
        assert!(sweep(&[2, 4], 1.0, 1e-8).is_err());
        assert!(sweep(&[8, 4], 1.0, 1e-8).is_err());
        assert!(sweep(&[4, 8], 0.0, 1e-8).is_err());
        // rows with a bad tolerance fail individually
        let rep = sweep(&[4, 8], 1.0, 1e-20).unwrap();
        assert!(rep.rows.iter().all(|(_, r)| r.is_err()));
        assert!(!rep.passed());
    }

    #[test]
    fn geometric_ranges() {
        assert_eq!(geometric_range(16, 4096, 2).unwrap().len(), 9);
        assert_eq!(geometric_range(10, 100, 3).unwrap(), vec![10, 30, 90]);
        assert!(geometric_range(10, 100, 1).is_err());
        assert!(geometric_range(10, 5, 2).is_err());
    }
}
