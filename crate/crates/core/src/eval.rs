//! Point and grid evaluation of `F_n` and its first two derivatives.
//!
//! Grids are always `t_j = −π + 2πj/M`, `j = 0..M`: half-open, `−π` included.
//! Two grid paths exist and are expected to agree to `1e-9·Σ p^k·v_p`:
//!
//! * [`Method::Direct`] sums every term at every sample, with the phase `p·t`
//!   formed exactly and reduced modulo 2π before `sin`/`cos`;
//! * [`Method::Spectral`] drops the coefficients into the frequency bins of a
//!   length-`M` array and runs one inverse FFT. The `−π` offset becomes a sign
//!   `(−1)^p` folded into each bin. Requires `M > n` so no frequency aliases.

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::primes::{CoefficientTable, PrimeSieve};

thread_local! {
    // Plans and twiddle tables are reused across calls of the same size.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Direct grid evaluations costing more than `π(n)·M` term evaluations are
/// refused.
pub const DEFAULT_DIRECT_WORK_LIMIT: u128 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DerivativeOrder {
    Value = 0,
    First = 1,
    Second = 2,
}

impl DerivativeOrder {
    pub const ALL: [DerivativeOrder; 3] = [Self::Value, Self::First, Self::Second];

    pub fn as_u32(self) -> u32 {
        self as u32
    }

    /// `(ip)^k` for this order `k`.
    #[inline]
    pub fn factor(self, p: f64) -> Complex64 {
        match self {
            Self::Value => Complex64::new(1.0, 0.0),
            Self::First => Complex64::new(0.0, p),
            Self::Second => Complex64::new(-p * p, 0.0),
        }
    }
}

impl TryFrom<u32> for DerivativeOrder {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        match k {
            0 => Ok(Self::Value),
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(domain("derivative order", "order in {0, 1, 2}", k)),
        }
    }
}

impl fmt::Display for DerivativeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Direct,
    #[default]
    Spectral,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "spectral" => Ok(Method::Spectral),
            other => Err(domain("method", "method in {direct, spectral}", other)),
        }
    }
}

/// Samples of `F_n^{(order)}` on the standard grid of `values.len()` points.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    pub n: u64,
    pub order: DerivativeOrder,
    pub values: Vec<Complex64>,
}

impl CurveSamples {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid parameter `t_j = −π + 2πj/M`.
    pub fn t(&self, j: usize) -> f64 {
        grid_point(j, self.len())
    }
}

#[inline]
pub(crate) fn grid_point(j: usize, m: usize) -> f64 {
    PI * ((2 * j) as f64 - m as f64) / m as f64
}

// Veltkamp/Dekker splitting: a·b = hi + lo exactly, no FMA required.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    const SPLIT: f64 = 134_217_729.0; // 2^27 + 1
    let split = |x: f64| {
        let c = SPLIT * x;
        let hi = c - (c - x);
        (hi, x - hi)
    };
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// `2π − TAU`, the part of 2π that `TAU` cannot hold.
const TAU_TAIL: f64 = 2.449_293_598_294_706_4e-16;

/// `p·t` reduced to roughly `[−π, π]`, keeping the product's low-order bits.
#[inline]
pub(crate) fn reduced_phase(p: f64, t: f64) -> f64 {
    let (hi, lo) = two_prod(p, t);
    let k = (hi / TAU).round();
    if k == 0.0 {
        return hi + lo;
    }
    let (kh, kl) = two_prod(k, TAU);
    (hi - kh) + (lo - kl) - k * TAU_TAIL
}

/// `F_n` with its coefficients converted to `f64` once.
///
/// `v_p(n!) <= n`, so the conversion is exact for every `n <= 2^53`.
#[derive(Debug, Clone)]
pub struct Curve {
    n: u64,
    table: CoefficientTable,
    coeffs: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(n: u64) -> Self {
        Self::from_table(PrimeSieve::new(n).coefficient_table(n))
    }

    pub fn from_table(table: CoefficientTable) -> Self {
        let coeffs = table.iter().map(|e| (e.p as f64, e.v as f64)).collect();
        Curve {
            n: table.n,
            table,
            coeffs,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    /// `F_n^{(order)}(t)` by direct summation.
    pub fn eval(&self, t: f64, order: DerivativeOrder) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(p, v)| {
                let (s, c) = reduced_phase(p, t).sin_cos();
                order.factor(p) * v * Complex64::new(c, s)
            })
            .sum()
    }

    pub fn sample(&self, m: usize, order: DerivativeOrder, method: Method) -> Result<CurveSamples> {
        self.sample_with_limit(m, order, method, DEFAULT_DIRECT_WORK_LIMIT)
    }

    pub fn sample_with_limit(
        &self,
        m: usize,
        order: DerivativeOrder,
        method: Method,
        work_limit: u128,
    ) -> Result<CurveSamples> {
        if m < 1 {
            return Err(domain("eval_grid", "samples >= 1", m));
        }
        let values = match method {
            Method::Direct => {
                let work = self.coeffs.len() as u128 * m as u128;
                if work > work_limit {
                    return Err(Error::WorkLimit {
                        work,
                        limit: work_limit,
                    });
                }
                (0..m)
                    .into_par_iter()
                    .map(|j| self.eval(grid_point(j, m), order))
                    .collect()
            }
            Method::Spectral => self.spectral_values(m, order)?,
        };
        Ok(CurveSamples {
            n: self.n,
            order,
            values,
        })
    }

    fn spectral_values(&self, m: usize, order: DerivativeOrder) -> Result<Vec<Complex64>> {
        if (m as u128) <= self.n as u128 {
            return Err(Error::Aliasing {
                n: self.n,
                samples: m,
            });
        }
        let mut bins = vec![Complex64::new(0.0, 0.0); m];
        for e in self.table.iter() {
            let p = e.p as f64;
            // e^{ip(−π)} = (−1)^p
            let sign = if e.p % 2 == 0 { 1.0 } else { -1.0 };
            bins[e.p as usize] = order.factor(p) * (e.v as f64 * sign);
        }
        let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
        fft.process(&mut bins);
        Ok(bins)
    }
}

/// `F_n^{(order)}(t)`.
pub fn eval_point(n: u64, t: f64, order: DerivativeOrder) -> Complex64 {
    Curve::new(n).eval(t, order)
}

/// Samples of `F_n^{(order)}` on the `m`-point standard grid.
pub fn eval_grid(n: u64, m: usize, order: DerivativeOrder, method: Method) -> Result<CurveSamples> {
    Curve::new(n).sample(m, order, method)
}

/// `(2π/M)·Σ_j |values[j]|²`, the periodic rectangle rule for `∫_{−π}^{π} |f|²`.
pub fn periodic_mean_square(samples: &CurveSamples) -> f64 {
    let m = samples.len();
    if m == 0 {
        return 0.0;
    }
    TAU / m as f64 * samples.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
}
