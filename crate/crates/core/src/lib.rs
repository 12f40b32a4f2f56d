//! Planar curves traced by Fourier series with prime frequencies,
//!
//! ```text
//! F_n(t) = Σ_{p <= n} v_p(n!) · e^{ipt},    t ∈ [−π, π],
//! ```
//!
//! where `v_p(n!)` is the exponent of `p` in `n!`.
//!
//! The crate is organized bottom-up:
//!
//! * [`primes`]: sieve, Legendre valuations, prime counts and reciprocal sums;
//! * [`spectrum`]: exact big-integer moments of the coefficient table (squared
//!   `L²` norms of derivatives, sup norms, the `t = 0`/`t = π` chord);
//! * [`eval`]: point and grid evaluation, directly or through an inverse FFT;
//! * [`geometry`]: arc length, certified diameter and sup-norm enclosures,
//!   grid box counts of the sampled polyline;
//! * [`verify`]: finite-`n` checks of the growth inequalities, and sweeps.
//!
//! ```
//! use prime_curves::spectrum::spectral_summary;
//!
//! let s = spectral_summary(10).unwrap();
//! assert_eq!(s.sq2, 549u32.into()); // ‖F₁₀'‖² = 2π·549
//! assert_eq!(s.chord, 14u32.into()); // |F₁₀(0) − F₁₀(π)|
//! ```
//!
//! The guide under `book/` walks through each module; its code listings are
//! compiled and run as doctests of this crate.

pub mod error;
pub mod eval;
pub mod geometry;
pub mod primes;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use eval::{eval_grid, eval_point, periodic_mean_square, Curve, CurveSamples, DerivativeOrder, Method};
pub use geometry::{arc_length, box_count, diameter, sup_norm, CoverResult, IntervalEstimate, LengthResult};
pub use primes::{
    coefficient_table, legendre_valuation, prime_count, prime_reciprocal_sum, sieve_primes, CoefficientTable,
    PrimeFilter, PrimeValuation,
};
pub use spectrum::{length_lower_bound, midrange_valuations, paper_sup_bound, spectral_summary, SpectralSummary};
pub use verify::{run_check, sweep, CheckId, CheckReport, GrowthRow};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/valuations.md")]
    mod valuations {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
