//! Exact prime arithmetic: a bit-set sieve of Eratosthenes, Legendre valuations
//! of `n!`, prime counting, and prime reciprocal sums.
//!
//! Everything here is exact integer arithmetic except [`prime_reciprocal_sum`],
//! which accumulates in `f64` from the smallest prime upwards. For limits up to
//! `10^7` the accumulated rounding stays far below `10^-12`.

use crate::error::{Error, Result};

/// Which primes take part in a sum over primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrimeFilter {
    #[default]
    All,
    /// Skip `p = 2`.
    OddOnly,
}

impl PrimeFilter {
    #[inline]
    pub fn admits(self, p: u64) -> bool {
        match self {
            PrimeFilter::All => true,
            PrimeFilter::OddOnly => p != 2,
        }
    }
}

/// Primes up to a fixed limit, sieved once.
///
/// The composite marks are kept in a packed bit set so that membership tests
/// are O(1); the primes themselves are also materialized in ascending order.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    composite: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let len = usize::try_from(limit).expect("sieve limit exceeds address space") + 1;
        let mut composite = vec![0u64; len.div_ceil(64)];
        let mut mark = |i: usize| composite[i / 64] |= 1 << (i % 64);
        mark(0);
        if len > 1 {
            mark(1);
        }

        let mut i = 2usize;
        while i * i < len {
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                let mut j = i * i;
                while j < len {
                    composite[j / 64] |= 1 << (j % 64);
                    j += i;
                }
            }
            i += 1;
        }

        let primes = (2..len)
            .filter(|&k| composite[k / 64] >> (k % 64) & 1 == 0)
            .map(|k| k as u64)
            .collect();

        PrimeSieve {
            limit,
            composite,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x` (clamped to the sieve limit).
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        &self.primes[..self.primes.partition_point(|&p| p <= x)]
    }

    /// Primality of `x`; falls back to trial division above the sieve limit.
    pub fn is_prime(&self, x: u64) -> bool {
        if x <= self.limit {
            let i = x as usize;
            self.composite[i / 64] >> (i % 64) & 1 == 0
        } else {
            is_prime_trial(x)
        }
    }

    /// π(x) for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> u64 {
        assert!(x <= self.limit, "prime count beyond sieve limit");
        self.primes_up_to(x).len() as u64
    }

    pub fn reciprocal_sum(&self, limit: u64, filter: PrimeFilter) -> f64 {
        self.primes_up_to(limit)
            .iter()
            .filter(|&&p| filter.admits(p))
            .fold(0.0, |acc, &p| acc + 1.0 / p as f64)
    }

    /// Coefficient table of `F_n`, reusing this sieve (`n <= limit`).
    pub fn coefficient_table(&self, n: u64) -> CoefficientTable {
        assert!(n <= self.limit, "coefficient table beyond sieve limit");
        let entries = self
            .primes_up_to(n)
            .iter()
            .map(|&p| PrimeValuation {
                p,
                v: legendre_sum(p, n),
            })
            .collect();
        CoefficientTable { n, entries }
    }
}

fn is_prime_trial(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in `[2, limit]`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    PrimeSieve::new(limit).primes
}

/// `Σ_{k≥1} ⌊n/p^k⌋` without checking that `p` is prime.
///
/// This is the exponent of `p` in `n!` when `p` is prime. Requires `p >= 2`.
#[inline]
pub fn legendre_sum(p: u64, n: u64) -> u64 {
    debug_assert!(p >= 2);
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Exponent of the prime `p` in `n!`.
pub fn legendre_valuation(p: u64, n: u64) -> Result<u64> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime { value: p });
    }
    Ok(legendre_sum(p, n))
}

/// `n/p − 1 <= v <= n/(p − 1)`, compared exactly as `n <= (v + 1)·p` and
/// `v·(p − 1) <= n`.
pub fn valuation_within_bounds(p: u64, n: u64, v: u64) -> bool {
    let (p, n, v) = (p as u128, n as u128, v as u128);
    n <= (v + 1) * p && v * (p - 1) <= n
}

/// π(x), the number of primes `<= x`.
pub fn prime_count(x: u64) -> u64 {
    PrimeSieve::new(x).primes.len() as u64
}

/// `Σ_{p<=limit} 1/p`, smallest prime first, optionally over odd primes only.
pub fn prime_reciprocal_sum(limit: u64, filter: PrimeFilter) -> f64 {
    PrimeSieve::new(limit).reciprocal_sum(limit, filter)
}

/// One Fourier coefficient of `F_n`: the frequency `p` and its weight `v_p(n!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeValuation {
    pub p: u64,
    pub v: u64,
}

/// The coefficients of `F_n`: one entry per prime `p <= n`, ascending in `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub n: u64,
    pub entries: Vec<PrimeValuation>,
}

impl CoefficientTable {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PrimeValuation> {
        self.entries.iter()
    }
}

pub fn coefficient_table(n: u64) -> CoefficientTable {
    PrimeSieve::new(n).coefficient_table(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
            .collect()
    }

    #[test]
    fn sieve_examples() {
        assert!(sieve_primes(0).is_empty());
        assert!(sieve_primes(1).is_empty());
        assert_eq!(sieve_primes(2), vec![2]);
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert_eq!(
            sieve_primes(30),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
    }

    #[test]
    fn sieve_matches_trial_division() {
        for limit in [0, 1, 2, 3, 63, 64, 65, 127, 128, 129, 1000] {
            assert_eq!(sieve_primes(limit), trial_division_primes(limit), "limit {limit}");
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(legendre_valuation(2, 10), Ok(8));
        assert_eq!(legendre_valuation(3, 10), Ok(4));
        assert_eq!(legendre_valuation(11, 10), Ok(0));
        assert_eq!(legendre_valuation(4, 10), Err(Error::NotPrime { value: 4 }));
        assert_eq!(legendre_valuation(1, 10), Err(Error::NotPrime { value: 1 }));
        assert_eq!(legendre_valuation(0, 10), Err(Error::NotPrime { value: 0 }));
    }

    #[test]
    fn prime_count_examples() {
        assert_eq!(prime_count(0), 0);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(10), 4);
        assert_eq!(prime_count(100), 25);
        let sieve = PrimeSieve::new(1000);
        assert_eq!(sieve.count_up_to(1000), sieve.primes().len() as u64);
        assert_eq!(sieve.count_up_to(100), 25);
    }

    #[test]
    fn reciprocal_sum_examples() {
        let all = prime_reciprocal_sum(10, PrimeFilter::All);
        assert!((all - (1.0 / 2.0 + 1.0 / 3.0 + 1.0 / 5.0 + 1.0 / 7.0)).abs() < 1e-15);
        assert!((all - 1.176_190_476_190_476).abs() < 1e-12);
        assert_eq!(prime_reciprocal_sum(2, PrimeFilter::All), 0.5);
        let odd = prime_reciprocal_sum(10, PrimeFilter::OddOnly);
        assert!((odd - 0.676_190_476_190_476).abs() < 1e-12);
    }

    #[test]
    fn coefficient_table_examples() {
        assert!(coefficient_table(1).is_empty());
        let pv = |p, v| PrimeValuation { p, v };
        assert_eq!(coefficient_table(3).entries, vec![pv(2, 1), pv(3, 1)]);
        assert_eq!(
            coefficient_table(10).entries,
            vec![pv(2, 8), pv(3, 4), pv(5, 2), pv(7, 1)]
        );
    }

    #[test]
    fn log_factorial_cross_check() {
        let sieve = PrimeSieve::new(500);
        for n in 1..=500u64 {
            let by_primes: f64 = sieve
                .coefficient_table(n)
                .iter()
                .map(|e| e.v as f64 * (e.p as f64).ln())
                .sum();
            let direct: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
            let scale = direct.abs().max(1.0);
            assert!((by_primes - direct).abs() <= 1e-9 * scale, "n = {n}");
        }
    }

    #[test]
    fn bounds_are_tight_comparisons() {
        // n = 10, p = 2: 10/2 − 1 = 4 <= 8 <= 10/1 = 10
        assert!(valuation_within_bounds(2, 10, 8));
        assert!(valuation_within_bounds(2, 10, 10));
        assert!(!valuation_within_bounds(2, 10, 11));
        assert!(valuation_within_bounds(2, 10, 4));
        assert!(!valuation_within_bounds(2, 10, 3));
    }

    proptest! {
        #[test]
        fn valuation_lemma_bounds(n in 1u64..20_000, idx in 0usize..2000) {
            let sieve = PrimeSieve::new(n);
            if let Some(&p) = sieve.primes().get(idx % sieve.primes().len().max(1)) {
                prop_assert!(valuation_within_bounds(p, n, legendre_sum(p, n)));
            }
        }

        #[test]
        fn valuation_monotone_in_n(n in 1u64..1_000_000, p_idx in 0usize..50) {
            let p = sieve_primes(229)[p_idx];
            prop_assert!(legendre_sum(p, n + 1) >= legendre_sum(p, n));
        }

        #[test]
        fn prime_count_nondecreasing(x in 0u64..5000) {
            prop_assert!(prime_count(x + 1) >= prime_count(x));
            prop_assert_eq!(prime_count(x), sieve_primes(x).len() as u64);
        }
    }
}
