//! Exact spectral invariants of `F_n(t) = Σ_{p<=n} v_p(n!)·e^{ipt}`.
//!
//! Because every coefficient is a nonnegative integer, the interesting norms of
//! `F_n` and its derivatives reduce to integer sums over the coefficient table:
//!
//! * `‖F_n^{(k)}‖²_{L²} = 2π·Σ p^{2k}·v_p²` (orthogonality of `e^{ipt}`),
//! * `‖F_n^{(k)}‖_{L∞} = Σ p^k·v_p`, attained at `t = 0`,
//! * `|F_n(0) − F_n(π)| = 2·Σ_{p odd} v_p`, since `e^{iπp} = −1` for odd `p`.
//!
//! All sums are accumulated exactly. `Σ p⁴·v_p²` grows like `n⁷/log n`, which
//! leaves 128-bit range around `n ≈ 10⁵`, so results are [`BigUint`].

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::primes::{CoefficientTable, PrimeSieve};

/// Sums `u128` terms, spilling into a big integer when a word overflows.
#[derive(Debug, Default)]
struct ExactSum {
    word: u128,
    spill: BigUint,
}

impl ExactSum {
    fn add(&mut self, term: u128) {
        match self.word.checked_add(term) {
            Some(w) => self.word = w,
            None => {
                self.spill += self.word;
                self.word = term;
            }
        }
    }

    fn add_big(&mut self, term: BigUint) {
        self.spill += term;
    }

    fn finish(self) -> BigUint {
        self.spill + self.word
    }
}

fn add_product(sum: &mut ExactSum, factors: &[u64]) {
    let mut acc: u128 = 1;
    for (i, &f) in factors.iter().enumerate() {
        match acc.checked_mul(f as u128) {
            Some(a) => acc = a,
            None => {
                let big = factors[i..]
                    .iter()
                    .fold(BigUint::from(acc), |b, &g| b * g);
                sum.add_big(big);
                return;
            }
        }
    }
    sum.add(acc);
}

/// Exact moments of the coefficient table of `F_n`.
///
/// `sq{k}` is `Σ p^k·v_p²` and `lin{k}` is `Σ p^k·v_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSummary {
    pub n: u64,
    pub sq0: BigUint,
    pub sq2: BigUint,
    pub sq4: BigUint,
    pub lin0: BigUint,
    pub lin1: BigUint,
    pub lin2: BigUint,
    /// `2·Σ_{p odd} v_p = |F_n(0) − F_n(π)|`.
    pub chord: BigUint,
    /// `v_2(n!)`, kept so that `F_n(π)` can be reconstructed exactly.
    v2: u64,
}

impl SpectralSummary {
    pub fn from_table(table: &CoefficientTable) -> Self {
        let mut sums: [ExactSum; 7] = Default::default();
        let mut v2 = 0;
        for e in table.iter() {
            let (p, v) = (e.p, e.v);
            add_product(&mut sums[0], &[v, v]);
            add_product(&mut sums[1], &[p, p, v, v]);
            add_product(&mut sums[2], &[p, p, p, p, v, v]);
            add_product(&mut sums[3], &[v]);
            add_product(&mut sums[4], &[p, v]);
            add_product(&mut sums[5], &[p, p, v]);
            if p == 2 {
                v2 = v;
            } else {
                add_product(&mut sums[6], &[2, v]);
            }
        }
        let [sq0, sq2, sq4, lin0, lin1, lin2, chord] = sums.map(ExactSum::finish);
        SpectralSummary {
            n: table.n,
            sq0,
            sq2,
            sq4,
            lin0,
            lin1,
            lin2,
            chord,
            v2,
        }
    }

    /// `Σ p^k·v_p²` for `k ∈ {0, 2, 4}`.
    pub fn sq_moment(&self, k: u32) -> Option<&BigUint> {
        match k {
            0 => Some(&self.sq0),
            2 => Some(&self.sq2),
            4 => Some(&self.sq4),
            _ => None,
        }
    }

    /// `Σ p^k·v_p` for `k ∈ {0, 1, 2}`; equals `‖F_n^{(k)}‖_∞`.
    pub fn lin_moment(&self, k: u32) -> Option<&BigUint> {
        match k {
            0 => Some(&self.lin0),
            1 => Some(&self.lin1),
            2 => Some(&self.lin2),
            _ => None,
        }
    }

    /// `F_n(0) = Σ v_p`.
    pub fn value_at_zero(&self) -> BigInt {
        BigInt::from(self.lin0.clone())
    }

    /// `F_n(π) = v_2(n!) − Σ_{p odd} v_p`, a real integer.
    pub fn value_at_pi(&self) -> BigInt {
        // lin0 = v2 + chord/2
        let odd = BigInt::from(self.lin0.clone()) - BigInt::from(self.v2);
        BigInt::from(self.v2) - odd
    }

    /// `2π·Σ p²v_p² / Σ p·v_p`: the length lower bound `‖f‖₂²/‖f‖_∞` for
    /// `f = F_n'`, with the exact sup norm.
    pub fn length_lower_bound(&self) -> Result<f64> {
        if self.lin1.is_zero() {
            return Err(domain("length_lower_bound", "n >= 2", self.n));
        }
        Ok(std::f64::consts::TAU * big_ratio(&self.sq2, &self.lin1))
    }
}

/// `a / b` in double precision, for operands possibly beyond `f64` range.
pub(crate) fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => x / y,
        _ => {
            let shift = a.bits().max(b.bits()).saturating_sub(900);
            let x = (a >> shift).to_f64().unwrap_or(f64::MAX);
            let y = (b >> shift).to_f64().unwrap_or(f64::MAX);
            x / y
        }
    }
}

pub fn spectral_summary(n: u64) -> Result<SpectralSummary> {
    if n < 1 {
        return Err(domain("spectral_summary", "n >= 1", n));
    }
    Ok(SpectralSummary::from_table(&PrimeSieve::new(n).coefficient_table(n)))
}

pub fn length_lower_bound(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain("length_lower_bound", "n >= 2", n));
    }
    spectral_summary(n)?.length_lower_bound()
}

/// `2·n·π(n)`, the cruder sup bound on `F_n'` obtained from `p·v_p <= 2n`.
pub fn paper_sup_bound(n: u64) -> BigUint {
    let pi = PrimeSieve::new(n).count_up_to(n);
    BigUint::from(2u32) * n * pi
}

/// A prime in `(n/3, n/2]` together with its valuation in `n!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MidrangeEntry {
    pub p: u64,
    pub v: u64,
    /// `p² > n`, in which case `v_p(n!) = ⌊n/p⌋ = 2` must hold.
    pub square_exceeds_n: bool,
}

impl MidrangeEntry {
    /// True when `p² > n` yet the valuation is not 2.
    pub fn is_flagged(&self) -> bool {
        self.square_exceeds_n && self.v != 2
    }
}

/// Valuations of the primes `p` with `n/3 < p <= n/2`.
pub fn midrange_valuations(n: u64) -> Result<Vec<MidrangeEntry>> {
    if n < 10 {
        return Err(domain("midrange_valuations", "n >= 10", n));
    }
    Ok(midrange_from_sieve(&PrimeSieve::new(n), n))
}

pub(crate) fn midrange_from_sieve(sieve: &PrimeSieve, n: u64) -> Vec<MidrangeEntry> {
    sieve
        .primes_up_to(n / 2)
        .iter()
        .filter(|&&p| 3 * p > n)
        .map(|&p| MidrangeEntry {
            p,
            v: crate::primes::legendre_sum(p, n),
            square_exceeds_n: (p as u128) * (p as u128) > n as u128,
        })
        .collect()
}

/// The chord lower bound `Σ_{p odd} v_p >= n·Σ_{p odd} 1/p − #{odd p <= n}`,
/// checked without rational arithmetic.
///
/// Writing `n/p = ⌊n/p⌋ + (n mod p)/p`, the inequality becomes
/// `Σ_odd (v_p − ⌊n/p⌋) + #odd >= Σ_odd (n mod p)/p`. The left side is an
/// integer; the right side is a sum of fractions in `[0, 1)` evaluated in
/// `f64` with a rigorous forward error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordMertensBound {
    pub n: u64,
    /// `2·Σ_{p odd} v_p`.
    pub chord: u128,
    pub odd_primes: u64,
    /// `Σ_{p odd} 1/p`.
    pub odd_reciprocal_sum: f64,
    /// `Σ_odd (v_p − ⌊n/p⌋) + #odd`.
    pub integer_side: u128,
    /// `Σ_odd (n mod p)/p`.
    pub fractional_side: f64,
    pub fractional_error: f64,
}

impl ChordMertensBound {
    pub fn compute(sieve: &PrimeSieve, n: u64) -> Self {
        let mut odd_v: u128 = 0;
        let mut integer_side: u128 = 0;
        let mut fractional_side = 0.0f64;
        let mut recip = 0.0f64;
        let mut odd_primes = 0u64;
        for &p in sieve.primes_up_to(n).iter().skip_while(|&&p| p == 2) {
            let v = crate::primes::legendre_sum(p, n);
            odd_v += v as u128;
            integer_side += (v - n / p) as u128 + 1;
            fractional_side += (n % p) as f64 / p as f64;
            recip += 1.0 / p as f64;
            odd_primes += 1;
        }
        // Each quotient carries relative error u and the running sum another
        // u per addition.
        let u = f64::EPSILON / 2.0;
        let fractional_error = 1.01 * (odd_primes as f64 + 1.0) * u * fractional_side;
        ChordMertensBound {
            n,
            chord: 2 * odd_v,
            odd_primes,
            odd_reciprocal_sum: recip,
            integer_side,
            fractional_side,
            fractional_error,
        }
    }

    /// `2·(n·Σ_{p odd} 1/p − #odd)`, in floating point, for reporting.
    pub fn rhs(&self) -> f64 {
        2.0 * (self.n as f64 * self.odd_reciprocal_sum - self.odd_primes as f64)
    }

    /// Certified: true only when the inequality holds for the exact rationals.
    pub fn holds(&self) -> bool {
        self.integer_side as f64 - self.fractional_side >= self.fractional_error
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::legendre_sum;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn summary_n10() {
        let s = spectral_summary(10).unwrap();
        assert_eq!(s.sq0, big(85));
        assert_eq!(s.sq2, big(549));
        assert_eq!(s.sq4, big(7221));
        assert_eq!(s.lin0, big(15));
        assert_eq!(s.lin1, big(45));
        assert_eq!(s.lin2, big(167));
        assert_eq!(s.chord, big(14));
        assert_eq!(s.value_at_zero(), BigInt::from(15));
        assert_eq!(s.value_at_pi(), BigInt::from(1));
    }

    #[test]
    fn summary_small_n() {
        let s = spectral_summary(1).unwrap();
        for k in [0, 2, 4] {
            assert!(s.sq_moment(k).unwrap().is_zero());
        }
        for k in [0, 1, 2] {
            assert!(s.lin_moment(k).unwrap().is_zero());
        }
        assert!(s.chord.is_zero());

        let s = spectral_summary(2).unwrap();
        assert_eq!(s.sq2, big(4));
        assert_eq!(s.lin1, big(2));
        assert!(s.chord.is_zero());
        assert!(s.sq_moment(1).is_none());
        assert!(s.lin_moment(3).is_none());
        assert!(spectral_summary(0).is_err());
    }

    #[test]
    fn length_lower_bound_examples() {
        let lb = length_lower_bound(10).unwrap();
        assert!((lb - 76.654_860_747_590_94).abs() < 1e-9);
        let lb = length_lower_bound(2).unwrap();
        assert!((lb - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        let lb = length_lower_bound(3).unwrap();
        assert!((lb - 16.336_281_798_666_924).abs() < 1e-9);
        assert!(length_lower_bound(1).is_err());
    }

    #[test]
    fn paper_sup_bound_examples() {
        assert_eq!(paper_sup_bound(10), big(80));
        assert_eq!(paper_sup_bound(2), big(4));
        assert_eq!(paper_sup_bound(100), big(5000));
        for n in [2, 10, 100] {
            assert!(paper_sup_bound(n) >= spectral_summary(n).unwrap().lin1);
        }
    }

    #[test]
    fn midrange_examples() {
        let m = midrange_valuations(30).unwrap();
        assert_eq!(m.iter().map(|e| (e.p, e.v)).collect::<Vec<_>>(), vec![(11, 2), (13, 2)]);
        assert!(m.iter().all(|e| e.square_exceeds_n && !e.is_flagged()));

        let m = midrange_valuations(10).unwrap();
        assert_eq!(m.iter().map(|e| (e.p, e.v)).collect::<Vec<_>>(), vec![(5, 2)]);

        let m = midrange_valuations(12).unwrap();
        assert_eq!(m.iter().map(|e| (e.p, e.v)).collect::<Vec<_>>(), vec![(5, 2)]);

        assert!(midrange_valuations(9).is_err());
    }

    #[test]
    fn midrange_never_flagged() {
        let sieve = PrimeSieve::new(20_000);
        for n in 10..=20_000 {
            assert!(midrange_from_sieve(&sieve, n).iter().all(|e| !e.is_flagged()), "n = {n}");
        }
    }

    #[test]
    fn moments_exceed_u128_without_loss() {
        // Largest term alone: 99991^4 * v^2 with v = 1 is ~1e20; the total is ~1e31
        // at n = 1e5, so check against a direct big-integer sum instead.
        let n = 100_000;
        let table = PrimeSieve::new(n).coefficient_table(n);
        let direct: BigUint = table
            .iter()
            .map(|e| BigUint::from(e.p).pow(4) * e.v * e.v)
            .sum();
        assert_eq!(SpectralSummary::from_table(&table).sq4, direct);
    }

    #[test]
    fn chord_mertens_examples() {
        let sieve = PrimeSieve::new(100);
        let b = ChordMertensBound::compute(&sieve, 10);
        assert_eq!(b.chord, 14);
        assert_eq!(b.odd_primes, 3);
        // 2·(10·(1/3 + 1/5 + 1/7) − 3) = 7.5238...
        assert!((b.rhs() - 2.0 * (10.0 * (71.0 / 105.0) - 3.0)).abs() < 1e-12);
        assert!(b.holds());
        let b = ChordMertensBound::compute(&sieve, 2);
        assert_eq!(b.chord, 0);
        assert!(b.holds());
    }

    proptest! {
        #[test]
        fn chord_identity_exact(n in 1u64..3000) {
            let s = spectral_summary(n).unwrap();
            let diff = s.value_at_zero() - s.value_at_pi();
            prop_assert_eq!(diff, BigInt::from(s.chord.clone()));
        }

        #[test]
        fn summary_nondecreasing(n in 1u64..3000) {
            let a = spectral_summary(n).unwrap();
            let b = spectral_summary(n + 1).unwrap();
            prop_assert!(b.sq0 >= a.sq0 && b.sq2 >= a.sq2 && b.sq4 >= a.sq4);
            prop_assert!(b.lin0 >= a.lin0 && b.lin1 >= a.lin1 && b.lin2 >= a.lin2);
            prop_assert!(b.chord >= a.chord);
        }

        #[test]
        fn summary_matches_naive_sums(n in 1u64..400) {
            let s = spectral_summary(n).unwrap();
            let primes = crate::primes::sieve_primes(n);
            let sq2: u128 = primes.iter().map(|&p| {
                let v = legendre_sum(p, n) as u128;
                (p as u128).pow(2) * v * v
            }).sum();
            prop_assert_eq!(s.sq2, BigUint::from(sq2));
        }

        #[test]
        fn divergence_ordering(n1 in 32u64..1500, factor in 2u64..4) {
            let n2 = n1 * factor;
            let a = spectral_summary(n1).unwrap();
            let b = spectral_summary(n2).unwrap();
            // sq4(n2)/sq4(n1) > sq2(n2)/sq2(n1), cross-multiplied
            prop_assert!(&b.sq4 * &a.sq2 > &b.sq2 * &a.sq4);
        }

        #[test]
        fn lower_bound_below_trivial_upper(n in 2u64..3000) {
            let s = spectral_summary(n).unwrap();
            let lb = s.length_lower_bound().unwrap();
            prop_assert!(lb <= std::f64::consts::TAU * s.lin1.to_f64().unwrap());
        }
    }
}
