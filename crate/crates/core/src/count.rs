//! Inclusion–exclusion evaluation of `q(n, k)`, `ξₙ`, `ηₙ` and `pₙ`.
//!
//! The class stream is reduced in two stages. Each worker folds its
//! contiguous range into a [`Tally`]: a histogram keyed by the only data a
//! class term depends on (`ε`, `|α|` and `ψ₀..ψ_{n−2}`). Tallies merge by
//! integer addition, and the exact big-integer sums are formed once from
//! the merged histogram, so neither the worker count nor the split affects
//! any output bit.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::profile::{self, CanonicalClass, ClassRange, Guard, Odometer, Profile};

pub type BigNat = BigUint;
pub type SignedBig = BigInt;
/// Exact ratio of naturals, kept in lowest terms.
pub type BigRatio = Ratio<BigUint>;

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * i)
}

/// `|Σ_{n²}| = (n!)^{2n}`.
pub fn sigma_count(n: usize) -> BigUint {
    factorial(n).pow(2 * n as u32)
}

/// Cached `[(n − i)!]^e` for `i = 0..=n−2`, `e = 0..=2n`.
#[derive(Clone, Debug)]
pub struct FactorialPowers {
    n: usize,
    table: Vec<Vec<BigUint>>,
}

impl FactorialPowers {
    pub fn new(n: usize) -> Self {
        let table = (0..n.saturating_sub(1))
            .map(|i| {
                let base = factorial(n - i);
                let mut row = Vec::with_capacity(2 * n + 1);
                let mut acc = BigUint::one();
                for _ in 0..=2 * n {
                    row.push(acc.clone());
                    acc *= &base;
                }
                row
            })
            .collect();
        Self { n, table }
    }

    /// `∏_{i=0}^{n−2} [(n − i)!]^{psi[i]}`.
    pub fn product(&self, psi: &[usize]) -> BigUint {
        self.table
            .iter()
            .zip(psi)
            .fold(BigUint::one(), |acc, (row, &e)| if e == 0 { acc } else { acc * &row[e] })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `(−1)^ε · |α| · ∏_{i=0}^{n−2} [(n − i)!]^{ψᵢ}` for a single class.
pub fn class_term(alpha: &CanonicalClass, profile: &Profile) -> SignedBig {
    let powers = FactorialPowers::new(alpha.n());
    signed(profile.eps, alpha.multiplicity() * powers.product(&profile.psi))
}

fn signed(eps: usize, magnitude: BigUint) -> BigInt {
    let sign = if magnitude.is_zero() {
        Sign::NoSign
    } else if eps % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    BigInt::from_biguint(sign, magnitude)
}

const EPS_BITS: u32 = 7;
const MULT_BITS: u32 = 16;
const PSI_BITS: u32 = 5;

/// Histogram of class signatures over some part of the class stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    counts: FxHashMap<u64, u64>,
}

impl Tally {
    pub fn merge(mut self, other: Tally) -> Tally {
        let (mut big, small) = if self.counts.len() >= other.counts.len() {
            (std::mem::take(&mut self.counts), other.counts)
        } else {
            (other.counts, std::mem::take(&mut self.counts))
        };
        for (k, v) in small {
            *big.entry(k).or_insert(0) += v;
        }
        Tally { counts: big }
    }

    /// Number of classes folded in.
    pub fn classes(&self) -> u128 {
        self.counts.values().map(|&v| u128::from(v)).sum()
    }

    pub fn signatures(&self) -> usize {
        self.counts.len()
    }

    /// Exact sums for this part of the stream.
    pub fn sums(&self, n: usize) -> Sums {
        let powers = FactorialPowers::new(n);
        let mut keys: Vec<_> = self.counts.iter().collect();
        keys.sort_unstable();
        let mut sums = Sums::zero(n);
        let mut psi = vec![0usize; n.saturating_sub(1)];
        for (&key, &count) in keys {
            let eps = (key & ((1 << EPS_BITS) - 1)) as usize;
            let mult = (key >> EPS_BITS) & ((1 << MULT_BITS) - 1);
            for (i, slot) in psi.iter_mut().enumerate() {
                *slot = ((key >> (EPS_BITS + MULT_BITS + PSI_BITS * i as u32)) & ((1 << PSI_BITS) - 1))
                    as usize;
            }
            let weight = powers.product(&psi) * mult * count;
            sums.add_class_weight(eps, weight);
        }
        sums
    }
}

/// Partial exact sums: `q[k]` per weight `k` and the signed `ε ≥ 2` total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sums {
    pub q: Vec<BigUint>,
    pub xi: BigInt,
}

impl Sums {
    pub fn zero(n: usize) -> Self {
        Self { q: vec![BigUint::zero(); n * n + 1], xi: BigInt::zero() }
    }

    fn add_class_weight(&mut self, eps: usize, weight: BigUint) {
        if eps >= 2 {
            let term = signed(eps, weight.clone());
            self.xi += term;
        }
        self.q[eps] += weight;
    }

    pub fn add(&mut self, other: &Sums) {
        for (a, b) in self.q.iter_mut().zip(&other.q) {
            *a += b;
        }
        self.xi += &other.xi;
    }
}

struct Signature {
    n: usize,
    fact: [u64; profile::MAX_N + 1],
}

impl Signature {
    fn new(n: usize) -> Self {
        let mut fact = [1u64; profile::MAX_N + 1];
        for i in 1..=profile::MAX_N {
            fact[i] = fact[i - 1] * i as u64;
        }
        Self { n, fact }
    }

    #[inline]
    fn key(&self, codes: &[u32]) -> u64 {
        let n = self.n;
        let mut psi = [0u8; profile::MAX_N + 1];
        let mut eps = 0u32;
        let mut denom = 1u64;
        let mut run = 1usize;
        for (i, &x) in codes.iter().enumerate() {
            let t = x.count_ones();
            psi[t as usize] += 1;
            eps += t;
            if i > 0 {
                if x == codes[i - 1] {
                    run += 1;
                } else {
                    denom *= self.fact[run];
                    run = 1;
                }
            }
        }
        denom *= self.fact[run];
        for u in 0..n {
            let t = codes.iter().map(|&x| (x >> u) & 1).sum::<u32>();
            psi[t as usize] += 1;
        }
        let mult = self.fact[n] / denom;
        let mut key = u64::from(eps) | (mult << EPS_BITS);
        for (i, &p) in psi.iter().take(n.saturating_sub(1)).enumerate() {
            key |= u64::from(p) << (EPS_BITS + MULT_BITS + PSI_BITS * i as u32);
        }
        key
    }
}

/// Folds one contiguous range of the class stream.
pub fn tally_range(range: &ClassRange) -> Tally {
    let sig = Signature::new(range.n);
    let mut counts: FxHashMap<u64, u64> = FxHashMap::default();
    let mut cursor = Odometer::new(range.n, range.start.clone(), range.count);
    while let Some(codes) = cursor.current() {
        *counts.entry(sig.key(codes)).or_insert(0) += 1;
        cursor.advance();
    }
    Tally { counts }
}

/// Engine settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub guard: Guard,
    /// Worker threads; `1` runs on the calling thread.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { guard: Guard::default(), workers: rayon::current_num_threads().max(1) }
    }
}

impl Config {
    pub fn with_workers(workers: usize) -> Self {
        Self { workers: workers.max(1), ..Self::default() }
    }
}

fn check_n(n: usize, guard: &Guard) -> Result<()> {
    if n < 2 {
        return Err(Error::Range(format!("n must be at least 2, got {n}")));
    }
    guard.check(n)
}

/// Tallies the classes with ranks in `from..to`, split across workers.
pub fn tally_ranks(n: usize, from: u128, to: u128, workers: usize) -> Result<Tally> {
    let workers = workers.max(1);
    if workers == 1 {
        return Ok(tally_range(&ClassRange::from_ranks(n, from, to)?));
    }
    let parts = profile::split_ranks(n, from, to, workers * 4)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Range(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| parts.par_iter().map(tally_range).reduce(Tally::default, Tally::merge)))
}

/// Every counted quantity for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub n: usize,
    /// `q[k]` for `k = 0..=n²`.
    pub q: Vec<BigUint>,
    pub xi: BigUint,
}

impl Counts {
    pub fn from_sums(n: usize, sums: Sums) -> Result<Self> {
        let xi = sums
            .xi
            .to_biguint()
            .ok_or_else(|| Error::Arithmetic(format!("negative disjoint count {}", sums.xi)))?;
        Ok(Self { n, q: sums.q, xi })
    }

    pub fn sigma(&self) -> BigUint {
        sigma_count(self.n)
    }

    pub fn eta(&self) -> Result<BigUint> {
        eta_from(self.n, &self.xi)
    }

    pub fn p(&self) -> BigRatio {
        p_from(self.n, &self.xi)
    }
}

/// `ηₙ = (n!)^{2n} · ξₙ / 2`, refusing an inexact halving.
pub fn eta_from(n: usize, xi: &BigUint) -> Result<BigUint> {
    let doubled = sigma_count(n) * xi;
    if doubled.is_odd() {
        return Err(Error::Arithmetic(format!("(n!)^(2n)·ξ is odd for n = {n}")));
    }
    Ok(doubled >> 1u32)
}

/// `pₙ = ξₙ / ((n!)^{2n} − 1)`.
pub fn p_from(n: usize, xi: &BigUint) -> BigRatio {
    BigRatio::new(xi.clone(), sigma_count(n) - 1u32)
}

/// Enumerates every class for `n` and evaluates all quantities.
pub fn compute(n: usize, config: &Config) -> Result<Counts> {
    check_n(n, &config.guard)?;
    let tally = tally_ranks(n, 0, profile::class_count(n), config.workers)?;
    Counts::from_sums(n, tally.sums(n))
}

pub fn xi(n: usize) -> Result<BigUint> {
    Ok(compute(n, &Config::default())?.xi)
}

pub fn eta(n: usize) -> Result<BigUint> {
    compute(n, &Config::default())?.eta()
}

pub fn p(n: usize) -> Result<BigRatio> {
    Ok(compute(n, &Config::default())?.p())
}

/// Largest `k` that [`q`] evaluates from the weight-pruned class list
/// instead of the full stream.
pub const SPARSE_Q_MAX: usize = 3;

/// `q(n, k)`: the sum over classes with exactly `k` ones of
/// `|α| · ∏ [(n − i)!]^{ψᵢ}`.
pub fn q(n: usize, k: usize, config: &Config) -> Result<BigUint> {
    check_n(n, &config.guard)?;
    if k > n * n {
        return Err(Error::Range(format!("k = {k} outside 0..={}", n * n)));
    }
    if k <= SPARSE_Q_MAX {
        let powers = FactorialPowers::new(n);
        return Ok(profile::classes_with_weight(n, k)?
            .iter()
            .map(|c| c.multiplicity() * powers.product(&c.profile().psi))
            .sum());
    }
    Ok(compute(n, config)?.q.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::enumerate_classes;

    fn class(n: usize, codes: &[u32]) -> CanonicalClass {
        CanonicalClass::from_sorted(n, codes.to_vec()).unwrap()
    }

    #[test]
    fn single_terms() {
        let full = class(2, &[3, 3]);
        assert_eq!(class_term(&full, &full.profile()), BigInt::from(1));
        let half = class(2, &[0, 3]);
        assert_eq!(half.profile().psi[0], 1);
        assert_eq!(class_term(&half, &half.profile()), BigInt::from(4));
        let zero = class(2, &[0, 0]);
        assert_eq!(class_term(&zero, &zero.profile()), BigInt::from(16));
        let one = class(2, &[0, 1]);
        assert_eq!(class_term(&one, &one.profile()), BigInt::from(-8));
    }

    #[test]
    fn sigma_counts() {
        assert_eq!(sigma_count(1), BigUint::one());
        assert_eq!(sigma_count(2), BigUint::from(16u32));
        assert_eq!(sigma_count(3), BigUint::from(46656u32));
    }

    #[test]
    fn small_q() {
        let cfg = Config::with_workers(1);
        assert_eq!(q(2, 0, &cfg).unwrap(), BigUint::from(16u32));
        assert_eq!(q(2, 1, &cfg).unwrap(), BigUint::from(16u32));
        assert_eq!(q(2, 2, &cfg).unwrap(), BigUint::from(10u32));
        let c = compute(2, &cfg).unwrap();
        assert_eq!(&c.q[2], &BigUint::from(10u32));
        assert_eq!(BigInt::from(10) - BigInt::from(c.q[3].clone()) + BigInt::from(c.q[4].clone()), BigInt::from(7));
        assert!(q(2, 5, &cfg).is_err());
        assert!(q(1, 0, &cfg).is_err());
        assert!(matches!(q(7, 0, &cfg), Err(Error::Guard { .. })));
    }

    #[test]
    fn golden_small() {
        let cfg = Config::with_workers(1);
        assert_eq!(compute(2, &cfg).unwrap().xi, BigUint::from(7u32));
        assert_eq!(compute(3, &cfg).unwrap().xi, BigUint::from(17972u32));
        assert_eq!(compute(2, &cfg).unwrap().eta().unwrap(), BigUint::from(56u32));
        assert_eq!(compute(2, &cfg).unwrap().p(), BigRatio::new(7u32.into(), 15u32.into()));
    }

    #[test]
    fn tally_matches_per_class_terms() {
        for n in 2..=4 {
            let direct: BigInt = enumerate_classes(n, Guard::default())
                .unwrap()
                .map(|c| {
                    let p = c.profile();
                    if p.eps >= 2 { class_term(&c, &p) } else { BigInt::zero() }
                })
                .sum();
            let c = compute(n, &Config::with_workers(1)).unwrap();
            assert_eq!(BigInt::from(c.xi.clone()), direct, "n={n}");
        }
    }

    #[test]
    fn alternating_sum() {
        for n in 2..=4 {
            let c = compute(n, &Config::with_workers(1)).unwrap();
            let alt: BigInt = c
                .q
                .iter()
                .enumerate()
                .skip(2)
                .map(|(k, v)| signed(k, v.clone()))
                .sum();
            assert_eq!(alt, BigInt::from(c.xi.clone()));
        }
    }

    #[test]
    fn worker_independence() {
        let one = compute(3, &Config::with_workers(1)).unwrap();
        let three = compute(3, &Config::with_workers(3)).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn split_sums_add_up() {
        let n = 3;
        let total = profile::class_count(n);
        let mut acc = Sums::zero(n);
        for cut in profile::split_ranks(n, 0, total, 7).unwrap() {
            acc.add(&tally_range(&cut).sums(n));
        }
        assert_eq!(Counts::from_sums(n, acc).unwrap(), compute(n, &Config::with_workers(1)).unwrap());
    }

    #[test]
    fn odd_product_is_refused() {
        // (1!)^2 · 1 is odd
        assert!(matches!(eta_from(1, &BigUint::one()), Err(Error::Arithmetic(_))));
    }
}
