//! Row-integer encoding of binary matrices, row/column profiles, and the
//! enumeration of row-permutation classes as non-decreasing code tuples.
//!
//! Bit convention: column `j` (0-based) of a row is binary digit `j` of the
//! row code, so the 2×2 identity encodes as `⟨1, 2⟩`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Default resource guard on `n` for the class enumeration.
pub const DEFAULT_GUARD: usize = 6;

/// Hard ceiling on `n`, even with the override set.
pub const MAX_N: usize = 8;

/// Resource guard applied before any enumeration over `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub limit: usize,
    pub force: bool,
}

impl Default for Guard {
    fn default() -> Self {
        Self { limit: DEFAULT_GUARD, force: false }
    }
}

impl Guard {
    pub fn forced() -> Self {
        Self { limit: DEFAULT_GUARD, force: true }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Range("n must be at least 1".into()));
        }
        if n > MAX_N {
            return Err(Error::Range(format!("n = {n} exceeds the supported maximum {MAX_N}")));
        }
        if n > self.limit && !self.force {
            return Err(Error::Guard { n, limit: self.limit });
        }
        Ok(())
    }
}

/// Binary digit `u` of `a`, where `a` is an `n`-bit row code.
pub fn bit(n: usize, a: u32, u: usize) -> Result<u8> {
    if n == 0 || n > 31 {
        return Err(Error::Range(format!("row width {n} outside 1..=31")));
    }
    if a >> n != 0 {
        return Err(Error::Range(format!("code {a} does not fit in {n} bits")));
    }
    if u >= n {
        return Err(Error::Range(format!("bit index {u} outside 0..{n}")));
    }
    Ok(((a >> u) & 1) as u8)
}

/// An `n`-tuple of row codes, one per matrix row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RowCode {
    n: usize,
    codes: Vec<u32>,
}

impl RowCode {
    pub fn new(n: usize, codes: Vec<u32>) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::Range(format!("row width {n} outside 1..=31")));
        }
        if codes.len() != n {
            return Err(Error::Range(format!("expected {n} codes, found {}", codes.len())));
        }
        if let Some(&c) = codes.iter().find(|&&c| c >> n != 0) {
            return Err(Error::Range(format!("code {c} does not fit in {n} bits")));
        }
        Ok(Self { n, codes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn profile(&self) -> Profile {
        Profile::of_codes(self.n, &self.codes)
    }
}

/// Comma-separated decimal codes, e.g. `0,3,3`.
impl fmt::Display for RowCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.codes)
    }
}

impl FromStr for RowCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let codes = parse_tuple(s)?;
        Self::new(codes.len(), codes)
    }
}

pub(crate) fn write_tuple(f: &mut impl fmt::Write, codes: &[u32]) -> fmt::Result {
    for (i, c) in codes.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

pub(crate) fn parse_tuple(s: &str) -> Result<Vec<u32>> {
    s.trim()
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u32>().map_err(|_| Error::Parse(format!("invalid code {t:?}")))
        })
        .collect()
}

/// Encodes every row of `a` as an integer.
pub fn row_code(a: &BinaryMatrix) -> Result<RowCode> {
    let n = a.side();
    let codes = (0..n)
        .map(|i| a.row(i).iter().enumerate().fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << j)))
        .collect();
    RowCode::new(n, codes)
}

/// Inverse of [`row_code`].
pub fn decode(x: &RowCode) -> BinaryMatrix {
    BinaryMatrix::from_fn(x.n, |i, j| (x.codes[i] >> j) & 1 == 1).expect("n >= 1")
}

/// Row-permutation class, represented by its sorted code tuple.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CanonicalClass {
    n: usize,
    codes: Vec<u32>,
    group_sizes: Vec<usize>,
}

impl CanonicalClass {
    /// Wraps an already sorted tuple.
    pub fn from_sorted(n: usize, codes: Vec<u32>) -> Result<Self> {
        RowCode::new(n, codes.clone())?;
        if codes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Validation("class codes must be non-decreasing".into()));
        }
        let group_sizes = run_lengths(&codes);
        Ok(Self { n, codes, group_sizes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// Run lengths of equal codes, in order.
    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn profile(&self) -> Profile {
        Profile::of_codes(self.n, &self.codes)
    }

    /// Number of matrices in the class, `n! / ∏ zᵢ!`.
    pub fn multiplicity(&self) -> BigUint {
        let fact = |m: usize| (1..=m).fold(BigUint::one(), |acc, i| acc * i);
        let denom = self.group_sizes.iter().fold(BigUint::one(), |acc, &z| acc * fact(z));
        fact(self.n) / denom
    }

    pub fn to_row_code(&self) -> RowCode {
        RowCode { n: self.n, codes: self.codes.clone() }
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.codes)
    }
}

fn run_lengths(sorted: &[u32]) -> Vec<usize> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        groups.push(j - i);
        i = j;
    }
    groups
}

/// Class of `x` under row permutations.
pub fn canonicalize(x: &RowCode) -> CanonicalClass {
    let mut codes = x.codes.clone();
    codes.sort_unstable();
    let group_sizes = run_lengths(&codes);
    CanonicalClass { n: x.n, codes, group_sizes }
}

/// Row and column characteristics of a binary matrix.
///
/// `r[k]` and `c[k]` count rows and columns with exactly `k` ones,
/// `psi[k] = r[k] + c[k]`, and `eps` is the total number of ones. All three
/// vectors have length `n + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Profile {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub psi: Vec<usize>,
    pub eps: usize,
}

impl Profile {
    pub fn of_codes(n: usize, codes: &[u32]) -> Self {
        let mut r = vec![0; n + 1];
        let mut c = vec![0; n + 1];
        let mut eps = 0;
        for &x in codes {
            let t = x.count_ones() as usize;
            r[t] += 1;
            eps += t;
        }
        for u in 0..n {
            let t = codes.iter().filter(|&&x| (x >> u) & 1 == 1).count();
            c[t] += 1;
        }
        let psi = r.iter().zip(&c).map(|(a, b)| a + b).collect();
        Self { r, c, psi, eps }
    }

    pub fn n(&self) -> usize {
        self.r.len() - 1
    }
}

/// Characteristics of a row code or a class.
pub fn profile(x: &RowCode) -> Profile {
    x.profile()
}

/// Exact class size `|α|`.
pub fn multiplicity(alpha: &CanonicalClass) -> BigUint {
    alpha.multiplicity()
}

/// Binomial coefficient in `u128`; callers stay far below overflow.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of non-decreasing tuples of length `len` over `lo..=hi`.
fn tuples_from(lo: u32, hi: u32, len: usize) -> u128 {
    if lo > hi {
        return u128::from(len == 0);
    }
    let values = u128::from(hi - lo) + 1;
    binomial(values + len as u128 - 1, len as u128)
}

fn max_code(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// Total number of classes, `C(2ⁿ + n − 1, n)`.
pub fn class_count(n: usize) -> u128 {
    tuples_from(0, max_code(n), n)
}

/// Lexicographic rank of a non-decreasing tuple among all classes for `n`.
pub fn rank(n: usize, codes: &[u32]) -> Result<u128> {
    let class = CanonicalClass::from_sorted(n, codes.to_vec())?;
    let max = max_code(n);
    let mut index = 0u128;
    let mut lo = 0u32;
    for (i, &x) in class.codes.iter().enumerate() {
        let rest = n - i - 1;
        index += (lo..x).map(|v| tuples_from(v, max, rest)).sum::<u128>();
        lo = x;
    }
    Ok(index)
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, mut index: u128) -> Result<Vec<u32>> {
    if index >= class_count(n) {
        return Err(Error::Range(format!("class index {index} out of range for n = {n}")));
    }
    let max = max_code(n);
    let mut codes = Vec::with_capacity(n);
    let mut lo = 0u32;
    for i in 0..n {
        let rest = n - i - 1;
        let mut x = lo;
        loop {
            let block = tuples_from(x, max, rest);
            if index < block {
                break;
            }
            index -= block;
            x += 1;
        }
        codes.push(x);
        lo = x;
    }
    Ok(codes)
}

/// A contiguous run of the class stream: `count` classes starting at
/// `start`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassRange {
    pub n: usize,
    pub start: Vec<u32>,
    pub count: u128,
}

impl ClassRange {
    /// The range of classes with ranks in `from..to`.
    pub fn from_ranks(n: usize, from: u128, to: u128) -> Result<Self> {
        let total = class_count(n);
        if from > to || to > total {
            return Err(Error::Range(format!("rank span {from}..{to} outside 0..{total}")));
        }
        let start = if from == total { vec![max_code(n); n] } else { unrank(n, from)? };
        Ok(Self { n, start, count: to - from })
    }

    pub fn full(n: usize) -> Self {
        Self { n, start: vec![0; n], count: class_count(n) }
    }

    pub fn iter(&self) -> ClassStream {
        ClassStream { cursor: Odometer::new(self.n, self.start.clone(), self.count) }
    }
}

/// Splits ranks `from..to` into at most `parts` contiguous ranges of nearly
/// equal length.
pub fn split_ranks(n: usize, from: u128, to: u128, parts: usize) -> Result<Vec<ClassRange>> {
    let parts = parts.max(1) as u128;
    let len = to.saturating_sub(from);
    let mut out = Vec::new();
    for p in 0..parts {
        let lo = from + len * p / parts;
        let hi = from + len * (p + 1) / parts;
        if hi > lo {
            out.push(ClassRange::from_ranks(n, lo, hi)?);
        }
    }
    Ok(out)
}

/// Allocation-free cursor over non-decreasing tuples.
///
/// Advance increments the last position; on overflow it carries into the
/// rightmost position that can still grow and resets the suffix to the new
/// value.
#[derive(Clone, Debug)]
pub struct Odometer {
    codes: Vec<u32>,
    max: u32,
    remaining: u128,
}

impl Odometer {
    pub fn new(n: usize, start: Vec<u32>, count: u128) -> Self {
        Self { codes: start, max: max_code(n), remaining: count }
    }

    /// Current tuple, or `None` once the range is exhausted.
    #[inline]
    pub fn current(&self) -> Option<&[u32]> {
        (self.remaining > 0).then_some(&self.codes[..])
    }

    #[inline]
    pub fn advance(&mut self) {
        if self.remaining == 0 {
            return;
        }
        self.remaining -= 1;
        if self.remaining == 0 {
            return;
        }
        let n = self.codes.len();
        let mut i = n - 1;
        while self.codes[i] == self.max {
            // the range length guarantees a growable position exists
            i -= 1;
        }
        let v = self.codes[i] + 1;
        for c in &mut self.codes[i..] {
            *c = v;
        }
    }

    pub fn remaining(&self) -> u128 {
        self.remaining
    }
}

/// Lexicographic stream of classes.
pub struct ClassStream {
    cursor: Odometer,
}

impl Iterator for ClassStream {
    type Item = CanonicalClass;

    fn next(&mut self) -> Option<CanonicalClass> {
        let codes = self.cursor.current()?.to_vec();
        self.cursor.advance();
        let group_sizes = run_lengths(&codes);
        Some(CanonicalClass { n: codes.len(), codes, group_sizes })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.cursor.remaining()).unwrap_or(usize::MAX);
        (r, usize::try_from(self.cursor.remaining()).ok())
    }
}

/// Every class for `n`, in lexicographic order.
pub fn enumerate_classes(n: usize, guard: Guard) -> Result<ClassStream> {
    guard.check(n)?;
    Ok(ClassRange::full(n).iter())
}

/// The classes whose matrices hold exactly `ones` ones, in lexicographic
/// order. Prunes on the remaining popcount budget, so small weights stay
/// cheap at any `n` under [`MAX_N`].
pub fn classes_with_weight(n: usize, ones: usize) -> Result<Vec<CanonicalClass>> {
    Guard::forced().check(n)?;
    let max = max_code(n);
    let mut out = Vec::new();
    let mut codes = Vec::with_capacity(n);
    fn walk(
        n: usize,
        max: u32,
        lo: u32,
        budget: usize,
        codes: &mut Vec<u32>,
        out: &mut Vec<CanonicalClass>,
    ) {
        let pos = codes.len();
        if pos == n {
            if budget == 0 {
                let group_sizes = run_lengths(codes);
                out.push(CanonicalClass { n, codes: codes.clone(), group_sizes });
            }
            return;
        }
        let after = n - pos - 1;
        for x in lo..=max {
            let w = x.count_ones() as usize;
            // every later code is >= x > 0 and so carries at least one bit
            let floor = if x > 0 { after } else { 0 };
            if w + floor > budget {
                continue;
            }
            codes.push(x);
            walk(n, max, x, budget - w, codes, out);
            codes.pop();
        }
    }
    walk(n, max, 0, ones, &mut codes, &mut out);
    Ok(out)
}
