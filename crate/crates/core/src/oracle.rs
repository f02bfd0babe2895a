//! Brute-force ground truth for small `n`.
//!
//! Everything here works from the definitions alone: explicit enumeration
//! of pair matrices and position-by-position comparison. Nothing in this
//! module touches the profile or class-term code.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{self, agreement_count, BinaryMatrix, PiMatrix, SPermutationMatrix};

/// Largest `n` the oracle will enumerate.
pub const ORACLE_MAX_N: usize = 3;

fn guard(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Range(format!("n must be at least {min}, got {n}")));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::Guard { n, limit: ORACLE_MAX_N });
    }
    Ok(())
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u32 + 1);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Every pair matrix for `n`, one per `(2n)`-tuple of permutations,
/// deduplicated by value.
pub fn enumerate_pi(n: usize) -> Result<Vec<PiMatrix>> {
    guard(n, 1)?;
    let perms = permutations(n);
    let f = perms.len();
    let slots = 2 * n;
    let mut index = vec![0usize; slots];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    loop {
        let rows: Vec<&[u32]> = index[..n].iter().map(|&i| perms[i].as_slice()).collect();
        let cols: Vec<&[u32]> = index[n..].iter().map(|&i| perms[i].as_slice()).collect();
        let pi = PiMatrix::from_permutations(&rows, &cols)?;
        if seen.insert(pi.clone()) {
            out.push(pi);
        }
        let mut pos = slots;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < f {
                break;
            }
            index[pos] = 0;
        }
    }
}

/// Number of pair matrices sharing no cell with `base` (identity by default).
pub fn brute_xi(n: usize, base: Option<&PiMatrix>) -> Result<BigUint> {
    guard(n, 2)?;
    let base = base.cloned().unwrap_or_else(|| PiMatrix::identity(n));
    let all = enumerate_pi(n)?;
    let mut count = 0u64;
    for other in &all {
        if agreement_count(&base, other)? == 0 {
            count += 1;
        }
    }
    Ok(count.into())
}

/// All `n × n` binary matrices with exactly `k` ones.
fn supports(n: usize, k: usize) -> Vec<BinaryMatrix> {
    let cells = n * n;
    (0u64..(1 << cells))
        .filter(|bits| bits.count_ones() as usize == k)
        .map(|bits| BinaryMatrix::from_fn(n, |i, j| (bits >> (i * n + j)) & 1 == 1).unwrap())
        .collect()
}

/// Sum over supports `A` with `k` ones of the number of pair matrices that
/// agree with the identity base at every cell of `A`, by direct filtering.
pub fn brute_q(n: usize, k: usize) -> Result<BigUint> {
    guard(n, 2)?;
    if n == 3 && k > 3 {
        return Err(Error::Guard { n, limit: 3 });
    }
    if k > n * n {
        return Err(Error::Range(format!("k = {k} outside 0..={}", n * n)));
    }
    let base = PiMatrix::identity(n);
    let all = enumerate_pi(n)?;
    let mut total = 0u64;
    for support in supports(n, k) {
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| support.get(i, j))
            .collect();
        total += all
            .iter()
            .filter(|other| cells.iter().all(|&(i, j)| other.get(i, j) == base.get(i, j)))
            .count() as u64;
    }
    Ok(total.into())
}

/// `hist[m]` = number of pair matrices with exactly `m` cells equal to
/// `base`, for `m = 0..=n²`.
pub fn agreement_histogram(n: usize, base: &PiMatrix) -> Result<Vec<u64>> {
    guard(n, 2)?;
    if base.side() != n {
        return Err(Error::Dimension { left: n, right: base.side() });
    }
    let mut hist = vec![0u64; n * n + 1];
    for other in enumerate_pi(n)? {
        hist[agreement_count(base, &other)?] += 1;
    }
    Ok(hist)
}

/// Dense S-permutation matrices of side 4, from the 24 permutation matrices.
fn sigma_four() -> Vec<BinaryMatrix> {
    permutations(4)
        .into_iter()
        .map(|p| BinaryMatrix::from_fn(4, |i, j| p[i] as usize == j + 1).unwrap())
        .filter(|m| matrix::is_s_permutation(m).unwrap())
        .collect()
}

/// A family of four pairwise disjoint `4 × 4` S-permutation matrices, found
/// by backtracking over all sixteen.
pub fn search_disjoint_family(n: usize) -> Result<Vec<SPermutationMatrix>> {
    if n != 2 {
        return Err(Error::Range(format!("family search supports n = 2 only, got {n}")));
    }
    let pool = sigma_four();
    fn extend(pool: &[BinaryMatrix], start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == 4 {
            return true;
        }
        for cand in start..pool.len() {
            let fits = chosen
                .iter()
                .all(|&c| matrix::is_disjoint_binary(&pool[c], &pool[cand]).unwrap());
            if fits {
                chosen.push(cand);
                if extend(pool, cand + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if !extend(&pool, 0, &mut chosen) {
        return Err(Error::Validation("no disjoint family exists".into()));
    }
    chosen.iter().map(|&i| SPermutationMatrix::from_dense(&pool[i])).collect()
}
