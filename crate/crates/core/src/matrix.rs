//! Binary matrices, S-permutation matrices and their compact pair-matrix
//! form, disjointness, and Sudoku composition.
//!
//! Public indices are 0-based; positions reported in errors and in the
//! text format are 1-based.
//!
//! # Text format
//!
//! One matrix row per line, cells separated by whitespace. Binary and
//! integer cells are decimal integers, ordered pairs are written `a,b`.
//! Blank lines before and after the rows are ignored.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Returns `n` such that `side == n * n`.
pub fn block_size(side: usize) -> Result<usize> {
    let mut n = (side as f64).sqrt() as usize;
    while n * n > side {
        n -= 1;
    }
    while (n + 1) * (n + 1) <= side {
        n += 1;
    }
    if n * n == side && n > 0 {
        Ok(n)
    } else {
        Err(Error::Shape(side))
    }
}

fn check_side(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::Dimension { left, right })
    }
}

/// `true` if `values` is a permutation of `1..=n`.
pub fn is_permutation(values: &[u32], n: usize) -> bool {
    if values.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in values {
        let v = v as usize;
        if v == 0 || v > n || seen[v - 1] {
            return false;
        }
        seen[v - 1] = true;
    }
    true
}

/// Square matrix over {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("side length must be at least 1".into()));
        }
        Ok(Self { n, cells: vec![false; n * n] })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..n {
                m.cells[i * n + j] = f(i, j);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {} has {} cells, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.cells[i * n + j] = match v {
                    0 => false,
                    1 => true,
                    _ => {
                        return Err(Error::Validation(format!(
                            "cell ({}, {}) holds {}, expected 0 or 1",
                            i + 1,
                            j + 1,
                            v
                        )))
                    }
                };
            }
        }
        Ok(m)
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.cells[i * self.n + j] = value;
    }

    /// Number of cells equal to 1.
    pub fn ones(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<&str> = self.row(i).iter().map(|&b| if b { "1" } else { "0" }).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

fn parse_grid<T>(s: &str, mut cell: impl FnMut(&str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows: Vec<Vec<T>> = s
        .lines()
        .map(str::trim)
        .skip_while(|l| l.is_empty())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .skip_while(|l| l.is_empty())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|line| line.split_whitespace().map(&mut cell).collect::<Result<Vec<T>>>())
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {} has {} cells in a matrix with {} rows",
            i + 1,
            row.len(),
            n
        )));
    }
    Ok(rows)
}

fn parse_u32(token: &str) -> Result<u32> {
    token
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("invalid integer {token:?}")))
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_grid(s, |t| match t {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            _ => Err(Error::Parse(format!("invalid bit {t:?}"))),
        })?;
        Self::from_rows(&rows)
    }
}

/// `true` iff no position holds 1 in both matrices.
pub fn is_disjoint_binary(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<bool> {
    check_side(a.n, b.n)?;
    Ok(!a.cells.iter().zip(&b.cells).any(|(&x, &y)| x && y))
}

/// Checks the one-per-row, one-per-column and one-per-block conditions of
/// an `n² × n²` matrix.
pub fn is_s_permutation(a: &BinaryMatrix) -> Result<bool> {
    let side = a.side();
    let n = block_size(side)?;
    let mut rows = vec![0usize; side];
    let mut cols = vec![0usize; side];
    let mut blocks = vec![0usize; side];
    for i in 0..side {
        for j in 0..side {
            if a.get(i, j) {
                rows[i] += 1;
                cols[j] += 1;
                blocks[(i / n) * n + j / n] += 1;
            }
        }
    }
    Ok(rows.iter().chain(&cols).chain(&blocks).all(|&c| c == 1))
}

/// An ordered pair `⟨a, b⟩` with 1-based components.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Pair {
    pub a: u32,
    pub b: u32,
}

impl Pair {
    pub const fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected a,b but found {s:?}")))?;
        Ok(Self::new(parse_u32(a)?, parse_u32(b)?))
    }
}

/// Pair matrix: an `n × n` matrix of ordered pairs whose first components
/// form a permutation of `[n]` along every row and whose second components
/// form a permutation of `[n]` down every column.
///
/// This is the compact image of an `n² × n²` S-permutation matrix: cell
/// `(i, j)` holds the within-block coordinates of the single 1 in block
/// `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PiMatrix {
    n: usize,
    cells: Vec<Pair>,
}

impl PiMatrix {
    /// Validates and wraps a row-major list of pairs.
    pub fn new(n: usize, cells: Vec<Pair>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("side length must be at least 1".into()));
        }
        if cells.len() != n * n {
            return Err(Error::Validation(format!(
                "expected {} cells, found {}",
                n * n,
                cells.len()
            )));
        }
        for i in 0..n {
            let firsts: Vec<u32> = (0..n).map(|j| cells[i * n + j].a).collect();
            if !is_permutation(&firsts, n) {
                return Err(Error::Validation(format!(
                    "first components of row {} are not a permutation of [{}]",
                    i + 1,
                    n
                )));
            }
        }
        for j in 0..n {
            let seconds: Vec<u32> = (0..n).map(|i| cells[i * n + j].b).collect();
            if !is_permutation(&seconds, n) {
                return Err(Error::Validation(format!(
                    "second components of column {} are not a permutation of [{}]",
                    j + 1,
                    n
                )));
            }
        }
        Ok(Self { n, cells })
    }

    pub fn from_rows(rows: &[Vec<(u32, u32)>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Validation(format!("row {} has the wrong length", i + 1)));
        }
        let cells = rows.iter().flatten().map(|&(a, b)| Pair::new(a, b)).collect();
        Self::new(n, cells)
    }

    /// Builds the matrix whose cell `(i, j)` is `⟨rows[i](j), cols[j](i)⟩`.
    pub fn from_permutations<P: AsRef<[u32]>>(rows: &[P], cols: &[P]) -> Result<Self> {
        let n = rows.len();
        if cols.len() != n {
            return Err(Error::Dimension { left: n, right: cols.len() });
        }
        for (kind, perms) in [("row", rows), ("column", cols)] {
            for (idx, p) in perms.iter().enumerate() {
                if !is_permutation(p.as_ref(), n) {
                    return Err(Error::Validation(format!(
                        "{kind} permutation {} is not a permutation of [{n}]",
                        idx + 1
                    )));
                }
            }
        }
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(Pair::new(rows[i].as_ref()[j], cols[j].as_ref()[i]));
            }
        }
        Self::new(n, cells)
    }

    /// The pair matrix built from identity permutations.
    pub fn identity(n: usize) -> Self {
        let id: Vec<u32> = (1..=n as u32).collect();
        let perms = vec![id; n];
        Self::from_permutations(&perms, &perms).expect("identity permutations are valid")
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Pair {
        self.cells[i * self.n + j]
    }

    pub fn cells(&self) -> &[Pair] {
        &self.cells
    }

    /// The row permutations `ρ₁..ρₙ` (first components read along rows).
    pub fn row_permutations(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).a).collect()).collect()
    }

    /// The column permutations `σ₁..σₙ` (second components read down columns).
    pub fn column_permutations(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j).b).collect()).collect()
    }
}

impl fmt::Display for PiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PiMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_grid(s, Pair::from_str)?;
        let n = rows.len();
        Self::new(n, rows.into_iter().flatten().collect())
    }
}

/// Number of positions holding identical pairs in both matrices.
pub fn agreement_count(x: &PiMatrix, y: &PiMatrix) -> Result<usize> {
    check_side(x.n, y.n)?;
    Ok(x.cells.iter().zip(&y.cells).filter(|(p, q)| p == q).count())
}

/// `true` iff the two pair matrices have no component-wise equal elements.
pub fn is_disjoint_pi(x: &PiMatrix, y: &PiMatrix) -> Result<bool> {
    Ok(agreement_count(x, y)? == 0)
}

/// An `n² × n²` S-permutation matrix, stored as the within-block
/// coordinates of the single 1 of every block.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SPermutationMatrix {
    n: usize,
    // block (k, l) at index k * n + l
    coords: Vec<Pair>,
}

impl SPermutationMatrix {
    /// Validates a dense `n² × n²` binary matrix.
    pub fn from_dense(dense: &BinaryMatrix) -> Result<Self> {
        let n = block_size(dense.side())?;
        if !is_s_permutation(dense)? {
            return Err(Error::Validation(
                "not an S-permutation matrix: some row, column or block does not hold exactly one 1"
                    .into(),
            ));
        }
        let mut coords = vec![Pair::new(0, 0); n * n];
        for i in 0..n * n {
            for j in 0..n * n {
                if dense.get(i, j) {
                    coords[(i / n) * n + j / n] = Pair::new((i % n) as u32 + 1, (j % n) as u32 + 1);
                }
            }
        }
        Ok(Self { n, coords })
    }

    /// Block size `n`; the dense matrix has side `n²`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Within-block coordinates (1-based) of the 1 in block `(k, l)`.
    pub fn block(&self, k: usize, l: usize) -> Pair {
        self.coords[k * self.n + l]
    }

    pub fn to_dense(&self) -> BinaryMatrix {
        let n = self.n;
        let mut dense = BinaryMatrix::zeros(n * n).expect("n >= 1");
        for k in 0..n {
            for l in 0..n {
                let p = self.block(k, l);
                dense.set(k * n + p.a as usize - 1, l * n + p.b as usize - 1, true);
            }
        }
        dense
    }

    /// Cell positions (0-based) of the ones in the dense form.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n).map(move |idx| {
            let (k, l) = (idx / n, idx % n);
            let p = self.coords[idx];
            (k * n + p.a as usize - 1, l * n + p.b as usize - 1)
        })
    }
}

impl fmt::Display for SPermutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_dense().fmt(f)
    }
}

impl FromStr for SPermutationMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_dense(&s.parse()?)
    }
}

/// Reads the block coordinates of an S-permutation matrix as a pair matrix.
pub fn sigma_to_pi(a: &SPermutationMatrix) -> PiMatrix {
    PiMatrix::new(a.n, a.coords.clone()).expect("S-permutation coordinates form a valid pair matrix")
}

/// Places a single 1 in every block at the coordinates given by `pi`.
pub fn pi_to_sigma(pi: &PiMatrix) -> SPermutationMatrix {
    SPermutationMatrix { n: pi.n, coords: pi.cells.clone() }
}

/// Dense disjointness of two S-permutation matrices.
pub fn is_disjoint_sigma(a: &SPermutationMatrix, b: &SPermutationMatrix) -> Result<bool> {
    is_disjoint_binary(&a.to_dense(), &b.to_dense())
}

/// Square matrix of nonnegative integers, e.g. a Sudoku candidate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    side: usize,
    cells: Vec<u32>,
}

impl IntMatrix {
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let side = rows.len();
        if side == 0 {
            return Err(Error::Range("side length must be at least 1".into()));
        }
        let mut cells = Vec::with_capacity(side * side);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != side {
                return Err(Error::Validation(format!("row {} has the wrong length", i + 1)));
            }
            cells.extend_from_slice(row);
        }
        Ok(Self { side, cells })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.side + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.side {
            let row: Vec<String> = (0..self.side).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_rows(&parse_grid(s, parse_u32)?)
    }
}

/// `true` iff every row, column and block of the `n² × n²` matrix is a
/// permutation of `[n²]`.
pub fn is_sudoku(m: &IntMatrix) -> Result<bool> {
    let side = m.side();
    let n = block_size(side)?;
    let line_ok = |cells: Vec<u32>| is_permutation(&cells, side);
    for i in 0..side {
        if !line_ok((0..side).map(|j| m.get(i, j)).collect()) {
            return Ok(false);
        }
        if !line_ok((0..side).map(|j| m.get(j, i)).collect()) {
            return Ok(false);
        }
        let (bk, bl) = (i / n, i % n);
        if !line_ok((0..side).map(|t| m.get(bk * n + t / n, bl * n + t % n)).collect()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A validated Sudoku matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SudokuMatrix(IntMatrix);

impl SudokuMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if is_sudoku(&m)? {
            Ok(Self(m))
        } else {
            Err(Error::Validation("not a Sudoku matrix".into()))
        }
    }

    pub fn n(&self) -> usize {
        block_size(self.0.side).expect("validated on construction")
    }

    pub fn as_matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Splits the matrix into the indicator matrices of symbols `1..=n²`.
    pub fn decompose(&self) -> Vec<SPermutationMatrix> {
        let side = self.0.side;
        (1..=side as u32)
            .map(|symbol| {
                let dense = BinaryMatrix::from_fn(side, |i, j| self.0.get(i, j) == symbol)
                    .expect("side >= 1");
                SPermutationMatrix::from_dense(&dense)
                    .expect("symbol indicators of a Sudoku matrix are S-permutation matrices")
            })
            .collect()
    }
}

impl fmt::Display for SudokuMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Weighted sum `1·A₁ + 2·A₂ + … + n²·A_{n²}` of a pairwise disjoint family.
pub fn compose_sudoku(family: &[SPermutationMatrix]) -> Result<SudokuMatrix> {
    let first = family.first().ok_or(Error::Arity { expected: 0, found: 0 });
    let n = match first {
        Ok(a) => a.n,
        Err(_) => return Err(Error::Arity { expected: 1, found: 0 }),
    };
    if family.len() != n * n {
        return Err(Error::Arity { expected: n * n, found: family.len() });
    }
    if let Some(a) = family.iter().find(|a| a.n != n) {
        return Err(Error::Dimension { left: n, right: a.n });
    }
    let dense: Vec<BinaryMatrix> = family.iter().map(SPermutationMatrix::to_dense).collect();
    for s in 0..dense.len() {
        for t in s + 1..dense.len() {
            if !is_disjoint_binary(&dense[s], &dense[t])? {
                return Err(Error::NotDisjoint { first: s + 1, second: t + 1 });
            }
        }
    }
    let side = n * n;
    let mut rows = vec![vec![0u32; side]; side];
    for (weight, a) in family.iter().enumerate() {
        for (i, j) in a.ones() {
            rows[i][j] += weight as u32 + 1;
        }
    }
    let m = IntMatrix::from_rows(&rows)?;
    debug_assert!(is_sudoku(&m).unwrap_or(false));
    Ok(SudokuMatrix(m))
}

/// Deterministic stream of uniform S-permutation matrices.
///
/// Uses ChaCha8 seeded with `seed_from_u64` and Fisher–Yates shuffles of
/// `[1..=n]`: `n` row permutations followed by `n` column permutations per
/// matrix.
pub struct SPermutationSampler {
    n: usize,
    rng: ChaCha8Rng,
}

impl SPermutationSampler {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("n must be at least 1".into()));
        }
        Ok(Self { n, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn next_pi(&mut self) -> PiMatrix {
        let mut draw = || {
            let mut p: Vec<u32> = (1..=self.n as u32).collect();
            p.shuffle(&mut self.rng);
            p
        };
        let rows: Vec<Vec<u32>> = (0..self.n).map(|_| draw()).collect();
        let cols: Vec<Vec<u32>> = (0..self.n).map(|_| draw()).collect();
        PiMatrix::from_permutations(&rows, &cols).expect("shuffles are permutations")
    }
}

impl Iterator for SPermutationSampler {
    type Item = SPermutationMatrix;

    fn next(&mut self) -> Option<SPermutationMatrix> {
        Some(pi_to_sigma(&self.next_pi()))
    }
}

/// The first matrix of [`SPermutationSampler`] for `seed`.
pub fn random_s_permutation(n: usize, seed: u64) -> Result<SPermutationMatrix> {
    Ok(SPermutationSampler::new(n, seed)?.next().expect("sampler is infinite"))
}
