//! Exact counting of disjoint pairs of `n² × n²` S-permutation matrices.
//!
//! An S-permutation matrix has exactly one 1 in every row, every column and
//! every canonical `n × n` block. This crate counts, for every block size
//! `n`, the number `ξₙ` of S-permutation matrices disjoint from a fixed
//! one, the number `ηₙ` of unordered disjoint pairs, and the probability
//! `pₙ` that two random S-permutation matrices are disjoint.
//!
//! The count is an inclusion–exclusion sum over row-permutation classes of
//! `n × n` binary matrices ([`profile`]), evaluated exactly in big-integer
//! arithmetic ([`count`]). [`oracle`] recounts the small cases by brute
//! force from the definitions in [`matrix`].

pub mod checkpoint;
pub mod count;
pub mod decimal;
pub mod error;
pub mod golden;
pub mod matrix;
pub mod oracle;
pub mod profile;

pub use count::{compute, sigma_count, BigNat, BigRatio, Config, Counts, SignedBig};
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, IntMatrix, Pair, PiMatrix, SPermutationMatrix, SudokuMatrix};
pub use profile::{CanonicalClass, Guard, Profile, RowCode};
