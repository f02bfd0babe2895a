//! Replays the checked-in fuzz seeds through the same properties the fuzz
//! targets assert.

use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use spmat::checkpoint::Checkpoint;
use spmat::golden::GoldenTable;
use spmat::matrix::{BinaryMatrix, IntMatrix, PiMatrix, SPermutationMatrix};
use spmat::profile::RowCode;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    out
}

/// Returns (accepted, rejected) seed counts.
fn round_trip<T>(target: &str) -> (usize, usize)
where
    T: FromStr + Display,
{
    let mut accepted = 0;
    let mut rejected = 0;
    for (name, text) in seeds(target) {
        match text.parse::<T>() {
            Ok(value) => {
                accepted += 1;
                let shown = value.to_string();
                let again = shown.parse::<T>().unwrap_or_else(|_| panic!("{target}/{name}: rendering does not parse"));
                assert_eq!(again.to_string(), shown, "{target}/{name}");
            }
            Err(_) => rejected += 1,
        }
    }
    (accepted, rejected)
}

#[test]
fn matrix_seeds() {
    assert_eq!(round_trip::<BinaryMatrix>("binary_matrix"), (3, 1));
    assert_eq!(round_trip::<PiMatrix>("pi_matrix"), (2, 2));
    assert_eq!(round_trip::<SPermutationMatrix>("s_permutation"), (1, 2));
    assert_eq!(round_trip::<IntMatrix>("int_matrix"), (2, 1));
}

#[test]
fn row_code_seeds() {
    assert_eq!(round_trip::<RowCode>("row_code"), (2, 2));
}

#[test]
fn checkpoint_seeds() {
    assert_eq!(round_trip::<Checkpoint>("checkpoint"), (3, 1));
}

#[test]
fn golden_seeds() {
    let results: Vec<(String, bool)> = seeds("golden_table")
        .into_iter()
        .map(|(name, text)| (name, text.parse::<GoldenTable>().is_ok()))
        .collect();
    let expected = [("builtin", true), ("duplicate", false), ("no_version", false), ("small", true)];
    let expected: Vec<(String, bool)> = expected.iter().map(|(n, ok)| (n.to_string(), *ok)).collect();
    assert_eq!(results, expected);
}
