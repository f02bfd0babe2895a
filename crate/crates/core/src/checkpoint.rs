//! Resumable enumeration state.
//!
//! ```text
//! spmat-checkpoint 1
//! n 6
//! next 0,0,0,1,3,7
//! xi -1234
//! q 46656,46656,...
//! ```
//!
//! `next` is the first class not yet folded in (or `end`), `xi` the signed
//! partial `ε ≥ 2` sum and `q` the `n² + 1` partial per-weight sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::count::{tally_ranks, Config, Counts, Sums};
use crate::error::{Error, Result};
use crate::profile::{self, write_tuple};

const MAGIC: &str = "spmat-checkpoint 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    /// First class still to be processed; `None` once the stream is done.
    pub next: Option<Vec<u32>>,
    pub sums: Sums,
}

impl Checkpoint {
    pub fn start(n: usize) -> Self {
        Self { n, next: Some(vec![0; n]), sums: Sums::zero(n) }
    }

    pub fn is_done(&self) -> bool {
        self.next.is_none()
    }
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{MAGIC}")?;
        writeln!(f, "n {}", self.n)?;
        match &self.next {
            Some(codes) => {
                f.write_str("next ")?;
                write_tuple(f, codes)?;
                writeln!(f)?;
            }
            None => writeln!(f, "next end")?,
        }
        writeln!(f, "xi {}", self.sums.xi)?;
        let q: Vec<String> = self.sums.q.iter().map(ToString::to_string).collect();
        writeln!(f, "q {}", q.join(","))
    }
}

fn field<'a>(line: Option<&'a str>, name: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{name}` line")))?;
    line.strip_prefix(name)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected `{name} ...`, found {line:?}")))
}

impl FromStr for Checkpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim_end).filter(|l| !l.is_empty());
        if lines.next() != Some(MAGIC) {
            return Err(Error::Parse("not a checkpoint file".into()));
        }
        let n: usize = field(lines.next(), "n")?
            .parse()
            .map_err(|_| Error::Parse("invalid n".into()))?;
        profile::Guard::forced().check(n)?;
        let next = match field(lines.next(), "next")? {
            "end" => None,
            tuple => {
                let codes = profile::parse_tuple(tuple)?;
                profile::CanonicalClass::from_sorted(n, codes.clone())?;
                Some(codes)
            }
        };
        let xi: BigInt = field(lines.next(), "xi")?
            .parse()
            .map_err(|_| Error::Parse("invalid xi".into()))?;
        let q = field(lines.next(), "q")?
            .split(',')
            .map(|t| t.parse::<BigUint>().map_err(|_| Error::Parse(format!("invalid q value {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if q.len() != n * n + 1 {
            return Err(Error::Parse(format!("expected {} q values, found {}", n * n + 1, q.len())));
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected line {extra:?}")));
        }
        Ok(Self { n, next, sums: Sums { q, xi } })
    }
}

/// Continues `state` in batches of `batch` classes, handing every
/// intermediate state to `save`, and returns the final counts.
pub fn run(
    mut state: Checkpoint,
    config: &Config,
    batch: u128,
    mut save: impl FnMut(&Checkpoint) -> Result<()>,
) -> Result<Counts> {
    let n = state.n;
    if n < 2 {
        return Err(Error::Range(format!("n must be at least 2, got {n}")));
    }
    config.guard.check(n)?;
    let total = profile::class_count(n);
    let batch = batch.max(1);
    while let Some(next) = state.next.take() {
        let from = profile::rank(n, &next)?;
        let to = (from + batch).min(total);
        let tally = tally_ranks(n, from, to, config.workers)?;
        state.sums.add(&tally.sums(n));
        state.next = if to == total { None } else { Some(profile::unrank(n, to)?) };
        save(&state)?;
    }
    Counts::from_sums(n, state.sums)
}
