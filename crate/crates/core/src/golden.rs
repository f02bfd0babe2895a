//! Reference table of published values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::count::Counts;
use crate::decimal;
use crate::error::{Error, Result};

/// The table shipped with the crate.
pub const BUILTIN: &str = include_str!("../data/golden.txt");

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GoldenQuantity {
    Xi,
    Eta,
    P,
}

impl fmt::Display for GoldenQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoldenQuantity::Xi => "xi",
            GoldenQuantity::Eta => "eta",
            GoldenQuantity::P => "p",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldenValue {
    /// Exact integer, after expanding any power-of-ten factor.
    Integer(BigUint),
    /// Decimal digits as printed; compared against the nearest `f64`.
    Decimal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenEntry {
    /// 1-based line in the source text.
    pub line: usize,
    pub quantity: GoldenQuantity,
    pub n: usize,
    pub value: GoldenValue,
}

impl GoldenEntry {
    /// Short row label used in reports, e.g. `eta n=6 (line 14)`.
    pub fn label(&self) -> String {
        format!("{} n={} (line {})", self.quantity, self.n, self.line)
    }

    /// Compares the row with engine output; `Ok(None)` on a match, otherwise
    /// the computed rendering.
    pub fn mismatch(&self, counts: &Counts) -> Result<Option<String>> {
        if counts.n != self.n {
            return Err(Error::Dimension { left: self.n, right: counts.n });
        }
        let (ok, got) = match (&self.value, self.quantity) {
            (GoldenValue::Integer(v), GoldenQuantity::Xi) => (*v == counts.xi, counts.xi.to_string()),
            (GoldenValue::Integer(v), GoldenQuantity::Eta) => {
                let eta = counts.eta()?;
                (*v == eta, eta.to_string())
            }
            (GoldenValue::Decimal(s), GoldenQuantity::P) => {
                let got = decimal::render_f64(&counts.p());
                (*s == got, got)
            }
            _ => return Err(Error::Parse(format!("{}: value kind does not fit quantity", self.label()))),
        };
        Ok(if ok { None } else { Some(got) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenTable {
    pub version: u32,
    pub entries: Vec<GoldenEntry>,
}

impl GoldenTable {
    pub fn builtin() -> Self {
        BUILTIN.parse().expect("builtin golden table parses")
    }

    pub fn rows(&self, n: usize) -> impl Iterator<Item = &GoldenEntry> {
        self.entries.iter().filter(move |e| e.n == n)
    }

    pub fn get(&self, quantity: GoldenQuantity, n: usize) -> Option<&GoldenEntry> {
        self.entries.iter().find(|e| e.quantity == quantity && e.n == n)
    }
}

fn parse_integer(text: &str, line: usize) -> Result<BigUint> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (mantissa, exponent) = match compact.split_once('*') {
        Some((m, e)) => {
            let e = e
                .strip_prefix("10^")
                .and_then(|e| e.parse::<u32>().ok())
                .filter(|&e| e <= 1000)
                .ok_or_else(|| Error::Parse(format!("line {line}: bad power of ten {e:?}")))?;
            (m, e)
        }
        None => (compact.as_str(), 0),
    };
    if mantissa.is_empty() || !mantissa.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("line {line}: bad integer {text:?}")));
    }
    let m: BigUint = mantissa.parse().map_err(|_| Error::Parse(format!("line {line}: bad integer")))?;
    Ok(m * BigUint::from(10u32).pow(exponent))
}

fn parse_decimal(text: &str, line: usize) -> Result<String> {
    let t = text.trim();
    let valid = t
        .split_once('.')
        .is_some_and(|(i, f)| !i.is_empty() && !f.is_empty() && (i.bytes().chain(f.bytes())).all(|b| b.is_ascii_digit()));
    if !valid {
        return Err(Error::Parse(format!("line {line}: bad decimal {t:?}")));
    }
    Ok(t.to_string())
}

impl FromStr for GoldenTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut version = None;
        let mut entries: Vec<GoldenEntry> = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut parts = text.splitn(3, char::is_whitespace);
            let head = parts.next().unwrap_or_default();
            if head == "version" {
                let v = parts
                    .next()
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("line {line}: bad version")))?;
                if v != FORMAT_VERSION {
                    return Err(Error::Parse(format!("line {line}: unsupported version {v}")));
                }
                version = Some(v);
                continue;
            }
            let quantity = match head {
                "xi" => GoldenQuantity::Xi,
                "eta" => GoldenQuantity::Eta,
                "p" => GoldenQuantity::P,
                other => return Err(Error::Parse(format!("line {line}: unknown quantity {other:?}"))),
            };
            let n: usize = parts
                .next()
                .and_then(|n| n.parse().ok())
                .filter(|&n| (2..=crate::profile::MAX_N).contains(&n))
                .ok_or_else(|| Error::Parse(format!("line {line}: bad n")))?;
            let rest = parts.next().unwrap_or_default();
            let value = match quantity {
                GoldenQuantity::P => GoldenValue::Decimal(parse_decimal(rest, line)?),
                _ => GoldenValue::Integer(parse_integer(rest, line)?),
            };
            if entries.iter().any(|e| e.quantity == quantity && e.n == n) {
                return Err(Error::Parse(format!("line {line}: duplicate row {quantity} n={n}")));
            }
            entries.push(GoldenEntry { line, quantity, n, value });
        }
        let version = version.ok_or_else(|| Error::Parse("missing version line".into()))?;
        Ok(Self { version, entries })
    }
}
