use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use spmat::checkpoint::{self, Checkpoint};
use spmat::count::{self, Config, Counts};
use spmat::golden::GoldenTable;
use spmat::matrix::{self, PiMatrix, SPermutationSampler};
use spmat::profile::{Guard, DEFAULT_GUARD};
use spmat::{decimal, oracle, Error};

use crate::record::{Check, Quantity, ResultRecord, SampleReport, VerifyReport};
use crate::{Command, Common, Format};

/// Classes folded in between two checkpoint writes.
const CHECKPOINT_BATCH: u128 = 1 << 24;

const DEFAULT_DIGITS: usize = 16;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard { limit, .. } if limit < spmat::profile::MAX_N => {
                Self { code: 3, message: format!("{e} (--force raises it to {})", spmat::profile::MAX_N) }
            }
            Error::Guard { .. } => Self { code: 3, message: e.to_string() },
            Error::Range(_) => Self { code: 2, message: e.to_string() },
            _ => Self { code: 1, message: e.to_string() },
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Compute { n, quantity, k, digits, float, checkpoint, common } => {
            compute(n, quantity, k, digits, float, checkpoint.as_deref(), &common)
        }
        Command::Table { max_n, digits, common } => table(max_n, digits, &common),
        Command::Verify { max_n, golden, common } => verify(max_n, golden, &common),
        Command::Sample { n, count, seed, check_disjoint, summary_only, format } => {
            sample(n, count, seed, check_disjoint, summary_only, format)
        }
        Command::Oracle { n, format } => run_oracle(n, format),
    }
}

fn config(common: &Common) -> Config {
    let workers = common.workers.unwrap_or_else(|| Config::default().workers).max(1);
    Config { guard: Guard { limit: DEFAULT_GUARD, force: common.force }, workers }
}

fn print_json<T: serde::Serialize>(value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    println!("{text}");
    Ok(())
}

fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn counts_with_checkpoint(n: usize, cfg: &Config, path: &Path) -> Result<Counts, Failure> {
    let state = if path.exists() {
        let state: Checkpoint = fs::read_to_string(path)?.parse()?;
        if state.n != n {
            return Err(Failure::usage(format!(
                "checkpoint {} is for n = {}, not n = {n}",
                path.display(),
                state.n
            )));
        }
        state
    } else {
        Checkpoint::start(n)
    };
    let counts = checkpoint::run(state, cfg, CHECKPOINT_BATCH, |cp| {
        write_atomic(path, &cp.to_string())
            .map_err(|e| Error::Validation(format!("cannot write checkpoint {}: {e}", path.display())))
    })?;
    Ok(counts)
}

fn ratio_string(r: &spmat::BigRatio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn p_record(n: usize, counts: &Counts, digits: Option<usize>, workers: usize, elapsed_ms: u64) -> ResultRecord {
    let p = counts.p();
    let value = match digits {
        Some(d) => decimal::render_significant(&p, d),
        None => decimal::render_f64(&p),
    };
    ResultRecord {
        n,
        quantity: Quantity::P,
        k: None,
        value,
        value_ratio: Some(ratio_string(&p)),
        digits,
        elapsed_ms,
        workers,
    }
}

fn compute(
    n: usize,
    quantity: Quantity,
    k: Option<usize>,
    digits: Option<usize>,
    float: bool,
    checkpoint: Option<&Path>,
    common: &Common,
) -> CmdResult {
    let cfg = config(common);
    let start = Instant::now();
    let counts = |cfg: &Config| -> Result<Counts, Failure> {
        match checkpoint {
            Some(path) => counts_with_checkpoint(n, cfg, path),
            None => Ok(count::compute(n, cfg)?),
        }
    };
    let base = |quantity, value: String| ResultRecord {
        n,
        quantity,
        k: None,
        value,
        value_ratio: None,
        digits: None,
        elapsed_ms: 0,
        workers: cfg.workers,
    };
    let mut record = match quantity {
        Quantity::SigmaCount => {
            if n == 0 {
                return Err(Failure::usage("n must be at least 1"));
            }
            base(quantity, spmat::sigma_count(n).to_string())
        }
        Quantity::Q => {
            let k = k.ok_or_else(|| Failure::usage("--quantity q needs --k"))?;
            let value = match checkpoint {
                Some(_) => {
                    if k > n * n {
                        return Err(Failure::usage(format!("k = {k} outside 0..={}", n * n)));
                    }
                    counts(&cfg)?.q.swap_remove(k)
                }
                None => count::q(n, k, &cfg)?,
            };
            ResultRecord { k: Some(k), ..base(quantity, value.to_string()) }
        }
        Quantity::Xi => base(quantity, counts(&cfg)?.xi.to_string()),
        Quantity::Eta => base(quantity, counts(&cfg)?.eta()?.to_string()),
        Quantity::P => {
            let digits = if float { None } else { Some(digits.unwrap_or(DEFAULT_DIGITS)) };
            p_record(n, &counts(&cfg)?, digits, cfg.workers, 0)
        }
    };
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    match common.format {
        Format::Json => print_json(&record),
        Format::Text => {
            println!("{}", record.value);
            Ok(())
        }
    }
}

fn table(max_n: usize, digits: Option<usize>, common: &Common) -> CmdResult {
    let cfg = config(common);
    if max_n < 2 {
        return Err(Failure::usage("--max-n must be at least 2"));
    }
    cfg.guard.check(max_n)?;
    let digits = digits.unwrap_or(DEFAULT_DIGITS);
    let mut records = Vec::new();
    for n in 2..=max_n {
        let start = Instant::now();
        let counts = count::compute(n, &cfg)?;
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let rec = |quantity, value| ResultRecord {
            n,
            quantity,
            k: None,
            value,
            value_ratio: None,
            digits: None,
            elapsed_ms,
            workers: cfg.workers,
        };
        records.push(rec(Quantity::Xi, counts.xi.to_string()));
        records.push(rec(Quantity::Eta, counts.eta()?.to_string()));
        records.push(p_record(n, &counts, Some(digits), cfg.workers, elapsed_ms));
    }
    match common.format {
        Format::Json => print_json(&records),
        Format::Text => {
            for row in records.chunks(3) {
                println!("n={}  xi={}  eta={}  p={}", row[0].n, row[0].value, row[1].value, row[2].value);
            }
            Ok(())
        }
    }
}

struct Checks {
    list: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: Option<String>) {
        self.list.push(Check { name: name.into(), ok, detail });
    }

    fn equal<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, left: &T, right: &T) {
        let ok = left == right;
        let detail = (!ok).then(|| format!("{left} != {right}"));
        self.push(name, ok, detail);
    }
}

fn verify(max_n: usize, golden: Option<PathBuf>, common: &Common) -> CmdResult {
    let cfg = config(common);
    if max_n < 2 {
        return Err(Failure::usage("--max-n must be at least 2"));
    }
    cfg.guard.check(max_n)?;
    let table = match &golden {
        Some(path) => fs::read_to_string(path)?.parse::<GoldenTable>()?,
        None => GoldenTable::builtin(),
    };
    let mut checks = Checks { list: Vec::new() };

    for n in 2..=max_n {
        let counts = count::compute(n, &cfg)?;
        for row in table.rows(n) {
            let detail = row.mismatch(&counts)?.map(|got| format!("engine gives {got}"));
            checks.push(format!("golden {}", row.label()), detail.is_none(), detail);
        }
        if n <= 4 {
            let alt: BigInt = counts
                .q
                .iter()
                .enumerate()
                .skip(2)
                .map(|(k, v)| if k % 2 == 0 { BigInt::from(v.clone()) } else { -BigInt::from(v.clone()) })
                .sum();
            checks.equal(format!("alternating sum n={n}"), &alt, &BigInt::from(counts.xi.clone()));
        }
        if n <= oracle::ORACLE_MAX_N {
            checks.equal(format!("oracle xi n={n}"), &oracle::brute_xi(n, None)?, &counts.xi);
            let max_k = if n == 2 { 4 } else { 3 };
            for k in 0..=max_k {
                checks.equal(format!("oracle q n={n} k={k}"), &oracle::brute_q(n, k)?, &counts.q[k]);
            }
            let hist = oracle::agreement_histogram(n, &PiMatrix::identity(n))?;
            let total: u64 = hist.iter().sum();
            checks.equal(format!("histogram total n={n}"), &num_bigint::BigUint::from(total), &counts.sigma());
            for k in 0..=n * n {
                let weighted: num_bigint::BigUint = hist
                    .iter()
                    .enumerate()
                    .map(|(m, &e)| num_bigint::BigUint::from(spmat::profile::binomial(m as u128, k as u128) * u128::from(e)))
                    .sum();
                checks.equal(format!("histogram binomial n={n} k={k}"), &weighted, &counts.q[k]);
            }
        }
    }
    for n in 2..=DEFAULT_GUARD {
        let sigma = spmat::sigma_count(n);
        let q0 = count::q(n, 0, &cfg)?;
        let q1 = count::q(n, 1, &cfg)?;
        checks.equal(format!("identity q(n,0) = sigma n={n}"), &q0, &sigma);
        checks.equal(format!("identity q(n,1) = sigma n={n}"), &q1, &sigma);
    }

    let first_failure = checks.list.iter().find(|c| !c.ok).map(|c| c.name.clone());
    let report = VerifyReport { max_n, passed: first_failure.is_none(), first_failure, checks: checks.list };
    match common.format {
        Format::Json => print_json(&report)?,
        Format::Text => {
            for c in &report.checks {
                match &c.detail {
                    Some(d) => println!("FAIL {}: {d}", c.name),
                    None => println!("ok   {}", c.name),
                }
            }
        }
    }
    match report.first_failure {
        Some(name) => Err(Failure::verification(format!("verification failed: {name}"))),
        None => Ok(()),
    }
}

fn sample(n: usize, count: usize, seed: u64, check_disjoint: bool, summary_only: bool, format: Format) -> CmdResult {
    let sampler = SPermutationSampler::new(n, seed)?;
    let mut matrices = Vec::new();
    let (mut pairs, mut equal, mut disjoint) = (0u64, 0u64, 0u64);
    let mut previous = None;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (i, m) in sampler.take(count).enumerate() {
        if !summary_only {
            match format {
                Format::Text => {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    write!(out, "{m}")?;
                }
                Format::Json => matrices.push(m.to_string()),
            }
        }
        if check_disjoint {
            match previous.take() {
                None => previous = Some(m),
                Some(p) if p == m => equal += 1,
                Some(p) => {
                    pairs += 1;
                    if matrix::is_disjoint_sigma(&p, &m)? {
                        disjoint += 1;
                    }
                }
            }
        }
    }
    match format {
        Format::Json => {
            drop(out);
            print_json(&SampleReport {
                n,
                seed,
                count,
                matrices,
                pairs: check_disjoint.then_some(pairs),
                disjoint_pairs: check_disjoint.then_some(disjoint),
                equal_pairs: check_disjoint.then_some(equal),
            })
        }
        Format::Text => {
            if check_disjoint {
                if !summary_only && count > 0 {
                    writeln!(out)?;
                }
                let fraction = if pairs == 0 { 0.0 } else { disjoint as f64 / pairs as f64 };
                writeln!(out, "disjoint {disjoint} of {pairs} distinct pairs ({fraction}); {equal} equal pairs skipped")?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn run_oracle(n: usize, format: Format) -> CmdResult {
    let start = Instant::now();
    let xi = oracle::brute_xi(n, None)?;
    let max_k = if n == 2 { 4 } else { 3 };
    let q: Vec<_> = (0..=max_k).map(|k| oracle::brute_q(n, k)).collect::<Result<_, _>>()?;
    let hist = oracle::agreement_histogram(n, &PiMatrix::identity(n))?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match format {
        Format::Json => {
            let mut records = vec![ResultRecord {
                n,
                quantity: Quantity::Xi,
                k: None,
                value: xi.to_string(),
                value_ratio: None,
                digits: None,
                elapsed_ms,
                workers: 1,
            }];
            records.extend(q.iter().enumerate().map(|(k, v)| ResultRecord {
                n,
                quantity: Quantity::Q,
                k: Some(k),
                value: v.to_string(),
                value_ratio: None,
                digits: None,
                elapsed_ms,
                workers: 1,
            }));
            print_json(&records)
        }
        Format::Text => {
            println!("xi = {xi}");
            for (k, v) in q.iter().enumerate() {
                println!("q(k={k}) = {v}");
            }
            for (m, e) in hist.iter().enumerate() {
                println!("agreements {m}: {e}");
            }
            Ok(())
        }
    }
}
