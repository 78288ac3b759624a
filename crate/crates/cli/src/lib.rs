//! The `vertmul` command line: multiply, trace, print the plum table,
//! cross-check every algorithm against a big-integer oracle, and run the
//! operation-count benchmark.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vertmul::bench::{export_to, fit_exponent, geometric_sizes, random_operand, run_grid, BenchSpec, ExportFormat};
use vertmul::digits::{parse_number, DigitSeq, Sign};
use vertmul::plum::{carry_formula_disagreements, plum_table, CaseReading};
use vertmul::trace::{
    render_trace, trace_binary_identity, trace_plum, trace_recursive, trace_schoolbook, trace_vertical,
    TraceFormat, TraceOptions,
};
use vertmul::{multiply_signed, Algorithm, MulOptions, RecursiveConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vertmul", version, about = "Integer multiplication by the vertical formula and friends")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Multiplication method
    #[arg(long, global = true, value_enum, default_value_t = AlgoArg::Vertical)]
    pub algo: AlgoArg,
    /// Digit radix; "0b" and "0x" operand prefixes imply 2 and 16
    #[arg(long, global = true)]
    pub radix: Option<u32>,
    /// Segment length: blocks of this many digits act as single digits
    #[arg(long, global = true, default_value_t = 1)]
    pub segment: usize,
    /// Split arity of the recursive method
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,
    /// Operand length at or below which recursion hands off to schoolbook
    #[arg(long, global = true, default_value_t = 8)]
    pub threshold: usize,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Schoolbook,
    Vertical,
    Recursive,
    Binary,
    Plum,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Schoolbook => Algorithm::Schoolbook,
            AlgoArg::Vertical => Algorithm::Vertical,
            AlgoArg::Recursive => Algorithm::Recursive,
            AlgoArg::Binary => Algorithm::Binary,
            AlgoArg::Plum => Algorithm::Plum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Markdown,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the product of two integers
    Multiply {
        /// Operands; "-" reads the next whitespace-separated token from stdin
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Print a step-by-step trace of one multiplication
    Trace {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Rewrite the multiplicand with balanced digits first
        #[arg(long)]
        balanced: bool,
    },
    /// Print a digit-product table
    Table {
        #[arg(value_enum)]
        which: TableArg,
    },
    /// Cross-check all algorithms on random operands against a big-integer oracle
    Verify {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 64)]
        max_digits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count digit operations over a grid of operand sizes
    Bench {
        /// Exponent range "LO..HI": sizes k^LO through k^HI
        #[arg(long, conflicts_with = "sizes")]
        grid: Option<String>,
        /// Explicit comma-separated operand sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = vertmul::bench::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Plum,
}

#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<vertmul::Error> for UsageError {
    fn from(e: vertmul::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn usage<T>(message: impl Into<String>) -> CliResult<T> {
    Err(UsageError(message.into()))
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 on success, 1 when `verify` finds a mismatch, 2 on
/// usage errors.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let g = &cli.global;
    let mut file;
    let out: &mut dyn Write = match &g.output {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    let code = match &cli.command {
        Command::Multiply { a, b } => {
            let (a, b, radix) = read_operands(g, [a, b], stdin)?;
            let options = mul_options(g, radix)?;
            let (sign, product) = multiply_signed((a.0, &a.1), (b.0, &b.1), &options)?;
            let minus = if sign.is_negative() { "-" } else { "" };
            writeln!(out, "{minus}{}", product.to_text()?)?;
            EXIT_OK
        }
        Command::Trace { a, b, balanced } => {
            let (a, b, _) = read_operands(g, [a, b], stdin)?;
            if a.0.is_negative() || b.0.is_negative() {
                return usage("trace takes non-negative operands");
            }
            let format = match g.format.unwrap_or(FormatArg::Text) {
                FormatArg::Text => TraceFormat::Text,
                FormatArg::Markdown => TraceFormat::Markdown,
                FormatArg::Json => TraceFormat::Json,
                FormatArg::Csv => return usage("traces render as text, markdown or json"),
            };
            let trace = build_trace(g, &a.1, &b.1, *balanced)?;
            out.write_all(render_trace(&trace, format).as_bytes())?;
            EXIT_OK
        }
        Command::Table { which: TableArg::Plum } => {
            write_plum_table(out)?;
            EXIT_OK
        }
        Command::Verify {
            cases,
            max_digits,
            seed,
        } => verify(*cases, *max_digits, *seed, out)?,
        Command::Bench {
            grid,
            sizes,
            trials,
            seed,
        } => bench(g, grid.as_deref(), sizes.as_deref(), *trials, *seed, out, stderr)?,
    };
    out.flush()?;
    Ok(code)
}

fn mul_options(g: &GlobalOpts, radix: u32) -> CliResult<MulOptions> {
    let options = MulOptions::new(g.algo.into())
        .with_segment(g.segment)
        .with_recursive(g.k, g.threshold);
    if g.segment == 0 {
        return usage("--segment must be at least 1");
    }
    options.validate(radix)?;
    Ok(options)
}

type Operand = (Sign, DigitSeq);

fn split_prefix(text: &str) -> (bool, Option<u32>, &str) {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    for (prefix, radix) in [("0b", 2), ("0B", 2), ("0x", 16), ("0X", 16)] {
        if let Some(rest) = body.strip_prefix(prefix) {
            return (negative, Some(radix), rest);
        }
    }
    (negative, None, body)
}

/// Reads both operands, resolving "-" from stdin and radix prefixes. All
/// operands must agree on one radix.
fn read_operands(g: &GlobalOpts, texts: [&String; 2], stdin: &mut dyn BufRead) -> CliResult<(Operand, Operand, u32)> {
    let mut tokens: Vec<String> = Vec::new();
    let mut resolved = Vec::with_capacity(2);
    for text in texts {
        if text == "-" {
            if tokens.is_empty() {
                let mut buf = String::new();
                stdin.read_to_string(&mut buf)?;
                tokens = buf.split_whitespace().rev().map(str::to_owned).collect();
                if tokens.is_empty() {
                    return usage("expected an operand on stdin");
                }
            }
            match tokens.pop() {
                Some(t) => resolved.push(t),
                None => return usage("expected another operand on stdin"),
            }
        } else {
            resolved.push(text.clone());
        }
    }
    let parts: Vec<_> = resolved.iter().map(|t| split_prefix(t)).collect();
    let mut radix = g.radix;
    for &(_, prefix, _) in &parts {
        match (radix, prefix) {
            (_, None) => {}
            (None, Some(p)) => radix = Some(p),
            (Some(r), Some(p)) if r != p => {
                return usage(format!("operand prefix implies radix {p}, but radix {r} is in use"));
            }
            _ => {}
        }
    }
    let radix = radix.unwrap_or(10);
    let mut operands = parts.into_iter().map(|(negative, _, body)| -> CliResult<Operand> {
        let (sign, digits) = parse_number(body, radix)?;
        let sign = if negative && !digits.is_zero() {
            sign.product(Sign::Minus)
        } else {
            sign
        };
        Ok((sign, digits))
    });
    let a = operands.next().expect("two operands")?;
    let b = operands.next().expect("two operands")?;
    Ok((a, b, radix))
}

fn build_trace(g: &GlobalOpts, a: &DigitSeq, b: &DigitSeq, balanced: bool) -> CliResult<vertmul::trace::Trace> {
    if g.segment == 0 {
        return usage("--segment must be at least 1");
    }
    let trace = match g.algo {
        AlgoArg::Vertical => trace_vertical(
            a,
            b,
            TraceOptions {
                segment: g.segment,
                balanced_multiplicand: balanced,
            },
        )?,
        AlgoArg::Schoolbook => trace_schoolbook(a, b, g.segment)?,
        AlgoArg::Plum => trace_plum(a, b)?,
        AlgoArg::Binary => trace_binary_identity(a, b)?,
        AlgoArg::Recursive => trace_recursive(a, b, RecursiveConfig::new(g.k, g.threshold)?)?,
    };
    Ok(trace)
}

fn write_plum_table(out: &mut dyn Write) -> CliResult<()> {
    let table = plum_table();
    writeln!(out, "upper triangle")?;
    out.write_all(table.render_upper().as_bytes())?;
    writeln!(out)?;
    writeln!(out, "full table")?;
    out.write_all(table.render_full().as_bytes())?;
    writeln!(out)?;
    write!(out, "{}", table.diff_printed())?;
    for (reading, name) in [
        (CaseReading::GroupedDisjunction, "(a = 1 or b = 9) and b - a >= 3"),
        (CaseReading::LooseDisjunction, "a = 1 or (b = 9 and b - a >= 3)"),
    ] {
        let disagreements = carry_formula_disagreements(reading);
        writeln!(
            out,
            "carry formula, first case read as {name}: {} of 45 pairs disagree",
            disagreements.len()
        )?;
        for (a, b, actual, formula) in disagreements {
            writeln!(out, "  ({a}, {b}): formula {formula}, actual {actual}")?;
        }
    }
    Ok(())
}

/// Every multiplier configuration `verify` exercises for one radix.
fn verify_configs(radix: u32, segment: usize) -> Vec<(String, MulOptions)> {
    let mut configs = vec![
        ("schoolbook".to_string(), MulOptions::new(Algorithm::Schoolbook)),
        ("vertical".to_string(), MulOptions::new(Algorithm::Vertical)),
        (
            format!("vertical s={segment}"),
            MulOptions::new(Algorithm::Vertical).with_segment(segment),
        ),
    ];
    for k in 2..=4 {
        for threshold in [1, 8] {
            configs.push((
                format!("recursive k={k} t={threshold}"),
                MulOptions::new(Algorithm::Recursive).with_recursive(k, threshold),
            ));
        }
    }
    match radix {
        2 => configs.push(("binary".to_string(), MulOptions::new(Algorithm::Binary))),
        10 => configs.push(("plum".to_string(), MulOptions::new(Algorithm::Plum))),
        _ => {}
    }
    configs
}

fn oracle(x: &DigitSeq) -> BigUint {
    let bytes: Vec<u8> = x.digits().iter().map(|&d| d as u8).collect();
    BigUint::from_radix_be(&bytes, x.radix()).expect("canonical digits")
}

fn verify(cases: usize, max_digits: usize, seed: u64, out: &mut dyn Write) -> CliResult<i32> {
    if max_digits == 0 {
        return usage("--max-digits must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0usize;
    let mut failures = Vec::new();
    let mut failed_cases = 0usize;
    for case in 0..cases {
        let radix = if rng.gen_bool(0.5) { 2 } else { 10 };
        let n = rng.gen_range(1..=max_digits);
        let m = rng.gen_range(1..=max_digits);
        let segment = rng.gen_range(2..=4);
        let a = random_operand(&mut rng, n, radix);
        let b = random_operand(&mut rng, m, radix);
        let expected = oracle(&a) * oracle(&b);
        let mut case_failed = false;
        for (name, options) in verify_configs(radix, segment) {
            checks += 1;
            let ok = match vertmul::multiply(&a, &b, &options) {
                Ok(p) => oracle(&p) == expected,
                Err(_) => false,
            };
            if !ok {
                case_failed = true;
                failures.push(format!("case {case}: {name} on {a} x {b} (radix {radix})"));
            }
        }
        failed_cases += usize::from(case_failed);
    }
    for f in &failures {
        writeln!(out, "FAIL {f}")?;
    }
    writeln!(
        out,
        "{cases} cases, {checks} checks: {} passed, {} failed (seed {seed})",
        cases - failed_cases,
        failed_cases
    )?;
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn parse_grid(text: &str) -> CliResult<(u32, u32)> {
    let parsed = text
        .split_once("..")
        .and_then(|(lo, hi)| Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?)));
    match parsed {
        Some((lo, hi)) if lo <= hi && hi <= 40 => Ok((lo, hi)),
        _ => usage(format!("--grid expects LO..HI exponents, got {text:?}")),
    }
}

fn bench(
    g: &GlobalOpts,
    grid: Option<&str>,
    sizes: Option<&[usize]>,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<i32> {
    let sizes = match (grid, sizes) {
        (Some(grid), _) => {
            let (lo, hi) = parse_grid(grid)?;
            geometric_sizes(g.k, lo, hi)
        }
        (None, Some(sizes)) => sizes.to_vec(),
        (None, None) => return usage("bench needs --grid LO..HI or --sizes N,N,..."),
    };
    if sizes.contains(&0) {
        return usage("operand sizes must be positive");
    }
    let format = match g.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => ExportFormat::Csv,
        FormatArg::Json => ExportFormat::Json,
        _ => return usage("bench records export as csv or json"),
    };
    let mut spec = BenchSpec::new(g.algo.into(), g.k, g.threshold, sizes);
    spec.trials = trials;
    spec.seed = seed;
    spec.radix = g.radix.unwrap_or(2);
    mul_options(g, spec.radix)?;
    let records = run_grid(&spec)?;
    export_to(&records, format, &mut *out)?;
    if let Ok(exponent) = fit_exponent(&records) {
        writeln!(stderr, "fitted step exponent: {exponent:.4}")?;
    }
    Ok(EXIT_OK)
}
