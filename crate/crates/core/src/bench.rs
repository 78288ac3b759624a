//! Operation counting and complexity measurement.
//!
//! One step is a multiplication or an addition of two digits; a digit
//! subtraction is counted as an addition. Every multiplier is generic over a
//! [`Tally`] so the same code path runs with counting on ([`OpCount`]) or off
//! (`()`).
//!
//! Two counters exist. The implementation counter tallies what the code
//! actually does, including carry propagation and padding. The model
//! counter, [`model_steps`], evaluates the recurrence
//! `T(n) = k(k+1)/2 * T(n/k) + kn/2 + 2n` with `T(1) = 1` exactly, in
//! rationals. Growth exponents are compared between the two; constants are
//! expected to differ.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::path::Path;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::{multiply, multiply_counted, Algorithm, MulOptions};
use crate::digits::DigitSeq;
use crate::error::{Error, Result};

/// Sink for digit-operation counts.
pub trait Tally {
    /// False for sinks that discard counts. Multipliers may then skip work
    /// whose outcome is known, such as products with an all-zero operand,
    /// without making counts depend on operand values.
    const COUNTING: bool = true;

    fn mul(&mut self, n: u64);
    fn add(&mut self, n: u64);
}

impl Tally for () {
    const COUNTING: bool = false;

    #[inline(always)]
    fn mul(&mut self, _: u64) {}
    #[inline(always)]
    fn add(&mut self, _: u64) {}
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCount {
    pub digit_mults: u64,
    pub digit_adds: u64,
}

impl OpCount {
    pub fn new(digit_mults: u64, digit_adds: u64) -> OpCount {
        OpCount {
            digit_mults,
            digit_adds,
        }
    }

    pub fn total(&self) -> u64 {
        self.digit_mults + self.digit_adds
    }

    pub fn merge(self, other: OpCount) -> OpCount {
        self + other
    }
}

impl Tally for OpCount {
    #[inline]
    fn mul(&mut self, n: u64) {
        self.digit_mults += n;
    }
    #[inline]
    fn add(&mut self, n: u64) {
        self.digit_adds += n;
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            digit_mults: self.digit_mults + rhs.digit_mults,
            digit_adds: self.digit_adds + rhs.digit_adds,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl Sum for OpCount {
    fn sum<I: Iterator<Item = OpCount>>(iter: I) -> OpCount {
        iter.fold(OpCount::default(), Add::add)
    }
}

/// Counts the digit operations of one multiplication.
pub fn count_ops(
    algorithm: Algorithm,
    a: &DigitSeq,
    b: &DigitSeq,
    k: usize,
    threshold: usize,
) -> Result<OpCount> {
    let options = MulOptions::new(algorithm).with_recursive(k, threshold);
    let mut count = OpCount::default();
    multiply_counted(a, b, &options, &mut count)?;
    Ok(count)
}

/// Exact step count under the recurrence model, for `n` a power of `k`.
pub fn model_steps(n: u64, k: u64) -> Result<Ratio<i128>> {
    if k < 2 {
        return Err(Error::InvalidArity(k as usize));
    }
    if n == 0 || !is_power_of(n, k) {
        return Err(Error::Unsupported {
            algorithm: "model",
            reason: format!("n = {n} is not a power of k = {k}"),
        });
    }
    if n == 1 {
        return Ok(Ratio::from_integer(1));
    }
    let (n_r, k_r) = (n as i128, k as i128);
    let sub = model_steps(n / k, k)?;
    Ok(sub * (k_r * (k_r + 1) / 2) + Ratio::new(k_r * n_r, 2) + Ratio::from_integer(2 * n_r))
}

fn is_power_of(mut n: u64, k: u64) -> bool {
    while n.is_multiple_of(k) {
        n /= k;
    }
    n == 1
}

/// `T(n) - [k(k+1)/2 * T(n/k) + kn/2 + 2n]` for a step-count function.
pub fn recursion_residual<F>(n: u64, k: u64, mut steps: F) -> Result<Ratio<i128>>
where
    F: FnMut(u64) -> Result<Ratio<i128>>,
{
    if k < 2 {
        return Err(Error::InvalidArity(k as usize));
    }
    if n == 0 || !n.is_multiple_of(k) {
        return Err(Error::Unsupported {
            algorithm: "recursion residual",
            reason: format!("n = {n} is not divisible by k = {k}"),
        });
    }
    let (n_r, k_r) = (n as i128, k as i128);
    let whole = steps(n)?;
    let part = steps(n / k)?;
    Ok(whole - part * (k_r * (k_r + 1) / 2) - Ratio::new(k_r * n_r, 2) - Ratio::from_integer(2 * n_r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub threshold: usize,
    pub counts: OpCount,
    pub wall_time: Duration,
    pub trials: usize,
}

/// Least-squares slope of `ln(total steps)` against `ln(n)`.
pub fn fit_exponent(records: &[BenchRecord]) -> Result<f64> {
    const NEEDED: usize = 4;
    if records.len() < NEEDED {
        return Err(Error::InsufficientData {
            needed: NEEDED,
            got: records.len(),
        });
    }
    let first = &records[0];
    if records
        .iter()
        .any(|r| r.algorithm != first.algorithm || r.k != first.k || r.threshold != first.threshold)
    {
        return Err(Error::Unsupported {
            algorithm: "fit",
            reason: "records mix algorithms or parameters".into(),
        });
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.counts.total() as f64).ln()))
        .collect();
    least_squares_slope(&points)
}

fn least_squares_slope(points: &[(f64, f64)]) -> Result<f64> {
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: 1,
        });
    }
    Ok(sxy / sxx)
}

/// One benchmark grid: an algorithm, its parameters and the operand sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSpec {
    pub algorithm: Algorithm,
    pub k: usize,
    pub threshold: usize,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub radix: u32,
    pub seed: u64,
}

impl BenchSpec {
    pub fn new(algorithm: Algorithm, k: usize, threshold: usize, sizes: Vec<usize>) -> BenchSpec {
        BenchSpec {
            algorithm,
            k,
            threshold,
            sizes,
            trials: DEFAULT_TRIALS,
            radix: 2,
            seed: 0,
        }
    }
}

pub const DEFAULT_TRIALS: usize = 9;

/// `k^lo, ..., k^hi`.
pub fn geometric_sizes(k: usize, lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| k.pow(e)).collect()
}

/// Random `n`-digit operand with a nonzero leading digit.
pub fn random_operand<R: Rng>(rng: &mut R, n: usize, radix: u32) -> DigitSeq {
    let mut digits: Vec<i64> = (0..n).map(|_| rng.gen_range(0..radix as i64)).collect();
    digits[0] = rng.gen_range(1..radix as i64);
    DigitSeq::from_digits(radix, digits).expect("radix validated by caller")
}

/// Runs every size of a grid. Counts come from one counted run per size
/// (they depend only on operand lengths); wall time is the median of
/// `trials` uncounted runs. Sizes are measured in parallel, each with its
/// own counter, while the timed runs of one size stay on one thread.
pub fn run_grid(spec: &BenchSpec) -> Result<Vec<BenchRecord>> {
    let options = MulOptions::new(spec.algorithm).with_recursive(spec.k, spec.threshold);
    options.validate(spec.radix)?;
    let trials = spec.trials.max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                scope.spawn(move || -> Result<BenchRecord> {
                    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(i as u64));
                    let a = random_operand(&mut rng, n, spec.radix);
                    let b = random_operand(&mut rng, n, spec.radix);
                    let mut counts = OpCount::default();
                    multiply_counted(&a, &b, &options, &mut counts)?;
                    let mut times = Vec::with_capacity(trials);
                    for _ in 0..trials {
                        let start = Instant::now();
                        std::hint::black_box(multiply(&a, &b, &options)?);
                        times.push(start.elapsed());
                    }
                    times.sort();
                    Ok(BenchRecord {
                        algorithm: spec.algorithm,
                        n,
                        k: spec.k,
                        threshold: spec.threshold,
                        counts,
                        wall_time: times[times.len() / 2],
                        trials,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark thread panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "n",
    "k",
    "threshold",
    "digit_mults",
    "digit_adds",
    "wall_ns",
    "trials",
];

#[derive(Serialize)]
struct FlatRecord<'a> {
    algorithm: &'a str,
    n: usize,
    k: usize,
    threshold: usize,
    digit_mults: u64,
    digit_adds: u64,
    wall_ns: u128,
    trials: usize,
}

impl<'a> From<&'a BenchRecord> for FlatRecord<'a> {
    fn from(r: &'a BenchRecord) -> Self {
        FlatRecord {
            algorithm: r.algorithm.name(),
            n: r.n,
            k: r.k,
            threshold: r.threshold,
            digit_mults: r.counts.digit_mults,
            digit_adds: r.counts.digit_adds,
            wall_ns: r.wall_time.as_nanos(),
            trials: r.trials,
        }
    }
}

pub fn export_to<W: Write>(records: &[BenchRecord], format: ExportFormat, out: W) -> Result<()> {
    match format {
        ExportFormat::Csv => {
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            writer.write_record(CSV_HEADER)?;
            for r in records {
                writer.serialize(FlatRecord::from(r))?;
            }
            writer.flush()?;
        }
        ExportFormat::Json => {
            let flat: Vec<FlatRecord<'_>> = records.iter().map(FlatRecord::from).collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &flat)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn export(records: &[BenchRecord], format: ExportFormat, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    export_to(records, format, file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::parse_number;

    fn record(n: usize, mults: u64) -> BenchRecord {
        BenchRecord {
            algorithm: Algorithm::Schoolbook,
            n,
            k: 2,
            threshold: 8,
            counts: OpCount::new(mults, 0),
            wall_time: Duration::from_nanos(1500),
            trials: 9,
        }
    }

    #[test]
    fn schoolbook_single_digit() {
        let one = parse_number("7", 10).unwrap().1;
        let c = count_ops(Algorithm::Schoolbook, &one, &one, 2, 8).unwrap();
        assert_eq!(c.digit_mults, 1);
        // the only addition is the carry step of the single column
        assert_eq!(c.digit_adds, 1);
    }

    #[test]
    fn model_satisfies_closed_forms() {
        // T(n) = 7 n^{log2 3} - 6n for k = 2
        for e in 0..12 {
            let n = 1u64 << e;
            let t = model_steps(n, 2).unwrap();
            assert_eq!(t + Ratio::from_integer(6 * n as i128), Ratio::from_integer(7 * 3i128.pow(e)));
        }
        // T(n) = 9/2 n^{log3 6} - 7/2 n for k = 3
        for e in 0..9 {
            let n = 3u64.pow(e);
            let t = model_steps(n, 3).unwrap();
            assert_eq!(t + Ratio::new(7 * n as i128, 2), Ratio::new(9 * 6i128.pow(e), 2));
        }
    }

    #[test]
    fn model_residual_is_zero() {
        for n in [2u64, 16, 1024] {
            assert_eq!(recursion_residual(n, 2, |m| model_steps(m, 2)).unwrap(), Ratio::from_integer(0));
        }
        assert_eq!(recursion_residual(27, 3, |m| model_steps(m, 3)).unwrap(), Ratio::from_integer(0));
        assert!(model_steps(12, 2).is_err());
        assert!(recursion_residual(9, 2, |m| model_steps(m, 2)).is_err());
    }

    #[test]
    fn fit_needs_four_records() {
        let few: Vec<_> = [2, 4, 8].iter().map(|&n| record(n, 1)).collect();
        assert!(matches!(
            fit_exponent(&few),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn fit_recovers_power_law() {
        let records: Vec<_> = (3..9).map(|e| record(1 << e, 5u64 << (2 * e))).collect();
        let slope = fit_exponent(&records).unwrap();
        assert!((slope - 2.0).abs() < 1e-12, "{slope}");
    }

    #[test]
    fn fit_rejects_mixed_records() {
        let mut records: Vec<_> = (3..8).map(|e| record(1 << e, 1 << e)).collect();
        records[2].k = 3;
        assert!(fit_exponent(&records).is_err());
    }

    #[test]
    fn csv_export_shapes() {
        let mut out = Vec::new();
        export_to(&[], ExportFormat::Csv, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "algorithm,n,k,threshold,digit_mults,digit_adds,wall_ns,trials\n"
        );
        let mut out = Vec::new();
        export_to(&[record(16, 256)], ExportFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().nth(1).unwrap(), "schoolbook,16,2,8,256,0,1500,9");
    }

    #[test]
    fn json_export_shape() {
        let records: Vec<_> = (0..10).map(|e| record(1 << e, 1)).collect();
        let mut out = Vec::new();
        export_to(&records, ExportFormat::Json, &mut out).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&out).unwrap();
        let array = value.as_array().unwrap();
        assert_eq!(array.len(), 10);
        let keys: Vec<&str> = array[0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CSV_HEADER.to_vec();
        expected.sort();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort();
        assert_eq!(keys_sorted, expected);
    }

    #[test]
    fn export_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.csv");
        export(&[record(4, 16)], ExportFormat::Csv, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
        assert!(matches!(
            export(&[], ExportFormat::Csv, &dir.path().join("missing/x.csv")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn merge_is_additive() {
        let a = OpCount::new(1, 2);
        let b = OpCount::new(3, 4);
        assert_eq!(a.merge(b), OpCount::new(4, 6));
        assert_eq!([a, b, a].into_iter().sum::<OpCount>(), OpCount::new(5, 8));
    }

    #[test]
    fn grid_runs() {
        let mut spec = BenchSpec::new(Algorithm::Recursive, 2, 1, geometric_sizes(2, 2, 5));
        spec.trials = 1;
        let records = run_grid(&spec).unwrap();
        assert_eq!(records.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 8, 16, 32]);
        assert_eq!(records[0].counts.digit_mults, 9);
        assert_eq!(records[3].counts.digit_mults, 243);
    }
}
