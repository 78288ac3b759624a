//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vertmul::bench::{fit_exponent, geometric_sizes, model_steps, random_operand, recursion_residual, run_grid, BenchSpec};
use vertmul::crossmul::{cross_sum, window};
use vertmul::digits::DigitSeq;
use vertmul::plum::{carry_formula_disagreements, plum, plum_carry, plum_table, CaseReading, PLUM_MAX, PLUM_MIN};
use vertmul::trace::{golden_corpus, render_trace, TraceFormat};
use vertmul::vertical::symmetric_difference;
use vertmul::{multiply, Algorithm, MulOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn oracle(x: &DigitSeq) -> BigUint {
    let bytes: Vec<u8> = x.digits().iter().map(|&d| d as u8).collect();
    BigUint::from_radix_be(&bytes, x.radix()).unwrap()
}

fn golden_examples() -> Outcome {
    let corpus = golden_corpus().map_err(|e| e.to_string())?;
    for ex in &corpus {
        let got = ex.trace.result_text();
        ensure(got == ex.expected, || format!("{}: got {got}, expected {}", ex.name, ex.expected))?;
        ex.trace.verify().map_err(|e| format!("{}: {e}", ex.name))?;
    }
    let binary_methods = corpus.iter().filter(|e| e.name.starts_with("binary_")).count();
    ensure(binary_methods == 3, || format!("{binary_methods} binary methods"))?;
    Ok(format!("{} traces (12 products, binary by 3 methods) exact", corpus.len()))
}

fn oracle_equivalence() -> Outcome {
    const PAIRS: u64 = 10_000;
    let mut configs = vec![
        ("schoolbook", MulOptions::new(Algorithm::Schoolbook)),
        ("vertical", MulOptions::new(Algorithm::Vertical)),
    ];
    for k in 2..=4 {
        for t in [1, 8] {
            configs.push(("recursive", MulOptions::new(Algorithm::Recursive).with_recursive(k, t)));
        }
    }
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()) as u64;
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let configs = &configs;
                scope.spawn(move || {
                    let mut failures = Vec::new();
                    for case in (w..PAIRS).step_by(workers as usize) {
                        let mut rng = ChaCha8Rng::seed_from_u64(case);
                        let radix = if case % 2 == 0 { 2 } else { 10 };
                        let n = rng.gen_range(1..=256);
                        let m = rng.gen_range(1..=256);
                        let a = random_operand(&mut rng, n, radix);
                        let b = random_operand(&mut rng, m, radix);
                        let expected = oracle(&a) * oracle(&b);
                        for (name, opts) in configs {
                            match multiply(&a, &b, opts) {
                                Ok(p) if oracle(&p) == expected => {}
                                _ => failures.push(format!(
                                    "case {case} {name} k={} t={}",
                                    opts.recursive.k, opts.recursive.threshold
                                )),
                            }
                        }
                    }
                    failures
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    ensure(failures.is_empty(), || format!("{} mismatches, first: {}", failures.len(), failures[0]))?;
    Ok(format!("{PAIRS} pairs x {} configurations match the big-integer oracle", configs.len()))
}

fn decomposition_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut windows = 0usize;
    for _ in 0..1000 {
        let radix = if rng.gen_bool(0.5) { 2 } else { 10 };
        let (n, m) = (rng.gen_range(1..=256), rng.gen_range(1..=256));
        let (n, m) = (n.max(m), n.min(m));
        let a = random_operand(&mut rng, n, radix);
        let b = random_operand(&mut rng, m, radix);
        for c in 0..n + m - 1 {
            let w = window(a.digits(), b.digits(), c);
            let vertical: i64 = w.a().iter().zip(w.b()).map(|(x, y)| x * y).sum();
            let lhs = cross_sum(w);
            let rhs = vertical - symmetric_difference(w);
            ensure(lhs == rhs, || format!("window {c} of {a} x {b}: {lhs} != {rhs}"))?;
            windows += 1;
        }
    }
    Ok(format!("1000 pairs, {windows} windows"))
}

fn plum_table_checks() -> Outcome {
    for a in 1..=9 {
        for b in 1..=9 {
            let p = plum(a, b).map_err(|e| e.to_string())?;
            let j = plum_carry(a, b).map_err(|e| e.to_string())?;
            ensure(10 * j + p == a * b && (PLUM_MIN..=PLUM_MAX).contains(&p), || {
                format!("cell ({a},{b}): plum {p}, carry {j}")
            })?;
        }
    }
    let diff = plum_table().diff_printed();
    ensure(diff.checked == 45, || format!("diff checked {} cells", diff.checked))?;
    let grouped = carry_formula_disagreements(CaseReading::GroupedDisjunction);
    let loose = carry_formula_disagreements(CaseReading::LooseDisjunction);
    let listed: Vec<String> = loose.iter().map(|(a, b, _, _)| format!("({a},{b})")).collect();
    Ok(format!(
        "81 cells valid; printed diff {} mismatches of {}; carry formula: grouped reading {} disagreements, loose reading {} [{}]",
        diff.mismatches.len(),
        diff.checked,
        grouped.len(),
        loose.len(),
        listed.join(" ")
    ))
}

fn complexity_exponents() -> Outcome {
    let fit = |algorithm, k: usize, lo, hi| -> Result<f64, String> {
        let mut spec = BenchSpec::new(algorithm, k, 1, geometric_sizes(k, lo, hi));
        spec.trials = 1;
        spec.seed = 42;
        let records = run_grid(&spec).map_err(|e| e.to_string())?;
        fit_exponent(&records).map_err(|e| e.to_string())
    };
    let e2 = fit(Algorithm::Recursive, 2, 6, 12)?;
    let e3 = fit(Algorithm::Recursive, 3, 4, 8)?;
    let es = fit(Algorithm::Schoolbook, 2, 6, 12)?;
    let (t2, t3) = (3f64.log2(), 6f64.ln() / 3f64.ln());
    ensure((e2 - t2).abs() <= 0.05, || format!("k=2 exponent {e2:.4} vs {t2:.4}"))?;
    ensure((e3 - t3).abs() <= 0.05, || format!("k=3 exponent {e3:.4} vs {t3:.4}"))?;
    ensure((es - 2.0).abs() <= 0.02, || format!("schoolbook exponent {es:.4}"))?;
    let mut points = 0;
    for (k, lo, hi) in [(2u64, 6u32, 12u32), (3, 4, 8)] {
        for e in lo..=hi {
            let n = k.pow(e);
            let r = recursion_residual(n, k, |m| model_steps(m, k)).map_err(|e| e.to_string())?;
            ensure(r == 0.into(), || format!("model residual {r} at n={n}, k={k}"))?;
            points += 1;
        }
    }
    Ok(format!(
        "k=2 {e2:.4} (target {t2:.4}), k=3 {e3:.4} (target {t3:.4}), schoolbook {es:.4}; model residual 0 at {points} grid points"
    ))
}

fn trace_fidelity() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    let corpus = golden_corpus().map_err(|e| e.to_string())?;
    for ex in &corpus {
        let path = dir.join(format!("{}.txt", ex.name));
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(render_trace(&ex.trace, TraceFormat::Text) == golden, || {
            format!("{} differs from its golden file", ex.name)
        })?;
    }
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap_or_default();
    ensure(read("vertical_6789x6789.txt").contains("(0,1,4,10,4,1,0) = 150410"), || {
        "6789 x 6789 tare vector missing".into()
    })?;
    ensure(read("vertical_4657x86.txt").contains("note: the worked solution labels"), || {
        "4657 x 86 tare annotation missing".into()
    })?;
    ensure(read("binary_111101x101011_identity.txt").contains("note: window c collects"), || {
        "loop-bound annotation missing".into()
    })?;
    Ok(format!("{} golden traces match; both annotations present", corpus.len()))
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_vertmul");
    let run = || {
        Command::new(exe)
            .args(["verify", "--seed", "42", "--cases", "1000"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure(first.status.success(), || {
        format!("verify exited with {}: {}", first.status, String::from_utf8_lossy(&first.stdout))
    })?;
    ensure(first.stdout == second.stdout, || "outputs differ".into())?;
    let summary = String::from_utf8_lossy(&first.stdout);
    Ok(format!("{} bytes identical: {}", first.stdout.len(), summary.trim()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden examples", golden_examples, Duration::from_secs(1)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("decomposition identity", decomposition_identity, Duration::from_secs(5)),
        ("plum table", plum_table_checks, Duration::from_secs(1)),
        ("complexity exponents", complexity_exponents, Duration::from_secs(120)),
        ("trace fidelity", trace_fidelity, Duration::from_secs(60)),
        ("determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} ({elapsed:.2?}): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
