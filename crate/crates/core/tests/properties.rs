use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vertmul::bench::{count_ops, OpCount};
use vertmul::crossmul::{cross_sum, multiply_schoolbook, raw_columns, window, Window};
use vertmul::digits::{
    flatten, normalize, parse_balanced, render_balanced, segment, DigitSeq, Notation,
};
use vertmul::plum::{multiply_plum, plum, plum_carry, scissor, scissor_decompose, ScissorContext};
use vertmul::vertical::{multiply_vertical, symmetric_difference, tare};
use vertmul::{multiply, Algorithm, Error, MulOptions};

/// Reference value computed without touching the library: Horner over the
/// raw entries, most significant first.
fn oracle(radix: u32, digits: &[i64]) -> BigInt {
    digits
        .iter()
        .fold(BigInt::from(0), |acc, &d| acc * radix + d)
}

fn oracle_product(a: &DigitSeq, b: &DigitSeq) -> BigUint {
    let to_big = |x: &DigitSeq| {
        let bytes: Vec<u8> = x.digits().iter().map(|&d| d as u8).collect();
        BigUint::from_radix_be(&bytes, x.radix()).unwrap()
    };
    to_big(a) * to_big(b)
}

fn canonical_digits(radix: u32, value: &BigUint) -> Vec<i64> {
    value.to_radix_be(radix).into_iter().map(i64::from).collect()
}

fn operand(radix: u32, max_len: usize) -> impl Strategy<Value = DigitSeq> {
    (1..=max_len)
        .prop_flat_map(move |n| {
            (1..radix as i64, prop::collection::vec(0..radix as i64, n - 1))
        })
        .prop_map(move |(lead, rest)| {
            let mut digits = vec![lead];
            digits.extend(rest);
            DigitSeq::from_digits(radix, digits).unwrap()
        })
}

fn pair(max_len: usize) -> impl Strategy<Value = (DigitSeq, DigitSeq)> {
    prop_oneof![Just(2u32), Just(10u32), Just(16u32)]
        .prop_flat_map(move |r| (operand(r, max_len), operand(r, max_len)))
}

proptest! {
    #[test]
    fn normalize_matches_oracle(
        radix in prop_oneof![Just(2u32), Just(10u32), Just(16u32)],
        raw in prop::collection::vec(-99i64..=99, 1..40),
    ) {
        let seq = DigitSeq::from_digits(radix, raw.clone()).unwrap();
        let expected = oracle(radix, &raw);
        match normalize(&seq) {
            Ok(n) => {
                prop_assert!(expected >= BigInt::from(0));
                prop_assert!(n.is_canonical());
                prop_assert_eq!(oracle(radix, n.digits()), expected);
                prop_assert_eq!(normalize(&n).unwrap(), n);
            }
            Err(Error::NegativeValue) => prop_assert!(expected < BigInt::from(0)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn segment_round_trip((a, _) in pair(40), s in 1usize..=4) {
        let seg = segment(&a, s).unwrap();
        prop_assert_eq!(seg.value(), a.value());
        prop_assert_eq!(flatten(&seg).unwrap().trimmed(), a);
    }

    #[test]
    fn balanced_render_round_trip(
        radix in 2u32..=36,
        raw in prop::collection::vec(-35i64..=35, 1..30),
    ) {
        let raw: Vec<i64> = raw.into_iter().map(|d| d % radix as i64).collect();
        let seq = DigitSeq::from_digits(radix, raw).unwrap();
        for notation in [Notation::UnicodeOverline, Notation::AsciiTilde] {
            let text = render_balanced(&seq, notation).unwrap().text;
            prop_assert_eq!(parse_balanced(&text, radix).unwrap(), seq.clone());
        }
    }

    #[test]
    fn balanced_digits_keep_value((a, _) in pair(30)) {
        let b = a.balanced();
        prop_assert_eq!(b.value(), a.value());
        let half = a.radix() as i64 / 2;
        prop_assert!(b.digits().iter().all(|&d| d.abs() <= half));
    }

    #[test]
    fn schoolbook_oracle_and_commutativity((a, b) in pair(60)) {
        let ab = multiply_schoolbook(&a, &b).unwrap();
        prop_assert_eq!(ab.digits(), &canonical_digits(a.radix(), &oracle_product(&a, &b))[..]);
        prop_assert_eq!(multiply_schoolbook(&b, &a).unwrap(), ab);
        prop_assert_eq!(raw_columns(&a, &b).unwrap().len(), a.len() + b.len() - 1);
    }

    #[test]
    fn decomposition_identity((a, b) in pair(40)) {
        let n = a.len().max(b.len());
        let (a, b) = (a.padded(n), b.padded(n));
        for c in 0..2 * n - 1 {
            let w: Window = window(a.digits(), b.digits(), c);
            let vertical: i64 = w.a().iter().zip(w.b()).map(|(x, y)| x * y).sum();
            prop_assert_eq!(cross_sum(w), vertical - symmetric_difference(w));
        }
    }

    #[test]
    fn tare_symmetry_and_constant_operands((a, b) in pair(30), d in 0i64..10) {
        let n = a.len().max(b.len());
        let (a, b) = (a.padded(n), b.padded(n));
        prop_assert_eq!(tare(&a, &b).unwrap(), tare(&b, &a).unwrap());
        let constant = DigitSeq::from_digits(b.radix(), vec![d % b.radix() as i64; n]).unwrap();
        prop_assert!(tare(&constant, &b).unwrap().is_zero());
    }

    #[test]
    fn padding_invariance((a, b) in pair(30), extra in 0usize..5) {
        let product = multiply_vertical(&a, &b).unwrap();
        let padded = multiply_vertical(&a.padded(a.len() + extra), &b).unwrap();
        prop_assert_eq!(padded.value(), product.value());
    }

    #[test]
    fn algorithms_agree((a, b) in pair(50), k in 2usize..=4, threshold in 1usize..=9, s in 1usize..=3) {
        let expected = canonical_digits(a.radix(), &oracle_product(&a, &b));
        for algorithm in [Algorithm::Schoolbook, Algorithm::Vertical, Algorithm::Recursive] {
            let opts = MulOptions::new(algorithm).with_recursive(k, threshold).with_segment(s);
            let product = multiply(&a, &b, &opts).unwrap();
            prop_assert_eq!(product.digits(), &expected[..], "{} s={}", algorithm, s);
        }
        if a.radix() == 2 {
            let opts = MulOptions::new(Algorithm::Binary);
            let product = multiply(&a, &b, &opts).unwrap();
            prop_assert_eq!(product.digits(), &expected[..]);
        }
    }

    #[test]
    fn scissor_rules(a in 1i64..100_000, b in 1i64..100_000, exponent in 1u32..=6) {
        let ctx = ScissorContext::new(exponent).unwrap();
        prop_assert_eq!(scissor(a, b, ctx), scissor(b, a, ctx));
        prop_assert_eq!(scissor(a, b, ctx), a * b - (a.min(b) - 1) * ctx.standard());
        let (lo, hi) = (a.min(b), a.max(b));
        let (high, low) = scissor_decompose(lo, hi, ctx).unwrap();
        prop_assert_eq!(high * ctx.standard() + low, a * b);
    }

    #[test]
    fn counting_does_not_change_products((a, b) in pair(40), k in 2usize..=4, threshold in 1usize..=8) {
        for algorithm in [Algorithm::Schoolbook, Algorithm::Vertical, Algorithm::Recursive] {
            let opts = MulOptions::new(algorithm).with_recursive(k, threshold);
            let mut count = OpCount::default();
            let counted = vertmul::algorithm::multiply_counted(&a, &b, &opts, &mut count).unwrap();
            prop_assert_eq!(counted, multiply(&a, &b, &opts).unwrap());
            prop_assert!(count.digit_mults > 0);
        }
    }

    #[test]
    fn merge_is_associative(counts in prop::collection::vec((0u64..1_000_000, 0u64..1_000_000), 0..12)) {
        let counts: Vec<OpCount> = counts.into_iter().map(|(m, a)| OpCount::new(m, a)).collect();
        let forward = counts.iter().fold(OpCount::default(), |acc, &c| acc.merge(c));
        let backward = counts.iter().rev().fold(OpCount::default(), |acc, &c| c.merge(acc));
        let summed: OpCount = counts.iter().copied().sum();
        prop_assert_eq!(forward, backward);
        prop_assert_eq!(forward, summed);
    }
}

#[test]
fn plum_invariants_exhaustive() {
    for a in 1..=9 {
        for b in 1..=9 {
            let p = plum(a, b).unwrap();
            assert!((-6..=3).contains(&p));
            assert_eq!(10 * plum_carry(a, b).unwrap() + p, a * b);
            assert_eq!(p, plum(b, a).unwrap());
        }
    }
}

fn nonzero_digits(rng: &mut ChaCha8Rng, n: usize) -> DigitSeq {
    DigitSeq::from_digits(10, (0..n).map(|_| rng.gen_range(1..=9)).collect()).unwrap()
}

#[test]
fn plum_matches_schoolbook() {
    let pairs = || (1..=2).flat_map(|n| (0..9usize.pow(n)).map(move |i| (n, i)));
    let digits = |n: u32, mut i: usize| {
        let mut d = vec![0i64; n as usize];
        for slot in d.iter_mut().rev() {
            *slot = (i % 9) as i64 + 1;
            i /= 9;
        }
        DigitSeq::from_digits(10, d).unwrap()
    };
    for (n, i) in pairs() {
        for (m, j) in pairs() {
            let (a, b) = (digits(n, i), digits(m, j));
            assert_eq!(multiply_plum(&a, &b).unwrap(), multiply_schoolbook(&a, &b).unwrap(), "{a} x {b}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let (n, m) = (rng.gen_range(3..=4), rng.gen_range(1..=4));
        let a = nonzero_digits(&mut rng, n);
        let b = nonzero_digits(&mut rng, m);
        assert_eq!(multiply_plum(&a, &b).unwrap(), multiply_schoolbook(&a, &b).unwrap(), "{a} x {b}");
    }
}

#[test]
fn plum_handles_zero_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2_000 {
        let digits = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(1..=6);
            let mut d: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
            d[0] = rng.gen_range(1..=9);
            DigitSeq::from_digits(10, d).unwrap()
        };
        let (a, b) = (digits(&mut rng), digits(&mut rng));
        assert_eq!(multiply_plum(&a, &b).unwrap(), multiply_schoolbook(&a, &b).unwrap(), "{a} x {b}");
    }
}

#[test]
fn step_counts_grow_with_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (algorithm, k) in [(Algorithm::Schoolbook, 2usize), (Algorithm::Recursive, 2), (Algorithm::Recursive, 3)] {
        let mut last = 0;
        for e in 1..=5u32 {
            let n = k.pow(e);
            let a = vertmul::bench::random_operand(&mut rng, n, 2);
            let b = vertmul::bench::random_operand(&mut rng, n, 2);
            let total = count_ops(algorithm, &a, &b, k, 1).unwrap().total();
            assert!(total >= last, "{algorithm} k={k} n={n}: {total} < {last}");
            last = total;
        }
    }
}
