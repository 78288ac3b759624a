//! Vertical multiplication: products of aligned digits plus a correction.
//!
//! For equal-length operands every Lemma-1 column `[a_lo..a_hi; b_lo..b_hi]`
//! equals the sum of the vertical products `C_i = a_i * b_i` it spans minus
//! its symmetric difference, the sum of `(a_i - a_j)(b_i - b_j)` over mirrored
//! index pairs. Collecting the symmetric differences column by column gives
//! the tare `K`, so
//!
//! ```text
//! a * b = (C_1, ..., C_n) * (1, ..., 1) - K
//! ```
//!
//! The recursive form splits both operands into `k` blocks, computes the `k`
//! block products and the `k(k-1)/2` difference products with the same
//! routine, and combines them the same way.

use crate::bench::Tally;
use crate::crossmul::{schoolbook_digits, window, Window};
use crate::digits::{carry_columns, flatten, normalize, DigitSeq, SegmentedNumber, Sign};
use crate::error::{Error, Result};

/// Default operand length at or below which the recursion hands off to
/// schoolbook multiplication.
pub const DEFAULT_THRESHOLD: usize = 8;

/// Symmetric differences aligned to product columns.
///
/// `entries` has `2n` elements for `n`-digit operands: a pad zero for the
/// possible carry column, then `(0, K12, K123, ..., K12..n, K2..n, ...,
/// K(n-1)n, 0)`. Entry `i` subtracts from the running-sum column `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TareVec {
    radix: u32,
    entries: Vec<i64>,
}

impl TareVec {
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The `2n - 1` entries aligned with the Lemma-1 columns (no pad).
    pub fn columns(&self) -> &[i64] {
        &self.entries[1..]
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn to_digit_seq(&self) -> DigitSeq {
        DigitSeq::from_digits(self.radix, self.entries.clone()).expect("tare is never empty")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

/// Vertical products `C_i = a_i * b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalVec {
    radix: u32,
    entries: Vec<i64>,
}

impl VerticalVec {
    pub fn new(radix: u32, entries: Vec<i64>) -> VerticalVec {
        VerticalVec { radix, entries }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }
}

/// `(a_i - a_j) * (b_i - b_j)`.
pub fn difference_product(a_i: i64, a_j: i64, b_i: i64, b_j: i64) -> i64 {
    (a_i - a_j) * (b_i - b_j)
}

/// Sum of difference products over the mirrored pairs `(j, n-1-j)` of a
/// window; an odd window's middle position is unpaired.
pub fn symmetric_difference(w: Window<'_>) -> i64 {
    symmetric_difference_counted(w, &mut ())
}

pub(crate) fn symmetric_difference_counted<T: Tally>(w: Window<'_>, tally: &mut T) -> i64 {
    let (a, b) = (w.a(), w.b());
    let n = a.len();
    let pairs = n / 2;
    if pairs == 0 {
        return 0;
    }
    // two subtractions and one product per pair, then summing the pairs
    tally.add(2 * pairs as u64 + pairs as u64 - 1);
    tally.mul(pairs as u64);
    (0..pairs)
        .map(|j| difference_product(a[j], a[n - 1 - j], b[j], b[n - 1 - j]))
        .sum()
}

fn check_pair(a: &DigitSeq, b: &DigitSeq) -> Result<()> {
    if a.radix() != b.radix() {
        return Err(Error::RadixMismatch {
            left: a.radix(),
            right: b.radix(),
        });
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Tare of two equal-length operands.
pub fn tare(a: &DigitSeq, b: &DigitSeq) -> Result<TareVec> {
    check_pair(a, b)?;
    Ok(TareVec {
        radix: a.radix(),
        entries: tare_entries(a.digits(), b.digits(), &mut ()),
    })
}

pub(crate) fn tare_entries<T: Tally>(a: &[i64], b: &[i64], tally: &mut T) -> Vec<i64> {
    let n = a.len();
    let mut entries = Vec::with_capacity(2 * n);
    entries.push(0);
    entries.extend((0..2 * n - 1).map(|k| symmetric_difference_counted(window(a, b, k), tally)));
    entries
}

/// `C_i = a_i * b_i` for equal-length operands.
pub fn vertical_products(a: &DigitSeq, b: &DigitSeq) -> Result<VerticalVec> {
    check_pair(a, b)?;
    Ok(VerticalVec {
        radix: a.radix(),
        entries: vertical_entries(a.digits(), b.digits(), &mut ()),
    })
}

fn vertical_entries<T: Tally>(a: &[i64], b: &[i64], tally: &mut T) -> Vec<i64> {
    tally.mul(a.len() as u64);
    a.iter().zip(b).map(|(&x, &y)| x * y).collect()
}

/// Multiplies a column vector by the repunit `(1, ..., 1)` of length `ones`
/// without carrying: entry `c` is the sum of the values whose window covers
/// column `c`. Computed with one running sum.
pub fn repunit_product(values: &[i64], ones: usize) -> Vec<i64> {
    repunit_product_counted(values, ones, &mut ())
}

fn repunit_product_counted<T: Tally>(values: &[i64], ones: usize, tally: &mut T) -> Vec<i64> {
    assert!(ones >= 1, "repunit needs at least one digit");
    let len = values.len() + ones - 1;
    let mut out = Vec::with_capacity(len);
    let mut running = 0i64;
    for c in 0..len {
        if c < values.len() {
            running += values[c];
            tally.add(1);
        }
        if c >= ones {
            running -= values[c - ones];
            tally.add(1);
        }
        out.push(running);
    }
    out
}

/// `C * (1, ..., 1)` with the leading pad column, length `2n`:
/// `(0, C1, C1+C2, ..., C1+...+Cn, C2+...+Cn, ..., Cn)`.
pub fn running_sums(c: &VerticalVec) -> Result<DigitSeq> {
    if c.entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    DigitSeq::from_digits(c.radix, running_sum_columns(&c.entries, &mut ()))
}

fn running_sum_columns<T: Tally>(c: &[i64], tally: &mut T) -> Vec<i64> {
    let mut out = Vec::with_capacity(2 * c.len());
    out.push(0);
    out.extend(repunit_product_counted(c, c.len(), tally));
    out
}

fn pad_pair(a: &DigitSeq, b: &DigitSeq) -> Result<(DigitSeq, DigitSeq)> {
    if a.radix() != b.radix() {
        return Err(Error::RadixMismatch {
            left: a.radix(),
            right: b.radix(),
        });
    }
    let n = a.len().max(b.len());
    Ok((a.padded(n), b.padded(n)))
}

/// Uncarried vertical-formula columns `running_sums(C) - K` of two operands,
/// the shorter one zero-padded on the left.
pub fn vertical_columns(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    let (a, b) = pad_pair(a, b)?;
    DigitSeq::from_digits(a.radix(), vertical_column_values(a.digits(), b.digits(), &mut ()))
}

fn vertical_column_values<T: Tally>(a: &[i64], b: &[i64], tally: &mut T) -> Vec<i64> {
    let k = tare_entries(a, b, tally);
    let c = vertical_entries(a, b, tally);
    let mut columns = running_sum_columns(&c, tally);
    tally.add(columns.len() as u64);
    for (col, t) in columns.iter_mut().zip(&k) {
        *col -= t;
    }
    columns
}

/// Product by the vertical multiplication formula. Operands may carry
/// non-canonical digits (balanced digits, oversized blocks) as long as both
/// represent non-negative values.
pub fn multiply_vertical(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    multiply_vertical_counted(a, b, &mut ())
}

pub fn multiply_vertical_counted<T: Tally>(a: &DigitSeq, b: &DigitSeq, tally: &mut T) -> Result<DigitSeq> {
    let (a, b) = pad_pair(a, b)?;
    let columns = vertical_column_values(a.digits(), b.digits(), tally);
    DigitSeq::from_digits(a.radix(), carry_columns(a.radix() as i64, &columns, tally)?)
}

/// Vertical formula applied to blocks, flattened back to base digits.
pub fn multiply_vertical_segmented(a: &SegmentedNumber, b: &SegmentedNumber) -> Result<DigitSeq> {
    let product = multiply_vertical(&a.to_digit_seq(), &b.to_digit_seq())?;
    let blocks = SegmentedNumber::from_digit_seq(a.base_radix(), a.segment_length(), &product)?;
    Ok(flatten(&blocks)?.trimmed())
}

/// Binary columns `(C, -C)_n - K`: in radix 2 the repunit of length `n` is
/// `2^n - 1`, so `C * (1, ..., 1)` is `C` shifted by `n` places minus `C`.
pub fn binary_identity_columns(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    if a.radix() != 2 {
        return Err(Error::RadixNotBinary(a.radix()));
    }
    let (a, b) = pad_pair(a, b)?;
    DigitSeq::from_digits(2, binary_identity_values(a.digits(), b.digits(), &mut ()))
}

fn binary_identity_values<T: Tally>(a: &[i64], b: &[i64], tally: &mut T) -> Vec<i64> {
    let k = tare_entries(a, b, tally);
    let c = vertical_entries(a, b, tally);
    let mut columns: Vec<i64> = c.iter().copied().chain(c.iter().map(|&x| -x)).collect();
    tally.add(columns.len() as u64);
    for (col, t) in columns.iter_mut().zip(&k) {
        *col -= t;
    }
    columns
}

/// Radix-2 product through `a * b = (C, -C)_n - K`.
pub fn multiply_binary_identity(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    multiply_binary_identity_counted(a, b, &mut ())
}

pub fn multiply_binary_identity_counted<T: Tally>(
    a: &DigitSeq,
    b: &DigitSeq,
    tally: &mut T,
) -> Result<DigitSeq> {
    if a.radix() != 2 {
        return Err(Error::RadixNotBinary(a.radix()));
    }
    if b.radix() != 2 {
        return Err(Error::RadixNotBinary(b.radix()));
    }
    let (a, b) = pad_pair(a, b)?;
    let columns = binary_identity_values(a.digits(), b.digits(), tally);
    DigitSeq::from_digits(2, carry_columns(2, &columns, tally)?)
}

/// Split arity and base-case size of the recursive multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecursiveConfig {
    pub k: usize,
    pub threshold: usize,
}

impl Default for RecursiveConfig {
    fn default() -> Self {
        RecursiveConfig {
            k: 2,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl RecursiveConfig {
    pub fn new(k: usize, threshold: usize) -> Result<RecursiveConfig> {
        let config = RecursiveConfig { k, threshold };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArity(self.k));
        }
        if self.threshold < 1 {
            return Err(Error::InvalidThreshold);
        }
        Ok(())
    }
}

/// Recursive `k`-way vertical multiplication.
///
/// Each level pads both operands to a common multiple of `k`, splits them
/// into `k` blocks, and computes `k(k+1)/2` half-size products: the block
/// products `C_i` and the difference products `(A_i - A_j)(B_i - B_j)`.
/// Block column `c` then receives the running sum of the `C_i` in its window
/// minus the difference products of the pairs `(i, c - i)`. For `k = 2` this
/// is `z1 = z0 + z2 - (a1 - a0)(b1 - b0)`.
pub fn multiply_recursive(a: &DigitSeq, b: &DigitSeq, config: RecursiveConfig) -> Result<DigitSeq> {
    multiply_recursive_counted(a, b, config, &mut ())
}

pub fn multiply_recursive_counted<T: Tally>(
    a: &DigitSeq,
    b: &DigitSeq,
    config: RecursiveConfig,
    tally: &mut T,
) -> Result<DigitSeq> {
    config.validate()?;
    let (a, b) = pad_pair(a, b)?;
    let a = if a.is_canonical() { a } else { normalize(&a)? };
    let b = if b.is_canonical() { b } else { normalize(&b)? };
    let radix = a.radix() as i64;
    let digits = recursive_digits(radix, a.digits(), b.digits(), config, tally)?;
    DigitSeq::from_digits(a.radix(), digits)
}

/// Canonical (trimmed) product of two canonical digit slices.
pub(crate) fn recursive_digits<T: Tally>(
    radix: i64,
    a: &[i64],
    b: &[i64],
    config: RecursiveConfig,
    tally: &mut T,
) -> Result<Vec<i64>> {
    let n = a.len().max(b.len());
    if !T::COUNTING && (a.iter().all(|&d| d == 0) || b.iter().all(|&d| d == 0)) {
        return Ok(vec![0]);
    }
    if n <= config.threshold {
        return schoolbook_digits(radix, a, b, tally);
    }
    let k = config.k;
    let m = n.div_ceil(k);
    if m == 1 && !T::COUNTING {
        return single_digit_level(radix, a, b, k, tally);
    }
    let len = m * k;
    let a = left_pad(a, len);
    let b = left_pad(b, len);
    let a_blocks: Vec<&[i64]> = a.chunks(m).collect();
    let b_blocks: Vec<&[i64]> = b.chunks(m).collect();

    // every sub-product is widened to 2m columns
    let width = 2 * m;
    let mut vertical = Vec::with_capacity(k);
    for (x, y) in a_blocks.iter().zip(&b_blocks) {
        vertical.push(left_pad(&recursive_digits(radix, x, y, config, tally)?, width));
    }

    // window sums S_c, c = 0..2k-2, most significant block column first
    let mut window_sums: Vec<Vec<i64>> = vec![Vec::new(); 2 * k - 1];
    window_sums[0] = vertical[0].clone();
    for c in 1..k {
        window_sums[c] = add_columns(&window_sums[c - 1], &vertical[c], tally);
    }
    window_sums[2 * k - 2] = vertical[k - 1].clone();
    for c in (k..2 * k - 2).rev() {
        window_sums[c] = add_columns(&window_sums[c + 1], &vertical[c + 1 - k], tally);
    }

    let mut acc = vec![0i64; 2 * len];
    for (c, sum) in window_sums.iter().enumerate() {
        add_at(&mut acc, sum, m * (2 * k - 2 - c), Sign::Plus, tally);
    }

    for i in 0..k {
        for j in i + 1..k {
            let (sa, da) = sub_signed(radix, a_blocks[i], a_blocks[j], tally);
            let (sb, db) = sub_signed(radix, b_blocks[i], b_blocks[j], tally);
            let product = left_pad(&recursive_digits(radix, &da, &db, config, tally)?, width);
            // subtracting K_ij from block column i + j
            let sign = match sa.product(sb) {
                Sign::Plus => Sign::Minus,
                Sign::Minus => Sign::Plus,
            };
            add_at(&mut acc, &product, m * (2 * k - 2 - (i + j)), sign, tally);
        }
    }
    carry_columns(radix, &acc, tally)
}

/// The last recursion level, where every block is one digit, evaluated with
/// scalars: column `c + 1` gets the window sum of `C_i` minus the `K_ij`
/// with `i + j = c`. Same arithmetic as the general level, minus the
/// per-block allocations, so it is only used when nothing is counted.
fn single_digit_level<T: Tally>(radix: i64, a: &[i64], b: &[i64], k: usize, tally: &mut T) -> Result<Vec<i64>> {
    let digit = |x: &[i64], i: usize| {
        let offset = k - x.len();
        if i < offset {
            0
        } else {
            x[i - offset]
        }
    };
    let mut acc = vec![0i64; 2 * k];
    for i in 0..k {
        let (ai, bi) = (digit(a, i), digit(b, i));
        let c = ai * bi;
        // C_i lies in the windows i..=i+k-1
        for slot in &mut acc[i + 1..i + k + 1] {
            *slot += c;
        }
        for j in i + 1..k {
            acc[i + j + 1] -= (ai - digit(a, j)) * (bi - digit(b, j));
        }
    }
    carry_columns(radix, &acc, tally)
}

fn left_pad(x: &[i64], len: usize) -> Vec<i64> {
    if x.len() >= len {
        return x.to_vec();
    }
    let mut out = vec![0; len - x.len()];
    out.extend_from_slice(x);
    out
}

fn add_columns<T: Tally>(x: &[i64], y: &[i64], tally: &mut T) -> Vec<i64> {
    tally.add(x.len() as u64);
    x.iter().zip(y).map(|(p, q)| p + q).collect()
}

/// Adds `sign * x` into `acc` with the last digit of `x` at place value
/// `radix^shift`. Both vectors are most significant first.
fn add_at<T: Tally>(acc: &mut [i64], x: &[i64], shift: usize, sign: Sign, tally: &mut T) {
    let end = acc.len() - shift;
    let start = end - x.len();
    tally.add(x.len() as u64);
    for (slot, &d) in acc[start..end].iter_mut().zip(x) {
        match sign {
            Sign::Plus => *slot += d,
            Sign::Minus => *slot -= d,
        }
    }
}

/// `|x - y|` of two equal-length canonical slices and its sign.
fn sub_signed<T: Tally>(radix: i64, x: &[i64], y: &[i64], tally: &mut T) -> (Sign, Vec<i64>) {
    let (sign, big, small) = if x >= y {
        (Sign::Plus, x, y)
    } else {
        (Sign::Minus, y, x)
    };
    tally.add(x.len() as u64);
    let mut out = vec![0i64; big.len()];
    let mut borrow = 0;
    for i in (0..big.len()).rev() {
        let mut d = big[i] - small[i] - borrow;
        if d < 0 {
            d += radix;
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[i] = d;
    }
    (sign, out)
}
