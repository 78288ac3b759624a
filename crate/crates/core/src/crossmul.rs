//! Column-by-column schoolbook multiplication.
//!
//! Every column of a product, before carrying, is the cross product sum of
//! one sliding window of the operands:
//! `[a1 a2 a3; b1 b2 b3] = a1*b3 + a2*b2 + a3*b1`. Enumerating the windows from `[a1; b1]` to `[am; bn]` gives the
//! whole uncarried product, which [`normalize`] then carries. This module is
//! the quadratic reference that every other multiplier is checked against.

use crate::bench::Tally;
use crate::digits::{carry_columns, flatten, DigitSeq, SegmentedNumber};
use crate::error::{Error, Result};

/// Two equal-length digit windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window<'a> {
    a: &'a [i64],
    b: &'a [i64],
}

impl<'a> Window<'a> {
    pub fn new(a: &'a [i64], b: &'a [i64]) -> Result<Window<'a>> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Window { a, b })
    }

    pub fn a(&self) -> &'a [i64] {
        self.a
    }

    pub fn b(&self) -> &'a [i64] {
        self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `sum(a[i] * b[n-1-i])`.
pub fn cross_sum(w: Window<'_>) -> i64 {
    cross_sum_counted(w, &mut ())
}

pub(crate) fn cross_sum_counted<T: Tally>(w: Window<'_>, tally: &mut T) -> i64 {
    let n = w.len();
    tally.mul(n as u64);
    tally.add(n as u64 - 1);
    w.a.iter().zip(w.b.iter().rev()).map(|(&x, &y)| x * y).sum()
}

/// The `k`-th Lemma-1 window (0-based) of an `m`-digit and an `n`-digit
/// operand, `m >= n`. Windows grow from `[a1; b1]` to full width `n`, slide
/// along `a`, then shrink to `[am; bn]`.
pub fn window<'a>(a: &'a [i64], b: &'a [i64], k: usize) -> Window<'a> {
    let (m, n) = (a.len(), b.len());
    debug_assert!(m >= n && k < m + n - 1);
    let a_lo = k.saturating_sub(n - 1);
    let a_hi = k.min(m - 1);
    let b_lo = k - a_hi;
    let b_hi = k - a_lo;
    Window {
        a: &a[a_lo..=a_hi],
        b: &b[b_lo..=b_hi],
    }
}

fn check_same_radix(a: &DigitSeq, b: &DigitSeq) -> Result<()> {
    if a.radix() != b.radix() {
        return Err(Error::RadixMismatch {
            left: a.radix(),
            right: b.radix(),
        });
    }
    Ok(())
}

/// All `m + n - 1` uncarried product columns, most significant first. The
/// longer operand plays the role of `a`.
pub fn raw_columns(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    check_same_radix(a, b)?;
    DigitSeq::from_digits(a.radix(), raw_column_values(a.digits(), b.digits(), &mut ()))
}

pub(crate) fn raw_column_values<T: Tally>(a: &[i64], b: &[i64], tally: &mut T) -> Vec<i64> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    (0..a.len() + b.len() - 1)
        .map(|k| cross_sum_counted(window(a, b, k), tally))
        .collect()
}

/// Uncarried columns of two segmented operands, as digits of the block radix.
pub fn raw_columns_segmented(a: &SegmentedNumber, b: &SegmentedNumber) -> Result<DigitSeq> {
    raw_columns(&a.to_digit_seq(), &b.to_digit_seq())
}

/// Schoolbook product: carried [`raw_columns`].
pub fn multiply_schoolbook(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    multiply_schoolbook_counted(a, b, &mut ())
}

pub fn multiply_schoolbook_counted<T: Tally>(
    a: &DigitSeq,
    b: &DigitSeq,
    tally: &mut T,
) -> Result<DigitSeq> {
    check_same_radix(a, b)?;
    let digits = schoolbook_digits(a.radix() as i64, a.digits(), b.digits(), tally)?;
    DigitSeq::from_digits(a.radix(), digits)
}

pub(crate) fn schoolbook_digits<T: Tally>(
    radix: i64,
    a: &[i64],
    b: &[i64],
    tally: &mut T,
) -> Result<Vec<i64>> {
    let columns = raw_column_values(a, b, tally);
    carry_columns(radix, &columns, tally)
}

/// Multiplies segmented operands block-wise and flattens the carried result
/// back to base-radix digits.
pub fn multiply_schoolbook_segmented(a: &SegmentedNumber, b: &SegmentedNumber) -> Result<DigitSeq> {
    let product = multiply_schoolbook(&a.to_digit_seq(), &b.to_digit_seq())?;
    let blocks = SegmentedNumber::from_digit_seq(a.base_radix(), a.segment_length(), &product)?;
    Ok(flatten(&blocks)?.trimmed())
}
