//! Number representations shared by every multiplier.
//!
//! A [`DigitSeq`] is a most-significant-first list of signed digits in some
//! radix. Digits are allowed to leave `[0, radix)` so that uncarried column
//! sums such as `(4, 13, 28, 27, 18)` and balanced digits such as `6 6̄ 3`
//! can be carried around unchanged until [`normalize`] resolves them.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{Signed, Zero};

use crate::bench::Tally;
use crate::error::{Error, Result};

/// Largest radix (or segmented block radix) the multipliers accept. Column
/// sums are accumulated in `i64`, and an `n`-term column is bounded by
/// `n * (radix - 1)^2`.
pub const MAX_RADIX: u32 = 1 << 24;

/// Largest radix with a single-character text form (`0-9a-z`).
pub const MAX_TEXT_RADIX: u32 = 36;

const COMBINING_OVERLINE: char = '\u{0305}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn from_negative(negative: bool) -> Sign {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Sign of a product.
    pub fn product(self, other: Sign) -> Sign {
        Sign::from_negative(self.is_negative() != other.is_negative())
    }
}

/// Radix-`r` signed-digit sequence, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSeq {
    radix: u32,
    digits: Vec<i64>,
    canonical: bool,
}

fn check_radix(radix: u32) -> Result<()> {
    if (2..=MAX_RADIX).contains(&radix) {
        Ok(())
    } else {
        Err(Error::InvalidRadix(radix as u64))
    }
}

fn is_canonical_digits(radix: u32, digits: &[i64]) -> bool {
    let r = radix as i64;
    !digits.is_empty()
        && digits.iter().all(|&d| (0..r).contains(&d))
        && (digits.len() == 1 || digits[0] != 0)
}

impl DigitSeq {
    /// Builds a sequence from arbitrary integer digits. The canonical flag is
    /// derived from the digits.
    pub fn from_digits(radix: u32, digits: Vec<i64>) -> Result<DigitSeq> {
        check_radix(radix)?;
        if digits.is_empty() {
            return Err(Error::EmptyInput);
        }
        let canonical = is_canonical_digits(radix, &digits);
        Ok(DigitSeq {
            radix,
            digits,
            canonical,
        })
    }

    pub fn zero(radix: u32) -> Result<DigitSeq> {
        DigitSeq::from_digits(radix, vec![0])
    }

    /// Canonical digits of a non-negative big integer.
    pub fn from_biguint(value: &BigUint, radix: u32) -> Result<DigitSeq> {
        check_radix(radix)?;
        let digits = if value.is_zero() {
            vec![0]
        } else if radix <= 256 {
            value
                .to_radix_be(radix)
                .into_iter()
                .map(i64::from)
                .collect()
        } else {
            // block radices exceed what to_radix_be supports
            let mut rest = value.clone();
            let mut out = Vec::new();
            while !rest.is_zero() {
                let digit = &rest % radix;
                out.push(digit.to_u64_digits().first().copied().unwrap_or(0) as i64);
                rest /= radix;
            }
            out.reverse();
            out
        };
        DigitSeq::from_digits(radix, digits)
    }

    pub fn from_u64(value: u64, radix: u32) -> Result<DigitSeq> {
        DigitSeq::from_biguint(&BigUint::from(value), radix)
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<i64> {
        self.digits
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Exact represented value `sum(d_i * radix^(n-i))`.
    pub fn value(&self) -> BigInt {
        let radix = BigInt::from(self.radix);
        self.digits
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * &radix + BigInt::from(d))
    }

    /// Left-pads with zeros up to `len` digits. Never truncates.
    pub fn padded(&self, len: usize) -> DigitSeq {
        if self.digits.len() >= len {
            return self.clone();
        }
        let mut digits = vec![0; len - self.digits.len()];
        digits.extend_from_slice(&self.digits);
        DigitSeq {
            radix: self.radix,
            canonical: is_canonical_digits(self.radix, &digits),
            digits,
        }
    }

    /// Drops leading zero digits, keeping at least one digit.
    pub fn trimmed(&self) -> DigitSeq {
        let digits = trim_leading_zeros(&self.digits).to_vec();
        DigitSeq {
            radix: self.radix,
            canonical: is_canonical_digits(self.radix, &digits),
            digits,
        }
    }

    /// Plain text in `0-9a-z`. Requires every digit in `[0, radix)` and
    /// `radix <= 36`; leading zeros are kept.
    pub fn to_text(&self) -> Result<String> {
        if self.radix > MAX_TEXT_RADIX {
            return Err(Error::InvalidRadix(self.radix as u64));
        }
        self.digits
            .iter()
            .map(|&d| digit_char(d, self.radix))
            .collect()
    }

    /// Rewrites a canonical number into balanced digits: every digit above
    /// `radix / 2` becomes `digit - radix` with a carry into the next column,
    /// e.g. `29 -> 3 1̄`.
    pub fn balanced(&self) -> DigitSeq {
        let r = self.radix as i64;
        let mut out = Vec::with_capacity(self.digits.len() + 1);
        let mut carry = 0;
        for &d in self.digits.iter().rev() {
            let v = d + carry;
            let low = v.rem_euclid(r);
            carry = v.div_euclid(r);
            if 2 * low > r {
                out.push(low - r);
                carry += 1;
            } else {
                out.push(low);
            }
        }
        while carry != 0 {
            out.push(carry.rem_euclid(r));
            carry = carry.div_euclid(r);
        }
        out.reverse();
        let digits = trim_leading_zeros(&out).to_vec();
        DigitSeq {
            radix: self.radix,
            canonical: is_canonical_digits(self.radix, &digits),
            digits,
        }
    }
}

impl fmt::Display for DigitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Ok(text) if self.canonical => f.write_str(&text),
            _ => f.write_str(&tuple_string(&self.digits, self.radix)),
        }
    }
}

pub(crate) fn trim_leading_zeros(digits: &[i64]) -> &[i64] {
    let first = digits
        .iter()
        .position(|&d| d != 0)
        .unwrap_or(digits.len().saturating_sub(1));
    &digits[first..]
}

fn digit_char(d: i64, radix: u32) -> Result<char> {
    if !(0..radix as i64).contains(&d) {
        return Err(Error::DigitOutOfRange { digit: d, radix });
    }
    Ok(char::from_digit(d as u32, radix).expect("digit checked against radix"))
}

/// Parses an optionally signed number in `radix` (2 to 36). Underscores are
/// ignored as digit separators.
pub fn parse_number(text: &str, radix: u32) -> Result<(Sign, DigitSeq)> {
    if !(2..=MAX_TEXT_RADIX).contains(&radix) {
        return Err(Error::InvalidRadix(radix as u64));
    }
    let text = text.trim();
    let (sign, body) = match text.as_bytes().first() {
        Some(b'-') => (Sign::Minus, &text[1..]),
        Some(b'+') => (Sign::Plus, &text[1..]),
        _ => (Sign::Plus, text),
    };
    let mut digits = Vec::with_capacity(body.len());
    for c in body.chars().filter(|&c| c != '_') {
        let d = c
            .to_digit(radix)
            .ok_or(Error::InvalidDigit { digit: c, radix })?;
        digits.push(d as i64);
    }
    if digits.is_empty() {
        return Err(Error::EmptyInput);
    }
    let seq = DigitSeq::from_digits(radix, digits)?.trimmed();
    let sign = if seq.is_zero() { Sign::Plus } else { sign };
    Ok((sign, seq))
}

/// Carries a raw digit sequence into canonical form, processing columns
/// least-significant first. Negative columns borrow from the next higher
/// column through Euclidean division.
pub fn normalize(raw: &DigitSeq) -> Result<DigitSeq> {
    normalize_counted(raw, &mut ())
}

pub fn normalize_counted<T: Tally>(raw: &DigitSeq, tally: &mut T) -> Result<DigitSeq> {
    let digits = carry_columns(raw.radix as i64, &raw.digits, tally)?;
    Ok(DigitSeq {
        radix: raw.radix,
        digits,
        canonical: true,
    })
}

/// Core carry loop over MSB-first columns. Each column costs one addition
/// (column plus incoming carry).
pub(crate) fn carry_columns<T: Tally>(radix: i64, columns: &[i64], tally: &mut T) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(columns.len() + 2);
    let mut carry = 0i64;
    for &d in columns.iter().rev() {
        let v = d + carry;
        tally.add(1);
        out.push(v.rem_euclid(radix));
        carry = v.div_euclid(radix);
    }
    while carry > 0 {
        out.push(carry % radix);
        carry /= radix;
    }
    if carry < 0 {
        return Err(Error::NegativeValue);
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    if out.is_empty() {
        out.push(0);
    }
    out.reverse();
    Ok(out)
}

/// Normalizes a raw sequence whose value may be negative, returning the
/// sign and the canonical magnitude.
pub fn normalize_signed(raw: &DigitSeq) -> Result<(Sign, DigitSeq)> {
    let value = raw.value();
    let sign = Sign::from_negative(value.is_negative());
    let magnitude = DigitSeq::from_biguint(value.magnitude(), raw.radix)?;
    Ok((sign, magnitude))
}

/// A number regrouped into blocks of `segment_length` base-radix digits,
/// each block being one digit in radix `base_radix^segment_length`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SegmentedNumber {
    segment_length: usize,
    base_radix: u32,
    blocks: Vec<i64>,
}

/// Radix of one block, `base^segment`, if it stays within [`MAX_RADIX`].
pub fn block_radix(base_radix: u32, segment_length: usize) -> Result<u32> {
    check_radix(base_radix)?;
    if segment_length == 0 {
        return Err(Error::SegmentTooWide {
            radix: base_radix,
            segment: 0,
        });
    }
    let too_wide = Error::SegmentTooWide {
        radix: base_radix,
        segment: segment_length,
    };
    let exp = u32::try_from(segment_length).map_err(|_| too_wide)?;
    match base_radix.checked_pow(exp) {
        Some(r) if r <= MAX_RADIX => Ok(r),
        _ => Err(Error::SegmentTooWide {
            radix: base_radix,
            segment: segment_length,
        }),
    }
}

impl SegmentedNumber {
    pub fn new(base_radix: u32, segment_length: usize, blocks: Vec<i64>) -> Result<SegmentedNumber> {
        block_radix(base_radix, segment_length)?;
        if blocks.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(SegmentedNumber {
            segment_length,
            base_radix,
            blocks,
        })
    }

    pub fn segment_length(&self) -> usize {
        self.segment_length
    }

    pub fn base_radix(&self) -> u32 {
        self.base_radix
    }

    pub fn blocks(&self) -> &[i64] {
        &self.blocks
    }

    pub fn block_radix(&self) -> u32 {
        block_radix(self.base_radix, self.segment_length).expect("validated at construction")
    }

    pub fn is_canonical(&self) -> bool {
        let limit = self.block_radix() as i64;
        self.blocks.iter().all(|b| (0..limit).contains(b))
    }

    /// The blocks as digits of radix `base^segment`.
    pub fn to_digit_seq(&self) -> DigitSeq {
        DigitSeq::from_digits(self.block_radix(), self.blocks.clone())
            .expect("block radix and blocks validated at construction")
    }

    /// Reinterprets a block-radix digit sequence as a segmented number.
    pub fn from_digit_seq(base_radix: u32, segment_length: usize, seq: &DigitSeq) -> Result<SegmentedNumber> {
        let radix = block_radix(base_radix, segment_length)?;
        if seq.radix() != radix {
            return Err(Error::RadixMismatch {
                left: seq.radix(),
                right: radix,
            });
        }
        SegmentedNumber::new(base_radix, segment_length, seq.digits().to_vec())
    }

    /// Left-pads with zero blocks up to `blocks` blocks.
    pub fn padded(&self, blocks: usize) -> SegmentedNumber {
        let mut out = self.clone();
        if out.blocks.len() < blocks {
            let mut padded = vec![0; blocks - out.blocks.len()];
            padded.extend_from_slice(&out.blocks);
            out.blocks = padded;
        }
        out
    }

    pub fn value(&self) -> BigInt {
        self.to_digit_seq().value()
    }

    /// Tuple rendering with every canonical block zero-padded to the segment
    /// width, e.g. `(51,66,23,08)`.
    pub fn render(&self) -> String {
        let radix = self.block_radix() as i64;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|&b| {
                if (0..radix).contains(&b) && self.base_radix <= MAX_TEXT_RADIX {
                    let digits = BigUint::from(b as u64).to_radix_be(self.base_radix);
                    let mut s: String = digits
                        .iter()
                        .map(|&d| char::from_digit(d as u32, self.base_radix).unwrap())
                        .collect();
                    while s.len() < self.segment_length {
                        s.insert(0, '0');
                    }
                    s
                } else {
                    b.to_string()
                }
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// Groups a canonical number into blocks of `s` digits from the right,
/// zero-padding the leading block.
pub fn segment(x: &DigitSeq, s: usize) -> Result<SegmentedNumber> {
    segment_padded(x, s, 0)
}

/// Like [`segment`], then left-pads to at least `min_blocks` blocks.
pub fn segment_padded(x: &DigitSeq, s: usize, min_blocks: usize) -> Result<SegmentedNumber> {
    block_radix(x.radix, s)?;
    let r = x.radix as i64;
    let block_count = x.digits.len().div_ceil(s);
    let padded = x.padded(block_count * s);
    let blocks = padded
        .digits
        .chunks(s)
        .map(|chunk| chunk.iter().fold(0i64, |acc, &d| acc * r + d))
        .collect();
    Ok(SegmentedNumber::new(x.radix, s, blocks)?.padded(min_blocks))
}

/// Expands each canonical block into `s` zero-padded base-radix digits.
/// Leading zero blocks are kept, so the result is only canonical when the
/// first block is nonzero.
pub fn flatten(x: &SegmentedNumber) -> Result<DigitSeq> {
    let limit = x.block_radix() as i64;
    let r = x.base_radix as i64;
    let mut digits = Vec::with_capacity(x.blocks.len() * x.segment_length);
    for &block in &x.blocks {
        if !(0..limit).contains(&block) {
            return Err(Error::NonCanonicalBlock { block, limit });
        }
        let start = digits.len();
        let mut rest = block;
        for _ in 0..x.segment_length {
            digits.push(rest % r);
            rest /= r;
        }
        digits[start..].reverse();
    }
    DigitSeq::from_digits(x.base_radix, digits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Notation {
    /// Negative digit `-d` written as `d` followed by U+0305.
    #[default]
    UnicodeOverline,
    /// Negative digit `-d` written as `d~`.
    AsciiTilde,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedRendering {
    pub text: String,
    pub notation: Notation,
}

impl fmt::Display for BalancedRendering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Renders digits with `|d| < radix` compactly, marking negative digits.
pub fn render_balanced(x: &DigitSeq, notation: Notation) -> Result<BalancedRendering> {
    if x.radix > MAX_TEXT_RADIX {
        return Err(Error::InvalidRadix(x.radix as u64));
    }
    let mut text = String::with_capacity(x.digits.len() * 2);
    for &d in &x.digits {
        text.push(digit_char(d.abs(), x.radix)?);
        if d < 0 {
            match notation {
                Notation::UnicodeOverline => text.push(COMBINING_OVERLINE),
                Notation::AsciiTilde => text.push('~'),
            }
        }
    }
    Ok(BalancedRendering { text, notation })
}

/// Inverse of [`render_balanced`]; accepts either negative-digit marker.
pub fn parse_balanced(text: &str, radix: u32) -> Result<DigitSeq> {
    if !(2..=MAX_TEXT_RADIX).contains(&radix) {
        return Err(Error::InvalidRadix(radix as u64));
    }
    let mut digits: Vec<i64> = Vec::with_capacity(text.len());
    for c in text.trim().chars() {
        match c {
            COMBINING_OVERLINE | '~' => match digits.last_mut() {
                Some(d) if *d > 0 => *d = -*d,
                // a marker on zero or a repeated marker is meaningless
                _ => return Err(Error::InvalidDigit { digit: c, radix }),
            },
            '_' => {}
            _ => {
                let d = c
                    .to_digit(radix)
                    .ok_or(Error::InvalidDigit { digit: c, radix })?;
                digits.push(d as i64);
            }
        }
    }
    if digits.is_empty() {
        return Err(Error::EmptyInput);
    }
    DigitSeq::from_digits(radix, digits)
}

/// Tuple rendering used by traces: `(2,3,1̄,3,2,6)`. Negative entries with a
/// single-character magnitude get an overline, others a minus sign.
pub fn tuple_string(values: &[i64], radix: u32) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|&v| {
            if v < 0 && radix <= 10 && v.unsigned_abs() < radix as u64 {
                format!("{}{}", v.unsigned_abs(), COMBINING_OVERLINE)
            } else {
                v.to_string()
            }
        })
        .collect();
    format!("({})", parts.join(","))
}

/// Signed text of a big integer in `radix`, used for tare values.
pub fn bigint_text(value: &BigInt, radix: u32) -> String {
    let body = value.magnitude().to_str_radix(radix);
    if value.sign() == BigSign::Minus {
        format!("-{body}")
    } else {
        body
    }
}
