use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bench::Tally;
use crate::crossmul::multiply_schoolbook_counted;
use crate::digits::{flatten, normalize, segment_padded, DigitSeq, SegmentedNumber, Sign};
use crate::error::{Error, Result};
use crate::plum::multiply_plum_counted;
use crate::vertical::{
    multiply_binary_identity_counted, multiply_recursive_counted, multiply_vertical_counted,
    RecursiveConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Schoolbook,
    #[default]
    Vertical,
    Recursive,
    Binary,
    Plum,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Schoolbook,
        Algorithm::Vertical,
        Algorithm::Recursive,
        Algorithm::Binary,
        Algorithm::Plum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Schoolbook => "schoolbook",
            Algorithm::Vertical => "vertical",
            Algorithm::Recursive => "recursive",
            Algorithm::Binary => "binary",
            Algorithm::Plum => "plum",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Everything needed to pick and parameterize a multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MulOptions {
    pub algorithm: Algorithm,
    /// Segment length; blocks of this many digits act as single digits.
    pub segment: usize,
    pub recursive: RecursiveConfig,
}

impl Default for MulOptions {
    fn default() -> Self {
        MulOptions {
            algorithm: Algorithm::Vertical,
            segment: 1,
            recursive: RecursiveConfig::default(),
        }
    }
}

impl MulOptions {
    pub fn new(algorithm: Algorithm) -> MulOptions {
        MulOptions {
            algorithm,
            ..MulOptions::default()
        }
    }

    pub fn with_segment(mut self, segment: usize) -> MulOptions {
        self.segment = segment;
        self
    }

    pub fn with_recursive(mut self, k: usize, threshold: usize) -> MulOptions {
        self.recursive = RecursiveConfig { k, threshold };
        self
    }

    /// Rejects option combinations an algorithm cannot run with.
    pub fn validate(&self, radix: u32) -> Result<()> {
        self.recursive.validate()?;
        match self.algorithm {
            Algorithm::Binary if radix != 2 => Err(Error::RadixNotBinary(radix)),
            Algorithm::Binary if self.segment != 1 => Err(Error::Unsupported {
                algorithm: "binary",
                reason: "the (C, -C) identity needs single-bit digits; use vertical with a segment length".into(),
            }),
            Algorithm::Plum if radix != 10 || self.segment != 1 => Err(Error::Unsupported {
                algorithm: "plum",
                reason: "plum-blossom products need unsegmented decimal digits".into(),
            }),
            _ => Ok(()),
        }
    }
}

/// Product magnitude of two non-negative operands.
pub fn multiply(a: &DigitSeq, b: &DigitSeq, options: &MulOptions) -> Result<DigitSeq> {
    multiply_counted(a, b, options, &mut ())
}

pub fn multiply_counted<T: Tally>(
    a: &DigitSeq,
    b: &DigitSeq,
    options: &MulOptions,
    tally: &mut T,
) -> Result<DigitSeq> {
    if a.radix() != b.radix() {
        return Err(Error::RadixMismatch {
            left: a.radix(),
            right: b.radix(),
        });
    }
    options.validate(a.radix())?;
    let a = if a.is_canonical() { a.clone() } else { normalize(a)? };
    let b = if b.is_canonical() { b.clone() } else { normalize(b)? };
    if options.segment == 1 {
        return multiply_digits(&a, &b, options, tally);
    }
    let s = options.segment;
    let blocks = a.len().max(b.len()).div_ceil(s);
    let sa = segment_padded(&a, s, blocks)?;
    let sb = segment_padded(&b, s, blocks)?;
    let product = multiply_digits(&sa.to_digit_seq(), &sb.to_digit_seq(), options, tally)?;
    let out = SegmentedNumber::from_digit_seq(a.radix(), s, &product)?;
    Ok(flatten(&out)?.trimmed())
}

fn multiply_digits<T: Tally>(
    a: &DigitSeq,
    b: &DigitSeq,
    options: &MulOptions,
    tally: &mut T,
) -> Result<DigitSeq> {
    let product = match options.algorithm {
        Algorithm::Schoolbook => multiply_schoolbook_counted(a, b, tally)?,
        Algorithm::Vertical => multiply_vertical_counted(a, b, tally)?,
        Algorithm::Recursive => multiply_recursive_counted(a, b, options.recursive, tally)?,
        Algorithm::Binary => multiply_binary_identity_counted(a, b, tally)?,
        Algorithm::Plum => multiply_plum_counted(a, b, tally)?,
    };
    Ok(product.trimmed())
}

/// Signed product: magnitudes are multiplied, then the sign rule applied.
pub fn multiply_signed(
    a: (Sign, &DigitSeq),
    b: (Sign, &DigitSeq),
    options: &MulOptions,
) -> Result<(Sign, DigitSeq)> {
    let product = multiply(a.1, b.1, options)?;
    let sign = if product.is_zero() {
        Sign::Plus
    } else {
        a.0.product(b.0)
    };
    Ok((sign, product))
}
