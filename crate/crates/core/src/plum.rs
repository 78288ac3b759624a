//! Scissor products and the plum-blossom digit product.
//!
//! The plum-blossom product `a ♣ b` of two digits is the ones digit of
//! `a * b`, shifted down by ten when it exceeds 3, so it always lies in
//! `[-6, 3]`. Its carry `J` satisfies `a * b = 10 * J + (a ♣ b)`. Feeding
//! the plum products of each window and the carries of the next lower window
//! into the cross-product-sum columns gives small, often cancelling columns.

use std::fmt;

use crate::bench::Tally;
use crate::crossmul::window;
use crate::digits::{carry_columns, DigitSeq};
use crate::error::{Error, Result};

pub const PLUM_MIN: i64 = -6;
pub const PLUM_MAX: i64 = 3;

fn check_digit(d: i64) -> Result<()> {
    if (1..=9).contains(&d) {
        Ok(())
    } else {
        Err(Error::DigitOutOfRange { digit: d, radix: 10 })
    }
}

/// `a ♣ b` for digits 1 to 9.
pub fn plum(a: i64, b: i64) -> Result<i64> {
    check_digit(a)?;
    check_digit(b)?;
    Ok(plum_unchecked(a, b))
}

fn plum_unchecked(a: i64, b: i64) -> i64 {
    let ones = (a * b) % 10;
    if ones <= PLUM_MAX {
        ones
    } else {
        ones - 10
    }
}

/// Carry `J(a ♣ b) = (a*b - a♣b) / 10`.
pub fn plum_carry(a: i64, b: i64) -> Result<i64> {
    Ok((a * b - plum(a, b)?) / 10)
}

/// The closed-form carry, for `a <= b` after symmetrizing:
///
/// * `a` when (`a = 1` or `b = 9`) and `b - a >= 3`
/// * `a` when `b - a >= 5`
/// * `a - 2` when `3 <= a <= b <= 7` and `b - a <= 1`
/// * `a - 1` otherwise
pub fn plum_carry_formula(a: i64, b: i64) -> Result<i64> {
    check_digit(a)?;
    check_digit(b)?;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    Ok(carry_case(a, b, CaseReading::GroupedDisjunction))
}

/// The two ways of bracketing the first case of the carry formula,
/// "a = 1 or b = 9, and b - a >= 3".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseReading {
    /// `(a = 1 or b = 9) and b - a >= 3`
    GroupedDisjunction,
    /// `a = 1 or (b = 9 and b - a >= 3)`
    LooseDisjunction,
}

fn carry_case(a: i64, b: i64, reading: CaseReading) -> i64 {
    let first = match reading {
        CaseReading::GroupedDisjunction => (a == 1 || b == 9) && b - a >= 3,
        CaseReading::LooseDisjunction => a == 1 || (b == 9 && b - a >= 3),
    };
    if first || b - a >= 5 {
        a
    } else if 3 <= a && b <= 7 && b - a <= 1 {
        a - 2
    } else {
        a - 1
    }
}

/// Pairs `a <= b` where the closed-form carry under `reading` differs from
/// the arithmetic carry: `(a, b, arithmetic, formula)`.
pub fn carry_formula_disagreements(reading: CaseReading) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for a in 1..=9 {
        for b in a..=9 {
            let forced = (a * b - plum_unchecked(a, b)) / 10;
            let formula = carry_case(a, b, reading);
            if forced != formula {
                out.push((a, b, forced, formula));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlumEntry {
    pub a: i64,
    pub b: i64,
    pub plum: i64,
    pub carry_j: i64,
}

/// Full symmetric 9×9 table generated from the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumTable {
    cells: [[PlumEntry; 9]; 9],
}

pub fn plum_table() -> PlumTable {
    let cells = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (i as i64 + 1, j as i64 + 1);
            let plum = plum_unchecked(a, b);
            PlumEntry {
                a,
                b,
                plum,
                carry_j: (a * b - plum) / 10,
            }
        })
    });
    PlumTable { cells }
}

impl PlumTable {
    pub fn get(&self, a: i64, b: i64) -> Result<PlumEntry> {
        check_digit(a)?;
        check_digit(b)?;
        Ok(self.cells[a as usize - 1][b as usize - 1])
    }

    pub fn entries(&self) -> impl Iterator<Item = &PlumEntry> {
        self.cells.iter().flatten()
    }

    /// Rows in the upper-triangular layout, blanks below the diagonal.
    pub fn render_upper(&self) -> String {
        self.render(true)
    }

    pub fn render_full(&self) -> String {
        self.render(false)
    }

    fn render(&self, upper: bool) -> String {
        let mut out = String::from(" ♣ |");
        for b in 1..=9 {
            out.push_str(&format!("{b:>4}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(4 + 4 * 9));
        out.push('\n');
        for row in &self.cells {
            out.push_str(&format!("{:>2} |", row[0].a));
            for cell in row {
                if upper && cell.b < cell.a {
                    out.push_str("    ");
                } else {
                    out.push_str(&format!("{:>4}", cell.plum));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Compares the generated table against the published upper triangle.
    pub fn diff_printed(&self) -> TableDiff {
        let mut mismatches = Vec::new();
        let mut checked = 0;
        for (i, row) in PRINTED_TABLE.iter().enumerate() {
            let a = i as i64 + 1;
            for (offset, &printed) in row.iter().enumerate() {
                let b = a + offset as i64;
                let generated = self.cells[i][b as usize - 1].plum;
                checked += 1;
                if generated != printed {
                    mismatches.push(CellMismatch {
                        a,
                        b,
                        printed,
                        generated,
                    });
                }
            }
        }
        TableDiff { checked, mismatches }
    }
}

/// Upper triangle of the plum-blossom table as published; row `a` starts at
/// column `b = a`.
pub const PRINTED_TABLE: [&[i64]; 9] = [
    &[1, 2, 3, -6, -5, -4, -3, -2, -1],
    &[-6, -4, -2, 0, 2, -6, -4, -2],
    &[-1, 2, -5, -2, 1, -6, -3],
    &[-4, 0, -6, -2, 2, -4],
    &[-5, 0, -5, 0, -5],
    &[-4, 2, -2, -6],
    &[-1, -4, 3],
    &[-6, 2],
    &[1],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellMismatch {
    pub a: i64,
    pub b: i64,
    pub printed: i64,
    pub generated: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDiff {
    pub checked: usize,
    pub mismatches: Vec<CellMismatch>,
}

impl fmt::Display for TableDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "printed table: {} cells checked, {} mismatches",
            self.checked,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  ({}, {}): printed {}, generated {}",
                m.a, m.b, m.printed, m.generated
            )?;
        }
        Ok(())
    }
}

/// Standard number `N = 10^n` for increments, complements and scissor
/// products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScissorContext {
    exponent: u32,
    standard: i64,
}

impl ScissorContext {
    pub fn new(exponent: u32) -> Result<ScissorContext> {
        if exponent == 0 {
            return Err(Error::InvalidRadix(1));
        }
        let standard = 10i64
            .checked_pow(exponent)
            .filter(|_| exponent <= 15)
            .ok_or(Error::InvalidRadix(exponent as u64))?;
        Ok(ScissorContext { exponent, standard })
    }

    pub fn standard(&self) -> i64 {
        self.standard
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

/// `a - N`.
pub fn increment(a: i64, ctx: ScissorContext) -> i64 {
    a - ctx.standard
}

/// `N - a`.
pub fn complement(a: i64, ctx: ScissorContext) -> i64 {
    ctx.standard - a
}

/// `a ∧ b = a*b - (min(a, b) - 1) * N`.
pub fn scissor(a: i64, b: i64, ctx: ScissorContext) -> i64 {
    a * b - (a.min(b) - 1) * ctx.standard
}

/// `a * b = (a - 1, a ∧ b)` as a two-block number in radix `N`, for `a <= b`.
pub fn scissor_decompose(a: i64, b: i64, ctx: ScissorContext) -> Result<(i64, i64)> {
    if a > b {
        return Err(Error::OrderViolation { a, b });
    }
    Ok((a - 1, scissor(a, b, ctx)))
}

/// Uncarried plum-blossom columns of two decimal operands, most significant
/// first. Column `c` sums the plum products of window `c` and the carries of
/// window `c + 1`. The leading column uses the full product and the units
/// column the ordinary ones digit, whose tens carry into the next column.
/// Pairs with a zero digit contribute nothing.
pub fn plum_columns(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    plum_columns_counted(a, b, &mut ())
}

/// Each nonzero digit pair costs one table lookup (counted as a digit
/// multiplication) and two additions into the plum and carry sums.
fn plum_columns_counted<T: Tally>(a: &DigitSeq, b: &DigitSeq, tally: &mut T) -> Result<DigitSeq> {
    if a.radix() != 10 || b.radix() != 10 {
        return Err(Error::Unsupported {
            algorithm: "plum",
            reason: "plum-blossom products are defined for decimal digits".into(),
        });
    }
    for &d in a.digits().iter().chain(b.digits()) {
        if !(0..=9).contains(&d) {
            return Err(Error::DigitOutOfRange { digit: d, radix: 10 });
        }
    }
    let (a, b) = if a.len() >= b.len() {
        (a.digits(), b.digits())
    } else {
        (b.digits(), a.digits())
    };
    let count = a.len() + b.len() - 1;
    let last = count - 1;
    let plums: Vec<(i64, i64)> = (0..count)
        .map(|k| {
            let w = window(a, b, k);
            w.a()
                .iter()
                .zip(w.b().iter().rev())
                .fold((0, 0), |(p, j), (&x, &y)| {
                    if x == 0 || y == 0 {
                        return (p, j);
                    }
                    tally.mul(1);
                    tally.add(2);
                    // the units column keeps the ordinary ones digit
                    let q = if k == last { x * y % 10 } else { plum_unchecked(x, y) };
                    (p + q, j + (x * y - q) / 10)
                })
        })
        .collect();
    let columns = (0..count)
        .map(|k| {
            let incoming = plums.get(k + 1).map_or(0, |&(_, j)| j);
            let own = if k == 0 {
                tally.mul(1);
                a[0] * b[0]
            } else {
                plums[k].0
            };
            tally.add(1);
            own + incoming
        })
        .collect();
    DigitSeq::from_digits(10, columns)
}

/// Decimal product by the plum-blossom method.
pub fn multiply_plum(a: &DigitSeq, b: &DigitSeq) -> Result<DigitSeq> {
    multiply_plum_counted(a, b, &mut ())
}

pub fn multiply_plum_counted<T: Tally>(a: &DigitSeq, b: &DigitSeq, tally: &mut T) -> Result<DigitSeq> {
    let raw = plum_columns_counted(a, b, tally)?;
    DigitSeq::from_digits(10, carry_columns(10, raw.digits(), tally)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::parse_number;

    fn dec(text: &str) -> DigitSeq {
        parse_number(text, 10).unwrap().1
    }

    #[test]
    fn plum_examples() {
        assert_eq!(plum(3, 7).unwrap(), 1);
        assert_eq!(plum(7, 7).unwrap(), -1);
        assert_eq!(plum(5, 8).unwrap(), 0);
        assert_eq!(plum(5, 5).unwrap(), -5);
        assert!(matches!(plum(0, 3), Err(Error::DigitOutOfRange { digit: 0, .. })));
        assert!(matches!(plum(3, 10), Err(Error::DigitOutOfRange { digit: 10, .. })));
    }

    #[test]
    fn carry_examples() {
        assert_eq!(plum_carry(7, 7).unwrap(), 5);
        assert_eq!(plum_carry(1, 9).unwrap(), 1);
        assert_eq!(plum_carry(9, 9).unwrap(), 8);
        assert_eq!(plum_carry_formula(7, 7).unwrap(), 5);
        assert_eq!(plum_carry_formula(1, 9).unwrap(), 1);
        assert_eq!(plum_carry_formula(9, 9).unwrap(), 8);
        assert_eq!(plum_carry_formula(9, 1).unwrap(), 1);
    }

    #[test]
    fn carry_formula_readings() {
        assert!(carry_formula_disagreements(CaseReading::GroupedDisjunction).is_empty());
        assert_eq!(
            carry_formula_disagreements(CaseReading::LooseDisjunction),
            vec![(1, 1, 0, 1), (1, 2, 0, 1), (1, 3, 0, 1)]
        );
    }

    #[test]
    fn table_cells() {
        let t = plum_table();
        assert_eq!(t.get(1, 4).unwrap().plum, -6);
        assert_eq!(t.get(2, 5).unwrap().plum, 0);
        assert_eq!(t.get(5, 5).unwrap().plum, -5);
        assert_eq!(t.get(3, 5).unwrap().plum, -5);
        assert_eq!(t.get(9, 7).unwrap(), PlumEntry { a: 9, b: 7, plum: 3, carry_j: 6 });
        assert_eq!(t.entries().count(), 81);
    }

    #[test]
    fn printed_table_matches_definition() {
        let diff = plum_table().diff_printed();
        assert_eq!(diff.checked, 45);
        assert!(diff.mismatches.is_empty(), "{diff}");
    }

    #[test]
    fn table_layouts() {
        let t = plum_table();
        let upper = t.render_upper();
        let full = t.render_full();
        assert_eq!(upper.lines().count(), 11);
        assert!(upper.lines().nth(10).unwrap().ends_with("   1"));
        assert!(full.lines().nth(10).unwrap().starts_with(" 9 |  -1  -2  -3  -4"));
    }

    #[test]
    fn increment_and_complement() {
        let ten = ScissorContext::new(1).unwrap();
        let hundred = ScissorContext::new(2).unwrap();
        assert_eq!(increment(9, ten), -1);
        assert_eq!(complement(9, ten), 1);
        assert_eq!(increment(119, hundred), 19);
        assert_eq!(complement(119, hundred), -19);
        assert_eq!(increment(100, hundred), 0);
        assert!(ScissorContext::new(0).is_err());
    }

    #[test]
    fn scissor_examples() {
        let ten = ScissorContext::new(1).unwrap();
        let hundred = ScissorContext::new(2).unwrap();
        assert_eq!(scissor(3, 9, ten), 7);
        assert_eq!(scissor(9, 3, ten), 7);
        assert_eq!(scissor(2, 97, hundred), 94);
        assert_eq!(scissor(1, 57, hundred), 57);
        assert_eq!(scissor(5, 5, ten), -15);
    }

    #[test]
    fn scissor_decomposition() {
        let ten = ScissorContext::new(1).unwrap();
        let hundred = ScissorContext::new(2).unwrap();
        assert_eq!(scissor_decompose(3, 9, ten).unwrap(), (2, 7));
        assert_eq!(scissor_decompose(2, 97, hundred).unwrap(), (1, 94));
        assert_eq!(scissor_decompose(1, 8, ten).unwrap(), (0, 8));
        assert!(matches!(
            scissor_decompose(9, 3, ten),
            Err(Error::OrderViolation { a: 9, b: 3 })
        ));
    }

    #[test]
    fn plum_method_examples() {
        assert_eq!(plum_columns(&dec("386"), &dec("47")).unwrap().digits(), &[17, 12, -6, 2]);
        assert_eq!(multiply_plum(&dec("386"), &dec("47")).unwrap(), dec("18142"));
        assert_eq!(multiply_plum(&dec("47"), &dec("386")).unwrap(), dec("18142"));
        assert_eq!(
            plum_columns(&dec("456"), &dec("789")).unwrap().digits(),
            &[35, 9, 8, -2, 4]
        );
        assert_eq!(multiply_plum(&dec("456"), &dec("789")).unwrap(), dec("359784"));
        assert_eq!(plum_columns(&dec("6"), &dec("7")).unwrap().digits(), &[42]);
        assert_eq!(plum_columns(&dec("61"), &dec("83")).unwrap().digits(), &[51, -4, 3]);
        assert_eq!(plum_columns(&dec("62"), &dec("84")).unwrap().digits(), &[53, -10, 8]);
        assert_eq!(multiply_plum(&dec("6"), &dec("7")).unwrap(), dec("42"));
    }

    #[test]
    fn plum_method_with_zero_digits() {
        assert_eq!(multiply_plum(&dec("4657"), &dec("86")).unwrap(), dec("400502"));
        assert_eq!(multiply_plum(&dec("1002"), &dec("305")).unwrap(), dec("305610"));
        assert_eq!(multiply_plum(&dec("0"), &dec("305")).unwrap(), dec("0"));
    }

    #[test]
    fn plum_method_rejects_other_radices() {
        let x = parse_number("101", 2).unwrap().1;
        assert!(matches!(multiply_plum(&x, &x), Err(Error::Unsupported { .. })));
    }
}
