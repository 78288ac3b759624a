//! Step-by-step traces of a multiplication, in the layout of a worked
//! mental-arithmetic solution: difference products, tare, vertical
//! products, repunit multiplication, tare subtraction, carrying.
//!
//! Every step stores its raw integer payload, so a trace can be re-checked
//! mechanically with [`Trace::verify`], and a rendered form that shows the
//! raw tuple next to its carried and balanced-digit equivalents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::crossmul::raw_columns;
use crate::digits::{
    bigint_text, block_radix, carry_columns, flatten, render_balanced, segment_padded,
    tuple_string, DigitSeq, Notation, SegmentedNumber, MAX_TEXT_RADIX,
};
use crate::error::{Error, Result};
use crate::plum::plum_columns;
use crate::vertical::{
    difference_product, multiply_recursive, repunit_product, tare, vertical_products,
    RecursiveConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Vertical,
    Plum,
    Schoolbook,
    BinaryIdentity,
    Recursive,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Vertical => "vertical",
            Method::Plum => "plum",
            Method::Schoolbook => "schoolbook",
            Method::BinaryIdentity => "binary_identity",
            Method::Recursive => "recursive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepLabel {
    SegmentChoice,
    DifferenceProducts,
    Tare,
    VerticalProducts,
    RunningSums,
    TareSubtraction,
    CrossSums,
    PlumColumns,
    Normalization,
}

impl StepLabel {
    pub fn name(self) -> &'static str {
        match self {
            StepLabel::SegmentChoice => "segment_choice",
            StepLabel::DifferenceProducts => "difference_products",
            StepLabel::Tare => "tare",
            StepLabel::VerticalProducts => "vertical_products",
            StepLabel::RunningSums => "running_sums",
            StepLabel::TareSubtraction => "tare_subtraction",
            StepLabel::CrossSums => "cross_sums",
            StepLabel::PlumColumns => "plum_columns",
            StepLabel::Normalization => "normalization",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub label: StepLabel,
    /// Raw integers. The tare keeps its leading pad zero so that it lines up
    /// with the running sums; its rendered forms show the columns only.
    pub payload: Vec<i64>,
    /// One-line headline: a tuple, or a value for the tare.
    pub summary: String,
    /// Raw tuple with its carried and balanced-digit forms.
    pub balanced: String,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub method: Method,
    pub radix: u32,
    pub segment: usize,
    pub operands: [DigitSeq; 2],
    pub steps: Vec<TraceStep>,
    pub result: DigitSeq,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    pub segment: usize,
    /// Rewrite the multiplicand with balanced digits first (`29 -> 3 1̄`).
    pub balanced_multiplicand: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            segment: 1,
            balanced_multiplicand: false,
        }
    }
}

impl TraceOptions {
    pub fn segment(segment: usize) -> TraceOptions {
        TraceOptions {
            segment,
            ..TraceOptions::default()
        }
    }
}

fn operand_text(x: &DigitSeq) -> String {
    if x.is_canonical() {
        if let Ok(text) = x.to_text() {
            return text;
        }
    }
    if x.radix() <= MAX_TEXT_RADIX && x.digits().iter().all(|d| d.unsigned_abs() < x.radix() as u64) {
        if let Ok(r) = render_balanced(x, Notation::UnicodeOverline) {
            return r.text;
        }
    }
    tuple_string(x.digits(), x.radix())
}

/// Canonical digits of a non-negative big integer as text in `radix`.
fn value_text(value: &BigInt, radix: u32) -> String {
    if radix <= MAX_TEXT_RADIX {
        bigint_text(value, radix)
    } else {
        value.to_string()
    }
}

/// `tuple = carried = balanced`, dropping forms that repeat the previous one.
/// `columns` are positional digits of radix `base^segment`.
fn positional_forms(columns: &[i64], base: u32, segment: usize) -> String {
    let radix = block_radix(base, segment).expect("trace radices are validated");
    let tuple = tuple_string(columns, radix);
    let value = DigitSeq::from_digits(radix, columns.to_vec())
        .expect("payload is never empty")
        .value();
    let mut forms = vec![tuple];
    let carried = if segment == 1 {
        value_text(&value, base)
    } else if value >= BigInt::from(0) {
        let digits = DigitSeq::from_biguint(value.magnitude(), radix).expect("radix validated");
        SegmentedNumber::new(base, segment, digits.into_digits())
            .expect("radix validated")
            .render()
    } else {
        value_text(&value, base)
    };
    if !forms.contains(&carried) {
        forms.push(carried);
    }
    if segment == 1 && base <= 10 && value > BigInt::from(0) {
        let canonical = DigitSeq::from_biguint(value.magnitude(), base).expect("radix validated");
        let balanced = canonical.balanced();
        if balanced.digits() != canonical.digits() {
            let text = render_balanced(&balanced, Notation::UnicodeOverline)
                .expect("balanced digits are in range")
                .text;
            forms.push(text);
        }
    }
    forms.join(" = ")
}

fn pair_name(i: usize, j: usize, n: usize) -> String {
    if n <= 9 {
        format!("K{}{}", i + 1, j + 1)
    } else {
        format!("K({},{})", i + 1, j + 1)
    }
}

/// Difference products `K_ij`, `i < j`, in lexicographic order.
fn difference_products(a: &[i64], b: &[i64]) -> Vec<(usize, usize, i64)> {
    let n = a.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j, difference_product(a[i], a[j], b[i], b[j])));
        }
    }
    out
}

/// Tare entries rebuilt from difference products: entry `1 + c` collects
/// the pairs `(i, c - i)` of window `c`.
fn tare_from_pairs(n: usize, pairs: &[(usize, usize, i64)]) -> Vec<i64> {
    let mut entries = vec![0i64; 2 * n];
    for &(i, j, k) in pairs {
        entries[1 + i + j] += k;
    }
    entries
}

fn step(label: StepLabel, payload: Vec<i64>, summary: String, balanced: String) -> TraceStep {
    TraceStep {
        label,
        payload,
        summary,
        balanced,
        note: None,
    }
}

struct BlockOperands {
    base: u32,
    segment: usize,
    radix: u32,
    a: Vec<i64>,
    b: Vec<i64>,
}

fn block_operands(a: &DigitSeq, b: &DigitSeq, options: TraceOptions) -> Result<BlockOperands> {
    if a.radix() != b.radix() {
        return Err(Error::RadixMismatch {
            left: a.radix(),
            right: b.radix(),
        });
    }
    let base = a.radix();
    let s = options.segment;
    let radix = block_radix(base, s)?;
    let a = if options.balanced_multiplicand {
        a.balanced()
    } else {
        a.clone()
    };
    let (a, b) = if s == 1 {
        let n = a.len().max(b.len());
        (a.padded(n).into_digits(), b.padded(n).into_digits())
    } else {
        if !a.is_canonical() || !b.is_canonical() {
            return Err(Error::Unsupported {
                algorithm: "trace",
                reason: "segmented traces need canonical operands".into(),
            });
        }
        let blocks = a.len().max(b.len()).div_ceil(s);
        (
            segment_padded(&a, s, blocks)?.blocks().to_vec(),
            segment_padded(b, s, blocks)?.blocks().to_vec(),
        )
    };
    Ok(BlockOperands {
        base,
        segment: s,
        radix,
        a,
        b,
    })
}

fn block_tuple(blocks: &[i64], ops: &BlockOperands) -> String {
    if ops.segment > 1 {
        SegmentedNumber::new(ops.base, ops.segment, blocks.to_vec())
            .map(|s| s.render())
            .unwrap_or_else(|_| tuple_string(blocks, ops.radix))
    } else {
        tuple_string(blocks, ops.radix)
    }
}

fn result_from_blocks(blocks: &[i64], ops: &BlockOperands) -> Result<DigitSeq> {
    let seq = SegmentedNumber::new(ops.base, ops.segment, blocks.to_vec())?;
    Ok(flatten(&seq)?.trimmed())
}

/// Vertical-formula trace. With `segment > 1` blocks of that many digits
/// act as digits; with `segment == 1` the operands' digits are used as
/// given, so non-canonical operands such as `(24, 28)` for 268 work.
pub fn trace_vertical(a: &DigitSeq, b: &DigitSeq, options: TraceOptions) -> Result<Trace> {
    let ops = block_operands(a, b, options)?;
    let mut trace = vertical_trace(Method::Vertical, &ops, [a.clone(), b.clone()], |x, y| {
        Ok(vertical_products(
            &DigitSeq::from_digits(ops.radix, x.to_vec())?,
            &DigitSeq::from_digits(ops.radix, y.to_vec())?,
        )?
        .entries()
        .to_vec())
    })?;
    if options.balanced_multiplicand {
        trace.notes.push(format!(
            "multiplicand rewritten with balanced digits: {} = {}",
            operand_text(a),
            operand_text(&a.balanced())
        ));
    }
    Ok(trace)
}

/// Top level of the recursive `k`-way multiplier: the operands are split
/// into `k` blocks and combined by the vertical formula, with each block
/// product computed by the recursion.
pub fn trace_recursive(a: &DigitSeq, b: &DigitSeq, config: RecursiveConfig) -> Result<Trace> {
    config.validate()?;
    let n = a.len().max(b.len());
    let segment = n.div_ceil(config.k);
    let ops = block_operands(a, b, TraceOptions::segment(segment))?;
    let base = ops.base;
    let mut trace = vertical_trace(Method::Recursive, &ops, [a.clone(), b.clone()], |x, y| {
        x.iter()
            .zip(y)
            .map(|(&p, &q)| {
                let p = DigitSeq::from_u64(p as u64, base)?;
                let q = DigitSeq::from_u64(q as u64, base)?;
                let product = multiply_recursive(&p, &q, config)?;
                Ok(i64::try_from(product.value()).expect("block products fit in i64"))
            })
            .collect()
    })?;
    trace.notes.push(format!(
        "split arity k = {}, block products computed recursively with threshold {}",
        config.k, config.threshold
    ));
    Ok(trace)
}

fn vertical_trace<F>(method: Method, ops: &BlockOperands, operands: [DigitSeq; 2], products: F) -> Result<Trace>
where
    F: Fn(&[i64], &[i64]) -> Result<Vec<i64>>,
{
    let n = ops.a.len();
    let mut steps = Vec::new();

    let mut choice = ops.a.clone();
    choice.extend_from_slice(&ops.b);
    steps.push(step(
        StepLabel::SegmentChoice,
        choice,
        format!("s={}", ops.segment),
        format!("{} × {}", block_tuple(&ops.a, ops), block_tuple(&ops.b, ops)),
    ));

    let pairs = difference_products(&ops.a, &ops.b);
    let names: Vec<String> = pairs
        .iter()
        .map(|&(i, j, k)| format!("{}={}", pair_name(i, j, n), k))
        .collect();
    let payload: Vec<i64> = pairs.iter().map(|p| p.2).collect();
    steps.push(step(
        StepLabel::DifferenceProducts,
        payload.clone(),
        tuple_string(&payload, ops.radix),
        if names.is_empty() { "none".into() } else { names.join(" ") },
    ));

    let a_seq = DigitSeq::from_digits(ops.radix, ops.a.clone())?;
    let b_seq = DigitSeq::from_digits(ops.radix, ops.b.clone())?;
    let tare_vec = tare(&a_seq, &b_seq)?;
    let tare_entries = tare_vec.entries().to_vec();
    steps.push(step(
        StepLabel::Tare,
        tare_entries.clone(),
        value_text(&tare_vec.to_digit_seq().value(), ops.base),
        positional_forms(&tare_entries[1..], ops.base, ops.segment),
    ));

    let c = products(&ops.a, &ops.b)?;
    steps.push(step(
        StepLabel::VerticalProducts,
        c.clone(),
        tuple_string(&c, ops.radix),
        positional_forms(&c, ops.base, ops.segment),
    ));

    let mut running = vec![0];
    running.extend(repunit_product(&c, n));
    steps.push(step(
        StepLabel::RunningSums,
        running.clone(),
        tuple_string(&running, ops.radix),
        positional_forms(&running, ops.base, ops.segment),
    ));

    finish_vertical(method, ops, operands, steps, &running, &tare_entries)
}

fn finish_vertical(
    method: Method,
    ops: &BlockOperands,
    operands: [DigitSeq; 2],
    mut steps: Vec<TraceStep>,
    running: &[i64],
    tare_entries: &[i64],
) -> Result<Trace> {
    let subtracted: Vec<i64> = running.iter().zip(tare_entries).map(|(x, k)| x - k).collect();
    steps.push(step(
        StepLabel::TareSubtraction,
        subtracted.clone(),
        tuple_string(&subtracted, ops.radix),
        positional_forms(&subtracted, ops.base, ops.segment),
    ));

    let carried = carry_columns(ops.radix as i64, &subtracted, &mut ())?;
    steps.push(step(
        StepLabel::Normalization,
        carried.clone(),
        block_tuple(&carried, ops),
        block_tuple(&carried, ops),
    ));
    let result = result_from_blocks(&carried, ops)?;
    Ok(Trace {
        method,
        radix: ops.base,
        segment: ops.segment,
        operands,
        steps,
        result,
        notes: Vec::new(),
    })
}

/// Radix-2 trace of `a * b = (C, -C)_n - K`.
pub fn trace_binary_identity(a: &DigitSeq, b: &DigitSeq) -> Result<Trace> {
    if a.radix() != 2 {
        return Err(Error::RadixNotBinary(a.radix()));
    }
    let ops = block_operands(a, b, TraceOptions::default())?;
    let n = ops.a.len();
    let mut steps = Vec::new();

    let pairs = difference_products(&ops.a, &ops.b);
    let payload: Vec<i64> = pairs.iter().map(|p| p.2).collect();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(i, j, k)| format!("{}={}", pair_name(i, j, n), k))
        .collect();
    steps.push(step(
        StepLabel::DifferenceProducts,
        payload.clone(),
        tuple_string(&payload, 2),
        if names.is_empty() { "none".into() } else { names.join(" ") },
    ));

    let a_seq = DigitSeq::from_digits(2, ops.a.clone())?;
    let b_seq = DigitSeq::from_digits(2, ops.b.clone())?;
    let tare_vec = tare(&a_seq, &b_seq)?;
    let tare_entries = tare_vec.entries().to_vec();
    let mut tare_step = step(
        StepLabel::Tare,
        tare_entries.clone(),
        value_text(&tare_vec.to_digit_seq().value(), 2),
        positional_forms(&tare_entries[1..], 2, 1),
    );
    tare_step.note = Some(
        "window c collects the pairs (j, c-j) with j < c-j; the loop range \
         j = 0..[i/2]+1 would count the pair (0,1) twice at i = 0"
            .into(),
    );
    steps.push(tare_step);

    let c = vertical_products(&a_seq, &b_seq)?.entries().to_vec();
    steps.push(step(
        StepLabel::VerticalProducts,
        c.clone(),
        tuple_string(&c, 2),
        positional_forms(&c, 2, 1),
    ));

    let shifted: Vec<i64> = c.iter().copied().chain(c.iter().map(|&x| -x)).collect();
    let mut shifted_step = step(
        StepLabel::RunningSums,
        shifted.clone(),
        tuple_string(&shifted, 2),
        positional_forms(&shifted, 2, 1),
    );
    shifted_step.note = Some(format!("(C, -C)_{n}: C * (1,...,1) = C * (2^{n} - 1)"));
    steps.push(shifted_step);

    finish_vertical(
        Method::BinaryIdentity,
        &ops,
        [a.clone(), b.clone()],
        steps,
        &shifted,
        &tare_entries,
    )
}

/// Plum-blossom trace: the uncarried plum columns, then carrying.
pub fn trace_plum(a: &DigitSeq, b: &DigitSeq) -> Result<Trace> {
    let raw = plum_columns(a, b)?;
    let carried = carry_columns(10, raw.digits(), &mut ())?;
    let steps = vec![
        step(
            StepLabel::PlumColumns,
            raw.digits().to_vec(),
            tuple_string(raw.digits(), 10),
            positional_forms(raw.digits(), 10, 1),
        ),
        step(
            StepLabel::Normalization,
            carried.clone(),
            tuple_string(&carried, 10),
            positional_forms(&carried, 10, 1),
        ),
    ];
    Ok(Trace {
        method: Method::Plum,
        radix: 10,
        segment: 1,
        operands: [a.clone(), b.clone()],
        steps,
        result: DigitSeq::from_digits(10, carried)?,
        notes: Vec::new(),
    })
}

/// Cross-product-sum trace, optionally on segmented operands.
pub fn trace_schoolbook(a: &DigitSeq, b: &DigitSeq, segment: usize) -> Result<Trace> {
    let ops = block_operands(a, b, TraceOptions::segment(segment))?;
    let mut choice = ops.a.clone();
    choice.extend_from_slice(&ops.b);
    let raw = raw_columns(
        &DigitSeq::from_digits(ops.radix, ops.a.clone())?,
        &DigitSeq::from_digits(ops.radix, ops.b.clone())?,
    )?;
    let carried = carry_columns(ops.radix as i64, raw.digits(), &mut ())?;
    let steps = vec![
        step(
            StepLabel::SegmentChoice,
            choice,
            format!("s={}", ops.segment),
            format!("{} × {}", block_tuple(&ops.a, &ops), block_tuple(&ops.b, &ops)),
        ),
        step(
            StepLabel::CrossSums,
            raw.digits().to_vec(),
            tuple_string(raw.digits(), ops.radix),
            positional_forms(raw.digits(), ops.base, ops.segment),
        ),
        step(
            StepLabel::Normalization,
            carried.clone(),
            block_tuple(&carried, &ops),
            block_tuple(&carried, &ops),
        ),
    ];
    Ok(Trace {
        method: Method::Schoolbook,
        radix: ops.base,
        segment: ops.segment,
        operands: [a.clone(), b.clone()],
        steps,
        result: result_from_blocks(&carried, &ops)?,
        notes: Vec::new(),
    })
}

impl Trace {
    pub fn step(&self, label: StepLabel) -> Option<&TraceStep> {
        self.steps.iter().find(|s| s.label == label)
    }

    pub fn result_text(&self) -> String {
        value_text(&self.result.value(), self.radix)
    }

    /// Recomputes every step from the payloads before it and checks the
    /// result against the exact product of the operands.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let exact = self.operands[0].value() * self.operands[1].value();
        if self.result.value() != exact {
            return Err(format!(
                "result {} differs from exact product {}",
                self.result.value(),
                exact
            ));
        }
        let payloads: BTreeMap<StepLabel, &[i64]> =
            self.steps.iter().map(|s| (s.label, s.payload.as_slice())).collect();
        let get = |label: StepLabel| {
            payloads
                .get(&label)
                .copied()
                .ok_or_else(|| format!("missing step {}", label.name()))
        };
        let check = |label: StepLabel, expected: &[i64]| -> std::result::Result<(), String> {
            let recorded = get(label)?;
            if recorded == expected {
                Ok(())
            } else {
                Err(format!(
                    "{}: recorded {:?}, recomputed {:?}",
                    label.name(),
                    recorded,
                    expected
                ))
            }
        };
        let radix = block_radix(self.radix, self.segment).map_err(|e| e.to_string())?;
        let carry = |cols: &[i64]| carry_columns(radix as i64, cols, &mut ()).map_err(|e| e.to_string());
        let final_value = |blocks: &[i64]| {
            DigitSeq::from_digits(radix, blocks.to_vec())
                .map(|d| d.value())
                .map_err(|e| e.to_string())
        };

        match self.method {
            Method::Plum => {
                let raw = plum_columns(&self.operands[0], &self.operands[1]).map_err(|e| e.to_string())?;
                check(StepLabel::PlumColumns, raw.digits())?;
                check(StepLabel::Normalization, &carry(get(StepLabel::PlumColumns)?)?)?;
                if final_value(get(StepLabel::Normalization)?)? != exact {
                    return Err("normalized columns do not carry to the result".into());
                }
            }
            Method::Schoolbook => {
                let choice = get(StepLabel::SegmentChoice)?;
                let (a, b) = choice.split_at(choice.len() / 2);
                let raw = raw_columns(
                    &DigitSeq::from_digits(radix, a.to_vec()).map_err(|e| e.to_string())?,
                    &DigitSeq::from_digits(radix, b.to_vec()).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                check(StepLabel::CrossSums, raw.digits())?;
                check(StepLabel::Normalization, &carry(get(StepLabel::CrossSums)?)?)?;
                if final_value(get(StepLabel::Normalization)?)? != exact {
                    return Err("normalized columns do not carry to the result".into());
                }
            }
            Method::Vertical | Method::Recursive | Method::BinaryIdentity => {
                let (a, b) = if self.method == Method::BinaryIdentity {
                    let n = self.operands[0].len().max(self.operands[1].len());
                    (
                        self.operands[0].padded(n).into_digits(),
                        self.operands[1].padded(n).into_digits(),
                    )
                } else {
                    let choice = get(StepLabel::SegmentChoice)?;
                    let (a, b) = choice.split_at(choice.len() / 2);
                    (a.to_vec(), b.to_vec())
                };
                let n = a.len();
                let pairs = difference_products(&a, &b);
                check(
                    StepLabel::DifferenceProducts,
                    &pairs.iter().map(|p| p.2).collect::<Vec<_>>(),
                )?;
                let recorded_pairs: Vec<(usize, usize, i64)> = pairs
                    .iter()
                    .zip(get(StepLabel::DifferenceProducts)?)
                    .map(|(&(i, j, _), &k)| (i, j, k))
                    .collect();
                check(StepLabel::Tare, &tare_from_pairs(n, &recorded_pairs))?;
                let c: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                check(StepLabel::VerticalProducts, &c)?;
                let c = get(StepLabel::VerticalProducts)?;
                let running: Vec<i64> = if self.method == Method::BinaryIdentity {
                    c.iter().copied().chain(c.iter().map(|&x| -x)).collect()
                } else {
                    std::iter::once(0).chain(repunit_product(c, n)).collect()
                };
                check(StepLabel::RunningSums, &running)?;
                let subtracted: Vec<i64> = get(StepLabel::RunningSums)?
                    .iter()
                    .zip(get(StepLabel::Tare)?)
                    .map(|(x, k)| x - k)
                    .collect();
                check(StepLabel::TareSubtraction, &subtracted)?;
                check(StepLabel::Normalization, &carry(get(StepLabel::TareSubtraction)?)?)?;
                if final_value(get(StepLabel::Normalization)?)? != exact {
                    return Err("normalized columns do not carry to the result".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Markdown,
    Json,
}

#[derive(Serialize)]
struct JsonStep<'a> {
    label: &'static str,
    payload: &'a [i64],
    balanced: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    method: &'static str,
    radix: u32,
    segment: usize,
    operands: [String; 2],
    steps: Vec<JsonStep<'a>>,
    result: String,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notes: &'a [String],
}

/// Deterministic rendering of a trace.
pub fn render_trace(t: &Trace, format: TraceFormat) -> String {
    let a = operand_text(&t.operands[0]);
    let b = operand_text(&t.operands[1]);
    match format {
        TraceFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "method: {}", t.method.name());
            let _ = writeln!(out, "operands: {a} × {b}");
            let _ = writeln!(out, "radix: {}", t.radix);
            let _ = writeln!(out, "segment: {}", t.segment);
            for note in &t.notes {
                let _ = writeln!(out, "note: {note}");
            }
            for s in &t.steps {
                let _ = writeln!(out, "{}: {}", s.label.name(), s.summary);
                if s.balanced != s.summary {
                    let _ = writeln!(out, "  {}", s.balanced);
                }
                if let Some(note) = &s.note {
                    let _ = writeln!(out, "  note: {note}");
                }
            }
            let _ = writeln!(out, "result: {}", t.result_text());
            out
        }
        TraceFormat::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "### {} × {} ({})", a, b, t.method.name());
            let _ = writeln!(out);
            let _ = writeln!(out, "radix {}, segment {}", t.radix, t.segment);
            let _ = writeln!(out);
            for note in &t.notes {
                let _ = writeln!(out, "> {note}");
                let _ = writeln!(out);
            }
            let _ = writeln!(out, "| step | value | forms |");
            let _ = writeln!(out, "|---|---|---|");
            for s in &t.steps {
                let mut forms = s.balanced.replace('|', "\\|");
                if let Some(note) = &s.note {
                    let _ = write!(forms, " *(note: {note})*");
                }
                let _ = writeln!(out, "| {} | {} | {} |", s.label.name(), s.summary, forms);
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "**result:** {}", t.result_text());
            out
        }
        TraceFormat::Json => {
            let json = JsonTrace {
                method: t.method.name(),
                radix: t.radix,
                segment: t.segment,
                operands: [a, b],
                steps: t
                    .steps
                    .iter()
                    .map(|s| JsonStep {
                        label: s.label.name(),
                        payload: &s.payload,
                        balanced: &s.balanced,
                        note: s.note.as_deref(),
                    })
                    .collect(),
                result: t.result_text(),
                notes: &t.notes,
            };
            let mut text = serde_json::to_string_pretty(&json).expect("trace serializes");
            text.push('\n');
            text
        }
    }
}

/// A worked example with its stated product.
#[derive(Debug, Clone)]
pub struct GoldenExample {
    /// File stem of the checked-in golden rendering.
    pub name: &'static str,
    pub trace: Trace,
    pub expected: &'static str,
}

fn decimal(text: &str) -> DigitSeq {
    crate::digits::parse_number(text, 10).expect("literal").1
}

fn binary(text: &str) -> DigitSeq {
    crate::digits::parse_number(text, 2).expect("literal").1
}

/// The twelve worked examples, with the binary one traced by all three
/// methods: the `(C, -C)_n` identity and the vertical formula on 2- and
/// 3-bit segments.
pub fn golden_corpus() -> Result<Vec<GoldenExample>> {
    let mut out = vec![
        GoldenExample {
            name: "schoolbook_123x456",
            trace: trace_schoolbook(&decimal("123"), &decimal("456"), 1)?,
            expected: "56088",
        },
        GoldenExample {
            name: "schoolbook_2976x2924_s2",
            trace: trace_schoolbook(&decimal("2976"), &decimal("2924"), 2)?,
            expected: "8701824",
        },
        GoldenExample {
            name: "plum_386x47",
            trace: trace_plum(&decimal("386"), &decimal("47"))?,
            expected: "18142",
        },
        GoldenExample {
            name: "plum_456x789",
            trace: trace_plum(&decimal("456"), &decimal("789"))?,
            expected: "359784",
        },
        GoldenExample {
            name: "vertical_67x89",
            trace: trace_vertical(&decimal("67"), &decimal("89"), TraceOptions::default())?,
            expected: "5963",
        },
        GoldenExample {
            name: "vertical_677x338",
            trace: trace_vertical(&decimal("677"), &decimal("338"), TraceOptions::default())?,
            expected: "228826",
        },
        GoldenExample {
            name: "vertical_6789x6789",
            trace: trace_vertical(&decimal("6789"), &decimal("6789"), TraceOptions::default())?,
            expected: "46090521",
        },
    ];

    let mut t = trace_vertical(&decimal("4657"), &decimal("86"), TraceOptions::default())?;
    if let Some(s) = t.steps.iter_mut().find(|s| s.label == StepLabel::Tare) {
        s.note = Some(
            "the worked solution labels its subtraction with (0,0,1,5,0,4,1,0), the tare of \
             6789 × 6789, but subtracts (1,1\u{305},1,5\u{305},6,0) = 90560, which equals the tare derived here"
                .into(),
        );
    }
    out.push(GoldenExample {
        name: "vertical_4657x86",
        trace: t,
        expected: "400502",
    });

    let regrouped = DigitSeq::from_digits(10, vec![24, 28])?;
    out.push(GoldenExample {
        name: "vertical_268x47_regrouped",
        trace: trace_vertical(&regrouped, &decimal("47"), TraceOptions::default())?,
        expected: "12596",
    });
    out.push(GoldenExample {
        name: "vertical_29x86_balanced",
        trace: trace_vertical(
            &decimal("29"),
            &decimal("86"),
            TraceOptions {
                segment: 1,
                balanced_multiplicand: true,
            },
        )?,
        expected: "2494",
    });
    out.push(GoldenExample {
        name: "vertical_6162x8384_s2",
        trace: trace_vertical(&decimal("6162"), &decimal("8384"), TraceOptions::segment(2))?,
        expected: "51662208",
    });

    let (a, b) = (binary("111101"), binary("101011"));
    out.push(GoldenExample {
        name: "binary_111101x101011_identity",
        trace: trace_binary_identity(&a, &b)?,
        expected: "101000111111",
    });
    out.push(GoldenExample {
        name: "binary_111101x101011_s2",
        trace: trace_vertical(&a, &b, TraceOptions::segment(2))?,
        expected: "101000111111",
    });
    out.push(GoldenExample {
        name: "binary_111101x101011_s3",
        trace: trace_vertical(&a, &b, TraceOptions::segment(3))?,
        expected: "101000111111",
    });
    Ok(out)
}
