//! Analog frame to SDR encoding: strided resize, max-abs normalization,
//! first/last or frequent-value thresholding, top-k sparsity enforcement and
//! flattening.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{ceil_count, Scalar};
use crate::sdr::Sdr;

/// A `rows x cols` matrix of sensor readings, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalogFrame<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
}

impl<T: Scalar> AnalogFrame<T> {
    pub fn new(rows: usize, cols: usize, values: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidFrame(format!("dimensions {rows}x{cols}")));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidFrame(format!("{} values for a {rows}x{cols} frame", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFrame(format!("non-finite value at index {i}")));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidFrame("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.cols + col]
    }

    /// Every value multiplied by `alpha`.
    pub fn scaled(&self, alpha: T) -> Self {
        Self { rows: self.rows, cols: self.cols, values: self.values.iter().map(|&v| v * alpha).collect() }
    }
}

/// Values folded to `|v| / max|v|`, so every entry lies in `[0, 1]` and the
/// maximizer maps to exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedFrame<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    max_abs: T,
}

impl<T: Scalar> NormalizedFrame<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major values.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn max_abs(&self) -> T {
        self.max_abs
    }

    pub fn flatten(&self, order: FlattenOrder) -> Vec<T> {
        match order {
            FlattenOrder::RowMajor => self.values.clone(),
            FlattenOrder::ColumnMajor => (0..self.cols)
                .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
                .map(|(r, c)| self.values[r * self.cols + c])
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Threshold at the first and last flattened values; potentials from the
    /// first and last segments.
    FirstLast,
    /// Threshold at the modal quantized value; potentials from the modal segment.
    FrequentOccurring,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::FirstLast => "fl",
            Rule::FrequentOccurring => "fos",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fl" => Ok(Rule::FirstLast),
            "fos" | "for" => Ok(Rule::FrequentOccurring),
            _ => Err(Error::InvalidConfig(format!("unknown rule {s:?} (expected fl or fos)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FlattenOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

impl FlattenOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            FlattenOrder::RowMajor => "row",
            FlattenOrder::ColumnMajor => "column",
        }
    }
}

impl std::str::FromStr for FlattenOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" => Ok(FlattenOrder::RowMajor),
            "column" => Ok(FlattenOrder::ColumnMajor),
            _ => Err(Error::InvalidConfig(format!("unknown flatten order {s:?} (expected row or column)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncoderConfig<T> {
    /// Resize divisor; 1 keeps the frame as is.
    pub resize: usize,
    pub rule: Rule,
    /// Multiplicative scale applied to every threshold.
    pub k1: T,
    /// Lower edge of the target density band. Only reported, never corrected.
    pub k2_low: T,
    /// Upper edge of the target density band; denser encodings are trimmed.
    pub k2_high: T,
    /// Bin width used to find the modal value.
    pub quantization_step: T,
    pub flatten_order: FlattenOrder,
}

impl<T: Scalar> Default for EncoderConfig<T> {
    fn default() -> Self {
        Self {
            resize: 1,
            rule: Rule::FirstLast,
            k1: T::one(),
            k2_low: T::of(0.1),
            k2_high: T::of(0.2),
            quantization_step: T::of(0.05),
            flatten_order: FlattenOrder::RowMajor,
        }
    }
}

impl<T: Scalar> EncoderConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.resize == 0 {
            return Err(Error::InvalidConfig("k_o must be at least 1".into()));
        }
        let (lo, hi) = (self.k2_low, self.k2_high);
        if !(lo > T::zero() && lo <= hi && hi < T::one()) {
            return Err(Error::InvalidConfig(format!(
                "k2 range must satisfy 0 < k2_low <= k2_high < 1, got [{lo}, {hi}]"
            )));
        }
        if self.quantization_step.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater)
            || !self.quantization_step.is_finite()
        {
            return Err(Error::InvalidConfig("quantization_step must be positive".into()));
        }
        if !self.k1.is_finite() {
            return Err(Error::InvalidConfig("k1 must be finite".into()));
        }
        Ok(())
    }

    /// Length of the SDR produced for a `rows x cols` input.
    pub fn output_len(&self, rows: usize, cols: usize) -> usize {
        (rows / self.resize.max(1)) * (cols / self.resize.max(1))
    }

    pub fn encode(&self, frame: &AnalogFrame<T>) -> Result<Sdr> {
        encode(frame, self)
    }
}

/// Threshold candidates drawn from one normalized frame. All three are kept
/// regardless of which rule consumes them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuleThreshold<T> {
    pub rule: Rule,
    pub x_first: T,
    pub x_last: T,
    pub x_f: T,
    pub k1: T,
}

/// Strided subsampling: keeps every `divisor`-th row and column starting at 0.
pub fn resize<T: Scalar>(frame: &AnalogFrame<T>, divisor: usize) -> Result<AnalogFrame<T>> {
    if divisor == 0 {
        return Err(Error::InvalidConfig("resize divisor must be at least 1".into()));
    }
    if divisor == 1 {
        return Ok(frame.clone());
    }
    let rows = frame.rows / divisor;
    let cols = frame.cols / divisor;
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyResult { rows, cols, divisor });
    }
    let values = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r * divisor, c * divisor)))
        .map(|(r, c)| frame.get(r, c))
        .collect();
    Ok(AnalogFrame { rows, cols, values })
}

pub fn normalize<T: Scalar>(frame: &AnalogFrame<T>) -> Result<NormalizedFrame<T>> {
    let max_abs = frame.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if max_abs == T::zero() {
        return Err(Error::ZeroFrame);
    }
    Ok(NormalizedFrame {
        rows: frame.rows,
        cols: frame.cols,
        values: frame.values.iter().map(|v| v.abs() / max_abs).collect(),
        max_abs,
    })
}

/// Index of the nearest multiple of `step`, with exact halves going down.
fn quantize_index<T: Scalar>(value: T, step: T) -> i64 {
    let half = T::of(0.5);
    (value / step - half).ceil().to_i64().unwrap_or(0)
}

/// Most frequent quantized value; ties resolve to the smaller bin.
pub fn modal_value<T: Scalar>(values: &[T], step: T) -> T {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &v in values {
        *counts.entry(quantize_index(v, step)).or_default() += 1;
    }
    let (bin, _) = counts.into_iter().max_by(|(ba, ca), (bb, cb)| ca.cmp(cb).then(bb.cmp(ba))).unwrap_or((0, 0));
    T::from_i64(bin).unwrap_or_else(T::zero) * step
}

pub fn select_threshold<T: Scalar>(norm: &NormalizedFrame<T>, cfg: &EncoderConfig<T>) -> RuleThreshold<T> {
    let flat = norm.flatten(cfg.flatten_order);
    RuleThreshold {
        rule: cfg.rule,
        x_first: flat[0],
        x_last: flat[flat.len() - 1],
        x_f: modal_value(&flat, cfg.quantization_step),
        k1: cfg.k1,
    }
}

pub fn binarize<T: Scalar>(norm: &NormalizedFrame<T>, thr: &RuleThreshold<T>, cfg: &EncoderConfig<T>) -> Sdr {
    let flat = norm.flatten(cfg.flatten_order);
    let first = thr.k1 * thr.x_first;
    let last = thr.k1 * thr.x_last;
    let frequent = thr.k1 * thr.x_f;
    let mut active: Vec<usize> = flat
        .iter()
        .enumerate()
        .filter(|(_, &v)| match thr.rule {
            Rule::FirstLast => v > first || v > last,
            Rule::FrequentOccurring => v > frequent,
        })
        .map(|(i, _)| i)
        .collect();

    let len = flat.len();
    let density = T::of_usize(active.len()) / T::of_usize(len);
    if density > cfg.k2_high {
        let keep = ceil_count(cfg.k2_high, len);
        // Values are finite, so partial_cmp never fails.
        active.sort_by(|&a, &b| flat[b].partial_cmp(&flat[a]).unwrap().then(a.cmp(&b)));
        active.truncate(keep);
    } else if density < cfg.k2_low {
        log::debug!("sdr density {density} below k2_low {}", cfg.k2_low);
    }
    Sdr::from_indices(len, &active)
}

pub fn encode<T: Scalar>(frame: &AnalogFrame<T>, cfg: &EncoderConfig<T>) -> Result<Sdr> {
    let resized = resize(frame, cfg.resize)?;
    let norm = normalize(&resized)?;
    let thr = select_threshold(&norm, cfg);
    Ok(binarize(&norm, &thr, cfg))
}
