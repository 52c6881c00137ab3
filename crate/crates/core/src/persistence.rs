//! Text formats: the `RCLT1` state archive, plain PBM bitmaps of SDRs and
//! the per-step accuracy CSV.
//!
//! Archive layout, one record per line:
//!
//! ```text
//! RCLT1
//! config <key> <value>        one line per CircuitConfig key, fixed order
//! last_t <t>|none
//! bank <columns> <length>
//! column <j> <p0> <p1> ...    permanences with 6 fractional digits
//! segments <j> <count>        then <count> lines: segment <t> <bits>
//! memory <count>              then <count> lines: entry <t> <score> <bits>
//! end
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::circuit::{Circuit, CircuitConfig};
use crate::error::{Error, Result};
use crate::metrics::AccuracyRecord;
use crate::scalar::Scalar;
use crate::sdr::Sdr;
use crate::spatial_pooler::ColumnBank;
use crate::temporal_pooler::{insert_segment, store_match, ColumnSegments, MemoryStore};

pub const MAGIC: &str = "RCLT1";

pub fn archive_to_string<T: Scalar>(circuit: &Circuit<T>) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    for (key, value) in circuit.config().entries() {
        let _ = writeln!(out, "config {key} {value}");
    }
    match circuit.last_t() {
        Some(t) => {
            let _ = writeln!(out, "last_t {t}");
        }
        None => out.push_str("last_t none\n"),
    }
    let bank = circuit.bank();
    let _ = writeln!(out, "bank {} {}", bank.column_count(), bank.input_len());
    for (j, col) in bank.columns().iter().enumerate() {
        let _ = write!(out, "column {j}");
        for p in col.permanences() {
            let _ = write!(out, " {p:.6}");
        }
        out.push('\n');
    }
    for seg in circuit.segments() {
        let _ = writeln!(out, "segments {} {}", seg.column_index(), seg.len());
        for s in seg.segments() {
            let _ = writeln!(out, "segment {} {}", s.created_at, s.pattern);
        }
    }
    let _ = writeln!(out, "memory {}", circuit.memory().len());
    for e in circuit.memory().entries() {
        let _ = writeln!(out, "entry {} {} {}", e.stored_at, e.score, e.pattern);
    }
    out.push_str("end\n");
    out
}

pub fn save_state<T: Scalar>(circuit: &Circuit<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, archive_to_string(circuit)).map_err(|e| Error::io(path, e))
}

pub fn load_state<T: Scalar>(path: impl AsRef<Path>) -> Result<Circuit<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    archive_from_str(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    /// Next record split into its tag and fields.
    fn record(&mut self, tag: &str) -> Result<Vec<&'a str>> {
        let (i, text) = self
            .inner
            .next()
            .ok_or_else(|| Error::parse(self.line + 1, format!("unexpected end of archive, expected {tag:?}")))?;
        self.line = i + 1;
        let mut fields = text.split(' ');
        match fields.next() {
            Some(t) if t == tag => Ok(fields.collect()),
            _ => Err(Error::parse(self.line, format!("expected {tag:?} record"))),
        }
    }

    fn fields<const N: usize>(&mut self, tag: &str) -> Result<[&'a str; N]> {
        let f = self.record(tag)?;
        f.try_into()
            .map_err(|f: Vec<&str>| Error::parse(self.line, format!("{tag}: expected {N} fields, found {}", f.len())))
    }

    fn num<N: std::str::FromStr>(&self, text: &str) -> Result<N> {
        text.parse().map_err(|_| Error::parse(self.line, format!("cannot parse number {text:?}")))
    }

    fn bits(&self, text: &str) -> Result<Sdr> {
        Sdr::from_bit_str(text).ok_or_else(|| Error::parse(self.line, "bit pattern must contain only 0 and 1"))
    }
}

pub fn archive_from_str<T: Scalar>(text: &str) -> Result<Circuit<T>> {
    let mut lines = Lines { inner: text.lines().enumerate(), line: 0 };
    match lines.inner.next() {
        Some((_, MAGIC)) => lines.line = 1,
        _ => return Err(Error::BadMagic),
    }

    let mut config = CircuitConfig::<T>::default();
    for key in CircuitConfig::<T>::KEYS {
        let [k, v] = lines.fields::<2>("config")?;
        if k != key {
            return Err(Error::parse(lines.line, format!("expected config key {key:?}, found {k:?}")));
        }
        config.set(k, v).map_err(|e| Error::parse(lines.line, e.to_string()))?;
    }

    let [t] = lines.fields::<1>("last_t")?;
    let last_t = if t == "none" { None } else { Some(lines.num::<u64>(t)?) };

    let [count, len] = lines.fields::<2>("bank")?;
    let (count, len): (usize, usize) = (lines.num(count)?, lines.num(len)?);
    let mut permanences = Vec::with_capacity(count);
    for j in 0..count {
        let fields = lines.record("column")?;
        if fields.len() != len + 1 || lines.num::<usize>(fields[0])? != j {
            return Err(Error::parse(lines.line, format!("column {j}: expected index and {len} permanences")));
        }
        let perms = fields[1..].iter().map(|p| lines.num::<T>(p)).collect::<Result<Vec<T>>>()?;
        permanences.push(perms);
    }
    let bank = ColumnBank::from_parts(permanences, config.k_p, config.p_inc, config.p_dec, config.seed)
        .map_err(|e| Error::parse(lines.line, e.to_string()))?;

    let mut segments = Vec::with_capacity(count);
    for j in 0..count {
        let [idx, n] = lines.fields::<2>("segments")?;
        if lines.num::<usize>(idx)? != j {
            return Err(Error::parse(lines.line, format!("expected segments of column {j}")));
        }
        let mut state = ColumnSegments::new(j);
        for _ in 0..lines.num::<usize>(n)? {
            let [t, bits] = lines.fields::<2>("segment")?;
            let (t, bits) = (lines.num(t)?, lines.bits(bits)?);
            insert_segment(&mut state, bits, t).map_err(|e| Error::parse(lines.line, e.to_string()))?;
        }
        segments.push(state);
    }

    let [n] = lines.fields::<1>("memory")?;
    let mut memory = MemoryStore::new();
    for _ in 0..lines.num::<usize>(n)? {
        let [t, score, bits] = lines.fields::<3>("entry")?;
        let (t, score, bits) = (lines.num(t)?, lines.num::<T>(score)?, lines.bits(bits)?);
        store_match(&mut memory, bits, score, t).map_err(|e| Error::parse(lines.line, e.to_string()))?;
    }
    lines.record("end")?;
    if let Some((i, _)) = lines.inner.find(|(_, l)| !l.is_empty()) {
        return Err(Error::parse(i + 1, "trailing data after end"));
    }

    Circuit::from_parts(config, bank, segments, memory, last_t).map_err(|e| Error::parse(lines.line, e.to_string()))
}

/// Plain PBM (`P1`) text: header `P1`, then `cols rows`, then one line per
/// row with space-separated bits, 1 = black.
pub fn sdr_bitmap_string(sdr: &Sdr, rows: usize, cols: usize) -> Result<String> {
    if rows * cols != sdr.len() {
        return Err(Error::DimensionMismatch { len: sdr.len(), rows, cols });
    }
    let mut out = format!("P1\n{cols} {rows}\n");
    for r in 0..rows {
        let row: Vec<&str> = (0..cols).map(|c| if sdr.get(r * cols + c) { "1" } else { "0" }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_sdr_bitmap(sdr: &Sdr, rows: usize, cols: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = sdr_bitmap_string(sdr, rows, cols)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Parses plain PBM text into `(rows, cols, bits)`. Comments and free
/// whitespace are accepted as the format allows.
pub fn parse_sdr_bitmap(text: &str) -> Result<(usize, usize, Sdr)> {
    let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
    if tokens.next() != Some("P1") {
        return Err(Error::BadMagic);
    }
    let mut dim = |what: &str| -> Result<usize> {
        tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(2, format!("missing {what}")))
    };
    let cols = dim("width")?;
    let rows = dim("height")?;
    // plain PBM allows pixels without separators
    let bits: Vec<bool> = tokens
        .flat_map(str::chars)
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::parse(0, format!("bad pixel {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != rows * cols {
        return Err(Error::DimensionMismatch { len: bits.len(), rows, cols });
    }
    Ok((rows, cols, Sdr::from_bools(bits)))
}

pub fn read_sdr_bitmap(path: impl AsRef<Path>) -> Result<(usize, usize, Sdr)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sdr_bitmap(&text)
}

pub fn accuracy_csv_string<T: Scalar>(records: &[AccuracyRecord<T>]) -> String {
    let mut out = String::from("t,accuracy_percent\n");
    for r in records {
        let _ = writeln!(out, "{},{:.1}", r.t, r.accuracy_percent);
    }
    out
}

pub fn write_accuracy_csv<T: Scalar>(records: &[AccuracyRecord<T>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, accuracy_csv_string(records)).map_err(|e| Error::io(path, e))
}
