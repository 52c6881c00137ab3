//! Per-column segment memory, first-last and frequent-segment synaptic
//! potentials, input matching and the memory-store used for prediction.

use std::collections::HashMap;

use crate::encoder::Rule;
use crate::error::{Error, Result};
use crate::scalar::{percent, Scalar};
use crate::sdr::Sdr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub pattern: Sdr,
    pub created_at: u64,
}

/// Segments recorded by one column, oldest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSegments {
    column_index: usize,
    segments: Vec<Segment>,
}

impl ColumnSegments {
    pub fn new(column_index: usize) -> Self {
        Self { column_index, segments: Vec::new() }
    }

    pub fn column_index(&self) -> usize {
        self.column_index
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn first(&self) -> Option<&Segment> {
        self.segments.first()
    }

    pub fn last(&self) -> Option<&Segment> {
        self.segments.last()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynapticPotential {
    pub pattern: Sdr,
    pub rule: Rule,
    pub source_column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemoryEntry<T> {
    pub pattern: Sdr,
    pub score: T,
    pub stored_at: u64,
}

/// Append-only log of matched potentials.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryStore<T> {
    entries: Vec<MemoryEntry<T>>,
}

impl<T> Default for MemoryStore<T> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<T: Scalar> MemoryStore<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[MemoryEntry<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Appends `pattern` as the segment created at step `t`.
pub fn insert_segment(state: &mut ColumnSegments, pattern: Sdr, t: u64) -> Result<()> {
    if let Some(last) = state.segments.last() {
        if t <= last.created_at {
            return Err(Error::NonMonotonicTime { t, previous: last.created_at });
        }
    }
    state.segments.push(Segment { pattern, created_at: t });
    Ok(())
}

/// OR of the first and last segment patterns.
pub fn fl_potential(state: &ColumnSegments) -> Result<SynapticPotential> {
    let (first, last) = match (state.first(), state.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptySegments),
    };
    Ok(SynapticPotential {
        pattern: first.pattern.or(&last.pattern)?,
        rule: Rule::FirstLast,
        source_column: state.column_index,
    })
}

/// Modal pattern of one column with its multiplicity. Among equally frequent
/// patterns the one that appeared first wins.
fn column_mode(state: &ColumnSegments) -> Option<(&Sdr, usize)> {
    let mut seen: HashMap<&Sdr, (usize, usize)> = HashMap::new();
    for (pos, seg) in state.segments.iter().enumerate() {
        seen.entry(&seg.pattern).or_insert((0, pos)).0 += 1;
    }
    seen.into_iter()
        .max_by(|(_, (ca, pa)), (_, (cb, pb))| ca.cmp(cb).then(pb.cmp(pa)))
        .map(|(pattern, (count, _))| (pattern, count))
}

/// The modal segment of whichever column repeats its mode most often; ties go
/// to the lower column index.
pub fn fos_potential(all_columns: &[ColumnSegments]) -> Result<SynapticPotential> {
    let mut best: Option<(&ColumnSegments, &Sdr, usize)> = None;
    for state in all_columns {
        if let Some((pattern, count)) = column_mode(state) {
            let better = match best {
                None => true,
                Some((b, _, bc)) => count > bc || (count == bc && state.column_index < b.column_index),
            };
            if better {
                best = Some((state, pattern, count));
            }
        }
    }
    let (state, pattern, _) = best.ok_or(Error::EmptySegments)?;
    Ok(SynapticPotential { pattern: pattern.clone(), rule: Rule::FrequentOccurring, source_column: state.column_index })
}

/// Positional agreement between potential and input as a percentage, and
/// whether it reaches `k_s`.
pub fn match_input<T: Scalar>(potential: &SynapticPotential, input: &Sdr, k_s: T) -> Result<(bool, T)> {
    let agree = potential.pattern.agreement(input)?;
    let accuracy: T = percent(agree, input.len());
    Ok((accuracy >= k_s, accuracy))
}

pub fn store_match<T: Scalar>(store: &mut MemoryStore<T>, pattern: Sdr, score: T, t: u64) -> Result<()> {
    if !(score >= T::zero() && score <= T::hundred()) {
        return Err(Error::InvalidScore(score.to_f64().unwrap_or(f64::NAN)));
    }
    if let Some(last) = store.entries.last() {
        if t < last.stored_at {
            return Err(Error::NonMonotonicTime { t, previous: last.stored_at });
        }
    }
    store.entries.push(MemoryEntry { pattern, score, stored_at: t });
    Ok(())
}

/// The stored pattern agreeing with `new_input` at the most positions; the
/// most recent entry wins ties.
pub fn predict<T: Scalar>(store: &MemoryStore<T>, new_input: &Sdr) -> Result<(Sdr, T)> {
    let mut best: Option<(&MemoryEntry<T>, usize)> = None;
    for entry in &store.entries {
        let agree = entry.pattern.agreement(new_input)?;
        if best.is_none_or(|(_, b)| agree >= b) {
            best = Some((entry, agree));
        }
    }
    let (entry, agree) = best.ok_or(Error::EmptyStore)?;
    Ok((entry.pattern.clone(), percent(agree, new_input.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Sdr {
        Sdr::from_bit_str(s).unwrap()
    }

    fn column(index: usize, patterns: &[&str]) -> ColumnSegments {
        let mut c = ColumnSegments::new(index);
        for (t, p) in patterns.iter().enumerate() {
            insert_segment(&mut c, bits(p), t as u64 + 1).unwrap();
        }
        c
    }

    #[test]
    fn insert_appends_in_time_order() {
        let mut c = ColumnSegments::new(0);
        insert_segment(&mut c, bits("10"), 1).unwrap();
        insert_segment(&mut c, bits("01"), 2).unwrap();
        assert_eq!(c.segments().iter().map(|s| s.created_at).collect::<Vec<_>>(), vec![1, 2]);

        let mut c = ColumnSegments::new(0);
        insert_segment(&mut c, bits("10"), 2).unwrap();
        assert!(matches!(insert_segment(&mut c, bits("01"), 1), Err(Error::NonMonotonicTime { t: 1, previous: 2 })));
        assert!(insert_segment(&mut c, bits("01"), 2).is_err());
    }

    #[test]
    fn fl_examples() {
        let p = fl_potential(&column(3, &["1100", "0110", "0011"])).unwrap();
        assert_eq!(p.pattern.to_bit_string(), "1111");
        assert_eq!((p.rule, p.source_column), (Rule::FirstLast, 3));
        assert_eq!(fl_potential(&column(0, &["1010"])).unwrap().pattern.to_bit_string(), "1010");
        assert!(matches!(fl_potential(&ColumnSegments::new(0)), Err(Error::EmptySegments)));
    }

    #[test]
    fn fos_examples() {
        let (a, b, c, d) = ("1100", "0011", "1010", "0101");
        let p = fos_potential(&[column(0, &[a, a, b]), column(1, &[c, d])]).unwrap();
        assert_eq!((p.pattern.to_bit_string().as_str(), p.source_column), (a, 0));

        let p = fos_potential(&[column(0, &["0110"])]).unwrap();
        assert_eq!(p.pattern.to_bit_string(), "0110");

        let p = fos_potential(&[column(0, &[a, b]), column(1, &[c, c])]).unwrap();
        assert_eq!((p.pattern.to_bit_string().as_str(), p.source_column), (c, 1));
        assert_eq!(p.rule, Rule::FrequentOccurring);
    }

    #[test]
    fn fos_tie_breaks() {
        let (a, b) = ("1100", "0011");
        // within a column: earliest first occurrence
        let p = fos_potential(&[column(0, &[b, a, a, b])]).unwrap();
        assert_eq!(p.pattern.to_bit_string(), b);
        // across columns: lowest index
        let p = fos_potential(&[ColumnSegments::new(0), column(1, &[a]), column(2, &[b])]).unwrap();
        assert_eq!(p.source_column, 1);
        assert!(matches!(fos_potential(&[ColumnSegments::new(0)]), Err(Error::EmptySegments)));
        assert!(fos_potential(&[]).is_err());
    }

    fn potential(s: &str) -> SynapticPotential {
        SynapticPotential { pattern: bits(s), rule: Rule::FirstLast, source_column: 0 }
    }

    #[test]
    fn match_examples() {
        assert_eq!(match_input(&potential("1100"), &bits("1100"), 100.0f64).unwrap(), (true, 100.0));
        assert_eq!(match_input(&potential("1100"), &bits("1000"), 50.0f64).unwrap(), (true, 75.0));
        assert_eq!(match_input(&potential("1100"), &bits("1000"), 80.0f64).unwrap(), (false, 75.0));
        assert_eq!(match_input(&potential("1111"), &bits("0000"), 50.0f64).unwrap(), (false, 0.0));
        assert!(match_input(&potential("111"), &bits("0000"), 50.0f64).is_err());
    }

    #[test]
    fn store_examples() {
        let mut store = MemoryStore::<f64>::new();
        store_match(&mut store, bits("10"), 100.0, 1).unwrap();
        assert_eq!(store.len(), 1);
        store_match(&mut store, bits("10"), 98.0, 2).unwrap();
        assert_eq!(store.entries()[1].score, 98.0);
        assert!(matches!(store_match(&mut store, bits("10"), 101.0, 3), Err(Error::InvalidScore(_))));
        assert!(store_match(&mut store, bits("10"), -1.0, 3).is_err());
        assert!(store_match(&mut store, bits("10"), 50.0, 1).is_err());
        assert_eq!(store.len(), 2);
    }

    #[test]
    fn predict_examples() {
        let mut store = MemoryStore::<f64>::new();
        store_match(&mut store, bits("1100"), 100.0, 1).unwrap();
        store_match(&mut store, bits("0011"), 100.0, 2).unwrap();
        assert_eq!(predict(&store, &bits("1101")).unwrap(), (bits("1100"), 75.0));

        let mut single = MemoryStore::<f64>::new();
        store_match(&mut single, bits("1010"), 90.0, 1).unwrap();
        assert_eq!(predict(&single, &bits("1010")).unwrap(), (bits("1010"), 100.0));

        assert!(matches!(predict(&MemoryStore::<f64>::new(), &bits("1")), Err(Error::EmptyStore)));
    }

    #[test]
    fn predict_prefers_recent_on_tie() {
        let mut store = MemoryStore::<f64>::new();
        store_match(&mut store, bits("1000"), 100.0, 1).unwrap();
        store_match(&mut store, bits("0100"), 100.0, 2).unwrap();
        assert_eq!(predict(&store, &bits("0000")).unwrap().0, bits("0100"));
    }
}
