//! Column bank with per-column permanence vectors, overlap scoring,
//! global top-c inhibition and Hebbian permanence learning.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use crate::sdr::Sdr;

/// One pooler column. `connected[i]` is always `permanences[i] > k_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Column<T> {
    permanences: Vec<T>,
    connected: Sdr,
}

impl<T: Scalar> Column<T> {
    pub fn from_permanences(permanences: Vec<T>, k_p: T) -> Self {
        let connected = threshold(&permanences, k_p);
        Self { permanences, connected }
    }

    pub fn permanences(&self) -> &[T] {
        &self.permanences
    }

    pub fn connected(&self) -> &Sdr {
        &self.connected
    }

    pub fn len(&self) -> usize {
        self.permanences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permanences.is_empty()
    }
}

fn threshold<T: Scalar>(permanences: &[T], k_p: T) -> Sdr {
    Sdr::from_bools(permanences.iter().map(|&p| p > k_p))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnBank<T> {
    columns: Vec<Column<T>>,
    k_p: T,
    p_inc: T,
    p_dec: T,
    seed: u64,
}

/// Probability that an inactive union bit is switched on. Zero disables noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseConfig<T> {
    pub p_noise: T,
}

impl<T: Scalar> Default for NoiseConfig<T> {
    fn default() -> Self {
        Self { p_noise: T::zero() }
    }
}

impl<T: Scalar> NoiseConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_noise >= T::zero() && self.p_noise <= T::one()) {
            return Err(Error::InvalidConfig(format!("p_noise {} outside [0, 1]", self.p_noise)));
        }
        Ok(())
    }
}

/// Winning columns, best first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WinnerSet {
    pub indices: Vec<usize>,
    pub overlaps: Vec<usize>,
    pub c: usize,
    pub k_score: usize,
}

impl WinnerSet {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, column: usize) -> bool {
        self.indices.contains(&column)
    }
}

/// Builds `sparse_cols` columns of length `input_len`. Column `j` draws its
/// permanences uniformly from `[0, 1)` using `SplitMix64::stream(seed, j)`.
pub fn init_columns<T: Scalar>(input_len: usize, sparse_cols: usize, k_p: T, seed: u64) -> Result<ColumnBank<T>> {
    if input_len == 0 || sparse_cols == 0 {
        return Err(Error::InvalidConfig(format!(
            "column bank needs positive sizes, got {sparse_cols} columns of length {input_len}"
        )));
    }
    if !(k_p >= T::zero() && k_p <= T::one()) {
        return Err(Error::InvalidConfig(format!("k_p {k_p} outside [0, 1]")));
    }
    let columns = (0..sparse_cols)
        .map(|j| {
            let mut rng = SplitMix64::stream(seed, j as u64);
            let perms = (0..input_len).map(|_| T::of(rng.next_unit())).collect();
            Column::from_permanences(perms, k_p)
        })
        .collect();
    Ok(ColumnBank { columns, k_p, p_inc: T::of(0.05), p_dec: T::of(0.01), seed })
}

impl<T: Scalar> ColumnBank<T> {
    /// Reassembles a bank from stored permanences. Connected vectors are
    /// recomputed from `k_p`.
    pub fn from_parts(permanences: Vec<Vec<T>>, k_p: T, p_inc: T, p_dec: T, seed: u64) -> Result<Self> {
        let len = permanences.first().map(Vec::len).unwrap_or(0);
        if permanences.is_empty() || len == 0 {
            return Err(Error::InvalidConfig("column bank needs at least one non-empty column".into()));
        }
        if let Some(bad) = permanences.iter().find(|p| p.len() != len) {
            return Err(Error::LengthMismatch { left: len, right: bad.len() });
        }
        if permanences.iter().flatten().any(|&p| !(p >= T::zero() && p <= T::one())) {
            return Err(Error::InvalidConfig("permanence outside [0, 1]".into()));
        }
        let columns = permanences.into_iter().map(|p| Column::from_permanences(p, k_p)).collect();
        Ok(Self { columns, k_p, p_inc, p_dec, seed })
    }

    pub fn with_rates(mut self, p_inc: T, p_dec: T) -> Self {
        self.p_inc = p_inc;
        self.p_dec = p_dec;
        self
    }

    pub fn columns(&self) -> &[Column<T>] {
        &self.columns
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn input_len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn k_p(&self) -> T {
        self.k_p
    }

    pub fn p_inc(&self) -> T {
        self.p_inc
    }

    pub fn p_dec(&self) -> T {
        self.p_dec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn overlaps(&self, input: &Sdr) -> Result<Vec<usize>> {
        self.columns.iter().map(|c| overlap(c, input)).collect()
    }
}

/// Elementwise OR of every column's connected vector, followed by independent
/// 0 -> 1 flips with probability `p_noise` drawn from `SplitMix64::new(rng_seed)`
/// in increasing bit order.
pub fn union_set<T: Scalar>(bank: &ColumnBank<T>, noise: &NoiseConfig<T>, rng_seed: u64) -> Sdr {
    let mut union = Sdr::zeros(bank.input_len());
    for col in &bank.columns {
        union.or_assign(&col.connected).expect("columns share one length");
    }
    if noise.p_noise > T::zero() {
        let mut rng = SplitMix64::new(rng_seed);
        for i in 0..union.len() {
            if !union.get(i) && T::of(rng.next_unit()) < noise.p_noise {
                union.set(i, true);
            }
        }
    }
    union
}

pub fn overlap<T: Scalar>(column: &Column<T>, input: &Sdr) -> Result<usize> {
    column.connected.overlap(input)
}

/// Top `c` columns by overlap among those scoring at least `k_score`; ties go
/// to the lower column index.
pub fn select_winners<T: Scalar>(bank: &ColumnBank<T>, input: &Sdr, c: usize, k_score: usize) -> Result<WinnerSet> {
    let scores = bank.overlaps(input)?;
    let mut ranked: Vec<(usize, usize)> = scores.into_iter().enumerate().filter(|&(_, o)| o >= k_score).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(c);
    Ok(WinnerSet {
        indices: ranked.iter().map(|r| r.0).collect(),
        overlaps: ranked.iter().map(|r| r.1).collect(),
        c,
        k_score,
    })
}

/// Winners move toward the input: `+p_inc` on active input bits, `-p_dec` on
/// inactive ones, clamped to `[0, 1]`. Losing columns are left untouched.
pub fn update_permanences<T: Scalar>(bank: &mut ColumnBank<T>, winners: &WinnerSet, input: &Sdr) -> Result<()> {
    if input.len() != bank.input_len() {
        return Err(Error::LengthMismatch { left: bank.input_len(), right: input.len() });
    }
    let (inc, dec, k_p) = (bank.p_inc, bank.p_dec, bank.k_p);
    for &j in &winners.indices {
        let col = &mut bank.columns[j];
        for (i, p) in col.permanences.iter_mut().enumerate() {
            let moved = if input.get(i) { *p + inc } else { *p - dec };
            *p = moved.max(T::zero()).min(T::one());
        }
        col.connected = threshold(&col.permanences, k_p);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Sdr {
        Sdr::from_bit_str(s).unwrap()
    }

    fn bank_from(connected: &[&str]) -> ColumnBank<f64> {
        let perms = connected.iter().map(|s| s.chars().map(|c| if c == '1' { 0.9 } else { 0.1 }).collect()).collect();
        ColumnBank::from_parts(perms, 0.5, 0.05, 0.01, 0).unwrap()
    }

    #[test]
    fn threshold_above_support() {
        let bank = init_columns::<f64>(500, 4, 1.0, 9).unwrap();
        assert!(bank.columns().iter().all(|c| c.connected().count_ones() == 0));
    }

    #[test]
    fn threshold_below_support() {
        let bank = init_columns::<f64>(500, 4, 0.0, 9).unwrap();
        for col in bank.columns() {
            let zeros = col.permanences().iter().filter(|&&p| p == 0.0).count();
            assert_eq!(col.connected().count_ones(), 500 - zeros);
        }
    }

    #[test]
    fn connected_density_tracks_threshold() {
        let bank = init_columns::<f64>(10_000, 4, 0.8, 42).unwrap();
        for col in bank.columns() {
            let d = col.connected().count_ones() as f64 / 10_000.0;
            assert!((d - 0.2).abs() < 0.02, "density {d}");
        }
    }

    #[test]
    fn init_is_reproducible_and_precision_independent() {
        let a = init_columns::<f64>(64, 3, 0.5, 7).unwrap();
        let b = init_columns::<f64>(64, 3, 0.5, 7).unwrap();
        let c = init_columns::<f32>(64, 3, 0.5, 7).unwrap();
        assert_eq!(a, b);
        for (x, y) in a.columns().iter().zip(c.columns()) {
            assert_eq!(x.connected(), y.connected());
        }
    }

    #[test]
    fn init_rejects_bad_threshold() {
        assert!(init_columns::<f64>(8, 1, 1.5, 0).is_err());
        assert!(init_columns::<f64>(8, 0, 0.5, 0).is_err());
    }

    #[test]
    fn union_examples() {
        let bank = bank_from(&["1000", "0010"]);
        let none = NoiseConfig::default();
        assert_eq!(union_set(&bank, &none, 1).to_bit_string(), "1010");
        let single = bank_from(&["0110"]);
        assert_eq!(&union_set(&single, &none, 1), single.columns()[0].connected());
        let full = NoiseConfig { p_noise: 1.0 };
        assert_eq!(union_set(&bank, &full, 1), Sdr::ones(4));
    }

    #[test]
    fn union_noise_only_adds_bits() {
        let bank = init_columns::<f64>(400, 2, 0.9, 3).unwrap();
        let clean = union_set(&bank, &NoiseConfig::default(), 5);
        let noisy = union_set(&bank, &NoiseConfig { p_noise: 0.3 }, 5);
        assert_eq!(clean.and(&noisy).unwrap(), clean);
        assert!(noisy.count_ones() > clean.count_ones());
        assert_eq!(noisy, union_set(&bank, &NoiseConfig { p_noise: 0.3 }, 5));
    }

    #[test]
    fn overlap_examples() {
        let bank = bank_from(&["1010", "1111"]);
        assert_eq!(overlap(&bank.columns()[0], &bits("1110")).unwrap(), 2);
        assert_eq!(overlap(&bank.columns()[0], &bits("0000")).unwrap(), 0);
        assert_eq!(overlap(&bank.columns()[1], &bits("1111")).unwrap(), 4);
        assert!(overlap(&bank.columns()[1], &bits("111")).is_err());
    }

    #[test]
    fn winners_examples() {
        // overlaps [3, 5, 5, 2] against an all-ones input
        let bank = bank_from(&["11100", "11111", "11111", "11000"]);
        let input = Sdr::ones(5);
        let w = select_winners(&bank, &input, 1, 0).unwrap();
        assert_eq!(w.indices, vec![1]);
        assert_eq!(w.overlaps, vec![5]);
        let w = select_winners(&bank, &input, 2, 4).unwrap();
        assert_eq!(w.indices, vec![1, 2]);
        let w = select_winners(&bank, &Sdr::zeros(5), 3, 1).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn update_moves_winners_only() {
        let mut bank =
            ColumnBank::<f64>::from_parts(vec![vec![0.5, 1.0, 0.005], vec![0.5, 0.5, 0.5]], 0.5, 0.05, 0.01, 0)
                .unwrap();
        let input = bits("110");
        let winners = WinnerSet { indices: vec![0], overlaps: vec![1], c: 1, k_score: 0 };
        update_permanences(&mut bank, &winners, &input).unwrap();
        let p = bank.columns()[0].permanences();
        assert!((p[0] - 0.55).abs() < 1e-12);
        assert_eq!(p[1], 1.0);
        assert_eq!(p[2], 0.0);
        assert_eq!(bank.columns()[0].connected().to_bit_string(), "110");
        assert_eq!(bank.columns()[1].permanences(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn empty_winners_leave_bank() {
        let mut bank = init_columns::<f64>(16, 3, 0.5, 1).unwrap();
        let before = bank.clone();
        update_permanences(&mut bank, &WinnerSet::default(), &Sdr::ones(16)).unwrap();
        assert_eq!(bank, before);
    }
}
