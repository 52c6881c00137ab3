//! One cortical learning region: encoder, spatial pooler and temporal pooler
//! driven one time step at a time.

use crate::encoder::{encode, AnalogFrame, EncoderConfig, Rule};
use crate::error::{Error, Result};
use crate::metrics::percent_accuracy;
use crate::scalar::Scalar;
use crate::sdr::Sdr;
use crate::spatial_pooler::{
    init_columns, select_winners, union_set, update_permanences, ColumnBank, NoiseConfig, WinnerSet,
};
use crate::temporal_pooler::{
    fl_potential, fos_potential, insert_segment, match_input, predict, store_match, ColumnSegments, MemoryStore,
    SynapticPotential,
};

/// Every constant of a circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitConfig<T> {
    /// Input frame rows before resizing.
    pub rows: usize,
    /// Input frame columns before resizing.
    pub cols: usize,
    pub encoder: EncoderConfig<T>,
    pub sparse_cols: usize,
    /// Permanence threshold for a connected synapse.
    pub k_p: T,
    pub p_inc: T,
    pub p_dec: T,
    /// Winners kept per step.
    pub c: usize,
    /// Minimum overlap for a column to compete.
    pub k_score: usize,
    /// Minimum match percentage for a potential to enter the memory-store.
    pub k_s: T,
    pub noise: NoiseConfig<T>,
    pub seed: u64,
}

impl<T: Scalar> Default for CircuitConfig<T> {
    fn default() -> Self {
        Self {
            rows: 10,
            cols: 10,
            encoder: EncoderConfig::default(),
            sparse_cols: 8,
            k_p: T::of(0.5),
            p_inc: T::of(0.05),
            p_dec: T::of(0.01),
            c: 1,
            k_score: 1,
            k_s: T::of(50.0),
            noise: NoiseConfig::default(),
            seed: 42,
        }
    }
}

impl<T: Scalar> CircuitConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.encoder.validate()?;
        self.noise.validate()?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.rows == 0 || self.cols == 0 {
            return bad(format!("frame size {}x{} must be positive", self.rows, self.cols));
        }
        if self.input_len() == 0 {
            return bad(format!("k_o {} leaves no input of a {}x{} frame", self.encoder.resize, self.rows, self.cols));
        }
        if self.sparse_cols == 0 {
            return bad("sparse_cols must be at least 1".into());
        }
        if self.c == 0 {
            return bad("c must be at least 1".into());
        }
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !unit(self.k_p) {
            return bad(format!("k_p {} outside [0, 1]", self.k_p));
        }
        if !unit(self.p_inc) || !unit(self.p_dec) {
            return bad(format!("p_inc {} and p_dec {} must lie in [0, 1]", self.p_inc, self.p_dec));
        }
        if !(self.k_s >= T::zero() && self.k_s <= T::hundred()) {
            return bad(format!("k_s {} outside [0, 100]", self.k_s));
        }
        Ok(())
    }

    /// Keys accepted by [`CircuitConfig::set`], in the order [`CircuitConfig::entries`] emits them.
    pub const KEYS: [&'static str; 18] = [
        "ro",
        "co",
        "k_o",
        "rule",
        "k1",
        "k2_low",
        "k2_high",
        "quantization_step",
        "flatten_order",
        "sparse_cols",
        "k_p",
        "p_inc",
        "p_dec",
        "c",
        "k_score",
        "k_s",
        "p_noise",
        "seed",
    ];

    /// Every parameter as `(key, value)` text. Reals use the shortest
    /// representation that parses back to the same value.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let e = &self.encoder;
        let values = [
            self.rows.to_string(),
            self.cols.to_string(),
            e.resize.to_string(),
            e.rule.as_str().to_string(),
            e.k1.to_string(),
            e.k2_low.to_string(),
            e.k2_high.to_string(),
            e.quantization_step.to_string(),
            e.flatten_order.as_str().to_string(),
            self.sparse_cols.to_string(),
            self.k_p.to_string(),
            self.p_inc.to_string(),
            self.p_dec.to_string(),
            self.c.to_string(),
            self.k_score.to_string(),
            self.k_s.to_string(),
            self.noise.p_noise.to_string(),
            self.seed.to_string(),
        ];
        Self::KEYS.into_iter().zip(values).collect()
    }

    /// Sets one parameter from text. Returns `Ok(false)` for keys this
    /// config does not own.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        fn num<N: std::str::FromStr>(key: &str, value: &str) -> Result<N> {
            value.parse().map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
        }
        let e = &mut self.encoder;
        match key {
            "ro" => self.rows = num(key, value)?,
            "co" => self.cols = num(key, value)?,
            "k_o" => e.resize = num(key, value)?,
            "rule" => e.rule = value.parse()?,
            "k1" => e.k1 = num(key, value)?,
            "k2_low" => e.k2_low = num(key, value)?,
            "k2_high" => e.k2_high = num(key, value)?,
            "quantization_step" => e.quantization_step = num(key, value)?,
            "flatten_order" => e.flatten_order = value.parse()?,
            "sparse_cols" => self.sparse_cols = num(key, value)?,
            "k_p" => self.k_p = num(key, value)?,
            "p_inc" => self.p_inc = num(key, value)?,
            "p_dec" => self.p_dec = num(key, value)?,
            "c" => self.c = num(key, value)?,
            "k_score" => self.k_score = num(key, value)?,
            "k_s" => self.k_s = num(key, value)?,
            "p_noise" => self.noise.p_noise = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// SDR length after resizing.
    pub fn input_len(&self) -> usize {
        self.encoder.output_len(self.rows, self.cols)
    }

    /// Bitmap dimensions of the SDR after resizing.
    pub fn sdr_shape(&self) -> (usize, usize) {
        let k = self.encoder.resize.max(1);
        (self.rows / k, self.cols / k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<T> {
    pub t: u64,
    pub input_sdr: Sdr,
    pub matched_sdr: Sdr,
    pub accuracy_percent: T,
    pub winners: WinnerSet,
    /// Absent when no column won.
    pub potential: Option<SynapticPotential>,
    /// Whether the potential reached `k_s` and entered the memory-store.
    pub stored: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    config: CircuitConfig<T>,
    bank: ColumnBank<T>,
    segments: Vec<ColumnSegments>,
    memory: MemoryStore<T>,
    last_t: Option<u64>,
}

/// First and last segments of the whole region's sequence, as a
/// two-entry list owned by `last_column`. The first is the oldest segment
/// of any column (lowest column index on ties); the last is `last_column`'s
/// newest segment.
fn region_endpoints(segments: &[ColumnSegments], last_column: usize) -> ColumnSegments {
    let mut view = ColumnSegments::new(last_column);
    let first = segments.iter().filter_map(|s| s.first()).min_by_key(|seg| seg.created_at);
    let last = segments[last_column].last();
    for seg in first.into_iter().chain(last) {
        // A single-entry view when first and last coincide in time.
        let _ = insert_segment(&mut view, seg.pattern.clone(), seg.created_at);
    }
    view
}

impl<T: Scalar> Circuit<T> {
    pub fn new(config: CircuitConfig<T>) -> Result<Self> {
        config.validate()?;
        let bank = init_columns(config.input_len(), config.sparse_cols, config.k_p, config.seed)?
            .with_rates(config.p_inc, config.p_dec);
        let segments = (0..config.sparse_cols).map(ColumnSegments::new).collect();
        Ok(Self { config, bank, segments, memory: MemoryStore::new(), last_t: None })
    }

    /// Reassembles a circuit from persisted parts, checking that they agree
    /// with the configuration.
    pub fn from_parts(
        config: CircuitConfig<T>,
        bank: ColumnBank<T>,
        segments: Vec<ColumnSegments>,
        memory: MemoryStore<T>,
        last_t: Option<u64>,
    ) -> Result<Self> {
        config.validate()?;
        if bank.column_count() != config.sparse_cols || segments.len() != config.sparse_cols {
            return Err(Error::InvalidConfig(format!(
                "expected {} columns, found {} in bank and {} segment lists",
                config.sparse_cols,
                bank.column_count(),
                segments.len()
            )));
        }
        if bank.input_len() != config.input_len() {
            return Err(Error::LengthMismatch { left: config.input_len(), right: bank.input_len() });
        }
        let len = config.input_len();
        let patterns = segments.iter().flat_map(|s| s.segments().iter().map(|g| &g.pattern));
        if let Some(p) = patterns.chain(memory.entries().iter().map(|e| &e.pattern)).find(|p| p.len() != len) {
            return Err(Error::LengthMismatch { left: len, right: p.len() });
        }
        Ok(Self { config, bank, segments, memory, last_t })
    }

    pub fn config(&self) -> &CircuitConfig<T> {
        &self.config
    }

    pub fn bank(&self) -> &ColumnBank<T> {
        &self.bank
    }

    pub fn segments(&self) -> &[ColumnSegments] {
        &self.segments
    }

    pub fn memory(&self) -> &MemoryStore<T> {
        &self.memory
    }

    pub fn last_t(&self) -> Option<u64> {
        self.last_t
    }

    /// Union of connected vectors with this step's noise draw.
    pub fn union(&self, t: u64) -> Sdr {
        union_set(&self.bank, &self.config.noise, self.config.seed.wrapping_add(t))
    }

    /// Runs one time step. State is unchanged when an error is returned.
    pub fn step(&mut self, frame: &AnalogFrame<T>, t: u64) -> Result<StepReport<T>> {
        if let Some(previous) = self.last_t {
            if t <= previous {
                return Err(Error::NonMonotonicTime { t, previous });
            }
        }
        if (frame.rows(), frame.cols()) != (self.config.rows, self.config.cols) {
            return Err(Error::InvalidFrame(format!(
                "expected {}x{} frame, got {}x{}",
                self.config.rows,
                self.config.cols,
                frame.rows(),
                frame.cols()
            )));
        }
        let input = encode(frame, &self.config.encoder)?;

        let winners = select_winners(&self.bank, &input, self.config.c, self.config.k_score)?;
        update_permanences(&mut self.bank, &winners, &input)?;
        for &w in &winners.indices {
            insert_segment(&mut self.segments[w], input.clone(), t)?;
        }

        let potential = match winners.indices.first() {
            None => None,
            Some(&top) => Some(match self.config.encoder.rule {
                Rule::FirstLast => fl_potential(&region_endpoints(&self.segments, top))?,
                Rule::FrequentOccurring => fos_potential(&self.segments)?,
            }),
        };

        let mut stored = false;
        if let Some(p) = &potential {
            let (matched, score) = match_input(p, &input, self.config.k_s)?;
            if matched {
                store_match(&mut self.memory, p.pattern.clone(), score, t)?;
                stored = true;
            }
        }

        let matched_sdr = if !self.memory.is_empty() {
            predict(&self.memory, &input)?.0
        } else if let Some(p) = &potential {
            p.pattern.clone()
        } else {
            Sdr::zeros(input.len())
        };
        let accuracy_percent = percent_accuracy(&input, &matched_sdr)?;
        self.last_t = Some(t);

        Ok(StepReport { t, input_sdr: input, matched_sdr, accuracy_percent, winners, potential, stored })
    }
}
