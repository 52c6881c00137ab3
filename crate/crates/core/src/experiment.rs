//! End-to-end runs over synthetic or audio input, writing the resolved
//! config, accuracy CSV, per-step input/matched bitmaps and the final
//! archive into one output directory.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::circuit::{Circuit, CircuitConfig, StepReport};
use crate::datasets::{bundled_clip, frame_audio, gen_synthetic, load_wav, BasePattern, SyntheticSpec};
use crate::encoder::AnalogFrame;
use crate::error::{Error, Result};
use crate::metrics::{density, AccuracyRecord};
use crate::persistence::{load_state, save_state, write_accuracy_csv, write_sdr_bitmap};
use crate::scalar::Scalar;

pub const CONFIG_FILE: &str = "config.txt";
pub const ACCURACY_FILE: &str = "accuracy.csv";
pub const STATE_FILE: &str = "state.rclt";
pub const OUT_ENV: &str = "RCLT_OUT";

pub fn input_bitmap_name(t: u64) -> String {
    format!("input_t{t}.pbm")
}

pub fn matched_bitmap_name(t: u64) -> String {
    format!("matched_t{t}.pbm")
}

/// `$RCLT_OUT` when set, `rclt_out` otherwise.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("rclt_out"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approach {
    Synthetic,
    Audio,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig<T> {
    pub circuit: CircuitConfig<T>,
    pub steps: usize,
    pub base_pattern: BasePattern,
    pub perturb_step: Option<usize>,
    pub perturb_fraction: T,
    /// Audio hop in samples; `None` means one window.
    pub hop: Option<usize>,
    pub wav: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub verbose: bool,
}

impl<T: Scalar> RunConfig<T> {
    /// Defaults for the given approach: 10x10 synthetic frames, 20x20 audio frames.
    pub fn new(approach: Approach) -> Self {
        let side = match approach {
            Approach::Synthetic => 10,
            Approach::Audio => 20,
        };
        let synthetic = SyntheticSpec::<T>::default();
        Self {
            circuit: CircuitConfig { rows: side, cols: side, ..Default::default() },
            steps: synthetic.steps,
            base_pattern: synthetic.base_pattern,
            perturb_step: None,
            perturb_fraction: synthetic.perturb_fraction,
            hop: None,
            wav: None,
            out_dir: default_out_dir(),
            verbose: false,
        }
    }

    pub fn synthetic() -> Self {
        Self::new(Approach::Synthetic)
    }

    pub fn audio() -> Self {
        Self::new(Approach::Audio)
    }

    pub fn synthetic_spec(&self) -> SyntheticSpec<T> {
        SyntheticSpec {
            rows: self.circuit.rows,
            cols: self.circuit.cols,
            steps: self.steps,
            base_pattern: self.base_pattern,
            perturb_step: self.perturb_step,
            perturb_fraction: self.perturb_fraction,
            seed: self.circuit.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        self.synthetic_spec().validate()?;
        if self.hop == Some(0) {
            return Err(Error::InvalidConfig("hop must be at least 1".into()));
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if self.circuit.set(key, value)? {
            return Ok(());
        }
        let bad = || Error::InvalidConfig(format!("{key}: cannot parse {value:?}"));
        match key {
            "steps" => self.steps = value.parse().map_err(|_| bad())?,
            "base_pattern" => self.base_pattern = value.parse()?,
            "perturb_step" => {
                self.perturb_step = if value == "none" { None } else { Some(value.parse().map_err(|_| bad())?) }
            }
            "perturb_fraction" => self.perturb_fraction = value.parse().map_err(|_| bad())?,
            "hop" => self.hop = if value == "window" { None } else { Some(value.parse().map_err(|_| bad())?) },
            "wav" => self.wav = if value.is_empty() { None } else { Some(PathBuf::from(value)) },
            "out" => self.out_dir = PathBuf::from(value),
            "verbose" => self.verbose = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::InvalidConfig(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_config_text(&text)
    }

    /// The fully resolved configuration in config-file syntax.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.circuit.entries() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        let perturb = self.perturb_step.map_or("none".to_string(), |p| p.to_string());
        let hop = self.hop.map_or("window".to_string(), |h| h.to_string());
        let wav = self.wav.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        for (k, v) in [
            ("steps", self.steps.to_string()),
            ("base_pattern", self.base_pattern.as_str().to_string()),
            ("perturb_step", perturb),
            ("perturb_fraction", self.perturb_fraction.to_string()),
            ("hop", hop),
            ("wav", wav),
            ("out", self.out_dir.display().to_string()),
            ("verbose", self.verbose.to_string()),
        ] {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome<T> {
    pub reports: Vec<StepReport<T>>,
    pub records: Vec<AccuracyRecord<T>>,
    pub circuit: Circuit<T>,
    pub out_dir: PathBuf,
}

impl<T: Scalar> RunOutcome<T> {
    pub fn accuracy_at(&self, t: u64) -> Option<T> {
        self.records.iter().find(|r| r.t == t).map(|r| r.accuracy_percent)
    }
}

fn run_frames<T: Scalar>(cfg: &RunConfig<T>, frames: &[AnalogFrame<T>]) -> Result<RunOutcome<T>> {
    let out = &cfg.out_dir;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let config_path = out.join(CONFIG_FILE);
    std::fs::write(&config_path, cfg.to_config_text()).map_err(|e| Error::io(&config_path, e))?;

    let (rows, cols) = cfg.circuit.sdr_shape();
    let mut circuit = Circuit::new(cfg.circuit.clone())?;
    let mut reports = Vec::with_capacity(frames.len());
    for (i, frame) in frames.iter().enumerate() {
        let t = i as u64 + 1;
        let report = circuit.step(frame, t)?;
        write_sdr_bitmap(&report.input_sdr, rows, cols, out.join(input_bitmap_name(t)))?;
        write_sdr_bitmap(&report.matched_sdr, rows, cols, out.join(matched_bitmap_name(t)))?;
        reports.push(report);
    }
    let records: Vec<AccuracyRecord<T>> =
        reports.iter().map(|r| AccuracyRecord { t: r.t, accuracy_percent: r.accuracy_percent }).collect();
    write_accuracy_csv(&records, out.join(ACCURACY_FILE))?;
    save_state(&circuit, out.join(STATE_FILE))?;
    Ok(RunOutcome { reports, records, circuit, out_dir: out.clone() })
}

pub fn run_synthetic<T: Scalar>(cfg: &RunConfig<T>) -> Result<RunOutcome<T>> {
    cfg.validate()?;
    let frames = gen_synthetic(&cfg.synthetic_spec())?;
    run_frames(cfg, &frames)
}

/// Frames `wav` (or `cfg.wav` when `None`, or the bundled clip when both are
/// unset) with hop `cfg.hop`, defaulting to one window.
pub fn run_audio<T: Scalar>(cfg: &RunConfig<T>, wav: Option<&Path>) -> Result<RunOutcome<T>> {
    cfg.validate()?;
    let path = wav.or(cfg.wav.as_deref());
    let stream = match path {
        Some(p) => load_wav::<T>(p)?,
        None => bundled_clip::<T>()?,
    };
    let (rows, cols) = (cfg.circuit.rows, cfg.circuit.cols);
    let frames = frame_audio(&stream, rows, cols, cfg.hop.unwrap_or(rows * cols))?;
    let mut resolved = cfg.clone();
    resolved.wav = path.map(Path::to_path_buf);
    run_frames(&resolved, &frames)
}

/// What `inspect` prints about an archive.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSummary {
    pub columns: usize,
    pub input_len: usize,
    pub connected_density: Vec<f64>,
    pub segment_counts: Vec<usize>,
    pub memory_size: usize,
    pub last_t: Option<u64>,
}

impl StateSummary {
    pub fn of<T: Scalar>(circuit: &Circuit<T>) -> Self {
        Self {
            columns: circuit.bank().column_count(),
            input_len: circuit.bank().input_len(),
            connected_density: circuit.bank().columns().iter().map(|c| density::<f64>(c.connected())).collect(),
            segment_counts: circuit.segments().iter().map(|s| s.len()).collect(),
            memory_size: circuit.memory().len(),
            last_t: circuit.last_t(),
        }
    }

    pub fn columns_with_segments(&self) -> usize {
        self.segment_counts.iter().filter(|&&n| n > 0).count()
    }
}

impl fmt::Display for StateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "columns: {}", self.columns)?;
        writeln!(f, "input length: {}", self.input_len)?;
        match self.last_t {
            Some(t) => writeln!(f, "last step: {t}")?,
            None => writeln!(f, "last step: none")?,
        }
        for (j, (d, n)) in self.connected_density.iter().zip(&self.segment_counts).enumerate() {
            writeln!(f, "column {j}: connected density {d:.4}, segments {n}")?;
        }
        writeln!(f, "columns with segments: {}", self.columns_with_segments())?;
        writeln!(f, "memory-store size: {}", self.memory_size)
    }
}

pub fn inspect_state<T: Scalar>(path: impl AsRef<Path>) -> Result<StateSummary> {
    Ok(StateSummary::of(&load_state::<T>(path)?))
}
