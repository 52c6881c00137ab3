//! Input providers: a seeded synthetic frame sequence and 16-bit PCM mono
//! WAV audio cut into fixed-hop frames.

use std::path::Path;

use crate::encoder::AnalogFrame;
use crate::error::{Error, Result};
use crate::rng::{SplitMix64, DATASET_STREAMS};
use crate::scalar::{ceil_count, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BasePattern {
    /// `(i + 1) / n` over the row-major index `i`.
    #[default]
    ConstantRamp,
    /// 1 on cells with odd `row + col`, 0 elsewhere.
    Checker,
    /// Uniform `[0, 1)` values drawn once from the seed.
    RandomFixed,
}

impl BasePattern {
    pub fn as_str(self) -> &'static str {
        match self {
            BasePattern::ConstantRamp => "ramp",
            BasePattern::Checker => "checker",
            BasePattern::RandomFixed => "random",
        }
    }
}

impl std::str::FromStr for BasePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ramp" => Ok(BasePattern::ConstantRamp),
            "checker" => Ok(BasePattern::Checker),
            "random" => Ok(BasePattern::RandomFixed),
            _ => Err(Error::InvalidConfig(format!("unknown base pattern {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec<T> {
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub base_pattern: BasePattern,
    /// 1-based step whose frame is perturbed.
    pub perturb_step: Option<usize>,
    pub perturb_fraction: T,
    pub seed: u64,
}

impl<T: Scalar> Default for SyntheticSpec<T> {
    fn default() -> Self {
        Self {
            rows: 10,
            cols: 10,
            steps: 5,
            base_pattern: BasePattern::ConstantRamp,
            perturb_step: None,
            perturb_fraction: T::of(0.08),
            seed: 42,
        }
    }
}

impl<T: Scalar> SyntheticSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidConfig(format!("synthetic frame {}x{} must be positive", self.rows, self.cols)));
        }
        if let Some(p) = self.perturb_step {
            if p == 0 || p > self.steps {
                return Err(Error::InvalidConfig(format!("perturb_step {p} outside [1, {}]", self.steps)));
            }
        }
        if !(self.perturb_fraction >= T::zero() && self.perturb_fraction <= T::one()) {
            return Err(Error::InvalidConfig(format!("perturb_fraction {} outside [0, 1]", self.perturb_fraction)));
        }
        Ok(())
    }
}

fn base_values(spec_rows: usize, spec_cols: usize, pattern: BasePattern, seed: u64) -> Vec<f64> {
    let n = spec_rows * spec_cols;
    match pattern {
        BasePattern::ConstantRamp => (0..n).map(|i| (i + 1) as f64 / n as f64).collect(),
        BasePattern::Checker => {
            (0..n).map(|i| if (i / spec_cols + i % spec_cols) % 2 == 1 { 1.0 } else { 0.0 }).collect()
        }
        BasePattern::RandomFixed => {
            let mut rng = SplitMix64::stream(seed, DATASET_STREAMS);
            (0..n).map(|_| rng.next_unit()).collect()
        }
    }
}

/// `steps` copies of the base pattern. On the perturbed step
/// `ceil(perturb_fraction * n)` distinct cells, picked by a partial
/// Fisher-Yates shuffle of dataset stream 1, are re-drawn as transient outliers:
/// uniform on `[peak, 2 * peak)` where `peak` is the base pattern's largest
/// magnitude, drawn from the same stream.
pub fn gen_synthetic<T: Scalar>(spec: &SyntheticSpec<T>) -> Result<Vec<AnalogFrame<T>>> {
    spec.validate()?;
    let n = spec.rows * spec.cols;
    let base = base_values(spec.rows, spec.cols, spec.base_pattern, spec.seed);
    let to_frame = |values: &[f64]| AnalogFrame::new(spec.rows, spec.cols, values.iter().map(|&v| T::of(v)).collect());

    let mut frames = Vec::with_capacity(spec.steps);
    for step in 1..=spec.steps {
        if spec.perturb_step == Some(step) {
            let count = ceil_count(spec.perturb_fraction, n).min(n);
            let mut values = base.clone();
            let peak = base.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let peak = if peak > 0.0 { peak } else { 1.0 };
            let mut rng = SplitMix64::stream(spec.seed, DATASET_STREAMS + 1);
            let mut order: Vec<usize> = (0..n).collect();
            for k in 0..count {
                let pick = k + rng.below((n - k) as u64) as usize;
                order.swap(k, pick);
                let cell = order[k];
                let mut fresh = peak * (1.0 + rng.next_unit());
                while fresh == values[cell] {
                    fresh = peak * (1.0 + rng.next_unit());
                }
                values[cell] = fresh;
            }
            frames.push(to_frame(&values)?);
        } else {
            frames.push(to_frame(&base)?);
        }
    }
    Ok(frames)
}

/// Mono samples scaled to `[-1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AudioStream<T> {
    pub sample_rate: u32,
    pub samples: Vec<T>,
}

impl<T: Scalar> AudioStream<T> {
    pub fn channel_count(&self) -> u16 {
        1
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate.max(1) as f64
    }
}

fn hound_error(path: &Path, err: hound::Error) -> Error {
    match err {
        hound::Error::Unsupported => Error::UnsupportedFormat("not PCM integer audio".into()),
        hound::Error::IoError(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => {
            Error::CorruptFile(format!("{}: truncated", path.display()))
        }
        hound::Error::IoError(e) if e.kind() == std::io::ErrorKind::NotFound => Error::io(path, e),
        other => Error::CorruptFile(format!("{}: {other}", path.display())),
    }
}

/// One second of 8 kHz tone mixture shipped with the crate; `examples/make_clip.rs` regenerates it.
pub const BUNDLED_CLIP: &[u8] = include_bytes!("../data/tone.wav");

/// Reads a RIFF/WAVE file holding 16-bit PCM mono; each sample `s` becomes `s / 32768`.
pub fn load_wav<T: Scalar>(path: impl AsRef<Path>) -> Result<AudioStream<T>> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| hound_error(path, e))?;
    read_pcm(reader, path)
}

/// Decodes [`BUNDLED_CLIP`].
pub fn bundled_clip<T: Scalar>() -> Result<AudioStream<T>> {
    let name = Path::new("<bundled clip>");
    let reader = hound::WavReader::new(BUNDLED_CLIP).map_err(|e| hound_error(name, e))?;
    read_pcm(reader, name)
}

fn read_pcm<T: Scalar, R: std::io::Read>(reader: hound::WavReader<R>, path: &Path) -> Result<AudioStream<T>> {
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedFormat(format!("{} channels, only mono is supported", spec.channels)));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(Error::UnsupportedFormat(format!(
            "{}-bit {:?} samples, only 16-bit PCM is supported",
            spec.bits_per_sample, spec.sample_format
        )));
    }
    let scale = T::of(32768.0);
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| T::of(f64::from(v)) / scale))
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| hound_error(path, e))?;
    Ok(AudioStream { sample_rate: spec.sample_rate, samples })
}

/// Windows of `rows * cols` samples every `hop` samples, each laid out row-major.
pub fn frame_audio<T: Scalar>(
    stream: &AudioStream<T>,
    rows: usize,
    cols: usize,
    hop: usize,
) -> Result<Vec<AnalogFrame<T>>> {
    if hop == 0 {
        return Err(Error::InvalidConfig("hop must be at least 1".into()));
    }
    let window = rows * cols;
    if window == 0 {
        return Err(Error::InvalidConfig(format!("frame size {rows}x{cols} must be positive")));
    }
    let n = stream.samples.len();
    if n < window {
        return Ok(Vec::new());
    }
    (0..=(n - window) / hop)
        .map(|k| AnalogFrame::new(rows, cols, stream.samples[k * hop..k * hop + window].to_vec()))
        .collect()
}
