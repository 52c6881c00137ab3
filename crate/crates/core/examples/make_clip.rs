//! Writes the bundled test clip: one second of a sustained 200 Hz harmonic
//! tone at 8 kHz, 16-bit mono, with a slow tremolo and low-level seeded noise.
//!
//! cargo run -p rclt --example make_clip -- crates/core/data/tone.wav

use std::f64::consts::TAU;

use rclt::rng::SplitMix64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "tone.wav".into());
    let rate = 8000u32;
    let spec =
        hound::WavSpec { channels: 1, sample_rate: rate, bits_per_sample: 16, sample_format: hound::SampleFormat::Int };
    let mut writer = hound::WavWriter::create(&path, spec)?;
    let mut rng = SplitMix64::new(2016);
    for n in 0..rate {
        let t = f64::from(n) / f64::from(rate);
        let tone = (TAU * 200.0 * t).sin() + 0.5 * (TAU * 400.0 * t).sin() + 0.25 * (TAU * 600.0 * t).sin();
        let envelope = 0.6 + 0.3 * (TAU * 1.5 * t).sin();
        let noise = 0.01 * (2.0 * rng.next_unit() - 1.0);
        let v = (envelope * tone / 1.75 + noise).clamp(-1.0, 1.0);
        writer.write_sample((v * 32767.0).round() as i16)?;
    }
    writer.finalize()?;
    Ok(())
}
