use std::path::{Path, PathBuf};

use rclt::datasets::{bundled_clip, frame_audio, load_wav};
use rclt::experiment::{
    input_bitmap_name, inspect_state, matched_bitmap_name, run_audio, run_synthetic, RunConfig, ACCURACY_FILE,
    CONFIG_FILE, STATE_FILE,
};
use rclt::persistence::{load_state, read_sdr_bitmap, save_state};
use rclt::{encode, Error, Rule};

fn clip() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/tone.wav")
}

fn write_wav(path: &Path, channels: u16, bits: u16, samples: &[i32]) {
    let spec =
        hound::WavSpec { channels, sample_rate: 8000, bits_per_sample: bits, sample_format: hound::SampleFormat::Int };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for &s in samples {
        w.write_sample(s).unwrap();
    }
    w.finalize().unwrap();
}

fn synthetic_in(dir: &Path) -> RunConfig<f64> {
    let mut cfg = RunConfig::synthetic();
    cfg.out_dir = dir.to_path_buf();
    cfg
}

#[test]
fn run_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_synthetic(&synthetic_in(tmp.path())).unwrap();
    for name in [CONFIG_FILE, ACCURACY_FILE, STATE_FILE] {
        assert!(tmp.path().join(name).is_file(), "{name}");
    }
    for t in 1..=5 {
        let (rows, cols, sdr) = read_sdr_bitmap(tmp.path().join(input_bitmap_name(t))).unwrap();
        assert_eq!((rows, cols), (10, 10));
        assert_eq!(sdr, out.reports[t as usize - 1].input_sdr);
        let (_, _, matched) = read_sdr_bitmap(tmp.path().join(matched_bitmap_name(t))).unwrap();
        assert_eq!(matched, out.reports[t as usize - 1].matched_sdr);
    }
    let csv = std::fs::read_to_string(tmp.path().join(ACCURACY_FILE)).unwrap();
    assert_eq!(csv, "t,accuracy_percent\n1,100.0\n2,100.0\n3,100.0\n4,100.0\n5,100.0\n");
}

#[test]
fn written_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = synthetic_in(&tmp.path().join("a"));
    cfg.perturb_step = Some(3);
    cfg.circuit.encoder.rule = Rule::FrequentOccurring;
    cfg.circuit.seed = 9;
    let first = run_synthetic(&cfg).unwrap();

    let mut again = RunConfig::<f64>::synthetic();
    again.apply_config_file(tmp.path().join("a").join(CONFIG_FILE)).unwrap();
    again.out_dir = tmp.path().join("b");
    let second = run_synthetic(&again).unwrap();
    assert_eq!(first.records, second.records);
    let state = |d: &str| std::fs::read(tmp.path().join(d).join(STATE_FILE)).unwrap();
    assert_eq!(state("a"), state("b"));
}

#[test]
fn inspect_after_constant_run() {
    let tmp = tempfile::tempdir().unwrap();
    run_synthetic(&synthetic_in(tmp.path())).unwrap();
    let summary = inspect_state::<f64>(tmp.path().join(STATE_FILE)).unwrap();
    assert_eq!(summary.columns, 8);
    assert_eq!(summary.input_len, 100);
    assert_eq!(summary.columns_with_segments(), 1);
    assert_eq!(summary.segment_counts.iter().sum::<usize>(), 5);
    assert_eq!(summary.memory_size, 5);
    assert_eq!(summary.last_t, Some(5));
    assert!(summary.to_string().contains("columns with segments: 1"));
}

#[test]
fn fresh_archive_has_empty_memory() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = synthetic_in(tmp.path());
    cfg.steps = 0;
    let out = run_synthetic(&cfg).unwrap();
    assert!(out.records.is_empty());
    let summary = inspect_state::<f64>(tmp.path().join(STATE_FILE)).unwrap();
    assert_eq!(summary.memory_size, 0);
    assert_eq!(summary.last_t, None);
    assert_eq!(summary.columns_with_segments(), 0);
}

#[test]
fn loaded_state_continues_like_the_original() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_synthetic(&synthetic_in(tmp.path())).unwrap();
    let mut original = out.circuit;
    let path = tmp.path().join("copy.rclt");
    save_state(&original, &path).unwrap();
    let mut loaded = load_state::<f64>(&path).unwrap();
    let frame = rclt::datasets::gen_synthetic(&RunConfig::<f64>::synthetic().synthetic_spec()).unwrap().remove(0);
    assert_eq!(original.step(&frame, 6).unwrap(), loaded.step(&frame, 6).unwrap());
}

#[test]
fn f32_run_matches_f64_run() {
    let tmp = tempfile::tempdir().unwrap();
    let mut a = RunConfig::<f32>::synthetic();
    a.out_dir = tmp.path().join("f32");
    a.perturb_step = Some(4);
    let mut b = synthetic_in(&tmp.path().join("f64"));
    b.perturb_step = Some(4);
    let (a, b) = (run_synthetic(&a).unwrap(), run_synthetic(&b).unwrap());
    let acc32: Vec<f64> = a.records.iter().map(|r| f64::from(r.accuracy_percent)).collect();
    let acc64: Vec<f64> = b.records.iter().map(|r| r.accuracy_percent).collect();
    assert_eq!(acc32, acc64);
}

#[test]
fn bundled_clip_runs_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |d: &str| {
        let mut cfg = RunConfig::<f64>::audio();
        cfg.out_dir = tmp.path().join(d);
        run_audio(&cfg, Some(&clip())).unwrap();
        std::fs::read(tmp.path().join(d).join(ACCURACY_FILE)).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn wav_samples_are_scaled_by_32768() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("s.wav");
    write_wav(&path, 1, 16, &[16384, -32768, 0, 32767]);
    let stream = load_wav::<f64>(&path).unwrap();
    assert_eq!(stream.sample_rate, 8000);
    assert_eq!(stream.samples, vec![0.5, -1.0, 0.0, 32767.0 / 32768.0]);
}

#[test]
fn stereo_and_eight_bit_wavs_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let stereo = tmp.path().join("stereo.wav");
    write_wav(&stereo, 2, 16, &[1, 2, 3, 4]);
    assert!(matches!(load_wav::<f64>(&stereo), Err(Error::UnsupportedFormat(_))));
    let narrow = tmp.path().join("narrow.wav");
    write_wav(&narrow, 1, 8, &[1, 2, 3, 4]);
    assert!(matches!(load_wav::<f64>(&narrow), Err(Error::UnsupportedFormat(_))));
}

#[test]
fn damaged_wavs_are_corrupt() {
    let tmp = tempfile::tempdir().unwrap();
    let junk = tmp.path().join("junk.wav");
    std::fs::write(&junk, b"definitely not a wave file").unwrap();
    assert!(matches!(load_wav::<f64>(&junk), Err(Error::CorruptFile(_))));

    let cut = tmp.path().join("cut.wav");
    write_wav(&cut, 1, 16, &[7; 64]);
    let bytes = std::fs::read(&cut).unwrap();
    std::fs::write(&cut, &bytes[..bytes.len() - 33]).unwrap();
    assert!(matches!(load_wav::<f64>(&cut), Err(Error::CorruptFile(_))));

    assert!(matches!(load_wav::<f64>(tmp.path().join("missing.wav")), Err(Error::Io { .. })));
}

#[test]
fn clip_frames_encode_cleanly() {
    let stream = load_wav::<f64>(clip()).unwrap();
    assert_eq!(stream.channel_count(), 1);
    assert!((stream.duration_secs() - 1.0).abs() < 1e-9);
    let frames = frame_audio(&stream, 20, 20, 400).unwrap();
    assert_eq!(frames.len(), 20);
    let cfg = rclt::EncoderConfig::<f64>::default();
    for f in &frames {
        assert!(f.values().iter().all(|v| v.is_finite()));
        let sdr = encode(f, &cfg).unwrap();
        assert!(sdr.count_ones() <= 80);
    }
}

#[test]
fn missing_wav_is_reported_before_any_output() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::<f64>::audio();
    cfg.out_dir = tmp.path().join("out");
    let err = run_audio(&cfg, Some(&tmp.path().join("nope.wav"))).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(!tmp.path().join("out").join(STATE_FILE).exists());
}

#[test]
fn embedded_clip_matches_the_data_file() {
    assert_eq!(bundled_clip::<f64>().unwrap(), load_wav::<f64>(clip()).unwrap());
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::<f64>::audio();
    cfg.out_dir = tmp.path().join("a");
    let embedded = run_audio(&cfg, None).unwrap();
    cfg.out_dir = tmp.path().join("b");
    let from_file = run_audio(&cfg, Some(&clip())).unwrap();
    assert_eq!(embedded.records, from_file.records);
}
