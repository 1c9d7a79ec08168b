use std::path::Path;
use std::process::Command;

use mcmc_lossy::archive::Archive;
use mcmc_lossy::config::ExperimentConfig;
use mcmc_lossy::context::{build_counts, ContextShape};
use mcmc_lossy::harness::{self, code, format_sequence, read_input_file, Input, WarmStart};
use mcmc_lossy::pbm::{Image2D, PbmFormat};
use mcmc_lossy::Symbol;

const BIN: &str = env!("CARGO_BIN_EXE_mcmc-lossy");

/// Filled disc plus a diagonal band: enough structure for context modelling.
fn test_image(w: usize, h: usize) -> Image2D {
    let pixels = (0..h)
        .flat_map(|r| {
            (0..w).map(move |c| {
                let (dy, dx) = (r as f64 - h as f64 / 2.0, c as f64 - w as f64 / 3.0);
                let disc = dy * dy + dx * dx < (w * w / 16) as f64;
                let band = (r + c) % 40 < 6;
                (disc ^ band) as Symbol
            })
        })
        .collect();
    Image2D::new(w, h, pixels).unwrap()
}

fn config(pairs: &[(&str, &str)]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    for (k, v) in pairs {
        cfg.set(k, v).unwrap();
    }
    cfg
}

fn run(args: &[&str]) -> std::process::Output {
    let out = Command::new(BIN).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn raw_pbm_is_byte_identical_after_read_and_write() {
    for (w, h) in [(1, 1), (7, 3), (16, 2), (252, 252)] {
        let bytes = test_image(w, h).to_bytes(PbmFormat::Raw);
        let parsed = Image2D::parse(&bytes).unwrap();
        assert_eq!(parsed.to_bytes(PbmFormat::Raw), bytes, "{w}x{h}");
        let plain = Image2D::parse(&parsed.to_bytes(PbmFormat::Plain)).unwrap();
        assert_eq!(plain, parsed);
    }
}

#[test]
fn one_row_raster_matches_zero_padded_previous_context() {
    let img = test_image(90, 1);
    let y = img.pixels().to_vec();
    for k in 1..=4 {
        let offsets = (1..=k as isize).map(|d| (0, -d)).collect();
        let raster = build_counts(&y, 2, ContextShape::raster(90, 1, offsets).unwrap()).unwrap();
        let padded: Vec<Symbol> = std::iter::repeat_n(0, k).chain(y.iter().copied()).collect();
        let linear = build_counts(&padded, 2, ContextShape::linear(k)).unwrap();
        assert_eq!(raster.cells(), linear.cells());
        assert_eq!(raster.conditional_entropy().unwrap(), linear.conditional_entropy().unwrap());
    }
}

#[test]
fn image_with_previous_context_codes_like_its_scan() {
    let img = test_image(40, 30);
    let as_image = Input {
        symbols: img.pixels().to_vec(),
        alphabet: 2,
        dims: Some((40, 30)),
    };
    let as_scan = Input { dims: None, ..as_image.clone() };
    let cfg = config(&[("context", "previous"), ("k", "5"), ("r_mult", "3")]);
    let a = code(&cfg, &as_image, 3.0, 11, WarmStart::Cold).unwrap();
    let b = code(&cfg, &as_scan, 3.0, 11, WarmStart::Cold).unwrap();
    assert_eq!(a.hk_bits, b.hk_bits);
    assert_eq!(a.reconstruction, b.reconstruction);
}

#[test]
fn harness_archive_holds_the_reconstruction() {
    let cfg = config(&[("source", "bsms:0.1"), ("n", "3000"), ("k", "4"), ("alphas", "3"), ("seeds", "5")]);
    let (bytes, report) = harness::compress(&cfg).unwrap();
    let archive = harness::decompress(&bytes).unwrap();
    assert_eq!(archive.symbols.len(), 3000);
    assert_eq!(archive.k, 4);
    assert_eq!(report.archive_bytes, bytes.len());
    let x = harness::load_input(&cfg, 5).unwrap().symbols;
    let d = x.iter().zip(&archive.symbols).filter(|(a, b)| a != b).count() as f64 / 3000.0;
    assert!((d - report.distortion).abs() <= 1e-12);
    let h = build_counts(&archive.symbols, 2, ContextShape::linear(4))
        .unwrap()
        .conditional_entropy()
        .unwrap();
    assert!((h - report.hk_bits).abs() <= 1e-9);
}

#[test]
fn config_text_round_trips() {
    let cfg = config(&[
        ("mode", "sb"),
        ("alphas", "4.0:-0.4:2.0"),
        ("seeds", "0..4"),
        ("context", "offsets:0,-1;-1,0;-1,1"),
        ("schedule", "logarithmic"),
        ("t0", "3.5"),
    ]);
    assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
}

#[test]
fn cli_compresses_and_restores_a_252_square_image() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("in.pbm");
    let arc = dir.path().join("in.mclz");
    let back = dir.path().join("out.pbm");
    test_image(252, 252).save(&src, PbmFormat::Raw).unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    run(&["compress", &s(&src), "--alphas", "2", "--r_mult", "2", "-o", &s(&arc)]);
    let archive = Archive::decode(&std::fs::read(&arc).unwrap()).unwrap();
    assert_eq!(archive.dims, Some((252, 252)));
    assert_eq!(archive.k, 6);
    run(&["decompress", &s(&arc), "-o", &s(&back)]);
    let restored = read_input_file(&back).unwrap();
    assert_eq!(restored.dims, Some((252, 252)));
    assert_eq!(restored.symbols, archive.symbols);
    assert!(std::fs::metadata(&arc).unwrap().len() < std::fs::metadata(&src).unwrap().len());
}

#[test]
fn cli_sequence_round_trip_and_csv_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("x.txt");
    let x: Vec<Symbol> = (0..500).map(|i| ((i / 7) % 3 == 0) as Symbol).collect();
    std::fs::write(&seq, format_sequence(&x)).unwrap();
    let arc = dir.path().join("x.mclz");
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    run(&["compress", &s(&seq), "--k", "3", "-o", &s(&arc)]);
    let out = run(&["decompress", &s(&arc)]);
    let restored = harness::parse_sequence(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(restored.len(), 500);

    let sweep = run(&["sweep", "--n", "400", "--k", "2", "--alphas", "3,2", "--seeds", "0..2", "--r_mult", "2"]);
    let text = String::from_utf8(sweep.stdout).unwrap();
    assert_eq!(text.lines().next(), Some(harness::SWEEP_HEADER));
    assert_eq!(text.lines().count(), 5);

    let trace = run(&["trace", "--n", "300", "--k", "2", "--r_mult", "2", "--trace_stride", "100"]);
    let text = String::from_utf8(trace.stdout).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((300.0 * (v[1] + 4.0 * v[2]) - v[3]).abs() <= 1e-6, "{line}");
    }

    run(&["oracle", "--n", "8", "--k", "1", "--alphas", "1", "--seeds", "0..2", "--schedule", "logarithmic", "--t0", "2"]);
    let denoise = run(&["denoise", "--source", "bsms:0.1", "--n", "2000", "--k", "3", "--prefix", "1000"]);
    assert!(String::from_utf8(denoise.stdout).unwrap().lines().count() >= 2);
}

#[test]
fn archives_from_other_versions_are_rejected() {
    let cfg = config(&[("n", "200"), ("k", "2")]);
    let (mut bytes, _) = harness::compress(&cfg).unwrap();
    bytes[4] = 9;
    let err = harness::decompress(&bytes).unwrap_err();
    assert!(err.to_string().contains('9'), "{err}");
    let dir = tempfile::tempdir().unwrap();
    assert!(read_input_file(&dir.path().join("missing")).is_err());
}
