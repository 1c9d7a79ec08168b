//! Lossy coding of a binary image with a two-dimensional causal context,
//! written out as an archive and as a PBM.

use mcmc_lossy::archive::Archive;
use mcmc_lossy::config::ExperimentConfig;
use mcmc_lossy::harness::{code, Input, WarmStart};
use mcmc_lossy::pbm::{Image2D, PbmFormat};
use mcmc_lossy::Symbol;

fn main() -> mcmc_lossy::Result<()> {
    let (w, h) = (128, 96);
    let pixels: Vec<Symbol> = (0..w * h)
        .map(|i| {
            let (r, c) = ((i / w) as f64, (i % w) as f64);
            let ring = (((r - 48.0).hypot(c - 64.0) / 9.0) as usize).is_multiple_of(2);
            let speck = (i * 2654435761) % 97 == 0;
            (ring ^ speck) as Symbol
        })
        .collect();
    let input = Input {
        symbols: pixels,
        alphabet: 2,
        dims: Some((w, h)),
    };
    let mut cfg = ExperimentConfig::default();
    cfg.set("context", "causal6")?;
    let dir = std::env::temp_dir();
    for alpha in [6.0, 3.0, 1.5] {
        let out = code(&cfg, &input, alpha, 1, WarmStart::Cold)?;
        let bytes = Archive {
            alphabet: 2,
            k: out.k,
            dims: Some((w, h)),
            symbols: out.reconstruction.clone(),
        }
        .encode()?;
        let path = dir.join(format!("image_coding_alpha{alpha}.pbm"));
        Image2D::new(w, h, out.reconstruction)?.save(&path, PbmFormat::Raw)?;
        println!(
            "alpha {alpha}: D = {:.4}, H_6 = {:.4}, archive {} bytes, wrote {}",
            out.distortion,
            out.hk_bits,
            bytes.len(),
            path.display()
        );
    }
    println!("raw PBM payload is {} bytes", w * h / 8);
    Ok(())
}
