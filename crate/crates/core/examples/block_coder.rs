//! Quantizes a Bernoulli block at a fixed slope and compares the result with
//! the rate-distortion function.

use mcmc_lossy::anneal::{anneal, AnnealerConfig, Init, Schedule};
use mcmc_lossy::context::ContextShape;
use mcmc_lossy::energy::EnergySpec;
use mcmc_lossy::lossless::{enumerative_length, lz78_length};
use mcmc_lossy::sources::{generate, rd_bernoulli, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    let (n, k, alpha, p) = (10_000, 8, 4.0, 0.2);
    let x = generate(&SourceSpec {
        kind: SourceKind::Bernoulli(p),
        n,
        seed: 1,
    })?;
    let config = AnnealerConfig {
        energy: EnergySpec::hamming(alpha, ContextShape::linear(k), 2)?,
        iterations: 10 * n as u64,
        seed: 1,
        init: Init::SourceCopy,
        schedule: Schedule::geometric(1.0, 0.75, n as u64)?,
        trace_stride: None,
    };
    let out = anneal(&x, &config)?;
    let lz = lz78_length(&out.reconstruction, 2)? as f64 / n as f64;
    let le = enumerative_length(&out.reconstruction, k, 2)? / n as f64;
    println!("alpha {alpha}: D = {:.4}, H_k = {:.4}, LZ78 {lz:.4}, enumerative {le:.4} bits/symbol", out.distortion, out.hk_bits);
    println!("R(D) = {:.4}", rd_bernoulli(p, out.distortion)?);
    Ok(())
}
