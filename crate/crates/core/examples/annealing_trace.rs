//! Entropy, distortion and energy along one annealing run.

use mcmc_lossy::anneal::RunTrace;
use mcmc_lossy::config::ExperimentConfig;
use mcmc_lossy::harness::run_trace;

fn main() -> mcmc_lossy::Result<()> {
    let mut cfg = ExperimentConfig::default();
    for (key, value) in [
        ("source", "bernoulli:0.2"),
        ("n", "20000"),
        ("k", "9"),
        ("alphas", "4"),
        ("gamma", "0.7"),
        ("trace_stride", "5000"),
    ] {
        cfg.set(key, value)?;
    }
    let trace: RunTrace = run_trace(&cfg)?;
    trace.write_csv(std::io::stdout().lock())?;
    let (first, last) = (&trace.samples[0], trace.samples.last().unwrap());
    eprintln!("H_k {:.4} -> {:.4}, d_n {:.4} -> {:.4}", first.hk_bits, last.hk_bits, first.distortion, last.distortion);
    Ok(())
}
