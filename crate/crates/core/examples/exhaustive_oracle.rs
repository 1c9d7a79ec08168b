//! Runs the block annealer on tiny instances where every reconstruction can be enumerated.

use mcmc_lossy::anneal::{anneal, exhaustive_search, AnnealerConfig, Init, Schedule};
use mcmc_lossy::context::ContextShape;
use mcmc_lossy::energy::EnergySpec;
use mcmc_lossy::sources::{generate, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    for seed in 0..5 {
        let x = generate(&SourceSpec {
            kind: SourceKind::Bernoulli(0.4),
            n: 10,
            seed,
        })?;
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2)?;
        let oracle = exhaustive_search(&x, &spec)?;
        let out = anneal(
            &x,
            &AnnealerConfig {
                energy: spec,
                iterations: 100_000,
                seed,
                init: Init::SourceCopy,
                schedule: Schedule::logarithmic(2.0, 1)?,
                trace_stride: None,
            },
        )?;
        println!(
            "seed {seed}: x = {x:?}\n  oracle E = {:.4} at {:?}\n  anneal E = {:.4} at {:?}",
            oracle.energy, oracle.minimizer, out.energy, out.reconstruction
        );
    }
    Ok(())
}
