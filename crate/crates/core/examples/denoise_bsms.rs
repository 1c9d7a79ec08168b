//! Denoises a Markov source seen through a binary symmetric channel and
//! compares with the optimal forward-backward smoother.

use mcmc_lossy::anneal::SchedulePlan;
use mcmc_lossy::context::ContextShape;
use mcmc_lossy::denoise::{bayes_fb, denoise, error_rate, DenoiseConfig, DerandWindow, NoiseModel, SlopeSearch};
use mcmc_lossy::sources::{bsc, generate, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    let (p, delta) = (0.1, 0.1);
    let x = generate(&SourceSpec {
        kind: SourceKind::Bsms(p),
        n: 10_000,
        seed: 2,
    })?;
    let z = bsc(&x, delta, 2)?;
    let config = DenoiseConfig {
        noise: NoiseModel::bsc(delta)?,
        shape: ContextShape::linear(7),
        schedule: SchedulePlan::geometric(1.0, 0.75),
        iterations_per_symbol: 10,
        seed: 2,
        slope: SlopeSearch::default(),
        alpha: None,
        window: DerandWindow::Symmetric { m: 4 },
    };
    let out = denoise(&z, &config)?;
    if let Some(search) = &out.search {
        for probe in &search.probes {
            println!("probe alpha {:.3} -> distortion {:.4} (target {:.4})", probe.alpha, probe.distortion, search.target);
        }
    }
    println!("noisy BER            {:.4}", error_rate(&x, &z)?);
    println!("denoised BER         {:.4} (alpha {:.3})", error_rate(&x, &out.estimate)?, out.alpha);
    println!("forward-backward BER {:.4}", error_rate(&x, &bayes_fb(&z, p, delta)?)?);
    Ok(())
}
