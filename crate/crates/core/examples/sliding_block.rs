//! Searches sliding-block codes with window 3 and checks against enumerating all 256 of them.

use mcmc_lossy::anneal::Schedule;
use mcmc_lossy::context::ContextShape;
use mcmc_lossy::energy::EnergySpec;
use mcmc_lossy::sliding::{sb_anneal, sb_exhaustive_search, SbAnnealConfig};
use mcmc_lossy::sources::{generate, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    let x = generate(&SourceSpec {
        kind: SourceKind::Bsms(0.2),
        n: 2000,
        seed: 4,
    })?;
    let spec = EnergySpec::hamming(2.0, ContextShape::cyclic(2), 2)?;
    let best = sb_exhaustive_search(&x, 1, &spec)?;
    let found = sb_anneal(
        &x,
        &SbAnnealConfig {
            k_f: 1,
            energy: spec,
            schedule: Schedule::geometric(0.005, 0.98, 100)?,
            iterations: 100_000,
            seed: 4,
            init: None,
        },
    )?;
    println!("window  enumerated  annealed");
    for w in 0..8 {
        println!("  {w:03b}       {}          {}", best.code.get(w), found.code.get(w));
    }
    println!("energy: enumerated {:.3}, annealed {:.3}", best.energy, found.energy);
    println!("annealed code: D = {:.4}, H_2 = {:.4}", found.distortion, found.hk_bits);
    Ok(())
}
