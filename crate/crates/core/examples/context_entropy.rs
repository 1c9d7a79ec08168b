//! Conditional empirical entropy of a sequence, and how a single flip moves it.

use mcmc_lossy::context::{build_counts, ContextShape};
use mcmc_lossy::sources::{generate, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    let mut y = generate(&SourceSpec {
        kind: SourceKind::Bsms(0.1),
        n: 5000,
        seed: 3,
    })?;
    for k in 0..=4 {
        let h = build_counts(&y, 2, ContextShape::linear(k))?.conditional_entropy()?;
        println!("H_{k} = {h:.4} bits");
    }

    let mut cm = build_counts(&y, 2, ContextShape::linear(3))?;
    let before = cm.conditional_entropy()?;
    let b = 1 - y[2500];
    let delta = cm.apply_flip(&mut y, 2500, b)?;
    let rebuilt = build_counts(&y, 2, ContextShape::linear(3))?.conditional_entropy()?;
    println!("flip at 2500: incremental {delta:+.3e}, rebuild {:+.3e}", rebuilt - before);
    println!("{} contexts in use", cm.num_contexts());
    Ok(())
}
