//! LZ78 container round trip and the enumerative code length of a sequence.

use mcmc_lossy::context::{build_counts, ContextShape};
use mcmc_lossy::lossless::{enumerative_header, enumerative_length, lz78_decode, lz78_encode, lz78_length, Lz78Parse};
use mcmc_lossy::sources::{generate, SourceKind, SourceSpec};

fn main() -> mcmc_lossy::Result<()> {
    let n = 50_000;
    for kind in [SourceKind::Bernoulli(0.5), SourceKind::Bernoulli(0.1), SourceKind::Bsms(0.05)] {
        let y = generate(&SourceSpec { kind, n, seed: 9 })?;
        let bytes = lz78_encode(&y, 2)?;
        assert_eq!(lz78_decode(&bytes, 2)?, y);
        let phrases = Lz78Parse::new(&y, 2)?.phrase_count();
        let h4 = build_counts(&y, 2, ContextShape::linear(4))?.conditional_entropy()?;
        println!(
            "{kind:?}: {phrases} phrases, LZ78 {:.4} bits/symbol ({} bytes), enumerative k=4 {:.4}, H_4 {h4:.4}",
            lz78_length(&y, 2)? as f64 / n as f64,
            bytes.len(),
            enumerative_length(&y, 4, 2)? / n as f64,
        );
    }
    println!("k=4 header bound: {:.0} bits", enumerative_header(n, 4, 2));
    Ok(())
}
