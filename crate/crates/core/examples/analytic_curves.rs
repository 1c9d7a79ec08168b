//! Reference curves for the synthetic sources.

use mcmc_lossy::sources::{bernoulli_lagrangian, critical_distortion, rd_bernoulli, slb_bsms};

fn main() -> mcmc_lossy::Result<()> {
    println!("D       R(D) Bern(0.4)   SLB BSMS(0.25)");
    for i in 0..=10 {
        let d = i as f64 * 0.025;
        println!("{d:.3}   {:.4}           {:.4}", rd_bernoulli(0.4, d)?, slb_bsms(0.25, d)?);
    }
    println!("critical distortion of BSMS(0.25): {:.4}", critical_distortion(0.25)?);
    for alpha in [2.0, 3.0, 4.0] {
        println!("min_D R(D) + {alpha} D for Bern(0.4): {:.4}", bernoulli_lagrangian(0.4, alpha, 10_000)?);
    }
    Ok(())
}
