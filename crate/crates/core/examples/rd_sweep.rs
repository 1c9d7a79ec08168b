//! Slope sweep on a Bernoulli source through the experiment harness, printed
//! next to the rate-distortion curve.

use mcmc_lossy::config::ExperimentConfig;
use mcmc_lossy::harness::{average_by_alpha, run_sweep, write_sweep_csv};
use mcmc_lossy::sources::rd_bernoulli;

fn main() -> mcmc_lossy::Result<()> {
    let cfg = ExperimentConfig::parse(
        "mode = block\n\
         source = bernoulli:0.4\n\
         n = 5000\n\
         k = 7\n\
         alphas = 4.0:-0.5:2.0\n\
         seeds = 0..3\n\
         warm_start = true\n",
    )?;
    let rows = average_by_alpha(&run_sweep(&cfg)?);
    write_sweep_csv(&rows, std::io::stdout().lock())?;
    for r in &rows {
        println!("alpha {:.1}: H_k {:.4} vs R(D) {:.4}", r.alpha, r.hk_bits, rd_bernoulli(0.4, r.distortion)?);
    }
    Ok(())
}
