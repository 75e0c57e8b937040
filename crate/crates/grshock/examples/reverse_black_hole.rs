// Time-reversed FRW-1/TOV: inflow piles mass up until 2M/r approaches one.
//
// ```bash
// cargo run --release --example reverse_black_hole -- 2048
// ```

use grshock::experiments;
use std::error::Error;

pub fn run_example(n: usize) -> Result<(), Box<dyn Error>> {
    let out = experiments::reversed_run(n, 0.1, 20.0, 20.0, false)?;
    let hist = &out.run.mu_history;
    let stride = (hist.len() / 12).max(1);
    println!("{:>10} {:>8} {:>8}", "t", "mu_max", "r");
    for (t, mu, r) in hist.iter().step_by(stride) {
        println!("{t:>10.4} {mu:>8.4} {r:>8.4}");
    }
    println!("stopped: {:?}", out.run.summary.stop);
    if let Some((t, mu, r)) = out.at_boundary_hit {
        println!("boundary reached at t = {t:.4}: mu_max = {mu:.4} at r = {r:.4}");
    }
    println!("largest step-to-step drop in mu_max: {:.2e}", out.mu_max_decrease);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(1024), |s| s.parse())?;
    run_example(n)
}
