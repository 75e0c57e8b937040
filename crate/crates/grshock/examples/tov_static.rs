// Holds the static TOV star for one time unit and reports how far it drifts.
//
// ```bash
// cargo run --release --example tov_static -- 2048
// ```

use grshock::experiments;
use grshock::relfluid::EosParams;
use std::error::Error;

pub fn run_example(n_max: usize) -> Result<(), Box<dyn Error>> {
    let mut n = 256;
    println!("{:>6} {:>12} {:>12} {:>12}", "n", "rho", "B", "M");
    while n <= n_max {
        let d = experiments::tov_drift(EosParams::default(), n, 1.0)?;
        println!("{n:>6} {:>12.4e} {:>12.4e} {:>12.4e}", d.rho, d.b, d.m);
        n *= 2;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(1024), |s| s.parse())?;
    run_example(n)
}
