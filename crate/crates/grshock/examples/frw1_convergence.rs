// First-order convergence of the scheme on the FRW-1 expanding universe.
//
// ```bash
// cargo run --release --example frw1_convergence -- 2048
// ```

use grshock::diagnostics;
use grshock::experiments::{self, CONT_T0};
use grshock::models::ModelVariant;
use grshock::relfluid::EosParams;
use std::error::Error;

pub fn run_example(n_max: usize) -> Result<(), Box<dyn Error>> {
    let ns: Vec<usize> = std::iter::successors(Some(64), |&n| Some(2 * n)).take_while(|&n| n <= n_max).collect();
    let errs = experiments::convergence_ladder(ModelVariant::Frw1, EosParams::default(), &ns, 1.0)?;
    println!("FRW-1 on [3, 7] from t = {CONT_T0} to {}", CONT_T0 + 1.0);
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "n", "rho", "v", "A", "B");
    for e in &errs {
        println!("{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", e.n, e.rho, e.v, e.a, e.b);
    }
    for (name, k) in [("rho", 0), ("v", 1), ("A", 2), ("B", 3)] {
        let col: Vec<f64> = errs.iter().map(|e| e.as_array()[k]).collect();
        let rates: Vec<String> = diagnostics::convergence_rates(&col).iter().map(|r| format!("{r:.3}")).collect();
        println!("{name} rates: {}", rates.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(1024), |s| s.parse())?;
    run_example(n)
}
