// The FRW-2/TOV run agrees with the FRW-1/TOV run once time is remapped and
// B is rescaled, and the difference shrinks under refinement.
//
// ```bash
// cargo run --release --example covariance -- 1024
// ```

use grshock::experiments;
use std::error::Error;

pub fn run_example(n_max: usize) -> Result<(), Box<dyn Error>> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>12} {:>12}", "n", "t1", "t2", "B scale", "predicted", "rho diff", "v diff");
    let mut n = 64;
    while n <= n_max {
        let r = experiments::covariance_row(n)?;
        println!(
            "{n:>6} {:>10.4} {:>10.4} {:>10.5} {:>10.5} {:>12.4e} {:>12.4e}",
            r.t1_end, r.t2_end, r.b_scale, r.b_scale_expected, r.rho_error, r.v_error
        );
        n *= 2;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(512), |s| s.parse())?;
    run_example(n)
}
