// The computed FRW-1 solution satisfies the weak form against bump test
// functions, with residuals vanishing under refinement.
//
// ```bash
// cargo run --release --example weak_residual -- 1024
// ```

use grshock::diagnostics;
use grshock::experiments;
use std::error::Error;

pub fn run_example(n_max: usize) -> Result<(), Box<dyn Error>> {
    let tests = experiments::standard_test_functions();
    let ns: Vec<usize> = std::iter::successors(Some(64), |&n| Some(2 * n)).take_while(|&n| n <= n_max).collect();
    let mut cols = vec![vec![]; tests.len()];
    for &n in &ns {
        let r = experiments::frw1_weak_residuals(n, &tests)?;
        println!("n = {n:>5}: {}", r.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join("  "));
        for (c, x) in cols.iter_mut().zip(r) {
            c.push(x.abs());
        }
    }
    for (k, c) in cols.iter().enumerate() {
        let rates: Vec<String> = diagnostics::convergence_rates(c).iter().map(|r| format!("{r:.2}")).collect();
        println!("test function {} rates: {}", k + 1, rates.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(512), |s| s.parse())?;
    run_example(n)
}
