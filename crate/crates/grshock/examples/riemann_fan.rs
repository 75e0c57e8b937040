// Solves a special-relativistic Riemann problem and prints the fan.
//
// ```bash
// cargo run --example riemann_fan
// ```

use grshock::relfluid::{EosParams, FluidState};
use grshock::riemann::{self, Wave};
use std::error::Error;

pub fn run_example(samples: usize) -> Result<(), Box<dyn Error>> {
    // Units with c = 1000 and sound speed 1/3.
    let c: f64 = 1000.0;
    let eos = EosParams::new((1.0 / 3.0 / c).powi(2));
    let ul = FluidState::new(1e8, 0.3 / c);
    let ur = FluidState::new(1e9, 0.6 / c);
    let fan = riemann::solve_middle_state(ul, ur, &eos, riemann::DEFAULT_EPS)?;
    let shown = fan.report(c);
    println!("region {:?}", shown.region);
    println!("middle rho = {:.6e}, v = {:.6}", shown.middle.rho, shown.middle.v);
    for (k, w) in [shown.wave1, shown.wave2].iter().enumerate() {
        match w {
            Wave::Shock { speed, .. } => println!("wave {}: shock, speed {speed:.5}", k + 1),
            Wave::Rarefaction { head_speed, tail_speed, .. } => {
                println!("wave {}: rarefaction, head {head_speed:.5}, tail {tail_speed:.5}", k + 1)
            }
        }
    }
    println!("invariant mismatch {:.2e}", riemann::recomposition_error(&fan, &eos));
    println!("xi,rho,v");
    for k in 0..samples {
        let xi = -1.0 + 2.0 * k as f64 / (samples - 1) as f64;
        let f = fan.sample(xi / c);
        println!("{xi:.4},{:.6e},{:.6}", f.rho, f.v * c);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(11)
}
