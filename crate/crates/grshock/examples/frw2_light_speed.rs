// The light speed √(AB) of the FRW-2 chart grows in time but stays uniform in space.
//
// ```bash
// cargo run --release --example frw2_light_speed
// ```

use grshock::experiments;
use std::error::Error;

pub fn run_example(n: usize) -> Result<(), Box<dyn Error>> {
    let hist = experiments::frw2_light_speed_history(n, 1.0)?;
    let stride = (hist.len() / 10).max(1);
    println!("{:>10} {:>12} {:>12}", "t", "min", "max");
    for (t, lo, hi) in hist.iter().step_by(stride).chain(hist.last()) {
        println!("{t:>10.4} {lo:>12.6} {hi:>12.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(512)
}
