// FRW-1 matched to TOV: the interface splits into two shocks bounding an
// over-dense region. Tracks light and sound cones and the detected borders.
//
// ```bash
// cargo run --release --example matched_shock -- 2048
// ```

use grshock::diagnostics;
use grshock::experiments;
use std::error::Error;

pub fn run_example(n: usize) -> Result<(), Box<dyn Error>> {
    let out = experiments::forward_frw1_tov(n)?;
    let m = out.state.setup.matching.expect("matched model");
    println!("start time {:.6}, interface r0 = {}", m.t0, m.r0);
    println!("stopped: {:?} at t = {:.6}", out.summary.stop, out.t_end);
    let c = out.cones;
    println!(
        "light cone [{:.4}, {:.4}], sound cone [{:.4}, {:.4}]",
        c.light_left, c.light_right, c.sound_left, c.sound_right
    );
    println!("FRW border {:?}, TOV border {:?}", out.frw_border, out.tov_border);
    println!(
        "mu_max {:.4} at r = {:.4}; metric derivative jump {:.3} (shock if > {})",
        out.mu_max,
        out.mu_radius,
        diagnostics::metric_derivative_jump(&out.state),
        diagnostics::SHOCK_JUMP_THRESHOLD
    );
    let peak = out.state.fluid[1..=out.state.n].iter().map(|f| f.rho).fold(0.0, f64::max);
    println!("peak density {peak:.4e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map_or(Ok(1024), |s| s.parse())?;
    run_example(n)
}
