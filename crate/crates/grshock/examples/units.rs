// Converts geometric quantities (G = c = 1, lengths in solar masses) to
// kilometres, seconds and solar masses per cubic kilometre.
//
// ```bash
// cargo run --example units
// ```

use grshock::models::units::{self, Target};
use grshock::models::{self, ModelVariant, ModelSpec};
use grshock::relfluid::EosParams;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = models::match_models(&ModelSpec::new(
        ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false },
        EosParams::default(),
    ))?;
    println!("interface radius {} = {:.3} km", m.r0, units::convert(m.r0, Target::LengthKm));
    println!("start time {:.4} = {:.4e} s", m.t0, units::convert(m.t0, Target::TimeSec));
    let rho = models::tov_state(m.r0, m.b0, &EosParams::default()).fluid.rho;
    println!("TOV density {rho:.4e} = {:.4e} Msun/km^3", units::convert(rho, Target::DensityMsunPerKm3));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
