// Drives a run from a TOML configuration and reads the last snapshot back.
//
// ```bash
// cargo run --release --example config_run
// ```

use grshock::{config, output, run};
use std::error::Error;

pub fn run_example(n: usize) -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("grshock-config-run-{}", std::process::id()));
    let text = format!(
        "model = \"frw1_tov\"\nn = {n}\nduration = 0.5\nsnapshot_every = 20\noutput_dir = {:?}\n",
        dir.display().to_string()
    );
    let cfg = config::parse_config_str(&text)?;
    let report = run::run_experiment(&cfg)?;
    let m = &report.manifest;
    println!("{:?} after {} steps; {} snapshots", m.summary.stop, m.summary.steps, m.snapshots.len());
    let last = m.snapshots.last().expect("final snapshot");
    let rows = output::read_snapshot(&std::fs::read_to_string(dir.join(&last.file))?)?;
    let top = rows.iter().max_by(|a, b| a.mu().total_cmp(&b.mu())).expect("non-empty");
    println!("{} rows at t = {:.4}; mu_max {:.4} at r = {:.4}", rows.len(), last.t_bar, top.mu(), top.x);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(1024)
}
