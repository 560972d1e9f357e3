//! A parameter sweep driven by a run configuration, as the `bosetopo`
//! binary does it, written to CSV on standard output.
//!
//! ```text
//! cargo run --example sweep
//! ```

use bosetopo::cli::{run, write_csv, RunConfig};

const CONFIG: &str = r#"
task = "sweep"
jobs = 2

[model]
name = "PhotoMagnonicRWA"
N = 12
n_offset = 3
parameters = { omega_a = 0.0, omega_m = 0.0, t = [0.0, 25e6], g = [0.0, 100e6] }
perturbations = [{ type = "MagnonHopping", strength = 0.0 }]

[sweep]
parameter = "perturbations[0].strength"
start = 0.0
stop = 2e8
steps = 9
"#;

pub fn run_example() -> bosetopo::Result<()> {
    let config = RunConfig::from_toml(CONFIG)?;
    let out = run(&config)?;
    for line in &out.summary {
        println!("{line}");
    }
    write_csv(std::io::stdout().lock(), &config, &out.table)
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
