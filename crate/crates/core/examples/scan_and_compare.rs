//! Drive a radius scan from a job file and compare with the bundled tables.
//!
//! Usage: `cargo run --release --example scan_and_compare -- [out_dir]`

use cavity_ks::runner::{parse_config, scan, write_scan};

const JOB: &str = "
[system]
Z = 3
N = 2
term = 1s2_1S

[grid]
n_r = 300
L = 1

[run]
mode = x_only, xc_wigner
rc = 0.5, 1, 2, inf
reference = bundled
";

fn main() -> cavity_ks::Result<()> {
    let config = parse_config(JOB)?;
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcome = scan(&config, jobs)?;
    if let Some(report) = &outcome.comparison {
        print!("{}", report.to_csv());
    }
    if let Some(dir) = std::env::args().nth(1) {
        for p in write_scan(std::path::Path::new(&dir), &outcome)? {
            println!("wrote {}", p.display());
        }
    }
    println!("exit code {}", outcome.exit_code());
    Ok(())
}
