//! |E_c| of Wigner and LYP correlation as the cavity shrinks.
//!
//! Usage: `cargo run --release --example correlation_scan`

use cavity_ks::config::Term;
use cavity_ks::grid::GridSpec;
use cavity_ks::observables::{correlation_scan, has_interior_minimum};
use cavity_ks::scf::{Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    let ladder = [40.0, 5.0, 2.0, 1.0, 0.5];
    let term = Term::parse("1s2_1S")?;
    for (z, name) in [(2.0, "He"), (3.0, "Li+"), (4.0, "Be2+")] {
        for mode in [Mode::XcWigner, Mode::XcLyp] {
            println!("{name} {mode}");
            let points = correlation_scan(z, &term, &ladder, mode, GridSpec::free(), &ScfOptions::default());
            let mut abs = Vec::new();
            for p in &points {
                match p {
                    Ok(p) => {
                        println!("  r_c = {:>4}  |E_c| = {:.5}  E - E(X-only) = {:+.5}", p.r_c, p.abs_e_c(), p.gap());
                        abs.push(p.abs_e_c());
                    }
                    Err(e) => println!("  failed: {e}"),
                }
            }
            println!("  interior minimum of |E_c|: {}", has_interior_minimum(&abs));
        }
    }
    Ok(())
}
