//! Work-function exchange and Hartree potentials of He states at a few radii.
//!
//! Usage: `cargo run --release --example potentials`

use cavity_ks::config::Term;
use cavity_ks::eigen::Spin;
use cavity_ks::grid::GridSpec;
use cavity_ks::scf::{term_energy, Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    for label in ["1s2_1S", "1s2s_3S"] {
        let term = Term::parse(label)?;
        for r_c in [1.0, 4.0, 40.0] {
            let t = term_energy(2.0, &term, GridSpec::with_radius(r_c), Mode::XOnly, &ScfOptions::default())?;
            let (g, p) = (&t.scf.grid, &t.scf.potentials);
            println!("He {label} r_c = {r_c}");
            println!("  {:>8} {:>12} {:>12}", "r", "v_x(up)", "v_H");
            for r in [0.1, 0.5, 1.0, 2.0, 4.0] {
                if r < r_c {
                    let vx = g.interpolate(&p.v_x[Spin::Up.index()], r);
                    println!("  {r:>8} {vx:>12.6} {:>12.6}", g.interpolate(&p.v_h, r));
                }
            }
        }
    }
    Ok(())
}
