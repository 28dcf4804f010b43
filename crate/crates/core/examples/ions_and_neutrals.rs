//! Two-electron ions and the open-shell neutrals Li and Be in a cavity.
//!
//! Usage: `cargo run --release --example ions_and_neutrals`

use cavity_ks::config::Term;
use cavity_ks::grid::GridSpec;
use cavity_ks::runner::system_name;
use cavity_ks::scf::{term_energy, Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    let options = ScfOptions::default();
    let systems = [(3, "1s2_1S"), (4, "1s2_1S"), (3, "1s2.2s_2S"), (4, "1s2.2s2_1S")];
    println!("{:>6} {:>10} {:>6} {:>12} {:>12}", "system", "term", "r_c", "X-only", "XC-Wigner");
    for (z, label) in systems {
        let term = Term::parse(label)?;
        for r_c in [1.0, 2.0, 10.0] {
            let spec = GridSpec::with_radius(r_c);
            let x = term_energy(z as f64, &term, spec, Mode::XOnly, &options)?;
            let w = term_energy(z as f64, &term, spec, Mode::XcWigner, &options)?;
            println!("{:>6} {label:>10} {r_c:>6} {:>12.6} {:>12.6}", system_name(z, term.n_electrons()), x.total(), w.total());
        }
    }
    Ok(())
}
