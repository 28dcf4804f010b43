//! Ground-state energy of helium under compression, with and without correlation.
//!
//! Usage: `cargo run --release --example ground_state -- [Z] [term]`

use cavity_ks::config::Term;
use cavity_ks::grid::GridSpec;
use cavity_ks::scf::{term_energy, Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    let mut args = std::env::args().skip(1);
    let z: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let term = Term::parse(&args.next().unwrap_or_else(|| "1s2_1S".into()))?;
    let options = ScfOptions::default();

    println!("Z = {z}, {term}");
    println!("{:>6} {:>12} {:>12} {:>12}", "r_c", "X-only", "XC-Wigner", "XC-LYP");
    for r_c in [0.5, 1.0, 2.0, 5.0, 40.0] {
        print!("{r_c:>6}");
        for mode in Mode::ALL {
            match term_energy(z, &term, GridSpec::with_radius(r_c), mode, &options) {
                Ok(t) => print!(" {:>12.6}", t.total()),
                Err(e) => print!(" {:>12}", format!("({e})")),
            }
        }
        println!();
    }

    let t = term_energy(z, &term, GridSpec::with_radius(1.0), Mode::XOnly, &options)?;
    let e = t.energy;
    println!("\nr_c = 1, X-only: converged in {} iterations", t.scf.iterations);
    println!("  T = {:.6}  V_en = {:.6}  E_H = {:.6}  E_x = {:.6}  total = {:.6}", e.kinetic, e.nuclear, e.hartree, e.exchange, e.total);
    for o in &t.scf.orbitals {
        println!("  eps({}{} {:?}) = {:.6}", o.n, cavity_ks::config::l_letter(o.l), o.spin, o.eps);
    }
    Ok(())
}
