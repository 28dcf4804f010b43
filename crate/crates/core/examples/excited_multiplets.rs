//! Triplet and singlet energies of singly excited helium from the diagonal
//! sum rule.
//!
//! Usage: `cargo run --release --example excited_multiplets`

use cavity_ks::grid::GridSpec;
use cavity_ks::scf::{multiplet_energies, Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    let options = ScfOptions::default();
    for family in ["1s2s", "1s2p", "1s3d"] {
        println!("He {family}");
        println!("{:>6} {:>12} {:>12} {:>10}", "r_c", "triplet", "singlet", "splitting");
        for r_c in [1.0, 2.0, 5.0, 10.0] {
            let (t, s) = multiplet_energies(2.0, family, GridSpec::with_radius(r_c), Mode::XOnly, &options)?;
            println!("{r_c:>6} {:>12.6} {:>12.6} {:>10.6}", t.total(), s.total(), s.total() - t.total());
        }
        println!();
    }
    Ok(())
}
