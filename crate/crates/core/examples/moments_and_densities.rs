//! Density moments and radial distributions; writes a plotting CSV.
//!
//! Usage: `cargo run --release --example moments_and_densities -- [out.csv]`

use cavity_ks::config::Term;
use cavity_ks::grid::GridSpec;
use cavity_ks::observables::{orbital_distribution, peak, profiles_csv, resample, RadialProfile, MomentSet, Normalization, MOMENT_ORDERS, PLOT_POINTS};
use cavity_ks::scf::{term_energy, Mode, ScfOptions};

fn main() -> cavity_ks::Result<()> {
    let out = std::env::args().nth(1);
    let options = ScfOptions::default();
    for label in ["1s2_1S", "1s2s_3S"] {
        let term = Term::parse(label)?;
        println!("He {label}, X-only");
        print!("{:>6}", "r_c");
        for k in MOMENT_ORDERS {
            print!(" {:>11}", format!("<r^{k}>"));
        }
        println!();
        for r_c in [0.5, 1.0, 4.0, 8.0] {
            let t = term_energy(2.0, &term, GridSpec::with_radius(r_c), Mode::XOnly, &options)?;
            let m = MomentSet::compute(&t.scf.density, &t.scf.grid, Normalization::Electrons);
            print!("{r_c:>6}");
            for v in m.values {
                print!(" {v:>11.4}");
            }
            println!();
        }
        println!();
    }

    let term = Term::parse("1s2s_3S")?;
    let mut profiles = Vec::new();
    for r_c in [1.0, 3.0] {
        let t = term_energy(2.0, &term, GridSpec::with_radius(r_c), Mode::XOnly, &options)?;
        for o in &t.scf.orbitals {
            let nodal = orbital_distribution(o, &t.scf.grid);
            let (r_max, d_max) = peak(&resample(&nodal, &t.scf.grid, PLOT_POINTS));
            println!("r_c = {r_c}: {} peaks at r = {r_max:.3} (D = {d_max:.3})", nodal.label);
            // common radial axis for both cavities; zero outside the wall
            let r: Vec<f64> = (0..PLOT_POINTS).map(|i| 3.0 * i as f64 / (PLOT_POINTS - 1) as f64).collect();
            let value = r.iter().map(|&x| if x <= r_c { t.scf.grid.interpolate(&nodal.value, x) } else { 0.0 }).collect();
            profiles.push(RadialProfile { label: format!("{}_rc{r_c}", nodal.label), r, value });
        }
    }
    if let Some(path) = out {
        std::fs::write(&path, profiles_csv(&profiles))?;
        println!("wrote {path}");
    }
    Ok(())
}
