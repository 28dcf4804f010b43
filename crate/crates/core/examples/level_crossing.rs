//! Locate the radius where 1s2p ³P drops below 1s2s ³S.
//!
//! Usage: `cargo run --release --example level_crossing`

use cavity_ks::config::Term;
use cavity_ks::grid::GridSpec;
use cavity_ks::scf::{term_energy, EnergyComponents, Mode, ScfOptions};

fn difference(r_c: f64) -> cavity_ks::Result<(EnergyComponents, EnergyComponents)> {
    let options = ScfOptions::default();
    let spec = GridSpec::with_radius(r_c);
    let p = term_energy(2.0, &Term::parse("1s2p_3P")?, spec, Mode::XOnly, &options)?;
    let s = term_energy(2.0, &Term::parse("1s2s_3S")?, spec, Mode::XOnly, &options)?;
    Ok((p.energy, s.energy))
}

fn main() -> cavity_ks::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "r_c", "dE", "dT", "dV_en", "dV_ee");
    for r_c in [1.0, 2.5, 4.4, 4.5, 20.0] {
        let (p, s) = difference(r_c)?;
        println!(
            "{r_c:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            p.total - s.total,
            p.kinetic - s.kinetic,
            p.nuclear - s.nuclear,
            p.electron_electron() - s.electron_electron()
        );
    }
    let (mut lo, mut hi) = (4.0, 5.0);
    let gap = |r| difference(r).map(|(p, s)| p.total - s.total);
    let mut f_lo = gap(lo)?;
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        let f = gap(mid)?;
        if f.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    println!("crossing at r_c = {:.3}", 0.5 * (lo + hi));
    Ok(())
}
