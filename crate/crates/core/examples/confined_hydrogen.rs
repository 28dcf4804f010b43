//! One-electron spectrum of hydrogen in a hard-walled sphere.
//!
//! Usage: `cargo run --example confined_hydrogen -- [r_c ...]`

use cavity_ks::config::l_letter;
use cavity_ks::eigen::solve_channel;
use cavity_ks::grid::{GridSpec, RadialGrid};

fn main() -> cavity_ks::Result<()> {
    let radii: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let radii = if radii.is_empty() { vec![0.5, 1.0, 2.0, 5.0, 20.0] } else { radii };
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "r_c", "1s", "2s", "2p", "3d");
    for r_c in radii {
        let grid = RadialGrid::new(GridSpec::with_radius(r_c))?;
        let v: Vec<f64> = grid.r.iter().map(|&r| if r > 0.0 { -1.0 / r } else { 0.0 }).collect();
        let mut row = Vec::new();
        for (n, l) in [(1, 0), (2, 0), (2, 1), (3, 2)] {
            let states = solve_channel(&v, &grid, l, n - l)?;
            row.push((format!("{n}{}", l_letter(l)), states[n - l - 1].eps));
        }
        print!("{r_c:>6}");
        for (_, e) in &row {
            print!(" {e:>14.8}");
        }
        println!();
    }
    println!("free atom: 1s = -0.5, 2s = 2p = -0.125, 3d = -0.0555…");
    Ok(())
}
