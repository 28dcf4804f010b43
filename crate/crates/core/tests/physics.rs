//! Whole-solver behaviour: convergence, trends, determinism and asymptotics.

use std::f64::consts::PI;

use cavity_ks::config::{Configuration, Term};
use cavity_ks::grid::{GridSpec, RadialGrid};
use cavity_ks::eigen::solve_channel;
use cavity_ks::observables::{MomentSet, Normalization};
use cavity_ks::scf::{scf_solve, Mode, ScfResult};

fn he(spec: GridSpec, mode: Mode) -> ScfResult {
    let c = Configuration::high_spin(2.0, &Term::parse("1s2_1S").unwrap()).unwrap();
    scf_solve(&c, spec, mode).unwrap()
}

#[test]
fn collocation_converges_spectrally() {
    let err = |n_r: usize| {
        let g = RadialGrid::new(GridSpec::new(n_r, 1.0, 1.0).unwrap()).unwrap();
        let eps = solve_channel(&vec![0.0; g.len()], &g, 0, 1).unwrap()[0].eps;
        (eps - PI * PI / 2.0).abs().max(f64::MIN_POSITIVE)
    };
    let (coarse, fine) = (err(16), err(64));
    assert!(coarse / fine >= 1e4 || fine < 1e-12 * PI * PI, "n_r=16: {coarse:.2e}, n_r=64: {fine:.2e}");
}

#[test]
fn ground_state_energy_falls_as_the_cavity_grows() {
    let e: Vec<f64> = [0.5, 1.0, 2.0, 3.0, 5.0].iter().map(|&r| he(GridSpec::with_radius(r), Mode::XOnly).energy.total).collect();
    assert!(e.windows(2).all(|p| p[1] < p[0]), "{e:?}");
}

#[test]
fn repeated_runs_are_bit_identical() {
    for mode in [Mode::XOnly, Mode::XcLyp] {
        let a = he(GridSpec::with_radius(1.5), mode);
        let b = he(GridSpec::with_radius(1.5), mode);
        assert_eq!(a.history, b.history);
        assert_eq!(a.energy.total.to_bits(), b.energy.total.to_bits());
    }
}

#[test]
fn moments_are_converged_in_the_grid() {
    for r_c in [1.0, 5.0] {
        let m = |n_r: usize| {
            let r = he(GridSpec::new(n_r, 1.0, r_c).unwrap(), Mode::XOnly);
            MomentSet::compute(&r.density, &r.grid, Normalization::Electrons)
        };
        let (a, b) = (m(200), m(300));
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-6 * y.abs(), "r_c={r_c}: {x} vs {y}");
        }
    }
}

#[test]
fn free_helium_moments() {
    let r = he(GridSpec::free(), Mode::XOnly);
    let m = MomentSet::compute(&r.density, &r.grid, Normalization::Electrons);
    for (k, expected) in [(-1, 3.37), (1, 1.851), (2, 2.362)] {
        let v = m.get(k).unwrap();
        assert!((v - expected).abs() < 1e-2, "<r^{k}> = {v}");
    }
}

#[test]
fn exchange_potential_has_the_coulomb_tail() {
    let r = he(GridSpec::free(), Mode::XOnly);
    let g = &r.grid;
    let vx = &r.potentials.v_x[0];
    // outside the density the hole is a unit negative charge
    for j in 0..g.len() {
        if g.r[j] > 12.0 {
            assert!((g.r[j] * vx[j] + 1.0).abs() < 1e-6, "r={} r*v_x={}", g.r[j], g.r[j] * vx[j]);
        }
    }
    // beyond the bulk it rises monotonically toward zero
    for j in 1..g.len() {
        if g.r[j - 1] > 2.0 {
            assert!(vx[j] - vx[j - 1] > -1e-8, "dip at r={}", g.r[j]);
            assert!(vx[j] < 0.0);
        }
    }
}
