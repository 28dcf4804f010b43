//! Density, Hartree potential and the work-function exchange potential.
//!
//! The exchange potential is the work done against the field of the Fermi
//! hole, integrated inward from the cavity wall. For a central field the hole
//! reduces to radial multipole integrals over pairs of same-spin shells; the
//! two-point density matrix and hole are never formed explicitly.

use std::f64::consts::PI;

use crate::angular::CouplingTable;
use crate::eigen::{Orbital, Spin};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Densities below this value are treated as this value before fractional powers.
pub const DENSITY_FLOOR: f64 = 1e-30;

/// Spherically averaged density and its derivatives on all grid nodes.
#[derive(Debug, Clone)]
pub struct DensityField {
    /// Total density `ρ(r)` in bohr⁻³.
    pub rho: Vec<f64>,
    /// Per-spin densities `[ρ↑, ρ↓]`.
    pub rho_spin: [Vec<f64>; 2],
    /// `dρσ/dr`.
    pub grad_spin: [Vec<f64>; 2],
    /// `∇²ρσ = ρσ'' + 2ρσ'/r`.
    pub lap_spin: [Vec<f64>; 2],
    pub n_elec: f64,
}

impl DensityField {
    pub fn grad(&self) -> Vec<f64> {
        self.grad_spin[0].iter().zip(&self.grad_spin[1]).map(|(a, b)| a + b).collect()
    }

    pub fn lap(&self) -> Vec<f64> {
        self.lap_spin[0].iter().zip(&self.lap_spin[1]).map(|(a, b)| a + b).collect()
    }

    /// `4π r² ρ(r)`, the radial charge distribution.
    pub fn radial_charge(&self, grid: &RadialGrid) -> Vec<f64> {
        self.rho.iter().zip(&grid.r).map(|(p, r)| 4.0 * PI * r * r * p).collect()
    }

    /// `∫ ρ d³r` by grid quadrature.
    pub fn integral(&self, grid: &RadialGrid) -> f64 {
        grid.integrate(&self.radial_charge(grid))
    }

    /// Build a density from per-spin `4π r² ρσ` samples. Used for model densities.
    pub fn from_radial_charge(grid: &RadialGrid, charge_spin: [Vec<f64>; 2], origin: [f64; 2]) -> Self {
        let mut rho_spin = [vec![0.0; grid.len()], vec![0.0; grid.len()]];
        for s in 0..2 {
            for (j, &r) in grid.r.iter().enumerate() {
                rho_spin[s][j] = if r > 0.0 { charge_spin[s][j] / (4.0 * PI * r * r) } else { origin[s] };
            }
        }
        Self::from_spin_densities(grid, rho_spin)
    }

    pub fn from_spin_densities(grid: &RadialGrid, rho_spin: [Vec<f64>; 2]) -> Self {
        let n = grid.len();
        let grad_spin = [grid.derivative(&rho_spin[0]), grid.derivative(&rho_spin[1])];
        let mut lap_spin = [grid.second_derivative(&rho_spin[0]), grid.second_derivative(&rho_spin[1])];
        for s in 0..2 {
            for j in 0..n {
                lap_spin[s][j] += if grid.r[j] > 0.0 {
                    2.0 * grad_spin[s][j] / grid.r[j]
                } else {
                    // ρ'/r → ρ'' only for a smooth origin; the node carries zero weight.
                    2.0 * lap_spin[s][j]
                };
            }
        }
        let rho: Vec<f64> = rho_spin[0].iter().zip(&rho_spin[1]).map(|(a, b)| a + b).collect();
        let charge: Vec<f64> = rho.iter().zip(&grid.r).map(|(p, r)| 4.0 * PI * r * r * p).collect();
        let n_elec = grid.integrate(&charge);
        Self { rho, rho_spin, grad_spin, lap_spin, n_elec }
    }
}

/// `ρσ(r) = Σ occ u²/(4π r²)` for each spin, with the `r → 0` limit taken
/// from `u'(0)`.
pub fn build_density(orbitals: &[Orbital], grid: &RadialGrid, expected_electrons: Option<f64>) -> Result<DensityField> {
    let total: f64 = orbitals.iter().map(|o| o.occupancy).sum();
    if let Some(expected) = expected_electrons {
        if (total - expected).abs() > 1e-12 {
            return Err(Error::OccupancyMismatch { expected, found: total });
        }
    }
    let n = grid.len();
    let mut rho_spin = [vec![0.0; n], vec![0.0; n]];
    for orb in orbitals {
        let s = orb.spin.index();
        let slope = grid.derivative(&orb.u)[0];
        let target = &mut rho_spin[s];
        for j in 1..n - 1 {
            let r = grid.r[j];
            target[j] += orb.occupancy * orb.u[j] * orb.u[j] / (4.0 * PI * r * r);
        }
        if orb.l == 0 {
            target[0] += orb.occupancy * slope * slope / (4.0 * PI);
        }
    }
    Ok(DensityField::from_spin_densities(grid, rho_spin))
}

/// `v_H(r) = Q(r)/r + ∫_r^{r_c} 4π r' ρ dr'`.
pub fn hartree_potential(rho: &DensityField, grid: &RadialGrid) -> Vec<f64> {
    let charge = rho.radial_charge(grid);
    let enclosed = grid.running_integral(&charge);
    let over_r: Vec<f64> = charge.iter().zip(&grid.r).map(|(c, r)| if *r > 0.0 { c / r } else { 0.0 }).collect();
    let outward = grid.running_integral(&over_r);
    let total_out = *outward.last().unwrap();
    grid.r
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let inner = if r > 0.0 { enclosed[j] / r } else { 0.0 };
            inner + (total_out - outward[j])
        })
        .collect()
}

/// `E_H = ½ ∫ ρ v_H d³r`.
pub fn hartree_energy(rho: &DensityField, v_h: &[f64], grid: &RadialGrid) -> f64 {
    let charge = rho.radial_charge(grid);
    0.5 * charge.iter().zip(v_h).zip(&grid.w).map(|((c, v), w)| c * v * w).sum::<f64>()
}

/// Radial multipole integrals of a product `u_i u_j`.
struct PairMultipole {
    /// `∫_0^r u_i u_j r'^L dr'`
    inner: Vec<f64>,
    /// `∫_r^{r_c} u_i u_j r'^{-L-1} dr'`
    outer: Vec<f64>,
}

fn pair_multipole(ui: &[f64], uj: &[f64], big_l: usize, grid: &RadialGrid) -> PairMultipole {
    let n = grid.len();
    let lf = big_l as i32;
    let mut f_in = vec![0.0; n];
    let mut f_out = vec![0.0; n];
    for j in 1..n {
        let r = grid.r[j];
        let p = ui[j] * uj[j];
        f_in[j] = p * r.powi(lf);
        f_out[j] = p / r.powi(lf + 1);
    }
    let mut inner = grid.running_integral(&f_in);
    // near the origin f_in can sit far below the spectral sum's rounding floor
    let local = grid.local_running_integral(&f_in);
    let scale = inner.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for (y, l) in inner.iter_mut().zip(&local) {
        if l.abs() < 1e-6 * scale {
            *y = *l;
        } else {
            break;
        }
    }
    let run_out = grid.running_integral(&f_out);
    let total = *run_out.last().unwrap();
    let outer = run_out.iter().map(|v| total - v).collect();
    PairMultipole { inner, outer }
}

/// One occupied `(n, l)` shell of a spin channel.
#[derive(Debug, Clone, Copy)]
struct ShellRef<'a> {
    l: usize,
    occ: f64,
    u: &'a [f64],
}

fn channel_shells(orbitals: &[Orbital], spin: Spin) -> Vec<ShellRef<'_>> {
    orbitals
        .iter()
        .filter(|o| o.spin == spin && o.occupancy > 0.0)
        .map(|o| ShellRef { l: o.l, occ: o.occupancy, u: &o.u })
        .collect()
}

fn pair_weight(table: &CouplingTable, a: &ShellRef, b: &ShellRef, same: bool, big_l: usize) -> f64 {
    if same {
        table.shell_self(a.l, a.occ, big_l)
    } else {
        table.shell_pair(a.l, a.occ, b.l, b.occ, big_l)
    }
}

/// Radial component of the Fermi-hole field for one spin channel, on all nodes.
///
/// Returns zeros for an empty channel.
pub fn exchange_field(orbitals: &[Orbital], spin: Spin, grid: &RadialGrid, table: &CouplingTable) -> Result<Vec<f64>> {
    let shells = channel_shells(orbitals, spin);
    let n = grid.len();
    if shells.is_empty() {
        return Ok(vec![0.0; n]);
    }
    let mut numer = vec![0.0; n];
    let mut numer_wall = 0.0;
    let mut denom = vec![0.0; n];
    let slopes: Vec<f64> = shells.iter().map(|s| grid.derivative(s.u)[n - 1]).collect();
    let single = shells.len() == 1;

    for (i, a) in shells.iter().enumerate() {
        for j in 0..n {
            denom[j] += a.occ * a.u[j] * a.u[j];
        }
        for (k, b) in shells.iter().enumerate().skip(i) {
            let same = i == k;
            let mult = if same { 1.0 } else { 2.0 };
            for big_l in CouplingTable::multipoles(a.l, b.l) {
                let weight = mult * pair_weight(table, a, b, same, big_l);
                if weight == 0.0 {
                    continue;
                }
                let pm = pair_multipole(a.u, b.u, big_l, grid);
                let lf = big_l as f64;
                let li = big_l as i32;
                for j in 1..n {
                    let r = grid.r[j];
                    let field = -(lf + 1.0) * pm.inner[j] / r.powi(li + 2) + lf * r.powi(li - 1) * pm.outer[j];
                    if single {
                        numer[j] += weight * field;
                    } else {
                        numer[j] += weight * a.u[j] * b.u[j] * field;
                    }
                    if j == n - 1 {
                        numer_wall += weight * slopes[i] * slopes[k] * field;
                    }
                }
            }
        }
    }

    let mut field = vec![0.0; n];
    if single {
        let occ = shells[0].occ;
        for j in 1..n {
            field[j] = numer[j] / occ;
        }
        return Ok(field);
    }
    let denom_wall: f64 = shells.iter().zip(&slopes).map(|(s, d)| s.occ * d * d).sum();
    for j in 1..n - 1 {
        if denom[j] <= 0.0 {
            return Err(Error::DegenerateDensity(spin.index()));
        }
        field[j] = numer[j] / denom[j];
    }
    field[n - 1] = numer_wall / denom_wall;
    Ok(field)
}

/// Work-function exchange potential: `v_x(r) = -1/r_c + ∫_r^{r_c} E_x,r dr'`.
pub fn exchange_potential(field: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let run = grid.running_integral(field);
    let total = *run.last().unwrap();
    let anchor = -1.0 / grid.r_c();
    run.iter().map(|v| anchor + (total - v)).collect()
}

/// Exchange energy `½ ∬ ρ(r) ρ_x(r, r') / |r - r'|` summed over both spins.
pub fn exchange_energy(orbitals: &[Orbital], grid: &RadialGrid, table: &CouplingTable) -> f64 {
    let mut energy = 0.0;
    for spin in [Spin::Up, Spin::Down] {
        let shells = channel_shells(orbitals, spin);
        for (i, a) in shells.iter().enumerate() {
            for (k, b) in shells.iter().enumerate().skip(i) {
                let same = i == k;
                let mult = if same { 1.0 } else { 2.0 };
                for big_l in CouplingTable::multipoles(a.l, b.l) {
                    let weight = mult * pair_weight(table, a, b, same, big_l);
                    if weight == 0.0 {
                        continue;
                    }
                    energy -= 0.5 * weight * slater_integral(a.u, b.u, a.u, b.u, big_l, grid);
                }
            }
        }
    }
    energy
}

/// `R^k(ab; cd) = ∬ u_a u_c(r) [r_<^k / r_>^{k+1}] u_b u_d(r') dr dr'`, with
/// the first pair `(u_a, u_b)` at `r` and `(u_c, u_d)` at `r'`.
pub fn slater_integral(ua: &[f64], ub: &[f64], uc: &[f64], ud: &[f64], k: usize, grid: &RadialGrid) -> f64 {
    let pm = pair_multipole(uc, ud, k, grid);
    let ki = k as i32;
    let n = grid.len();
    let mut integrand = vec![0.0; n];
    for j in 1..n {
        let r = grid.r[j];
        let y = pm.inner[j] / r.powi(ki + 1) + r.powi(ki) * pm.outer[j];
        integrand[j] = ua[j] * ub[j] * y;
    }
    grid.integrate(&integrand)
}

/// Non-spherical part of the direct Coulomb energy for partially filled
/// shells with `l > 0`, averaged over the sublevel placements.
pub fn aspherical_hartree_correction(orbitals: &[Orbital], grid: &RadialGrid, table: &CouplingTable) -> f64 {
    let mut energy = 0.0;
    for o in orbitals.iter().filter(|o| o.l > 0 && o.occupancy > 0.0) {
        for k in (2..=2 * o.l).step_by(2) {
            let c = table.aspherical_direct(o.l, o.occupancy, k);
            if c != 0.0 {
                energy += 0.5 * c * slater_integral(&o.u, &o.u, &o.u, &o.u, k, grid);
            }
        }
    }
    energy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_channel;
    use crate::grid::GridSpec;

    fn hydrogenic_orbital(grid: &RadialGrid, z: f64, occupancy: f64, spin: Spin) -> Orbital {
        let v: Vec<f64> = grid.r.iter().map(|&r| if r > 0.0 { -z / r } else { 0.0 }).collect();
        let st = solve_channel(&v, grid, 0, 1).unwrap().remove(0);
        Orbital { n: 1, l: 0, spin, occupancy, eps: st.eps, u: st.u }
    }

    #[test]
    fn uniform_ball_hartree() {
        let g = RadialGrid::new(GridSpec::with_radius(2.0)).unwrap();
        // uniform sphere of radius a = r_c, charge q; v_H(a) = q/a
        let q = 3.0;
        let rho0 = q / (4.0 / 3.0 * PI * 8.0);
        let dens = DensityField::from_spin_densities(&g, [vec![rho0; g.len()], vec![0.0; g.len()]]);
        let v = hartree_potential(&dens, &g);
        assert!((v.last().unwrap() - q / 2.0).abs() < 1e-10);
        // interior: q/(2a) (3 - r²/a²)
        for (r, vj) in g.r.iter().zip(&v) {
            let exact = q / 4.0 * (3.0 - r * r / 4.0);
            assert!((vj - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn hydrogenic_hartree_matches_analytic() {
        let g = RadialGrid::new(GridSpec::free()).unwrap();
        let z: f64 = 2.0;
        let rho: Vec<f64> = g.r.iter().map(|r| z.powi(3) / PI * (-2.0 * z * r).exp()).collect();
        let dens = DensityField::from_spin_densities(&g, [rho, vec![0.0; g.len()]]);
        let v = hartree_potential(&dens, &g);
        for (j, &r) in g.r.iter().enumerate().skip(1) {
            let exact = 1.0 / r - (-2.0 * z * r).exp() * (z + 1.0 / r);
            assert!((v[j] - exact).abs() < 1e-8, "r={r} {} {}", v[j], exact);
        }
    }

    #[test]
    fn one_electron_self_interaction_cancels() {
        let g = RadialGrid::new(GridSpec::with_radius(3.0)).unwrap();
        let orb = hydrogenic_orbital(&g, 1.0, 1.0, Spin::Up);
        let table = CouplingTable::new();
        let dens = build_density(std::slice::from_ref(&orb), &g, Some(1.0)).unwrap();
        let vh = hartree_potential(&dens, &g);
        let field = exchange_field(std::slice::from_ref(&orb), Spin::Up, &g, &table).unwrap();
        let vx = exchange_potential(&field, &g);
        for j in 0..g.len() {
            assert!((vh[j] + vx[j]).abs() < 1e-8);
        }
        assert!((vx.last().unwrap() + 1.0 / 3.0).abs() < 1e-10);
        let eh = hartree_energy(&dens, &vh, &g);
        let ex = exchange_energy(std::slice::from_ref(&orb), &g, &table);
        assert!((eh + ex).abs() < 1e-8);
    }

    #[test]
    fn closed_shell_exchange_is_half_hartree() {
        let g = RadialGrid::new(GridSpec::with_radius(2.0)).unwrap();
        let orbs = vec![hydrogenic_orbital(&g, 2.0, 1.0, Spin::Up), hydrogenic_orbital(&g, 2.0, 1.0, Spin::Down)];
        let table = CouplingTable::new();
        let dens = build_density(&orbs, &g, Some(2.0)).unwrap();
        assert!((dens.integral(&g) - 2.0).abs() < 1e-10);
        assert_eq!(*dens.rho.last().unwrap(), 0.0);
        let vh = hartree_potential(&dens, &g);
        let field = exchange_field(&orbs, Spin::Up, &g, &table).unwrap();
        let vx = exchange_potential(&field, &g);
        for j in 0..g.len() {
            assert!((vx[j] + 0.5 * vh[j]).abs() < 1e-8);
        }
        let eh = hartree_energy(&dens, &vh, &g);
        let ex = exchange_energy(&orbs, &g, &table);
        assert!((ex + 0.5 * eh).abs() < 1e-8);
    }

    #[test]
    fn occupancy_mismatch_rejected() {
        let g = RadialGrid::new(GridSpec::with_radius(2.0)).unwrap();
        let orb = hydrogenic_orbital(&g, 1.0, 1.0, Spin::Up);
        assert!(matches!(build_density(&[orb], &g, Some(2.0)), Err(Error::OccupancyMismatch { .. })));
    }
}
