//! Self-consistent field driver, energy assembly and multiplet energies.

use std::fmt;
use std::str::FromStr;

use crate::angular::CouplingTable;
use crate::config::{Configuration, Term};
use crate::eigen::{solve_channel, Orbital, Spin};
use crate::error::{Error, Result};
use crate::fields::{
    aspherical_hartree_correction, build_density, exchange_energy, exchange_field, exchange_potential, hartree_energy,
    hartree_potential, DensityField,
};
use crate::grid::{GridSpec, RadialGrid};
use crate::xc::{correlation, Correlation};

/// Exchange-correlation treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    XOnly,
    XcWigner,
    XcLyp,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::XOnly, Mode::XcWigner, Mode::XcLyp];

    pub fn correlation(self) -> Correlation {
        match self {
            Mode::XOnly => Correlation::None,
            Mode::XcWigner => Correlation::Wigner,
            Mode::XcLyp => Correlation::Lyp,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::XOnly => "x_only",
            Mode::XcWigner => "xc_wigner",
            Mode::XcLyp => "xc_lyp",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidConfiguration(format!("unknown mode '{s}' (expected x_only, xc_wigner or xc_lyp)")))
    }
}

/// Orbitals used for the `M_S = 0` determinant in the diagonal sum rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SingletScheme {
    /// Evaluate the determinant with the self-consistent high-spin orbitals.
    #[default]
    TripletOrbitals,
    /// Run a separate SCF for the `M_S = 0` determinant.
    SeparateScf,
    /// Run one SCF with half an electron of each spin in each open shell.
    SpinAveraged,
}

impl FromStr for SingletScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "triplet_orbitals" => Ok(Self::TripletOrbitals),
            "separate_scf" => Ok(Self::SeparateScf),
            "spin_averaged" => Ok(Self::SpinAveraged),
            other => Err(Error::InvalidConfiguration(format!(
                "unknown singlet scheme '{other}' (expected triplet_orbitals, separate_scf or spin_averaged)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfOptions {
    /// Fraction of the newly computed potential mixed in each iteration.
    pub mixing: f64,
    pub max_iter: usize,
    pub energy_tol: f64,
    pub potential_tol: f64,
    pub singlet: SingletScheme,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self { mixing: 0.3, max_iter: 200, energy_tol: 1e-6, potential_tol: 1e-5, singlet: SingletScheme::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    /// Largest change of the effective potential over occupied channels.
    pub max_dv: f64,
    pub mixing: f64,
}

/// Total energy and its parts, in hartree.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyComponents {
    pub kinetic: f64,
    pub nuclear: f64,
    pub hartree: f64,
    pub exchange: f64,
    pub correlation: f64,
    pub total: f64,
}

impl EnergyComponents {
    /// Electron–electron interaction energy `E_H + E_x + E_c`.
    pub fn electron_electron(&self) -> f64 {
        self.hartree + self.exchange + self.correlation
    }

    /// `a·self + b·other`, used for sum-rule combinations.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self {
            kinetic: a * self.kinetic + b * other.kinetic,
            nuclear: a * self.nuclear + b * other.nuclear,
            hartree: a * self.hartree + b * other.hartree,
            exchange: a * self.exchange + b * other.exchange,
            correlation: a * self.correlation + b * other.correlation,
            total: a * self.total + b * other.total,
        }
    }
}

/// All local potentials on the grid nodes (without the centrifugal term).
#[derive(Debug, Clone)]
pub struct PotentialSet {
    pub v_en: Vec<f64>,
    pub v_h: Vec<f64>,
    pub v_x: [Vec<f64>; 2],
    pub v_c: [Vec<f64>; 2],
}

impl PotentialSet {
    pub fn v_eff(&self, spin: Spin) -> Vec<f64> {
        let s = spin.index();
        (0..self.v_en.len()).map(|j| self.v_en[j] + self.v_h[j] + self.v_x[s][j] + self.v_c[s][j]).collect()
    }

    /// Effective potential for one `(l, spin)` channel, centrifugal term included.
    pub fn channel(&self, l: usize, spin: Spin, grid: &RadialGrid) -> Vec<f64> {
        let c = (l * (l + 1)) as f64 / 2.0;
        self.v_eff(spin)
            .into_iter()
            .zip(&grid.r)
            .map(|(v, r)| if *r > 0.0 { v + c / (r * r) } else { v })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ScfResult {
    pub config: Configuration,
    pub mode: Mode,
    pub grid: RadialGrid,
    pub orbitals: Vec<Orbital>,
    pub density: DensityField,
    pub potentials: PotentialSet,
    pub energy: EnergyComponents,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
}

impl ScfResult {
    pub fn r_c(&self) -> f64 {
        self.grid.r_c()
    }

    pub fn orbital(&self, n: usize, l: usize, spin: Spin) -> Option<&Orbital> {
        self.orbitals.iter().find(|o| o.n == n && o.l == l && o.spin == spin)
    }
}

/// Solve every occupied channel in `v` (one potential per spin) and attach occupancies.
fn solve_orbitals(config: &Configuration, v: &[Vec<f64>; 2], grid: &RadialGrid, symmetric: bool) -> Result<Vec<Orbital>> {
    let mut channels: Vec<(usize, Spin)> = config.shells.iter().map(|s| (s.l, s.spin)).collect();
    channels.sort();
    channels.dedup();
    let mut out = Vec::with_capacity(config.shells.len());
    for (l, spin) in channels {
        if symmetric && spin == Spin::Down {
            continue;
        }
        let wanted: Vec<_> = config.shells.iter().filter(|s| s.l == l && s.spin == spin).collect();
        let k = wanted.iter().map(|s| s.n - l).max().unwrap();
        let states = solve_channel(&v[spin.index()], grid, l, k)?;
        for s in wanted {
            let st = &states[s.n - l - 1];
            out.push(Orbital { n: s.n, l, spin, occupancy: s.occupancy, eps: st.eps, u: st.u.clone() });
            if symmetric {
                out.push(Orbital { n: s.n, l, spin: Spin::Down, occupancy: s.occupancy, eps: st.eps, u: st.u.clone() });
            }
        }
    }
    Ok(out)
}

/// `⟨u| -½ d²/dr² + l(l+1)/(2r²) |u⟩`.
pub fn kinetic_energy(orbital: &Orbital, grid: &RadialGrid) -> f64 {
    let m = grid.interior_len();
    let f = nalgebra::DVector::from_iterator(m, (0..m).map(|i| orbital.u[i + 1] * grid.sqrt_w_interior[i]));
    let radial = f.dot(&(&grid.kinetic * &f));
    let c = (orbital.l * (orbital.l + 1)) as f64 / 2.0;
    let cent: Vec<f64> = grid.r.iter().zip(&orbital.u).map(|(r, u)| if *r > 0.0 { c * u * u / (r * r) } else { 0.0 }).collect();
    radial + grid.integrate(&cent)
}

struct FieldEvaluation {
    potentials: PotentialSet,
    density: DensityField,
    energy: EnergyComponents,
}

fn evaluate(
    config: &Configuration,
    orbitals: &[Orbital],
    grid: &RadialGrid,
    table: &CouplingTable,
    mode: Mode,
    v_en: &[f64],
) -> Result<FieldEvaluation> {
    let density = build_density(orbitals, grid, Some(config.n_electrons()))?;
    let v_h = hartree_potential(&density, grid);
    let mut v_x = [vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for spin in [Spin::Up, Spin::Down] {
        let field = exchange_field(orbitals, spin, grid, table)?;
        v_x[spin.index()] = exchange_potential(&field, grid);
    }
    let corr = correlation(mode.correlation(), &density, grid);

    let kinetic: f64 = orbitals.iter().map(|o| o.occupancy * kinetic_energy(o, grid)).sum();
    let charge = density.radial_charge(grid);
    let nuclear: f64 = (1..grid.len()).map(|j| grid.w[j] * charge[j] * v_en[j]).sum();
    let hartree = hartree_energy(&density, &v_h, grid) + aspherical_hartree_correction(orbitals, grid, table);
    let exchange = exchange_energy(orbitals, grid, table);
    let total = kinetic + nuclear + hartree + exchange + corr.energy;
    Ok(FieldEvaluation {
        potentials: PotentialSet { v_en: v_en.to_vec(), v_h, v_x, v_c: corr.potential },
        density,
        energy: EnergyComponents { kinetic, nuclear, hartree, exchange, correlation: corr.energy, total },
    })
}

/// Energy of `config` evaluated with fixed orbitals (no self-consistency).
///
/// Orbitals are matched to the configuration's shells by `(n, l)`; the spin
/// and occupancy come from the configuration.
pub fn determinant_energy(config: &Configuration, orbitals: &[Orbital], grid: &RadialGrid, mode: Mode) -> Result<EnergyComponents> {
    let mut assigned = Vec::with_capacity(config.shells.len());
    for s in &config.shells {
        let src = orbitals
            .iter()
            .find(|o| o.n == s.n && o.l == s.l && o.spin == s.spin)
            .or_else(|| orbitals.iter().find(|o| o.n == s.n && o.l == s.l))
            .ok_or_else(|| Error::InvalidConfiguration(format!("no orbital for shell n = {}, l = {}", s.n, s.l)))?;
        assigned.push(Orbital { spin: s.spin, occupancy: s.occupancy, ..src.clone() });
    }
    let v_en: Vec<f64> = grid.r.iter().map(|&r| if r > 0.0 { -config.z / r } else { 0.0 }).collect();
    Ok(evaluate(config, &assigned, grid, &CouplingTable::new(), mode, &v_en)?.energy)
}

pub fn scf_solve(config: &Configuration, spec: GridSpec, mode: Mode) -> Result<ScfResult> {
    scf_solve_with(config, spec, mode, &ScfOptions::default())
}

pub fn scf_solve_with(config: &Configuration, spec: GridSpec, mode: Mode, options: &ScfOptions) -> Result<ScfResult> {
    config.validate()?;
    if !(options.mixing > 0.0 && options.mixing <= 1.0) {
        return Err(Error::InvalidConfiguration(format!("mixing {} outside (0, 1]", options.mixing)));
    }
    let grid = RadialGrid::new(spec)?;
    let table = CouplingTable::new();
    let symmetric = config.is_spin_symmetric();
    let v_en: Vec<f64> = grid.r.iter().map(|&r| if r > 0.0 { -config.z / r } else { 0.0 }).collect();
    let occupied = [
        config.shells.iter().any(|s| s.spin == Spin::Up),
        config.shells.iter().any(|s| s.spin == Spin::Down),
    ];

    // bare-nucleus start: hydrogenic orbitals of charge Z in the cavity
    let mut v_in = [v_en.clone(), v_en.clone()];
    let mut mixing = options.mixing;
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut prev_energy = f64::NAN;
    let mut rising = 0;

    for iteration in 1..=options.max_iter {
        let orbitals = solve_orbitals(config, &v_in, &grid, symmetric)?;
        let eval = evaluate(config, &orbitals, &grid, &table, mode, &v_en)?;
        let v_out = [eval.potentials.v_eff(Spin::Up), eval.potentials.v_eff(Spin::Down)];
        let mut max_dv = 0.0f64;
        for s in 0..2 {
            if occupied[s] {
                for j in 1..grid.len() - 1 {
                    max_dv = max_dv.max((v_out[s][j] - v_in[s][j]).abs());
                }
            }
        }
        let energy = eval.energy.total;
        let de = (energy - prev_energy).abs();
        history.push(IterationRecord { iteration, energy, max_dv, mixing });

        if de < options.energy_tol && max_dv < options.potential_tol {
            return Ok(ScfResult {
                config: config.clone(),
                mode,
                grid,
                orbitals,
                density: eval.density,
                potentials: eval.potentials,
                energy: eval.energy,
                iterations: iteration,
                history,
            });
        }

        if history.len() >= 2 && max_dv > history[history.len() - 2].max_dv {
            rising += 1;
            if rising >= 3 {
                mixing /= 2.0;
                rising = 0;
                if mixing < 1e-3 {
                    return Err(Error::Oscillation { mixing, history });
                }
            }
        } else {
            rising = 0;
        }
        for s in 0..2 {
            for j in 0..grid.len() {
                v_in[s][j] = (1.0 - mixing) * v_in[s][j] + mixing * v_out[s][j];
            }
        }
        prev_energy = energy;
    }
    let last = history.last().copied().unwrap();
    let last_de = if history.len() >= 2 { (last.energy - history[history.len() - 2].energy).abs() } else { f64::NAN };
    Err(Error::NotConverged { iterations: options.max_iter, last_de, last_dv: last.max_dv, history })
}

/// Slater's diagonal sum rule for two singly occupied shells:
/// `E(singlet) = 2 E(M_S = 0) − E(triplet)`.
pub fn sum_rule(e_ms0: f64, e_triplet: f64) -> f64 {
    2.0 * e_ms0 - e_triplet
}

/// Energy of one spectroscopic term in one functional mode.
#[derive(Debug, Clone)]
pub struct TermEnergy {
    pub term: Term,
    pub mode: Mode,
    pub r_c: f64,
    pub energy: EnergyComponents,
    /// The closed-shell or high-spin SCF; its density represents the term.
    pub scf: ScfResult,
    /// Energy of the `M_S = 0` determinant when the sum rule was applied.
    pub ms0_energy: Option<EnergyComponents>,
}

impl TermEnergy {
    pub fn total(&self) -> f64 {
        self.energy.total
    }
}

fn ms0_energy(z: f64, term: &Term, high: &ScfResult, spec: GridSpec, mode: Mode, options: &ScfOptions) -> Result<EnergyComponents> {
    let ms0 = Configuration::ms0(z, term)?;
    match options.singlet {
        SingletScheme::TripletOrbitals => determinant_energy(&ms0, &high.orbitals, &high.grid, mode),
        SingletScheme::SeparateScf => Ok(scf_solve_with(&ms0, spec, mode, options)?.energy),
        SingletScheme::SpinAveraged => {
            let mut avg = ms0.clone();
            avg.shells = Vec::new();
            for s in &ms0.shells {
                let open = !ms0.shells.iter().any(|o| o.n == s.n && o.l == s.l && o.spin != s.spin);
                if open {
                    for spin in [Spin::Up, Spin::Down] {
                        avg.shells.push(crate::config::ShellOccupation { spin, occupancy: 0.5 * s.occupancy, ..*s });
                    }
                } else {
                    avg.shells.push(*s);
                }
            }
            Ok(scf_solve_with(&avg, spec, mode, options)?.energy)
        }
    }
}

/// Energy of `term` for nuclear charge `z`: a single SCF for closed-shell and
/// high-spin terms, Slater's diagonal sum rule otherwise.
pub fn term_energy(z: f64, term: &Term, spec: GridSpec, mode: Mode, options: &ScfOptions) -> Result<TermEnergy> {
    let high = scf_solve_with(&Configuration::high_spin(z, term)?, spec, mode, options)?;
    if term.is_single_determinant() {
        return Ok(TermEnergy { term: term.clone(), mode, r_c: spec.r_c, energy: high.energy, scf: high, ms0_energy: None });
    }
    let e_ms0 = ms0_energy(z, term, &high, spec, mode, options)?;
    let energy = e_ms0.combine(2.0, &high.energy, -1.0);
    Ok(TermEnergy { term: term.clone(), mode, r_c: spec.r_c, energy, scf: high, ms0_energy: Some(e_ms0) })
}

/// Triplet and singlet of a configuration with two singly occupied shells,
/// such as `1s2s` or `1s3d`. Closed shells are rejected.
pub fn multiplet_energies(z: f64, family: &str, spec: GridSpec, mode: Mode, options: &ScfOptions) -> Result<(TermEnergy, TermEnergy)> {
    let not_pair = || Error::SumRule(format!("'{family}' is not a configuration with two singly occupied shells"));
    let base = ['S', 'P', 'D', 'F', 'G', 'H', 'I']
        .iter()
        .find_map(|l| Term::parse(&format!("{family}_1{l}")).ok())
        .ok_or_else(not_pair)?;
    if base.is_single_determinant() {
        return Err(not_pair());
    }
    let total_l = base.total_l;
    let triplet = Term { multiplicity: 3, total_l, ..base.clone() };
    let high = scf_solve_with(&Configuration::high_spin(z, &triplet)?, spec, mode, options)?;
    let e_ms0 = ms0_energy(z, &base, &high, spec, mode, options)?;
    let e_singlet = e_ms0.combine(2.0, &high.energy, -1.0);
    let t = TermEnergy { term: triplet, mode, r_c: spec.r_c, energy: high.energy, scf: high.clone(), ms0_energy: None };
    let s = TermEnergy { term: base, mode, r_c: spec.r_c, energy: e_singlet, scf: high, ms0_energy: Some(e_ms0) };
    Ok((t, s))
}
