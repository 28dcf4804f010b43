//! Density moments, radial distributions and correlation-energy scans.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::config::Term;
use crate::eigen::Orbital;
use crate::error::{Error, Result};
use crate::fields::DensityField;
use crate::grid::{GridSpec, RadialGrid};
use crate::scf::{term_energy, Mode, ScfOptions, ScfResult};

/// Moment orders reported in moment tables.
pub const MOMENT_ORDERS: [i32; 6] = [-2, -1, 1, 2, 3, 4];

/// `∫ ρ r^k d³r = ∫ 4π r^{k+2} ρ dr`.
pub fn radial_moment(rho: &DensityField, k: i32, grid: &RadialGrid) -> Result<f64> {
    if k < -2 {
        return Err(Error::MomentOrder(k));
    }
    let integrand: Vec<f64> = rho.rho.iter().zip(&grid.r).map(|(p, r)| 4.0 * PI * p * r.powi(k + 2)).collect();
    Ok(grid.integrate(&integrand))
}

/// Normalization of the density used for moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Density integrates to the electron count.
    #[default]
    Electrons,
    /// Density divided by the electron count.
    Unit,
}

/// `⟨r^k⟩` for `k ∈ {−2, −1, 1, 2, 3, 4}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub values: [f64; 6],
    pub normalization: Normalization,
}

impl MomentSet {
    pub fn compute(rho: &DensityField, grid: &RadialGrid, normalization: Normalization) -> Self {
        let scale = match normalization {
            Normalization::Electrons => 1.0,
            Normalization::Unit => 1.0 / rho.n_elec,
        };
        let mut values = [0.0; 6];
        for (v, &k) in values.iter_mut().zip(&MOMENT_ORDERS) {
            *v = scale * radial_moment(rho, k, grid).expect("orders are >= -2");
        }
        Self { values, normalization }
    }

    /// `⟨r^k⟩` for one of [`MOMENT_ORDERS`].
    pub fn get(&self, k: i32) -> Option<f64> {
        MOMENT_ORDERS.iter().position(|&o| o == k).map(|i| self.values[i])
    }
}

/// Samples `(r, value)` of a radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub label: String,
    pub r: Vec<f64>,
    pub value: Vec<f64>,
}

impl RadialProfile {
    /// CSV with header `r,<label>`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("r,{}\n", self.label);
        for (r, v) in self.r.iter().zip(&self.value) {
            let _ = writeln!(out, "{r:.10e},{v:.10e}");
        }
        out
    }
}

/// `D_nl(r) = r² R_nl² = u²` on the collocation nodes.
pub fn orbital_distribution(orbital: &Orbital, grid: &RadialGrid) -> RadialProfile {
    RadialProfile {
        label: format!("D_{}{}", orbital.n, crate::config::l_letter(orbital.l)),
        r: grid.r.clone(),
        value: orbital.u.iter().map(|u| u * u).collect(),
    }
}

/// `r² ρ(r)` on the collocation nodes.
pub fn density_distribution(rho: &DensityField, grid: &RadialGrid) -> RadialProfile {
    RadialProfile {
        label: "r2rho".to_string(),
        r: grid.r.clone(),
        value: rho.rho.iter().zip(&grid.r).map(|(p, r)| r * r * p).collect(),
    }
}

/// Default number of uniform plotting points.
pub const PLOT_POINTS: usize = 1000;

/// Resample a nodal profile on `points` uniform radii in `[0, r_c]` through the
/// collocation interpolant.
pub fn resample(profile: &RadialProfile, grid: &RadialGrid, points: usize) -> RadialProfile {
    let points = points.max(2);
    let r_c = grid.r_c();
    let r: Vec<f64> = (0..points).map(|i| r_c * i as f64 / (points - 1) as f64).collect();
    let value = r.iter().map(|&ri| grid.interpolate(&profile.value, ri)).collect();
    RadialProfile { label: profile.label.clone(), r, value }
}

/// Location and height of the largest sample.
pub fn peak(profile: &RadialProfile) -> (f64, f64) {
    profile
        .r
        .iter()
        .zip(&profile.value)
        .fold((0.0, f64::NEG_INFINITY), |best, (&r, &v)| if v > best.1 { (r, v) } else { best })
}

/// Local potentials of a converged state on the interior nodes.
pub fn potential_profiles(result: &ScfResult) -> Vec<RadialProfile> {
    let g = &result.grid;
    let p = &result.potentials;
    let range = 1..g.len() - 1;
    let r: Vec<f64> = g.r[range.clone()].to_vec();
    let pick = |label: &str, v: &[f64]| RadialProfile { label: label.to_string(), r: r.clone(), value: v[range.clone()].to_vec() };
    vec![
        pick("v_en", &p.v_en),
        pick("v_h", &p.v_h),
        pick("v_x_up", &p.v_x[0]),
        pick("v_x_down", &p.v_x[1]),
        pick("v_c_up", &p.v_c[0]),
        pick("v_c_down", &p.v_c[1]),
    ]
}

/// Several profiles sharing the same radii, as one CSV.
pub fn profiles_csv(profiles: &[RadialProfile]) -> String {
    let mut out = String::from("r");
    for p in profiles {
        out.push(',');
        out.push_str(&p.label);
    }
    out.push('\n');
    if let Some(first) = profiles.first() {
        for (i, r) in first.r.iter().enumerate() {
            let _ = write!(out, "{r:.10e}");
            for p in profiles {
                let _ = write!(out, ",{:.10e}", p.value[i]);
            }
            out.push('\n');
        }
    }
    out
}

/// One `(system, term, mode, r_c)` row of a moments table.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub system: String,
    pub term: String,
    pub mode: Mode,
    pub r_c: f64,
    pub moments: MomentSet,
}

pub const MOMENTS_HEADER: &str = "system,term,mode,r_c,m_-2,m_-1,m_1,m_2,m_3,m_4";

pub fn moments_csv(rows: &[MomentRow]) -> String {
    let mut out = format!("{MOMENTS_HEADER}\n");
    for row in rows {
        let _ = write!(out, "{},{},{},{}", row.system, row.term, row.mode, format_radius(row.r_c));
        for v in row.moments.values {
            let _ = write!(out, ",{v:.9}");
        }
        out.push('\n');
    }
    out
}

/// Radii print with the shortest exact representation.
pub fn format_radius(r_c: f64) -> String {
    format!("{r_c}")
}

/// One point of a correlation-energy scan.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPoint {
    pub r_c: f64,
    /// Exchange-only total energy.
    pub e_x_only: f64,
    /// Total energy with the correlation functional.
    pub e_correlated: f64,
    /// Correlation functional energy at the correlated solution.
    pub e_c: f64,
}

impl CorrelationPoint {
    pub fn abs_e_c(&self) -> f64 {
        self.e_c.abs()
    }

    /// `E(correlated) − E(X-only)`.
    pub fn gap(&self) -> f64 {
        self.e_correlated - self.e_x_only
    }
}

/// `|E_c|` and the correlated/X-only gap over a ladder of radii.
///
/// Points are solved in parallel; a failed point is reported in place and
/// does not stop the scan.
pub fn correlation_scan(
    z: f64,
    term: &Term,
    radii: &[f64],
    mode: Mode,
    spec_template: GridSpec,
    options: &ScfOptions,
) -> Vec<Result<CorrelationPoint>> {
    radii
        .par_iter()
        .map(|&r_c| {
            let spec = GridSpec { r_c, ..spec_template };
            spec.validate()?;
            let x = term_energy(z, term, spec, Mode::XOnly, options)?;
            let c = term_energy(z, term, spec, mode, options)?;
            Ok(CorrelationPoint { r_c, e_x_only: x.total(), e_correlated: c.total(), e_c: c.energy.correlation })
        })
        .collect()
}

/// True when `values` (ordered along the ladder) has a strict interior
/// minimum: some inner element below both ends' neighbours on each side.
pub fn has_interior_minimum(values: &[f64]) -> bool {
    if values.len() < 3 {
        return false;
    }
    let (imin, vmin) = values.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
    imin > 0 && imin < values.len() - 1 && vmin < values[0] && vmin < values[values.len() - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Configuration;
    use crate::scf::scf_solve;

    fn he(r_c: f64) -> ScfResult {
        let c = Configuration::high_spin(2.0, &Term::parse("1s2_1S").unwrap()).unwrap();
        scf_solve(&c, GridSpec::with_radius(r_c), Mode::XOnly).unwrap()
    }

    #[test]
    fn zeroth_moment_counts_electrons() {
        let r = he(2.0);
        assert!((radial_moment(&r.density, 0, &r.grid).unwrap() - 2.0).abs() < 1e-8);
        assert!(matches!(radial_moment(&r.density, -3, &r.grid), Err(Error::MomentOrder(-3))));
    }

    #[test]
    fn inverse_moment_matches_nuclear_energy() {
        let r = he(1.5);
        let m = radial_moment(&r.density, -1, &r.grid).unwrap();
        assert!((r.energy.nuclear + 2.0 * m).abs() < 1e-9 * m);
    }

    #[test]
    fn unit_normalization_divides_by_n() {
        let r = he(3.0);
        let a = MomentSet::compute(&r.density, &r.grid, Normalization::Electrons);
        let b = MomentSet::compute(&r.density, &r.grid, Normalization::Unit);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x / 2.0 - y).abs() < 1e-12 * x.abs());
        }
        assert_eq!(a.get(2), Some(a.values[3]));
        assert_eq!(a.get(0), None);
    }

    #[test]
    fn distributions_normalized_and_resampled() {
        let r = he(1.0);
        let d = orbital_distribution(&r.orbitals[0], &r.grid);
        assert!((r.grid.integrate(&d.value) - 1.0).abs() < 1e-8);
        let fine = resample(&d, &r.grid, PLOT_POINTS);
        assert_eq!(fine.r.len(), PLOT_POINTS);
        assert_eq!(fine.r[0], 0.0);
        assert_eq!(*fine.r.last().unwrap(), 1.0);
        assert!(fine.value[0].abs() < 1e-12 && fine.value.last().unwrap().abs() < 1e-12);
        let csv = fine.to_csv();
        assert!(csv.starts_with("r,D_1s\n"));
        assert_eq!(csv.lines().count(), PLOT_POINTS + 1);
    }

    #[test]
    fn interior_minimum_detection() {
        assert!(has_interior_minimum(&[3.0, 1.0, 2.0]));
        assert!(!has_interior_minimum(&[1.0, 2.0, 3.0]));
        assert!(!has_interior_minimum(&[3.0, 2.0, 1.0]));
        assert!(!has_interior_minimum(&[1.0, 2.0]));
    }
}
