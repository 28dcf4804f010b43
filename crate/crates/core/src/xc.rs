//! Local (Wigner) and gradient-corrected (Lee–Yang–Parr) correlation.

use std::f64::consts::PI;

use crate::fields::{DensityField, DENSITY_FLOOR};
use crate::grid::RadialGrid;

/// Points below this total density contribute nothing.
const NEGLIGIBLE_DENSITY: f64 = 1e-20;

const WIGNER_A: f64 = 9.81;
const WIGNER_B: f64 = 21.437;

const LYP_A: f64 = 0.04918;
const LYP_B: f64 = 0.132;
const LYP_C: f64 = 0.2533;
const LYP_D: f64 = 0.349;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Correlation {
    None,
    Wigner,
    Lyp,
}

/// Correlation energy and per-spin potential on all nodes.
#[derive(Debug, Clone)]
pub struct CorrelationResult {
    pub energy: f64,
    pub potential: [Vec<f64>; 2],
}

pub fn correlation(kind: Correlation, rho: &DensityField, grid: &RadialGrid) -> CorrelationResult {
    match kind {
        Correlation::None => CorrelationResult { energy: 0.0, potential: [vec![0.0; grid.len()], vec![0.0; grid.len()]] },
        Correlation::Wigner => wigner(rho, grid),
        Correlation::Lyp => lyp(rho, grid),
    }
}

fn volume_weights(grid: &RadialGrid) -> Vec<f64> {
    grid.r.iter().zip(&grid.w).map(|(r, w)| 4.0 * PI * r * r * w).collect()
}

/// Wigner energy density per volume and its density derivative.
pub fn wigner_point(rho: f64) -> (f64, f64) {
    if rho < NEGLIGIBLE_DENSITY {
        return (0.0, 0.0);
    }
    let s = rho.max(DENSITY_FLOOR).powf(-1.0 / 3.0);
    let den = WIGNER_A + WIGNER_B * s;
    (-rho / den, -(WIGNER_A + 4.0 / 3.0 * WIGNER_B * s) / (den * den))
}

pub fn wigner(rho: &DensityField, grid: &RadialGrid) -> CorrelationResult {
    let wt = volume_weights(grid);
    let mut energy = 0.0;
    let mut v = vec![0.0; grid.len()];
    for j in 0..grid.len() {
        let (e, d) = wigner_point(rho.rho[j]);
        energy += wt[j] * e;
        v[j] = d;
    }
    CorrelationResult { energy, potential: [v.clone(), v] }
}

/// LYP integrand and its partial derivatives at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LypPoint {
    pub e: f64,
    /// ∂e/∂ρσ
    pub d_rho: [f64; 2],
    /// ∂e/∂(dρσ/dr)
    pub d_grad: [f64; 2],
    /// ∂e/∂(∇²ρσ)
    pub d_lap: [f64; 2],
}

/// Spin-resolved LYP correlation energy density in terms of spin densities,
/// radial gradients and Laplacians.
pub fn lyp_point(rho: [f64; 2], grad: [f64; 2], lap: [f64; 2]) -> LypPoint {
    let total = rho[0] + rho[1];
    if total < NEGLIGIBLE_DENSITY {
        return LypPoint::default();
    }
    let ra = rho[0].max(DENSITY_FLOOR);
    let rb = rho[1].max(DENSITY_FLOOR);
    let p = ra + rb;
    let cf = 0.3 * (3.0 * PI * PI).powf(2.0 / 3.0);
    let c83 = 2f64.powf(2.0 / 3.0) * cf;
    let g_tot = grad[0] + grad[1];
    let l_tot = lap[0] + lap[1];

    let bracket = c83 * (ra.powf(8.0 / 3.0) + rb.powf(8.0 / 3.0)) - g_tot * g_tot / 8.0
        + p * l_tot / 8.0
        + (grad[0] * grad[0] + grad[1] * grad[1]) / 72.0
        + (ra * lap[0] + rb * lap[1]) / 24.0;

    // spin polarization from the unfloored densities so a one-spin density gives γ = 0 exactly
    let (qa, qb) = (rho[0].max(0.0), rho[1].max(0.0));
    let gamma = 4.0 * qa * qb / (p * p);
    let d_gamma = [4.0 * qb * (qb - qa) / (p * p * p), 4.0 * qa * (qa - qb) / (p * p * p)];

    let m13 = p.powf(-1.0 / 3.0);
    let f = 1.0 / (1.0 + LYP_D * m13);
    let df = LYP_D / 3.0 * m13 / p * f * f;
    let g = p.powf(-5.0 / 3.0) * (-LYP_C * m13).exp();
    let dg = g * (-5.0 / (3.0 * p) + LYP_C / 3.0 * m13 / p);

    let inner = p + 2.0 * LYP_B * g * bracket;
    let e = -LYP_A * gamma * f * inner;

    let mut out = LypPoint { e, ..Default::default() };
    let rs = [ra, rb];
    for s in 0..2 {
        let d_bracket = c83 * 8.0 / 3.0 * rs[s].powf(5.0 / 3.0) + l_tot / 8.0 + lap[s] / 24.0;
        let d_inner = 1.0 + 2.0 * LYP_B * (dg * bracket + g * d_bracket);
        out.d_rho[s] = -LYP_A * (d_gamma[s] * f * inner + gamma * df * inner + gamma * f * d_inner);
        let pref = -LYP_A * gamma * f * 2.0 * LYP_B * g;
        out.d_grad[s] = pref * (-g_tot / 4.0 + grad[s] / 36.0);
        out.d_lap[s] = pref * (p / 8.0 + rs[s] / 24.0);
    }
    out
}

/// LYP integrand after integrating the Laplacian terms by parts, as a
/// function of spin densities and radial gradients only.
///
/// Integrates to the same energy as [`lyp_point`] whenever `ρ ∇ρ` vanishes on
/// the boundary, which holds for densities confined by a hard wall.
pub fn lyp_gradient_point(rho: [f64; 2], grad: [f64; 2]) -> LypPoint {
    let total = rho[0] + rho[1];
    if total < NEGLIGIBLE_DENSITY {
        return LypPoint::default();
    }
    // unfloored spin densities keep a one-spin point exactly zero
    let (ra, rb) = (rho[0].max(0.0), rho[1].max(0.0));
    let p = total.max(DENSITY_FLOOR);
    let (ga, gb) = (grad[0], grad[1]);
    let cf = 0.3 * (3.0 * PI * PI).powf(2.0 / 3.0);
    let c113 = 2f64.powf(11.0 / 3.0) * cf;

    let m13 = p.powf(-1.0 / 3.0);
    let dm13 = -m13 / (3.0 * p);
    let den = 1.0 + LYP_D * m13;
    let dden = LYP_D * dm13;
    let omega = (-LYP_C * m13).exp() * p.powf(-11.0 / 3.0) / den;
    let domega = omega * (-LYP_C * dm13 - 11.0 / (3.0 * p) - dden / den);
    let delta = LYP_C * m13 + LYP_D * m13 / den;
    let ddelta = dm13 * (LYP_C + LYP_D / den - LYP_D * LYP_D * m13 / (den * den));

    let big_g = (ga + gb) * (ga + gb);
    let ss = ga * ga + gb * gb;
    let weighted = (ra * ga * ga + rb * gb * gb) / p;
    let pp = ra * rb;
    let q = c113 * (ra.powf(8.0 / 3.0) + rb.powf(8.0 / 3.0)) + (47.0 - 7.0 * delta) / 18.0 * big_g - (2.5 - delta / 18.0) * ss
        - (delta - 11.0) / 9.0 * weighted;
    // −⅔ρ²|∇ρ|² + (⅔ρ² − ρa²)|∇ρb|² + (⅔ρ² − ρb²)|∇ρa|², expanded
    let b = -4.0 / 3.0 * p * p * ga * gb - ra * ra * gb * gb - rb * rb * ga * ga;

    let e1 = -4.0 * LYP_A * pp / (p * den);
    let e = e1 - LYP_A * LYP_B * omega * (pp * q + b);

    let mut out = LypPoint { e, ..Default::default() };
    let rs = [ra, rb];
    let gs = [ga, gb];
    for s in 0..2 {
        let (r_s, r_o) = (rs[s], rs[1 - s]);
        let (g_s, g_o) = (gs[s], gs[1 - s]);
        let de1 = -4.0 * LYP_A * (r_o / (p * den) - pp / (p * den).powi(2) * (den + p * dden));
        let dq = c113 * 8.0 / 3.0 * r_s.powf(5.0 / 3.0) + ddelta * (-7.0 / 18.0 * big_g + ss / 18.0 - weighted / 9.0)
            - (delta - 11.0) / 9.0 * (g_s * g_s / p - weighted / p);
        let db = -8.0 / 3.0 * p * ga * gb - 2.0 * r_s * g_o * g_o;
        out.d_rho[s] = de1 - LYP_A * LYP_B * (domega * (pp * q + b) + omega * (r_o * q + pp * dq + db));
        let dq_g = (47.0 - 7.0 * delta) / 9.0 * (ga + gb) - (5.0 - delta / 9.0) * g_s - 2.0 * (delta - 11.0) / 9.0 * r_s * g_s / p;
        let db_g = -4.0 / 3.0 * p * p * g_o - 2.0 * r_o * r_o * g_s;
        out.d_grad[s] = -LYP_A * LYP_B * omega * (pp * dq_g + db_g);
    }
    out
}

/// LYP energy on the grid and its functional derivative
/// `v_σ = ∂e/∂ρσ − ∇·(∂e/∂∇ρσ) + ∇²(∂e/∂∇²ρσ)`.
///
/// The partials contain `exp(−c ρ^{-1/3})`, which falls off far faster than
/// any polynomial resolves; their derivatives use local stencils so the
/// unresolved drop in the tail does not ring across the whole grid.
pub fn lyp(rho: &DensityField, grid: &RadialGrid) -> CorrelationResult {
    let n = grid.len();
    let wt = volume_weights(grid);
    let mut energy = 0.0;
    let mut dr = [vec![0.0; n], vec![0.0; n]];
    let mut dg = [vec![0.0; n], vec![0.0; n]];
    let mut dl = [vec![0.0; n], vec![0.0; n]];
    for j in 0..n {
        let pt = lyp_point(
            [rho.rho_spin[0][j], rho.rho_spin[1][j]],
            [rho.grad_spin[0][j], rho.grad_spin[1][j]],
            [rho.lap_spin[0][j], rho.lap_spin[1][j]],
        );
        energy += wt[j] * pt.e;
        for s in 0..2 {
            dr[s][j] = pt.d_rho[s];
            dg[s][j] = pt.d_grad[s];
            dl[s][j] = pt.d_lap[s];
        }
    }
    let mut potential = [vec![0.0; n], vec![0.0; n]];
    for s in 0..2 {
        let (g1, _) = grid.local_derivatives(&dg[s]);
        let (h1, h2) = grid.local_derivatives(&dl[s]);
        for k in 1..n {
            let r = grid.r[k];
            potential[s][k] = dr[s][k] - (g1[k] + 2.0 * dg[s][k] / r) + (h2[k] + 2.0 * h1[k] / r);
        }
    }
    CorrelationResult { energy, potential }
}
