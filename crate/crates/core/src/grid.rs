//! Legendre pseudospectral (GPS) radial grid.
//!
//! Collocation points are the Gauss-Lobatto-Legendre nodes on `x ∈ [-1, 1]`,
//! mapped onto `r ∈ [0, r_c]` through `r = L (1 + x) / (1 - x + α)` with
//! `α = 2L / r_c`. Both ends of the interval are Dirichlet points; the
//! Hamiltonian lives on the `N - 1` interior nodes.
//!
//! The kinetic operator is collocated in divergence form,
//! `-½ (1/r') d/dx [(1/r') du/dx]`, which under the Lobatto quadrature is
//! exactly `K u = ε M u` with `K = ½ Dᵀ diag(w / r') D` and `M = diag(w r')`.
//! The stored [`RadialGrid::kinetic`] matrix is `M^{-1/2} K M^{-1/2}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Cavity radius used for the "free atom" rows.
pub const FREE_ATOM_RADIUS: f64 = 40.0;

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of interior collocation points.
    pub n_r: usize,
    /// Map parameter `L` in bohr.
    pub map_length: f64,
    /// Cavity radius in bohr.
    pub r_c: f64,
}

impl GridSpec {
    pub fn new(n_r: usize, map_length: f64, r_c: f64) -> Result<Self> {
        let spec = Self { n_r, map_length, r_c };
        spec.validate()?;
        Ok(spec)
    }

    /// Defaults used throughout: `n_r = 300`, `L = 1`.
    pub fn with_radius(r_c: f64) -> Self {
        Self { n_r: 300, map_length: 1.0, r_c }
    }

    /// Free-atom limit, approximated by a 40 bohr cavity.
    pub fn free() -> Self {
        Self::with_radius(FREE_ATOM_RADIUS)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r < 8 {
            return Err(Error::InvalidGrid(format!("n_r = {} (need at least 8)", self.n_r)));
        }
        if !(self.map_length > 0.0 && self.map_length.is_finite()) {
            return Err(Error::InvalidGrid(format!("L = {} must be positive", self.map_length)));
        }
        if !(self.r_c > 0.0 && self.r_c.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_c = {} must be positive", self.r_c)));
        }
        Ok(())
    }

    /// Polynomial order `N`; the grid has `N + 1` nodes.
    pub fn order(&self) -> usize {
        self.n_r + 1
    }
}

/// `P_N(x)`, `P_{N-1}(x)` and `P_N'(x)` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < f64::EPSILON {
        // P_N'(±1) = (±1)^{N+1} N(N+1)/2
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p_prev - x * p) / (1.0 - x * x)
    };
    (p, p_prev, dp)
}

/// Gauss-Lobatto-Legendre nodes: `±1` and the `N - 1` roots of `P_N'`, ascending.
pub fn collocation_points(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("collocation order N = {n} (need N >= 2)")));
    }
    let nf = n as f64;
    let mut x = vec![0.0; n + 1];
    x[0] = -1.0;
    x[n] = 1.0;
    for j in 1..n {
        // Chebyshev-Gauss-Lobatto seed, refined by Newton on (1 - x²) P_N'(x).
        let mut xi = -(std::f64::consts::PI * j as f64 / nf).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev, _) = legendre(n, xi);
            let step = (xi * p - p_prev) / ((nf + 1.0) * p);
            xi -= step;
            if step.abs() < NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::RootSearch { order: n, index: j });
        }
        x[j] = xi;
    }
    // exact antisymmetry
    for j in 1..=n / 2 {
        let avg = 0.5 * (x[n - j] - x[j]);
        x[j] = -avg;
        x[n - j] = avg;
    }
    if n % 2 == 0 {
        x[n / 2] = 0.0;
    }
    Ok(x)
}

/// Maps `x ∈ [-1, 1]` to `(r, dr/dx)`.
pub fn map_to_radial(x: f64, map_length: f64, r_c: f64) -> (f64, f64) {
    let alpha = 2.0 * map_length / r_c;
    let denom = 1.0 - x + alpha;
    let r = map_length * (1.0 + x) / denom;
    let jac = map_length * (2.0 + alpha) / (denom * denom);
    (r, jac)
}

/// Collocation grid, quadrature and operators for one cavity radius.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub spec: GridSpec,
    /// Collocation abscissae, `x[0] = -1`, `x[N] = 1`.
    pub x: Vec<f64>,
    /// Mapped radii, `r[0] = 0`, `r[N] = r_c`.
    pub r: Vec<f64>,
    /// `dr/dx` at each node.
    pub jac: Vec<f64>,
    /// Lobatto weights in `x`.
    pub wx: Vec<f64>,
    /// Weights for `∫₀^{r_c} f(r) dr`.
    pub w: Vec<f64>,
    /// First-derivative matrix in `r`, `(N+1) × (N+1)`.
    pub d1: DMatrix<f64>,
    /// Second-derivative matrix in `r`.
    pub d2: DMatrix<f64>,
    /// Running integral: `(cumulative · f)_i ≈ ∫₀^{r_i} f dr`.
    pub cumulative: DMatrix<f64>,
    /// Per-interval quadrature `(node, weight)` lists for `∫_{r_{k-1}}^{r_k} f dr`.
    local_steps: Vec<Vec<(usize, f64)>>,
    /// Per-node `(first node, d/dr weights, d²/dr² weights)` of short stencils.
    local_diff: Vec<(usize, Vec<f64>, Vec<f64>)>,
    /// Symmetric kinetic matrix on the interior nodes.
    pub kinetic: DMatrix<f64>,
    /// `sqrt(w_i)` on interior nodes; maps eigenvectors of `kinetic` to `u(r_i)`.
    pub sqrt_w_interior: Vec<f64>,
    /// `P_N(x_j)`; the barycentric weights of the Lobatto nodes are `1 / P_N(x_j)`.
    legendre_at_nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.order();
        let x = collocation_points(n)?;
        let nf = n as f64;

        let pn: Vec<f64> = x.iter().map(|&xi| legendre(n, xi).0).collect();
        let wx: Vec<f64> = pn.iter().map(|p| 2.0 / (nf * (nf + 1.0) * p * p)).collect();

        let mut dx = DMatrix::<f64>::zeros(n + 1, n + 1);
        for i in 0..=n {
            let mut row_sum = 0.0;
            for j in 0..=n {
                if i != j {
                    let v = pn[i] / (pn[j] * (x[i] - x[j]));
                    dx[(i, j)] = v;
                    row_sum += v;
                }
            }
            dx[(i, i)] = -row_sum;
        }

        let (mut r, mut jac) = (Vec::with_capacity(n + 1), Vec::with_capacity(n + 1));
        for &xi in &x {
            let (ri, ji) = map_to_radial(xi, spec.map_length, spec.r_c);
            r.push(ri);
            jac.push(ji);
        }
        r[0] = 0.0;
        r[n] = spec.r_c;

        let w: Vec<f64> = wx.iter().zip(&jac).map(|(a, b)| a * b).collect();

        let mut d1 = dx.clone();
        for i in 0..=n {
            let s = 1.0 / jac[i];
            for j in 0..=n {
                d1[(i, j)] *= s;
            }
        }
        let d2 = &d1 * &d1;

        let cumulative = cumulative_integral_x(&x, &wx) * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&jac));
        let local_steps = local_interval_weights(&x, &jac);
        let local_diff = local_derivative_weights(&r);

        // K_ij = ½ Σ_m (w_m / r'_m) D_mi D_mj on interior i, j
        let m_int = n - 1;
        let mut scaled = DMatrix::<f64>::zeros(n + 1, m_int);
        for m in 0..=n {
            let s = (wx[m] / jac[m]).sqrt();
            for j in 0..m_int {
                scaled[(m, j)] = s * dx[(m, j + 1)];
            }
        }
        let mut kinetic = scaled.transpose() * &scaled;
        kinetic *= 0.5;
        let sqrt_w_interior: Vec<f64> = (1..n).map(|i| w[i].sqrt()).collect();
        for i in 0..m_int {
            for j in 0..m_int {
                kinetic[(i, j)] /= sqrt_w_interior[i] * sqrt_w_interior[j];
            }
        }
        // remove rounding asymmetry
        let kt = kinetic.transpose();
        kinetic = (kinetic + kt) * 0.5;

        Ok(Self {
            spec,
            x,
            r,
            jac,
            wx,
            w,
            d1,
            d2,
            cumulative,
            local_steps,
            local_diff,
            kinetic,
            sqrt_w_interior,
            legendre_at_nodes: pn,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Number of interior nodes (dimension of the radial Hamiltonian).
    pub fn interior_len(&self) -> usize {
        self.r.len() - 2
    }

    pub fn r_c(&self) -> f64 {
        self.spec.r_c
    }

    /// `∫₀^{r_c} f(r) dr` for `f` sampled on all nodes.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.w).map(|(a, b)| a * b).sum()
    }

    /// Running integral `∫₀^{r_i} f dr` at every node.
    pub fn running_integral(&self, f: &[f64]) -> Vec<f64> {
        mat_vec(&self.cumulative, f)
    }

    /// Running integral built from short piecewise-polynomial steps.
    ///
    /// Less accurate than [`running_integral`](Self::running_integral) far from
    /// the origin, but its error scales with the local size of `f`, so values
    /// near `r = 0` keep their relative precision when `f` vanishes there.
    pub fn local_running_integral(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for k in 1..self.len() {
            let step: f64 = self.local_steps[k - 1].iter().map(|&(i, w)| w * f[i]).sum();
            out[k] = out[k - 1] + step;
        }
        out
    }

    /// First and second `r` derivatives from short finite-difference stencils.
    ///
    /// Less accurate than the spectral matrices for well-resolved functions, but
    /// errors stay local: a sharp feature does not leak oscillations to distant
    /// nodes.
    pub fn local_derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.local_diff
            .iter()
            .map(|(start, c1, c2)| {
                let window = &f[*start..*start + c1.len()];
                let d1 = window.iter().zip(c1).map(|(a, b)| a * b).sum::<f64>();
                let d2 = window.iter().zip(c2).map(|(a, b)| a * b).sum::<f64>();
                (d1, d2)
            })
            .unzip()
    }

    /// Apply the first-derivative matrix.
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        mat_vec(&self.d1, f)
    }

    pub fn second_derivative(&self, f: &[f64]) -> Vec<f64> {
        mat_vec(&self.d2, f)
    }

    /// Extend interior values with the two Dirichlet zeros.
    pub fn with_boundaries(&self, interior: &[f64]) -> Vec<f64> {
        let mut full = Vec::with_capacity(interior.len() + 2);
        full.push(0.0);
        full.extend_from_slice(interior);
        full.push(0.0);
        full
    }

    /// Barycentric evaluation of the collocation interpolant at `r`.
    pub fn interpolate(&self, f: &[f64], r: f64) -> f64 {
        let x = radial_to_x(r, self.spec.map_length, self.spec.r_c);
        let n = self.len() - 1;
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..=n {
            let diff = x - self.x[j];
            if diff.abs() < 1e-15 {
                return f[j];
            }
            let t = 1.0 / (self.legendre_at_nodes[j] * diff);
            num += t * f[j];
            den += t;
        }
        num / den
    }
}

const LOCAL_STENCIL: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        for _ in 0..100 {
            let (p, _, dp) = legendre(m, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, _, dp) = legendre(m, t);
        nodes.push(t);
        weights.push(2.0 / ((1.0 - t * t) * dp * dp));
    }
    (nodes, weights)
}

/// For each interval `[x_{k-1}, x_k]`, integrate the Lagrange interpolant
/// through the nearest `LOCAL_STENCIL` nodes of `f(r(x)) r'(x)`.
fn local_interval_weights(x: &[f64], jac: &[f64]) -> Vec<Vec<(usize, f64)>> {
    let n = x.len();
    let m = LOCAL_STENCIL.min(n);
    let (gx, gw) = gauss_legendre(m / 2 + 1);
    let mut steps = Vec::with_capacity(n - 1);
    for k in 1..n {
        let start = (k as isize - (m / 2) as isize).clamp(0, (n - m) as isize) as usize;
        let stencil: Vec<usize> = (start..start + m).collect();
        let (a, b) = (x[k - 1], x[k]);
        let half = 0.5 * (b - a);
        let mut w = vec![0.0; m];
        for (t, wt) in gx.iter().zip(&gw) {
            let xt = a + half * (t + 1.0);
            for (p, &i) in stencil.iter().enumerate() {
                let mut l = 1.0;
                for &j in &stencil {
                    if j != i {
                        l *= (xt - x[j]) / (x[i] - x[j]);
                    }
                }
                w[p] += wt * half * l;
            }
        }
        steps.push(stencil.iter().zip(w).map(|(&i, wi)| (i, wi * jac[i])).collect());
    }
    steps
}

const DIFF_STENCIL: usize = 9;

/// Fornberg weights for the first two derivatives at `z` from `nodes`.
fn fornberg(z: f64, nodes: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = nodes.len();
    let mut c = vec![[0.0f64; 3]; n];
    let (mut c1, mut c4) = (1.0, nodes[0] - z);
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(2);
        let (mut c2, c5) = (1.0, c4);
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    (c.iter().map(|w| w[1]).collect(), c.iter().map(|w| w[2]).collect())
}

fn local_derivative_weights(r: &[f64]) -> Vec<(usize, Vec<f64>, Vec<f64>)> {
    let n = r.len();
    let m = DIFF_STENCIL.min(n);
    (0..n)
        .map(|k| {
            let start = (k as isize - (m / 2) as isize).clamp(0, (n - m) as isize) as usize;
            let (c1, c2) = fornberg(r[k], &r[start..start + m]);
            (start, c1, c2)
        })
        .collect()
}

/// Inverse of the radial map.
pub fn radial_to_x(r: f64, map_length: f64, r_c: f64) -> f64 {
    let alpha = 2.0 * map_length / r_c;
    // r (1 - x + α) = L (1 + x)  =>  x = (r (1 + α) - L) / (r + L)
    (r * (1.0 + alpha) - map_length) / (r + map_length)
}

fn mat_vec(m: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
    let v = nalgebra::DVectorView::from_slice(f, f.len());
    (m * v).as_slice().to_vec()
}

/// `Q[i][j]` such that `Σ_j Q[i][j] f_j ≈ ∫_{-1}^{x_i} f dx`, built from the
/// discrete Legendre transform of the nodal values.
fn cumulative_integral_x(x: &[f64], wx: &[f64]) -> DMatrix<f64> {
    let n = x.len() - 1;
    // p[k][j] = P_k(x_j) for k = 0..=N+1
    let mut p = DMatrix::<f64>::zeros(n + 2, n + 1);
    for (j, &xj) in x.iter().enumerate() {
        p[(0, j)] = 1.0;
        p[(1, j)] = xj;
        for k in 2..=n + 1 {
            let kf = k as f64;
            p[(k, j)] = ((2.0 * kf - 1.0) * xj * p[(k - 1, j)] - (kf - 1.0) * p[(k - 2, j)]) / kf;
        }
    }
    // analysis: a_k = (1/γ_k) Σ_j w_j P_k(x_j) f_j
    let mut analysis = DMatrix::<f64>::zeros(n + 1, n + 1);
    for k in 0..=n {
        let gamma = if k == n { 2.0 / n as f64 } else { 2.0 / (2.0 * k as f64 + 1.0) };
        for j in 0..=n {
            analysis[(k, j)] = wx[j] * p[(k, j)] / gamma;
        }
    }
    // synthesis of the antiderivative: ∫P_0 = x + 1, ∫P_k = (P_{k+1} - P_{k-1}) / (2k + 1)
    let mut synth = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        synth[(i, 0)] = x[i] + 1.0;
        for k in 1..=n {
            synth[(i, k)] = (p[(k + 1, i)] - p[(k - 1, i)]) / (2.0 * k as f64 + 1.0);
        }
    }
    let mut q = synth * analysis;
    for j in 0..=n {
        q[(0, j)] = 0.0;
    }
    q
}
