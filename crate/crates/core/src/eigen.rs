//! Radial Kohn-Sham eigenproblem for one `(l, spin)` channel.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::diag::Diag;
use faer::{Mat, Par};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// One radial KS orbital `u(r) = r R(r)` sampled on every grid node.
#[derive(Debug, Clone)]
pub struct Orbital {
    pub n: usize,
    pub l: usize,
    pub spin: Spin,
    /// Electrons in this `(n, l, spin)` shell, summed over `m`.
    pub occupancy: f64,
    pub eps: f64,
    /// `u` at all `N + 1` nodes; the end values are the Dirichlet zeros.
    pub u: Vec<f64>,
}

impl Orbital {
    /// Number of sign changes of `u` on the open interval.
    pub fn node_count(&self) -> usize {
        count_nodes(&self.u)
    }
}

/// Sign changes, ignoring values that are negligible against the maximum.
pub fn count_nodes(u: &[f64]) -> usize {
    let max = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let cut = 1e-10 * max;
    let mut last = 0.0;
    let mut nodes = 0;
    for &v in &u[1..u.len() - 1] {
        if v.abs() <= cut {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

/// An eigenpair of one channel.
#[derive(Debug, Clone)]
pub struct ChannelState {
    pub eps: f64,
    /// `u(r)` on all nodes, quadrature-normalized, first lobe positive.
    pub u: Vec<f64>,
}

/// Solve `[-½ d²/dr² + l(l+1)/(2r²) + v(r)] u = ε u` with `u(0) = u(r_c) = 0`.
///
/// `v` holds the potential on all grid nodes; only interior values are used.
pub fn solve_channel(v: &[f64], grid: &RadialGrid, l: usize, k_states: usize) -> Result<Vec<ChannelState>> {
    let m = grid.interior_len();
    if k_states > m {
        return Err(Error::TooFewStates { l, requested: k_states, available: m });
    }
    let mut h: DMatrix<f64> = grid.kinetic.clone();
    let centrifugal = (l * (l + 1)) as f64 / 2.0;
    for i in 0..m {
        let r = grid.r[i + 1];
        let vi = v[i + 1] + centrifugal / (r * r);
        if !vi.is_finite() {
            return Err(Error::Eigensolver(format!("non-finite potential at r = {r}")));
        }
        h[(i, i)] += vi;
    }
    let scale = h.amax();
    let asym = (&h - h.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let hf = Mat::<f64>::from_fn(m, m, |i, j| h[(i, j)]);
    let mut vecs = Mat::<f64>::zeros(m, m);
    let mut vals = Diag::<f64>::zeros(m);
    // sequential: channel solves already run inside parallel scans, and a
    // fixed reduction order keeps reruns bit-identical
    let par = Par::Seq;
    let scratch = evd::self_adjoint_evd_scratch::<f64>(m, ComputeEigenvectors::Yes, par, Default::default());
    evd::self_adjoint_evd(
        hf.as_ref(),
        vals.as_mut(),
        Some(vecs.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        Default::default(),
    )
    .map_err(|e| Error::Eigensolver(format!("no convergence for l = {l}: {e:?}")))?;
    let vals = vals.column_vector();

    // eigenvalues come back in nondecreasing order
    let mut out = Vec::with_capacity(k_states);
    for idx in 0..k_states {
        let mut u = Vec::with_capacity(m + 2);
        u.push(0.0);
        u.extend((0..m).map(|i| vecs[(i, idx)] / grid.sqrt_w_interior[i]));
        u.push(0.0);
        fix_sign(&mut u);
        out.push(ChannelState { eps: vals[idx], u });
    }
    Ok(out)
}

fn fix_sign(u: &mut [f64]) {
    let max = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if let Some(first) = u.iter().find(|v| v.abs() > 1e-8 * max) {
        if *first < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
    }
}
