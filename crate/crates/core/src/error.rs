use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("Newton search for root {index} of P_N' did not converge (N = {order})")]
    RootSearch { order: usize, index: usize },
    #[error("Hamiltonian is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("channel l = {l} has only {available} states, {requested} requested")]
    TooFewStates { l: usize, requested: usize, available: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("density vanishes on an extended interior region of spin channel {0}")]
    DegenerateDensity(usize),
    #[error("occupancies sum to {found}, expected {expected} electrons")]
    OccupancyMismatch { expected: f64, found: f64 },
    #[error("radial moment k = {0} is not integrable (k must be >= -2)")]
    MomentOrder(i32),
    #[error("SCF did not converge after {iterations} iterations (last dE = {last_de:e}, dV = {last_dv:e})")]
    NotConverged { iterations: usize, last_de: f64, last_dv: f64, history: Vec<crate::scf::IterationRecord> },
    #[error("SCF oscillates even with mixing {mixing}; try a smaller mixing parameter")]
    Oscillation { mixing: f64, history: Vec<crate::scf::IterationRecord> },
    #[error("sum rule does not apply: {0}")]
    SumRule(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("reference file: {0}")]
    Reference(String),
}
