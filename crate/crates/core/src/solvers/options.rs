use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Relative optimality gap.
    pub tol_gap: f64,
    /// Absolute constraint tolerance.
    pub tol_feas: f64,
    /// Outer iterations (SCA, BCD cycles, ADMM sweeps / 100).
    pub max_iter: usize,
    /// Newton steps per convex solve.
    pub max_newton: usize,
    pub max_nodes: usize,
    pub max_vertices: usize,
    /// Seed for randomized extraction.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_gap: 1e-6,
            tol_feas: 1e-7,
            max_iter: 200,
            max_newton: 2000,
            max_nodes: 100_000,
            max_vertices: 200_000,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_gap > 0.0 && self.tol_feas > 0.0) {
            return Err(Error::InvalidInput("solver tolerances must be positive".into()));
        }
        if self.max_iter == 0 || self.max_newton == 0 {
            return Err(Error::InvalidInput("iteration limits must be positive".into()));
        }
        Ok(())
    }
}
