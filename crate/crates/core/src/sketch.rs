//! Random-projection estimate of every diagonal entry of `L†`.
//!
//! `L†_uu = ‖W^{1/2} B L† e_u‖²`, so projecting the `M`-dimensional
//! columns with a `k × M` random sign matrix `Q` and solving `L z_i = q_i`
//! for each row `q_iᵀ` of `Q W^{1/2} B` gives `L̃†_uu = Σ_i z_i[u]²`.
//! Sign `(i, e)` of `Q` is drawn from a ChaCha stream keyed by `(seed, i)`,
//! so every row is reproducible on its own and results do not depend on
//! how rows are scheduled across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{LaplacianSolver, Preconditioner, SolveOptions};

/// Smallest solver tolerance ever requested.
pub const DELTA_FLOOR: f64 = 1e-14;

/// Rows solved per parallel batch; bounds peak memory at `ROW_BATCH × N`.
const ROW_BATCH: usize = 64;

/// `⌈24 ln n / ε²⌉`.
pub fn jl_dimension(n: usize, epsilon: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 nodes, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok((24.0 * (n as f64).ln() / (epsilon * epsilon)).ceil() as usize)
}

/// Per-row solver accuracy that keeps the solve error inside the
/// `(1 ± ε)²` envelope: `(ε/3) sqrt((N−1)(1−ε) w_min / (N⁴ (1+ε) w_max))`.
pub fn solver_tolerance(n: usize, epsilon: f64, w_min: f64, w_max: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 nodes, got {n}")));
    }
    check_epsilon(epsilon)?;
    if !(w_min > 0.0 && w_min <= w_max && w_max.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < w_min <= w_max, got w_min={w_min}, w_max={w_max}"
        )));
    }
    let nf = n as f64;
    let ratio = (nf - 1.0) * (1.0 - epsilon) * w_min / (nf.powi(4) * (1.0 + epsilon) * w_max);
    Ok(epsilon / 3.0 * ratio.sqrt())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1/2], got {epsilon}"
        )));
    }
    Ok(())
}

/// Row `i` of `Q W^{1/2} B` as a vector over nodes, with `Q` entries
/// `±1/√k`.
pub fn sketch_row(g: &Graph, k: usize, seed: u64, row: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    let scale = 1.0 / (k as f64).sqrt();
    let mut out = vec![0.0; g.node_count()];
    let mut bits = 0u64;
    for (e, edge) in g.edges().iter().enumerate() {
        if e % 64 == 0 {
            bits = rng.next_u64();
        }
        let sign = if bits >> (e % 64) & 1 == 1 { 1.0 } else { -1.0 };
        let t = sign * scale * edge.weight.sqrt();
        out[edge.u] += t;
        out[edge.v] -= t;
    }
    out
}

/// All `k` rows of `Q W^{1/2} B`.
pub fn sketch_rows(g: &Graph, k: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if k == 0 {
        return Err(Error::domain("sketch needs at least one row"));
    }
    Ok((0..k).map(|i| sketch_row(g, k, seed, i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Preconditioner and iteration cap for the row solves; the tolerance
    /// field is replaced by the derived `delta`.
    pub solver: SolveOptions,
}

impl SketchConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        SketchConfig {
            epsilon,
            seed,
            solver: SolveOptions {
                preconditioner: Preconditioner::Elimination,
                ..SolveOptions::default()
            },
        }
    }

    pub fn with_preconditioner(mut self, preconditioner: Preconditioner) -> Self {
        self.solver.preconditioner = preconditioner;
        self
    }

    /// Resolves `k` and `delta` for a concrete graph.
    pub fn bind(&self, g: &Graph) -> Result<SketchParams> {
        check_epsilon(self.epsilon)?;
        let n = g.node_count();
        let k = jl_dimension(n, self.epsilon)?;
        let (w_min, w_max) = g
            .weight_range()
            .ok_or_else(|| Error::domain("graph has no edges"))?;
        let raw = solver_tolerance(n, self.epsilon, w_min, w_max)?;
        let delta_clamped = raw < DELTA_FLOOR;
        Ok(SketchParams {
            epsilon: self.epsilon,
            seed: self.seed,
            k,
            delta: raw.max(DELTA_FLOOR),
            delta_clamped,
            solver: SolveOptions {
                tolerance: raw.max(DELTA_FLOOR),
                ..self.solver
            },
        })
    }
}

/// A [`SketchConfig`] bound to one graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    pub epsilon: f64,
    pub seed: u64,
    pub k: usize,
    pub delta: f64,
    pub delta_clamped: bool,
    pub solver: SolveOptions,
}

#[derive(Debug, Clone)]
pub struct DiagEstimate {
    /// Estimated `L†_uu` per node.
    pub values: Vec<f64>,
    /// `N · Σ_u values[u]`.
    pub kirchhoff: f64,
    pub params: SketchParams,
    /// PCG iterations used by each sketch row.
    pub solve_iterations: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Estimates every `L†_uu` within `(1 ± ε)²` with probability `≥ 1 − 1/N`.
pub fn approx_diag(g: &Graph, epsilon: f64, seed: u64) -> Result<DiagEstimate> {
    approx_diag_with(g, &SketchConfig::new(epsilon, seed))
}

/// Like [`approx_diag`] with explicit solver settings. Runs sketch rows on
/// the current rayon pool.
pub fn approx_diag_with(g: &Graph, config: &SketchConfig) -> Result<DiagEstimate> {
    g.require_connected()?;
    let params = config.bind(g)?;
    let mut warnings = Vec::new();
    if params.delta_clamped {
        let msg = format!("solver tolerance clamped to {DELTA_FLOOR:e}");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let solver = LaplacianSolver::new(g, params.solver)?;
    let n = g.node_count();
    let mut values = vec![0.0; n];
    let mut solve_iterations = Vec::with_capacity(params.k);

    let mut start = 0;
    while start < params.k {
        let end = (start + ROW_BATCH).min(params.k);
        let batch: Vec<Result<_>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let q = sketch_row(g, params.k, params.seed, i);
                solver.solve(&q).map_err(|e| Error::RowSolve {
                    row: i,
                    source: Box::new(e),
                })
            })
            .collect();
        // merged in row order so the sums are independent of scheduling
        for solution in batch {
            let solution = solution?;
            for (v, z) in values.iter_mut().zip(&solution.x) {
                *v += z * z;
            }
            solve_iterations.push(solution.iterations);
        }
        start = end;
    }
    let kirchhoff = n as f64 * values.iter().sum::<f64>();
    Ok(DiagEstimate {
        values,
        kirchhoff,
        params,
        solve_iterations,
        warnings,
    })
}
