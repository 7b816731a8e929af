//! Laplacian solves on the subspace orthogonal to the all-ones vector.
//!
//! The solver is preconditioned conjugate gradient with the iterate and
//! residual re-projected onto `1⊥` every step. It targets the energy-norm
//! contract `‖x − L†y‖_L ≤ θ ‖L†y‖_L` through the surrogate stopping rule
//! `‖Lx − y‖₂ / ‖y‖₂ ≤ θ / 10`.

mod elimination;

use crate::error::{Error, Result};
use crate::graph::Graph;
use elimination::EliminationFactor;

const MAX_RESTARTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    /// Jacobi scaling by node strength.
    Diagonal,
    /// Exact sparse elimination with a grounded node; PCG then converges in
    /// one or two steps. Factorisation cost depends on fill.
    Elimination,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Contract accuracy θ, in `(0, 1)`.
    pub tolerance: f64,
    /// `None` means `10 ⌈√N⌉ + 1000`.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tolerance: 1e-6,
            max_iterations: None,
            preconditioner: Preconditioner::Diagonal,
        }
    }
}

impl SolveOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        SolveOptions {
            tolerance,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::domain(format!(
                "solver tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        Ok(())
    }

    /// Relative-residual threshold actually enforced.
    pub fn residual_tolerance(&self) -> f64 {
        self.tolerance / 10.0
    }

    pub fn iteration_limit(&self, n: usize) -> usize {
        self.max_iterations
            .unwrap_or_else(|| 10 * (n as f64).sqrt().ceil() as usize + 1000)
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True relative residual `‖Lx − y‖ / ‖y‖` of the returned iterate,
    /// with `y` already projected onto `1⊥`.
    pub relative_residual: f64,
}

enum Precond {
    Identity,
    Jacobi(Vec<f64>),
    Elimination(EliminationFactor),
}

/// A solver bound to one graph; reusable across right-hand sides and
/// shareable across threads.
pub struct LaplacianSolver<'g> {
    graph: &'g Graph,
    opts: SolveOptions,
    precond: Precond,
}

impl<'g> LaplacianSolver<'g> {
    pub fn new(graph: &'g Graph, opts: SolveOptions) -> Result<Self> {
        opts.validate()?;
        graph.require_connected()?;
        let precond = match opts.preconditioner {
            Preconditioner::None => Precond::Identity,
            Preconditioner::Diagonal => {
                Precond::Jacobi(graph.strengths().iter().map(|&s| 1.0 / s).collect())
            }
            Preconditioner::Elimination => {
                let f = EliminationFactor::new(graph)?;
                log::debug!(
                    "elimination factor: {} off-diagonal entries for {} edges",
                    f.nnz(),
                    graph.edge_count()
                );
                Precond::Elimination(f)
            }
        };
        Ok(LaplacianSolver {
            graph,
            opts,
            precond,
        })
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    fn apply_precond(&self, r: &[f64], z: &mut [f64]) {
        match &self.precond {
            Precond::Identity => z.copy_from_slice(r),
            Precond::Jacobi(inv) => {
                for ((zi, ri), di) in z.iter_mut().zip(r).zip(inv) {
                    *zi = ri * di;
                }
            }
            Precond::Elimination(f) => f.solve_into(r, z),
        }
        project(z);
    }

    pub fn solve(&self, y: &[f64]) -> Result<Solution> {
        let g = self.graph;
        let n = g.node_count();
        if y.len() != n {
            return Err(Error::domain(format!(
                "right-hand side has length {}, expected {n}",
                y.len()
            )));
        }
        let mut b = y.to_vec();
        project(&mut b);
        let b_norm = norm(&b);
        if b_norm == 0.0 || n == 1 {
            return Ok(Solution {
                x: vec![0.0; n],
                iterations: 0,
                relative_residual: 0.0,
            });
        }
        let tol = self.opts.residual_tolerance();
        let limit = self.opts.iteration_limit(n);

        let mut x = vec![0.0; n];
        let mut r = b.clone();
        let mut z = vec![0.0; n];
        let mut p = vec![0.0; n];
        let mut ap = vec![0.0; n];
        let mut iterations = 0;
        let mut restarts = 0;

        // restart from the true residual if the recurrence drifted
        loop {
            self.apply_precond(&r, &mut z);
            p.copy_from_slice(&z);
            let mut rz = dot(&r, &z);
            while iterations < limit {
                iterations += 1;
                g.laplacian_apply(&p, &mut ap);
                let pap = dot(&p, &ap);
                if pap.is_nan() || pap <= 0.0 {
                    break;
                }
                let alpha = rz / pap;
                axpy(alpha, &p, &mut x);
                axpy(-alpha, &ap, &mut r);
                project(&mut r);
                if norm(&r) <= tol * b_norm {
                    break;
                }
                self.apply_precond(&r, &mut z);
                let rz_next = dot(&r, &z);
                let beta = rz_next / rz;
                rz = rz_next;
                for (pi, zi) in p.iter_mut().zip(&z) {
                    *pi = zi + beta * *pi;
                }
            }
            project(&mut x);
            g.laplacian_apply(&x, &mut r);
            for (ri, bi) in r.iter_mut().zip(&b) {
                *ri = bi - *ri;
            }
            project(&mut r);
            let rel = norm(&r) / b_norm;
            if rel <= tol {
                return Ok(Solution {
                    x,
                    iterations,
                    relative_residual: rel,
                });
            }
            if iterations >= limit || !rel.is_finite() {
                return Err(Error::NotConverged {
                    iterations,
                    residual: rel,
                });
            }
            restarts += 1;
            if restarts > MAX_RESTARTS {
                return Err(Error::NotConverged {
                    iterations,
                    residual: rel,
                });
            }
        }
    }
}

/// Solves `L x = y − mean(y)·1` with `1ᵀx = 0`.
pub fn lapl_solve(g: &Graph, y: &[f64], opts: &SolveOptions) -> Result<Solution> {
    LaplacianSolver::new(g, *opts)?.solve(y)
}

pub(crate) fn project(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
