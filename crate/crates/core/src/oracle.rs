//! Ground truth for small graphs.
//!
//! Two independent routes to `L†`: a dense factorisation of `L + J/N`, and
//! enumeration of spanning rooted forests over every edge subset. The dense
//! route also yields resistance distances, the Kirchhoff index and Foster's
//! sum. Nothing here shares code with the sketch or the iterative solver.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sketch::DiagEstimate;
use crate::unionfind::UnionFind;

pub const DEFAULT_DENSE_CAP: usize = 20_000;
pub const FOREST_EDGE_CAP: usize = 20;

/// The full pseudoinverse `L† = (L + J/N)⁻¹ − J/N` of a connected graph.
pub struct DensePseudoinverse {
    n: usize,
    lplus: Mat<f64>,
}

impl DensePseudoinverse {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_cap(g, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(g: &Graph, cap: usize) -> Result<Self> {
        let n = g.node_count();
        if n > cap {
            return Err(Error::TooLarge {
                what: "dense pseudoinverse node count (use approx_diag instead)",
                limit: cap,
                actual: n,
            });
        }
        g.require_connected()?;
        let shift = 1.0 / n as f64;
        let mut a = Mat::<f64>::from_fn(n, n, |_, _| shift);
        for e in g.edges() {
            a[(e.u, e.v)] -= e.weight;
            a[(e.v, e.u)] -= e.weight;
        }
        for (i, &s) in g.strengths().iter().enumerate() {
            a[(i, i)] += s;
        }
        let llt = a
            .llt(Side::Lower)
            .map_err(|e| Error::Numerical(format!("L + J/N is not positive definite: {e:?}")))?;
        let mut lplus = llt.inverse();
        for j in 0..n {
            for i in 0..n {
                lplus[(i, j)] -= shift;
            }
        }
        Ok(DensePseudoinverse { n, lplus })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.lplus[(i, j)]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.lplus[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.lplus[(i, i)]).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.lplus[(i, j)]).sum())
            .collect()
    }

    /// Effective resistance; zero when `u == v`.
    pub fn resistance(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        self.lplus[(u, u)] + self.lplus[(v, v)] - self.lplus[(u, v)] - self.lplus[(v, u)]
    }

    /// `Σ_v r_uv = N L†_uu + tr L†`.
    pub fn node_resistance(&self, u: usize) -> f64 {
        self.n as f64 * self.lplus[(u, u)] + self.trace()
    }

    /// `N tr L†`.
    pub fn kirchhoff(&self) -> f64 {
        self.n as f64 * self.trace()
    }

    /// `Σ_edges w_ij r_ij`; equals `N − 1` on a connected graph.
    pub fn foster_sum(&self, g: &Graph) -> f64 {
        g.edges()
            .iter()
            .map(|e| e.weight * self.resistance(e.u, e.v))
            .sum()
    }
}

fn check_node(g: &Graph, u: usize) -> Result<()> {
    if u >= g.node_count() {
        return Err(Error::domain(format!(
            "node {u} out of range 0..{}",
            g.node_count()
        )));
    }
    Ok(())
}

pub fn exact_pseudoinverse_diag(g: &Graph) -> Result<Vec<f64>> {
    Ok(DensePseudoinverse::new(g)?.diag())
}

pub fn exact_resistance(g: &Graph, u: usize, v: usize) -> Result<f64> {
    check_node(g, u)?;
    check_node(g, v)?;
    if u == v {
        return Ok(0.0);
    }
    Ok(DensePseudoinverse::new(g)?.resistance(u, v))
}

pub fn node_resistance_distance(g: &Graph, u: usize) -> Result<f64> {
    check_node(g, u)?;
    Ok(DensePseudoinverse::new(g)?.node_resistance(u))
}

pub fn kirchhoff_exact(g: &Graph) -> Result<f64> {
    Ok(DensePseudoinverse::new(g)?.kirchhoff())
}

pub fn foster_check(g: &Graph) -> Result<f64> {
    Ok(DensePseudoinverse::new(g)?.foster_sum(g))
}

/// Weights of the spanning rooted forest families used to express `L†_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestWeights {
    /// Rooted spanning trees.
    pub one_tree: f64,
    /// Rooted two-tree forests.
    pub two_trees: f64,
    /// Two-tree forests where node `i`'s tree is rooted at `i`, per node.
    pub two_trees_rooted_at: Vec<f64>,
}

impl ForestWeights {
    pub fn diag(&self) -> Vec<f64> {
        let n = self.two_trees_rooted_at.len() as f64;
        self.two_trees_rooted_at
            .iter()
            .map(|&fii| (fii - self.two_trees / n) / self.one_tree)
            .collect()
    }
}

/// Enumerates all `2^M` edge subsets of a connected graph with `M ≤ 20`.
pub fn forest_weights(g: &Graph) -> Result<ForestWeights> {
    let m = g.edge_count();
    if m > FOREST_EDGE_CAP {
        return Err(Error::TooLarge {
            what: "forest enumeration edge count",
            limit: FOREST_EDGE_CAP,
            actual: m,
        });
    }
    g.require_connected()?;
    let n = g.node_count();
    let mut out = ForestWeights {
        one_tree: 0.0,
        two_trees: 0.0,
        two_trees_rooted_at: vec![0.0; n],
    };
    if n == 1 {
        out.one_tree = 1.0;
        return Ok(out);
    }
    let edges = g.edges();
    let mut uf = UnionFind::new(n);
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size + 2 < n || size + 1 > n {
            continue;
        }
        uf.reset();
        let mut weight = 1.0;
        let mut acyclic = true;
        for (i, e) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if !uf.union(e.u, e.v) {
                    acyclic = false;
                    break;
                }
                weight *= e.weight;
            }
        }
        if !acyclic {
            continue;
        }
        if size + 1 == n {
            out.one_tree += weight * n as f64;
        } else {
            let a = uf.component_size(0);
            out.two_trees += weight * (a * (n - a)) as f64;
            for (i, slot) in out.two_trees_rooted_at.iter_mut().enumerate() {
                *slot += weight * (n - uf.component_size(i)) as f64;
            }
        }
    }
    Ok(out)
}

/// `L†_ii` from spanning rooted forest weights.
pub fn forest_weight_diag(g: &Graph) -> Result<Vec<f64>> {
    Ok(forest_weights(g)?.diag())
}

/// Relative errors of an estimate against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Mean of `|exact − estimate| / exact` over nodes.
    pub sigma: f64,
    pub sigma_max: f64,
    /// `(δ − δ̃) / δ` for the Kirchhoff index.
    pub rho: f64,
    pub n: usize,
}

pub fn relative_errors(
    exact: &[f64],
    exact_kirchhoff: f64,
    estimate: &[f64],
    estimate_kirchhoff: f64,
) -> Result<ErrorReport> {
    if exact.len() != estimate.len() {
        return Err(Error::domain(format!(
            "exact has {} entries, estimate has {}",
            exact.len(),
            estimate.len()
        )));
    }
    if let Some(i) = exact.iter().position(|&x| x.is_nan() || x <= 0.0) {
        return Err(Error::domain(format!(
            "exact value at node {i} is {}; relative error is undefined",
            exact[i]
        )));
    }
    if exact_kirchhoff == 0.0 {
        return Err(Error::domain("exact Kirchhoff index is zero"));
    }
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for (&x, &y) in exact.iter().zip(estimate) {
        let r = (x - y).abs() / x;
        sum += r;
        max = max.max(r);
    }
    Ok(ErrorReport {
        sigma: if exact.is_empty() { 0.0 } else { sum / exact.len() as f64 },
        sigma_max: max,
        rho: (exact_kirchhoff - estimate_kirchhoff) / exact_kirchhoff,
        n: exact.len(),
    })
}

/// Compares a sketch estimate with exact diagonals; the exact Kirchhoff
/// index is taken as `N Σ exact`.
pub fn error_metrics(exact: &[f64], estimate: &DiagEstimate) -> Result<ErrorReport> {
    let kirchhoff = exact.len() as f64 * exact.iter().sum::<f64>();
    relative_errors(exact, kirchhoff, &estimate.values, estimate.kirchhoff)
}
