//! Exact sparse elimination of a grounded Laplacian.
//!
//! Nodes are eliminated greedily by smallest current degree (ties by id).
//! Eliminating `v` with neighbor weights `w_j` and pivot `d = sum w_j`
//! leaves a Laplacian on the remaining nodes with extra weight
//! `w_a w_b / d` between every neighbor pair. The last node is grounded.
//! Tree-like and chordal graphs eliminate with no fill at all.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub(crate) struct EliminationFactor {
    order: Vec<usize>,
    pivots: Vec<f64>,
    col_ptr: Vec<usize>,
    col_node: Vec<usize>,
    col_mult: Vec<f64>,
    ground: usize,
}

impl EliminationFactor {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::domain("cannot factor an empty graph"));
        }
        let mut adj: Vec<BTreeMap<usize, f64>> = (0..n)
            .map(|u| g.neighbors(u).collect::<BTreeMap<_, _>>())
            .collect();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..n).map(|u| Reverse((adj[u].len(), u))).collect();
        let mut done = vec![false; n];

        let mut order = Vec::with_capacity(n);
        let mut pivots = Vec::with_capacity(n);
        let mut col_ptr = vec![0];
        let mut col_node = Vec::new();
        let mut col_mult = Vec::new();

        while order.len() + 1 < n {
            let Reverse((deg, v)) = heap.pop().expect("heap holds every live node");
            if done[v] || deg != adj[v].len() {
                continue;
            }
            done[v] = true;
            let nbrs: Vec<(usize, f64)> = std::mem::take(&mut adj[v]).into_iter().collect();
            let pivot: f64 = nbrs.iter().map(|&(_, w)| w).sum();
            if pivot.is_nan() || pivot <= 0.0 {
                return Err(Error::Numerical(format!(
                    "zero pivot at node {v}; graph is not connected"
                )));
            }
            for &(j, _) in &nbrs {
                adj[j].remove(&v);
            }
            for (a_idx, &(a, wa)) in nbrs.iter().enumerate() {
                for &(b, wb) in &nbrs[a_idx + 1..] {
                    let w = wa * wb / pivot;
                    *adj[a].entry(b).or_insert(0.0) += w;
                    *adj[b].entry(a).or_insert(0.0) += w;
                }
            }
            for &(j, w) in &nbrs {
                col_node.push(j);
                col_mult.push(w / pivot);
                heap.push(Reverse((adj[j].len(), j)));
            }
            col_ptr.push(col_node.len());
            order.push(v);
            pivots.push(pivot);
        }
        let ground = (0..n).find(|&u| !done[u]).expect("one node stays grounded");
        Ok(EliminationFactor {
            order,
            pivots,
            col_ptr,
            col_node,
            col_mult,
            ground,
        })
    }

    /// Number of stored off-diagonal factor entries.
    pub fn nnz(&self) -> usize {
        self.col_node.len()
    }

    /// Solves `L x = b` with the ground node pinned to zero. `b` should sum
    /// to zero; the result is not mean-centred.
    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) {
        x.copy_from_slice(b);
        for (pos, &v) in self.order.iter().enumerate() {
            let yv = x[v];
            if yv != 0.0 {
                for k in self.col_ptr[pos]..self.col_ptr[pos + 1] {
                    x[self.col_node[k]] += self.col_mult[k] * yv;
                }
            }
        }
        for (pos, &v) in self.order.iter().enumerate() {
            x[v] /= self.pivots[pos];
        }
        x[self.ground] = 0.0;
        for (pos, &v) in self.order.iter().enumerate().rev() {
            let mut acc = x[v];
            for k in self.col_ptr[pos]..self.col_ptr[pos + 1] {
                acc += self.col_mult[k] * x[self.col_node[k]];
            }
            x[v] = acc;
        }
    }
}
