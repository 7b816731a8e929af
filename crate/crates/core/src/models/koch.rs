use num_bigint::BigInt;
use num_rational::BigRational;

use super::{big_pow, check_size, ratio, Family, LabeledGraph, NodeLabel};
use crate::error::Result;
use crate::graph::Graph;

/// Koch network `K_g`: start from a triangle; each iteration, every corner
/// of every existing triangle spawns two new nodes that close a new
/// triangle with it. `N = 2·4^g + 1`, `M = 3·4^g`.
pub fn koch_generate(g: u32) -> Result<LabeledGraph> {
    let nodes = 4u128
        .checked_pow(g)
        .and_then(|p| p.checked_mul(2))
        .map(|p| p + 1);
    let n = check_size("Koch network node count", nodes)?;

    let mut labels = vec![NodeLabel::root(); 3];
    let mut creation_levels = vec![0u32; 3];
    let mut edges = Vec::with_capacity(3 * (n - 1) / 2);
    edges.extend([(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    let mut triangles = vec![[0usize, 1, 2]];

    for level in 1..=g {
        let existing = triangles.len();
        for t in 0..existing {
            for corner in triangles[t] {
                let x = labels.len();
                let y = x + 1;
                let label = labels[corner].child(level);
                labels.push(label.clone());
                labels.push(label);
                creation_levels.extend([level, level]);
                edges.extend([(corner, x, 1.0), (corner, y, 1.0), (x, y, 1.0)]);
                triangles.push([corner, x, y]);
            }
        }
    }
    debug_assert_eq!(labels.len(), n);
    Ok(LabeledGraph {
        graph: Graph::from_edges(n, edges)?,
        generation: g,
        family: Family::Koch,
        creation_levels,
        labels,
    })
}

/// Sum of shortest-path distances from a node with this label to every
/// node of `K_g`: `(g+2)4^g + 2n·4^g − Σ_k 2·4^{g−i_k}`.
pub fn koch_shortest_path_sum(label: &NodeLabel, g: u32) -> Result<BigInt> {
    label.check_generation(g)?;
    let four_g = big_pow(4, g);
    let mut d = BigInt::from(g + 2) * &four_g + BigInt::from(2 * label.depth()) * &four_g;
    for &i in label.tail() {
        d -= BigInt::from(2) * big_pow(4, g - i);
    }
    Ok(d)
}

/// `Σ_y r_xy = (2/3) d_x`; every edge lies on exactly one unit triangle.
pub fn koch_node_resistance(label: &NodeLabel, g: u32) -> Result<BigRational> {
    let d = koch_shortest_path_sum(label, g)?;
    Ok(ratio(d * 2, BigInt::from(3)))
}

/// `(2^{4g+1}(6g+7) + 4^{g+1}) / 9`.
pub fn koch_kirchhoff(g: u32) -> BigRational {
    let num = big_pow(2, 4 * g + 1) * BigInt::from(6 * g + 7) + big_pow(4, g + 1);
    ratio(num, BigInt::from(9))
}

/// Exact `L†_xx` in `K_g`:
/// `(2/(3N))(2n·4^g − Σ_k 2·4^{g−i_k}) + 2^{2g+1}(5·4^g + 3g + 4)/(9N²)`
/// with `N = 2·4^g + 1`. This is `(r_x − δ/N)/N` written out; the
/// label-dependent term carries a single factor of `N`.
pub fn koch_diag_closed_form(label: &NodeLabel, g: u32) -> Result<BigRational> {
    label.check_generation(g)?;
    let four_g = big_pow(4, g);
    let n_nodes: BigInt = BigInt::from(2) * &four_g + 1;
    let mut label_term = BigInt::from(2 * label.depth()) * &four_g;
    for &i in label.tail() {
        label_term -= BigInt::from(2) * big_pow(4, g - i);
    }
    let first = ratio(label_term * 2, BigInt::from(3) * &n_nodes);
    let second = ratio(
        big_pow(2, 2 * g + 1) * (BigInt::from(5) * &four_g + BigInt::from(3 * g + 4)),
        BigInt::from(9) * &n_nodes * &n_nodes,
    );
    Ok(first + second)
}
