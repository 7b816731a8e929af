use num_bigint::BigInt;
use num_rational::BigRational;

use super::{big_pow, check_size, ratio, Family, LabeledGraph};
use crate::error::Result;
use crate::graph::Graph;

/// Pseudofractal scale-free web `F_g`: start from a triangle; each
/// iteration every existing edge gains a new node joined to both of its
/// ends. `N = (3^{g+1} + 3)/2`, `M = 3^{g+1}`.
pub fn psfw_generate(g: u32) -> Result<LabeledGraph> {
    let nodes = 3u128.checked_pow(g + 1).map(|p| (p + 3) / 2);
    let n = check_size("pseudofractal web node count", nodes)?;
    let mut edges: Vec<(usize, usize, f64)> = vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)];
    let mut creation_levels = vec![0u32; 3];
    for level in 1..=g {
        let existing = edges.len();
        for e in 0..existing {
            let (a, b, _) = edges[e];
            let x = creation_levels.len();
            creation_levels.push(level);
            edges.push((a, x, 1.0));
            edges.push((b, x, 1.0));
        }
    }
    debug_assert_eq!(creation_levels.len(), n);
    Ok(LabeledGraph {
        graph: Graph::from_edges(n, edges)?,
        generation: g,
        family: Family::Psfw,
        creation_levels,
        labels: Vec::new(),
    })
}

/// Kirchhoff index of `F_g`:
/// `(50·3^{3g+3} − 35·3^{2g+2}2^{g+1} + 48·3^{2g+2} + 30·3^{g+2}2^{g+1}
///   − 14·3^{g+2} + 225·2^{g+1}) / (112·3^{g+2})`.
pub fn psfw_kirchhoff(g: u32) -> BigRational {
    let t = |c: i64, p3: u32, p2: u32| BigInt::from(c) * big_pow(3, p3) * big_pow(2, p2);
    let num = t(50, 3 * g + 3, 0) - t(35, 2 * g + 2, g + 1) + t(48, 2 * g + 2, 0)
        + t(30, g + 2, g + 1)
        - t(14, g + 2, 0)
        + t(225, 0, g + 1);
    ratio(num, BigInt::from(112) * big_pow(3, g + 2))
}
