use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{big_pow, check_size, ratio, Family, LabeledGraph, NodeLabel};
use crate::error::{Error, Result};
use crate::graph::Graph;

fn check_f(f: u32) -> Result<()> {
    if f == 0 {
        return Err(Error::domain("uniform recursive tree needs f >= 1"));
    }
    Ok(())
}

/// Uniform recursive tree `U_g`: one central node; each iteration every
/// existing node gains `f` new leaf children. `N = (f+1)^g`, `M = N − 1`.
pub fn urt_generate(g: u32, f: u32) -> Result<LabeledGraph> {
    check_f(f)?;
    let n = check_size(
        "uniform recursive tree node count",
        (f as u128 + 1).checked_pow(g),
    )?;
    let mut labels = Vec::with_capacity(n);
    let mut creation_levels = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    labels.push(NodeLabel::root());
    creation_levels.push(0);
    for level in 1..=g {
        let existing = labels.len();
        for parent in 0..existing {
            let child_label = labels[parent].child(level);
            for _ in 0..f {
                edges.push((parent, labels.len(), 1.0));
                labels.push(child_label.clone());
                creation_levels.push(level);
            }
        }
    }
    debug_assert_eq!(labels.len(), n);
    Ok(LabeledGraph {
        graph: Graph::from_edges(n, edges)?,
        generation: g,
        family: Family::Urt { f },
        creation_levels,
        labels,
    })
}

/// `n − 2 Σ_k (f+1)^{−i_k}` as an exact rational.
fn label_sum(label: &NodeLabel, f: u32) -> BigRational {
    let base = f as u64 + 1;
    let mut acc = BigRational::from_integer(BigInt::from(label.depth()));
    for &i in label.tail() {
        acc -= ratio(BigInt::from(2), big_pow(base, i));
    }
    acc
}

/// `Σ_y r_xy = g f (f+1)^{g−1} + (f+1)^g [n − 2 Σ_k (f+1)^{−i_k}]`.
pub fn urt_node_resistance(label: &NodeLabel, g: u32, f: u32) -> Result<BigRational> {
    check_f(f)?;
    label.check_generation(g)?;
    let base = f as u64 + 1;
    let central = if g == 0 {
        BigRational::zero()
    } else {
        BigRational::from_integer(BigInt::from(g) * BigInt::from(f) * big_pow(base, g - 1))
    };
    Ok(central + BigRational::from_integer(big_pow(base, g)) * label_sum(label, f))
}

/// `(fg − 1)(f+1)^{2g−1} + (f+1)^{g−1}`; zero for the single-node `U_0`.
pub fn urt_kirchhoff(g: u32, f: u32) -> Result<BigRational> {
    check_f(f)?;
    if g == 0 {
        return Ok(BigRational::zero());
    }
    let base = f as u64 + 1;
    let v = (BigInt::from(f) * BigInt::from(g) - 1) * big_pow(base, 2 * g - 1)
        + big_pow(base, g - 1);
    Ok(BigRational::from_integer(v))
}

/// Exact `L†_xx` in `U_g`: `n − 2 Σ_k (f+1)^{−i_k} + 1/(f+1) − (f+1)^{−(g+1)}`.
pub fn urt_diag_closed_form(label: &NodeLabel, g: u32, f: u32) -> Result<BigRational> {
    check_f(f)?;
    label.check_generation(g)?;
    let base = f as u64 + 1;
    Ok(label_sum(label, f) + ratio(BigInt::from(1), BigInt::from(base))
        - ratio(BigInt::from(1), big_pow(base, g + 1)))
}
