//! Deterministic recursive model networks and their closed forms.
//!
//! Three families are generated: Koch networks, uniform recursive trees
//! and pseudofractal scale-free webs. Nodes are numbered in creation order
//! (parents before children). Koch and tree nodes carry a level-sequence
//! label `{0, i₁, …, i_n}`; nodes sharing a label share their diagonal
//! `L†_xx`, so the closed forms are evaluated per label in exact rational
//! arithmetic.

mod koch;
mod psfw;
mod urt;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use koch::{
    koch_diag_closed_form, koch_generate, koch_kirchhoff, koch_node_resistance,
    koch_shortest_path_sum,
};
pub use psfw::{psfw_generate, psfw_kirchhoff};
pub use urt::{urt_diag_closed_form, urt_generate, urt_kirchhoff, urt_node_resistance};

/// Generators refuse to build more nodes than this.
pub const MAX_GENERATED_NODES: u128 = 1 << 26;

/// Level sequence `{0, i₁, …, i_n}` with `0 < i₁ < … < i_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    levels: Vec<u32>,
}

impl NodeLabel {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.first() != Some(&0) {
            return Err(Error::domain(format!(
                "label {levels:?} must start with level 0"
            )));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "label {levels:?} must be strictly increasing"
            )));
        }
        Ok(NodeLabel { levels })
    }

    pub fn root() -> Self {
        NodeLabel { levels: vec![0] }
    }

    pub(crate) fn child(&self, level: u32) -> Self {
        debug_assert!(level > *self.levels.last().unwrap());
        let mut levels = self.levels.clone();
        levels.push(level);
        NodeLabel { levels }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Number of levels after the leading 0.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `i₁, …, i_n`.
    pub fn tail(&self) -> &[u32] {
        &self.levels[1..]
    }

    pub(crate) fn check_generation(&self, g: u32) -> Result<()> {
        let last = *self.levels.last().unwrap();
        if last > g {
            return Err(Error::domain(format!(
                "label {self} has level {last} beyond generation {g}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Koch,
    /// Uniform recursive tree with `f` children per node per iteration.
    Urt { f: u32 },
    /// Pseudofractal scale-free web.
    Psfw,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Koch => f.write_str("koch"),
            Family::Urt { f: c } => write!(f, "urt(f={c})"),
            Family::Psfw => f.write_str("psfw"),
        }
    }
}

/// A generated model network with per-node labels.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub generation: u32,
    pub family: Family,
    /// Iteration at which each node was created.
    pub creation_levels: Vec<u32>,
    /// Level-sequence labels; empty for the pseudofractal web.
    pub labels: Vec<NodeLabel>,
}

impl LabeledGraph {
    /// Sidecar text: `node_id<TAB>levels` per line, levels comma-separated.
    /// Pseudofractal nodes list their creation level only.
    pub fn label_file(&self) -> String {
        let mut out = String::new();
        if self.labels.is_empty() {
            for (i, l) in self.creation_levels.iter().enumerate() {
                let _ = writeln!(out, "{i}\t{l}");
            }
        } else {
            for (i, l) in self.labels.iter().enumerate() {
                let _ = writeln!(out, "{i}\t{l}");
            }
        }
        out
    }

    /// Exact `L†_xx` for every node.
    pub fn closed_form_diag(&self) -> Result<Vec<BigRational>> {
        let g = self.generation;
        let mut cache: HashMap<&NodeLabel, BigRational> = HashMap::new();
        let eval = |label: &NodeLabel| match self.family {
            Family::Koch => koch_diag_closed_form(label, g),
            Family::Urt { f } => urt_diag_closed_form(label, g, f),
            Family::Psfw => Err(Error::domain(
                "no per-node closed form for the pseudofractal web",
            )),
        };
        if self.labels.is_empty() {
            return Err(Error::domain(format!("{} graph carries no labels", self.family)));
        }
        let mut out = Vec::with_capacity(self.labels.len());
        for label in &self.labels {
            let value = match cache.get(label) {
                Some(v) => v.clone(),
                None => {
                    let v = eval(label)?;
                    cache.insert(label, v.clone());
                    v
                }
            };
            out.push(value);
        }
        Ok(out)
    }

    pub fn closed_form_kirchhoff(&self) -> Result<BigRational> {
        match self.family {
            Family::Koch => Ok(koch_kirchhoff(self.generation)),
            Family::Urt { f } => urt_kirchhoff(self.generation, f),
            Family::Psfw => Ok(psfw_kirchhoff(self.generation)),
        }
    }

    /// Predicted order of `L†_uu` versus `L†_vv`.
    pub fn compare_nodes(&self, u: usize, v: usize) -> Result<Ordering> {
        let (a, b) = match (self.labels.get(u), self.labels.get(v)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::domain(format!(
                    "nodes {u}, {v} are not both labelled in this {} graph",
                    self.family
                )))
            }
        };
        label_compare(a, b, self.family)
    }
}

/// Predicted order of the diagonal entries of two nodes in the same graph:
/// deeper labels have larger `L†_xx`; at equal depth the label whose first
/// differing level is larger wins.
pub fn label_compare(a: &NodeLabel, b: &NodeLabel, family: Family) -> Result<Ordering> {
    match family {
        Family::Psfw => {
            return Err(Error::domain("pseudofractal nodes have no level labels"));
        }
        Family::Urt { f } if f < 2 => {
            return Err(Error::domain(format!(
                "label ordering needs f >= 2, got f = {f}"
            )));
        }
        _ => {}
    }
    Ok(a
        .depth()
        .cmp(&b.depth())
        .then_with(|| a.levels.cmp(&b.levels)))
}

/// [`label_compare`] for nodes drawn from two graphs, which must be the
/// same family and generation.
pub fn compare_across(a: &LabeledGraph, u: usize, b: &LabeledGraph, v: usize) -> Result<Ordering> {
    if a.family != b.family || a.generation != b.generation {
        return Err(Error::domain(format!(
            "cannot compare {} g={} with {} g={}",
            a.family, a.generation, b.family, b.generation
        )));
    }
    let la = a.labels.get(u).ok_or_else(|| Error::domain(format!("node {u} unlabelled")))?;
    let lb = b.labels.get(v).ok_or_else(|| Error::domain(format!("node {v} unlabelled")))?;
    label_compare(la, lb, a.family)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `"num/den"`, or just `"num"` for integers.
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub(crate) fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

pub(crate) fn check_size(what: &'static str, nodes: Option<u128>) -> Result<usize> {
    match nodes {
        Some(n) if n <= MAX_GENERATED_NODES => Ok(n as usize),
        Some(n) => Err(Error::TooLarge {
            what,
            limit: MAX_GENERATED_NODES as usize,
            actual: n.min(usize::MAX as u128) as usize,
        }),
        None => Err(Error::TooLarge {
            what,
            limit: MAX_GENERATED_NODES as usize,
            actual: usize::MAX,
        }),
    }
}
