//! Weighted undirected graphs and the Laplacian / incidence operators.
//!
//! A [`Graph`] is immutable once built. Edges are stored once with the
//! smaller endpoint first, which also fixes the orientation used by the
//! incidence operator `B` (tail = smaller id). Adjacency is kept in a
//! compressed sparse row layout so every operator runs in `O(N + M)`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Tail; always the smaller endpoint.
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    neighbor_weights: Vec<f64>,
    strengths: Vec<f64>,
    weight_range: Option<(f64, f64)>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples over nodes `0..node_count`.
    ///
    /// Rejects self-loops, repeated pairs, out-of-range ids and weights that
    /// are not finite and strictly positive. Edge order is preserved.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (a, b, w) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::domain(format!("self-loop at node {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            list.push(Edge { u, v, weight: w });
        }
        Ok(Self::assemble(node_count, list))
    }

    fn assemble(node_count: usize, edges: Vec<Edge>) -> Graph {
        let mut degree = vec![0usize; node_count];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        let mut neighbor_weights = vec![0.0; 2 * edges.len()];
        for e in &edges {
            neighbors[fill[e.u]] = e.v;
            neighbor_weights[fill[e.u]] = e.weight;
            fill[e.u] += 1;
            neighbors[fill[e.v]] = e.u;
            neighbor_weights[fill[e.v]] = e.weight;
            fill[e.v] += 1;
        }
        let strengths = (0..node_count)
            .map(|i| neighbor_weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();
        let weight_range = edges.iter().fold(None, |acc: Option<(f64, f64)>, e| {
            Some(match acc {
                None => (e.weight, e.weight),
                Some((lo, hi)) => (lo.min(e.weight), hi.max(e.weight)),
            })
        });
        Graph {
            node_count,
            edges,
            offsets,
            neighbors,
            neighbor_weights,
            strengths,
            weight_range,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    pub fn strength(&self, u: usize) -> f64 {
        self.strengths[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Neighbors of `u` with the connecting edge weights.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.neighbor_weights[range].iter().copied())
    }

    /// `(w_min, w_max)`, or `None` for an edgeless graph.
    pub fn weight_range(&self) -> Option<(f64, f64)> {
        self.weight_range
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Graph> {
        Graph::from_edges(
            self.node_count,
            self.edges.iter().map(|e| (e.u, e.v, e.weight * factor)),
        )
    }

    /// Component id per node, numbered in order of smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.node_count);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut id_of_root = HashMap::new();
        let mut labels = Vec::with_capacity(self.node_count);
        for x in 0..self.node_count {
            let root = uf.find(x);
            let next = id_of_root.len();
            labels.push(*id_of_root.entry(root).or_insert(next));
        }
        (id_of_root.len(), labels)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count > 0 && self.components().0 == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::domain("graph has no nodes"));
        }
        let (count, _) = self.components();
        if count != 1 {
            return Err(Error::Disconnected { components: count });
        }
        Ok(())
    }

    fn check_len(&self, got: usize, want: usize, what: &str) -> Result<()> {
        if got != want {
            return Err(Error::domain(format!(
                "{what} has length {got}, expected {want}"
            )));
        }
        Ok(())
    }

    /// `(S - A) x`.
    pub fn laplacian_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len(), self.node_count, "input vector")?;
        let mut out = vec![0.0; self.node_count];
        self.laplacian_apply(x, &mut out);
        Ok(out)
    }

    /// Unchecked `out = L x`; both slices must have length `N`.
    pub(crate) fn laplacian_apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.strengths[i] * x[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                acc -= self.neighbor_weights[k] * x[self.neighbors[k]];
            }
            *o = acc;
        }
    }

    /// `W^{1/2} B x`, one entry per edge: `sqrt(w) (x_u - x_v)`.
    pub fn weighted_incidence_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len(), self.node_count, "input vector")?;
        Ok(self
            .edges
            .iter()
            .map(|e| e.weight.sqrt() * (x[e.u] - x[e.v]))
            .collect())
    }

    /// `B^T W^{1/2} y` for a vector `y` over edges.
    pub fn weighted_incidence_transpose_apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y.len(), self.edges.len(), "edge vector")?;
        let mut out = vec![0.0; self.node_count];
        for (e, &ye) in self.edges.iter().zip(y) {
            let t = e.weight.sqrt() * ye;
            out[e.u] += t;
            out[e.v] -= t;
        }
        Ok(out)
    }

    /// `x^T L x`, accumulated edge-wise.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len(), self.node_count, "input vector")?;
        Ok(self
            .edges
            .iter()
            .map(|e| {
                let d = x[e.u] - x[e.v];
                e.weight * d * d
            })
            .sum())
    }

    /// Induced subgraph of the largest connected component.
    ///
    /// Ties between equally large components go to the one holding the
    /// smallest node id. Ids are recompacted in increasing original order.
    pub fn largest_connected_component(&self) -> Result<Subgraph> {
        if self.node_count == 0 {
            return Err(Error::domain("cannot take a component of an empty graph"));
        }
        let (count, labels) = self.components();
        let mut sizes = vec![0usize; count];
        for &c in &labels {
            sizes[c] += 1;
        }
        // component ids are ordered by smallest member, so the first maximum wins ties
        let mut best = 0;
        for c in 1..count {
            if sizes[c] > sizes[best] {
                best = c;
            }
        }
        let original_ids: Vec<usize> = (0..self.node_count)
            .filter(|&x| labels[x] == best)
            .collect();
        let mut new_id = vec![usize::MAX; self.node_count];
        for (i, &x) in original_ids.iter().enumerate() {
            new_id[x] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| labels[e.u] == best)
            .map(|e| Edge {
                u: new_id[e.u],
                v: new_id[e.v],
                weight: e.weight,
            })
            .collect();
        Ok(Subgraph {
            graph: Graph::assemble(original_ids.len(), edges),
            original_ids,
        })
    }

    /// Canonical edge-list text: edges sorted by `(u, v)`, weights with 17
    /// significant digits.
    pub fn to_edge_list(&self) -> String {
        let mut sorted: Vec<&Edge> = self.edges.iter().collect();
        sorted.sort_by_key(|e| (e.u, e.v));
        let mut out = String::with_capacity(sorted.len() * 24);
        for e in sorted {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, format_g17(e.weight));
        }
        out
    }

    /// 64-bit FNV-1a hash of the node count and canonical edge list.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::default();
        h.write(format!("{}\n", self.node_count).as_bytes());
        h.write(self.to_edge_list().as_bytes());
        h.0
    }
}

struct Fnv1a(u64);

impl Default for Fnv1a {
    fn default() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv1a {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

/// A component extracted from a larger graph.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// `original_ids[new] = old`.
    pub original_ids: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub comment_prefixes: Vec<String>,
    /// When false a third column is ignored and every weight is 1.
    pub weighted: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            comment_prefixes: vec!["#".into(), "%".into()],
            weighted: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    /// Original token for each compacted id.
    pub node_names: Vec<String>,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Reads a whitespace-separated `u v [w]` edge list.
///
/// Node tokens are arbitrary strings, compacted to `0..N` in order of first
/// appearance. Repeated pairs keep their first weight; self-loops are
/// dropped and counted.
pub fn parse_edge_list(text: &str, opts: &ParseOptions) -> Result<ParsedGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicate_edges = 0;
    let mut self_loops = 0;

    let mut intern = |tok: &str, names: &mut Vec<String>| -> usize {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = names.len();
        ids.insert(tok.to_string(), id);
        names.push(tok.to_string());
        id
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty()
            || opts
                .comment_prefixes
                .iter()
                .any(|p| !p.is_empty() && line.starts_with(p.as_str()))
        {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 or 3 fields, found {}", toks.len()),
            });
        }
        let weight = match toks.get(2) {
            Some(tok) if opts.weighted => {
                let w: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("weight {tok:?} is not a number"),
                })?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::domain(format!(
                        "line {line_no}: weight must be positive and finite, got {w}"
                    )));
                }
                w
            }
            _ => 1.0,
        };
        let a = intern(toks[0], &mut names);
        let b = intern(toks[1], &mut names);
        if a == b {
            self_loops += 1;
            continue;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(key) {
            duplicate_edges += 1;
            continue;
        }
        edges.push(Edge {
            u: key.0,
            v: key.1,
            weight,
        });
    }
    if duplicate_edges > 0 {
        log::warn!("collapsed {duplicate_edges} duplicate edges");
    }
    if self_loops > 0 {
        log::warn!("dropped {self_loops} self-loops");
    }
    Ok(ParsedGraph {
        graph: Graph::assemble(names.len(), edges),
        node_names: names,
        duplicate_edges,
        self_loops,
    })
}

/// Formats like C's `%.17g`: shortest of fixed or scientific notation with
/// trailing zeros removed, enough digits to round-trip any `f64`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };

    if !(-4..17).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        let exp_sign = if exp < 0 { '-' } else { '+' };
        let dot = if frac.is_empty() { "" } else { "." };
        return format!("{sign}{}{dot}{frac}e{exp_sign}{:02}", &digits[..1], exp.abs());
    }
    let mut body = if exp >= 0 {
        let int_len = exp as usize + 1;
        let (int, frac) = digits.split_at(int_len);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    if body.contains('.') {
        body = body.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    format!("{sign}{body}")
}
