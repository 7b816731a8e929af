#![allow(dead_code)]

use std::collections::BTreeSet;

use lapdiag::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Random spanning tree plus `extra` random chords, weights uniform in
/// `[lo, hi]`.
pub fn random_connected(n: usize, extra: usize, lo: f64, hi: f64, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pairs = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        pairs.insert((u, v));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_edges);
    while pairs.len() < target {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(lo..=hi)))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative of every isomorphism class of connected simple
/// graphs on `n` nodes, unit weights.
pub fn connected_unlabeled(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    // mapping[perm][pair] = permuted pair index
    let mapping: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canon = mapping
            .iter()
            .map(|m| {
                (0..pairs.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << m[i])
            })
            .min()
            .unwrap();
        if !seen.insert(canon) {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|&i| canon >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        if n == 1 || (!edges.is_empty() && connected(n, &edges)) {
            out.push(Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap());
        }
    }
    out
}
