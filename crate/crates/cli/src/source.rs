use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lapdiag::models::{koch_generate, psfw_generate, urt_generate, LabeledGraph};
use lapdiag::{parse_edge_list, Graph, ParseOptions};
use serde::Serialize;

use crate::CliError;

/// Where a graph comes from: `koch:G`, `urt:G:F`, `psfw:G`, `file:PATH` or
/// a bare path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Koch { g: u32 },
    Urt { g: u32, f: u32 },
    Psfw { g: u32 },
}

impl FromStr for Source {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot read graph source {s:?}"));
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["file", ..] => Ok(Source::File(PathBuf::from(&s["file:".len()..]))),
            ["koch", g] => Ok(Source::Koch { g: num(g)? }),
            ["psfw", g] => Ok(Source::Psfw { g: num(g)? }),
            ["urt", g, f] => Ok(Source::Urt {
                g: num(g)?,
                f: num(f)?,
            }),
            ["koch" | "psfw" | "urt", ..] => Err(bad()),
            _ => Ok(Source::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File(p) => write!(f, "file:{}", p.display()),
            Source::Koch { g } => write!(f, "koch:{g}"),
            Source::Urt { g, f: c } => write!(f, "urt:{g}:{c}"),
            Source::Psfw { g } => write!(f, "psfw:{g}"),
        }
    }
}

impl Source {
    pub fn generate(&self) -> Option<Result<LabeledGraph, CliError>> {
        let out = match *self {
            Source::File(_) => return None,
            Source::Koch { g } => koch_generate(g),
            Source::Urt { g, f } => urt_generate(g, f),
            Source::Psfw { g } => psfw_generate(g),
        };
        Some(out.map_err(CliError::from))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDescriptor {
    pub source: String,
    pub kind: &'static str,
    /// Node and edge counts before reduction to the largest component.
    pub raw_nodes: usize,
    pub raw_edges: usize,
    pub reduced_to_lcc: bool,
}

/// A graph ready for the numerical commands.
#[derive(Debug)]
pub struct Loaded {
    pub graph: Graph,
    /// Display name of every node, indexed by compacted id.
    pub nodes: Vec<String>,
    pub model: Option<LabeledGraph>,
    pub input: InputDescriptor,
    pub notices: Vec<String>,
}

/// Reads or generates the graph. Disconnected files are reduced to their
/// largest component unless `strict` is set.
pub fn load(source: &Source, strict: bool) -> Result<Loaded, CliError> {
    if let Some(model) = source.generate() {
        let model = model?;
        let graph = model.graph.clone();
        let n = graph.node_count();
        return Ok(Loaded {
            nodes: (0..n).map(|i| i.to_string()).collect(),
            input: InputDescriptor {
                source: source.to_string(),
                kind: "generator",
                raw_nodes: n,
                raw_edges: graph.edge_count(),
                reduced_to_lcc: false,
            },
            graph,
            model: Some(model),
            notices: Vec::new(),
        });
    }
    let Source::File(path) = source else {
        unreachable!()
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_edge_list(&text, &ParseOptions::default())?;
    let mut notices = Vec::new();
    if parsed.duplicate_edges > 0 {
        notices.push(format!(
            "{} duplicate edge(s) ignored; first weight kept",
            parsed.duplicate_edges
        ));
    }
    if parsed.self_loops > 0 {
        notices.push(format!("{} self-loop(s) dropped", parsed.self_loops));
    }
    let raw_nodes = parsed.graph.node_count();
    let raw_edges = parsed.graph.edge_count();
    let (components, _) = parsed.graph.components();
    let (graph, nodes, reduced) = if components > 1 {
        if strict {
            return Err(lapdiag::Error::Disconnected { components }.into());
        }
        let sub = parsed.graph.largest_connected_component()?;
        notices.push(format!(
            "input has {components} components; using the largest ({} nodes, {} edges)",
            sub.graph.node_count(),
            sub.graph.edge_count()
        ));
        let names = sub
            .original_ids
            .iter()
            .map(|&i| parsed.node_names[i].clone())
            .collect();
        (sub.graph, names, true)
    } else {
        (parsed.graph, parsed.node_names, false)
    };
    Ok(Loaded {
        graph,
        nodes,
        model: None,
        input: InputDescriptor {
            source: source.to_string(),
            kind: "file",
            raw_nodes,
            raw_edges,
            reduced_to_lcc: reduced,
        },
        notices,
    })
}
