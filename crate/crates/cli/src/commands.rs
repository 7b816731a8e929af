use std::fmt::Write as _;
use std::time::Instant;

use lapdiag::graph::format_g17;
use lapdiag::models::{rational_string, to_f64};
use lapdiag::oracle::DEFAULT_DENSE_CAP;
use lapdiag::{approx_diag_with, relative_errors, DensePseudoinverse, Preconditioner, SketchConfig};
use serde::{Deserialize, Serialize};

use crate::source::{load, InputDescriptor, Source};
use crate::{CliError, DENSE_CAP_ENV};

/// Embedded in every result so the run can be repeated.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: InputDescriptor,
    pub config: ManifestConfig,
    /// Wall-clock milliseconds per phase.
    pub timings_ms: Timings,
    /// Arguments that reproduce this result.
    pub argv: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ManifestConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preconditioner: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_cap: Option<usize>,
    pub strict: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub load: f64,
    pub compute: f64,
    pub total: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn fingerprint_hex(g: &lapdiag::Graph) -> String {
    format!("{:016x}", g.fingerprint())
}

fn preconditioner_name(p: Preconditioner) -> &'static str {
    match p {
        Preconditioner::None => "none",
        Preconditioner::Diagonal => "diagonal",
        Preconditioner::Elimination => "elimination",
    }
}

fn report_notices(notices: &[String]) {
    for n in notices {
        log::warn!("{n}");
    }
}

#[derive(Debug, Clone)]
pub struct ApproxArgs {
    pub source: Source,
    pub epsilon: f64,
    pub seed: u64,
    /// Size of the sketch-row worker pool; the global pool when `None`.
    pub threads: Option<usize>,
    pub strict: bool,
    pub preconditioner: Preconditioner,
    /// Per-row PCG iteration cap; the solver default when `None`.
    pub max_iterations: Option<usize>,
}

impl ApproxArgs {
    pub fn new(source: Source, epsilon: f64, seed: u64) -> Self {
        ApproxArgs {
            source,
            epsilon,
            seed,
            threads: None,
            strict: false,
            preconditioner: Preconditioner::Elimination,
            max_iterations: None,
        }
    }

    fn argv(&self) -> Vec<String> {
        let mut v = vec![
            "approx".to_string(),
            self.source.to_string(),
            "--epsilon".into(),
            format_g17(self.epsilon),
            "--seed".into(),
            self.seed.to_string(),
            "--preconditioner".into(),
            preconditioner_name(self.preconditioner).into(),
        ];
        if let Some(m) = self.max_iterations {
            v.extend(["--max-iterations".to_string(), m.to_string()]);
        }
        if self.strict {
            v.push("--strict".into());
        }
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxOutput {
    pub command: &'static str,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub k: usize,
    pub delta: f64,
    pub delta_clamped: bool,
    pub seed: u64,
    pub fingerprint: String,
    pub nodes: Vec<String>,
    pub diag: Vec<f64>,
    pub kirchhoff: f64,
    pub solve_iterations: Vec<usize>,
    pub elapsed_ms: f64,
    pub notices: Vec<String>,
    pub manifest: RunManifest,
}

impl ApproxOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,diag\n");
        for (name, d) in self.nodes.iter().zip(&self.diag) {
            let _ = writeln!(out, "{name},{}", format_g17(*d));
        }
        out
    }
}

pub fn cmd_approx(args: &ApproxArgs) -> Result<ApproxOutput, CliError> {
    let start = Instant::now();
    if !(args.epsilon > 0.0 && args.epsilon <= 0.5) {
        return Err(CliError::Usage(format!(
            "--epsilon must lie in (0, 0.5], got {}",
            args.epsilon
        )));
    }
    let loaded = load(&args.source, args.strict)?;
    report_notices(&loaded.notices);
    let load_ms = millis(start);

    let compute_start = Instant::now();
    let mut config =
        SketchConfig::new(args.epsilon, args.seed).with_preconditioner(args.preconditioner);
    config.solver.max_iterations = args.max_iterations;
    let estimate = match args.threads {
        None => approx_diag_with(&loaded.graph, &config)?,
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?;
            pool.install(|| approx_diag_with(&loaded.graph, &config))?
        }
    };
    let compute_ms = millis(compute_start);
    let mut notices = loaded.notices;
    notices.extend(estimate.warnings.iter().cloned());
    let total = millis(start);

    Ok(ApproxOutput {
        command: "approx",
        n: loaded.graph.node_count(),
        m: loaded.graph.edge_count(),
        epsilon: args.epsilon,
        k: estimate.params.k,
        delta: estimate.params.delta,
        delta_clamped: estimate.params.delta_clamped,
        seed: args.seed,
        fingerprint: fingerprint_hex(&loaded.graph),
        nodes: loaded.nodes,
        diag: estimate.values,
        kirchhoff: estimate.kirchhoff,
        solve_iterations: estimate.solve_iterations,
        elapsed_ms: total,
        notices,
        manifest: RunManifest {
            tool: "lapdiag",
            version: env!("CARGO_PKG_VERSION"),
            command: "approx",
            input: loaded.input,
            config: ManifestConfig {
                epsilon: Some(args.epsilon),
                seed: Some(args.seed),
                threads: args.threads,
                preconditioner: Some(preconditioner_name(args.preconditioner)),
                max_iterations: args.max_iterations,
                dense_cap: None,
                strict: args.strict,
            },
            timings_ms: Timings {
                load: load_ms,
                compute: compute_ms,
                total,
            },
            argv: args.argv(),
        },
    })
}

#[derive(Debug, Clone)]
pub struct ExactArgs {
    pub source: Source,
    /// Overrides both the environment and the default cap.
    pub dense_cap: Option<usize>,
    pub strict: bool,
}

impl ExactArgs {
    pub fn new(source: Source) -> Self {
        ExactArgs {
            source,
            dense_cap: None,
            strict: false,
        }
    }

    fn resolve_cap(&self) -> Result<usize, CliError> {
        if let Some(c) = self.dense_cap {
            return Ok(c);
        }
        match std::env::var(DENSE_CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Usage(format!("{DENSE_CAP_ENV}={v:?} is not a node count"))
            }),
            Err(_) => Ok(DEFAULT_DENSE_CAP),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Foster {
    pub sum: f64,
    pub expected: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedForm {
    /// Exact `L†_xx` per node as `num/den`; absent for the pseudofractal web.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<String>>,
    pub kirchhoff: String,
    pub kirchhoff_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactOutput {
    pub command: &'static str,
    pub n: usize,
    pub m: usize,
    pub fingerprint: String,
    pub nodes: Vec<String>,
    pub diag: Vec<f64>,
    pub kirchhoff: f64,
    pub node_resistance: Vec<f64>,
    pub foster: Foster,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForm>,
    pub elapsed_ms: f64,
    pub notices: Vec<String>,
    pub manifest: RunManifest,
}

impl ExactOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,diag,node_resistance\n");
        for ((name, d), r) in self.nodes.iter().zip(&self.diag).zip(&self.node_resistance) {
            let _ = writeln!(out, "{name},{},{}", format_g17(*d), format_g17(*r));
        }
        out
    }
}

pub fn cmd_exact(args: &ExactArgs) -> Result<ExactOutput, CliError> {
    let start = Instant::now();
    let cap = args.resolve_cap()?;
    let loaded = load(&args.source, args.strict)?;
    report_notices(&loaded.notices);
    let load_ms = millis(start);

    let compute_start = Instant::now();
    let g = &loaded.graph;
    let dense = DensePseudoinverse::with_cap(g, cap).map_err(|e| match e {
        lapdiag::Error::TooLarge { limit, actual, .. } => CliError::Usage(format!(
            "{actual} nodes exceed the dense cap of {limit}; use `approx`, or raise \
             --dense-cap / {DENSE_CAP_ENV}"
        )),
        e => e.into(),
    })?;
    let n = g.node_count();
    let foster_sum = dense.foster_sum(g);
    let expected = n as f64 - 1.0;
    let closed_form = match &loaded.model {
        Some(model) => {
            let kirchhoff = model.closed_form_kirchhoff()?;
            let diag = if model.labels.is_empty() {
                None
            } else {
                Some(model.closed_form_diag()?.iter().map(rational_string).collect())
            };
            Some(ClosedForm {
                diag,
                kirchhoff: rational_string(&kirchhoff),
                kirchhoff_value: to_f64(&kirchhoff),
            })
        }
        None => None,
    };
    let out_diag = dense.diag();
    let kirchhoff = dense.kirchhoff();
    let node_resistance = (0..n).map(|u| dense.node_resistance(u)).collect();
    let compute_ms = millis(compute_start);
    let total = millis(start);

    let mut argv = vec!["exact".to_string(), args.source.to_string()];
    if let Some(c) = args.dense_cap {
        argv.extend(["--dense-cap".to_string(), c.to_string()]);
    }
    if args.strict {
        argv.push("--strict".into());
    }
    Ok(ExactOutput {
        command: "exact",
        n,
        m: g.edge_count(),
        fingerprint: fingerprint_hex(g),
        nodes: loaded.nodes,
        diag: out_diag,
        kirchhoff,
        node_resistance,
        foster: Foster {
            sum: foster_sum,
            expected,
            residual: foster_sum - expected,
        },
        closed_form,
        elapsed_ms: total,
        notices: loaded.notices,
        manifest: RunManifest {
            tool: "lapdiag",
            version: env!("CARGO_PKG_VERSION"),
            command: "exact",
            input: loaded.input,
            config: ManifestConfig {
                dense_cap: Some(cap),
                strict: args.strict,
                ..ManifestConfig::default()
            },
            timings_ms: Timings {
                load: load_ms,
                compute: compute_ms,
                total,
            },
            argv,
        },
    })
}

/// Edge list and label sidecar for a generated model network.
#[derive(Debug, Clone)]
pub struct GeneratedFiles {
    pub node_count: usize,
    pub edge_count: usize,
    /// One `u v w` line per edge in creation order, so parsing the file
    /// reproduces the generator's node ids.
    pub edges: String,
    pub labels: String,
}

pub fn cmd_generate(source: &Source) -> Result<GeneratedFiles, CliError> {
    let model = source
        .generate()
        .ok_or_else(|| CliError::Usage("generate needs koch, urt or psfw".into()))??;
    let g = &model.graph;
    let mut edges = String::with_capacity(g.edge_count() * 16);
    for e in g.edges() {
        let _ = writeln!(edges, "{} {} {}", e.u, e.v, format_g17(e.weight));
    }
    Ok(GeneratedFiles {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        edges,
        labels: model.label_file(),
    })
}

#[derive(Debug, Deserialize)]
struct DiagFile {
    fingerprint: String,
    diag: Vec<f64>,
    kirchhoff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareOutput {
    pub sigma: f64,
    pub sigma_max: f64,
    pub rho: f64,
    pub n: usize,
    pub fingerprint: String,
}

impl CompareOutput {
    pub fn to_csv(&self) -> String {
        format!(
            "sigma,sigma_max,rho,n\n{},{},{},{}\n",
            format_g17(self.sigma),
            format_g17(self.sigma_max),
            format_g17(self.rho),
            self.n
        )
    }
}

/// Error report of `approx_json` against `exact_json`; both must describe
/// the same graph.
pub fn cmd_compare(exact_json: &str, approx_json: &str) -> Result<CompareOutput, CliError> {
    let read = |name: &str, text: &str| {
        serde_json::from_str::<DiagFile>(text).map_err(|e| CliError::Schema(format!("{name}: {e}")))
    };
    let exact = read("exact result", exact_json)?;
    let approx = read("approximate result", approx_json)?;
    if exact.fingerprint != approx.fingerprint {
        return Err(CliError::Usage(format!(
            "graph fingerprints differ: {} vs {}",
            exact.fingerprint, approx.fingerprint
        )));
    }
    let r = relative_errors(&exact.diag, exact.kirchhoff, &approx.diag, approx.kirchhoff)?;
    Ok(CompareOutput {
        sigma: r.sigma,
        sigma_max: r.sigma_max,
        rho: r.rho,
        n: r.n,
        fingerprint: exact.fingerprint,
    })
}
