//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::time::Instant;

use lapdiag::models::{
    koch_diag_closed_form, koch_generate, koch_kirchhoff, psfw_generate, psfw_kirchhoff,
    rational_string, to_f64, urt_generate, urt_kirchhoff, LabeledGraph, NodeLabel,
};
use lapdiag::{
    exact_pseudoinverse_diag, forest_weight_diag, foster_check, kirchhoff_exact, relative_errors,
    Graph,
};
use lapdiag_cli::{cmd_approx, ApproxArgs, Source};

use common::{connected_unlabeled, random_connected};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn closed_vs_dense(model: &LabeledGraph) -> f64 {
    let exact = exact_pseudoinverse_diag(&model.graph).unwrap();
    let closed: Vec<f64> = model.closed_form_diag().unwrap().iter().map(to_f64).collect();
    max_abs_diff(&exact, &closed)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut models = Vec::new();
    for g in 0..=3 {
        models.push(koch_generate(g).unwrap());
    }
    for f in [2, 3] {
        for g in 1..=3 {
            models.push(urt_generate(g, f).unwrap());
        }
    }
    for m in &models {
        worst = worst.max(closed_vs_dense(m));
    }

    let mut worst_rel: f64 = 0.0;
    let mut literal_ok = true;
    let mut check = |g: &Graph, closed: f64, literal: Option<f64>| {
        let dense = kirchhoff_exact(g).unwrap();
        worst_rel = worst_rel.max((dense - closed).abs() / closed);
        if let Some(v) = literal {
            literal_ok &= (closed - v).abs() <= 1e-12 * v;
        }
    };
    for (g, lit) in [(0, 2.0), (1, 48.0), (2, 1088.0)] {
        check(&koch_generate(g).unwrap().graph, to_f64(&koch_kirchhoff(g)), Some(lit));
    }
    check(&koch_generate(3).unwrap().graph, to_f64(&koch_kirchhoff(3)), None);
    for (g, lit) in [(1, 4.0), (2, 84.0)] {
        let k = to_f64(&urt_kirchhoff(g, 2).unwrap());
        check(&urt_generate(g, 2).unwrap().graph, k, Some(lit));
    }
    for (g, lit) in [(0, 2.0), (1, 65.0 / 6.0), (2, 1657.0 / 18.0)] {
        check(&psfw_generate(g).unwrap().graph, to_f64(&psfw_kirchhoff(g)), Some(lit));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && worst_rel < 1e-10 && literal_ok && secs < 10.0,
        format!(
            "max diag error {worst:.2e}, max Kirchhoff rel error {worst_rel:.2e}, \
             literal values {}, {secs:.2} s",
            if literal_ok { "ok" } else { "WRONG" }
        ),
    )
}

fn criterion_2() -> Outcome {
    let label = NodeLabel::new(vec![0, 1]).unwrap();
    let implemented = koch_diag_closed_form(&label, 1).unwrap();
    let k1 = koch_generate(1).unwrap();
    let leaf = k1.labels.iter().position(|l| *l == label).unwrap();
    let oracle = exact_pseudoinverse_diag(&k1.graph).unwrap()[leaf];
    // printed form: first term over 3N² instead of 3N
    let (n, four_g): (f64, f64) = (9.0, 4.0);
    let printed = 2.0 / (3.0 * n * n) * (2.0 * four_g - 2.0)
        + 8.0 * (5.0 * four_g + 3.0 + 4.0) / (9.0 * n * n);
    let pass = rational_string(&implemented) == "20/27"
        && (oracle - 20.0 / 27.0).abs() < 1e-12
        && (printed - 28.0 / 81.0).abs() < 1e-12;
    outcome(
        pass,
        format!(
            "corrected form {}, oracle {oracle:.15}, printed form gives {printed:.15} (28/81)",
            rational_string(&implemented)
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for g in 0..=5 {
        graphs.push((format!("koch:{g}"), koch_generate(g).unwrap().graph));
    }
    for g in 0..=7 {
        graphs.push((format!("psfw:{g}"), psfw_generate(g).unwrap().graph));
    }
    for f in 1..=4u32 {
        for g in 1..=12 {
            if (f as u64 + 1).pow(g) > 5000 {
                break;
            }
            graphs.push((format!("urt:{g}:{f}"), urt_generate(g, f).unwrap().graph));
        }
    }
    for seed in 0..20 {
        let n = 10 + 9 * seed as usize;
        graphs.push((format!("random#{seed}"), random_connected(n, n, 0.5, 2.0, 3000 + seed)));
    }
    let mut worst: f64 = 0.0;
    let mut worst_name = String::new();
    for (name, g) in &graphs {
        let dev = (foster_check(g).unwrap() - (g.node_count() as f64 - 1.0)).abs();
        if dev >= worst {
            worst = dev;
            worst_name = name.clone();
        }
    }
    outcome(
        worst < 1e-8,
        format!("{} graphs, max |Σ w r − (N−1)| = {worst:.2e} ({worst_name})", graphs.len()),
    )
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=6 {
        for g in connected_unlabeled(n) {
            worst = worst.max(max_abs_diff(
                &forest_weight_diag(&g).unwrap(),
                &exact_pseudoinverse_diag(&g).unwrap(),
            ));
            count += 1;
        }
    }
    for seed in 0..10u64 {
        let n = 5 + seed as usize % 4;
        let g = random_connected(n, 16 - (n - 1), 0.5, 2.0, 4000 + seed);
        assert!(g.edge_count() <= 16);
        worst = worst.max(max_abs_diff(
            &forest_weight_diag(&g).unwrap(),
            &exact_pseudoinverse_diag(&g).unwrap(),
        ));
        count += 1;
    }
    outcome(worst < 1e-9, format!("{count} graphs, max difference {worst:.2e}"))
}

/// Criteria 5 and 6 share their runs.
fn criteria_5_and_6() -> (Outcome, Outcome) {
    let graphs = [
        ("koch:2", koch_generate(2).unwrap().graph),
        ("urt:3:3", urt_generate(3, 3).unwrap().graph),
        ("random-100", random_connected(100, 150, 0.5, 2.0, 5000)),
    ];
    let mut envelope_ok = true;
    let mut sigma_ok = true;
    let mut envelope_notes = Vec::new();
    let mut worst_sigma_ratio: f64 = 0.0;
    for (name, g) in &graphs {
        let exact = exact_pseudoinverse_diag(g).unwrap();
        let exact_k = g.node_count() as f64 * exact.iter().sum::<f64>();
        for eps in [0.2, 0.3] {
            let mut good = 0;
            for seed in 0..20 {
                let est = lapdiag::approx_diag(g, eps, seed).unwrap();
                let inside = est.values.iter().zip(&exact).all(|(e, x)| {
                    (1.0 - eps).powi(2) * x <= *e && *e <= (1.0 + eps).powi(2) * x
                });
                good += inside as usize;
                let r = relative_errors(&exact, exact_k, &est.values, est.kirchhoff).unwrap();
                sigma_ok &= r.sigma <= eps;
                worst_sigma_ratio = worst_sigma_ratio.max(r.sigma / eps);
            }
            envelope_ok &= good >= 18;
            envelope_notes.push(format!("{name} ε={eps}: {good}/20"));
        }
    }
    (
        outcome(envelope_ok, envelope_notes.join(", ")),
        outcome(
            sigma_ok,
            format!("120 runs, max σ/ε = {worst_sigma_ratio:.3}"),
        ),
    )
}

fn criterion_7() -> Outcome {
    let truth = to_f64(&koch_kirchhoff(6));
    let mut pass = true;
    let mut notes = Vec::new();
    for seed in 0..5 {
        let start = Instant::now();
        let out = cmd_approx(&ApproxArgs::new(Source::Koch { g: 6 }, 0.1, seed)).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let rho = (truth - out.kirchhoff) / truth;
        pass &= rho.abs() <= 1e-2 && secs < 60.0;
        notes.push(format!("ρ={rho:+.2e} ({secs:.1} s)"));
    }
    outcome(pass, format!("K_6, k={}: {}", lapdiag::jl_dimension(8193, 0.1).unwrap(), notes.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut models = Vec::new();
    for g in 0..=3 {
        models.push(koch_generate(g).unwrap());
    }
    for f in [2, 3] {
        for g in 0..=3 {
            models.push(urt_generate(g, f).unwrap());
        }
    }
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    for m in &models {
        let closed = m.closed_form_diag().unwrap();
        for a in 0..closed.len() {
            for b in 0..closed.len() {
                pairs += 1;
                if m.compare_nodes(a, b).unwrap() != closed[a].cmp(&closed[b]) {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(mismatches == 0, format!("{pairs} ordered pairs, {mismatches} mismatches"))
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_9() -> Outcome {
    let mut points = Vec::new();
    let mut notes = Vec::new();
    let mut last_secs = 0.0;
    for g in 4..=8 {
        let start = Instant::now();
        let out = cmd_approx(&ApproxArgs::new(Source::Koch { g }, 0.3, 1)).unwrap();
        let secs = start.elapsed().as_secs_f64();
        points.push(((out.m as f64).ln(), secs.ln()));
        notes.push(format!("M={} {secs:.2} s", out.m));
        last_secs = secs;
    }
    let slope = fit_slope(&points);
    outcome(
        last_secs < 600.0 && slope < 1.5,
        format!("{}; log-log slope {slope:.3}", notes.join(", ")),
    )
}

fn criterion_10() -> Outcome {
    let dir = std::env::temp_dir().join(format!("lapdiag-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("weighted.txt");
    let g = random_connected(2000, 4000, 0.5, 2.0, 6000);
    std::fs::write(&file, g.to_edge_list()).unwrap();
    let sources = [Source::Koch { g: 5 }, Source::Urt { g: 6, f: 3 }, Source::File(file)];
    let mut identical = true;
    let mut compared = 0;
    for source in sources {
        for seed in [0, 12345] {
            let run = |threads| {
                let mut args = ApproxArgs::new(source.clone(), 0.3, seed);
                args.threads = Some(threads);
                let out = cmd_approx(&args).unwrap();
                (
                    out.diag.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                    out.kirchhoff.to_bits(),
                )
            };
            identical &= run(1) == run(4);
            compared += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(identical, format!("{compared} (input, seed) pairs, threads 1 vs 4"))
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    };
    let mut push = |id, name, (o, secs): (Outcome, f64)| {
        println!(
            "criterion {id:>2} {}: {name}: {} [{secs:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((id, name, o));
    };
    push(1, "closed forms match oracles", timed(&criterion_1));
    push(2, "Koch diagonal correction pinned", timed(&criterion_2));
    push(3, "Foster invariant", timed(&criterion_3));
    push(4, "forest and dense oracles agree", timed(&criterion_4));
    let t = Instant::now();
    let (c5, c6) = criteria_5_and_6();
    let secs = t.elapsed().as_secs_f64();
    push(5, "per-node (1±ε)² envelope", (c5, secs));
    push(6, "mean relative error σ ≤ ε", (c6, secs));
    push(7, "Kirchhoff estimate on K_6", timed(&criterion_7));
    push(8, "label ordering", timed(&criterion_8));
    push(9, "near-linear scaling on K_4..K_8", timed(&criterion_9));
    push(10, "determinism across thread counts", timed(&criterion_10));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
