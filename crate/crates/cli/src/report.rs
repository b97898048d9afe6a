use std::fmt::Write as _;

use pagerank_games::graph::Graph;
use pagerank_games::verify::{BestResponseResult, DynamicsOutcome, DynamicsTrace, NashReport, Strategy};
use serde::Serialize;

#[derive(Serialize)]
pub struct StrategyJson {
    pub kept: Vec<String>,
    pub outlinks: Vec<String>,
    pub added_edge: Option<String>,
}

#[derive(Serialize)]
pub struct VertexJson {
    pub id: String,
    pub in_best_response: bool,
    pub pi: f64,
    pub best_pi: f64,
    pub improving: Option<StrategyJson>,
}

#[derive(Serialize)]
pub struct NashJson {
    pub model: String,
    pub alpha: f64,
    pub q: Vec<f64>,
    pub verdict: bool,
    pub vertices: Vec<VertexJson>,
    pub timing_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct ValueJson {
    pub id: String,
    pub value: f64,
}

#[derive(Serialize)]
pub struct StepJson {
    pub step: usize,
    pub mover: String,
    pub pi_before: f64,
    pub pi_after: f64,
    pub delta_pi: f64,
    pub graph_hash: String,
    pub strategy: StrategyJson,
}

#[derive(Serialize)]
pub struct DynamicsJson {
    pub model: String,
    pub alpha: f64,
    pub initial_hash: String,
    pub steps: Vec<StepJson>,
    pub outcome: &'static str,
    pub cycle_start: Option<usize>,
    pub final_graph: String,
    pub timing_ms: Option<f64>,
}

fn labels(g: &Graph, ids: &[usize]) -> Vec<String> {
    let mut out: Vec<&str> = ids.iter().map(|&u| g.label(u)).collect();
    out.sort_by(|a, b| pagerank_games::graph::label_cmp(a, b));
    out.into_iter().map(String::from).collect()
}

pub fn strategy_json(g: &Graph, s: &Strategy) -> StrategyJson {
    StrategyJson {
        kept: labels(g, &s.kept),
        outlinks: labels(g, &s.outlinks),
        added_edge: s.added_edge.map(|u| g.label(u).to_string()),
    }
}

pub fn vertex_json(g: &Graph, r: &BestResponseResult) -> VertexJson {
    VertexJson {
        id: g.label(r.vertex).to_string(),
        in_best_response: r.in_best_response,
        pi: r.current_pi,
        best_pi: r.best_pi,
        improving: r.improving.as_ref().map(|s| strategy_json(g, s)),
    }
}

pub fn nash_json(g: &Graph, report: &NashReport, timing: bool) -> NashJson {
    let order = g.label_order();
    NashJson {
        model: report.model.name().to_string(),
        alpha: report.alpha,
        q: order.iter().map(|&v| report.q[v]).collect(),
        verdict: report.verdict,
        vertices: order.iter().map(|&v| vertex_json(g, &report.results[v])).collect(),
        timing_ms: timing.then_some(report.elapsed.as_secs_f64() * 1e3),
    }
}

pub fn hash_hex(h: u64) -> String {
    format!("{h:016x}")
}

fn outcome_parts(outcome: DynamicsOutcome) -> (&'static str, Option<usize>) {
    match outcome {
        DynamicsOutcome::Equilibrium => ("equilibrium", None),
        DynamicsOutcome::StepLimit => ("step-limit", None),
        DynamicsOutcome::Cycle { first_seen } => ("cycle", Some(first_seen)),
    }
}

pub fn dynamics_json(g: &Graph, model: &str, alpha: f64, trace: &DynamicsTrace, timing_ms: Option<f64>) -> DynamicsJson {
    let (outcome, cycle_start) = outcome_parts(trace.outcome);
    DynamicsJson {
        model: model.to_string(),
        alpha,
        initial_hash: hash_hex(trace.initial_hash),
        steps: trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepJson {
                step: i + 1,
                mover: g.label(s.mover).to_string(),
                pi_before: s.pi_before,
                pi_after: s.pi_after,
                delta_pi: s.pi_after - s.pi_before,
                graph_hash: hash_hex(s.graph_hash),
                strategy: strategy_json(g, &s.strategy),
            })
            .collect(),
        outcome,
        cycle_start,
        final_graph: trace.final_graph.to_edge_list(),
        timing_ms,
    }
}

fn strategy_text(s: &StrategyJson) -> String {
    let mut out = format!("keep [{}]", s.kept.join(", "));
    if !s.outlinks.is_empty() {
        write!(out, ", link to [{}]", s.outlinks.join(", ")).unwrap();
    }
    if let Some(u) = &s.added_edge {
        write!(out, ", add edge to {u}").unwrap();
    }
    out
}

pub fn vertex_text(v: &VertexJson) -> String {
    let mut line = format!("{:>8}  pi {:.6}  best {:.6}", v.id, v.pi, v.best_pi);
    match &v.improving {
        Some(s) if !v.in_best_response => write!(line, "  improves: {}", strategy_text(s)).unwrap(),
        _ => line.push_str("  best response"),
    }
    line
}

pub fn nash_text(r: &NashJson) -> String {
    let mut out = format!("model {}, alpha {:.6}, {} vertices\n", r.model, r.alpha, r.vertices.len());
    for v in &r.vertices {
        writeln!(out, "{}", vertex_text(v)).unwrap();
    }
    if let Some(ms) = r.timing_ms {
        writeln!(out, "time: {ms:.3} ms").unwrap();
    }
    writeln!(out, "NASH: {}", if r.verdict { "yes" } else { "no" }).unwrap();
    out
}

pub fn dynamics_text(r: &DynamicsJson) -> String {
    let mut out = format!("model {}, alpha {:.6}, start {}\n", r.model, r.alpha, r.initial_hash);
    for s in &r.steps {
        writeln!(
            out,
            "step {:>4}  {}  mover {}  delta_pi {:+.6}  {}",
            s.step,
            s.graph_hash,
            s.mover,
            s.delta_pi,
            strategy_text(&s.strategy)
        )
        .unwrap();
    }
    match r.cycle_start {
        Some(k) => writeln!(out, "outcome: cycle back to the graph after step {k}").unwrap(),
        None => writeln!(out, "outcome: {}", r.outcome).unwrap(),
    }
    if let Some(ms) = r.timing_ms {
        writeln!(out, "time: {ms:.3} ms").unwrap();
    }
    writeln!(out, "NASH: {}", if r.outcome == "equilibrium" { "yes" } else { "no" }).unwrap();
    out
}

pub fn values_text(values: &[ValueJson]) -> String {
    values.iter().map(|v| format!("{:>8}  {:.6}\n", v.id, v.value)).collect()
}
