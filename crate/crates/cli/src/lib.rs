//! Command-line front end. [`run`] takes the argument vector and the output
//! streams and returns the process exit code, so the binary stays a one-liner.

mod args;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use pagerank_games::graph::generate::{generate, GraphKind};
use pagerank_games::graph::{parse_graph, Graph};
use pagerank_games::oracle::{brute_force_verify, EnumerationBudget};
use pagerank_games::pagerank::{potentials_column, stationary_pagerank, DirectedView, GameConfig};
use pagerank_games::verify::{best_response, best_response_dynamics, verify_nash, DynamicsOutcome, Model, VerifyOptions};
use pagerank_games::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use args::{Cli, Command, Common, Format, KindArg};
use report::ValueJson;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_NASH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Largest vertex count `oracle-check` will enumerate.
const ORACLE_MAX_N: usize = 10;

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NumericalFailure { .. } => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Verify { model, graph } => cmd_verify(c, (*model).into(), graph, out),
        Command::BestResponse { model, vertex, graph } => {
            cmd_best_response(c, (*model).into(), vertex, graph, out)
        }
        Command::Pagerank { graph } => cmd_pagerank(c, graph, out),
        Command::Potentials { target, graph } => cmd_potentials(c, target.as_deref(), graph, out),
        Command::Dynamics {
            model,
            max_steps,
            final_graph,
            graph,
        } => cmd_dynamics(c, (*model).into(), *max_steps, final_graph.as_deref(), graph, out),
        Command::OracleCheck {
            model,
            n_max,
            trials,
            random_q,
        } => cmd_oracle_check(c, (*model).into(), *n_max, *trials, *random_q, out),
        Command::Generate {
            kind,
            n,
            p,
            largest_component,
            output,
        } => cmd_generate(c, *kind, *n, *p, *largest_component, output.as_deref(), out),
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_graph(&read_source(path)?)?)
}

/// Reads the jump distribution, given in label order, into id order.
fn load_config(c: &Common, g: &Graph) -> Result<GameConfig, Failure> {
    let Some(path) = &c.q else {
        return Ok(GameConfig::uniform(c.alpha, g.n())?);
    };
    let text = read_source(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let x: f64 = line
            .parse()
            .map_err(|_| Failure::Usage(format!("{}:{}: not a number: {line}", path.display(), i + 1)))?;
        values.push(x);
    }
    if values.len() != g.n() {
        return Err(Failure::Usage(format!(
            "q file has {} entries but the graph has {} vertices",
            values.len(),
            g.n()
        )));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Failure::Usage(format!("q sums to {sum}, not 1")));
    }
    let mut q = vec![0.0; g.n()];
    for (&v, x) in g.label_order().iter().zip(values) {
        q[v] = x / sum;
    }
    Ok(GameConfig::new(c.alpha, q)?)
}

fn options(c: &Common) -> VerifyOptions {
    VerifyOptions {
        tolerance: c.tolerance,
        k_max: c.k_max,
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, c: &Common, value: &T, text: impl FnOnce(&T) -> String) -> io::Result<()> {
    match c.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(value).expect("report serializes");
            writeln!(out, "{json}")
        }
        Format::Text => write!(out, "{}", text(value)),
    }
}

fn verdict_code(nash: bool) -> i32 {
    if nash {
        EXIT_OK
    } else {
        EXIT_NOT_NASH
    }
}

fn cmd_verify(c: &Common, model: Model, path: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let cfg = load_config(c, &g)?;
    let report = verify_nash(&g, model, &cfg, &options(c))?;
    let json = report::nash_json(&g, &report, c.timing);
    emit(out, c, &json, report::nash_text)?;
    Ok(verdict_code(report.verdict))
}

fn vertex_id(g: &Graph, label: &str) -> Result<usize, Failure> {
    g.vertex(label)
        .ok_or_else(|| Failure::Usage(format!("no vertex labelled {label}")))
}

fn cmd_best_response(c: &Common, model: Model, label: &str, path: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let cfg = load_config(c, &g)?;
    let v = vertex_id(&g, label)?;
    if model == Model::RequestDelete && !g.is_forest() {
        return Err(Error::UnsupportedScope("request-delete best responses need an acyclic graph".into()).into());
    }
    let r = best_response(&g, v, model, &cfg, &options(c))?;
    let json = report::vertex_json(&g, &r);
    emit(out, c, &json, |v| format!("{}\n", report::vertex_text(v)))?;
    Ok(verdict_code(r.in_best_response))
}

fn cmd_pagerank(c: &Common, path: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let cfg = load_config(c, &g)?;
    let pi = stationary_pagerank(&DirectedView::from_graph(&g), &cfg)?;
    let values: Vec<ValueJson> = g
        .label_order()
        .into_iter()
        .map(|v| ValueJson {
            id: g.label(v).to_string(),
            value: pi[v],
        })
        .collect();
    emit(out, c, &values, |v| report::values_text(v))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PotentialMatrix {
    /// Row `u`, column `v` holds `φ_uv`, both in the order of `ids`.
    ids: Vec<String>,
    phi: Vec<Vec<f64>>,
}

fn cmd_potentials(c: &Common, target: Option<&str>, path: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let d = DirectedView::from_graph(&g);
    let order = g.label_order();
    if let Some(label) = target {
        let col = potentials_column(&d, vertex_id(&g, label)?, c.alpha)?;
        let values: Vec<ValueJson> = order
            .iter()
            .map(|&u| ValueJson {
                id: g.label(u).to_string(),
                value: col.phi[u],
            })
            .collect();
        emit(out, c, &values, |v| report::values_text(v))?;
        return Ok(EXIT_OK);
    }
    let columns = order
        .iter()
        .map(|&v| potentials_column(&d, v, c.alpha))
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = PotentialMatrix {
        ids: order.iter().map(|&u| g.label(u).to_string()).collect(),
        phi: order.iter().map(|&u| columns.iter().map(|col| col.phi[u]).collect()).collect(),
    };
    emit(out, c, &matrix, |m| {
        let mut text = format!("{:>8}", "");
        for id in &m.ids {
            text.push_str(&format!(" {id:>9}"));
        }
        text.push('\n');
        for (id, row) in m.ids.iter().zip(&m.phi) {
            text.push_str(&format!("{id:>8}"));
            for x in row {
                text.push_str(&format!(" {x:>9.6}"));
            }
            text.push('\n');
        }
        text
    })?;
    Ok(EXIT_OK)
}

fn cmd_dynamics(
    c: &Common,
    model: Model,
    max_steps: usize,
    final_graph: Option<&Path>,
    path: &Path,
    out: &mut dyn Write,
) -> Outcome {
    let g = load_graph(path)?;
    let cfg = load_config(c, &g)?;
    let started = Instant::now();
    let trace = best_response_dynamics(&g, model, &cfg, &options(c), max_steps)?;
    let timing = c.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
    if let Some(dest) = final_graph {
        fs::write(dest, trace.final_graph.to_edge_list())
            .map_err(|e| Failure::Usage(format!("{}: {e}", dest.display())))?;
    }
    let json = report::dynamics_json(&g, model.name(), c.alpha, &trace, timing);
    emit(out, c, &json, report::dynamics_text)?;
    Ok(verdict_code(trace.outcome == DynamicsOutcome::Equilibrium))
}

#[derive(Serialize)]
struct Disagreement {
    trial: usize,
    vertex: String,
    fast: bool,
    oracle: bool,
    graph: String,
}

#[derive(Serialize)]
struct OracleCheckJson {
    model: String,
    alpha: f64,
    trials: usize,
    vertex_checks: usize,
    improvable: usize,
    max_best_pi_gap: f64,
    disagreements: Vec<Disagreement>,
}

/// Trial `t` draws a graph on `2 + t mod (n_max - 1)` vertices.
fn trial_graph(model: Model, n_max: usize, seed: u64, t: usize) -> pagerank_games::Result<Graph> {
    let n = 2 + t % (n_max - 1);
    let seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(t as u64);
    let kind = match model {
        Model::RequestDelete => GraphKind::RandomTree { n, seed },
        _ => GraphKind::Gnp {
            n,
            p: [0.3, 0.5, 0.7][t % 3],
            seed,
            largest_component: true,
        },
    };
    generate(kind)
}

/// Jump weights drawn uniformly from `[0.05, 1)`, normalised.
fn random_config(alpha: f64, n: usize, rng: &mut ChaCha8Rng) -> pagerank_games::Result<GameConfig> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    GameConfig::new(alpha, w.iter().map(|x| x / total).collect())
}

fn cmd_oracle_check(
    c: &Common,
    model: Model,
    n_max: usize,
    trials: usize,
    random_q: bool,
    out: &mut dyn Write,
) -> Outcome {
    if !(2..=ORACLE_MAX_N).contains(&n_max) {
        return Err(Failure::Usage(format!("--n-max must be between 2 and {ORACLE_MAX_N}")));
    }
    if c.q.is_some() {
        return Err(Failure::Usage("oracle-check draws its own graphs; use --random-q instead of --q".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let opts = options(c);
    let mut summary = OracleCheckJson {
        model: model.name().to_string(),
        alpha: c.alpha,
        trials,
        vertex_checks: 0,
        improvable: 0,
        max_best_pi_gap: 0.0,
        disagreements: Vec::new(),
    };
    for t in 0..trials {
        let g = trial_graph(model, n_max, c.seed, t)?;
        let cfg = if random_q {
            random_config(c.alpha, g.n(), &mut rng)?
        } else {
            GameConfig::uniform(c.alpha, g.n())?
        };
        let fast = verify_nash(&g, model, &cfg, &opts)?;
        let slow = brute_force_verify(&g, model, &cfg, &EnumerationBudget::default(), c.tolerance)?;
        for (f, s) in fast.results.iter().zip(&slow.results) {
            summary.vertex_checks += 1;
            summary.improvable += usize::from(!s.in_best_response);
            summary.max_best_pi_gap = summary.max_best_pi_gap.max((f.best_pi - s.best_pi).abs());
            if f.in_best_response != s.in_best_response {
                summary.disagreements.push(Disagreement {
                    trial: t,
                    vertex: g.label(f.vertex).to_string(),
                    fast: f.in_best_response,
                    oracle: s.in_best_response,
                    graph: g.to_edge_list(),
                });
            }
        }
    }
    emit(out, c, &summary, |s| {
        let mut text = format!(
            "model {}, alpha {:.6}: {} trials, {} vertex checks ({} improvable), max best_pi gap {:.2e}\n",
            s.model, s.alpha, s.trials, s.vertex_checks, s.improvable, s.max_best_pi_gap
        );
        for d in &s.disagreements {
            text.push_str(&format!(
                "DISAGREE trial {} vertex {}: fast {} oracle {}\n{}",
                d.trial, d.vertex, d.fast, d.oracle, d.graph
            ));
        }
        text.push_str(&format!(
            "{} agreements, {} disagreements\n",
            s.trials - s.disagreements.iter().map(|d| d.trial).collect::<std::collections::BTreeSet<_>>().len(),
            s.disagreements.len()
        ));
        text
    })?;
    Ok(if summary.disagreements.is_empty() { EXIT_OK } else { EXIT_NOT_NASH })
}

fn cmd_generate(
    c: &Common,
    kind: KindArg,
    n: usize,
    p: f64,
    largest_component: bool,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let seed = c.seed;
    let kind = match kind {
        KindArg::Complete => GraphKind::Complete { n },
        KindArg::Path => GraphKind::Path { n },
        KindArg::Cycle => GraphKind::Cycle { n },
        KindArg::Star => GraphKind::Star { leaves: n },
        KindArg::Tree => GraphKind::RandomTree { n, seed },
        KindArg::Gnp => GraphKind::Gnp {
            n,
            p,
            seed,
            largest_component,
        },
    };
    let text = generate(kind)?.to_edge_list();
    match output {
        Some(dest) => fs::write(dest, text).map_err(|e| Failure::Usage(format!("{}: {e}", dest.display())))?,
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}
