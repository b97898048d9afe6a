//! Deletion verdicts for every tree with at most eight vertices, recorded from
//! the brute-force oracle. Set `PRGAME_BLESS=1` to regenerate the file.

use std::fmt::Write as _;
use std::path::PathBuf;

use pagerank_games::graph::generate::nonisomorphic_trees;
use pagerank_games::graph::Graph;
use pagerank_games::oracle::{brute_force_verify, EnumerationBudget};
use pagerank_games::pagerank::GameConfig;
use pagerank_games::verify::{verify_nash, Model, NashReport, VerifyOptions};

const ALPHA: f64 = 0.15;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/deletion_trees.txt")
}

/// Uniform jumps and jumps proportional to `i² + 1`.
fn configs(n: usize) -> [GameConfig; 2] {
    let w: Vec<f64> = (0..n).map(|i| (i * i + 1) as f64).collect();
    let total: f64 = w.iter().sum();
    [
        GameConfig::uniform(ALPHA, n).unwrap(),
        GameConfig::new(ALPHA, w.iter().map(|x| x / total).collect()).unwrap(),
    ]
}

fn bits(report: &NashReport) -> String {
    report
        .results
        .iter()
        .map(|r| if r.in_best_response { '1' } else { '0' })
        .collect()
}

fn line(g: &Graph, verdicts: impl Fn(&GameConfig) -> NashReport) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    let [uniform, skewed] = configs(g.n());
    format!(
        "{} {} {} {}",
        g.n(),
        edges.join(","),
        bits(&verdicts(&uniform)),
        bits(&verdicts(&skewed))
    )
}

fn trees() -> Vec<Graph> {
    (2..=8).flat_map(nonisomorphic_trees).collect()
}

fn oracle_document() -> String {
    let mut out = String::from(
        "# n edges in-best-response-per-vertex(uniform q) in-best-response-per-vertex(q ~ i^2+1); alpha 0.15\n",
    );
    for t in trees() {
        let oracle = |cfg: &GameConfig| {
            brute_force_verify(&t, Model::Deletion, cfg, &EnumerationBudget::default(), 1e-9).unwrap()
        };
        writeln!(out, "{}", line(&t, oracle)).unwrap();
    }
    out
}

#[test]
fn golden_file_matches_oracle() {
    let fresh = oracle_document();
    if std::env::var_os("PRGAME_BLESS").is_some() {
        std::fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        std::fs::write(golden_path(), &fresh).unwrap();
    }
    let stored = std::fs::read_to_string(golden_path()).expect("golden file present");
    assert_eq!(stored, fresh);
}

#[test]
fn fast_verifier_matches_golden_file() {
    let stored = std::fs::read_to_string(golden_path()).expect("golden file present");
    let expected: Vec<&str> = stored.lines().filter(|l| !l.starts_with('#')).collect();
    let trees = trees();
    assert_eq!(expected.len(), trees.len());
    for (t, want) in trees.iter().zip(expected) {
        let fast = |cfg: &GameConfig| verify_nash(t, Model::Deletion, cfg, &VerifyOptions::default()).unwrap();
        assert_eq!(line(t, fast), want);
    }
}
