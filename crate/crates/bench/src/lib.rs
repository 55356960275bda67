//! Synthetic inputs for the benchmarks.

use storychart::rng::SplitMix64;
use storychart::{CooccurrenceGraph, Matrix};

/// G(n, p) with integer weights in `1..=max_weight`.
pub fn random_graph(n: usize, p: f64, max_weight: u64, seed: u64) -> CooccurrenceGraph {
    let mut rng = SplitMix64::new(seed);
    let mut g = CooccurrenceGraph::with_nodes((0..n).map(|i| (format!("v{i}"), 1 + (i as u64 % 7))));
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_f64() < p {
                let w = 1 + rng.next_u64() % max_weight;
                g.add_edge(u, v, w).expect("valid edge");
            }
        }
    }
    g
}

/// Uniform `[0, 10)` entries.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = SplitMix64::new(seed);
    let data: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| 10.0 * rng.next_f64()).collect())
        .collect();
    Matrix::from_rows(&data)
}

/// Portuguese-looking filler text with a recurring cast of names.
pub fn synthetic_text(sentences: usize, seed: u64) -> String {
    const NAMES: [&str; 8] = ["Ana Costa", "Rui", "BES", "Tomás", "Marta", "Banco de Portugal", "Sofia", "Duarte"];
    const WORDS: [&str; 12] = [
        "crise", "banco", "processo", "dinheiro", "governo", "caso", "pressão", "reunião", "conta",
        "relatório", "mercado", "dívida",
    ];
    let mut rng = SplitMix64::new(seed);
    let mut out = String::new();
    for _ in 0..sentences {
        out.push_str("Ontem ");
        for k in 0..12 {
            if k % 4 == 1 {
                out.push_str(NAMES[rng.next_index(NAMES.len())]);
            } else {
                out.push_str(WORDS[rng.next_index(WORDS.len())]);
            }
            out.push(' ');
        }
        out.push_str("fim. ");
    }
    out
}
