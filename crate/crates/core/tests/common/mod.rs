#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use storychart::rng::SplitMix64;
use storychart::CooccurrenceGraph;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Random spanning tree plus each remaining pair with probability `p`;
/// weights in `1..=max_w`.
pub fn random_connected(rng: &mut SplitMix64, n: usize, p: f64, max_w: u64) -> CooccurrenceGraph {
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.next_index(v);
        present[u][v] = true;
        edges.push((u, v, 1 + rng.next_u64() % max_w));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.next_f64() < p {
                edges.push((u, v, 1 + rng.next_u64() % max_w));
            }
        }
    }
    CooccurrenceGraph::from_edges(n, &edges).unwrap()
}

/// Dense symmetric weight matrix.
pub fn weights(g: &CooccurrenceGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        a[u][v] = w as f64;
        a[v][u] = w as f64;
    }
    a
}

/// Q = 1/(2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j), straight from the
/// adjacency matrix.
pub fn modularity_oracle(a: &[Vec<f64>], part: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if part[i] == part[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}
