use super::Matrix;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const MAX_LLOYD_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Cluster of each row.
    pub labels: Vec<usize>,
    /// `k × d` cluster means.
    pub centroids: Matrix,
    /// Total within-cluster sum of squared distances.
    pub sse: f64,
    pub iterations: usize,
    /// SSE after each centroid update.
    pub sse_history: Vec<f64>,
    /// Whether the loop reached an assignment fixpoint before the iteration cap.
    pub converged: bool,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid of every row; ties go to the lowest centroid id.
fn assign(points: &Matrix, centroids: &Matrix) -> Vec<usize> {
    (0..points.rows())
        .map(|i| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for c in 0..centroids.rows() {
                let d = dist2(points.row(i), centroids.row(c));
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

fn sse(points: &Matrix, centroids: &Matrix, labels: &[usize]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &c)| dist2(points.row(i), centroids.row(c)))
        .sum()
}

fn seed_plus_plus(points: &Matrix, k: usize, rng: &mut SplitMix64) -> Matrix {
    let n = points.rows();
    let mut chosen = vec![rng.next_index(n)];
    let mut d2: Vec<f64> = (0..n).map(|i| dist2(points.row(i), points.row(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d <= 0.0 {
                    continue;
                }
                acc += d;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total has a positive entry")
        } else {
            // every point coincides with a chosen seed
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.next_index(free.len())]
        };
        chosen.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(dist2(points.row(i), points.row(next)));
        }
    }
    let mut centroids = Matrix::zeros(k, points.cols());
    for (c, &i) in chosen.iter().enumerate() {
        for j in 0..points.cols() {
            centroids[(c, j)] = points[(i, j)];
        }
    }
    centroids
}

/// Means of the assigned points. An empty cluster takes over the point
/// farthest from its current centroid (among clusters with more than one
/// member) and is centred on it.
fn update(points: &Matrix, labels: &mut [usize], k: usize, previous: &Matrix) -> Matrix {
    let d = points.cols();
    let mut sizes = vec![0usize; k];
    for &c in labels.iter() {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_d = -1.0;
        for (i, &c) in labels.iter().enumerate() {
            if sizes[c] > 1 {
                let dd = dist2(points.row(i), previous.row(c));
                if dd > far_d {
                    far = Some(i);
                    far_d = dd;
                }
            }
        }
        let i = far.expect("k <= n leaves a cluster with two members");
        sizes[labels[i]] -= 1;
        labels[i] = empty;
        sizes[empty] = 1;
    }
    let mut centroids = Matrix::zeros(k, d);
    for (i, &c) in labels.iter().enumerate() {
        for j in 0..d {
            centroids[(c, j)] += points[(i, j)];
        }
    }
    for c in 0..k {
        for j in 0..d {
            centroids[(c, j)] /= sizes[c] as f64;
        }
    }
    centroids
}

/// k-means with k-means++ seeding from a SplitMix64 stream seeded by `seed`,
/// then Lloyd iterations until the assignment stops changing (at most
/// [`MAX_LLOYD_ITERATIONS`]).
pub fn kmeans(points: &Matrix, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::InvalidClusterCount { k, n });
    }
    let mut rng = SplitMix64::new(seed);
    let mut centroids = seed_plus_plus(points, k, &mut rng);
    let mut labels = assign(points, &centroids);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_LLOYD_ITERATIONS {
        iterations += 1;
        centroids = update(points, &mut labels, k, &centroids);
        history.push(sse(points, &centroids, &labels));
        let next = assign(points, &centroids);
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
    }
    Ok(ClusterAssignment {
        sse: sse(points, &centroids, &labels),
        labels,
        centroids,
        iterations,
        sse_history: history,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cluster_is_the_mean() {
        let pts = Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0], [4.0, 3.0]]);
        let c = kmeans(&pts, 1, 7).unwrap();
        assert_eq!(c.labels, vec![0, 0, 0]);
        assert!((c.centroids[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((c.centroids[(0, 1)] - 1.0).abs() < 1e-12);
        // (4 + 1) + (0 + 1) + (4 + 4)
        assert!((c.sse - 14.0).abs() < 1e-12);
    }

    #[test]
    fn separated_pairs() {
        let pts = Matrix::from_rows(&[[0.0, 0.0], [0.1, 0.0], [10.0, 0.0], [10.1, 0.0]]);
        for seed in 0..20 {
            let c = kmeans(&pts, 2, seed).unwrap();
            assert_eq!(c.labels[0], c.labels[1]);
            assert_eq!(c.labels[2], c.labels[3]);
            assert_ne!(c.labels[0], c.labels[2]);
            assert!((c.sse - 0.01).abs() < 1e-9, "{}", c.sse);
        }
    }

    #[test]
    fn one_cluster_per_point() {
        let pts = Matrix::from_rows(&[[0.0], [1.0], [1.0], [5.0]]);
        let c = kmeans(&pts, 4, 3).unwrap();
        assert_eq!(c.sse, 0.0);
    }

    #[test]
    fn invalid_k() {
        let pts = Matrix::from_rows(&[[0.0], [1.0]]);
        assert!(matches!(kmeans(&pts, 0, 1), Err(Error::InvalidClusterCount { .. })));
        assert!(matches!(kmeans(&pts, 3, 1), Err(Error::InvalidClusterCount { k: 3, n: 2 })));
    }

    #[test]
    fn empty_cluster_is_repaired() {
        // All three seeds land on one spot of a duplicated point; the repair
        // must still give every cluster a member.
        let pts = Matrix::from_rows(&[[0.0], [0.0], [0.0], [9.0]]);
        let mut labels = vec![0, 0, 0, 0];
        let prev = Matrix::from_rows(&[[0.0], [0.0], [0.0]]);
        let centroids = update(&pts, &mut labels, 3, &prev);
        let mut sizes = [0; 3];
        for &l in &labels {
            sizes[l] += 1;
        }
        assert!(sizes.iter().all(|&s| s > 0));
        assert_eq!(labels[3], 1);
        assert_eq!(centroids[(1, 0)], 9.0);
    }
}
