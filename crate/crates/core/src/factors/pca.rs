use super::{FeatureMatrix, Matrix};
use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    /// `p × k`, orthonormal columns; the largest-magnitude entry of each
    /// column is positive.
    pub loadings: Matrix,
    /// Top `k` eigenvalues of the correlation matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// All `p` eigenvalues, descending.
    pub all_eigenvalues: Vec<f64>,
    /// `n × k` component scores (standardized data × loadings).
    pub scores: Matrix,
    pub row_labels: Vec<String>,
    /// Segment index behind each loading row.
    pub columns: Vec<usize>,
}

impl FactorModel {
    pub fn components(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn cumulative_explained(&self) -> f64 {
        self.explained_variance_ratio.iter().sum()
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues (diagonal order, unsorted) and the matrix whose
/// columns are the matching unit eigenvectors.
pub fn jacobi_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    let mut a = a.clone();
    let mut v = Matrix::identity(n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
            return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle that zeroes a[p][q]; t is the smaller root
                // of t^2 + 2 theta t - 1 = 0.
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
        return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
    }
    Err(Error::ConvergenceFailure {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Correlation-matrix PCA of a standardized feature matrix, keeping `k`
/// components.
pub fn pca(fm: &FeatureMatrix, k: usize) -> Result<FactorModel> {
    if !fm.standardized {
        return Err(Error::NotStandardized);
    }
    let (n, p) = (fm.rows(), fm.cols());
    if k == 0 || k > p {
        return Err(Error::InvalidComponentCount { k, max: p });
    }
    let z = &fm.values;
    let mut corr = z.transpose().matmul(z);
    for i in 0..p {
        for j in 0..p {
            corr[(i, j)] /= n as f64;
        }
    }
    // exact symmetry for the solver
    for i in 0..p {
        for j in i + 1..p {
            let avg = 0.5 * (corr[(i, j)] + corr[(j, i)]);
            corr[(i, j)] = avg;
            corr[(j, i)] = avg;
        }
    }

    let (values, vectors) = jacobi_eigen(&corr)?;
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let all_eigenvalues: Vec<f64> = order.iter().map(|&i| values[i].max(0.0)).collect();
    let total: f64 = all_eigenvalues.iter().sum();

    let mut loadings = Matrix::zeros(p, k);
    for (j, &src) in order.iter().take(k).enumerate() {
        let column: Vec<f64> = vectors.column(src).collect();
        let pivot = column
            .iter()
            .enumerate()
            .fold(0, |best, (i, x)| if x.abs() > column[best].abs() { i } else { best });
        let sign = if column[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (i, x) in column.iter().enumerate() {
            loadings[(i, j)] = sign * x;
        }
    }

    let eigenvalues = all_eigenvalues[..k].to_vec();
    let explained_variance_ratio = eigenvalues.iter().map(|l| l / total).collect();
    Ok(FactorModel {
        scores: z.matmul(&loadings),
        loadings,
        eigenvalues,
        explained_variance_ratio,
        all_eigenvalues,
        row_labels: fm.row_labels.clone(),
        columns: fm.columns.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::standardize;

    fn fm(rows: &[&[f64]]) -> FeatureMatrix {
        let values = Matrix::from_rows(rows);
        standardize(&FeatureMatrix {
            row_labels: (0..values.rows()).map(|i| format!("e{i}")).collect(),
            columns: (0..values.cols()).collect(),
            values,
            standardized: false,
            dropped_columns: Vec::new(),
        })
        .unwrap()
    }

    #[test]
    fn perfectly_correlated() {
        let model = pca(&fm(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]), 2).unwrap();
        assert!((model.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!(model.eigenvalues[1].abs() < 1e-12);
        assert!((model.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
        assert!(model.explained_variance_ratio[1].abs() < 1e-12);
    }

    #[test]
    fn uncorrelated() {
        // centered, orthogonal, equal-variance columns: correlation = I
        let model = pca(&fm(&[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, 1.0], &[-1.0, -1.0]]), 2).unwrap();
        for r in &model.explained_variance_ratio {
            assert!((r - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn known_2x2() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]);
        let (mut values, v) = jacobi_eigen(&a).unwrap();
        values.sort_by(f64::total_cmp);
        assert!((values[0] - 1.0).abs() < 1e-14 && (values[1] - 3.0).abs() < 1e-14);
        let vtv = v.transpose().matmul(&v);
        assert!(vtv.max_abs_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn sign_convention() {
        let model = pca(&fm(&[&[1.0, 5.0, 2.0], &[2.0, 3.0, 2.5], &[4.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]), 3).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = model.loadings.column(j).collect();
            let max = col.iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(max > 0.0);
        }
    }

    #[test]
    fn argument_errors() {
        let z = fm(&[&[1.0, 2.0], &[2.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(pca(&z, 0), Err(Error::InvalidComponentCount { .. })));
        assert!(matches!(pca(&z, 3), Err(Error::InvalidComponentCount { k: 3, max: 2 })));
        let mut raw = z.clone();
        raw.standardized = false;
        assert!(matches!(pca(&raw, 1), Err(Error::NotStandardized)));
    }
}
