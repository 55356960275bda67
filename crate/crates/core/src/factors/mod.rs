//! Factor and cluster analysis of entity usage across the text.
//!
//! Each selected entity is an observation whose variables are its mention
//! counts per segment. Columns are z-scored, principal components come from
//! the eigendecomposition of the correlation matrix, and entities are
//! grouped by k-means on their component scores.

mod kmeans;
mod matrix;
mod pca;

pub use kmeans::{kmeans, ClusterAssignment, MAX_LLOYD_ITERATIONS};
pub use matrix::Matrix;
pub use pca::{jacobi_eigen, pca, FactorModel, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};

use crate::corpus::Document;
use crate::entities::Entity;
use crate::error::{Error, Result};

// Below this standard deviation a column counts as constant.
const DEGENERATE_STD: f64 = 1e-12;

/// Entities × segments matrix of mention counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    /// Canonical name of the entity in each row.
    pub row_labels: Vec<String>,
    /// Segment index behind each column.
    pub columns: Vec<usize>,
    pub values: Matrix,
    pub standardized: bool,
    /// Segments dropped by [`standardize`] for having zero variance.
    pub dropped_columns: Vec<usize>,
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }
}

/// `value[i][s]` = mentions of entity `i` that fall in segment `s`.
pub fn build_feature_matrix(entities: &[Entity], doc: &Document) -> Result<FeatureMatrix> {
    if entities.len() < 2 {
        return Err(Error::TooFewEntities(entities.len()));
    }
    let segments = doc.segment_count();
    let mut values = Matrix::zeros(entities.len(), segments);
    for (i, e) in entities.iter().enumerate() {
        for m in &e.mentions {
            if let Some(s) = doc.segment_at(m.span.start) {
                values[(i, s)] += 1.0;
            }
        }
    }
    Ok(FeatureMatrix {
        row_labels: entities.iter().map(|e| e.canonical.clone()).collect(),
        columns: (0..segments).collect(),
        values,
        standardized: false,
        dropped_columns: Vec::new(),
    })
}

/// Z-scores every column with the population standard deviation. Constant
/// columns are dropped and listed in `dropped_columns`.
pub fn standardize(fm: &FeatureMatrix) -> Result<FeatureMatrix> {
    let n = fm.rows();
    if n < 2 {
        return Err(Error::TooFewEntities(n));
    }
    let mut keep = Vec::new();
    let mut stats = Vec::new();
    let mut dropped = fm.dropped_columns.clone();
    for c in 0..fm.cols() {
        let mean = fm.values.column(c).sum::<f64>() / n as f64;
        let var = fm.values.column(c).map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        if sd < DEGENERATE_STD {
            dropped.push(fm.columns[c]);
        } else {
            keep.push(c);
            stats.push((mean, sd));
        }
    }
    if keep.is_empty() {
        return Err(Error::AllColumnsDegenerate);
    }
    let mut values = fm.values.select_columns(&keep);
    for r in 0..n {
        for (j, &(mean, sd)) in stats.iter().enumerate() {
            values[(r, j)] = (values[(r, j)] - mean) / sd;
        }
    }
    dropped.sort_unstable();
    Ok(FeatureMatrix {
        row_labels: fm.row_labels.clone(),
        columns: keep.iter().map(|&c| fm.columns[c]).collect(),
        values,
        standardized: true,
        dropped_columns: dropped,
    })
}
