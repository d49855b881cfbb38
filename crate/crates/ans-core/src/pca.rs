//! Principal-component baseline.
//!
//! Components are extracted one at a time by power iteration on the
//! mean-centered sample covariance (1/(n-1) convention), re-orthogonalizing
//! against previously found components every step. The covariance is applied
//! implicitly as `X_c^T (X_c v) / (n - 1)`, so no d-by-d matrix is formed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2, ArrayView2, Axis};
use thiserror::Error;

use crate::dataio::LabeledDataset;

#[derive(Debug, Error)]
pub enum PcaError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("requested {requested} components but at most {max} are available")]
    TooManyComponents { requested: usize, max: usize },
    #[error("tolerance must be finite and positive, got {0}")]
    BadTolerance(f64),
    #[error("max_iter must be at least 1")]
    ZeroMaxIter,
    #[error(
        "power iteration did not converge for component {component} within {max_iter} iterations"
    )]
    NoConvergence { component: usize, max_iter: usize },
    #[error("expected {expected} feature columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Feature means plus orthonormal components in descending eigenvalue order.
#[derive(Debug, Clone)]
pub struct PcaModel {
    mean: Array1<f64>,
    components: Array2<f64>,
    eigenvalues: Vec<f64>,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.components.ncols()
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn components(&self) -> ArrayView2<'_, f64> {
        self.components.view()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Deterministic start vector for component `component`: all ones perturbed
/// by an integer hash of the coordinate index, then normalized.
fn start_vector(d: usize, component: usize) -> Array1<f64> {
    let mut v = Array1::from_shape_fn(d, |i| {
        let h = (i as u64 + 1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(component as u64 + 1)
            .wrapping_mul(0xBF58_476D_1CE4_E5B9);
        1.0 + 0.5 * ((h >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
    });
    let norm = v.dot(&v).sqrt();
    v /= norm;
    v
}

/// Flips the sign so the largest-magnitude coordinate is positive.
fn fix_sign(v: &mut Array1<f64>) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.mapv_inplace(|x| -x);
    }
}

/// Removes the projections onto `components[..count]` from `v`.
fn orthogonalize(v: &mut Array1<f64>, components: &Array2<f64>, count: usize) {
    for j in 0..count {
        let row = components.row(j);
        let proj = row.dot(v);
        for (x, &c) in v.iter_mut().zip(row) {
            *x -= proj * c;
        }
    }
}

/// Canonical fallback direction for a zero-variance subspace: the first axis
/// vector with a usable residual after orthogonalization.
fn canonical_direction(components: &Array2<f64>, count: usize, d: usize) -> Array1<f64> {
    for axis in 0..d {
        let mut v = Array1::zeros(d);
        v[axis] = 1.0;
        orthogonalize(&mut v, components, count);
        let norm = v.dot(&v).sqrt();
        if norm > 1e-6 {
            v /= norm;
            return v;
        }
    }
    unreachable!("fewer components than dimensions always leaves a residual axis");
}

/// Fits the top `c` principal components of `x`.
pub fn fit_pca(
    x: ArrayView2<'_, f64>,
    c: usize,
    tol: f64,
    max_iter: usize,
) -> Result<PcaModel, PcaError> {
    let (n, d) = x.dim();
    if n < 2 {
        return Err(PcaError::TooFewSamples(n));
    }
    let max = (n - 1).min(d);
    if c == 0 || c > max {
        return Err(PcaError::TooManyComponents { requested: c, max });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(PcaError::BadTolerance(tol));
    }
    if max_iter == 0 {
        return Err(PcaError::ZeroMaxIter);
    }
    let mean = x.mean_axis(Axis(0)).expect("n >= 2");
    let centered = &x - &mean.view().insert_axis(Axis(0));
    let scale = 1.0 / (n - 1) as f64;
    let total_variance = centered.iter().map(|v| v * v).sum::<f64>() * scale;
    let apply_cov = |v: &Array1<f64>| -> Array1<f64> {
        let xv = centered.dot(v);
        let mut out = centered.t().dot(&xv);
        out *= scale;
        out
    };
    // Residual directions with less than this much variance are treated as
    // exactly degenerate and filled with canonical axis-derived components.
    let zero_threshold = 1e-14 * total_variance.max(f64::MIN_POSITIVE);

    let mut components = Array2::zeros((c, d));
    let mut eigenvalues = vec![0.0; c];
    #[allow(clippy::needless_range_loop)]
    for j in 0..c {
        let mut v = start_vector(d, j);
        orthogonalize(&mut v, &components, j);
        let norm = v.dot(&v).sqrt();
        if norm > 1e-12 {
            v /= norm;
        } else {
            v = canonical_direction(&components, j, d);
        }
        let mut converged = false;
        let mut degenerate = false;
        for _ in 0..max_iter {
            let mut w = apply_cov(&v);
            orthogonalize(&mut w, &components, j);
            let norm = w.dot(&w).sqrt();
            if norm <= zero_threshold {
                // No variance left along any remaining direction.
                v = canonical_direction(&components, j, d);
                degenerate = true;
                converged = true;
                break;
            }
            w /= norm;
            let (mut diff, mut sum) = (0.0_f64, 0.0_f64);
            for (a, b) in v.iter().zip(&w) {
                diff = diff.max((a - b).abs());
                sum = sum.max((a + b).abs());
            }
            v = w;
            if diff.min(sum) < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(PcaError::NoConvergence {
                component: j,
                max_iter,
            });
        }
        eigenvalues[j] = if degenerate {
            0.0
        } else {
            v.dot(&apply_cov(&v))
        };
        fix_sign(&mut v);
        components.row_mut(j).assign(&v);
    }
    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
    })
}

/// Projects rows of `x` onto the fitted components: `(x - mean) C^T`.
pub fn project(model: &PcaModel, x: ArrayView2<'_, f64>) -> Result<Array2<f64>, PcaError> {
    if x.ncols() != model.n_features() {
        return Err(PcaError::DimensionMismatch {
            expected: model.n_features(),
            found: x.ncols(),
        });
    }
    let centered = &x - &model.mean.view().insert_axis(Axis(0));
    Ok(centered.dot(&model.components.t()))
}

/// Writes the scores CSV: `sample_id,pc1,...,pcC,label,group`. Label and
/// group cells are empty when the dataset has none.
pub fn write_scores_csv(
    scores: ArrayView2<'_, f64>,
    dataset: &LabeledDataset,
    path: &Path,
) -> Result<(), PcaError> {
    let io_err = |source| PcaError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::from("sample_id");
    for c in 0..scores.ncols() {
        out.push_str(&format!(",pc{}", c + 1));
    }
    out.push_str(",label,group\n");
    for (i, row) in scores.rows().into_iter().enumerate() {
        out.push_str(&csv_field(&dataset.sample_ids()[i]));
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push(',');
        if let Some(labels) = dataset.labels() {
            out.push_str(if labels[i] == 1 { "1" } else { "0" });
        }
        out.push(',');
        if let Some(tags) = dataset.group_tags() {
            out.push_str(&csv_field(&tags[i]));
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
