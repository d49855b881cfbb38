//! Dataset ingestion, normalization, splitting, subsetting, and synthesis.
//!
//! On-disk dataset format: UTF-8 delimited text, tab or comma (auto-detected
//! from the header line). The first row holds feature identifiers, the first
//! column holds sample identifiers. An optional `group` column carries a
//! per-sample category tag and an optional trailing `label` column holds 0/1
//! class labels. Column order is fixed: sample id, features, `group`,
//! `label`.
//!
//! Normalization records are versioned text files: a `v1` header line
//! followed by one `feature_id<TAB>min<TAB>max` line per feature.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Errors produced while loading, transforming, or generating datasets.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: file has no data rows")]
    NoRows { path: PathBuf },
    #[error("{path}: header has no feature columns")]
    NoFeatures { path: PathBuf },
    #[error("{path}: expected trailing `label` column, found {found:?}")]
    MissingLabelColumn { path: PathBuf, found: String },
    #[error("{path}:{line}: expected {expected} cells, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}: column {column}: invalid numeric value {value:?}")]
    BadCell {
        path: PathBuf,
        line: usize,
        column: usize,
        value: String,
    },
    #[error("{path}:{line}: label must be 0 or 1, got {value:?}")]
    BadLabel {
        path: PathBuf,
        line: usize,
        value: String,
    },
    #[error("duplicate sample id {0:?}")]
    DuplicateSampleId(String),
    #[error("duplicate feature id {0:?}")]
    DuplicateFeatureId(String),
    #[error("label vector length {labels} does not match sample count {samples}")]
    LabelLengthMismatch { labels: usize, samples: usize },
    #[error("label value {0} is not in {{0,1}}")]
    LabelOutOfDomain(u8),
    #[error("group tag vector length {tags} does not match sample count {samples}")]
    TagLengthMismatch { tags: usize, samples: usize },
    #[error("id vector length {ids} does not match axis length {axis}")]
    IdLengthMismatch { ids: usize, axis: usize },
    #[error("dataset is empty")]
    Empty,
    #[error("normalization record covers {record} features, dataset has {dataset}")]
    FeatureCountMismatch { record: usize, dataset: usize },
    #[error("validation fraction must lie strictly inside (0,1), got {0}")]
    BadFraction(f64),
    #[error("need at least 2 samples to split, got {0}")]
    TooFewSamples(usize),
    #[error("dataset has no group tags")]
    NoGroupTags,
    #[error("subset predicate matched no samples")]
    EmptySubset,
    #[error("invalid synthetic spec: {0}")]
    BadSyntheticSpec(String),
    #[error("{path}: unsupported normalization record version {found:?} (expected \"v1\")")]
    RecordVersion { path: PathBuf, found: String },
    #[error("{path}:{line}: malformed normalization record line")]
    RecordLine { path: PathBuf, line: usize },
}

/// An n-samples by d-features matrix with optional binary labels, plus
/// identifier metadata. Values are expected to lie in `[0,1]` once the
/// dataset has been normalized; raw loaded data may be outside that range.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    values: Array2<f64>,
    labels: Option<Vec<u8>>,
    sample_ids: Vec<String>,
    feature_ids: Vec<String>,
    group_tags: Option<Vec<String>>,
}

impl LabeledDataset {
    /// Assembles a dataset, validating label domain, vector lengths, and id
    /// uniqueness along both axes.
    pub fn new(
        values: Array2<f64>,
        labels: Option<Vec<u8>>,
        sample_ids: Vec<String>,
        feature_ids: Vec<String>,
        group_tags: Option<Vec<String>>,
    ) -> Result<Self, DataError> {
        let (n, d) = values.dim();
        if sample_ids.len() != n {
            return Err(DataError::IdLengthMismatch {
                ids: sample_ids.len(),
                axis: n,
            });
        }
        if feature_ids.len() != d {
            return Err(DataError::IdLengthMismatch {
                ids: feature_ids.len(),
                axis: d,
            });
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(DataError::LabelLengthMismatch {
                    labels: labels.len(),
                    samples: n,
                });
            }
            if let Some(&bad) = labels.iter().find(|&&y| y > 1) {
                return Err(DataError::LabelOutOfDomain(bad));
            }
        }
        if let Some(tags) = &group_tags {
            if tags.len() != n {
                return Err(DataError::TagLengthMismatch {
                    tags: tags.len(),
                    samples: n,
                });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &sample_ids {
            if !seen.insert(id.as_str()) {
                return Err(DataError::DuplicateSampleId(id.clone()));
            }
        }
        let mut seen = HashSet::with_capacity(d);
        for id in &feature_ids {
            if !seen.insert(id.as_str()) {
                return Err(DataError::DuplicateFeatureId(id.clone()));
            }
        }
        Ok(Self {
            values,
            labels,
            sample_ids,
            feature_ids,
            group_tags,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn feature_ids(&self) -> &[String] {
        &self.feature_ids
    }

    pub fn group_tags(&self) -> Option<&[String]> {
        self.group_tags.as_deref()
    }

    /// New dataset holding the given rows, in the given order. Labels, tags,
    /// and sample ids follow the rows; feature ids are shared.
    fn take_rows(&self, rows: &[usize]) -> Self {
        Self {
            values: self.values.select(Axis(0), rows),
            labels: self
                .labels
                .as_ref()
                .map(|l| rows.iter().map(|&i| l[i]).collect()),
            sample_ids: rows.iter().map(|&i| self.sample_ids[i].clone()).collect(),
            feature_ids: self.feature_ids.clone(),
            group_tags: self
                .group_tags
                .as_ref()
                .map(|t| rows.iter().map(|&i| t[i].clone()).collect()),
        }
    }
}

fn detect_delimiter(header: &str) -> char {
    if header.contains('\t') {
        '\t'
    } else {
        ','
    }
}

/// Loads a dataset file. When `has_labels` is set the trailing column must be
/// named `label` and hold 0/1 values. A column named `group` directly before
/// the label column (or last, when `has_labels` is off) is read as group tags.
pub fn load_matrix(path: &Path, has_labels: bool) -> Result<LabeledDataset, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| DataError::NoRows {
        path: path.to_path_buf(),
    })?;
    let delim = detect_delimiter(header);
    let mut cols: Vec<&str> = header.split(delim).collect();

    if has_labels {
        match cols.last() {
            Some(&"label") => {
                cols.pop();
            }
            other => {
                return Err(DataError::MissingLabelColumn {
                    path: path.to_path_buf(),
                    found: other.map_or(String::new(), |c| c.to_string()),
                })
            }
        }
    }
    let has_group = cols.len() > 1 && *cols.last().unwrap() == "group";
    if has_group {
        cols.pop();
    }
    if cols.len() < 2 {
        return Err(DataError::NoFeatures {
            path: path.to_path_buf(),
        });
    }
    let feature_ids: Vec<String> = cols[1..].iter().map(|s| s.to_string()).collect();
    let d = feature_ids.len();
    let expected = 1 + d + usize::from(has_group) + usize::from(has_labels);

    let mut rows: Vec<f64> = Vec::new();
    let mut sample_ids = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1; // 1-based line number in the file
        let cells: Vec<&str> = line.split(delim).collect();
        if cells.len() != expected {
            return Err(DataError::RaggedRow {
                path: path.to_path_buf(),
                line: lineno,
                expected,
                found: cells.len(),
            });
        }
        sample_ids.push(cells[0].to_string());
        for (j, cell) in cells[1..1 + d].iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| DataError::BadCell {
                path: path.to_path_buf(),
                line: lineno,
                column: j + 2, // 1-based file column
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DataError::BadCell {
                    path: path.to_path_buf(),
                    line: lineno,
                    column: j + 2,
                    value: cell.to_string(),
                });
            }
            rows.push(v);
        }
        if has_group {
            tags.push(cells[1 + d].to_string());
        }
        if has_labels {
            let cell = cells[expected - 1].trim();
            match cell {
                "0" => labels.push(0),
                "1" => labels.push(1),
                _ => {
                    return Err(DataError::BadLabel {
                        path: path.to_path_buf(),
                        line: lineno,
                        value: cell.to_string(),
                    })
                }
            }
        }
    }
    if sample_ids.is_empty() {
        return Err(DataError::NoRows {
            path: path.to_path_buf(),
        });
    }
    let n = sample_ids.len();
    let values = Array2::from_shape_vec((n, d), rows).expect("row count times d matches buffer");
    LabeledDataset::new(
        values,
        has_labels.then_some(labels),
        sample_ids,
        feature_ids,
        has_group.then_some(tags),
    )
}

/// Writes a dataset in the on-disk format (tab-delimited).
pub fn save_matrix(dataset: &LabeledDataset, path: &Path) -> Result<(), DataError> {
    let io_err = |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::new();
    out.push_str("sample");
    for id in dataset.feature_ids() {
        out.push('\t');
        out.push_str(id);
    }
    if dataset.group_tags().is_some() {
        out.push_str("\tgroup");
    }
    if dataset.labels().is_some() {
        out.push_str("\tlabel");
    }
    out.push('\n');
    for i in 0..dataset.n_samples() {
        out.push_str(&dataset.sample_ids()[i]);
        for v in dataset.values.row(i) {
            out.push('\t');
            out.push_str(&format!("{v}"));
        }
        if let Some(tags) = dataset.group_tags() {
            out.push('\t');
            out.push_str(&tags[i]);
        }
        if let Some(labels) = dataset.labels() {
            out.push('\t');
            out.push_str(if labels[i] == 1 { "1" } else { "0" });
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)
}

/// Per-feature minimum and maximum observed on a fitting set.
#[derive(Debug, Clone)]
pub struct NormalizationRecord {
    feature_ids: Vec<String>,
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl NormalizationRecord {
    pub fn n_features(&self) -> usize {
        self.mins.len()
    }

    pub fn bounds(&self, feature: usize) -> (f64, f64) {
        (self.mins[feature], self.maxs[feature])
    }

    /// Writes the `v1` record format.
    pub fn save(&self, path: &Path) -> Result<(), DataError> {
        let io_err = |source| DataError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = String::from("v1\n");
        for ((id, min), max) in self.feature_ids.iter().zip(&self.mins).zip(&self.maxs) {
            out.push_str(&format!("{id}\t{min}\t{max}\n"));
        }
        let mut file = fs::File::create(path).map_err(io_err)?;
        file.write_all(out.as_bytes()).map_err(io_err)
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(|source| DataError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "v1")) => {}
            other => {
                return Err(DataError::RecordVersion {
                    path: path.to_path_buf(),
                    found: other.map(|(_, l)| l.to_string()).unwrap_or_default(),
                })
            }
        }
        let mut feature_ids = Vec::new();
        let mut mins = Vec::new();
        let mut maxs = Vec::new();
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = || DataError::RecordLine {
                path: path.to_path_buf(),
                line: idx + 1,
            };
            let mut cells = line.split('\t');
            let id = cells.next().ok_or_else(bad)?;
            let min: f64 = cells.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
            let max: f64 = cells.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
            if cells.next().is_some() || max < min {
                return Err(bad());
            }
            feature_ids.push(id.to_string());
            mins.push(min);
            maxs.push(max);
        }
        Ok(Self {
            feature_ids,
            mins,
            maxs,
        })
    }
}

/// Fits per-feature min-max bounds and returns the record together with the
/// normalized dataset. Constant features map to 0 so the `[0,1]` contract
/// holds without dropping columns.
pub fn fit_normalizer(
    dataset: &LabeledDataset,
) -> Result<(NormalizationRecord, LabeledDataset), DataError> {
    if dataset.n_samples() == 0 {
        return Err(DataError::Empty);
    }
    let values = dataset.values();
    let mut mins = Vec::with_capacity(dataset.n_features());
    let mut maxs = Vec::with_capacity(dataset.n_features());
    for col in values.columns() {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in col {
            min = min.min(v);
            max = max.max(v);
        }
        mins.push(min);
        maxs.push(max);
    }
    let record = NormalizationRecord {
        feature_ids: dataset.feature_ids().to_vec(),
        mins,
        maxs,
    };
    let normalized = apply_normalizer(&record, dataset)?;
    Ok((record, normalized))
}

/// Rescales a dataset through a fitted record. Values outside the fitted
/// range clamp to `[0,1]`; constant features map to 0.
pub fn apply_normalizer(
    record: &NormalizationRecord,
    dataset: &LabeledDataset,
) -> Result<LabeledDataset, DataError> {
    if record.n_features() != dataset.n_features() {
        return Err(DataError::FeatureCountMismatch {
            record: record.n_features(),
            dataset: dataset.n_features(),
        });
    }
    let mut out = dataset.clone();
    for (j, mut col) in out.values.columns_mut().into_iter().enumerate() {
        let (min, max) = (record.mins[j], record.maxs[j]);
        let range = max - min;
        if range > 0.0 {
            col.mapv_inplace(|v| ((v - min) / range).clamp(0.0, 1.0));
        } else {
            col.fill(0.0);
        }
    }
    Ok(out)
}

/// Splits into disjoint train and validation subsets. The validation side
/// gets `round(fraction * n)` samples, with at least one sample on each side.
/// Deterministic for a fixed seed; row order within each side follows the
/// original dataset.
pub fn split_train_validation(
    dataset: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset), DataError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DataError::BadFraction(fraction));
    }
    let n = dataset.n_samples();
    if n < 2 {
        return Err(DataError::TooFewSamples(n));
    }
    let n_val = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let mut val: Vec<usize> = indices[..n_val].to_vec();
    let mut train: Vec<usize> = indices[n_val..].to_vec();
    val.sort_unstable();
    train.sort_unstable();
    Ok((dataset.take_rows(&train), dataset.take_rows(&val)))
}

/// Keeps the rows whose group tag satisfies the predicate.
pub fn select_subset<P>(dataset: &LabeledDataset, predicate: P) -> Result<LabeledDataset, DataError>
where
    P: Fn(&str) -> bool,
{
    let tags = dataset.group_tags().ok_or(DataError::NoGroupTags)?;
    let rows: Vec<usize> = tags
        .iter()
        .enumerate()
        .filter(|(_, t)| predicate(t))
        .map(|(i, _)| i)
        .collect();
    if rows.is_empty() {
        return Err(DataError::EmptySubset);
    }
    Ok(dataset.take_rows(&rows))
}

/// Standard deviation of the synthetic generator's Gaussian noise. A
/// `separation` of 4 puts the class-conditional means 8 noise standard
/// deviations apart.
pub const SYNTHETIC_NOISE_SD: f64 = 0.5;

/// Generates a two-class dataset: `n_per_class` samples per class over `d`
/// features. The first `n_informative` features have class-conditional means
/// `separation` apart; the rest are class-independent noise. All features
/// carry Gaussian noise with standard deviation [`SYNTHETIC_NOISE_SD`].
/// Values are min-max normalized to `[0,1]`. Deterministic for a fixed seed.
pub fn generate_synthetic(
    n_per_class: usize,
    d: usize,
    n_informative: usize,
    separation: f64,
    seed: u64,
) -> Result<LabeledDataset, DataError> {
    if n_per_class == 0 || d == 0 {
        return Err(DataError::BadSyntheticSpec(format!(
            "n_per_class and d must be positive (got {n_per_class}, {d})"
        )));
    }
    if n_informative > d {
        return Err(DataError::BadSyntheticSpec(format!(
            "n_informative ({n_informative}) exceeds feature count ({d})"
        )));
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(DataError::BadSyntheticSpec(format!(
            "separation must be finite and non-negative, got {separation}"
        )));
    }
    let n = 2 * n_per_class;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, SYNTHETIC_NOISE_SD).expect("valid std dev");
    let mut values = Array2::zeros((n, d));
    for i in 0..n {
        let label = u8::from(i >= n_per_class);
        for j in 0..d {
            let mean = if label == 1 && j < n_informative {
                separation
            } else {
                0.0
            };
            values[(i, j)] = mean + noise.sample(&mut rng);
        }
    }
    let labels: Vec<u8> = (0..n).map(|i| u8::from(i >= n_per_class)).collect();
    let sample_ids = (0..n)
        .map(|i| format!("s{:05}_c{}", i, labels[i]))
        .collect();
    let feature_ids = (0..d)
        .map(|j| {
            if j < n_informative {
                format!("f{j:04}_inf")
            } else {
                format!("f{j:04}")
            }
        })
        .collect();
    let raw = LabeledDataset::new(values, Some(labels), sample_ids, feature_ids, None)?;
    let (_, normalized) = fit_normalizer(&raw)?;
    Ok(normalized)
}
