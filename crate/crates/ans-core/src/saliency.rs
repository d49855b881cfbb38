//! Node saliency: activation histograms, normalized entropy difference,
//! weighted cross entropy, and supervised node-saliency ranking.
//!
//! For one hidden node, the activation values of the encoded samples are
//! binned into `k` equal bins over `[0,1]` (the final bin is closed at 1).
//! Three entropy measures describe the histogram:
//!
//! - NED, the normalized entropy difference `1 + (1/log2 khat) *
//!   sum_r p(B_r) log2 p(B_r)` over occupied bins, where `khat` is the
//!   number of occupied bins. NED is 1 when all mass sits in one bin and 0
//!   when mass is spread evenly over the occupied bins.
//! - NED_0 / NED_1, the same expression with per-class bin probabilities,
//!   normalized by the combined histogram's `khat` so the three values are
//!   comparable. A good classifying node satisfies `NED < NED_0` and
//!   `NED < NED_1`: each class alone is more concentrated than the union.
//! - SNS, the supervised node saliency `min(WCE_0, WCE_1)`, where each WCE
//!   is the bin-occupancy-weighted cross entropy between the per-bin
//!   binomial class-1 proportions `q_r` and a binary reference layout in
//!   which one class fills the lower half of the bins and the other the
//!   upper half. Lower SNS means better class separation, so nodes are
//!   ranked in ascending SNS order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::autoencoder::{Activations, AutoencoderModel};

/// Proportions are clamped to `[WCE_EPSILON, 1 - WCE_EPSILON]` before the
/// logarithms so fully one-sided bins yield large finite cross entropies
/// instead of infinities.
pub const WCE_EPSILON: f64 = 1e-12;

/// Bin count for per-node weight-profile histograms.
pub const WEIGHT_PROFILE_BINS: usize = 50;

#[derive(Debug, Error)]
pub enum SaliencyError {
    #[error("histogram needs at least 2 bins, got {0}")]
    BadBinCount(usize),
    #[error("activation vector is empty")]
    EmptyInput,
    #[error("{values} activation values but {labels} labels")]
    LengthMismatch { values: usize, labels: usize },
    #[error("activation value {value} at index {index} is outside [0,1]")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("label {value} at index {index} is not in {{0,1}}")]
    BadLabel { index: usize, value: u8 },
    #[error("class {0} has no samples")]
    EmptyClass(u8),
    #[error("class index {0} is not in {{0,1}}")]
    BadClass(u8),
    #[error("saliency needs both classes present")]
    SingleClass,
    #[error("node index {index} out of range for {nodes} nodes")]
    NodeOutOfRange { index: usize, nodes: usize },
    #[error("{ids} feature ids for {features} model features")]
    FeatureIdMismatch { ids: usize, features: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Which class the upper half of the reference distribution belongs to when
/// evaluating a weighted cross entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Class 0 occupies the high bins.
    Class0High,
    /// Class 1 occupies the high bins.
    Class1High,
}

/// Occupancy counts of one node's activation values over `k` bins, total and
/// per class. Bin `r` (0-based) covers `[r/k, (r+1)/k)`; the final bin is
/// closed at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationHistogram {
    k: usize,
    counts: Vec<u64>,
    counts_class0: Vec<u64>,
    counts_class1: Vec<u64>,
}

/// Bin index for an activation value: `min(floor(a * k), k - 1)`, so a value
/// of exactly 1.0 lands in the last bin.
fn bin_index(a: f64, k: usize) -> usize {
    ((a * k as f64).floor() as usize).min(k - 1)
}

/// Bins an activation vector with its binary labels.
pub fn build_histogram(
    values: &[f64],
    labels: &[u8],
    k: usize,
) -> Result<ActivationHistogram, SaliencyError> {
    if k < 2 {
        return Err(SaliencyError::BadBinCount(k));
    }
    if values.is_empty() {
        return Err(SaliencyError::EmptyInput);
    }
    if values.len() != labels.len() {
        return Err(SaliencyError::LengthMismatch {
            values: values.len(),
            labels: labels.len(),
        });
    }
    let mut counts = vec![0u64; k];
    let mut counts_class0 = vec![0u64; k];
    let mut counts_class1 = vec![0u64; k];
    for (index, (&value, &label)) in values.iter().zip(labels).enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(SaliencyError::ValueOutOfRange { index, value });
        }
        let bin = bin_index(value, k);
        counts[bin] += 1;
        match label {
            0 => counts_class0[bin] += 1,
            1 => counts_class1[bin] += 1,
            other => {
                return Err(SaliencyError::BadLabel {
                    index,
                    value: other,
                })
            }
        }
    }
    Ok(ActivationHistogram {
        k,
        counts,
        counts_class0,
        counts_class1,
    })
}

impl ActivationHistogram {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn class_counts(&self, class: u8) -> &[u64] {
        match class {
            0 => &self.counts_class0,
            1 => &self.counts_class1,
            _ => panic!("class index must be 0 or 1"),
        }
    }

    pub fn n_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn n_class(&self, class: u8) -> u64 {
        self.class_counts(class).iter().sum()
    }

    /// Number of occupied bins (`khat`).
    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Half-open bounds of bin `r`; the final bin is closed at 1.
    pub fn bin_bounds(&self, r: usize) -> (f64, f64) {
        (r as f64 / self.k as f64, (r + 1) as f64 / self.k as f64)
    }

    /// Histogram with the class labels exchanged.
    pub fn label_swapped(&self) -> Self {
        Self {
            k: self.k,
            counts: self.counts.clone(),
            counts_class0: self.counts_class1.clone(),
            counts_class1: self.counts_class0.clone(),
        }
    }

    /// Normalized entropy difference of the total occupancy. A histogram
    /// that occupies a single bin carries no information; the normalizer
    /// degenerates there and the value is defined as 1.
    pub fn ned(&self) -> f64 {
        self.ned_of(&self.counts, self.n_total())
    }

    /// Per-class NED. Uses the class-c bin probabilities but the combined
    /// histogram's occupied-bin count as normalizer, so NED, NED_0, and
    /// NED_1 share a scale.
    pub fn ned_class(&self, class: u8) -> Result<f64, SaliencyError> {
        if class > 1 {
            return Err(SaliencyError::BadClass(class));
        }
        let n_c = self.n_class(class);
        if n_c == 0 {
            return Err(SaliencyError::EmptyClass(class));
        }
        Ok(self.ned_of(self.class_counts(class), n_c))
    }

    fn ned_of(&self, counts: &[u64], total: u64) -> f64 {
        let khat = self.occupied_bins();
        if khat <= 1 {
            return 1.0;
        }
        let log2_khat = (khat as f64).log2();
        let mut sum = 0.0;
        for &c in counts {
            if c > 0 {
                let p = c as f64 / total as f64;
                sum += p * p.log2();
            }
        }
        (1.0 + sum / log2_khat).clamp(0.0, 1.0)
    }

    /// Per-bin binomial proportion of class 1, `q_r = count_1(r) / count(r)`.
    /// Empty bins have no defined proportion and carry zero weight in the
    /// cross entropies.
    pub fn binomial_proportions(&self) -> Vec<Option<f64>> {
        self.counts
            .iter()
            .zip(&self.counts_class1)
            .map(|(&ct, &c1)| (ct > 0).then(|| c1 as f64 / ct as f64))
            .collect()
    }

    /// Bin-occupancy-weighted cross entropy between the observed class
    /// proportions and the binary reference distribution. Both per-class
    /// proportions are computed from their own counts and clamped, so the
    /// two orientations are exact mirror images under a label swap.
    pub fn wce(&self, orientation: Orientation) -> f64 {
        let reference = reference_distribution(self.k);
        let n = self.n_total() as f64;
        let mut sum = 0.0;
        #[allow(clippy::needless_range_loop)]
        for r in 0..self.k {
            let ct = self.counts[r];
            if ct == 0 {
                continue;
            }
            let p_bin = ct as f64 / n;
            let q1 = clamp_proportion(self.counts_class1[r] as f64 / ct as f64);
            let q0 = clamp_proportion(self.counts_class0[r] as f64 / ct as f64);
            let (high, low) = match orientation {
                Orientation::Class1High => (q1, q0),
                Orientation::Class0High => (q0, q1),
            };
            let p_ref = reference[r];
            sum += p_bin * (-p_ref * high.log2() - (1.0 - p_ref) * low.log2());
        }
        sum
    }

    /// All saliency measures for this histogram. Requires both classes.
    pub fn node_saliency(&self, node: usize) -> Result<NodeSaliency, SaliencyError> {
        if self.n_class(0) == 0 || self.n_class(1) == 0 {
            return Err(SaliencyError::SingleClass);
        }
        let wce0 = self.wce(Orientation::Class0High);
        let wce1 = self.wce(Orientation::Class1High);
        let ned = self.ned();
        let ned0 = self.ned_class(0)?;
        let ned1 = self.ned_class(1)?;
        Ok(NodeSaliency {
            node,
            sns: wce0.min(wce1),
            wce0,
            wce1,
            ned,
            ned0,
            ned1,
            good_classifier: ned < ned0 && ned < ned1,
        })
    }

    /// Writes the histogram export CSV:
    /// `bin_lo,bin_hi,count_class0,count_class1`.
    pub fn write_csv(&self, path: &Path) -> Result<(), SaliencyError> {
        let mut out = String::from("bin_lo,bin_hi,count_class0,count_class1\n");
        for r in 0..self.k {
            let (lo, hi) = self.bin_bounds(r);
            out.push_str(&format!(
                "{},{},{},{}\n",
                lo, hi, self.counts_class0[r], self.counts_class1[r]
            ));
        }
        write_text(path, &out)
    }
}

fn clamp_proportion(q: f64) -> f64 {
    q.clamp(WCE_EPSILON, 1.0 - WCE_EPSILON)
}

/// The binary reference distribution: with 1-based bin index `r`, `p_r = 0`
/// for `r < k/2` and 1 otherwise, which puts one class in the lower bins and
/// the other in the upper bins. For `k = 10` bins 4..10 (0-based) are hot.
/// `k = 2` is special-cased to `(0, 1)`, the intended half split, since the
/// literal rule would mark both bins hot.
pub fn reference_distribution(k: usize) -> Vec<f64> {
    assert!(k >= 2, "reference distribution needs at least 2 bins");
    if k == 2 {
        return vec![0.0, 1.0];
    }
    (1..=k)
        .map(|r| {
            if (r as f64) < k as f64 / 2.0 {
                0.0
            } else {
                1.0
            }
        })
        .collect()
}

/// Saliency measures of one hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSaliency {
    pub node: usize,
    pub sns: f64,
    pub wce0: f64,
    pub wce1: f64,
    pub ned: f64,
    pub ned0: f64,
    pub ned1: f64,
    pub good_classifier: bool,
}

/// Saliency of every node plus the ascending-SNS ranking.
#[derive(Debug, Clone)]
pub struct SaliencyReport {
    /// One entry per node, in node order.
    pub nodes: Vec<NodeSaliency>,
    /// Node indices sorted by ascending SNS, ties broken by node index.
    pub ranking: Vec<usize>,
}

impl SaliencyReport {
    /// Writes the report CSV:
    /// `node,sns,wce0,wce1,ned,ned0,ned1,good_classifier,rank`
    /// with one row per node in node order. `rank` is the 1-based position
    /// in the ascending-SNS ranking.
    pub fn write_csv(&self, path: &Path) -> Result<(), SaliencyError> {
        let mut rank_of = vec![0usize; self.nodes.len()];
        for (pos, &node) in self.ranking.iter().enumerate() {
            rank_of[node] = pos + 1;
        }
        let mut out = String::from("node,sns,wce0,wce1,ned,ned0,ned1,good_classifier,rank\n");
        for s in &self.nodes {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                s.node,
                s.sns,
                s.wce0,
                s.wce1,
                s.ned,
                s.ned0,
                s.ned1,
                s.good_classifier,
                rank_of[s.node]
            ));
        }
        write_text(path, &out)
    }
}

/// Builds per-node histograms from the activation matrix and ranks all nodes
/// by ascending SNS. Nodes are evaluated independently and assembled in node
/// order, so the report is deterministic.
pub fn rank_nodes(
    activations: &Activations,
    labels: &[u8],
    k: usize,
) -> Result<SaliencyReport, SaliencyError> {
    if activations.n_samples() != labels.len() {
        return Err(SaliencyError::LengthMismatch {
            values: activations.n_samples(),
            labels: labels.len(),
        });
    }
    let mut nodes = Vec::with_capacity(activations.n_nodes());
    for s in 0..activations.n_nodes() {
        let row = activations.node(s).to_vec();
        let hist = build_histogram(&row, labels, k)?;
        nodes.push(hist.node_saliency(s)?);
    }
    let mut ranking: Vec<usize> = (0..nodes.len()).collect();
    ranking.sort_by(|&a, &b| {
        nodes[a]
            .sns
            .total_cmp(&nodes[b].sns)
            .then_with(|| a.cmp(&b))
    });
    Ok(SaliencyReport { nodes, ranking })
}

/// A feature's contribution to one hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct TopFeature {
    pub index: usize,
    pub id: String,
    pub weight: f64,
}

/// The weight row of one hidden node: a fixed-width histogram of its values
/// and the strongest features by absolute weight.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    pub node: usize,
    pub weights: Vec<f64>,
    pub hist_lo: f64,
    pub hist_hi: f64,
    pub hist_counts: Vec<u64>,
    pub top_features: Vec<TopFeature>,
}

impl WeightProfile {
    /// Lower and upper bounds of weight-histogram bin `r`.
    pub fn bin_bounds(&self, r: usize) -> (f64, f64) {
        let width = (self.hist_hi - self.hist_lo) / WEIGHT_PROFILE_BINS as f64;
        (
            self.hist_lo + r as f64 * width,
            self.hist_lo + (r + 1) as f64 * width,
        )
    }

    /// Writes the ranked-feature CSV: `rank,feature_index,feature_id,weight`.
    pub fn write_csv(&self, path: &Path) -> Result<(), SaliencyError> {
        let mut out = String::from("rank,feature_index,feature_id,weight\n");
        for (pos, f) in self.top_features.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", pos + 1, f.index, f.id, f.weight));
        }
        write_text(path, &out)
    }
}

/// Extracts node `s`'s weight row, its 50-bin value histogram, and the
/// `top_n` feature ids ranked by absolute weight, descending (ties broken by
/// feature index).
pub fn node_weight_profile(
    model: &AutoencoderModel,
    feature_ids: &[String],
    s: usize,
    top_n: usize,
) -> Result<WeightProfile, SaliencyError> {
    if s >= model.hidden_width() {
        return Err(SaliencyError::NodeOutOfRange {
            index: s,
            nodes: model.hidden_width(),
        });
    }
    if feature_ids.len() != model.input_width() {
        return Err(SaliencyError::FeatureIdMismatch {
            ids: feature_ids.len(),
            features: model.input_width(),
        });
    }
    let weights: Vec<f64> = model.weights().row(s).to_vec();
    let lo = weights.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut hist_counts = vec![0u64; WEIGHT_PROFILE_BINS];
    let width = hi - lo;
    for &w in &weights {
        let bin = if width > 0.0 {
            (((w - lo) / width * WEIGHT_PROFILE_BINS as f64).floor() as usize)
                .min(WEIGHT_PROFILE_BINS - 1)
        } else {
            0
        };
        hist_counts[bin] += 1;
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .abs()
            .total_cmp(&weights[a].abs())
            .then_with(|| a.cmp(&b))
    });
    let top_features = order
        .into_iter()
        .take(top_n)
        .map(|index| TopFeature {
            index,
            id: feature_ids[index].clone(),
            weight: weights[index],
        })
        .collect();
    Ok(WeightProfile {
        node: s,
        weights,
        hist_lo: lo,
        hist_hi: hi,
        hist_counts,
        top_features,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), SaliencyError> {
    let io_err = |source| SaliencyError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(text.as_bytes()).map_err(io_err)
}
