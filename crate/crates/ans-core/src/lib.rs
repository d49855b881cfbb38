//! Autoencoder node saliency toolkit.
//!
//! This crate trains a single-hidden-layer tied-weight sigmoid autoencoder on
//! tabular feature matrices and ranks its hidden nodes by how well their
//! activation histograms separate two labeled classes. It provides:
//!
//! - [`dataio`] — dataset loading, min-max normalization, train/validation
//!   splitting, group subsetting, and a synthetic two-class generator
//! - [`autoencoder`] — the model itself: encode/decode, loss, analytic
//!   gradients, and binary persistence
//! - [`trainer`] — minibatch SGD, serial or data-parallel with a
//!   deterministic shard-sum reduction, plus a strong-scaling benchmark
//! - [`saliency`] — activation histograms, normalized entropy difference
//!   (NED), weighted cross entropy, supervised node saliency (SNS), node
//!   ranking, and per-node weight profiles
//! - [`pca`] — a principal-component baseline (power iteration with
//!   deflation)
//! - [`plot`] — minimal self-contained SVG emitters for histograms and
//!   scatter plots
//!
//! All indices (nodes, components, features) are 0-based, in code and in
//! emitted reports.

pub mod autoencoder;
pub mod dataio;
pub mod pca;
pub mod plot;
pub mod saliency;
pub mod trainer;

pub use autoencoder::{mse_loss, pearson, sigmoid, Activations, AutoencoderModel, Gradients};
pub use dataio::{LabeledDataset, NormalizationRecord};
pub use saliency::{ActivationHistogram, NodeSaliency, SaliencyReport};
pub use trainer::{TrainConfig, TrainHistory};
