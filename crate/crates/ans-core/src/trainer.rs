//! Minibatch SGD for the autoencoder, serial or data-parallel.
//!
//! Parallel gradient evaluation splits each batch into contiguous row shards,
//! computes per-shard gradient sums concurrently, and reduces them by
//! summation in fixed ascending shard order before scaling to the full-batch
//! mean. The fixed reduction order makes a run with any worker count
//! bit-reproducible, and equal to the serial result up to bounded
//! floating-point reassociation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::autoencoder::{mse_loss, pearson, AutoencoderModel, Gradients, ModelError};
use crate::dataio::{split_train_validation, DataError, LabeledDataset};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("hidden width must be at least 1")]
    ZeroHiddenWidth,
    #[error("learning rate must be finite and non-negative, got {0}")]
    BadLearningRate(f64),
    #[error("batch size must be at least 1")]
    ZeroBatchSize,
    #[error("epoch count must be at least 1")]
    ZeroEpochs,
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("batch size {batch_size} exceeds training set size {n_train}")]
    BatchTooLarge { batch_size: usize, n_train: usize },
    #[error("non-finite loss at epoch {epoch}, batch {batch}: training diverged")]
    Diverged { epoch: usize, batch: usize },
    #[error("no worker counts given")]
    NoWorkerCounts,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Training hyperparameters.
///
/// The default is a desk-scale configuration: 64 hidden nodes, learning rate
/// 2.0, batch size 32, 100 epochs, a 20% validation split, and one worker.
/// With the mean-squared objective averaged over all entries, gradient
/// magnitudes scale like 1/d, so useful learning rates here are far larger
/// than they would be with a summed objective.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub hidden_width: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub workers: usize,
    pub validation_fraction: f64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_width: 64,
            learning_rate: 2.0,
            batch_size: 32,
            epochs: 100,
            seed: 1,
            workers: 1,
            validation_fraction: 0.2,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<(), TrainError> {
        if self.hidden_width == 0 {
            return Err(TrainError::ZeroHiddenWidth);
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(TrainError::BadLearningRate(self.learning_rate));
        }
        if self.batch_size == 0 {
            return Err(TrainError::ZeroBatchSize);
        }
        if self.epochs == 0 {
            return Err(TrainError::ZeroEpochs);
        }
        if self.workers == 0 {
            return Err(TrainError::ZeroWorkers);
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(TrainError::Data(DataError::BadFraction(
                self.validation_fraction,
            )));
        }
        Ok(())
    }
}

/// One completed epoch. Epoch numbers are 1-based in reports.
#[derive(Debug, Clone)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
    pub val_pearson: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
}

impl TrainHistory {
    /// Writes the history CSV: `epoch,train_mse,val_mse,val_pearson,seconds`.
    pub fn write_csv(&self, path: &Path) -> Result<(), TrainError> {
        let mut out = String::from("epoch,train_mse,val_mse,val_pearson,seconds\n");
        for r in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.epoch, r.train_mse, r.val_mse, r.val_pearson, r.seconds
            ));
        }
        write_text(path, &out)
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), TrainError> {
    let io_err = |source| TrainError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(text.as_bytes()).map_err(io_err)
}

/// Glorot-style uniform initialization: W entries i.i.d. on
/// `[-sqrt(6/(m+d)), +sqrt(6/(m+d))]`, both biases zero. Deterministic for a
/// fixed seed.
pub fn init_weights(m: usize, d: usize, seed: u64) -> AutoencoderModel {
    assert!(m >= 1 && d >= 1, "model dimensions must be positive");
    let bound = (6.0 / (m + d) as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = Array2::from_shape_fn((m, d), |_| rng.random_range(-bound..=bound));
    AutoencoderModel::new(w, Array1::zeros(m), Array1::zeros(d))
        .expect("freshly initialized model is valid")
}

fn epoch_seed(seed: u64, epoch: usize) -> u64 {
    seed.wrapping_add((epoch as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Contiguous shard ranges: the first `rows % workers` shards take one extra
/// row. Workers beyond the row count receive empty shards.
fn shard_ranges(rows: usize, workers: usize) -> Vec<(usize, usize)> {
    let base = rows / workers;
    let rem = rows % workers;
    let mut ranges = Vec::with_capacity(workers);
    let mut start = 0;
    for s in 0..workers {
        let len = base + usize::from(s < rem);
        ranges.push((start, start + len));
        start += len;
    }
    ranges
}

/// Full-batch mean gradient computed over `workers` contiguous shards.
/// Per-shard sums are evaluated concurrently, reduced in ascending shard
/// order, and scaled once, so the result is identical to the serial
/// gradient for one worker and within floating-point reassociation of it
/// otherwise. Empty shards contribute nothing.
pub fn parallel_gradient(
    model: &AutoencoderModel,
    batch: ArrayView2<'_, f64>,
    workers: usize,
) -> Result<Gradients, TrainError> {
    if workers == 0 {
        return Err(TrainError::ZeroWorkers);
    }
    if batch.nrows() == 0 {
        return Err(TrainError::Model(ModelError::EmptyBatch));
    }
    let rows = batch.nrows();
    let d = model.input_width();
    if workers == 1 {
        return Ok(model.gradient_sums(batch)?.into_gradients(rows, d));
    }
    let ranges = shard_ranges(rows, workers);
    let shard_sums = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| {
                scope.spawn(move || {
                    if lo == hi {
                        None
                    } else {
                        Some(model.gradient_sums(batch.slice(ndarray::s![lo..hi, ..])))
                    }
                })
            })
            .collect();
        // Joining in spawn order fixes the reduction order regardless of
        // which thread finishes first.
        handles
            .into_iter()
            .map(|h| h.join().expect("gradient worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut total = crate::autoencoder::GradientSums::zeros(model.hidden_width(), d);
    for sums in shard_sums.into_iter().flatten() {
        total.accumulate(&sums?);
    }
    Ok(total.into_gradients(rows, d))
}

/// Runs `epochs` epochs of minibatch SGD on the training side of an internal
/// train/validation split. Batches are drawn from a per-epoch shuffle seeded
/// from `config.seed` when shuffling is enabled; the last short batch is
/// trained, not dropped. Returns the final model and the per-epoch history.
pub fn train(
    dataset: &LabeledDataset,
    config: &TrainConfig,
) -> Result<(AutoencoderModel, TrainHistory), TrainError> {
    config.validate()?;
    let (train_set, val_set) =
        split_train_validation(dataset, config.validation_fraction, config.seed)?;
    let n_train = train_set.n_samples();
    if config.batch_size > n_train {
        return Err(TrainError::BatchTooLarge {
            batch_size: config.batch_size,
            n_train,
        });
    }
    let d = dataset.n_features();
    let x_train = train_set.values().to_owned();
    let x_val = val_set.values().to_owned();
    let mut model = init_weights(config.hidden_width, d, config.seed);
    let mut history = TrainHistory::default();

    for epoch in 0..config.epochs {
        let started = Instant::now();
        let mut order: Vec<usize> = (0..n_train).collect();
        if config.shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(epoch_seed(config.seed, epoch));
            order.shuffle(&mut rng);
        }
        let mut sse_weighted = 0.0;
        for (batch_idx, chunk) in order.chunks(config.batch_size).enumerate() {
            let batch = x_train.select(Axis(0), chunk);
            let grads = parallel_gradient(&model, batch.view(), config.workers)?;
            if !grads.loss.is_finite() {
                return Err(TrainError::Diverged {
                    epoch: epoch + 1,
                    batch: batch_idx + 1,
                });
            }
            sse_weighted += grads.loss * chunk.len() as f64;
            model.update(config.learning_rate, &grads);
        }
        let train_mse = sse_weighted / n_train as f64;
        let reconstructed = model.decode(&model.encode(x_val.view())?)?;
        let val_mse = mse_loss(x_val.view(), reconstructed.view())?;
        let val_pearson = pearson(x_val.view(), reconstructed.view())?;
        history.epochs.push(EpochRecord {
            epoch: epoch + 1,
            train_mse,
            val_mse,
            val_pearson,
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    Ok((model, history))
}

/// One row of the strong-scaling benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub workers: usize,
    pub mean_epoch_seconds: f64,
    pub speedup: f64,
}

/// Trains the same configuration once per worker count and records the mean
/// wall-clock per epoch. Speedups are relative to the workers=1 row when one
/// is present, otherwise to the first row.
pub fn benchmark_scaling(
    dataset: &LabeledDataset,
    config: &TrainConfig,
    worker_counts: &[usize],
) -> Result<Vec<BenchmarkRow>, TrainError> {
    if worker_counts.is_empty() {
        return Err(TrainError::NoWorkerCounts);
    }
    let mut timings = Vec::with_capacity(worker_counts.len());
    for &workers in worker_counts {
        let mut cfg = config.clone();
        cfg.workers = workers;
        let (_, history) = train(dataset, &cfg)?;
        let mean =
            history.epochs.iter().map(|e| e.seconds).sum::<f64>() / history.epochs.len() as f64;
        timings.push((workers, mean));
    }
    let baseline = timings
        .iter()
        .find(|(w, _)| *w == 1)
        .map(|(_, t)| *t)
        .unwrap_or(timings[0].1);
    Ok(timings
        .into_iter()
        .map(|(workers, mean_epoch_seconds)| BenchmarkRow {
            workers,
            mean_epoch_seconds,
            speedup: baseline / mean_epoch_seconds,
        })
        .collect())
}

/// Writes the benchmark CSV: `workers,mean_epoch_seconds,speedup`.
pub fn write_benchmark_csv(rows: &[BenchmarkRow], path: &Path) -> Result<(), TrainError> {
    let mut out = String::from("workers,mean_epoch_seconds,speedup\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.workers, r.mean_epoch_seconds, r.speedup
        ));
    }
    write_text(path, &out)
}
