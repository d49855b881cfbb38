//! `ans` — train a tied-weight sigmoid autoencoder on tabular data and rank
//! its hidden nodes by how well they separate two labeled classes.
//!
//! Subcommands: `synth` (generate a dataset), `train` (single run or config
//! sweep), `rank` (saliency report, histogram exports, weight profiles),
//! `pca` (baseline projection), `bench` (strong-scaling benchmark). Every
//! command is deterministic for fixed flags and seed, except wall-clock
//! columns, and writes a `run.json` sidecar describing the invocation.

mod commands;
mod meta;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ans", version, about, disable_help_subcommand = true)]
pub(crate) struct Cli {
    /// Seed for every seeded operation (generation, splits, init, shuffle).
    #[arg(long, global = true, default_value_t = 1)]
    pub(crate) seed: u64,

    /// Directory receiving the command's output artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = "ans-out")]
    pub(crate) out_dir: PathBuf,

    /// Histogram bin count for saliency measures.
    #[arg(long, global = true, value_name = "K", default_value_t = 10)]
    pub(crate) bins: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic two-class dataset file.
    Synth {
        /// Samples per class.
        #[arg(long = "n", value_name = "N")]
        n_per_class: usize,
        /// Total feature count.
        #[arg(long = "d", value_name = "D")]
        features: usize,
        /// Number of class-informative features.
        #[arg(long)]
        informative: usize,
        /// Class-mean separation on informative features.
        #[arg(long)]
        sep: f64,
        /// Output dataset path.
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Train the autoencoder; with --sweep, run a full config grid.
    Train {
        /// Input dataset file.
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Hidden width (comma list with --sweep).
        #[arg(long, default_value = "64")]
        hidden: String,
        /// Batch size (comma list with --sweep).
        #[arg(long, default_value = "32")]
        batch: String,
        /// Learning rate (comma list with --sweep).
        #[arg(long, default_value = "2.0")]
        lr: String,
        /// Epoch count.
        #[arg(long, default_value_t = 100)]
        epochs: usize,
        /// Fraction of samples held out for validation.
        #[arg(long, default_value_t = 0.2)]
        val_fraction: f64,
        /// Worker threads for data-parallel gradients.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Disable the per-epoch shuffle.
        #[arg(long)]
        no_shuffle: bool,
        /// Train every combination of the comma lists and write a summary.
        #[arg(long)]
        sweep: bool,
    },
    /// Rank hidden nodes by supervised node saliency on a labeled dataset.
    Rank {
        /// Trained model file.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Labeled dataset file.
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Normalization record to apply before encoding.
        #[arg(long, value_name = "FILE")]
        norm: Option<PathBuf>,
        /// Keep only samples whose group tag equals this value.
        #[arg(long, value_name = "TAG")]
        group: Option<String>,
        /// Export histogram CSVs for the top N ranked nodes.
        #[arg(long, value_name = "N", default_value_t = 0)]
        top: usize,
        /// Also emit SVG plots for exported histograms and weight profiles.
        #[arg(long)]
        plots: bool,
        /// Emit the weight profile of this node index.
        #[arg(long, value_name = "NODE")]
        weights: Option<usize>,
        /// Number of features listed in the weight profile.
        #[arg(long, value_name = "N", default_value_t = 25)]
        weights_top: usize,
    },
    /// Fit a PCA baseline on one dataset and project another.
    Pca {
        /// Dataset the components are fitted on.
        #[arg(long, value_name = "FILE")]
        fit: PathBuf,
        /// Dataset projected onto the fitted components.
        #[arg(long, value_name = "FILE")]
        project: PathBuf,
        /// Number of principal components.
        #[arg(long, default_value_t = 2)]
        components: usize,
        /// Power-iteration convergence tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Power-iteration cap per component.
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Strong-scaling benchmark of the data-parallel trainer.
    Bench {
        /// Input dataset file.
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Comma-separated worker counts, e.g. 1,2,4.
        #[arg(long, default_value = "1,2,4")]
        workers: String,
        /// Hidden width.
        #[arg(long, default_value_t = 64)]
        hidden: usize,
        /// Batch size.
        #[arg(long, default_value_t = 32)]
        batch: usize,
        /// Learning rate.
        #[arg(long, default_value_t = 2.0)]
        lr: f64,
        /// Epochs per measured run.
        #[arg(long, default_value_t = 2)]
        epochs: usize,
        /// Fraction of samples held out for validation.
        #[arg(long, default_value_t = 0.2)]
        val_fraction: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth {
            n_per_class,
            features,
            informative,
            sep,
            ref output,
        } => commands::synth(&cli, n_per_class, features, informative, sep, output),
        Command::Train {
            ref data,
            ref hidden,
            ref batch,
            ref lr,
            epochs,
            val_fraction,
            workers,
            no_shuffle,
            sweep,
        } => commands::train(
            &cli,
            data,
            commands::TrainGrid {
                hidden: hidden.clone(),
                batch: batch.clone(),
                lr: lr.clone(),
                epochs,
                val_fraction,
                workers,
                shuffle: !no_shuffle,
                sweep,
            },
        ),
        Command::Rank {
            ref model,
            ref data,
            ref norm,
            ref group,
            top,
            plots,
            weights,
            weights_top,
        } => commands::rank(
            &cli,
            model,
            data,
            norm.as_deref(),
            group.as_deref(),
            top,
            plots,
            weights,
            weights_top,
        ),
        Command::Pca {
            ref fit,
            ref project,
            components,
            tol,
            max_iter,
        } => commands::pca(&cli, fit, project, components, tol, max_iter),
        Command::Bench {
            ref data,
            ref workers,
            hidden,
            batch,
            lr,
            epochs,
            val_fraction,
        } => commands::bench(&cli, data, workers, hidden, batch, lr, epochs, val_fraction),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
