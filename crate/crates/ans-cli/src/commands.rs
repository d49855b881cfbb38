//! The five pipeline commands.

use std::fmt::Display;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use ans_core::autoencoder::AutoencoderModel;
use ans_core::dataio::{self, LabeledDataset, NormalizationRecord};
use ans_core::pca as pca_baseline;
use ans_core::plot;
use ans_core::saliency;
use ans_core::trainer::{self, TrainConfig, TrainError};

use crate::meta::{write_run_json, OutputGuard};
use crate::Cli;

/// Loads a dataset file, reading the trailing column as labels when the
/// header names it `label`.
fn load_dataset(path: &Path) -> Result<LabeledDataset> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut header = String::new();
    BufReader::new(file)
        .read_line(&mut header)
        .with_context(|| format!("reading {}", path.display()))?;
    let header = header.trim_end_matches(['\r', '\n']);
    let delim = if header.contains('\t') { '\t' } else { ',' };
    let has_labels = header.split(delim).next_back() == Some("label");
    dataio::load_matrix(path, has_labels).with_context(|| format!("loading {}", path.display()))
}

fn parse_list<T>(text: &str, flag: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: Display,
{
    text.split(',')
        .map(|cell| {
            let cell = cell.trim();
            cell.parse::<T>()
                .map_err(|e| anyhow!("{flag}: invalid value {cell:?}: {e}"))
        })
        .collect()
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn synth(
    cli: &Cli,
    n_per_class: usize,
    features: usize,
    informative: usize,
    sep: f64,
    output: &Path,
) -> Result<()> {
    let dataset = dataio::generate_synthetic(n_per_class, features, informative, sep, cli.seed)?;
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut guard = OutputGuard::new();
    guard.track(output);
    dataio::save_matrix(&dataset, output)?;
    let sidecar = PathBuf::from(format!("{}.run.json", output.display()));
    guard.track(&sidecar);
    write_run_json(
        &sidecar,
        "synth",
        cli.seed,
        cli.bins,
        json!({
            "n_per_class": n_per_class,
            "features": features,
            "informative": informative,
            "separation": sep,
            "output": output.display().to_string(),
        }),
        &[output],
    )?;
    guard.commit();
    println!(
        "wrote {} ({} samples x {} features)",
        output.display(),
        dataset.n_samples(),
        dataset.n_features()
    );
    Ok(())
}

pub struct TrainGrid {
    pub hidden: String,
    pub batch: String,
    pub lr: String,
    pub epochs: usize,
    pub val_fraction: f64,
    pub workers: usize,
    pub shuffle: bool,
    pub sweep: bool,
}

pub fn train(cli: &Cli, data: &Path, grid: TrainGrid) -> Result<()> {
    let hidden_list: Vec<usize> = parse_list(&grid.hidden, "--hidden")?;
    let batch_list: Vec<usize> = parse_list(&grid.batch, "--batch")?;
    let lr_list: Vec<f64> = parse_list(&grid.lr, "--lr")?;
    if !grid.sweep && (hidden_list.len() > 1 || batch_list.len() > 1 || lr_list.len() > 1) {
        bail!("comma lists for --hidden/--batch/--lr require --sweep");
    }
    let raw = load_dataset(data)?;
    let (record, normalized) = dataio::fit_normalizer(&raw)?;
    fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let mut guard = OutputGuard::new();
    let config_for = |hidden: usize, batch: usize, lr: f64| TrainConfig {
        hidden_width: hidden,
        learning_rate: lr,
        batch_size: batch,
        epochs: grid.epochs,
        seed: cli.seed,
        workers: grid.workers,
        validation_fraction: grid.val_fraction,
        shuffle: grid.shuffle,
    };
    let params = json!({
        "data": data.display().to_string(),
        "hidden": hidden_list,
        "batch": batch_list,
        "lr": lr_list,
        "epochs": grid.epochs,
        "val_fraction": grid.val_fraction,
        "workers": grid.workers,
        "shuffle": grid.shuffle,
        "sweep": grid.sweep,
    });

    if grid.sweep {
        let mut summary =
            String::from("hidden,batch,lr,status,final_val_mse,final_val_pearson,history_file\n");
        let mut outputs: Vec<PathBuf> = Vec::new();
        for &hidden in &hidden_list {
            for &batch in &batch_list {
                for &lr in &lr_list {
                    let cfg = config_for(hidden, batch, lr);
                    match trainer::train(&normalized, &cfg) {
                        Ok((_, history)) => {
                            let name = format!("history_h{hidden}_b{batch}_lr{lr}.csv");
                            let path = cli.out_dir.join(&name);
                            guard.track(&path);
                            history.write_csv(&path)?;
                            let last = history.epochs.last().expect("epochs >= 1");
                            summary.push_str(&format!(
                                "{hidden},{batch},{lr},ok,{},{},{name}\n",
                                last.val_mse, last.val_pearson
                            ));
                            outputs.push(path);
                        }
                        Err(err @ TrainError::Diverged { .. })
                        | Err(err @ TrainError::BatchTooLarge { .. }) => {
                            summary.push_str(&format!(
                                "{hidden},{batch},{lr},{},,,\n",
                                csv_quote(&err.to_string())
                            ));
                        }
                        Err(err) => return Err(err.into()),
                    }
                }
            }
        }
        let summary_path = cli.out_dir.join("sweep_summary.csv");
        guard.track(&summary_path);
        fs::write(&summary_path, summary)
            .with_context(|| format!("writing {}", summary_path.display()))?;
        outputs.push(summary_path);
        let run_path = cli.out_dir.join("run.json");
        guard.track(&run_path);
        let output_refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
        write_run_json(&run_path, "train", cli.seed, cli.bins, params, &output_refs)?;
        guard.commit();
        println!(
            "swept {} configurations -> {}",
            hidden_list.len() * batch_list.len() * lr_list.len(),
            cli.out_dir.display()
        );
        return Ok(());
    }

    let cfg = config_for(hidden_list[0], batch_list[0], lr_list[0]);
    let (model, history) = trainer::train(&normalized, &cfg)?;
    let model_path = cli.out_dir.join("model.ansm");
    let norm_path = cli.out_dir.join("model.norm.tsv");
    let history_path = cli.out_dir.join("history.csv");
    for p in [&model_path, &norm_path, &history_path] {
        guard.track(p);
    }
    model.save(&model_path)?;
    record.save(&norm_path)?;
    history.write_csv(&history_path)?;
    let run_path = cli.out_dir.join("run.json");
    guard.track(&run_path);
    write_run_json(
        &run_path,
        "train",
        cli.seed,
        cli.bins,
        params,
        &[&model_path, &norm_path, &history_path],
    )?;
    guard.commit();
    let last = history.epochs.last().expect("epochs >= 1");
    println!(
        "trained {} epochs: val_mse = {:.6}, val_pearson = {:.4} -> {}",
        last.epoch,
        last.val_mse,
        last.val_pearson,
        model_path.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn rank(
    cli: &Cli,
    model_path: &Path,
    data: &Path,
    norm: Option<&Path>,
    group: Option<&str>,
    top: usize,
    plots: bool,
    weights: Option<usize>,
    weights_top: usize,
) -> Result<()> {
    let model = AutoencoderModel::load(model_path)?;
    let mut dataset = load_dataset(data)?;
    if let Some(norm_path) = norm {
        let record = NormalizationRecord::load(norm_path)?;
        dataset = dataio::apply_normalizer(&record, &dataset)?;
    }
    if let Some(tag) = group {
        dataset = dataio::select_subset(&dataset, |t| t == tag)
            .with_context(|| format!("selecting group {tag:?}"))?;
    }
    let labels = dataset
        .labels()
        .ok_or_else(|| anyhow!("{}: rank needs a labeled dataset", data.display()))?
        .to_vec();
    let activations = model.encode(dataset.values())?;
    let report = saliency::rank_nodes(&activations, &labels, cli.bins)?;

    fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let mut guard = OutputGuard::new();
    let report_path = cli.out_dir.join("saliency.csv");
    guard.track(&report_path);
    report.write_csv(&report_path)?;
    let mut outputs = vec![report_path];

    for &node in report.ranking.iter().take(top) {
        let values = activations.node(node).to_vec();
        let hist = saliency::build_histogram(&values, &labels, cli.bins)?;
        let csv_path = cli.out_dir.join(format!("node{node}_hist.csv"));
        guard.track(&csv_path);
        hist.write_csv(&csv_path)?;
        outputs.push(csv_path);
        if plots {
            let title = format!("node {node}  SNS={:.4}", report.nodes[node].sns);
            let svg_path = cli.out_dir.join(format!("node{node}_hist.svg"));
            guard.track(&svg_path);
            fs::write(&svg_path, plot::histogram_svg(&hist, &title))
                .with_context(|| format!("writing {}", svg_path.display()))?;
            outputs.push(svg_path);
        }
    }

    if let Some(node) = weights {
        let profile =
            saliency::node_weight_profile(&model, dataset.feature_ids(), node, weights_top)?;
        let csv_path = cli.out_dir.join(format!("node{node}_weights.csv"));
        guard.track(&csv_path);
        profile.write_csv(&csv_path)?;
        outputs.push(csv_path);
        if plots {
            let svg_path = cli.out_dir.join(format!("node{node}_weights.svg"));
            guard.track(&svg_path);
            let title = format!("node {node} weight distribution");
            fs::write(&svg_path, plot::weight_histogram_svg(&profile, &title))
                .with_context(|| format!("writing {}", svg_path.display()))?;
            outputs.push(svg_path);
        }
    }

    let run_path = cli.out_dir.join("run.json");
    guard.track(&run_path);
    let output_refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    write_run_json(
        &run_path,
        "rank",
        cli.seed,
        cli.bins,
        json!({
            "model": model_path.display().to_string(),
            "data": data.display().to_string(),
            "norm": norm.map(|p| p.display().to_string()),
            "group": group,
            "top": top,
            "plots": plots,
            "weights": weights,
            "weights_top": weights_top,
            "samples": dataset.n_samples(),
        }),
        &output_refs,
    )?;
    guard.commit();
    let best = &report.nodes[report.ranking[0]];
    println!(
        "ranked {} nodes on {} samples: best node {} with SNS = {:.4} (good classifier: {})",
        report.nodes.len(),
        dataset.n_samples(),
        best.node,
        best.sns,
        best.good_classifier
    );
    Ok(())
}

pub fn pca(
    cli: &Cli,
    fit: &Path,
    project: &Path,
    components: usize,
    tol: f64,
    max_iter: usize,
) -> Result<()> {
    let fit_dataset = load_dataset(fit)?;
    let project_dataset = load_dataset(project)?;
    let model = pca_baseline::fit_pca(fit_dataset.values(), components, tol, max_iter)?;
    let scores = pca_baseline::project(&model, project_dataset.values())?;

    fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let mut guard = OutputGuard::new();
    let scores_path = cli.out_dir.join("scores.csv");
    guard.track(&scores_path);
    pca_baseline::write_scores_csv(scores.view(), &project_dataset, &scores_path)?;
    let mut outputs = vec![scores_path];

    if components >= 2 {
        let points: Vec<(f64, f64)> = scores.rows().into_iter().map(|r| (r[0], r[1])).collect();
        let tags: Vec<String> = match (project_dataset.group_tags(), project_dataset.labels()) {
            (Some(tags), _) => tags.to_vec(),
            (None, Some(labels)) => labels.iter().map(|y| format!("class {y}")).collect(),
            (None, None) => vec!["samples".to_string(); points.len()],
        };
        let svg_path = cli.out_dir.join("scatter.svg");
        guard.track(&svg_path);
        fs::write(
            &svg_path,
            plot::scatter_svg(&points, &tags, "first two principal components"),
        )
        .with_context(|| format!("writing {}", svg_path.display()))?;
        outputs.push(svg_path);
    }

    let run_path = cli.out_dir.join("run.json");
    guard.track(&run_path);
    let output_refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    write_run_json(
        &run_path,
        "pca",
        cli.seed,
        cli.bins,
        json!({
            "fit": fit.display().to_string(),
            "project": project.display().to_string(),
            "components": components,
            "tol": tol,
            "max_iter": max_iter,
            "eigenvalues": model.eigenvalues(),
        }),
        &output_refs,
    )?;
    guard.commit();
    println!(
        "projected {} samples onto {} components (eigenvalues: {:?})",
        scores.nrows(),
        components,
        model.eigenvalues()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn bench(
    cli: &Cli,
    data: &Path,
    workers: &str,
    hidden: usize,
    batch: usize,
    lr: f64,
    epochs: usize,
    val_fraction: f64,
) -> Result<()> {
    let worker_counts: Vec<usize> = parse_list(workers, "--workers")?;
    let raw = load_dataset(data)?;
    let (_, normalized) = dataio::fit_normalizer(&raw)?;
    let cfg = TrainConfig {
        hidden_width: hidden,
        learning_rate: lr,
        batch_size: batch,
        epochs,
        seed: cli.seed,
        workers: 1,
        validation_fraction: val_fraction,
        shuffle: true,
    };
    let rows = trainer::benchmark_scaling(&normalized, &cfg, &worker_counts)?;

    fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let mut guard = OutputGuard::new();
    let bench_path = cli.out_dir.join("benchmark.csv");
    guard.track(&bench_path);
    trainer::write_benchmark_csv(&rows, &bench_path)?;
    let run_path = cli.out_dir.join("run.json");
    guard.track(&run_path);
    write_run_json(
        &run_path,
        "bench",
        cli.seed,
        cli.bins,
        json!({
            "data": data.display().to_string(),
            "workers": worker_counts,
            "hidden": hidden,
            "batch": batch,
            "lr": lr,
            "epochs": epochs,
            "val_fraction": val_fraction,
        }),
        &[&bench_path],
    )?;
    guard.commit();
    for row in &rows {
        println!(
            "workers {:>3}: {:.4}s/epoch, speedup {:.2}",
            row.workers, row.mean_epoch_seconds, row.speedup
        );
    }
    Ok(())
}
