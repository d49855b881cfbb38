//! Acceptance suite. Each criterion (A1..A8) runs at its stated tolerance
//! and prints one PASS/FAIL line; run with `cargo test --test acceptance`.
//!
//! The brute-force oracles in this file intentionally re-derive every
//! quantity from first principles with plain loops, independent of the
//! library's code paths.

#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

use std::time::Instant;

use ans_core::autoencoder::{mse_loss, AutoencoderModel};
use ans_core::dataio::generate_synthetic;
use ans_core::saliency::{build_histogram, node_weight_profile, rank_nodes, ActivationHistogram};
use ans_core::trainer::{benchmark_scaling, init_weights, train, write_benchmark_csv, TrainConfig};
use ans_core::{pca, Activations};

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{criterion} {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

// ---------------------------------------------------------------------------
// Brute-force saliency oracle (independent of the library implementation).
// ---------------------------------------------------------------------------

struct OracleSaliency {
    ned: f64,
    ned0: f64,
    ned1: f64,
    wce0: f64,
    wce1: f64,
    sns: f64,
}

/// Bin counts by sorting the values and sweeping the bin edges.
fn oracle_bin_counts(values: &[f64], labels: &[u8], k: usize) -> (Vec<u64>, Vec<u64>) {
    let mut sorted: Vec<(f64, u8)> = values.iter().copied().zip(labels.iter().copied()).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut c0 = vec![0u64; k];
    let mut c1 = vec![0u64; k];
    let mut idx = 0;
    for r in 0..k {
        let upper = (r + 1) as f64 / k as f64;
        while idx < sorted.len() && (sorted[idx].0 < upper || r == k - 1) {
            if sorted[idx].1 == 0 {
                c0[r] += 1;
            } else {
                c1[r] += 1;
            }
            idx += 1;
        }
    }
    (c0, c1)
}

/// Normalized entropy difference via the explicit `(log2 khat - E) / log2
/// khat` form, the other algebraic route to the same quantity.
fn oracle_ned(counts: &[u64], total: u64, khat: usize) -> f64 {
    if khat <= 1 {
        return 1.0;
    }
    let mut entropy = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            entropy -= p * p.log2();
        }
    }
    let log2_khat = (khat as f64).log2();
    ((log2_khat - entropy) / log2_khat).clamp(0.0, 1.0)
}

fn oracle_reference(k: usize) -> Vec<f64> {
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

fn oracle_saliency(values: &[f64], labels: &[u8], k: usize) -> OracleSaliency {
    let (c0, c1) = oracle_bin_counts(values, labels, k);
    let ct: Vec<u64> = c0.iter().zip(&c1).map(|(a, b)| a + b).collect();
    let n: u64 = ct.iter().sum();
    let n0: u64 = c0.iter().sum();
    let n1: u64 = c1.iter().sum();
    let khat = ct.iter().filter(|&&c| c > 0).count();
    let ned = oracle_ned(&ct, n, khat);
    let ned0 = oracle_ned(&c0, n0, khat);
    let ned1 = oracle_ned(&c1, n1, khat);
    let reference = oracle_reference(k);
    let eps = 1e-12;
    let clamp = |q: f64| q.clamp(eps, 1.0 - eps);
    let (mut wce0, mut wce1) = (0.0, 0.0);
    for r in 0..k {
        if ct[r] == 0 {
            continue;
        }
        let p_bin = ct[r] as f64 / n as f64;
        let q = clamp(c1[r] as f64 / ct[r] as f64);
        let q_complement = clamp(c0[r] as f64 / ct[r] as f64);
        let p = reference[r];
        wce1 += p_bin * (-p * q.log2() - (1.0 - p) * q_complement.log2());
        wce0 += p_bin * (-(1.0 - p) * q.log2() - p * q_complement.log2());
    }
    OracleSaliency {
        ned,
        ned0,
        ned1,
        wce0,
        wce1,
        sns: wce0.min(wce1),
    }
}

/// Random activation/label pairs guaranteed to contain both classes.
fn random_case(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<u8>, usize) {
    let k = [2usize, 4, 10, 16][rng.random_range(0..4)];
    let n = rng.random_range(2..=200);
    let mut values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    if rng.random::<f64>() < 0.05 {
        values[0] = 1.0;
    }
    // Cluster a fraction of cases so occupied-bin counts vary.
    if rng.random::<f64>() < 0.3 {
        let center: f64 = rng.random();
        for v in values.iter_mut() {
            *v = (center + 0.05 * (*v - 0.5)).clamp(0.0, 1.0);
        }
    }
    let mut labels: Vec<u8> = (0..n).map(|_| u8::from(rng.random::<bool>())).collect();
    labels[0] = 0;
    labels[n - 1] = 1;
    (values, labels, k)
}

#[test]
fn a1_saliency_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let mut max_diff = 0.0_f64;
    let cases = 10_000;
    for _ in 0..cases {
        let (values, labels, k) = random_case(&mut rng);
        let hist = build_histogram(&values, &labels, k).unwrap();
        let got = hist.node_saliency(0).unwrap();
        let want = oracle_saliency(&values, &labels, k);
        for (name, a, b) in [
            ("ned", got.ned, want.ned),
            ("ned0", got.ned0, want.ned0),
            ("ned1", got.ned1, want.ned1),
            ("wce0", got.wce0, want.wce0),
            ("wce1", got.wce1, want.wce1),
            ("sns", got.sns, want.sns),
        ] {
            let diff = (a - b).abs();
            max_diff = max_diff.max(diff);
            assert!(
                diff <= 1e-12,
                "{name} differs from oracle by {diff} (impl {a}, oracle {b}, k {k})"
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        "A1",
        elapsed < 30.0,
        &format!("{cases} histograms, max |impl - oracle| = {max_diff:.2e}, {elapsed:.2}s"),
    );
}

/// Histogram built from per-bin (class0, class1) counts.
fn hist_from_counts(counts: &[(u64, u64)]) -> ActivationHistogram {
    let k = counts.len();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (r, &(c0, c1)) in counts.iter().enumerate() {
        let mid = (r as f64 + 0.5) / k as f64;
        for _ in 0..c0 {
            values.push(mid);
            labels.push(0);
        }
        for _ in 0..c1 {
            values.push(mid);
            labels.push(1);
        }
    }
    build_histogram(&values, &labels, k).unwrap()
}

#[test]
fn a2_hand_computed_anchors() {
    // Perfect split: class 0 fills bin 0, class 1 fills bin 9.
    let mut counts = vec![(0u64, 0u64); 10];
    counts[0] = (50, 0);
    counts[9] = (0, 50);
    let perfect = hist_from_counts(&counts).node_saliency(0).unwrap();

    // Mixed: class 1 has 50 in bin 9; class 0 has 25 in bin 0, 25 in bin 9.
    let mut counts = vec![(0u64, 0u64); 10];
    counts[0] = (25, 0);
    counts[9] = (25, 50);
    let mixed = hist_from_counts(&counts).node_saliency(0).unwrap();
    // 0.75 * -log2(2/3), evaluated at 40 digits.
    let mixed_expected = 0.4387218755408671360903042079608623815699;

    // Two occupied bins holding 3/4 and 1/4 of the mass.
    let ned = hist_from_counts(&[(3, 0), (1, 0)]).ned();
    let ned_expected = 0.1887218755408671360903042079608623815699;

    let pass = perfect.sns.abs() < 1e-11
        && (mixed.sns - mixed_expected).abs() < 1e-6
        && (ned - ned_expected).abs() < 1e-6;
    report(
        "A2",
        pass,
        &format!(
            "perfect SNS = {:.2e}, mixed SNS = {:.6} (want {:.6}), NED = {:.6} (want {:.6})",
            perfect.sns, mixed.sns, mixed_expected, ned, ned_expected
        ),
    );
}

struct PipelineOutcome {
    sns: f64,
    good: bool,
    informative_in_top10: bool,
}

/// synth -> train -> rank with the default configuration.
fn run_pipeline(seed: u64) -> PipelineOutcome {
    let ds = generate_synthetic(200, 50, 5, 4.0, seed).unwrap();
    let cfg = TrainConfig {
        seed,
        ..TrainConfig::default()
    };
    let (model, _) = train(&ds, &cfg).unwrap();
    let activations = model.encode(ds.values()).unwrap();
    let labels = ds.labels().unwrap();
    let report = rank_nodes(&activations, labels, 10).unwrap();
    let best = &report.nodes[report.ranking[0]];
    let profile = node_weight_profile(&model, ds.feature_ids(), best.node, 10).unwrap();
    PipelineOutcome {
        sns: best.sns,
        good: best.good_classifier,
        informative_in_top10: profile.top_features.iter().any(|f| f.index < 5),
    }
}

#[test]
fn a3_end_to_end_synthetic_pipeline() {
    let started = Instant::now();
    let seed1 = run_pipeline(1);
    let elapsed = started.elapsed().as_secs_f64();

    let mut hits = usize::from(seed1.informative_in_top10);
    for seed in 2..=5 {
        hits += usize::from(run_pipeline(seed).informative_in_top10);
    }
    let pass = elapsed < 120.0 && seed1.sns < 0.05 && seed1.good && hits >= 4;
    report(
        "A3",
        pass,
        &format!(
            "seed 1: SNS = {:.4} (< 0.05), good_classifier = {}, {elapsed:.1}s; \
             informative feature in top 10 weights for {hits}/5 seeds",
            seed1.sns, seed1.good
        ),
    );
}

#[test]
fn a4_gradient_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    let h = 1e-5;
    let mut max_rel = 0.0_f64;
    for _ in 0..20 {
        let m = rng.random_range(1..=4);
        let d = rng.random_range(1..=6);
        let rows = rng.random_range(1..=8);
        let w = Array2::from_shape_fn((m, d), |_| rng.random_range(-1.0..1.0));
        let b = Array1::from_shape_fn(m, |_| rng.random_range(-0.5..0.5));
        let b_dec = Array1::from_shape_fn(d, |_| rng.random_range(-0.5..0.5));
        let model = AutoencoderModel::new(w.clone(), b.clone(), b_dec.clone()).unwrap();
        let batch = Array2::from_shape_fn((rows, d), |_| rng.random::<f64>());
        let grads = model.gradients(batch.view()).unwrap();

        let loss_of = |w: &Array2<f64>, b: &Array1<f64>, b_dec: &Array1<f64>| {
            let m = AutoencoderModel::new(w.clone(), b.clone(), b_dec.clone()).unwrap();
            let recon = m.decode(&m.encode(batch.view()).unwrap()).unwrap();
            mse_loss(batch.view(), recon.view()).unwrap()
        };
        let mut probe = |plus: f64, minus: f64, analytic: f64| {
            let fd = (plus - minus) / (2.0 * h);
            let rel = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-10);
            max_rel = max_rel.max(rel);
        };
        for i in 0..m {
            for j in 0..d {
                let mut wp = w.clone();
                wp[(i, j)] += h;
                let mut wm = w.clone();
                wm[(i, j)] -= h;
                probe(
                    loss_of(&wp, &b, &b_dec),
                    loss_of(&wm, &b, &b_dec),
                    grads.w[(i, j)],
                );
            }
        }
        for i in 0..m {
            let mut bp = b.clone();
            bp[i] += h;
            let mut bm = b.clone();
            bm[i] -= h;
            probe(
                loss_of(&w, &bp, &b_dec),
                loss_of(&w, &bm, &b_dec),
                grads.b[i],
            );
        }
        for j in 0..d {
            let mut bp = b_dec.clone();
            bp[j] += h;
            let mut bm = b_dec.clone();
            bm[j] -= h;
            probe(loss_of(&w, &b, &bp), loss_of(&w, &b, &bm), grads.b_dec[j]);
        }
    }
    report(
        "A4",
        max_rel < 1e-6,
        &format!("20 random models, max relative error vs central differences = {max_rel:.2e}"),
    );
}

fn model_params(model: &AutoencoderModel) -> Vec<f64> {
    model
        .weights()
        .iter()
        .chain(model.encoder_bias().iter())
        .chain(model.decoder_bias().iter())
        .copied()
        .collect()
}

#[test]
fn a5_parallel_determinism() {
    let ds = generate_synthetic(200, 50, 5, 4.0, 1).unwrap();
    let base = TrainConfig::default();
    let (serial, _) = train(&ds, &base).unwrap();
    let serial_params = model_params(&serial);
    let mut max_diff = 0.0_f64;
    for workers in [2, 4, 8] {
        let cfg = TrainConfig {
            workers,
            ..base.clone()
        };
        let (parallel, _) = train(&ds, &cfg).unwrap();
        for (a, b) in serial_params.iter().zip(model_params(&parallel)) {
            max_diff = max_diff.max((a - b).abs());
        }
    }
    // Bit-identical repetition at a fixed worker count.
    let cfg4 = TrainConfig { workers: 4, ..base };
    let (first, _) = train(&ds, &cfg4).unwrap();
    let (second, _) = train(&ds, &cfg4).unwrap();
    let repeat_identical = first == second;
    report(
        "A5",
        max_diff < 1e-12 && repeat_identical,
        &format!(
            "max |param(workers) - param(serial)| = {max_diff:.2e} over workers in {{2,4,8}}; \
             repeated 4-worker runs bit-identical = {repeat_identical}"
        ),
    );
}

#[test]
fn a6_scaling_trend() {
    let ds = generate_synthetic(5000, 500, 10, 3.0, 6).unwrap();
    let cfg = TrainConfig {
        hidden_width: 64,
        epochs: 2,
        batch_size: 200,
        learning_rate: 0.5,
        seed: 6,
        ..TrainConfig::default()
    };
    let rows = benchmark_scaling(&ds, &cfg, &[1, 2, 4]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    write_benchmark_csv(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let csv_ok = lines[0] == "workers,mean_epoch_seconds,speedup"
        && lines.len() == 4
        && lines[1..].iter().all(|l| l.split(',').count() == 3);
    let speedup1 = rows[0].speedup;
    let speedup4 = rows[2].speedup;
    let cores = std::thread::available_parallelism()
        .map(|c| c.get())
        .unwrap_or(1);
    let soft_applicable = cores >= 4;
    let soft_met = speedup4 >= 1.5;
    // Hard criteria: well-formed CSV and speedup(1) = 1.0. The >= 1.5x
    // speedup at 4 workers applies on hosts with at least 4 cores and is
    // recorded either way.
    report(
        "A6",
        csv_ok && speedup1 == 1.0,
        &format!(
            "speedup(1) = {speedup1}, speedup(2) = {:.2}, speedup(4) = {speedup4:.2} on {cores} \
             cores; soft target >= 1.5 at 4 workers: {}",
            rows[1].speedup,
            if !soft_applicable {
                format!("not applicable ({cores} < 4 cores), recorded {speedup4:.2}")
            } else if soft_met {
                format!("met ({speedup4:.2})")
            } else {
                format!("NOT met ({speedup4:.2})")
            }
        ),
    );
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver oracle for A7 (test-only, dense symmetric).
// ---------------------------------------------------------------------------

fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for row in v.iter_mut() {
                    let vip = row[p];
                    let viq = row[q];
                    row[p] = c * vip - s * viq;
                    row[q] = s * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y][y].total_cmp(&a[x][x]));
    let eigenvalues = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| v.iter().map(|row| row[i]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

fn sample_covariance(x: &Array2<f64>) -> Vec<Vec<f64>> {
    let (n, d) = x.dim();
    let mean: Vec<f64> = (0..d).map(|j| x.column(j).sum() / n as f64).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for (p, cov_row) in cov.iter_mut().enumerate() {
        for (q, entry) in cov_row.iter_mut().enumerate() {
            let mut sum = 0.0;
            for i in 0..n {
                sum += (x[(i, p)] - mean[p]) * (x[(i, q)] - mean[q]);
            }
            *entry = sum / (n - 1) as f64;
        }
    }
    cov
}

#[test]
fn a7_pca_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    let mut max_ortho = 0.0_f64;
    let mut max_var_diff = 0.0_f64;
    let mut max_vs_jacobi = 0.0_f64;
    for case in 0..6 {
        let n = rng.random_range(4..=6);
        let d = rng.random_range(3..=6);
        let x = Array2::from_shape_fn((n, d), |(_, j)| rng.random::<f64>() * (1.0 + j as f64));
        let (oracle_values, oracle_vectors) = jacobi_eigen(sample_covariance(&x));
        // Keep components whose eigenvalue is clearly separated from its
        // neighbors; eigenvectors of near-degenerate pairs are not
        // individually well-defined, so comparing them is meaningless.
        let c = (n - 1).min(d).min(2);
        let mut usable = c;
        for i in 0..c {
            let below = if i + 1 < oracle_values.len() {
                oracle_values[i] - oracle_values[i + 1]
            } else {
                f64::INFINITY
            };
            if below < 1e-3 * oracle_values[0].max(1e-12) {
                usable = i;
                break;
            }
        }
        let model = pca::fit_pca(x.view(), c, 1e-13, 1_000_000).unwrap();
        let comps = model.components();
        for a in 0..c {
            for b in 0..c {
                let dot = comps.row(a).dot(&comps.row(b));
                let expected = f64::from(a == b);
                max_ortho = max_ortho.max((dot - expected).abs());
            }
        }
        let scores = pca::project(&model, x.view()).unwrap();
        for comp in 0..c {
            let col = scores.column(comp);
            let mean = col.sum() / col.len() as f64;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (col.len() - 1) as f64;
            max_var_diff = max_var_diff.max((var - model.eigenvalues()[comp]).abs());
        }
        for comp in 0..usable {
            let got = comps.row(comp);
            let want = &oracle_vectors[comp];
            let mut diff_plus = 0.0_f64;
            let mut diff_minus = 0.0_f64;
            for (g, w) in got.iter().zip(want) {
                diff_plus = diff_plus.max((g - w).abs());
                diff_minus = diff_minus.max((g + w).abs());
            }
            max_vs_jacobi = max_vs_jacobi.max(diff_plus.min(diff_minus));
            max_vs_jacobi =
                max_vs_jacobi.max((model.eigenvalues()[comp] - oracle_values[comp]).abs());
        }
        let _ = case;
    }
    let pass = max_ortho < 1e-10 && max_var_diff < 1e-8 && max_vs_jacobi < 1e-8;
    report(
        "A7",
        pass,
        &format!(
            "orthonormality residual = {max_ortho:.2e}, |score var - eigenvalue| = \
             {max_var_diff:.2e}, vs Jacobi oracle = {max_vs_jacobi:.2e}"
        ),
    );
}

#[test]
fn a8_invariance_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA8);

    // SNS label-swap invariance and NED range over 10^4 random histograms.
    let mut range_ok = true;
    let mut swap_ok = true;
    for _ in 0..10_000 {
        let (values, labels, k) = random_case(&mut rng);
        let hist = build_histogram(&values, &labels, k).unwrap();
        let s = hist.node_saliency(0).unwrap();
        for v in [s.ned, s.ned0, s.ned1] {
            range_ok &= (0.0..=1.0).contains(&v);
        }
        let swapped: Vec<u8> = labels.iter().map(|&y| 1 - y).collect();
        let t = build_histogram(&values, &swapped, k)
            .unwrap()
            .node_saliency(0)
            .unwrap();
        swap_ok &= s.sns == t.sns;
    }

    // Sample-permutation invariance (exact).
    let (values, labels, k) = random_case(&mut rng);
    let base = build_histogram(&values, &labels, k)
        .unwrap()
        .node_saliency(0)
        .unwrap();
    let mut perm: Vec<usize> = (0..values.len()).collect();
    use rand::seq::SliceRandom;
    perm.shuffle(&mut rng);
    let pv: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
    let pl: Vec<u8> = perm.iter().map(|&i| labels[i]).collect();
    let permuted = build_histogram(&pv, &pl, k)
        .unwrap()
        .node_saliency(0)
        .unwrap();
    let perm_ok = base.sns == permuted.sns
        && base.ned == permuted.ned
        && base.wce0 == permuted.wce0
        && base.wce1 == permuted.wce1;

    // Zero learning rate leaves the initial model bit-exact.
    let ds = generate_synthetic(30, 8, 2, 2.0, 3).unwrap();
    let cfg = TrainConfig {
        hidden_width: 5,
        learning_rate: 0.0,
        batch_size: 12,
        epochs: 5,
        seed: 21,
        ..TrainConfig::default()
    };
    let (trained, _) = train(&ds, &cfg).unwrap();
    let eta_zero_ok = trained == init_weights(5, 8, 21);

    // Model persistence round-trip is bit-exact.
    let model = init_weights(9, 13, 77);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.ansm");
    model.save(&path).unwrap();
    let round_trip_ok = AutoencoderModel::load(&path).unwrap() == model;

    // Encode-side check that permuting samples permutes activations only.
    let acts = model
        .encode(Array2::from_shape_fn((4, 13), |(i, j)| (i + j) as f64 / 20.0).view())
        .unwrap();
    let rank_input_ok = acts.n_nodes() == 9 && Activations::new(acts.matrix().to_owned()).is_ok();

    let pass = range_ok && swap_ok && perm_ok && eta_zero_ok && round_trip_ok && rank_input_ok;
    report(
        "A8",
        pass,
        &format!(
            "NED range ok = {range_ok}, label-swap exact = {swap_ok}, permutation exact = \
             {perm_ok}, eta=0 identity = {eta_zero_ok}, save/load bit-exact = {round_trip_ok}"
        ),
    );
}
