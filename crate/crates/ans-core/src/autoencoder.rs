//! Single-hidden-layer tied-weight sigmoid autoencoder.
//!
//! The encoder maps an n-by-d input matrix `X` to hidden activations
//! `A = sigma(W X^T + b)` (one column per sample); the decoder reuses the
//! transposed weights, `X' = sigma(W^T A + b_dec)^T`. Training minimizes the
//! mean squared reconstruction error over all entries. All arithmetic is
//! 64-bit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use thiserror::Error;

const MODEL_MAGIC: &[u8; 4] = b"ANSM";
const MODEL_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("expected {expected} {what}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("weight matrix is {w:?} but biases have lengths {b} and {b_dec}")]
    InconsistentShapes {
        w: (usize, usize),
        b: usize,
        b_dec: usize,
    },
    #[error("model must have at least one hidden node and one input feature")]
    EmptyModel,
    #[error("model parameters must all be finite")]
    NonFinite,
    #[error("activation entries must lie in [0,1]")]
    ActivationOutOfRange,
    #[error("matrix shapes differ: {a:?} vs {b:?}")]
    ShapeMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error("batch has no rows")]
    EmptyBatch,
    #[error("correlation needs at least 2 entries")]
    TooFewEntries,
    #[error("zero variance on the {side} side of the correlation")]
    ZeroVariance { side: &'static str },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not a model file (bad magic bytes)")]
    BadMagic { path: PathBuf },
    #[error("{path}: unsupported model format version {found} (expected {MODEL_VERSION})")]
    UnsupportedVersion { path: PathBuf, found: u32 },
    #[error("{path}: truncated model file: expected {expected} bytes, found {found}")]
    Truncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("{path}: header dimensions inconsistent with payload length")]
    HeaderPayloadMismatch { path: PathBuf },
    #[error("{path}: payload checksum mismatch")]
    ChecksumMismatch { path: PathBuf },
}

/// Numerically stable sigmoid. Evaluated through separate expressions for
/// non-negative and negative arguments so large |z| neither overflows nor
/// produces NaN.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Hidden activations, one row per node and one column per sample.
#[derive(Debug, Clone)]
pub struct Activations {
    values: Array2<f64>,
}

impl Activations {
    /// Wraps an m-by-n activation matrix, checking every entry lies in
    /// `[0,1]`. Sigmoid outputs land strictly inside the interval for
    /// moderate pre-activations; the closed check admits hand-built
    /// matrices that touch the endpoints.
    pub fn new(values: Array2<f64>) -> Result<Self, ModelError> {
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(ModelError::ActivationOutOfRange);
        }
        Ok(Self { values })
    }

    pub fn n_nodes(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.values.ncols()
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    /// Activation vector of one hidden node across all samples.
    pub fn node(&self, s: usize) -> ArrayView1<'_, f64> {
        self.values.row(s)
    }
}

/// Gradients of the mean squared reconstruction error with respect to the
/// model parameters, together with the loss at the evaluation point.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
    pub b_dec: Array1<f64>,
    pub loss: f64,
}

/// Unscaled per-sample gradient sums. Summing these over disjoint row shards
/// and scaling once by `1 / (rows * d)` reproduces the full-batch mean
/// gradient, which is what makes sharded evaluation deterministic.
#[derive(Debug, Clone)]
pub(crate) struct GradientSums {
    pub(crate) w: Array2<f64>,
    pub(crate) b: Array1<f64>,
    pub(crate) b_dec: Array1<f64>,
    pub(crate) sse: f64,
}

impl GradientSums {
    pub(crate) fn zeros(m: usize, d: usize) -> Self {
        Self {
            w: Array2::zeros((m, d)),
            b: Array1::zeros(m),
            b_dec: Array1::zeros(d),
            sse: 0.0,
        }
    }

    pub(crate) fn accumulate(&mut self, other: &GradientSums) {
        self.w += &other.w;
        self.b += &other.b;
        self.b_dec += &other.b_dec;
        self.sse += other.sse;
    }

    pub(crate) fn into_gradients(self, batch_rows: usize, d: usize) -> Gradients {
        let scale = 1.0 / (batch_rows as f64 * d as f64);
        Gradients {
            w: self.w * scale,
            b: self.b * scale,
            b_dec: self.b_dec * scale,
            loss: self.sse * scale,
        }
    }
}

/// Encoder weights `W` (m-by-d), encoder bias `b` (m), decoder bias `b_dec`
/// (d). The decoder weight matrix is `W` transposed, so one matrix
/// parameterizes both maps. Immutable once constructed; encode, decode, and
/// gradient evaluation are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoencoderModel {
    w: Array2<f64>,
    b: Array1<f64>,
    b_dec: Array1<f64>,
}

impl AutoencoderModel {
    pub fn new(w: Array2<f64>, b: Array1<f64>, b_dec: Array1<f64>) -> Result<Self, ModelError> {
        let (m, d) = w.dim();
        if m == 0 || d == 0 {
            return Err(ModelError::EmptyModel);
        }
        if b.len() != m || b_dec.len() != d {
            return Err(ModelError::InconsistentShapes {
                w: (m, d),
                b: b.len(),
                b_dec: b_dec.len(),
            });
        }
        if w.iter()
            .chain(b.iter())
            .chain(b_dec.iter())
            .any(|v| !v.is_finite())
        {
            return Err(ModelError::NonFinite);
        }
        Ok(Self { w, b, b_dec })
    }

    pub fn hidden_width(&self) -> usize {
        self.w.nrows()
    }

    pub fn input_width(&self) -> usize {
        self.w.ncols()
    }

    pub fn weights(&self) -> ArrayView2<'_, f64> {
        self.w.view()
    }

    pub fn encoder_bias(&self) -> ArrayView1<'_, f64> {
        self.b.view()
    }

    pub fn decoder_bias(&self) -> ArrayView1<'_, f64> {
        self.b_dec.view()
    }

    pub(crate) fn update(&mut self, learning_rate: f64, grads: &Gradients) {
        self.w.scaled_add(-learning_rate, &grads.w);
        self.b.scaled_add(-learning_rate, &grads.b);
        self.b_dec.scaled_add(-learning_rate, &grads.b_dec);
    }

    /// `A = sigma(W X^T + b)`, shape m-by-n.
    pub fn encode(&self, x: ArrayView2<'_, f64>) -> Result<Activations, ModelError> {
        if x.ncols() != self.input_width() {
            return Err(ModelError::DimensionMismatch {
                what: "input columns",
                expected: self.input_width(),
                found: x.ncols(),
            });
        }
        let mut z = self.w.dot(&x.t());
        z += &self.b.view().insert_axis(Axis(1));
        z.mapv_inplace(sigmoid);
        Ok(Activations { values: z })
    }

    /// `X' = sigma(W^T A + b_dec)^T`, shape n-by-d.
    pub fn decode(&self, activations: &Activations) -> Result<Array2<f64>, ModelError> {
        if activations.n_nodes() != self.hidden_width() {
            return Err(ModelError::DimensionMismatch {
                what: "activation rows",
                expected: self.hidden_width(),
                found: activations.n_nodes(),
            });
        }
        let mut z = self.w.t().dot(&activations.values);
        z += &self.b_dec.view().insert_axis(Axis(1));
        z.mapv_inplace(sigmoid);
        Ok(z.reversed_axes())
    }

    /// Analytic gradient of `mse_loss(batch, decode(encode(batch)))` with
    /// respect to all parameters. The tied weight matrix receives both the
    /// encoder-side and decoder-side contributions.
    pub fn gradients(&self, batch: ArrayView2<'_, f64>) -> Result<Gradients, ModelError> {
        let rows = batch.nrows();
        let sums = self.gradient_sums(batch)?;
        Ok(sums.into_gradients(rows, self.input_width()))
    }

    /// Gradient sums without the `1 / (rows * d)` normalization; see
    /// [`GradientSums`].
    pub(crate) fn gradient_sums(
        &self,
        batch: ArrayView2<'_, f64>,
    ) -> Result<GradientSums, ModelError> {
        if batch.nrows() == 0 {
            return Err(ModelError::EmptyBatch);
        }
        if batch.ncols() != self.input_width() {
            return Err(ModelError::DimensionMismatch {
                what: "input columns",
                expected: self.input_width(),
                found: batch.ncols(),
            });
        }
        let xt = batch.t();

        // Forward pass, samples as columns.
        let mut a = self.w.dot(&xt);
        a += &self.b.view().insert_axis(Axis(1));
        a.mapv_inplace(sigmoid);
        let mut y = self.w.t().dot(&a);
        y += &self.b_dec.view().insert_axis(Axis(1));
        y.mapv_inplace(sigmoid);

        // Backward pass in unscaled form: delta2 = 2 (Y - X^T) o Y o (1 - Y).
        let mut sse = 0.0;
        let mut delta2 = y;
        ndarray::Zip::from(&mut delta2).and(&xt).for_each(|y, &x| {
            let diff = *y - x;
            sse += diff * diff;
            *y = 2.0 * diff * *y * (1.0 - *y);
        });
        let b_dec_sum = delta2.sum_axis(Axis(1));
        // Decoder contribution to W: (delta2 A^T)^T = A delta2^T.
        let mut w_sum = a.dot(&delta2.t());
        // delta1 = (W delta2) o A o (1 - A).
        let mut delta1 = self.w.dot(&delta2);
        ndarray::Zip::from(&mut delta1).and(&a).for_each(|g, &a| {
            *g *= a * (1.0 - a);
        });
        let b_sum = delta1.sum_axis(Axis(1));
        w_sum += &delta1.dot(&batch);
        Ok(GradientSums {
            w: w_sum,
            b: b_sum,
            b_dec: b_dec_sum,
            sse,
        })
    }

    /// Serializes to the binary model format: magic `ANSM`, format version,
    /// m and d as little-endian u64, then the W / b / b_dec payload as f64
    /// little-endian with a trailing CRC32 of the payload bytes.
    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let io_err = |source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        };
        let (m, d) = self.w.dim();
        let mut payload = Vec::with_capacity((m * d + m + d) * 8);
        for &v in self.w.iter().chain(self.b.iter()).chain(self.b_dec.iter()) {
            payload.extend_from_slice(&v.to_le_bytes());
        }
        let crc = crc32fast::hash(&payload);
        let mut file = fs::File::create(path).map_err(io_err)?;
        file.write_all(MODEL_MAGIC).map_err(io_err)?;
        file.write_all(&MODEL_VERSION.to_le_bytes())
            .map_err(io_err)?;
        file.write_all(&(m as u64).to_le_bytes()).map_err(io_err)?;
        file.write_all(&(d as u64).to_le_bytes()).map_err(io_err)?;
        file.write_all(&payload).map_err(io_err)?;
        file.write_all(&crc.to_le_bytes()).map_err(io_err)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let bytes = fs::read(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let this_path = || path.to_path_buf();
        if bytes.len() < HEADER_LEN {
            return Err(ModelError::Truncated {
                path: this_path(),
                expected: HEADER_LEN,
                found: bytes.len(),
            });
        }
        if &bytes[0..4] != MODEL_MAGIC {
            return Err(ModelError::BadMagic { path: this_path() });
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != MODEL_VERSION {
            return Err(ModelError::UnsupportedVersion {
                path: this_path(),
                found: version,
            });
        }
        let m = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let d = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let n_params = (m as u128) * (d as u128) + (m as u128) + (d as u128);
        let expected = HEADER_LEN as u128 + n_params * 8 + 4;
        if (bytes.len() as u128) < expected {
            return Err(ModelError::Truncated {
                path: this_path(),
                expected: expected.try_into().unwrap_or(usize::MAX),
                found: bytes.len(),
            });
        }
        if bytes.len() as u128 != expected {
            return Err(ModelError::HeaderPayloadMismatch { path: this_path() });
        }
        let (m, d) = (m as usize, d as usize);
        let payload = &bytes[HEADER_LEN..bytes.len() - 4];
        let stored_crc = u32::from_le_bytes(bytes[bytes.len() - 4..].try_into().unwrap());
        if crc32fast::hash(payload) != stored_crc {
            return Err(ModelError::ChecksumMismatch { path: this_path() });
        }
        let mut values = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let w_vec: Vec<f64> = values.by_ref().take(m * d).collect();
        let b_vec: Vec<f64> = values.by_ref().take(m).collect();
        let b_dec_vec: Vec<f64> = values.collect();
        let w = Array2::from_shape_vec((m, d), w_vec).expect("payload length checked");
        Self::new(w, Array1::from_vec(b_vec), Array1::from_vec(b_dec_vec))
    }
}

/// Mean over all entries of the squared difference.
pub fn mse_loss(x: ArrayView2<'_, f64>, x_prime: ArrayView2<'_, f64>) -> Result<f64, ModelError> {
    if x.dim() != x_prime.dim() {
        return Err(ModelError::ShapeMismatch {
            a: x.dim(),
            b: x_prime.dim(),
        });
    }
    let mut sse = 0.0;
    ndarray::Zip::from(&x).and(&x_prime).for_each(|&a, &b| {
        let diff = a - b;
        sse += diff * diff;
    });
    Ok(sse / (x.nrows() as f64 * x.ncols() as f64))
}

/// Pearson correlation over all entries of both matrices, flattened to a
/// single pair of vectors.
pub fn pearson(x: ArrayView2<'_, f64>, x_prime: ArrayView2<'_, f64>) -> Result<f64, ModelError> {
    if x.dim() != x_prime.dim() {
        return Err(ModelError::ShapeMismatch {
            a: x.dim(),
            b: x_prime.dim(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(ModelError::TooFewEntries);
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = x_prime.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(x_prime.iter()) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(ModelError::ZeroVariance { side: "first" });
    }
    if syy == 0.0 {
        return Err(ModelError::ZeroVariance { side: "second" });
    }
    Ok(sxy / (sxx * syy).sqrt())
}
