//! Multi-dimensional FFTs and Fourier multipliers on periodic tensor grids.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{GridError, GridSpec};

/// Rows handed to a single `Fft::process` call.
const ROWS_PER_TASK: usize = 16;

pub struct SpectralOps {
    dim: usize,
    points: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `|ξ|²` in storage order.
    k2: Vec<f64>,
    /// Largest |k| over the axes, in units of the fundamental mode.
    kmax: Vec<usize>,
}

impl std::fmt::Debug for SpectralOps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOps")
            .field("dim", &self.dim)
            .field("points", &self.points)
            .finish()
    }
}

type CacheKey = (usize, usize, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<SpectralOps>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<SpectralOps>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Signed integer wavenumber of FFT index m.
#[inline]
pub(crate) fn signed_mode(m: usize, points: usize) -> i64 {
    if m < points / 2 {
        m as i64
    } else {
        m as i64 - points as i64
    }
}

impl SpectralOps {
    pub fn new(grid: &GridSpec) -> Result<Self, GridError> {
        let GridSpec::Tensor { n, extent, points } = *grid else {
            return Err(GridError::Unsupported(
                "spectral operators need a tensor grid".into(),
            ));
        };
        grid.validate()?;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        let dk = 2.0 * PI / extent;
        let total = grid.len();
        let mut k2 = Vec::with_capacity(total);
        let mut kmax = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let (mut s, mut m) = (0.0, 0usize);
            for _ in 0..n {
                let k = signed_mode(rem % points, points);
                rem /= points;
                s += (k as f64 * dk).powi(2);
                m = m.max(k.unsigned_abs() as usize);
            }
            k2.push(s);
            kmax.push(m);
        }
        Ok(Self {
            dim: n,
            points,
            forward,
            inverse,
            k2,
            kmax,
        })
    }

    /// Process-wide shared instance for the grid.
    pub fn shared(grid: &GridSpec) -> Result<Arc<SpectralOps>, GridError> {
        let GridSpec::Tensor { n, extent, points } = *grid else {
            return Err(GridError::Unsupported(
                "spectral operators need a tensor grid".into(),
            ));
        };
        let key = (n, points, extent.to_bits());
        let mut map = cache().lock().expect("spectral cache poisoned");
        if let Some(ops) = map.get(&key) {
            return Ok(ops.clone());
        }
        let ops = Arc::new(SpectralOps::new(grid)?);
        map.insert(key, ops.clone());
        Ok(ops)
    }

    pub fn wavenumber_sq(&self) -> &[f64] {
        &self.k2
    }

    pub fn len(&self) -> usize {
        self.k2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k2.is_empty()
    }

    /// Unnormalised forward transform, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse transform including the `1/N^n` normalisation.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.points;
        assert_eq!(data.len(), self.k2.len(), "field does not match the grid");
        for axis in 0..self.dim {
            let inner = n.pow((self.dim - 1 - axis) as u32);
            if inner == 1 {
                data.par_chunks_mut(n * ROWS_PER_TASK)
                    .for_each(|rows| fft.process(rows));
                continue;
            }
            let block = n * inner;
            data.par_chunks_mut(block).for_each(|blk| {
                // gather lines along `axis` into contiguous rows
                let mut scratch = vec![Complex64::new(0.0, 0.0); block];
                for i in 0..n {
                    for j in 0..inner {
                        scratch[j * n + i] = blk[i * inner + j];
                    }
                }
                scratch
                    .par_chunks_mut(n * ROWS_PER_TASK)
                    .for_each(|rows| fft.process(rows));
                for i in 0..n {
                    for j in 0..inner {
                        blk[i * inner + j] = scratch[j * n + i];
                    }
                }
            });
        }
    }

    /// Multiplies spectral coefficients by `m(|ξ|²)`.
    pub fn apply_multiplier(&self, spectrum: &mut [Complex64], m: impl Fn(f64) -> Complex64 + Sync) {
        spectrum
            .par_iter_mut()
            .zip(self.k2.par_iter())
            .for_each(|(v, &k2)| *v *= m(k2));
    }

    /// Two-thirds rule: zero every mode with `|k_i| > N/3` on some axis.
    pub fn dealias(&self, spectrum: &mut [Complex64]) {
        let cut = self.points / 3;
        spectrum
            .par_iter_mut()
            .zip(self.kmax.par_iter())
            .for_each(|(v, &k)| {
                if k > cut {
                    *v = Complex64::new(0.0, 0.0);
                }
            });
    }

    /// `Σ_ξ |ξ|^{2s} |û(ξ)|²` for an already transformed field.
    pub fn weighted_power(&self, spectrum: &[Complex64], s: f64) -> f64 {
        spectrum
            .par_iter()
            .zip(self.k2.par_iter())
            .map(|(v, &k2)| {
                let w = if s == 0.0 {
                    1.0
                } else if k2 == 0.0 {
                    0.0
                } else {
                    k2.powf(s)
                };
                w * v.norm_sqr()
            })
            .sum()
    }
}
