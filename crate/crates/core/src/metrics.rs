//! Full-reference quality metrics: PSNR, SSIM and their spherically
//! weighted variants WS-PSNR and WS-SSIM.
//!
//! SSIM local statistics use a separable Gaussian window that wraps across
//! the longitude seam and clamps at the poles, so the SSIM map covers the
//! full raster and every metric is invariant to circular column shifts.

use crate::error::{Error, Result};
use crate::geometry::WeightMap;
use crate::raster::filter;
use crate::raster::ErpImage;

/// Constants and window shared by every SSIM-family computation.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    k1: f64,
    k2: f64,
    dynamic_range: f64,
    window_size: usize,
    window_sigma: f64,
}

impl Default for SsimParams {
    /// `K1 = 0.01`, `K2 = 0.03`, `L = 1`, 11x11 Gaussian window with sigma 1.5.
    fn default() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 1.0,
            window_size: 11,
            window_sigma: 1.5,
        }
    }
}

impl SsimParams {
    pub fn new(k1: f64, k2: f64, dynamic_range: f64, window_size: usize, window_sigma: f64) -> Result<Self> {
        for (name, v) in [("k1", k1), ("k2", k2), ("dynamic range", dynamic_range), ("window sigma", window_sigma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("SSIM {name} must be positive, got {v}")));
            }
        }
        if window_size.is_multiple_of(2) {
            return Err(Error::invalid(format!("SSIM window size {window_size} must be odd")));
        }
        Ok(Self {
            k1,
            k2,
            dynamic_range,
            window_size,
            window_sigma,
        })
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn window_sigma(&self) -> f64 {
        self.window_sigma
    }

    /// Normalized 1-D window; the 2-D window is its outer product.
    pub fn window(&self) -> Vec<f64> {
        crate::raster::normalized_gaussian((self.window_size / 2) as isize, self.window_sigma)
    }
}

/// Gaussian-window local statistics of a reference `x` and a distorted `y`.
pub(crate) struct LocalMoments {
    pub mu_x: Vec<f64>,
    pub mu_y: Vec<f64>,
    pub xx: Vec<f64>,
    pub yy: Vec<f64>,
    pub xy: Vec<f64>,
}

impl LocalMoments {
    pub fn compute(x: &[f64], y: &[f64], width: usize, height: usize, window: &[f64]) -> Self {
        let product = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p * q).collect() };
        let blur = |v: &[f64]| filter::separable(v, width, height, window);
        Self {
            mu_x: blur(x),
            mu_y: blur(y),
            xx: blur(&product(x, x)),
            yy: blur(&product(y, y)),
            xy: blur(&product(x, y)),
        }
    }
}

/// Per-pixel terms of the SSIM fraction at one location.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SsimTerms {
    /// `2 mu_x mu_y + C1`
    pub a1: f64,
    /// `2 sigma_xy + C2`
    pub a2: f64,
    /// `mu_x^2 + mu_y^2 + C1`
    pub b1: f64,
    /// `sigma_x^2 + sigma_y^2 + C2`
    pub b2: f64,
}

impl SsimTerms {
    pub fn at(m: &LocalMoments, i: usize, c1: f64, c2: f64) -> Self {
        let (mx, my) = (m.mu_x[i], m.mu_y[i]);
        let var_x = m.xx[i] - mx * mx;
        let var_y = m.yy[i] - my * my;
        let cov = m.xy[i] - mx * my;
        Self {
            a1: 2.0 * mx * my + c1,
            a2: 2.0 * cov + c2,
            b1: mx * mx + my * my + c1,
            b2: var_x + var_y + c2,
        }
    }

    pub fn value(&self) -> f64 {
        (self.a1 * self.a2) / (self.b1 * self.b2)
    }
}

/// Local SSIM at every pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl SsimMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.values.chunks_exact(self.width).map(row_sum).sum();
        total / self.values.len() as f64
    }

    /// `sum q(y) SSIM(x, y) / (W sum q)`.
    pub fn weighted_mean(&self, weights: &WeightMap) -> Result<f64> {
        check_weights(weights, self.height)?;
        let numerator: f64 = self
            .values
            .chunks_exact(self.width)
            .zip(weights.weights())
            .map(|(row, q)| q * row_sum(row))
            .sum();
        Ok(numerator / weights.total_for_width(self.width))
    }
}

/// Sum of one raster row, independent of the order of its entries.
///
/// Circular column shifts permute a row; summing in sorted order keeps every
/// reduction bit-identical under such shifts.
pub(crate) fn row_sum(row: &[f64]) -> f64 {
    let mut sorted = row.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.iter().sum()
}

fn squared_error_rows<'a>(
    reference: &'a ErpImage,
    distorted: &'a ErpImage,
) -> impl Iterator<Item = f64> + 'a {
    let row_len = reference.width() * reference.channels();
    reference
        .samples()
        .chunks_exact(row_len)
        .zip(distorted.samples().chunks_exact(row_len))
        .map(|(a, b)| {
            let errors: Vec<f64> = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).collect();
            row_sum(&errors)
        })
}

fn check_shapes(reference: &ErpImage, distorted: &ErpImage) -> Result<()> {
    if !reference.same_shape(distorted) {
        return Err(Error::invalid(format!(
            "shape mismatch: {}x{}x{} vs {}x{}x{}",
            reference.width(),
            reference.height(),
            reference.channels(),
            distorted.width(),
            distorted.height(),
            distorted.channels()
        )));
    }
    Ok(())
}

fn check_weights(weights: &WeightMap, height: usize) -> Result<()> {
    if weights.height() != height {
        return Err(Error::invalid(format!(
            "weight map has {} rows, image has {height}",
            weights.height()
        )));
    }
    Ok(())
}

fn check_range(range: f64) -> Result<()> {
    if !(range.is_finite() && range > 0.0) {
        return Err(Error::invalid(format!("peak value {range} must be positive")));
    }
    Ok(())
}

fn psnr_from_mse(mse: f64, range: f64) -> Result<f64> {
    if mse == 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(10.0 * (range * range / mse).log10())
}

/// Peak signal-to-noise ratio in decibels over all samples.
///
/// Identical images give [`Error::Degenerate`].
pub fn psnr(reference: &ErpImage, distorted: &ErpImage, range: f64) -> Result<f64> {
    check_shapes(reference, distorted)?;
    check_range(range)?;
    let sse: f64 = squared_error_rows(reference, distorted).sum();
    psnr_from_mse(sse / reference.samples().len() as f64, range)
}

/// PSNR with each squared error scaled by its row weight.
pub fn ws_psnr(reference: &ErpImage, distorted: &ErpImage, weights: &WeightMap, range: f64) -> Result<f64> {
    check_shapes(reference, distorted)?;
    check_weights(weights, reference.height())?;
    check_range(range)?;
    let weighted: f64 = squared_error_rows(reference, distorted)
        .zip(weights.weights())
        .map(|(sse, q)| q * sse)
        .sum();
    let wmse = weighted / (weights.total_for_width(reference.width()) * reference.channels() as f64);
    psnr_from_mse(wmse, range)
}

/// Local SSIM map of two single-channel images.
pub fn ssim_map(reference: &ErpImage, distorted: &ErpImage, params: &SsimParams) -> Result<SsimMap> {
    check_shapes(reference, distorted)?;
    if reference.channels() != 1 {
        return Err(Error::invalid("SSIM needs single-channel images; convert to luma first"));
    }
    let (w, h) = (reference.width(), reference.height());
    let moments = LocalMoments::compute(reference.samples(), distorted.samples(), w, h, &params.window());
    let (c1, c2) = (params.c1(), params.c2());
    let values = (0..w * h).map(|i| SsimTerms::at(&moments, i, c1, c2).value()).collect();
    Ok(SsimMap {
        width: w,
        height: h,
        values,
    })
}

/// Mean SSIM.
pub fn ssim(reference: &ErpImage, distorted: &ErpImage, params: &SsimParams) -> Result<f64> {
    Ok(ssim_map(reference, distorted, params)?.mean())
}

/// Spherically weighted SSIM: the weighted mean of the SSIM map.
pub fn ws_ssim(
    reference: &ErpImage,
    distorted: &ErpImage,
    params: &SsimParams,
    weights: &WeightMap,
) -> Result<f64> {
    check_weights(weights, reference.height())?;
    ssim_map(reference, distorted, params)?.weighted_mean(weights)
}
