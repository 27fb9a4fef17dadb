//! Training-objective operators for spherical super-resolution.
//!
//! Networks are not part of this crate: the discriminator probabilities and
//! feature maps are inputs, so any external trainer can call these.
//!
//! The 360-SS similarity of a pair is the spherically weighted mean SSIM
//! (see [`crate::metrics::ws_ssim`]). Since the objective is minimized, the
//! loss is its complement, `1 - mean(d)`, and [`grad_360ss`] is the exact
//! gradient of `1 - d` with respect to the distorted image.

use crate::error::{Error, Result};
use crate::geometry::{row_weights, WeightMap};
use crate::metrics::{ws_ssim, LocalMoments, SsimParams, SsimTerms};
use crate::raster::{filter, ErpImage};

/// Spherically weighted SSIM of one pair, using the ERP weights of its height.
pub fn d_360ss(reference: &ErpImage, distorted: &ErpImage, params: &SsimParams) -> Result<f64> {
    ws_ssim(reference, distorted, params, &row_weights(reference.height())?)
}

/// `1 - (1/K) sum_i d_i` over a batch of `(reference, distorted)` luma pairs.
/// Lies in `[0, 2]` and is zero when every pair is identical.
pub fn loss_360ss(pairs: &[(ErpImage, ErpImage)], params: &SsimParams) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid("360-SS loss needs at least one pair"));
    }
    let mut total = 0.0;
    for (reference, distorted) in pairs {
        total += d_360ss(reference, distorted, params)?;
    }
    Ok(1.0 - total / pairs.len() as f64)
}

/// A dense per-pixel gradient; values are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientImage {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl GradientImage {
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

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maps the gradient to `[0, 1]` around 0.5: `0.5 + g / (2 max|g|)`.
    /// A zero gradient becomes a flat 0.5 image.
    pub fn to_visual(&self) -> ErpImage {
        let scale = self.max_abs();
        let samples = self
            .values
            .iter()
            .map(|g| if scale > 0.0 { (0.5 + g / (2.0 * scale)).clamp(0.0, 1.0) } else { 0.5 })
            .collect();
        ErpImage::new(self.width, self.height, 1, samples).expect("visual samples lie in [0, 1]")
    }
}

/// Analytic gradient of `1 - d` with respect to every sample of `distorted`,
/// where `d` is the weighted mean SSIM under `weights`.
///
/// Each local statistic is a window filter `G` of `y`, `y^2` or `x y`, so the
/// chain rule pulls the per-pixel partials back through `G^T`:
///
/// `grad = G^T a + 2 y * G^T b + x * G^T c`
///
/// with `a`, `b`, `c` the weighted partials of the SSIM map with respect to
/// `mu_y`, `E[y^2]` and `E[x y]`.
pub fn grad_360ss(
    reference: &ErpImage,
    distorted: &ErpImage,
    params: &SsimParams,
    weights: &WeightMap,
) -> Result<GradientImage> {
    if !reference.same_shape(distorted) {
        return Err(Error::invalid("gradient: reference and distorted shapes differ"));
    }
    if reference.channels() != 1 {
        return Err(Error::invalid("gradient: images must be single-channel luma"));
    }
    let (w, h) = (reference.width(), reference.height());
    if weights.height() != h {
        return Err(Error::invalid(format!(
            "gradient: weight map has {} rows, image has {h}",
            weights.height()
        )));
    }
    let x = reference.samples();
    let y = distorted.samples();
    let window = params.window();
    let moments = LocalMoments::compute(x, y, w, h, &window);
    let (c1, c2) = (params.c1(), params.c2());
    let total = weights.total_for_width(w);

    let n = w * h;
    let mut d_mu = vec![0.0; n];
    let mut d_yy = vec![0.0; n];
    let mut d_xy = vec![0.0; n];
    for row in 0..h {
        let alpha = -weights.get(row) / total;
        for i in row * w..(row + 1) * w {
            let t = SsimTerms::at(&moments, i, c1, c2);
            let (mx, my) = (moments.mu_x[i], moments.mu_y[i]);
            let den = t.b1 * t.b2;
            let s = t.value();
            d_mu[i] = alpha * (2.0 * mx * (t.a2 - t.a1) / den - s * 2.0 * my / t.b1 + s * 2.0 * my / t.b2);
            d_yy[i] = alpha * (-s / t.b2);
            d_xy[i] = alpha * (2.0 * t.a1 / den);
        }
    }

    let back_mu = filter::separable_adjoint(&d_mu, w, h, &window);
    let back_yy = filter::separable_adjoint(&d_yy, w, h, &window);
    let back_xy = filter::separable_adjoint(&d_xy, w, h, &window);
    let values = (0..n)
        .map(|j| back_mu[j] + 2.0 * y[j] * back_yy[j] + x[j] * back_xy[j])
        .collect();
    Ok(GradientImage {
        width: w,
        height: h,
        values,
    })
}

/// Distance used by [`feature_loss_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureDistance {
    /// Mean squared difference.
    #[default]
    SquaredL2,
    /// Mean absolute difference.
    L1,
}

/// Activations of a feature extractor, with their shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl FeatureMap {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if shape.is_empty() || expected == 0 {
            return Err(Error::invalid("feature map shape must be non-empty"));
        }
        if expected != data.len() {
            return Err(Error::invalid(format!(
                "feature map shape {shape:?} needs {expected} values, got {}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("feature map contains non-finite values"));
        }
        Ok(Self { shape, data })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Mean squared difference between two feature maps.
pub fn feature_loss(reference: &FeatureMap, distorted: &FeatureMap) -> Result<f64> {
    feature_loss_with(reference, distorted, FeatureDistance::SquaredL2)
}

pub fn feature_loss_with(reference: &FeatureMap, distorted: &FeatureMap, distance: FeatureDistance) -> Result<f64> {
    if reference.shape != distorted.shape {
        return Err(Error::invalid(format!(
            "feature shapes differ: {:?} vs {:?}",
            reference.shape, distorted.shape
        )));
    }
    let sum: f64 = reference
        .data
        .iter()
        .zip(&distorted.data)
        .map(|(a, b)| match distance {
            FeatureDistance::SquaredL2 => (a - b) * (a - b),
            FeatureDistance::L1 => (a - b).abs(),
        })
        .sum();
    Ok(sum / reference.data.len() as f64)
}

/// Feature loss averaged over a batch of map pairs.
pub fn feature_loss_batch(pairs: &[(FeatureMap, FeatureMap)], distance: FeatureDistance) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid("feature loss needs at least one pair"));
    }
    let mut total = 0.0;
    for (a, b) in pairs {
        total += feature_loss_with(a, b, distance)?;
    }
    Ok(total / pairs.len() as f64)
}

/// Discriminator probabilities for `K >= 1` generated samples, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbBatch(Vec<f64>);

impl ProbBatch {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("probability batch is empty"));
        }
        if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(Error::invalid(format!("probability {p} outside (0, 1]")));
        }
        Ok(Self(probs))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// `sum_i -ln p_i`. A sum over the batch, not a mean.
pub fn adversarial_loss(probs: &ProbBatch) -> f64 {
    probs.0.iter().map(|p| -p.ln()).sum()
}

/// Weights of the feature (`beta`) and 360-SS (`gamma`) terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    beta: f64,
    gamma: f64,
}

impl Default for LossWeights {
    /// `beta = gamma = 10`.
    fn default() -> Self {
        Self {
            beta: 10.0,
            gamma: 10.0,
        }
    }
}

impl LossWeights {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0 && gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid(format!(
                "loss weights must be finite and non-negative, got beta={beta} gamma={gamma}"
            )));
        }
        Ok(Self { beta, gamma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `adv + beta * feat + gamma * spherical`.
pub fn total_objective(adversarial: f64, feature: f64, spherical: f64, weights: &LossWeights) -> f64 {
    adversarial + weights.beta * feature + weights.gamma * spherical
}

/// Mean of a rectangular grid of per-patch discriminator scores.
pub fn patch_score_average(scores: &[Vec<f64>]) -> Result<f64> {
    let cols = scores.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err(Error::invalid("patch score grid is empty"));
    }
    if scores.iter().any(|row| row.len() != cols) {
        return Err(Error::invalid("patch score grid is not rectangular"));
    }
    let mut sum = 0.0;
    for &s in scores.iter().flatten() {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::invalid(format!("patch score {s} outside [0, 1]")));
        }
        sum += s;
    }
    Ok(sum / (scores.len() * cols) as f64)
}
