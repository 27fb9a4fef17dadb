//! Raster images in equirectangular layout, their I/O and resampling.

pub(crate) mod filter;
pub(crate) mod io;
mod resample;
mod viewport;

pub use io::{load_image, save_image, BitDepth};
pub use resample::{
    decimate, degrade, degrade_with_sigma, gaussian_blur, gaussian_kernel, keys_cubic, sample_bicubic,
    upsample_bicubic, upsample_nn,
};
pub use viewport::render_viewport;
pub(crate) use resample::normalized_gaussian;

use crate::error::{Error, Result};

/// BT.601 luma coefficients for R, G, B.
pub const LUMA_COEFFS: [f64; 3] = [0.299, 0.587, 0.114];

/// A `width x height` raster of samples in `[0, 1]`, row-major with
/// interleaved channels. One channel is luma, three are RGB.
///
/// Filters that reach past the raster wrap horizontally and clamp vertically.
#[derive(Debug, Clone, PartialEq)]
pub struct ErpImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<f64>,
}

impl ErpImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::invalid(format!("{channels} channels; expected 1 or 3")));
        }
        if samples.len() != width * height * channels {
            return Err(Error::invalid(format!(
                "{} samples for a {width}x{height}x{channels} image",
                samples.len()
            )));
        }
        if let Some(s) = samples.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::invalid(format!("sample {s} outside [0, 1]")));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn constant(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds an image from `f(x, y, channel)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    samples.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, samples)
    }

    /// Interleaves single-channel planes, clamping into `[0, 1]`.
    pub(crate) fn from_planes(width: usize, height: usize, planes: Vec<Vec<f64>>) -> Self {
        let channels = planes.len();
        debug_assert!(channels == 1 || channels == 3);
        let samples = if channels == 1 {
            planes.into_iter().next().unwrap().into_iter().map(clamp_unit).collect()
        } else {
            let mut out = Vec::with_capacity(width * height * channels);
            for i in 0..width * height {
                for plane in &planes {
                    out.push(clamp_unit(plane[i]));
                }
            }
            out
        };
        Self {
            width,
            height,
            channels,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn get(&self, x: usize, y: usize, channel: usize) -> f64 {
        self.samples[(y * self.width + x) * self.channels + channel]
    }

    pub fn same_shape(&self, other: &ErpImage) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// One channel as a contiguous row-major plane.
    pub fn plane(&self, channel: usize) -> Vec<f64> {
        assert!(channel < self.channels, "channel {channel} out of range");
        if self.channels == 1 {
            return self.samples.clone();
        }
        self.samples
            .iter()
            .skip(channel)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    pub(crate) fn planes(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|c| self.plane(c)).collect()
    }

    /// One channel as a single-channel image.
    pub fn channel(&self, channel: usize) -> ErpImage {
        Self {
            width: self.width,
            height: self.height,
            channels: 1,
            samples: self.plane(channel),
        }
    }

    /// Circular shift of the columns by `shift` to the right.
    pub fn shift_columns(&self, shift: isize) -> ErpImage {
        let w = self.width as isize;
        let mut samples = Vec::with_capacity(self.samples.len());
        for y in 0..self.height {
            let row = &self.samples[y * self.width * self.channels..(y + 1) * self.width * self.channels];
            for x in 0..w {
                let src = (x - shift).rem_euclid(w) as usize;
                samples.extend_from_slice(&row[src * self.channels..(src + 1) * self.channels]);
            }
        }
        Self { samples, ..*self }
    }

    /// BT.601 luma. Single-channel images are returned unchanged.
    pub fn to_luma(&self) -> ErpImage {
        if self.channels == 1 {
            return self.clone();
        }
        let samples = self
            .samples
            .chunks_exact(3)
            .map(|p| clamp_unit(LUMA_COEFFS[0] * p[0] + LUMA_COEFFS[1] * p[1] + LUMA_COEFFS[2] * p[2]))
            .collect();
        Self {
            width: self.width,
            height: self.height,
            channels: 1,
            samples,
        }
    }
}

pub(crate) fn clamp_unit(v: f64) -> f64 {
    debug_assert!(v.is_finite());
    v.clamp(0.0, 1.0)
}
