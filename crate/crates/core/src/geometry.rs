//! Equirectangular geometry: spherical row weights and the mapping between
//! raster coordinates and directions on the sphere.
//!
//! Raster coordinates are continuous: column `u` runs over `[0, W]`, row `v`
//! over `[0, H]`, and the center of pixel `(x, y)` sits at `(x + 0.5, y + 0.5)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Per-row spherical area weights of an ERP raster.
///
/// The stretching of the sphere onto the plane depends only on latitude, so
/// one weight per row is stored and the same value applies to every column.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap {
    weights: Vec<f64>,
}

impl WeightMap {
    /// All-ones weights. With these the weighted metrics reduce to their
    /// planar counterparts.
    pub fn uniform(height: usize) -> Result<Self> {
        if height == 0 {
            return Err(Error::invalid("weight map height must be positive"));
        }
        Ok(Self {
            weights: vec![1.0; height],
        })
    }

    /// Arbitrary positive row weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weight map height must be positive"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid(format!("row weight {w} is not positive and finite")));
        }
        Ok(Self { weights })
    }

    pub fn height(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, row: usize) -> f64 {
        self.weights[row]
    }

    /// Sum of the weights of one column.
    pub fn column_total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Sum of the weights over every pixel of a raster `width` columns wide.
    pub fn total_for_width(&self, width: usize) -> f64 {
        width as f64 * self.column_total()
    }
}

/// Spherical weights `cos((y + 0.5 - N/2) * pi / N)` for each of `height` rows.
///
/// Rows are symmetric about the equator bit-for-bit, and the middle row of an
/// odd-height raster has weight exactly 1.
pub fn row_weights(height: usize) -> Result<WeightMap> {
    if height == 0 {
        return Err(Error::invalid("row_weights: height must be at least 1"));
    }
    let n = height as f64;
    let weights = (0..height)
        .map(|y| {
            // Half-integer offsets are exact, so taking |t| makes mirrored rows identical.
            let t = (y as f64 + 0.5) - n / 2.0;
            (t.abs() * PI / n).cos()
        })
        .collect();
    Ok(WeightMap { weights })
}

/// Converts a raster position to `(longitude, latitude)` in radians.
///
/// Longitude spans `[-pi, pi]` left to right, latitude `[pi/2, -pi/2]` top to bottom.
pub fn pixel_to_direction(u: f64, v: f64, width: usize, height: usize) -> Result<(f64, f64)> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("raster dimensions must be positive"));
    }
    let (w, h) = (width as f64, height as f64);
    if !(0.0..=w).contains(&u) || !(0.0..=h).contains(&v) {
        return Err(Error::invalid(format!(
            "raster coordinate ({u}, {v}) outside [0, {w}] x [0, {h}]"
        )));
    }
    Ok((u / w * TAU - PI, FRAC_PI_2 - v / h * PI))
}

/// Inverse of [`pixel_to_direction`]. The column wraps into `[0, W)`; the row
/// is clamped into `[0, H]`.
pub fn direction_to_pixel(longitude: f64, latitude: f64, width: usize, height: usize) -> (f64, f64) {
    let (w, h) = (width as f64, height as f64);
    let u = ((longitude + PI) / TAU * w).rem_euclid(w);
    let v = ((FRAC_PI_2 - latitude) / PI * h).clamp(0.0, h);
    (u, v)
}

/// A rectilinear (perspective) view into the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewportSpec {
    yaw: f64,
    pitch: f64,
    horizontal_fov: f64,
    out_width: usize,
    out_height: usize,
}

impl ViewportSpec {
    /// Angles in radians. `yaw` must lie in `[-pi, pi)`, `pitch` in
    /// `[-pi/2, pi/2]` and the horizontal field of view in `(0, pi)`.
    pub fn new(
        yaw: f64,
        pitch: f64,
        horizontal_fov: f64,
        out_width: usize,
        out_height: usize,
    ) -> Result<Self> {
        if !(yaw.is_finite() && (-PI..PI).contains(&yaw)) {
            return Err(Error::invalid(format!("yaw {yaw} outside [-pi, pi)")));
        }
        if !(pitch.is_finite() && (-FRAC_PI_2..=FRAC_PI_2).contains(&pitch)) {
            return Err(Error::invalid(format!("pitch {pitch} outside [-pi/2, pi/2]")));
        }
        if !(horizontal_fov > 0.0 && horizontal_fov < PI) {
            return Err(Error::invalid(format!(
                "horizontal field of view {horizontal_fov} outside (0, pi)"
            )));
        }
        if out_width == 0 || out_height == 0 {
            return Err(Error::invalid("viewport output size must be positive"));
        }
        Ok(Self {
            yaw,
            pitch,
            horizontal_fov,
            out_width,
            out_height,
        })
    }

    /// Same as [`ViewportSpec::new`] with angles in degrees. Yaw is first
    /// normalised into `[-180, 180)`.
    pub fn from_degrees(
        yaw_deg: f64,
        pitch_deg: f64,
        fov_deg: f64,
        out_width: usize,
        out_height: usize,
    ) -> Result<Self> {
        let yaw_deg = (yaw_deg + 180.0).rem_euclid(360.0) - 180.0;
        Self::new(
            yaw_deg.to_radians(),
            pitch_deg.to_radians(),
            fov_deg.to_radians(),
            out_width,
            out_height,
        )
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn horizontal_fov(&self) -> f64 {
        self.horizontal_fov
    }

    /// Vertical field of view implied by square output pixels.
    pub fn vertical_fov(&self) -> f64 {
        let aspect = self.out_height as f64 / self.out_width as f64;
        2.0 * ((self.horizontal_fov / 2.0).tan() * aspect).atan()
    }

    pub fn out_width(&self) -> usize {
        self.out_width
    }

    pub fn out_height(&self) -> usize {
        self.out_height
    }
}

/// Source raster coordinates for every pixel of a viewport, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    width: usize,
    height: usize,
    coords: Vec<(f64, f64)>,
}

impl SampleGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(u, v)` for output pixel `(x, y)`.
    pub fn get(&self, x: usize, y: usize) -> (f64, f64) {
        self.coords[y * self.width + x]
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }
}

/// Gnomonic projection of each viewport pixel onto an ERP raster of
/// `width x height`.
///
/// Camera frame: x right, y up, z forward. The ray through an output pixel
/// is tilted by `pitch` about x, then turned by `yaw` about y.
pub fn viewport_sample_grid(spec: &ViewportSpec, width: usize, height: usize) -> SampleGrid {
    let (ow, oh) = (spec.out_width, spec.out_height);
    let half_w = (spec.horizontal_fov / 2.0).tan();
    let half_h = half_w * oh as f64 / ow as f64;
    let (sin_p, cos_p) = spec.pitch.sin_cos();
    let (sin_y, cos_y) = spec.yaw.sin_cos();

    let mut coords = Vec::with_capacity(ow * oh);
    for j in 0..oh {
        let ty = (0.5 - (j as f64 + 0.5) / oh as f64) * 2.0 * half_h;
        for i in 0..ow {
            let tx = ((i as f64 + 0.5) / ow as f64 - 0.5) * 2.0 * half_w;
            let norm = (tx * tx + ty * ty + 1.0).sqrt();
            let (x, y, z) = (tx / norm, ty / norm, 1.0 / norm);

            let y1 = y * cos_p + z * sin_p;
            let z1 = -y * sin_p + z * cos_p;
            let x2 = x * cos_y + z1 * sin_y;
            let z2 = -x * sin_y + z1 * cos_y;

            let longitude = x2.atan2(z2);
            let latitude = y1.clamp(-1.0, 1.0).asin();
            coords.push(direction_to_pixel(longitude, latitude, width, height));
        }
    }
    SampleGrid {
        width: ow,
        height: oh,
        coords,
    }
}
