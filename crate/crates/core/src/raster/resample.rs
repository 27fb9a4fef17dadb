use super::filter::{self, clamp_index};
use super::{clamp_unit, ErpImage};
use crate::error::{Error, Result};

/// Normalized Gaussian taps `exp(-i^2 / (2 sigma^2))` for `|i| <= ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid(format!("gaussian sigma {sigma} must be positive")));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    Ok(normalized_gaussian(radius, sigma))
}

pub(crate) fn normalized_gaussian(radius: isize, sigma: f64) -> Vec<f64> {
    let taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Separable Gaussian blur, wrapping horizontally and clamping vertically.
pub fn gaussian_blur(image: &ErpImage, sigma: f64) -> Result<ErpImage> {
    let kernel = gaussian_kernel(sigma)?;
    let (w, h) = (image.width(), image.height());
    let planes = image
        .planes()
        .iter()
        .map(|p| filter::separable(p, w, h, &kernel))
        .collect();
    Ok(ErpImage::from_planes(w, h, planes))
}

fn check_factor(image: &ErpImage, r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::invalid("scale factor must be at least 1"));
    }
    if !image.width().is_multiple_of(r) || !image.height().is_multiple_of(r) {
        return Err(Error::invalid(format!(
            "{}x{} is not divisible by factor {r}",
            image.width(),
            image.height()
        )));
    }
    Ok(())
}

/// Keeps every `r`-th pixel: output `(x, y)` is input `(r x, r y)`.
pub fn decimate(image: &ErpImage, r: usize) -> Result<ErpImage> {
    check_factor(image, r)?;
    let (w, h) = (image.width() / r, image.height() / r);
    ErpImage::from_fn(w, h, image.channels(), |x, y, c| image.get(r * x, r * y, c))
}

/// Low-resolution input: blur with `sigma = r / 2`, then decimate by `r`.
/// `r = 1` returns the input untouched.
pub fn degrade(image: &ErpImage, r: usize) -> Result<ErpImage> {
    degrade_with_sigma(image, r, None)
}

/// [`degrade`] with an explicit blur width. `None` means `r / 2`.
pub fn degrade_with_sigma(image: &ErpImage, r: usize, sigma: Option<f64>) -> Result<ErpImage> {
    check_factor(image, r)?;
    if r == 1 {
        return Ok(image.clone());
    }
    let blurred = gaussian_blur(image, sigma.unwrap_or(r as f64 / 2.0))?;
    decimate(&blurred, r)
}

/// Nearest-neighbour upsampling: each pixel becomes an `r x r` block.
pub fn upsample_nn(image: &ErpImage, r: usize) -> Result<ErpImage> {
    if r == 0 {
        return Err(Error::invalid("scale factor must be at least 1"));
    }
    ErpImage::from_fn(image.width() * r, image.height() * r, image.channels(), |x, y, c| {
        image.get(x / r, y / r, c)
    })
}

/// Keys cubic convolution kernel with `a = -0.5`.
pub fn keys_cubic(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        ((A + 2.0) * t - (A + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((A * t - 5.0 * A) * t + 8.0 * A) * t - 4.0 * A
    } else {
        0.0
    }
}

/// Base index and the four tap weights for continuous index `f`
/// (pixel centers at integers). Taps cover `base - 1 ..= base + 2`.
fn cubic_taps(f: f64) -> (isize, [f64; 4]) {
    let base = f.floor();
    let t = f - base;
    (
        base as isize,
        [keys_cubic(t + 1.0), keys_cubic(t), keys_cubic(1.0 - t), keys_cubic(2.0 - t)],
    )
}

/// Bicubic upsampling by `r`. Output pixel `x` samples source position
/// `(x + 0.5) / r - 0.5`.
pub fn upsample_bicubic(image: &ErpImage, r: usize) -> Result<ErpImage> {
    if r == 0 {
        return Err(Error::invalid("scale factor must be at least 1"));
    }
    let (w, h) = (image.width(), image.height());
    let (ow, oh) = (w * r, h * r);
    let positions = |n: usize| -> Vec<(isize, [f64; 4])> {
        (0..n * r)
            .map(|x| cubic_taps((x as f64 + 0.5) / r as f64 - 0.5))
            .collect()
    };
    let cols = positions(w);
    let rows = positions(h);

    let planes = image
        .planes()
        .iter()
        .map(|src| {
            let mut wide = vec![0.0; ow * h];
            for y in 0..h {
                let row = &src[y * w..(y + 1) * w];
                for (x, (base, k)) in cols.iter().enumerate() {
                    let tap = |i: usize| row[(base - 1 + i as isize).rem_euclid(w as isize) as usize];
                    let anchor = tap(1);
                    wide[y * ow + x] = anchor + (0..4).map(|i| k[i] * (tap(i) - anchor)).sum::<f64>();
                }
            }
            let mut out = vec![0.0; ow * oh];
            for (y, (base, k)) in rows.iter().enumerate() {
                let dst = &mut out[y * ow..(y + 1) * ow];
                let ay = clamp_index(*base, h);
                let anchor = &wide[ay * ow..(ay + 1) * ow];
                for (i, &ki) in k.iter().enumerate() {
                    let sy = clamp_index(base - 1 + i as isize, h);
                    for ((d, s), a) in dst.iter_mut().zip(&wide[sy * ow..(sy + 1) * ow]).zip(anchor) {
                        *d += ki * (s - a);
                    }
                }
                for (d, a) in dst.iter_mut().zip(anchor) {
                    *d += a;
                }
            }
            out
        })
        .collect();
    Ok(ErpImage::from_planes(ow, oh, planes))
}

/// Bicubic sample of one channel at continuous raster position `(u, v)`,
/// where pixel centers sit at `integer + 0.5`.
pub fn sample_bicubic(image: &ErpImage, channel: usize, u: f64, v: f64) -> f64 {
    let plane = image.plane(channel);
    sample_plane(&plane, image.width(), image.height(), u, v)
}

pub(crate) fn sample_plane(plane: &[f64], width: usize, height: usize, u: f64, v: f64) -> f64 {
    let (bx, kx) = cubic_taps(u - 0.5);
    let (by, ky) = cubic_taps(v - 0.5);
    let line = |sy: usize| {
        let row = &plane[sy * width..(sy + 1) * width];
        let tap = |i: usize| row[(bx - 1 + i as isize).rem_euclid(width as isize) as usize];
        let anchor = tap(1);
        anchor + kx.iter().enumerate().map(|(i, wx)| wx * (tap(i) - anchor)).sum::<f64>()
    };
    let anchor = line(clamp_index(by, height));
    let mut acc = 0.0;
    for (j, wy) in ky.iter().enumerate() {
        acc += wy * (line(clamp_index(by - 1 + j as isize, height)) - anchor);
    }
    clamp_unit(anchor + acc)
}
