//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The oracles are written directly from the textbook definitions with plain
//! nested loops; none of them call into the crate's filtering code.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

use odisr::raster::{save_image, BitDepth};
use odisr::ErpImage;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut StdRng, w: usize, h: usize, channels: usize) -> ErpImage {
    random_image_in(rng, w, h, channels, 0.0, 1.0)
}

pub fn random_image_in(rng: &mut StdRng, w: usize, h: usize, channels: usize, lo: f64, hi: f64) -> ErpImage {
    let samples = (0..w * h * channels).map(|_| rng.random_range(lo..hi)).collect();
    ErpImage::new(w, h, channels, samples).unwrap()
}

/// A reference image and a noisy, partially blurred version of it, both luma.
pub fn random_pair(rng: &mut StdRng, w: usize, h: usize) -> (ErpImage, ErpImage) {
    let reference = random_image_in(rng, w, h, 1, 0.05, 0.95);
    let samples = reference
        .samples()
        .iter()
        .map(|&s| (s + rng.random_range(-0.04..0.04)).clamp(0.01, 0.99))
        .collect();
    (reference, ErpImage::new(w, h, 1, samples).unwrap())
}

pub fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

pub fn clamp(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

/// ERP row weight evaluated straight from its definition.
pub fn erp_weight(y: usize, h: usize) -> f64 {
    ((y as f64 + 0.5 - h as f64 / 2.0) * PI / h as f64).cos()
}

pub fn gaussian_taps(radius: isize, sigma: f64) -> Vec<f64> {
    let raw: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i as f64).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// Direct 2-D convolution with the outer-product Gaussian, wrap in x, clamp in y.
pub fn blur_oracle(img: &ErpImage, sigma: f64) -> ErpImage {
    let radius = (3.0 * sigma).ceil() as isize;
    let g = gaussian_taps(radius, sigma);
    let (w, h) = (img.width(), img.height());
    ErpImage::from_fn(w, h, img.channels(), |x, y, c| {
        let mut acc = 0.0;
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                let wgt = g[(dy + radius) as usize] * g[(dx + radius) as usize];
                acc += wgt * img.get(wrap(x as isize + dx, w), clamp(y as isize + dy, h), c);
            }
        }
        acc.clamp(0.0, 1.0)
    })
    .unwrap()
}

pub fn decimate_oracle(img: &ErpImage, r: usize) -> ErpImage {
    let mut samples = Vec::new();
    for y in (0..img.height()).step_by(r) {
        for x in (0..img.width()).step_by(r) {
            for c in 0..img.channels() {
                samples.push(img.get(x, y, c));
            }
        }
    }
    ErpImage::new(img.width() / r, img.height() / r, img.channels(), samples).unwrap()
}

/// Keys cubic, a = -0.5, in its expanded polynomial form.
pub fn keys(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.5 * t.powi(3) - 2.5 * t.powi(2) + 1.0
    } else if t < 2.0 {
        -0.5 * t.powi(3) + 2.5 * t.powi(2) - 4.0 * t + 2.0
    } else {
        0.0
    }
}

/// Bicubic value at continuous pixel-index position `(fx, fy)` (centers at integers).
pub fn bicubic_at(img: &ErpImage, c: usize, fx: f64, fy: f64) -> f64 {
    let (w, h) = (img.width(), img.height());
    let (x0, y0) = (fx.floor() as isize, fy.floor() as isize);
    let mut acc = 0.0;
    for j in y0 - 1..=y0 + 2 {
        for i in x0 - 1..=x0 + 2 {
            acc += keys(fx - i as f64) * keys(fy - j as f64) * img.get(wrap(i, w), clamp(j, h), c);
        }
    }
    acc.clamp(0.0, 1.0)
}

pub fn bicubic_upsample_oracle(img: &ErpImage, r: usize) -> ErpImage {
    ErpImage::from_fn(img.width() * r, img.height() * r, img.channels(), |x, y, c| {
        let fx = (x as f64 + 0.5) / r as f64 - 0.5;
        let fy = (y as f64 + 0.5) / r as f64 - 0.5;
        bicubic_at(img, c, fx, fy)
    })
    .unwrap()
}

pub fn mse_oracle(a: &ErpImage, b: &ErpImage) -> f64 {
    let mut acc = 0.0;
    for (p, q) in a.samples().iter().zip(b.samples()) {
        acc += (p - q).powi(2);
    }
    acc / a.samples().len() as f64
}

pub fn psnr_oracle(a: &ErpImage, b: &ErpImage) -> f64 {
    10.0 * (1.0 / mse_oracle(a, b)).log10()
}

pub fn ws_psnr_oracle(a: &ErpImage, b: &ErpImage) -> f64 {
    let (w, h) = (a.width(), a.height());
    let (mut num, mut den) = (0.0, 0.0);
    for y in 0..h {
        let q = erp_weight(y, h);
        for x in 0..w {
            num += q * (a.get(x, y, 0) - b.get(x, y, 0)).powi(2);
            den += q;
        }
    }
    10.0 * (1.0 / (num / den)).log10()
}

/// SSIM map by explicit 11x11 windowed moments at every pixel.
pub fn ssim_map_oracle(a: &ErpImage, b: &ErpImage) -> Vec<f64> {
    let (w, h) = (a.width(), a.height());
    let g = gaussian_taps(5, 1.5);
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for dy in -5isize..=5 {
                for dx in -5isize..=5 {
                    let wgt = g[(dy + 5) as usize] * g[(dx + 5) as usize];
                    let (sx, sy) = (wrap(x as isize + dx, w), clamp(y as isize + dy, h));
                    let (p, q) = (a.get(sx, sy, 0), b.get(sx, sy, 0));
                    mx += wgt * p;
                    my += wgt * q;
                    sxx += wgt * p * p;
                    syy += wgt * q * q;
                    sxy += wgt * p * q;
                }
            }
            let vx = sxx - mx * mx;
            let vy = syy - my * my;
            let cxy = sxy - mx * my;
            out.push(((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2)));
        }
    }
    out
}

pub fn ssim_oracle(a: &ErpImage, b: &ErpImage) -> f64 {
    let m = ssim_map_oracle(a, b);
    m.iter().sum::<f64>() / m.len() as f64
}

pub fn ws_ssim_oracle(a: &ErpImage, b: &ErpImage) -> f64 {
    let m = ssim_map_oracle(a, b);
    let (w, h) = (a.width(), a.height());
    let (mut num, mut den) = (0.0, 0.0);
    for y in 0..h {
        let q = erp_weight(y, h);
        for x in 0..w {
            num += q * m[y * w + x];
            den += q;
        }
    }
    num / den
}

/// Smooth periodic-in-x value noise on a `cols x rows` lattice, sampled at
/// pixel `(x, y)` of a `w x h` raster with smoothstep interpolation.
fn value_noise(lattice: &[f64], cols: usize, rows: usize, w: usize, h: usize) -> Vec<f64> {
    let smooth = |t: f64| t * t * (3.0 - 2.0 * t);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let fy = (y as f64 + 0.5) / h as f64 * rows as f64 - 0.5;
        let y0 = fy.floor() as isize;
        let ty = smooth(fy - y0 as f64);
        let (r0, r1) = (clamp(y0, rows), clamp(y0 + 1, rows));
        for x in 0..w {
            let fx = (x as f64 + 0.5) / w as f64 * cols as f64 - 0.5;
            let x0 = fx.floor() as isize;
            let tx = smooth(fx - x0 as f64);
            let (c0, c1) = (wrap(x0, cols), wrap(x0 + 1, cols));
            let top = lattice[r0 * cols + c0] * (1.0 - tx) + lattice[r0 * cols + c1] * tx;
            let bottom = lattice[r1 * cols + c0] * (1.0 - tx) + lattice[r1 * cols + c1] * tx;
            out.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    out
}

/// A deterministic stand-in for an outdoor panorama: sky-to-ground gradient,
/// multi-octave texture with a roughly 1/f spectrum and a scatter of
/// hard-edged objects.
pub fn synthetic_panorama(seed: u64, w: usize, h: usize) -> ErpImage {
    let mut rng = rng(seed);
    let mut luma = vec![0.0; w * h];
    let mut amplitude = 0.35;
    for octave in 0..8 {
        let (cols, rows) = (4 << octave, 2 << octave);
        let lattice: Vec<f64> = (0..cols * rows).map(|_| rng.random_range(-1.0..1.0)).collect();
        for (l, n) in luma.iter_mut().zip(value_noise(&lattice, cols, rows, w, h)) {
            *l += amplitude * n;
        }
        amplitude *= 0.55;
    }
    let horizon = rng.random_range(0.45..0.6);
    let sky = [rng.random_range(0.5..0.8), rng.random_range(0.6..0.85), rng.random_range(0.75..0.95)];
    let ground = [rng.random_range(0.2..0.5), rng.random_range(0.2..0.45), rng.random_range(0.1..0.3)];

    let mut samples = vec![0.0; w * h * 3];
    for y in 0..h {
        let v = y as f64 / h as f64;
        let t = 1.0 / (1.0 + (-(v - horizon) * 40.0).exp());
        for x in 0..w {
            let n = luma[y * w + x];
            for c in 0..3 {
                let base = sky[c] * (1.0 - t) + ground[c] * t;
                samples[(y * w + x) * 3 + c] = base + n * (0.6 + 0.2 * c as f64 / 2.0);
            }
        }
    }

    for _ in 0..40 {
        let color = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        let cx = rng.random_range(0.0..w as f64);
        let cy = rng.random_range(0.15 * h as f64..0.85 * h as f64);
        let rx = rng.random_range(0.01..0.08) * w as f64;
        let ry = rng.random_range(0.02..0.12) * h as f64;
        let ellipse = rng.random_bool(0.5);
        let stripes = rng.random_range(2.0..9.0);
        for y in (cy - ry).max(0.0) as usize..((cy + ry) as usize).min(h) {
            for xi in (cx - rx) as isize..=(cx + rx) as isize {
                let x = wrap(xi, w);
                let (dx, dy) = ((xi as f64 + 0.5 - cx) / rx, (y as f64 + 0.5 - cy) / ry);
                let inside = if ellipse { dx * dx + dy * dy <= 1.0 } else { dx.abs() <= 1.0 && dy.abs() <= 1.0 };
                if inside {
                    let shade = 0.85 + 0.15 * ((dy * stripes * PI).sin());
                    for c in 0..3 {
                        samples[(y * w + x) * 3 + c] = color[c] * shade;
                    }
                }
            }
        }
    }

    let samples = samples.into_iter().map(|s: f64| s.clamp(0.0, 1.0)).collect();
    ErpImage::new(w, h, 3, samples).unwrap()
}

/// Writes `count` synthetic panoramas as 8-bit PNGs named `pano_XX.png`.
pub fn write_corpus(dir: &Path, count: usize, w: usize, h: usize) {
    for i in 0..count {
        let img = synthetic_panorama(1000 + i as u64, w, h);
        save_image(&img, dir.join(format!("pano_{i:02}.png")), BitDepth::Eight).unwrap();
    }
}
