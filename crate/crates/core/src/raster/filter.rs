//! Separable 1-D filtering of row-major planes under the ERP border policy:
//! columns wrap, rows clamp.
//!
//! Kernels have odd length `2r + 1` and are applied as correlations:
//! `out[i] = sum_k kernel[k] * src[border(i + k - r)]`.
//!
//! The forward passes accumulate `src[i] + sum_k kernel[k] * (src[..] - src[i])`,
//! which equals the above for kernels summing to one but maps a constant
//! window to itself exactly.

/// Horizontal pass with circular indexing.
pub(crate) fn rows_wrap(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    debug_assert_eq!(src.len(), width * height);
    let radius = (kernel.len() / 2) as isize;
    let w = width as isize;
    let taps: Vec<Vec<usize>> = (0..w)
        .map(|x| {
            (0..kernel.len() as isize)
                .map(|k| (x + k - radius).rem_euclid(w) as usize)
                .collect()
        })
        .collect();
    let mut out = vec![0.0; src.len()];
    for (row, dst) in src.chunks_exact(width).zip(out.chunks_exact_mut(width)) {
        for (x, (d, idx)) in dst.iter_mut().zip(&taps).enumerate() {
            let anchor = row[x];
            *d = anchor + idx.iter().zip(kernel).map(|(&i, &k)| k * (row[i] - anchor)).sum::<f64>();
        }
    }
    out
}

/// Vertical pass with edge-row replication.
pub(crate) fn cols_clamp(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    debug_assert_eq!(src.len(), width * height);
    let radius = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        let anchor = &src[y * width..(y + 1) * width];
        let dst = &mut out[y * width..(y + 1) * width];
        for (k, &kv) in kernel.iter().enumerate() {
            let sy = clamp_index(y as isize + k as isize - radius, height);
            let row = &src[sy * width..(sy + 1) * width];
            for ((d, s), a) in dst.iter_mut().zip(row).zip(anchor) {
                *d += kv * (s - a);
            }
        }
        for (d, a) in dst.iter_mut().zip(anchor) {
            *d += a;
        }
    }
    out
}

/// Transpose of [`rows_wrap`]: correlation with the mirrored kernel.
pub(crate) fn rows_wrap_adjoint(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let mirrored: Vec<f64> = kernel.iter().rev().copied().collect();
    rows_wrap(src, width, height, &mirrored)
}

/// Transpose of [`cols_clamp`]. Clamping folds several taps onto the edge
/// rows, so the transpose scatters rather than convolves.
pub(crate) fn cols_clamp_adjoint(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    debug_assert_eq!(src.len(), width * height);
    let radius = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for (k, &kv) in kernel.iter().enumerate() {
            let ty = clamp_index(y as isize + k as isize - radius, height);
            let dst = &mut out[ty * width..(ty + 1) * width];
            for (d, s) in dst.iter_mut().zip(row) {
                *d += kv * s;
            }
        }
    }
    out
}

/// Window filter: horizontal wrap pass followed by vertical clamp pass.
pub(crate) fn separable(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    cols_clamp(&rows_wrap(src, width, height, kernel), width, height, kernel)
}

/// Transpose of [`separable`].
pub(crate) fn separable_adjoint(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    rows_wrap_adjoint(
        &cols_clamp_adjoint(src, width, height, kernel),
        width,
        height,
        kernel,
    )
}

pub(crate) fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}
