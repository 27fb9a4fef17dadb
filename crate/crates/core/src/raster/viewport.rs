use super::resample::sample_plane;
use super::ErpImage;
use crate::geometry::{viewport_sample_grid, ViewportSpec};

/// Rectilinear crop of the sphere, bicubically sampled from `image`.
///
/// The result is a planar image; it carries no ERP semantics.
pub fn render_viewport(image: &ErpImage, spec: &ViewportSpec) -> ErpImage {
    let grid = viewport_sample_grid(spec, image.width(), image.height());
    let (w, h) = (image.width(), image.height());
    let planes = image
        .planes()
        .iter()
        .map(|plane| {
            grid.coords()
                .iter()
                .map(|&(u, v)| sample_plane(plane, w, h, u, v))
                .collect()
        })
        .collect();
    ErpImage::from_planes(grid.width(), grid.height(), planes)
}
