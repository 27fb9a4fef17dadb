//! Quality math for omnidirectional (equirectangular) super-resolution.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: ERP row weights, pixel/direction mapping, viewport grids.
//! * [`raster`]: the image type, PNG/PNM I/O, blur, decimation, NN and bicubic
//!   upsampling, rectilinear viewport rendering.
//! * [`metrics`]: PSNR, SSIM, WS-PSNR and WS-SSIM.
//! * [`losses`]: the spherically weighted SSIM loss and its analytic gradient,
//!   feature and adversarial losses, the combined objective.
//! * [`harness`]: dataset scanning, baseline pipelines, reports and crops.
//!
//! Horizontal borders wrap (longitude is periodic) and vertical borders clamp
//! everywhere a filter reaches outside the raster.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod losses;
pub mod metrics;
pub mod raster;

pub use error::{Error, Result};
pub use geometry::{pixel_to_direction, row_weights, viewport_sample_grid, ViewportSpec, WeightMap};
pub use metrics::{psnr, ssim, ssim_map, ws_psnr, ws_ssim, SsimMap, SsimParams};
pub use raster::{BitDepth, ErpImage};
