use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ViewportSpec;
use crate::raster::{render_viewport, save_image, BitDepth, ErpImage};

/// One entry of a `views.json` file, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CropView {
    pub yaw_deg: f64,
    pub pitch_deg: f64,
    pub fov_deg: f64,
    pub width: usize,
    pub height: usize,
}

impl CropView {
    pub fn to_spec(&self) -> Result<ViewportSpec> {
        ViewportSpec::from_degrees(self.yaw_deg, self.pitch_deg, self.fov_deg, self.width, self.height)
    }

    /// Parses a JSON list of views.
    pub fn load_list(path: impl AsRef<Path>) -> Result<Vec<CropView>> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

fn degrees_label(radians: f64) -> String {
    // Six decimals absorb the degree/radian round trip; trailing zeros dropped.
    let text = format!("{:.6}", radians.to_degrees());
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".into()
    } else {
        text.into()
    }
}

/// `<id>_yaw<deg>_pitch<deg>.png`
pub fn crop_file_name(id: &str, spec: &ViewportSpec) -> String {
    format!("{id}_yaw{}_pitch{}.png", degrees_label(spec.yaw()), degrees_label(spec.pitch()))
}

/// Renders every view of every image as an 8-bit PNG in `outdir`.
pub fn export_crops(images: &[(String, ErpImage)], specs: &[ViewportSpec], outdir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let outdir = outdir.as_ref();
    std::fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let mut written = Vec::with_capacity(images.len() * specs.len());
    for (id, image) in images {
        for spec in specs {
            let path = outdir.join(crop_file_name(id, spec));
            save_image(&render_viewport(image, spec), &path, BitDepth::Eight)?;
            written.push(path);
        }
    }
    Ok(written)
}
