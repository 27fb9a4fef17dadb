use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageError, ImageFormat, ImageReader, Luma, Rgb};

use super::ErpImage;
use crate::error::{Error, Result};

/// Integer sample depth used when writing images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_code(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            b => Err(Error::invalid(format!("bit depth {b}; expected 8 or 16"))),
        }
    }
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "png" => Ok(ImageFormat::Png),
        "ppm" | "pgm" | "pnm" => Ok(ImageFormat::Pnm),
        _ => Err(Error::Format(format!(
            "{}: expected a .png, .ppm or .pgm file",
            path.display()
        ))),
    }
}

/// True if the extension is one [`load_image`] understands.
pub(crate) fn is_supported_path(path: &Path) -> bool {
    format_for(path).is_ok()
}

fn map_image_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(e) => Error::io(path, e),
        other => Error::Format(format!("{}: {other}", path.display())),
    }
}

/// Reads an 8- or 16-bit PNG or binary PPM/PGM. Integer codes are divided by
/// the type maximum. An alpha channel, if present, is dropped.
pub fn load_image(path: impl AsRef<Path>) -> Result<ErpImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = ImageReader::new(BufReader::new(file));
    let format = match image::ImageFormat::from_path(path) {
        Ok(f @ (ImageFormat::Png | ImageFormat::Pnm)) => f,
        _ => {
            reader = reader.with_guessed_format().map_err(|e| Error::io(path, e))?;
            match reader.format() {
                Some(f @ (ImageFormat::Png | ImageFormat::Pnm)) => f,
                _ => return Err(Error::Format(format!("{}: not a PNG or PNM file", path.display()))),
            }
        }
    };
    reader.set_format(format);
    let decoded = reader.decode().map_err(|e| map_image_error(path, e))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);

    let (channels, samples): (usize, Vec<f64>) = match decoded {
        DynamicImage::ImageLuma8(b) => (1, scale8(b.as_raw())),
        DynamicImage::ImageRgb8(b) => (3, scale8(b.as_raw())),
        DynamicImage::ImageLuma16(b) => (1, scale16(b.as_raw())),
        DynamicImage::ImageRgb16(b) => (3, scale16(b.as_raw())),
        DynamicImage::ImageLumaA8(_) => (1, scale8(decoded.to_luma8().as_raw())),
        DynamicImage::ImageRgba8(_) => (3, scale8(decoded.to_rgb8().as_raw())),
        DynamicImage::ImageLumaA16(_) => (1, scale16(decoded.to_luma16().as_raw())),
        DynamicImage::ImageRgba16(_) => (3, scale16(decoded.to_rgb16().as_raw())),
        other => {
            return Err(Error::Format(format!(
                "{}: unsupported sample type {:?}",
                path.display(),
                other.color()
            )))
        }
    };
    ErpImage::new(w, h, channels, samples)
}

fn scale8(raw: &[u8]) -> Vec<f64> {
    raw.iter().map(|&c| f64::from(c) / 255.0).collect()
}

fn scale16(raw: &[u16]) -> Vec<f64> {
    raw.iter().map(|&c| f64::from(c) / 65535.0).collect()
}

/// Quantizes with round-half-up: `floor(sample * max + 0.5)`.
pub(crate) fn quantize(sample: f64, depth: BitDepth) -> u16 {
    let max = depth.max_code();
    (sample * max + 0.5).floor().clamp(0.0, max) as u16
}

/// Writes PNG or binary PNM, chosen by the file extension.
pub fn save_image(image: &ErpImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    let format = format_for(path)?;
    let (w, h) = (image.width() as u32, image.height() as u32);
    let dynamic = match (depth, image.channels()) {
        (BitDepth::Eight, c) => {
            let raw: Vec<u8> = image.samples().iter().map(|&s| quantize(s, depth) as u8).collect();
            if c == 1 {
                DynamicImage::ImageLuma8(ImageBuffer::<Luma<u8>, _>::from_raw(w, h, raw).unwrap())
            } else {
                DynamicImage::ImageRgb8(ImageBuffer::<Rgb<u8>, _>::from_raw(w, h, raw).unwrap())
            }
        }
        (BitDepth::Sixteen, c) => {
            let raw: Vec<u16> = image.samples().iter().map(|&s| quantize(s, depth)).collect();
            if c == 1 {
                DynamicImage::ImageLuma16(ImageBuffer::<Luma<u16>, _>::from_raw(w, h, raw).unwrap())
            } else {
                DynamicImage::ImageRgb16(ImageBuffer::<Rgb<u16>, _>::from_raw(w, h, raw).unwrap())
            }
        }
    };
    dynamic
        .save_with_format(path, format)
        .map_err(|e| map_image_error(path, e))
}
