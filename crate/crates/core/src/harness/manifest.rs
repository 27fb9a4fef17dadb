use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::io::is_supported_path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// File stem, unique within the manifest.
    pub id: String,
    pub path: PathBuf,
    pub width: usize,
    pub height: usize,
}

/// Images of a dataset directory in lexicographic file-name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A manifest for a single file, or [`scan_dataset`] for a directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.is_dir() {
            return scan_dataset(path);
        }
        let entry = probe(path)?;
        Ok(Self { entries: vec![entry] })
    }

    /// Drops entries for which `keep` is false.
    pub fn retain(&mut self, keep: impl FnMut(&ManifestEntry) -> bool) {
        self.entries.retain(keep);
    }
}

fn probe(path: &Path) -> Result<ManifestEntry> {
    if !is_supported_path(path) {
        return Err(Error::Format(format!("{}: not a PNG or PNM file", path.display())));
    }
    let (w, h) = image::image_dimensions(path).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other}", path.display())),
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(ManifestEntry {
        id,
        path: path.to_path_buf(),
        width: w as usize,
        height: h as usize,
    })
}

/// Lists every PNG/PPM/PGM in `dir`, sorted by file name. Files that cannot
/// be probed, or whose stem repeats an earlier one, are skipped with a warning.
pub fn scan_dataset(dir: impl AsRef<Path>) -> Result<Manifest> {
    let dir = dir.as_ref();
    let listing = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for item in listing {
        let item = item.map_err(|e| Error::io(dir, e))?;
        let path = item.path();
        if path.is_file() && is_supported_path(&path) {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let mut entries: Vec<ManifestEntry> = Vec::with_capacity(paths.len());
    for path in paths {
        match probe(&path) {
            Ok(entry) if entries.iter().any(|e| e.id == entry.id) => {
                log::warn!("skipping {}: duplicate id {:?}", path.display(), entry.id);
            }
            Ok(entry) => entries.push(entry),
            Err(err) => log::warn!("skipping unreadable image: {err}"),
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyManifest(dir.to_path_buf()));
    }
    Ok(Manifest { entries })
}
