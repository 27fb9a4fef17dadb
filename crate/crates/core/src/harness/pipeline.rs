use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::manifest::{Manifest, ManifestEntry};
use super::report::{MetricReport, MetricRow, ReportMeta};
use crate::error::{Error, Result};
use crate::geometry::row_weights;
use crate::metrics::{psnr, ssim_map, ws_psnr, SsimParams};
use crate::raster::io::is_supported_path;
use crate::raster::{degrade_with_sigma, load_image, upsample_bicubic, upsample_nn, ErpImage};

/// How the high-resolution image is reconstructed from its degraded version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Nn,
    Bicubic,
    /// Reconstructions produced elsewhere, one file per manifest id.
    External(PathBuf),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Nn => "nn",
            Method::Bicubic => "bicubic",
            Method::External(_) => "external",
        }
    }
}

/// Plane the metrics are computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricPlane {
    /// BT.601 luma.
    #[default]
    Luma,
    /// Each metric per color channel, then averaged.
    RgbMean,
}

impl MetricPlane {
    pub fn name(self) -> &'static str {
        match self {
            MetricPlane::Luma => "luma",
            MetricPlane::RgbMean => "rgb-mean",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "luma" => Ok(MetricPlane::Luma),
            "rgb-mean" => Ok(MetricPlane::RgbMean),
            other => Err(Error::invalid(format!("unknown metric plane {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Blur width for degradation; `None` uses `r / 2`.
    pub sigma: Option<f64>,
    pub ssim: SsimParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImagePair {
    pub id: String,
    pub reference: ErpImage,
    pub reconstructed: ErpImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueKind {
    /// Dimensions not divisible by the factor.
    Skipped,
    /// Load error, or a missing or mis-sized external reconstruction.
    Failed,
}

/// An image that did not make it into the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub id: String,
    pub kind: IssueKind,
    pub reason: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            IssueKind::Skipped => "skipped",
            IssueKind::Failed => "failed",
        };
        write!(f, "{} {}: {}", kind, self.id, self.reason)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOutput {
    pub pairs: Vec<ImagePair>,
    pub issues: Vec<Issue>,
}

fn find_external(dir: &Path, entry: &ManifestEntry) -> Option<PathBuf> {
    let same_name = entry.path.file_name().map(|n| dir.join(n));
    if let Some(p) = same_name.filter(|p| p.is_file()) {
        return Some(p);
    }
    ["png", "ppm", "pgm", "pnm"]
        .iter()
        .map(|ext| dir.join(format!("{}.{ext}", entry.id)))
        .find(|p| p.is_file() && is_supported_path(p))
}

/// Loads one reference image and produces its reconstruction.
pub fn reconstruct(
    entry: &ManifestEntry,
    factor: usize,
    method: &Method,
    options: &PipelineOptions,
) -> std::result::Result<ImagePair, Issue> {
    let issue = |kind, reason: String| Issue {
        id: entry.id.clone(),
        kind,
        reason,
    };
    if factor == 0 || !entry.width.is_multiple_of(factor) || !entry.height.is_multiple_of(factor) {
        return Err(issue(
            IssueKind::Skipped,
            format!("{}x{} not divisible by {factor}", entry.width, entry.height),
        ));
    }
    let reference = load_image(&entry.path).map_err(|e| issue(IssueKind::Failed, e.to_string()))?;
    let reconstructed = match method {
        Method::Nn | Method::Bicubic => {
            let low = degrade_with_sigma(&reference, factor, options.sigma)
                .map_err(|e| issue(IssueKind::Failed, e.to_string()))?;
            let up = if *method == Method::Nn {
                upsample_nn(&low, factor)
            } else {
                upsample_bicubic(&low, factor)
            };
            up.map_err(|e| issue(IssueKind::Failed, e.to_string()))?
        }
        Method::External(dir) => {
            let path = find_external(dir, entry).ok_or_else(|| {
                issue(
                    IssueKind::Failed,
                    format!("no reconstruction for {:?} in {}", entry.id, dir.display()),
                )
            })?;
            let img = load_image(&path).map_err(|e| issue(IssueKind::Failed, e.to_string()))?;
            if !img.same_shape(&reference) {
                return Err(issue(
                    IssueKind::Failed,
                    format!(
                        "reconstruction is {}x{}x{}, reference is {}x{}x{}",
                        img.width(),
                        img.height(),
                        img.channels(),
                        reference.width(),
                        reference.height(),
                        reference.channels()
                    ),
                ));
            }
            img
        }
    };
    Ok(ImagePair {
        id: entry.id.clone(),
        reference,
        reconstructed,
    })
}

fn log_issue(issue: &Issue) {
    match issue.kind {
        IssueKind::Skipped => log::warn!("{issue}"),
        IssueKind::Failed => log::error!("{issue}"),
    }
}

/// Reconstructs every manifest image. Pairs keep manifest order.
pub fn run_pipeline(manifest: &Manifest, factor: usize, method: &Method, options: &PipelineOptions) -> PipelineOutput {
    let results: Vec<_> = manifest
        .entries()
        .par_iter()
        .map(|entry| reconstruct(entry, factor, method, options))
        .collect();
    let mut out = PipelineOutput::default();
    for result in results {
        match result {
            Ok(pair) => out.pairs.push(pair),
            Err(issue) => {
                log_issue(&issue);
                out.issues.push(issue);
            }
        }
    }
    out
}

fn psnr_or_inf(value: Result<f64>) -> Result<f64> {
    match value {
        Err(Error::Degenerate) => Ok(f64::INFINITY),
        other => other,
    }
}

/// All four metrics for one pair. Identical images score infinite PSNR.
pub fn score_pair(
    id: &str,
    reference: &ErpImage,
    reconstructed: &ErpImage,
    plane: MetricPlane,
    params: &SsimParams,
) -> Result<MetricRow> {
    if !reference.same_shape(reconstructed) {
        return Err(Error::invalid(format!("{id}: reference and reconstruction differ in shape")));
    }
    let weights = row_weights(reference.height())?;
    let planes: Vec<(ErpImage, ErpImage)> = match plane {
        MetricPlane::Luma => vec![(reference.to_luma(), reconstructed.to_luma())],
        MetricPlane::RgbMean => (0..reference.channels())
            .map(|c| (reference.channel(c), reconstructed.channel(c)))
            .collect(),
    };
    let mut row = MetricRow {
        id: id.to_string(),
        psnr_db: 0.0,
        ssim: 0.0,
        ws_psnr_db: 0.0,
        ws_ssim: 0.0,
    };
    for (a, b) in &planes {
        let map = ssim_map(a, b, params)?;
        row.psnr_db += psnr_or_inf(psnr(a, b, 1.0))?;
        row.ws_psnr_db += psnr_or_inf(ws_psnr(a, b, &weights, 1.0))?;
        row.ssim += map.mean();
        row.ws_ssim += map.weighted_mean(&weights)?;
    }
    if planes.len() > 1 {
        let n = planes.len() as f64;
        row.psnr_db /= n;
        row.ssim /= n;
        row.ws_psnr_db /= n;
        row.ws_ssim /= n;
    }
    Ok(row)
}

/// Scores reconstructed pairs into a report.
pub fn evaluate(pairs: &[ImagePair], plane: MetricPlane, meta: ReportMeta, params: &SsimParams) -> Result<MetricReport> {
    if pairs.is_empty() {
        return Err(Error::invalid("nothing to evaluate"));
    }
    let rows = pairs
        .par_iter()
        .map(|p| score_pair(&p.id, &p.reference, &p.reconstructed, plane, params))
        .collect::<Result<Vec<_>>>()?;
    MetricReport::new(meta, rows)
}

/// Outcome of [`evaluate_manifest`].
#[derive(Debug, Clone)]
pub struct EvaluationRun {
    /// `None` when no image could be scored.
    pub report: Option<MetricReport>,
    pub issues: Vec<Issue>,
}

impl EvaluationRun {
    /// True when every manifest image was scored.
    pub fn complete(&self) -> bool {
        self.report.is_some() && self.issues.is_empty()
    }
}

/// Reconstruct and score image by image, holding at most one pair per worker
/// in memory. Equivalent to [`run_pipeline`] followed by [`evaluate`].
pub fn evaluate_manifest(
    manifest: &Manifest,
    factor: usize,
    method: &Method,
    plane: MetricPlane,
    options: &PipelineOptions,
) -> EvaluationRun {
    let results: Vec<std::result::Result<MetricRow, Issue>> = manifest
        .entries()
        .par_iter()
        .map(|entry| {
            let pair = reconstruct(entry, factor, method, options)?;
            score_pair(&pair.id, &pair.reference, &pair.reconstructed, plane, &options.ssim).map_err(|e| Issue {
                id: entry.id.clone(),
                kind: IssueKind::Failed,
                reason: e.to_string(),
            })
        })
        .collect();
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for result in results {
        match result {
            Ok(row) => rows.push(row),
            Err(issue) => {
                log_issue(&issue);
                issues.push(issue);
            }
        }
    }
    let meta = ReportMeta {
        factor,
        method: method.name().to_string(),
        plane,
    };
    let report = if rows.is_empty() {
        None
    } else {
        Some(MetricReport::new(meta, rows).expect("rows are non-empty"))
    };
    EvaluationRun { report, issues }
}
