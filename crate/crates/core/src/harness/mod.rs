//! Benchmark harness: scan a directory of ERP images, degrade and
//! reconstruct them, score every pair and write tables and crops.
//!
//! Work is spread over images with rayon; each image is processed
//! sequentially and results are kept in manifest order, so reports are
//! byte-identical for any worker count.

mod crops;
mod manifest;
mod pipeline;
mod report;

pub use crops::{crop_file_name, export_crops, CropView};
pub use manifest::{scan_dataset, Manifest, ManifestEntry};
pub use pipeline::{
    evaluate, evaluate_manifest, reconstruct, run_pipeline, score_pair, EvaluationRun, ImagePair, Issue,
    IssueKind, MetricPlane, Method, PipelineOptions, PipelineOutput,
};
pub use report::{
    emit_report, format_sig17, read_csv, render_markdown, Aggregate, MetricReport, MetricRow, ReportFormat,
    ReportMeta,
};
