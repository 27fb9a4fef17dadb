use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::pipeline::MetricPlane;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["id", "psnr_db", "ssim", "ws_psnr_db", "ws_ssim"];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub id: String,
    /// Infinite when reference and reconstruction are identical.
    pub psnr_db: f64,
    pub ssim: f64,
    pub ws_psnr_db: f64,
    pub ws_ssim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub factor: usize,
    pub method: String,
    pub plane: MetricPlane,
}

/// One statistic per metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub psnr_db: f64,
    pub ssim: f64,
    pub ws_psnr_db: f64,
    pub ws_ssim: f64,
}

/// Per-image scores with their mean and sample standard deviation (n - 1).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    meta: ReportMeta,
    rows: Vec<MetricRow>,
    mean: Aggregate,
    std: Aggregate,
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation. Zero for fewer than two values or when all
/// values are equal (including all infinite); NaN if infinities are mixed
/// with other values.
fn std_of(values: &[f64]) -> f64 {
    if values.len() < 2 || values.iter().all(|v| *v == values[0]) {
        return 0.0;
    }
    if values.iter().any(|v| !v.is_finite()) {
        return f64::NAN;
    }
    let m = mean_of(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

impl MetricReport {
    pub fn new(meta: ReportMeta, rows: Vec<MetricRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("a report needs at least one row"));
        }
        let column = |f: fn(&MetricRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
        let cols = [
            column(|r| r.psnr_db),
            column(|r| r.ssim),
            column(|r| r.ws_psnr_db),
            column(|r| r.ws_ssim),
        ];
        let agg = |f: fn(&[f64]) -> f64| Aggregate {
            psnr_db: f(&cols[0]),
            ssim: f(&cols[1]),
            ws_psnr_db: f(&cols[2]),
            ws_ssim: f(&cols[3]),
        };
        let mean = agg(mean_of);
        let std = agg(std_of);
        Ok(Self { meta, rows, mean, std })
    }

    pub fn meta(&self) -> &ReportMeta {
        &self.meta
    }

    pub fn rows(&self) -> &[MetricRow] {
        &self.rows
    }

    pub fn mean(&self) -> &Aggregate {
        &self.mean
    }

    pub fn std(&self) -> &Aggregate {
        &self.std
    }

    /// CSV text: a `#` metadata line, the header, one row per image, then
    /// `mean` and `std` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        writeln!(
            buf,
            "# factor={} method={} plane={} std=sample(n-1)",
            self.meta.factor,
            self.meta.method,
            self.meta.plane.name()
        )
        .expect("write to Vec");
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let csv_err = |e: csv::Error| Error::invalid(format!("csv: {e}"));
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            let mut record = |label: &str, a: [f64; 4]| {
                let fields = [
                    label.to_string(),
                    format_sig17(a[0]),
                    format_sig17(a[1]),
                    format_sig17(a[2]),
                    format_sig17(a[3]),
                ];
                w.write_record(&fields).map_err(csv_err)
            };
            for r in &self.rows {
                record(&r.id, [r.psnr_db, r.ssim, r.ws_psnr_db, r.ws_ssim])?;
            }
            for (label, a) in [("mean", self.mean), ("std", self.std)] {
                record(label, [a.psnr_db, a.ssim, a.ws_psnr_db, a.ws_ssim])?;
            }
            w.flush().map_err(|e| Error::io("<buffer>", e))?;
        }
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Decimal text with 17 significant digits; `inf`, `-inf`, `nan` otherwise.
pub fn format_sig17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

/// Writes a single report as CSV or as a markdown table.
pub fn emit_report(report: &MetricReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => report.to_csv()?,
        ReportFormat::Markdown => render_markdown(std::slice::from_ref(report)),
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_meta(line: &str) -> Result<ReportMeta> {
    let mut factor = None;
    let mut method = None;
    let mut plane = None;
    for field in line.trim_start_matches('#').split_whitespace() {
        match field.split_once('=') {
            Some(("factor", v)) => factor = v.parse().ok(),
            Some(("method", v)) => method = Some(v.to_string()),
            Some(("plane", v)) => plane = Some(MetricPlane::parse(v)?),
            _ => {}
        }
    }
    match (factor, method, plane) {
        (Some(factor), Some(method), Some(plane)) => Ok(ReportMeta { factor, method, plane }),
        _ => Err(Error::Format(format!("report metadata line malformed: {line:?}"))),
    }
}

/// Reads a report written by [`MetricReport::to_csv`]. Aggregates are
/// recomputed from the rows.
pub fn read_csv(path: impl AsRef<Path>) -> Result<MetricReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let meta_line = text
        .lines()
        .next()
        .filter(|l| l.starts_with('#'))
        .ok_or_else(|| Error::Format(format!("{}: missing metadata line", path.display())))?;
    let meta = parse_meta(meta_line)?;

    let bad = |msg: String| Error::Format(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let records = reader
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| bad(e.to_string()))?;
    let n = records.len();
    if n < 3 || &records[n - 2][0] != "mean" || &records[n - 1][0] != "std" {
        return Err(bad("expected data rows followed by mean and std rows".into()));
    }
    let mut rows = Vec::with_capacity(n - 2);
    for record in &records[..n - 2] {
        let id = &record[0];
        let num = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("bad number in row {id:?}")))
        };
        rows.push(MetricRow {
            id: id.to_string(),
            psnr_db: num(1)?,
            ssim: num(2)?,
            ws_psnr_db: num(3)?,
            ws_ssim: num(4)?,
        });
    }
    MetricReport::new(meta, rows)
}

fn cell(mean: f64, std: f64) -> String {
    let f = |v: f64| {
        if v.is_infinite() {
            if v > 0.0 { "∞".to_string() } else { "-∞".to_string() }
        } else if v.is_nan() {
            "n/a".to_string()
        } else {
            format!("{v:.2}")
        }
    };
    format!("{} ± {}", f(mean), f(std))
}

/// Markdown tables, one per factor, one row per method. Columns follow the
/// usual SR table layout: SSIM, PSNR, WS-SSIM, WS-PSNR.
pub fn render_markdown(reports: &[MetricReport]) -> String {
    let mut by_factor: BTreeMap<usize, Vec<&MetricReport>> = BTreeMap::new();
    for r in reports {
        by_factor.entry(r.meta.factor).or_default().push(r);
    }
    let mut out = String::new();
    for (factor, group) in by_factor {
        let planes: Vec<&str> = {
            let mut p: Vec<&str> = group.iter().map(|r| r.meta.plane.name()).collect();
            p.dedup();
            p
        };
        let _ = writeln!(
            out,
            "**r = {factor}** (mean ± sample std, n-1; plane: {}; {} images)\n",
            planes.join(", "),
            group[0].rows.len()
        );
        let _ = writeln!(out, "| Method | SSIM | PSNR | WS-SSIM | WS-PSNR |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for r in group {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.meta.method,
                cell(r.mean.ssim, r.std.ssim),
                cell(r.mean.psnr_db, r.std.psnr_db),
                cell(r.mean.ws_ssim, r.std.ws_ssim),
                cell(r.mean.ws_psnr_db, r.std.ws_psnr_db),
            );
        }
        out.push('\n');
    }
    out
}
