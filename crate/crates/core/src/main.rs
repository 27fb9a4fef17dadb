use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use odisr::harness::{
    evaluate_manifest, export_crops, read_csv, render_markdown, CropView, Manifest, MetricPlane, Method,
    PipelineOptions, ReportFormat,
};
use odisr::losses::{d_360ss, grad_360ss};
use odisr::raster::{degrade_with_sigma, load_image, render_viewport, save_image, upsample_bicubic, upsample_nn};
use odisr::{row_weights, BitDepth, Error, Result, SsimParams, ViewportSpec};

#[derive(Parser)]
#[command(name = "odisr", version, about = "Spherical quality metrics and SR benchmarking for equirectangular images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Upsampler {
    Nn,
    Bicubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMethod {
    Nn,
    Bicubic,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum Plane {
    Luma,
    RgbMean,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write the spherical row weights for a raster height, one per line.
    Weights {
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian blur and decimate images by a factor.
    Degrade {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        factor: usize,
        /// Blur sigma; defaults to factor / 2.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        bit_depth: u32,
    },
    /// Upsample images with nearest-neighbour or bicubic interpolation.
    Upsample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Upsampler,
        #[arg(long)]
        factor: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        bit_depth: u32,
    },
    /// Render a rectilinear viewport of one image.
    Viewport {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        yaw: f64,
        #[arg(long, allow_hyphen_values = true)]
        pitch: f64,
        #[arg(long)]
        fov: f64,
        /// Output size as WIDTHxHEIGHT.
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the weighted SSIM similarity and 360-SS loss of one pair.
    Loss360 {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        /// Also write the gradient with respect to `dist` as a 16-bit PNG
        /// centred on 0.5.
        #[arg(long)]
        grad_out: Option<PathBuf>,
    },
    /// Degrade, reconstruct and score a directory of images.
    Evaluate {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long, value_enum)]
        method: EvalMethod,
        #[arg(long)]
        external_dir: Option<PathBuf>,
        #[arg(long)]
        factor: usize,
        #[arg(long, value_enum, default_value = "luma")]
        plane: Plane,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Render one or more CSV reports as tables.
    Report {
        #[arg(long = "in", required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export rectilinear crops of every image for each view in a JSON list.
    Crops {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        views: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WIDTHxHEIGHT")?;
    let w = w.parse().map_err(|_| format!("bad width {w:?}"))?;
    let h = h.parse().map_err(|_| format!("bad height {h:?}"))?;
    Ok((w, h))
}

fn output_path(outdir: &Path, id: &str) -> PathBuf {
    outdir.join(format!("{id}.png"))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Weights { height, out } => {
            let weights = row_weights(height)?;
            let mut text = String::new();
            for w in weights.weights() {
                text.push_str(&odisr::harness::format_sig17(*w));
                text.push('\n');
            }
            std::fs::write(&out, text).map_err(|e| Error::Io { path: out, source: e })?;
        }
        Command::Degrade {
            input,
            factor,
            sigma,
            out,
            bit_depth,
        } => {
            let depth = BitDepth::from_bits(bit_depth)?;
            let manifest = Manifest::from_path(&input)?;
            create_dir(&out)?;
            for entry in manifest.entries() {
                let low = degrade_with_sigma(&load_image(&entry.path)?, factor, sigma)?;
                save_image(&low, output_path(&out, &entry.id), depth)?;
            }
        }
        Command::Upsample {
            input,
            method,
            factor,
            out,
            bit_depth,
        } => {
            let depth = BitDepth::from_bits(bit_depth)?;
            let manifest = Manifest::from_path(&input)?;
            create_dir(&out)?;
            for entry in manifest.entries() {
                let img = load_image(&entry.path)?;
                let up = match method {
                    Upsampler::Nn => upsample_nn(&img, factor)?,
                    Upsampler::Bicubic => upsample_bicubic(&img, factor)?,
                };
                save_image(&up, output_path(&out, &entry.id), depth)?;
            }
        }
        Command::Viewport {
            input,
            yaw,
            pitch,
            fov,
            size,
            out,
        } => {
            let spec = ViewportSpec::from_degrees(yaw, pitch, fov, size.0, size.1)?;
            let view = render_viewport(&load_image(&input)?, &spec);
            save_image(&view, &out, BitDepth::Eight)?;
        }
        Command::Loss360 {
            reference,
            dist,
            grad_out,
        } => {
            let reference = load_image(&reference)?.to_luma();
            let dist = load_image(&dist)?.to_luma();
            let params = SsimParams::default();
            let d = d_360ss(&reference, &dist, &params)?;
            println!("d_360ss {}", odisr::harness::format_sig17(d));
            println!("loss {}", odisr::harness::format_sig17(1.0 - d));
            if let Some(path) = grad_out {
                let grad = grad_360ss(&reference, &dist, &params, &row_weights(reference.height())?)?;
                println!("grad_max_abs {}", odisr::harness::format_sig17(grad.max_abs()));
                save_image(&grad.to_visual(), &path, BitDepth::Sixteen)?;
            }
        }
        Command::Evaluate {
            reference,
            method,
            external_dir,
            factor,
            plane,
            sigma,
            out,
            jobs,
        } => {
            let method = match (method, external_dir) {
                (EvalMethod::Nn, _) => Method::Nn,
                (EvalMethod::Bicubic, _) => Method::Bicubic,
                (EvalMethod::External, Some(dir)) => Method::External(dir),
                (EvalMethod::External, None) => {
                    return Err(Error::InvalidArgument("--method external needs --external-dir".into()))
                }
            };
            let plane = match plane {
                Plane::Luma => MetricPlane::Luma,
                Plane::RgbMean => MetricPlane::RgbMean,
            };
            let manifest = odisr::harness::scan_dataset(&reference)?;
            let options = PipelineOptions {
                sigma,
                ..PipelineOptions::default()
            };
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                pool = pool.num_threads(n);
            }
            let pool = pool
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            let run = pool.install(|| evaluate_manifest(&manifest, factor, &method, plane, &options));
            if let Some(report) = &run.report {
                let csv = report.to_csv()?;
                std::fs::write(&out, csv).map_err(|e| Error::Io {
                    path: out.clone(),
                    source: e,
                })?;
                let m = report.mean();
                println!(
                    "{} r={} n={}: psnr {:.2} ssim {:.4} ws-psnr {:.2} ws-ssim {:.4}",
                    method.name(),
                    factor,
                    report.rows().len(),
                    m.psnr_db,
                    m.ssim,
                    m.ws_psnr_db,
                    m.ws_ssim
                );
            }
            for issue in &run.issues {
                eprintln!("{issue}");
            }
            if !run.complete() {
                eprintln!(
                    "{} of {} images were not scored",
                    run.issues.len(),
                    manifest.len()
                );
                return Ok(ExitCode::from(2));
            }
        }
        Command::Report { input, format, out } => {
            let reports = input.iter().map(read_csv).collect::<Result<Vec<_>>>()?;
            let text = match format {
                Format::Md => render_markdown(&reports),
                Format::Csv => {
                    if reports.len() != 1 {
                        return Err(Error::InvalidArgument("csv output takes exactly one input".into()));
                    }
                    odisr::harness::emit_report(&reports[0], ReportFormat::Csv, &out)?;
                    return Ok(ExitCode::SUCCESS);
                }
            };
            std::fs::write(&out, text).map_err(|e| Error::Io { path: out, source: e })?;
        }
        Command::Crops { input, views, out } => {
            let specs = CropView::load_list(&views)?
                .iter()
                .map(CropView::to_spec)
                .collect::<Result<Vec<_>>>()?;
            let manifest = Manifest::from_path(&input)?;
            for entry in manifest.entries() {
                let image = load_image(&entry.path)?;
                export_crops(&[(entry.id.clone(), image)], &specs, &out)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::FAILURE
        }
    }
}
