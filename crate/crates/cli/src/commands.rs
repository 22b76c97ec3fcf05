//! Subcommand implementations.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use phasevib_core::export;
use phasevib_core::gabor::{self, GaborParams};
use phasevib_core::imaging;
use phasevib_core::magnify::{self, BandpassSpec};
use phasevib_core::modal::{self, DamageThresholds, ShapeConfig};
use phasevib_core::pme::{self, EstimateOptions};
use phasevib_core::synth::{BeamSceneConfig, GaussianSurfaceConfig};

use crate::config::{
    echo_config, parse_roi, OutputLock, PipelineConfig, PolarityArg, SpanAxisArg,
};
use crate::pipeline;
use crate::plot;

/// Common Gabor kernel flags; unset flags fall back to `--config` values,
/// then to the built-in defaults.
#[derive(Debug, Args, Serialize)]
pub struct GaborArgs {
    /// Carrier wavelength in pixels [default: 16].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Motion/kernel orientation in radians (0 = x, pi/2 = y) [default: 0].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Envelope standard deviation in pixels [default: lambda / 2].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Envelope aspect ratio [default: 1].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Carrier phase offset in radians [default: 0].
    #[arg(long)]
    pub psi: Option<f64>,
}

impl GaborArgs {
    /// Flags win over the config file, which wins over defaults.
    pub fn resolve(&self, cfg: Option<&PipelineConfig>) -> GaborParams {
        let base = cfg.cloned().unwrap_or_default();
        let lambda = self.lambda.unwrap_or(base.lambda);
        GaborParams {
            lambda,
            theta: self.theta.unwrap_or(base.theta),
            psi: self.psi.unwrap_or(base.psi),
            sigma: self.sigma.or(base.sigma).unwrap_or(lambda / 2.0),
            gamma: self.gamma.unwrap_or(base.gamma),
        }
    }
}

/// Loads the optional `--config` pipeline file.
fn load_pipeline_config(path: &Option<PathBuf>) -> Result<Option<PipelineConfig>> {
    path.as_ref().map(|p| PipelineConfig::load(p)).transpose()
}

fn resolve_input(flag: &Option<PathBuf>, cfg: Option<&PipelineConfig>) -> Result<PathBuf> {
    match (flag, cfg) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(c)) if !c.frames_dir.as_os_str().is_empty() => Ok(c.frames_dir.clone()),
        _ => bail!("--input is required (or frames_dir in --config)"),
    }
}

fn resolve_fps(flag: Option<f64>, cfg: Option<&PipelineConfig>) -> f64 {
    flag.unwrap_or_else(|| cfg.map_or(500.0, |c| c.frame_rate_hz))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
pub enum SynthKind {
    Gaussian,
    Beam,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scene to generate.
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    /// JSON config for the scene; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub fps: Option<f64>,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    /// Tip mass fraction for the damaged beam variant.
    #[arg(long)]
    pub tip_mass: Option<f64>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    match args.kind {
        SynthKind::Gaussian => {
            let mut cfg: GaussianSurfaceConfig = match &args.config {
                Some(p) => read_json(p)?,
                None => GaussianSurfaceConfig::default(),
            };
            if let Some(v) = args.fps {
                cfg.frame_rate_hz = v;
            }
            if let Some(v) = args.frames {
                cfg.frame_count = v;
            }
            if let Some(v) = args.width {
                cfg.width = v;
            }
            if let Some(v) = args.height {
                cfg.height = v;
            }
            if let Some(v) = args.noise_std {
                cfg.noise_std = v;
            }
            if let Some(v) = args.seed {
                cfg.noise_seed = v;
            }
            let (video, truth) = phasevib_core::synth::gaussian_surface_video(&cfg)?;
            imaging::save_sequence(&video, &args.out)?;
            #[derive(Serialize)]
            struct Truth<'a> {
                displacement_px: &'a [f64],
                config: &'a GaussianSurfaceConfig,
            }
            export::write_json(
                &args.out.join("ground_truth.json"),
                &Truth { displacement_px: &truth, config: &cfg },
            )?;
            echo_config(&args.out, "synth", &cfg)?;
            println!("wrote {} frames to {}", video.frame_count(), args.out.display());
        }
        SynthKind::Beam => {
            let mut cfg: BeamSceneConfig = match &args.config {
                Some(p) => read_json(p)?,
                None => BeamSceneConfig::default(),
            };
            if let Some(v) = args.fps {
                cfg.frame_rate_hz = v;
            }
            if let Some(v) = args.frames {
                cfg.frame_count = v;
            }
            if let Some(v) = args.width {
                cfg.width = v;
            }
            if let Some(v) = args.height {
                cfg.height = v;
            }
            if let Some(v) = args.tip_mass {
                cfg.tip_mass_fraction = v;
            }
            if let Some(v) = args.noise_std {
                cfg.noise_std = v;
            }
            if let Some(v) = args.seed {
                cfg.noise_seed = v;
            }
            let (video, truth) = phasevib_core::synth::cantilever_beam_video(&cfg)?;
            imaging::save_sequence(&video, &args.out)?;
            export::write_json(&args.out.join("ground_truth.json"), &truth)?;
            echo_config(&args.out, "synth", &cfg)?;
            println!("wrote {} frames to {}", video.frame_count(), args.out.display());
        }
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct EnhanceArgs {
    /// Input frame directory.
    #[arg(long)]
    pub input: PathBuf,
    /// Frame rate in Hz.
    #[arg(long)]
    pub fps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub low_q: f64,
    #[arg(long, default_value_t = 0.99)]
    pub high_q: f64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_enhance(args: &EnhanceArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    let video = pipeline::load_video(&args.input, args.fps)?;
    let before_hist = imaging::histogram(video.frame(0), 256)?;
    let (lo, hi) = imaging::sequence_quantiles(&video, args.low_q, args.high_q)?;
    if hi - lo <= f64::EPSILON {
        bail!("degenerate intensity range [{lo}, {hi}]; nothing to enhance");
    }
    let (mapped, clamped) = imaging::apply_intensity_map(&video, lo, hi)?;
    if clamped > 0.05 {
        eprintln!("warning: enhancement clamped {:.1}% of pixels", clamped * 100.0);
    }

    // mirror input filenames with an `_enh` suffix
    let paths = imaging::frame_paths(&args.input)?;
    for (frame, src) in mapped.frames().iter().zip(&paths) {
        let stem = src.file_stem().and_then(|s| s.to_str()).unwrap_or("frame");
        imaging::save_frame(frame, &args.out.join(format!("{stem}_enh.png")))?;
    }
    let after_hist = imaging::histogram(mapped.frame(0), 256)?;
    export::write_histogram_csv(&args.out.join("histogram_before.csv"), &before_hist)?;
    export::write_histogram_csv(&args.out.join("histogram_after.csv"), &after_hist)?;

    #[derive(Serialize)]
    struct Meta<'a> {
        args: &'a EnhanceArgs,
        low_intensity: f64,
        high_intensity: f64,
        clamped_fraction: f64,
    }
    export::write_json(
        &args.out.join("enhance_metadata.json"),
        &Meta { args, low_intensity: lo, high_intensity: hi, clamped_fraction: clamped },
    )?;
    echo_config(&args.out, "enhance", args)?;
    println!(
        "enhanced {} frames: [{:.4}, {:.4}] -> [0, 1]",
        mapped.frame_count(),
        lo,
        hi
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    /// Pipeline config JSON providing defaults; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub fps: Option<f64>,
    #[command(flatten)]
    pub gabor: GaborArgs,
    /// ROI: `points:u,v;...`, `grid:x0,y0,x1,y1,step`, or `rect:x0,y0,x1,y1`.
    #[arg(long)]
    pub roi: Option<String>,
    /// Reliability threshold as a fraction of the peak amplitude.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Average each point's phase steps over its 3x3 neighborhood.
    #[arg(long, default_value_t = false)]
    pub neighborhood: bool,
    /// Also dump the analysis kernel as CSV (real/imaginary grids).
    #[arg(long, default_value_t = false)]
    pub dump_kernel: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct ResolvedEstimate {
    input: PathBuf,
    fps: f64,
    params: GaborParams,
    roi: String,
    threshold: f64,
    neighborhood: bool,
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    let cfg = load_pipeline_config(&args.config)?;
    let input = resolve_input(&args.input, cfg.as_ref())?;
    let fps = resolve_fps(args.fps, cfg.as_ref());
    let params = args.gabor.resolve(cfg.as_ref());
    let roi_text = args
        .roi
        .clone()
        .or_else(|| cfg.as_ref().map(|c| c.roi.clone()).filter(|r| !r.is_empty()))
        .ok_or_else(|| anyhow::anyhow!("--roi is required (or roi in --config)"))?;
    let threshold = args
        .threshold
        .unwrap_or_else(|| cfg.as_ref().map_or(0.1, |c| c.reliability_threshold));

    let video = pipeline::load_video(&input, fps)?;
    let roi = parse_roi(&roi_text, params.theta)?;
    let options = EstimateOptions {
        reliability_threshold: threshold,
        neighborhood_average: args.neighborhood,
        ..Default::default()
    };
    let motion = pme::estimate_motion_with_options(&video, &params, &roi, &options)?;
    let masked = motion.reliable.iter().filter(|r| !**r).count();
    if masked > 0 {
        eprintln!("warning: {masked} of {} roi points masked as unreliable", motion.point_count());
    }
    export::write_motion_csv(&args.out.join("motion.csv"), &motion)?;
    export::write_json(&args.out.join("motion_metadata.json"), &export::MotionMetadata::of(&motion))?;
    if args.dump_kernel {
        let kernel = gabor::make_kernel(&params, gabor::DEFAULT_TRUNCATION_SIGMAS)?;
        export::write_kernel_csv(
            &kernel,
            &args.out.join("kernel_real.csv"),
            &args.out.join("kernel_imag.csv"),
        )?;
    }
    echo_config(
        &args.out,
        "estimate",
        &ResolvedEstimate {
            input,
            fps,
            params,
            roi: roi_text,
            threshold,
            neighborhood: args.neighborhood,
        },
    )?;
    println!(
        "estimated motion at {} points over {} frames -> {}",
        motion.point_count(),
        motion.frame_count(),
        args.out.join("motion.csv").display()
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// motion.csv produced by `estimate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Metadata sidecar; defaults to motion_metadata.json next to the input.
    #[arg(long)]
    pub metadata: Option<PathBuf>,
    /// Spectrum of a single point instead of the mean over reliable points.
    #[arg(long)]
    pub point: Option<usize>,
    /// Render spectrum.png alongside the CSV.
    #[arg(long, default_value_t = false)]
    pub plot: bool,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    let csv = export::read_motion_csv(&args.input)?;
    let metadata_path = args
        .metadata
        .clone()
        .unwrap_or_else(|| args.input.with_file_name("motion_metadata.json"));
    let metadata: Option<export::MotionMetadata> = if metadata_path.exists() {
        Some(read_json(&metadata_path)?)
    } else {
        None
    };
    let signal = csv.into_signal(metadata)?;
    let spectrum = match args.point {
        Some(p) => modal::spectrum(&signal, p)?,
        None => modal::mean_spectrum(&signal)?,
    };
    export::write_spectrum_csv(&args.out.join("spectrum.csv"), &spectrum)?;
    if args.plot {
        plot::line_plot(
            &args.out.join("spectrum.png"),
            &spectrum.frequencies,
            &spectrum.magnitudes,
            "spectrum",
        )?;
    }
    echo_config(&args.out, "spectrum", args)?;
    println!(
        "spectrum: {} bins at {:.4} Hz resolution -> {}",
        spectrum.frequencies.len(),
        spectrum.resolution_hz,
        args.out.join("spectrum.csv").display()
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct MagnifyArgs {
    /// Pipeline config JSON providing defaults; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub fps: Option<f64>,
    #[command(flatten)]
    pub gabor: GaborArgs,
    /// Band center frequency in Hz.
    #[arg(long)]
    pub fc: f64,
    /// Band width in Hz [default: 3].
    #[arg(long)]
    pub b: Option<f64>,
    /// Magnification factor [default: 25].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Measure in/out-of-band motion gain over this ROI (band_gain.json/csv).
    #[arg(long)]
    pub gain_roi: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct ResolvedMagnify {
    input: PathBuf,
    fps: f64,
    params: GaborParams,
    spec: BandpassSpec,
    gain_roi: Option<String>,
}

pub fn cmd_magnify(args: &MagnifyArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    let cfg = load_pipeline_config(&args.config)?;
    let input = resolve_input(&args.input, cfg.as_ref())?;
    let fps = resolve_fps(args.fps, cfg.as_ref());
    let params = args.gabor.resolve(cfg.as_ref());
    let b = args.b.unwrap_or_else(|| cfg.as_ref().map_or(3.0, |c| c.band_width_hz));
    let alpha = args.alpha.unwrap_or_else(|| cfg.as_ref().map_or(25.0, |c| c.alpha_for_mode(0)));
    let spec = BandpassSpec::new(args.fc, b, alpha);

    let video = pipeline::load_video(&input, fps)?;
    let (magnified, report) = magnify::magnify_video(&video, &params, &spec)?;
    if report.clamp_warning {
        eprintln!("warning: {:.1}% of output pixels clamped", report.clamped_fraction * 100.0);
    }

    // mirror the input frame layout
    let paths = imaging::frame_paths(&input)?;
    for (frame, src) in magnified.frames().iter().zip(&paths) {
        let name = src.file_name().and_then(|s| s.to_str()).unwrap_or("frame.png");
        let name = if name.to_ascii_lowercase().ends_with(".png") {
            name.to_string()
        } else {
            format!("{}.png", src.file_stem().and_then(|s| s.to_str()).unwrap_or("frame"))
        };
        imaging::save_frame(frame, &args.out.join(name))?;
    }
    export::write_json(&args.out.join("magnify_metadata.json"), &report)?;

    if let Some(gain_roi) = &args.gain_roi {
        let roi = parse_roi(gain_roi, params.theta)?;
        let before = pme::estimate_motion(&video, &params, &roi)?;
        let after = pme::estimate_motion(&magnified, &params, &roi)?;
        let gain = magnify::band_gain_report(&before, &after, &spec)?;
        export::write_json(&args.out.join("band_gain.json"), &gain)?;
        export::write_band_gain_csv(&args.out.join("band_gain.csv"), &gain)?;
        println!(
            "band gain: in {:.2}, out-of-band {:.3}",
            gain.in_band_gain, gain.out_of_band_gain
        );
    }

    echo_config(
        &args.out,
        "magnify",
        &ResolvedMagnify { input, fps, params, spec, gain_roi: args.gain_roi.clone() },
    )?;
    println!(
        "magnified {} frames at f_c = {} Hz, b = {} Hz, alpha = {}",
        magnified.frame_count(),
        spec.f_c_hz,
        spec.b_hz,
        spec.alpha
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct OdsArgs {
    /// Pipeline config JSON providing defaults; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Motion-magnified frame directory.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Frame rate in Hz (metadata only for shape extraction).
    #[arg(long)]
    pub fps: Option<f64>,
    /// Physical span length in meters for calibration [default: 2.3].
    #[arg(long)]
    pub length_m: Option<f64>,
    #[arg(long, value_enum)]
    pub span_axis: Option<SpanAxisArg>,
    #[arg(long)]
    pub smoothing: Option<usize>,
    /// Band center frequency label recorded on the shape.
    #[arg(long, default_value_t = 0.0)]
    pub fc: f64,
    #[arg(long, value_enum)]
    pub edge_polarity: Option<PolarityArg>,
    #[arg(long)]
    pub min_gradient: Option<f64>,
    /// Render shape.png alongside the CSV.
    #[arg(long, default_value_t = false)]
    pub plot: bool,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_ods(args: &OdsArgs) -> Result<()> {
    let _lock = OutputLock::acquire(&args.out)?;
    let pipeline_cfg = load_pipeline_config(&args.config)?;
    let input = resolve_input(&args.input, pipeline_cfg.as_ref())?;
    let fps = resolve_fps(args.fps, pipeline_cfg.as_ref());
    let shape_defaults = pipeline_cfg.map(|c| c.shape).unwrap_or_default();
    let video = pipeline::load_video(&input, fps)?;
    let cfg = ShapeConfig {
        structure_length_m: args.length_m.unwrap_or(shape_defaults.structure_length_m),
        span_axis: args.span_axis.unwrap_or(shape_defaults.span_axis).into(),
        smoothing_window: args.smoothing.unwrap_or(shape_defaults.smoothing_window),
        frequency_hz: args.fc,
        min_gradient: args.min_gradient.unwrap_or(shape_defaults.min_gradient),
        edge_polarity: args.edge_polarity.unwrap_or(shape_defaults.edge_polarity).into(),
        outlier_window: shape_defaults.outlier_window,
    };
    let extraction = modal::extract_shape(&video, &cfg)?;
    export::write_shape_csv(&args.out.join("shape.csv"), &extraction.shape)?;
    export::write_rest_edge_csv(&args.out.join("rest_edge.csv"), &extraction.rest_edge)?;
    if args.plot {
        plot::line_plot(
            &args.out.join("shape.png"),
            &extraction.shape.span_m,
            &extraction.shape.displacement,
            "deflection shape",
        )?;
    }
    #[derive(Serialize)]
    struct Meta<'a> {
        input: &'a PathBuf,
        fps: f64,
        shape_config: &'a ShapeConfig,
        dropped_columns: usize,
        peak_frame: usize,
        repaired_samples: usize,
        sample_count: usize,
    }
    export::write_json(
        &args.out.join("shape_metadata.json"),
        &Meta {
            input: &input,
            fps,
            shape_config: &cfg,
            dropped_columns: extraction.dropped_columns,
            peak_frame: extraction.peak_frame,
            repaired_samples: extraction.repaired_samples,
            sample_count: extraction.shape.sample_count(),
        },
    )?;
    #[derive(Serialize)]
    struct ResolvedOds<'a> {
        input: &'a PathBuf,
        fps: f64,
        shape_config: &'a ShapeConfig,
        plot: bool,
    }
    echo_config(
        &args.out,
        "ods",
        &ResolvedOds { input: &input, fps, shape_config: &cfg, plot: args.plot },
    )?;
    println!(
        "extracted shape: {} samples, peak frame {}, {} columns dropped",
        extraction.shape.sample_count(),
        extraction.peak_frame,
        extraction.dropped_columns
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct MacArgs {
    /// First shape CSV.
    #[arg(long)]
    pub a: PathBuf,
    /// Second shape CSV.
    #[arg(long)]
    pub b: PathBuf,
    /// Optional output directory for mac.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_mac(args: &MacArgs) -> Result<()> {
    let shape_a = export::read_shape_csv(&args.a, 0.0)?;
    let shape_b = export::read_shape_csv(&args.b, 0.0)?;
    let value = modal::mac(&shape_a, &shape_b)?;
    println!("MAC: {value:.6}");
    if let Some(out) = &args.out {
        let _lock = OutputLock::acquire(out)?;
        #[derive(Serialize)]
        struct MacOut<'a> {
            a: &'a PathBuf,
            b: &'a PathBuf,
            mac: f64,
        }
        export::write_json(&out.join("mac.json"), &MacOut { a: &args.a, b: &args.b, mac: value })?;
        echo_config(out, "mac", args)?;
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// Pipeline config JSON for the baseline state.
    #[arg(long)]
    pub baseline: PathBuf,
    /// Pipeline config JSON for the test state.
    #[arg(long)]
    pub test: PathBuf,
    /// Damage threshold on |frequency shift| in Hz.
    #[arg(long, default_value_t = 0.6)]
    pub freq_threshold: f64,
    /// Damage threshold on MAC.
    #[arg(long, default_value_t = 0.85)]
    pub mac_threshold: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs the full workflow for both states and writes the damage report.
/// Returns the process exit code (0 baseline-consistent, 2 damage-indicated).
pub fn cmd_report(args: &ReportArgs) -> Result<i32> {
    let _lock = OutputLock::acquire(&args.out)?;
    let baseline_cfg = PipelineConfig::load(&args.baseline)?;
    let test_cfg = PipelineConfig::load(&args.test)?;

    let baseline = pipeline::run_pipeline(&baseline_cfg, &args.out.join("baseline"), "baseline")?;
    let test = pipeline::run_pipeline(&test_cfg, &args.out.join("test"), "test")?;

    let thresholds = DamageThresholds { freq_shift_hz: args.freq_threshold, mac: args.mac_threshold };
    let report = modal::detect_damage(&baseline.features, &test.features, &thresholds)
        .context("compare stage")?;
    export::write_damage_report(
        &args.out.join("report.json"),
        &args.out.join("report.txt"),
        &report,
    )?;

    #[derive(Serialize)]
    struct Echo<'a> {
        args: &'a ReportArgs,
        baseline_config: &'a PipelineConfig,
        test_config: &'a PipelineConfig,
    }
    echo_config(
        &args.out,
        "report",
        &Echo { args, baseline_config: &baseline_cfg, test_config: &test_cfg },
    )?;

    print!("{}", export::format_damage_report_text(&report));
    Ok(report.verdict.exit_code())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
