//! The full feature-extraction pipeline shared by `report`: load (and
//! optionally enhance) frames, estimate motion, pick resonances, then per
//! resonance magnify and extract the deflection shape.

use std::path::Path;

use anyhow::{Context, Result};

use phasevib_core::export;
use phasevib_core::imaging::{self, VideoSequence};
use phasevib_core::magnify::{self, BandpassSpec};
use phasevib_core::modal::{self, FeatureSet, ShapeConfig};
use phasevib_core::pme::{self, EstimateOptions};

use crate::config::PipelineConfig;

/// Artifacts of one pipeline run, written under `out_dir`.
pub struct PipelineRun {
    pub features: FeatureSet,
}

pub fn run_pipeline(cfg: &PipelineConfig, out_dir: &Path, label: &str) -> Result<PipelineRun> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let stage = |name: &str| format!("{name} stage ({label})");

    let mut video = imaging::load_sequence(&cfg.frames_dir, cfg.frame_rate_hz)
        .with_context(|| stage("load"))?;

    if let Some(e) = &cfg.enhance {
        let (lo, hi) = imaging::sequence_quantiles(&video, e.low_quantile, e.high_quantile)
            .with_context(|| stage("enhance"))?;
        if hi - lo > f64::EPSILON {
            let (mapped, clamped) =
                imaging::apply_intensity_map(&video, lo, hi).with_context(|| stage("enhance"))?;
            video = mapped;
            if clamped > 0.05 {
                eprintln!("warning: enhancement clamped {:.1}% of pixels ({label})", clamped * 100.0);
            }
        } else {
            eprintln!("warning: degenerate intensity range, enhancement skipped ({label})");
        }
    }

    let params = cfg.gabor_params();
    let roi = cfg.roi_spec().with_context(|| stage("roi"))?;
    let options = EstimateOptions {
        reliability_threshold: cfg.reliability_threshold,
        ..Default::default()
    };
    let motion = pme::estimate_motion_with_options(&video, &params, &roi, &options)
        .with_context(|| stage("estimate"))?;
    export::write_motion_csv(&out_dir.join("motion.csv"), &motion).with_context(|| stage("estimate"))?;
    export::write_json(&out_dir.join("motion_metadata.json"), &export::MotionMetadata::of(&motion))
        .with_context(|| stage("estimate"))?;

    let spectrum = modal::mean_spectrum(&motion).with_context(|| stage("spectrum"))?;
    export::write_spectrum_csv(&out_dir.join("spectrum.csv"), &spectrum).with_context(|| stage("spectrum"))?;

    let peaks = modal::pick_peaks(&spectrum, &cfg.peak_config());
    if peaks.is_empty() {
        anyhow::bail!("peaks stage ({label}): no resonances found in the spectrum");
    }
    export::write_json(&out_dir.join("peaks.json"), &peaks).with_context(|| stage("peaks"))?;

    let mut shapes = Vec::with_capacity(peaks.len());
    for (i, peak) in peaks.iter().enumerate() {
        let spec = BandpassSpec::new(peak.frequency_hz, cfg.band_width_hz, cfg.alpha_for_mode(i));
        let (magnified, mag_report) = magnify::magnify_video(&video, &params, &spec)
            .with_context(|| format!("magnify stage, mode {} ({label})", i + 1))?;
        if mag_report.clamp_warning {
            eprintln!(
                "warning: mode {} magnification clamped {:.1}% of pixels ({label})",
                i + 1,
                mag_report.clamped_fraction * 100.0
            );
        }
        let shape_cfg = ShapeConfig {
            structure_length_m: cfg.shape.structure_length_m,
            span_axis: cfg.shape.span_axis.into(),
            smoothing_window: cfg.shape.smoothing_window,
            frequency_hz: peak.frequency_hz,
            min_gradient: cfg.shape.min_gradient,
            edge_polarity: cfg.shape.edge_polarity.into(),
            outlier_window: cfg.shape.outlier_window,
        };
        let extraction = modal::extract_shape(&magnified, &shape_cfg)
            .with_context(|| format!("ods stage, mode {} ({label})", i + 1))?;
        export::write_shape_csv(&out_dir.join(format!("mode_{}_shape.csv", i + 1)), &extraction.shape)
            .with_context(|| format!("ods stage, mode {} ({label})", i + 1))?;
        shapes.push(extraction.shape);
    }

    Ok(PipelineRun { features: FeatureSet { peaks, shapes } })
}

/// Shared video+motion prelude used by the single-stage commands.
pub fn load_video(frames_dir: &Path, frame_rate_hz: f64) -> Result<VideoSequence> {
    imaging::load_sequence(frames_dir, frame_rate_hz)
        .with_context(|| format!("loading frames from {}", frames_dir.display()))
}
