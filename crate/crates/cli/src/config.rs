//! Pipeline configuration: JSON file plus flag overrides (flags win), the
//! ROI grammar, and the output-directory lock.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use phasevib_core::gabor::GaborParams;
use phasevib_core::modal::{EdgePolarity, PeakConfig, SpanAxis};
use phasevib_core::pme::RoiSpec;

/// Contrast-enhancement stage settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnhanceConfig {
    pub low_quantile: f64,
    pub high_quantile: f64,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        EnhanceConfig { low_quantile: 0.01, high_quantile: 0.99 }
    }
}

/// Shape-extraction stage settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ShapeStageConfig {
    pub structure_length_m: f64,
    pub span_axis: SpanAxisArg,
    pub smoothing_window: usize,
    pub min_gradient: f64,
    pub edge_polarity: PolarityArg,
    pub outlier_window: usize,
}

impl Default for ShapeStageConfig {
    fn default() -> Self {
        ShapeStageConfig {
            structure_length_m: 2.3,
            span_axis: SpanAxisArg::X,
            smoothing_window: 5,
            min_gradient: 0.02,
            edge_polarity: PolarityArg::Positive,
            outlier_window: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpanAxisArg {
    X,
    Y,
}

impl From<SpanAxisArg> for SpanAxis {
    fn from(a: SpanAxisArg) -> Self {
        match a {
            SpanAxisArg::X => SpanAxis::X,
            SpanAxisArg::Y => SpanAxis::Y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolarityArg {
    Positive,
    Negative,
    Absolute,
}

impl From<PolarityArg> for EdgePolarity {
    fn from(a: PolarityArg) -> Self {
        match a {
            PolarityArg::Positive => EdgePolarity::Positive,
            PolarityArg::Negative => EdgePolarity::Negative,
            PolarityArg::Absolute => EdgePolarity::Absolute,
        }
    }
}

/// Full pipeline configuration for `report` (and reusable by the stage
/// commands via `--config`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub frames_dir: PathBuf,
    pub frame_rate_hz: f64,
    /// Contrast enhancement before analysis; opt-in.
    pub enhance: Option<EnhanceConfig>,
    pub lambda: f64,
    /// Motion direction in radians; also orients the analysis kernel.
    pub theta: f64,
    pub sigma: Option<f64>,
    pub gamma: f64,
    pub psi: f64,
    pub roi: String,
    pub reliability_threshold: f64,
    pub min_prominence_fraction: f64,
    pub min_separation_hz: f64,
    pub max_modes: usize,
    pub band_width_hz: f64,
    /// Magnification per mode; the last entry repeats when modes outnumber
    /// entries.
    pub alphas: Vec<f64>,
    pub shape: ShapeStageConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            frames_dir: PathBuf::new(),
            frame_rate_hz: 500.0,
            enhance: None,
            lambda: 16.0,
            theta: 0.0,
            sigma: None,
            gamma: 1.0,
            psi: 0.0,
            roi: String::new(),
            reliability_threshold: 0.1,
            min_prominence_fraction: 0.05,
            min_separation_hz: 2.0,
            max_modes: 4,
            band_width_hz: 3.0,
            alphas: vec![25.0],
            shape: ShapeStageConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: PipelineConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn gabor_params(&self) -> GaborParams {
        GaborParams {
            lambda: self.lambda,
            theta: self.theta,
            psi: self.psi,
            sigma: self.sigma.unwrap_or(self.lambda / 2.0),
            gamma: self.gamma,
        }
    }

    pub fn peak_config(&self) -> PeakConfig {
        PeakConfig {
            min_prominence_fraction: self.min_prominence_fraction,
            min_separation_hz: self.min_separation_hz,
            max_peaks: self.max_modes,
        }
    }

    pub fn roi_spec(&self) -> Result<RoiSpec> {
        parse_roi(&self.roi, self.theta)
    }

    pub fn alpha_for_mode(&self, mode: usize) -> f64 {
        if self.alphas.is_empty() {
            25.0
        } else {
            self.alphas[mode.min(self.alphas.len() - 1)]
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.frames_dir.exists() {
            bail!("frames_dir does not exist: {}", self.frames_dir.display());
        }
        if self.roi.is_empty() {
            bail!("roi must be specified (points:..., grid:..., or rect:...)");
        }
        Ok(())
    }
}

/// Parses the ROI grammar:
/// `points:u,v;u,v;...` | `grid:x0,y0,x1,y1,step` | `rect:x0,y0,x1,y1`.
pub fn parse_roi(text: &str, theta: f64) -> Result<RoiSpec> {
    let (kind, body) = text
        .split_once(':')
        .with_context(|| format!("roi '{text}' missing 'kind:' prefix (points/grid/rect)"))?;
    let numbers = |s: &str| -> Result<Vec<u32>> {
        s.split(',')
            .map(|p| p.trim().parse::<u32>().with_context(|| format!("bad roi number '{p}'")))
            .collect()
    };
    match kind {
        "points" => {
            let mut points = Vec::new();
            for pair in body.split(';').filter(|s| !s.trim().is_empty()) {
                let ns = numbers(pair)?;
                if ns.len() != 2 {
                    bail!("roi point '{pair}' must be 'u,v'");
                }
                points.push((ns[0], ns[1]));
            }
            if points.is_empty() {
                bail!("roi has no points");
            }
            Ok(RoiSpec::new(points, theta))
        }
        "grid" => {
            let ns = numbers(body)?;
            if ns.len() != 5 {
                bail!("grid roi needs x0,y0,x1,y1,step");
            }
            Ok(RoiSpec::grid(ns[0], ns[1], ns[2], ns[3], ns[4], theta))
        }
        "rect" => {
            let ns = numbers(body)?;
            if ns.len() != 4 {
                bail!("rect roi needs x0,y0,x1,y1");
            }
            Ok(RoiSpec::grid(ns[0], ns[1], ns[2], ns[3], 1, theta))
        }
        other => bail!("unknown roi kind '{other}' (use points/grid/rect)"),
    }
}

/// Exclusive lock on an output directory; removed on drop.
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub fn acquire(out_dir: &Path) -> Result<OutputLock> {
        std::fs::create_dir_all(out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
        let path = out_dir.join(".phasevib.lock");
        match std::fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(OutputLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                bail!(
                    "output directory {} is locked by another run (remove {} if stale)",
                    out_dir.display(),
                    path.display()
                )
            }
            Err(e) => Err(e).with_context(|| format!("creating lock {}", path.display())),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

/// Writes the fully resolved configuration actually used into the output
/// directory.
pub fn echo_config<T: Serialize>(out_dir: &Path, command: &str, resolved: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Echo<'a, T> {
        command: &'a str,
        config: &'a T,
    }
    let path = out_dir.join("config_used.json");
    let text = serde_json::to_string_pretty(&Echo { command, config: resolved })?;
    std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roi_grammar_parses_all_kinds() {
        let p = parse_roi("points:1,2;3,4", 0.5).unwrap();
        assert_eq!(p.points, vec![(1, 2), (3, 4)]);
        assert_eq!(p.theta, 0.5);
        let g = parse_roi("grid:0,0,8,4,4", 0.0).unwrap();
        assert_eq!(g.points.len(), 6);
        let r = parse_roi("rect:0,0,2,1", 0.0).unwrap();
        assert_eq!(r.points.len(), 6);
    }

    #[test]
    fn roi_grammar_rejects_malformed() {
        assert!(parse_roi("points:", 0.0).is_err());
        assert!(parse_roi("grid:1,2,3", 0.0).is_err());
        assert!(parse_roi("blob:1,2", 0.0).is_err());
        assert!(parse_roi("points:1", 0.0).is_err());
        assert!(parse_roi("12,14", 0.0).is_err());
    }

    #[test]
    fn lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let lock = OutputLock::acquire(dir.path()).unwrap();
        assert!(OutputLock::acquire(dir.path()).is_err());
        drop(lock);
        let again = OutputLock::acquire(dir.path()).unwrap();
        drop(again);
    }

    #[test]
    fn config_defaults_round_trip() {
        let cfg = PipelineConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: PipelineConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.lambda, 16.0);
        assert_eq!(back.gabor_params().sigma, 8.0);
        // partial configs pick up defaults
        let partial: PipelineConfig =
            serde_json::from_str(r#"{"lambda": 24.0, "roi": "grid:0,0,4,4,2"}"#).unwrap();
        assert_eq!(partial.lambda, 24.0);
        assert_eq!(partial.max_modes, 4);
        assert_eq!(partial.alpha_for_mode(9), 25.0);
    }
}
