//! Ground-truth synthetic video fixtures.
//!
//! Every generator evaluates the scene analytically per frame, so sub-pixel
//! motion is encoded exactly (well below any file quantization), and returns
//! the ground truth alongside the frames. Given the same config (noise seed
//! included) the output is bit-identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{Frame, VideoSequence};

/// `beta * L` roots of the clamped-free Euler-Bernoulli frequency equation,
/// modes 1-4.
pub const CLAMPED_FREE_BETA_L: [f64; 4] = [
    1.875_104_068_711_961,
    4.694_091_132_974_175,
    7.854_757_438_237_613,
    10.995_540_734_875_467,
];

/// Clamped-free bending mode shape at normalized span `xi` in `[0, 1]`,
/// scaled so the tip value is exactly 1.
///
/// `mode` is zero-based; modes 0-3 are supported.
pub fn clamped_free_mode_shape(mode: usize, xi: f64) -> f64 {
    let beta = CLAMPED_FREE_BETA_L[mode];
    let raw = |s: f64| {
        let b = beta * s;
        let sigma = (beta.cosh() + beta.cos()) / (beta.sinh() + beta.sin());
        b.cosh() - b.cos() - sigma * (b.sinh() - b.sin())
    };
    raw(xi) / raw(1.0)
}

/// Frequency scale applied by a point mass at the tip, from the Rayleigh
/// quotient with the unchanged mode shape: with tip-normalized shapes every
/// clamped-free mode has modal mass `m_beam / 4`, so
/// `f' = f / sqrt(1 + 4 * tip_mass_fraction)`.
pub fn tip_mass_frequency_scale(tip_mass_fraction: f64) -> f64 {
    (0.25 / (0.25 + tip_mass_fraction)).sqrt()
}

/// Config for the moving 2D Gaussian surface fixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussianSurfaceConfig {
    /// Peak intensity of the surface, in `(0, 1]`.
    pub amplitude: f64,
    /// Gaussian standard deviation in pixels.
    pub std_px: f64,
    pub width: u32,
    pub height: u32,
    /// Viscous damping ratio, `0 <= xi < 1`.
    pub damping_ratio: f64,
    /// Natural frequency in rad/s.
    pub natural_frequency_rad_s: f64,
    /// Peak of the displacement envelope in pixels.
    pub peak_displacement_px: f64,
    pub frame_rate_hz: f64,
    pub frame_count: usize,
    /// Additive Gaussian pixel noise; 0 for the noise-free fixture.
    pub noise_std: f64,
    pub noise_seed: u64,
}

impl Default for GaussianSurfaceConfig {
    fn default() -> Self {
        GaussianSurfaceConfig {
            amplitude: 1.0,
            std_px: 8.0,
            width: 128,
            height: 128,
            damping_ratio: 0.02,
            natural_frequency_rad_s: 2.0 * std::f64::consts::PI * 5.0,
            peak_displacement_px: 2.0,
            frame_rate_hz: 500.0,
            frame_count: 2000,
            noise_std: 0.0,
            noise_seed: 0,
        }
    }
}

impl GaussianSurfaceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return Err(Error::invalid("amplitude must be in (0, 1]"));
        }
        if !(self.std_px > 0.0) {
            return Err(Error::invalid("std_px must be > 0"));
        }
        if !(0.0..1.0).contains(&self.damping_ratio) {
            return Err(Error::invalid("damping ratio must be in [0, 1)"));
        }
        if !(self.natural_frequency_rad_s > 0.0) {
            return Err(Error::invalid("natural frequency must be > 0"));
        }
        if self.peak_displacement_px < 0.0 {
            return Err(Error::invalid("peak displacement must be >= 0"));
        }
        if self.frame_count < 2 {
            return Err(Error::TooFewFrames { found: self.frame_count });
        }
        // the surface must stay inside the grid at peak swing
        let reach = self.peak_displacement_px + 3.0 * self.std_px;
        if reach >= self.width as f64 / 2.0 {
            return Err(Error::invalid(format!(
                "displacement + 3 sigma ({reach:.1} px) exceeds half the grid width"
            )));
        }
        if self.noise_std < 0.0 || self.amplitude + 5.0 * self.noise_std > 1.0 {
            return Err(Error::invalid(
                "amplitude + 5 * noise_std must stay within [0, 1]",
            ));
        }
        Ok(())
    }

    /// Applied motion `d(t) = peak * exp(-xi wn t) * sin(wn t)`.
    pub fn displacement_at(&self, t: f64) -> f64 {
        let wn = self.natural_frequency_rad_s;
        self.peak_displacement_px * (-self.damping_ratio * wn * t).exp() * (wn * t).sin()
    }
}

/// Renders the damped oscillating Gaussian surface; returns the video and the
/// per-frame ground-truth displacement.
pub fn gaussian_surface_video(cfg: &GaussianSurfaceConfig) -> Result<(VideoSequence, Vec<f64>)> {
    cfg.validate()?;
    let cx = (cfg.width - 1) as f64 / 2.0;
    let cy = (cfg.height - 1) as f64 / 2.0;
    let truth: Vec<f64> = (0..cfg.frame_count)
        .map(|k| cfg.displacement_at(k as f64 / cfg.frame_rate_hz))
        .collect();
    let inv_2s2 = 1.0 / (2.0 * cfg.std_px * cfg.std_px);
    let frames: Vec<Frame> = truth
        .par_iter()
        .enumerate()
        .map(|(k, &dx)| {
            let mut noise = NoiseStream::new(cfg.noise_std, cfg.noise_seed, k as u64);
            let mut data = Vec::with_capacity((cfg.width * cfg.height) as usize);
            for y in 0..cfg.height {
                let ry = y as f64 - cy;
                for x in 0..cfg.width {
                    let rx = x as f64 - cx - dx;
                    let v = cfg.amplitude * (-(rx * rx + ry * ry) * inv_2s2).exp() + noise.next();
                    data.push(v.clamp(0.0, 1.0) as f32);
                }
            }
            Frame::new(cfg.width, cfg.height, data, 16).expect("values clamped")
        })
        .collect();
    Ok((VideoSequence::new(frames, cfg.frame_rate_hz)?, truth))
}

/// Config for the rendered cantilever-beam scene.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BeamSceneConfig {
    pub width: u32,
    pub height: u32,
    /// Pixels from the left edge to the clamped root.
    pub root_margin_px: f64,
    /// Pixels from the right edge to the free tip.
    pub tip_margin_px: f64,
    /// Beam silhouette thickness in pixels.
    pub thickness_px: f64,
    pub background: f64,
    pub foreground: f64,
    /// Physical span length used to calibrate extracted shapes.
    pub structure_length_m: f64,
    /// Baseline (undamaged) modal frequencies, strictly increasing, Hz.
    pub mode_frequencies_hz: Vec<f64>,
    /// Tip displacement amplitude of each mode in pixels.
    pub mode_amplitudes_px: Vec<f64>,
    pub damping_ratios: Vec<f64>,
    /// Point mass at the tip as a fraction of beam mass; 0 for the baseline
    /// article, > 0 lowers every rendered frequency.
    pub tip_mass_fraction: f64,
    pub frame_rate_hz: f64,
    pub frame_count: usize,
    /// Horizontal subsamples per pixel for the anti-aliased silhouette.
    pub supersampling: usize,
    pub noise_std: f64,
    pub noise_seed: u64,
}

impl Default for BeamSceneConfig {
    fn default() -> Self {
        BeamSceneConfig {
            width: 256,
            height: 96,
            root_margin_px: 12.0,
            tip_margin_px: 12.0,
            thickness_px: 10.0,
            background: 0.08,
            foreground: 0.85,
            structure_length_m: 2.3,
            mode_frequencies_hz: vec![5.85, 15.63, 37.11, 60.55],
            mode_amplitudes_px: vec![0.8, 0.5, 0.35, 0.25],
            damping_ratios: vec![0.02, 0.0075, 0.0032, 0.002],
            tip_mass_fraction: 0.0,
            frame_rate_hz: 500.0,
            frame_count: 2000,
            supersampling: 4,
            noise_std: 0.0,
            noise_seed: 0,
        }
    }
}

impl BeamSceneConfig {
    pub fn validate(&self) -> Result<()> {
        let m = self.mode_frequencies_hz.len();
        if m == 0 || m > CLAMPED_FREE_BETA_L.len() {
            return Err(Error::invalid(format!(
                "1 to {} modes supported, got {m}",
                CLAMPED_FREE_BETA_L.len()
            )));
        }
        if self.mode_amplitudes_px.len() != m || self.damping_ratios.len() != m {
            return Err(Error::invalid("frequencies, amplitudes, and damping ratios must have equal length"));
        }
        for w in self.mode_frequencies_hz.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("mode frequencies must be strictly increasing (overlapping modes)"));
            }
        }
        let nyquist = self.frame_rate_hz / 2.0;
        for &f in &self.mode_frequencies_hz {
            if !(f > 0.0) || f * self.frequency_scale() >= nyquist {
                return Err(Error::invalid(format!("mode at {f} Hz is not inside (0, Nyquist) (aliased)")));
            }
        }
        for (&a, &xi) in self.mode_amplitudes_px.iter().zip(&self.damping_ratios) {
            if a < 0.0 {
                return Err(Error::invalid("mode amplitudes must be >= 0"));
            }
            if !(0.0..1.0).contains(&xi) {
                return Err(Error::invalid("damping ratios must be in [0, 1)"));
            }
        }
        if !(self.tip_mass_fraction >= 0.0) {
            return Err(Error::invalid("tip mass fraction must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.background)
            || !(0.0..=1.0).contains(&self.foreground)
            || self.foreground <= self.background
        {
            return Err(Error::invalid("need 0 <= background < foreground <= 1"));
        }
        if self.noise_std < 0.0
            || self.foreground + 5.0 * self.noise_std > 1.0
            || self.background - 5.0 * self.noise_std < 0.0
        {
            return Err(Error::invalid("foreground/background +- 5 * noise_std must stay within [0, 1]"));
        }
        if self.frame_count < 2 {
            return Err(Error::TooFewFrames { found: self.frame_count });
        }
        if self.supersampling == 0 {
            return Err(Error::invalid("supersampling must be >= 1"));
        }
        let span = self.width as f64 - self.root_margin_px - self.tip_margin_px;
        if span < 16.0 {
            return Err(Error::invalid("beam span too short"));
        }
        let max_sweep: f64 = self.mode_amplitudes_px.iter().sum::<f64>() + self.thickness_px / 2.0;
        if max_sweep >= self.height as f64 / 2.0 - 2.0 {
            return Err(Error::invalid("beam sweep exceeds the frame height"));
        }
        Ok(())
    }

    /// Rendered-over-baseline frequency ratio from the tip mass.
    pub fn frequency_scale(&self) -> f64 {
        tip_mass_frequency_scale(self.tip_mass_fraction)
    }

    /// Frequencies actually rendered (baseline scaled by the tip mass).
    pub fn rendered_frequencies_hz(&self) -> Vec<f64> {
        let s = self.frequency_scale();
        self.mode_frequencies_hz.iter().map(|f| f * s).collect()
    }

    fn span_x(&self) -> (f64, f64) {
        (self.root_margin_px, self.width as f64 - 1.0 - self.tip_margin_px)
    }

    /// Centerline vertical offset at normalized span `xi` and time `t`.
    fn deflection(&self, xi: f64, t: f64) -> f64 {
        let scale = self.frequency_scale();
        self.mode_frequencies_hz
            .iter()
            .zip(&self.mode_amplitudes_px)
            .zip(&self.damping_ratios)
            .enumerate()
            .map(|(m, ((&f, &a), &damp))| {
                let w = 2.0 * std::f64::consts::PI * f * scale;
                a * clamped_free_mode_shape(m, xi) * (-damp * w * t).exp() * (w * t).sin()
            })
            .sum()
    }
}

/// Analytic mode shape sampled on a uniform span grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticShape {
    pub span_fraction: Vec<f64>,
    /// Tip-normalized displacements.
    pub displacement: Vec<f64>,
}

/// Everything the renderer knows about the scene it drew.
#[derive(Debug, Clone, Serialize)]
pub struct BeamGroundTruth {
    pub baseline_frequencies_hz: Vec<f64>,
    pub rendered_frequencies_hz: Vec<f64>,
    pub frequency_scale: f64,
    pub mode_shapes: Vec<AnalyticShape>,
    /// Tip centerline displacement per frame, pixels.
    pub tip_series_px: Vec<f64>,
    /// Largest frame-to-frame tip motion, pixels; keep this under a quarter
    /// wavelength of the analysis kernel.
    pub max_frame_step_px: f64,
    pub config: BeamSceneConfig,
}

/// Analytic shape of `mode` (zero-based) on `samples` uniform span points.
pub fn analytic_mode_shape(mode: usize, samples: usize) -> AnalyticShape {
    let span_fraction: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let displacement = span_fraction.iter().map(|&s| clamped_free_mode_shape(mode, s)).collect();
    AnalyticShape { span_fraction, displacement }
}

/// Renders a bright cantilever-beam silhouette whose centerline superposes
/// damped clamped-free bending modes; returns the video and ground truth.
pub fn cantilever_beam_video(cfg: &BeamSceneConfig) -> Result<(VideoSequence, BeamGroundTruth)> {
    cfg.validate()?;
    let (root_x, tip_x) = cfg.span_x();
    let y0 = (cfg.height - 1) as f64 / 2.0;
    let half_thick = cfg.thickness_px / 2.0;
    let ss = cfg.supersampling;

    let frames: Vec<Frame> = (0..cfg.frame_count)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / cfg.frame_rate_hz;
            let mut noise = NoiseStream::new(cfg.noise_std, cfg.noise_seed, k as u64);
            let w = cfg.width as usize;
            let h = cfg.height as usize;
            let mut coverage = vec![0.0f64; w * h];
            for u in 0..w {
                for i in 0..ss {
                    let x = u as f64 - 0.5 + (i as f64 + 0.5) / ss as f64;
                    if x < root_x || x > tip_x {
                        continue;
                    }
                    let xi = (x - root_x) / (tip_x - root_x);
                    let yc = y0 + cfg.deflection(xi, t);
                    let (band_lo, band_hi) = (yc - half_thick, yc + half_thick);
                    let v_lo = (band_lo - 0.5).floor().max(0.0) as usize;
                    let v_hi = ((band_hi + 0.5).ceil() as usize).min(h - 1);
                    for v in v_lo..=v_hi {
                        // exact vertical overlap of the pixel with the beam band
                        let overlap = (band_hi.min(v as f64 + 0.5) - band_lo.max(v as f64 - 0.5)).max(0.0);
                        coverage[v * w + u] += overlap / ss as f64;
                    }
                }
            }
            let data: Vec<f32> = coverage
                .iter()
                .map(|&c| {
                    let v = cfg.background + (cfg.foreground - cfg.background) * c.min(1.0) + noise.next();
                    v.clamp(0.0, 1.0) as f32
                })
                .collect();
            Frame::new(cfg.width, cfg.height, data, 16).expect("values clamped")
        })
        .collect();

    let tip_series_px: Vec<f64> = (0..cfg.frame_count)
        .map(|k| cfg.deflection(1.0, k as f64 / cfg.frame_rate_hz))
        .collect();
    let max_frame_step_px = tip_series_px
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    let truth = BeamGroundTruth {
        baseline_frequencies_hz: cfg.mode_frequencies_hz.clone(),
        rendered_frequencies_hz: cfg.rendered_frequencies_hz(),
        frequency_scale: cfg.frequency_scale(),
        mode_shapes: (0..cfg.mode_frequencies_hz.len())
            .map(|m| analytic_mode_shape(m, 201))
            .collect(),
        tip_series_px,
        max_frame_step_px,
        config: cfg.clone(),
    };
    Ok((VideoSequence::new(frames, cfg.frame_rate_hz)?, truth))
}

/// Config for a rigidly translating band-limited texture.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TextureShiftConfig {
    pub width: u32,
    pub height: u32,
    /// Carrier wavelength of the texture in pixels; components are spread
    /// within +-10% of this.
    pub wavelength_px: f64,
    /// Per-frame horizontal shift of the whole texture, pixels.
    pub shifts_px: Vec<f64>,
    pub frame_rate_hz: f64,
    pub seed: u64,
}

/// Renders a band-limited texture translating rigidly by the configured
/// per-frame shifts (evaluated analytically, so sub-pixel shifts are exact).
pub fn shifted_texture_video(cfg: &TextureShiftConfig) -> Result<(VideoSequence, Vec<f64>)> {
    if cfg.shifts_px.len() < 2 {
        return Err(Error::TooFewFrames { found: cfg.shifts_px.len() });
    }
    if !(cfg.wavelength_px > 0.0) {
        return Err(Error::invalid("wavelength must be > 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let components: Vec<(f64, f64, f64, f64)> = (0..8)
        .map(|_| {
            let freq = (1.0 + rng.gen_range(-0.1..0.1)) / cfg.wavelength_px;
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let y_period = rng.gen_range(12.0..48.0);
            let y_wobble = rng.gen_range(0.1..0.4);
            (freq, phase, y_period, y_wobble)
        })
        .collect();
    let texture = move |x: f64, y: f64| {
        let sum: f64 = components
            .iter()
            .map(|&(f, p, yp, yw)| {
                (std::f64::consts::TAU * f * x + p + yw * (std::f64::consts::TAU * y / yp).sin()).cos()
            })
            .sum();
        0.5 + 0.4 * sum / components.len() as f64
    };
    let frames: Vec<Frame> = cfg
        .shifts_px
        .par_iter()
        .map(|&s| {
            Frame::from_fn(cfg.width, cfg.height, 16, |x, y| texture(x as f64 - s, y as f64))
                .expect("texture in range")
        })
        .collect();
    Ok((VideoSequence::new(frames, cfg.frame_rate_hz)?, cfg.shifts_px.clone()))
}

/// Deterministic per-frame Gaussian noise (Box-Muller over ChaCha).
struct NoiseStream {
    rng: Option<ChaCha8Rng>,
    std: f64,
    spare: Option<f64>,
}

impl NoiseStream {
    fn new(std: f64, seed: u64, frame_index: u64) -> Self {
        let rng = (std > 0.0).then(|| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(frame_index);
            r
        });
        NoiseStream { rng, std, spare: None }
    }

    #[inline]
    fn next(&mut self) -> f64 {
        let Some(rng) = self.rng.as_mut() else { return 0.0 };
        if let Some(z) = self.spare.take() {
            return z * self.std;
        }
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u1.ln()).sqrt();
        self.spare = Some(r * u2.sin());
        r * u2.cos() * self.std
    }
}
