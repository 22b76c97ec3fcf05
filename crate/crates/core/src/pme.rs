//! Phase-based motion estimation.
//!
//! Frames are mapped to complex coefficient fields by correlating with a
//! Gabor kernel; the temporal evolution of the coefficient phase at a pixel
//! is proportional to the local motion projected on the kernel orientation,
//! with scale `lambda / (2 pi)` per radian. Motion is recovered per ROI point
//! by accumulating wrapped frame-to-frame phase differences, valid while the
//! per-frame motion stays under `lambda / 4`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gabor::{GaborKernel, GaborParams, KernelAxis};
use crate::imaging::{Frame, VideoSequence};

/// Complex coefficient plane for one frame.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    pub width: u32,
    pub height: u32,
    /// Row-major complex coefficients.
    values: Vec<Complex64>,
    pub params: GaborParams,
    pub frame_index: usize,
}

impl CoefficientField {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, u: u32, v: u32) -> Complex64 {
        self.values[v as usize * self.width as usize + u as usize]
    }

    pub fn from_values(
        width: u32,
        height: u32,
        values: Vec<Complex64>,
        params: GaborParams,
        frame_index: usize,
    ) -> Result<Self> {
        if values.len() != width as usize * height as usize {
            return Err(Error::invalid("coefficient buffer does not match dimensions"));
        }
        Ok(CoefficientField { width, height, values, params, frame_index })
    }
}

/// Componentwise modulus and principal argument of a coefficient field.
///
/// A zero coefficient yields amplitude 0 and phase 0; such points carry no
/// usable phase and are excluded downstream by the reliability mask.
#[derive(Debug, Clone)]
pub struct PhaseAmplitude {
    pub width: u32,
    pub height: u32,
    pub phase: Vec<f64>,
    pub amplitude: Vec<f64>,
}

pub fn phase_amplitude(field: &CoefficientField) -> PhaseAmplitude {
    let mut phase = Vec::with_capacity(field.values.len());
    let mut amplitude = Vec::with_capacity(field.values.len());
    for c in &field.values {
        amplitude.push(c.norm());
        phase.push(c.arg());
    }
    PhaseAmplitude { width: field.width, height: field.height, phase, amplitude }
}

/// Wraps an angle to the principal interval `(-pi, pi]`.
#[inline]
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let y = x.rem_euclid(two_pi);
    if y > std::f64::consts::PI {
        y - two_pi
    } else {
        y
    }
}

/// Mirror reflection of an out-of-range index (no edge repeat).
#[inline]
fn reflect(mut i: i64, n: i64) -> usize {
    debug_assert!(n > 0);
    loop {
        if i < 0 {
            i = -i;
        } else if i >= n {
            i = 2 * (n - 1) - i;
        } else {
            return i as usize;
        }
    }
}

pub(crate) fn check_kernel_fits(kernel: &GaborKernel, frame: &Frame) -> Result<()> {
    let side = kernel.side();
    if side > frame.width() as usize || side > frame.height() as usize {
        return Err(Error::KernelExceedsFrame {
            kernel: side,
            width: frame.width(),
            height: frame.height(),
        });
    }
    Ok(())
}

/// Correlates a frame with a Gabor kernel over its truncated support,
/// reflecting at the boundary, producing one complex coefficient per pixel.
///
/// Axis-aligned orientations use an exact separable two-pass path; oblique
/// orientations fall back to direct summation (quadratic in kernel side).
pub fn transform(frame: &Frame, kernel: &GaborKernel) -> Result<CoefficientField> {
    transform_indexed(frame, kernel, 0)
}

/// `transform` with an explicit frame index recorded in the output.
pub fn transform_indexed(frame: &Frame, kernel: &GaborKernel, frame_index: usize) -> Result<CoefficientField> {
    check_kernel_fits(kernel, frame)?;
    let values = match kernel.separable_factors() {
        Some(f) => transform_separable(frame, kernel, &f.along, &f.across, f.axis),
        None => transform_direct(frame, kernel),
    };
    Ok(CoefficientField {
        width: frame.width(),
        height: frame.height(),
        values,
        params: kernel.params,
        frame_index,
    })
}

fn transform_separable(
    frame: &Frame,
    kernel: &GaborKernel,
    along: &[Complex64],
    across: &[f64],
    axis: KernelAxis,
) -> Vec<Complex64> {
    let w = frame.width() as usize;
    let h = frame.height() as usize;
    let r = kernel.support_radius;
    match axis {
        KernelAxis::X => {
            // complex filter along rows, then real Gaussian down columns
            let mut tmp = vec![Complex64::default(); w * h];
            tmp.par_chunks_mut(w).enumerate().for_each(|(y, out_row)| {
                let row = frame.row(y as u32);
                filter_row_complex(row, along, r, out_row);
            });
            let mut out = vec![Complex64::default(); w * h];
            out.par_chunks_mut(w).enumerate().for_each(|(v, out_row)| {
                for dy in 0..across.len() {
                    let src_y = reflect(v as i64 + dy as i64 - r as i64, h as i64);
                    let weight = across[dy];
                    let src = &tmp[src_y * w..(src_y + 1) * w];
                    for u in 0..w {
                        out_row[u] += src[u] * weight;
                    }
                }
            });
            out
        }
        KernelAxis::Y => {
            // complex filter down columns, then real Gaussian along rows
            let mut tmp = vec![Complex64::default(); w * h];
            tmp.par_chunks_mut(w).enumerate().for_each(|(v, out_row)| {
                for dy in 0..along.len() {
                    let src_y = reflect(v as i64 + dy as i64 - r as i64, h as i64);
                    let weight = along[dy];
                    let src = frame.row(src_y as u32);
                    for u in 0..w {
                        out_row[u] += weight * src[u] as f64;
                    }
                }
            });
            let mut out = vec![Complex64::default(); w * h];
            out.par_chunks_mut(w).enumerate().for_each(|(v, out_row)| {
                let row = &tmp[v * w..(v + 1) * w];
                filter_row_real(row, across, r, out_row);
            });
            out
        }
    }
}

/// 1D correlation of a real row with a complex tap vector, mirror boundary.
fn filter_row_complex(row: &[f32], taps: &[Complex64], r: usize, out: &mut [Complex64]) {
    let w = row.len();
    let k = taps.len();
    for u in 0..w {
        let first = u as i64 - r as i64;
        let mut acc = Complex64::default();
        if first >= 0 && first + k as i64 <= w as i64 {
            let window = &row[first as usize..first as usize + k];
            for (x, t) in window.iter().zip(taps) {
                acc += t * *x as f64;
            }
        } else {
            for (j, t) in taps.iter().enumerate() {
                let idx = reflect(first + j as i64, w as i64);
                acc += t * row[idx] as f64;
            }
        }
        out[u] = acc;
    }
}

/// 1D correlation of a complex row with real taps, mirror boundary.
fn filter_row_real(row: &[Complex64], taps: &[f64], r: usize, out: &mut [Complex64]) {
    let w = row.len();
    let k = taps.len();
    for u in 0..w {
        let first = u as i64 - r as i64;
        let mut acc = Complex64::default();
        if first >= 0 && first + k as i64 <= w as i64 {
            let window = &row[first as usize..first as usize + k];
            for (x, t) in window.iter().zip(taps) {
                acc += x * *t;
            }
        } else {
            for (j, t) in taps.iter().enumerate() {
                let idx = reflect(first + j as i64, w as i64);
                acc += row[idx] * *t;
            }
        }
        out[u] = acc;
    }
}

fn transform_direct(frame: &Frame, kernel: &GaborKernel) -> Vec<Complex64> {
    let w = frame.width() as usize;
    let h = frame.height() as usize;
    let mut out = vec![Complex64::default(); w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(v, out_row)| {
        for u in 0..w {
            out_row[u] = correlate_at(frame, kernel, u as i64, v as i64);
        }
    });
    out
}

/// Exact correlation of the kernel with the frame at a single location.
pub fn correlate_at(frame: &Frame, kernel: &GaborKernel, u: i64, v: i64) -> Complex64 {
    let w = frame.width() as i64;
    let h = frame.height() as i64;
    let r = kernel.support_radius as i64;
    let side = kernel.side();
    let real = kernel.real_part();
    let imag = kernel.imag_part();
    let mut acc_re = 0.0f64;
    let mut acc_im = 0.0f64;
    let interior = u >= r && u + r < w && v >= r && v + r < h;
    for dy in -r..=r {
        let krow = ((dy + r) as usize) * side;
        if interior {
            let row = frame.row((v + dy) as u32);
            let window = &row[(u - r) as usize..(u + r + 1) as usize];
            for (j, &x) in window.iter().enumerate() {
                acc_re += real[krow + j] * x as f64;
                acc_im += imag[krow + j] * x as f64;
            }
        } else {
            let row = frame.row(reflect(v + dy, h) as u32);
            for j in 0..side {
                let x = row[reflect(u - r + j as i64, w)] as f64;
                acc_re += real[krow + j] * x;
                acc_im += imag[krow + j] * x;
            }
        }
    }
    Complex64::new(acc_re, acc_im)
}

/// Coefficients at selected points only; exact, and far cheaper than a full
/// transform when the ROI is small.
pub fn transform_at_points(frame: &Frame, kernel: &GaborKernel, points: &[(u32, u32)]) -> Result<Vec<Complex64>> {
    check_kernel_fits(kernel, frame)?;
    Ok(points
        .iter()
        .map(|&(u, v)| correlate_at(frame, kernel, u as i64, v as i64))
        .collect())
}

/// Points to estimate motion at, plus the direction of motion to recover.
#[derive(Debug, Clone)]
pub struct RoiSpec {
    pub points: Vec<(u32, u32)>,
    /// Motion direction in radians; the analysis kernel is oriented along it.
    pub theta: f64,
}

impl RoiSpec {
    pub fn new(points: Vec<(u32, u32)>, theta: f64) -> Self {
        RoiSpec { points, theta }
    }

    /// Rectangular grid of points with the given stride, inclusive bounds.
    pub fn grid(x0: u32, y0: u32, x1: u32, y1: u32, step: u32, theta: f64) -> Self {
        let mut points = Vec::new();
        let step = step.max(1);
        let mut y = y0;
        while y <= y1 {
            let mut x = x0;
            while x <= x1 {
                points.push((x, y));
                x += step;
            }
            y += step;
        }
        RoiSpec { points, theta }
    }

    pub fn validate(&self, width: u32, height: u32) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::invalid("roi has no points"));
        }
        for &(u, v) in &self.points {
            if u >= width || v >= height {
                return Err(Error::RoiOutOfBounds { u, v, width, height });
            }
        }
        Ok(())
    }
}

/// Per-point displacement time series in pixels, relative to the first frame.
#[derive(Debug, Clone)]
pub struct MotionSignal {
    /// `[point][frame]` displacements; every series starts at 0.
    pub displacements_px: Vec<Vec<f64>>,
    pub frame_rate_hz: f64,
    /// Effective kernel parameters used for the estimate.
    pub params: GaborParams,
    /// Points that passed the reliability mask.
    pub reliable: Vec<bool>,
    pub points: Vec<(u32, u32)>,
    pub reliability_threshold: f64,
}

impl MotionSignal {
    pub fn frame_count(&self) -> usize {
        self.displacements_px.first().map_or(0, Vec::len)
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn reliable_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.reliable.iter().enumerate().filter(|(_, r)| **r).map(|(i, _)| i)
    }

    /// Mean displacement series over reliable points; `None` when every point
    /// is masked.
    pub fn mean_series(&self) -> Option<Vec<f64>> {
        let idx: Vec<usize> = self.reliable_indices().collect();
        if idx.is_empty() {
            return None;
        }
        let n = self.frame_count();
        let mut mean = vec![0.0; n];
        for &p in &idx {
            for (m, v) in mean.iter_mut().zip(&self.displacements_px[p]) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= idx.len() as f64;
        }
        Some(mean)
    }
}

/// Tunables for `estimate_motion`.
#[derive(Debug, Clone)]
pub struct EstimateOptions {
    /// Fraction of the frame-wide peak temporal-median amplitude below which
    /// a point is masked as unreliable.
    pub reliability_threshold: f64,
    /// Amplitude-weighted mean of each point's 3x3 neighborhood phase steps;
    /// a convenience reducer for noisy inputs.
    pub neighborhood_average: bool,
    /// Number of evenly spaced frames used to estimate the frame-wide peak
    /// amplitude for the reliability reference.
    pub reference_frame_samples: usize,
    /// Kernel truncation in sigmas.
    pub truncation_sigmas: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            reliability_threshold: 0.1,
            neighborhood_average: false,
            reference_frame_samples: 16,
            truncation_sigmas: crate::gabor::DEFAULT_TRUNCATION_SIGMAS,
        }
    }
}

/// Estimates per-point displacement over time from temporal phase differences.
///
/// The kernel orientation follows `roi.theta` (the requested motion
/// direction); the remaining Gabor parameters come from `params`. Valid while
/// per-frame motion magnitude stays below `lambda / 4`.
pub fn estimate_motion(video: &VideoSequence, params: &GaborParams, roi: &RoiSpec) -> Result<MotionSignal> {
    estimate_motion_with_options(video, params, roi, &EstimateOptions::default())
}

pub fn estimate_motion_with_options(
    video: &VideoSequence,
    params: &GaborParams,
    roi: &RoiSpec,
    options: &EstimateOptions,
) -> Result<MotionSignal> {
    if !(options.reliability_threshold > 0.0 && options.reliability_threshold < 1.0) {
        return Err(Error::invalid(format!(
            "reliability threshold must be in (0, 1), got {}",
            options.reliability_threshold
        )));
    }
    let effective = GaborParams { theta: roi.theta, ..*params };
    effective.validate()?;
    roi.validate(video.width(), video.height())?;
    let kernel = crate::gabor::make_kernel(&effective, options.truncation_sigmas)?;
    check_kernel_fits(&kernel, video.frame(0))?;

    // Working point set: core points, optionally with their 3x3 neighborhoods.
    let (all_points, groups) = expand_points(&roi.points, options.neighborhood_average, video.width(), video.height());

    // Coefficients at the working points, frame by frame (parallel).
    let coeffs: Vec<Vec<Complex64>> = video
        .frames()
        .par_iter()
        .map(|f| transform_at_points(f, &kernel, &all_points).expect("kernel fits"))
        .collect();

    let frame_count = video.frame_count();
    let scale = effective.lambda / (2.0 * std::f64::consts::PI);

    // Reliability: per-core-point temporal median amplitude against the
    // frame-wide peak of the temporal-median amplitude. The frame-wide
    // reference is estimated on a small evenly spaced frame subsample;
    // amplitude fields vary little over sub-wavelength motion.
    let core_medians: Vec<f64> = groups
        .iter()
        .map(|g| {
            let mut amps: Vec<f64> = coeffs.iter().map(|row| row[g.center].norm()).collect();
            median_in_place(&mut amps)
        })
        .collect();
    let (peak, floor) = reference_amplitude_range(video, &kernel, options.reference_frame_samples);
    let usable = amplitude_plane_has_contrast(peak, floor);
    let reliable: Vec<bool> = core_medians
        .iter()
        .map(|&m| usable && m >= options.reliability_threshold * peak)
        .collect();
    if !reliable.iter().any(|&r| r) {
        return Err(Error::AllPointsMasked(roi.points.len()));
    }

    // Accumulate wrapped phase steps. Neighborhood averaging weights each
    // neighbor's step by its temporal-median amplitude.
    let displacements: Vec<Vec<f64>> = groups
        .par_iter()
        .map(|g| {
            let members = &g.members;
            let weights: Vec<f64> = if members.len() > 1 {
                members
                    .iter()
                    .map(|&m| {
                        let mut amps: Vec<f64> = coeffs.iter().map(|row| row[m].norm()).collect();
                        median_in_place(&mut amps)
                    })
                    .collect()
            } else {
                vec![1.0]
            };
            let wsum: f64 = weights.iter().sum();
            let mut series = Vec::with_capacity(frame_count);
            let mut acc = 0.0;
            series.push(0.0);
            let mut prev: Vec<f64> = members.iter().map(|&m| coeffs[0][m].arg()).collect();
            for t in 1..frame_count {
                let mut step = 0.0;
                for (j, &m) in members.iter().enumerate() {
                    let phase = coeffs[t][m].arg();
                    step += weights[j] * wrap_phase(phase - prev[j]);
                    prev[j] = phase;
                }
                acc += step / wsum.max(f64::MIN_POSITIVE);
                series.push(acc * scale);
            }
            series
        })
        .collect();

    Ok(MotionSignal {
        displacements_px: displacements,
        frame_rate_hz: video.frame_rate_hz(),
        params: effective,
        reliable,
        points: roi.points.clone(),
        reliability_threshold: options.reliability_threshold,
    })
}

struct PointGroup {
    /// Index of the core point within the working point list.
    center: usize,
    /// Working-list indices contributing to this core point.
    members: Vec<usize>,
}

fn expand_points(
    core: &[(u32, u32)],
    neighborhood: bool,
    width: u32,
    height: u32,
) -> (Vec<(u32, u32)>, Vec<PointGroup>) {
    if !neighborhood {
        let groups = (0..core.len()).map(|i| PointGroup { center: i, members: vec![i] }).collect();
        return (core.to_vec(), groups);
    }
    let mut all = Vec::new();
    let mut groups = Vec::new();
    for &(u, v) in core {
        let mut members = Vec::with_capacity(9);
        let mut center = 0;
        for dv in -1i64..=1 {
            for du in -1i64..=1 {
                let x = (u as i64 + du).clamp(0, width as i64 - 1) as u32;
                let y = (v as i64 + dv).clamp(0, height as i64 - 1) as u32;
                if (du, dv) == (0, 0) {
                    center = all.len();
                }
                members.push(all.len());
                all.push((x, y));
            }
        }
        groups.push(PointGroup { center, members });
    }
    (all, groups)
}

/// Frame-wide (max, min) of the per-pixel temporal-median amplitude,
/// estimated on up to `samples` evenly spaced frames.
fn reference_amplitude_range(video: &VideoSequence, kernel: &GaborKernel, samples: usize) -> (f64, f64) {
    let t = video.frame_count();
    let n = samples.clamp(1, t);
    let indices: Vec<usize> = (0..n).map(|i| i * (t - 1) / (n - 1).max(1)).collect();
    let planes: Vec<Vec<f64>> = indices
        .par_iter()
        .map(|&i| {
            let field = transform_indexed(video.frame(i), kernel, i).expect("kernel fits");
            field.values().iter().map(|c| c.norm()).collect()
        })
        .collect();
    let pixels = planes[0].len();
    let mut peak = 0.0f64;
    let mut floor = f64::MAX;
    let mut column = vec![0.0; planes.len()];
    for p in 0..pixels {
        for (j, plane) in planes.iter().enumerate() {
            column[j] = plane[p];
        }
        let med = median_in_place(&mut column);
        peak = peak.max(med);
        floor = floor.min(med);
    }
    (peak, floor)
}

/// A frame-wide amplitude plane with no spatial contrast means the scene has
/// no texture; what remains is the kernel's uniform DC leakage, whose phase
/// carries no motion.
fn amplitude_plane_has_contrast(peak: f64, floor: f64) -> bool {
    peak > 0.0 && (peak - floor) / peak > 1e-9
}

fn median_in_place(values: &mut [f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Per-point reliability over full coefficient planes: a point passes when
/// its temporal-median amplitude reaches `threshold_fraction` of the
/// frame-wide maximum temporal-median amplitude.
pub fn reliability_mask(pa_series: &[PhaseAmplitude], threshold_fraction: f64) -> Result<Vec<bool>> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "threshold_fraction must be in (0, 1), got {threshold_fraction}"
        )));
    }
    let first = pa_series.first().ok_or_else(|| Error::invalid("empty phase/amplitude series"))?;
    let pixels = first.amplitude.len();
    if pa_series.iter().any(|pa| pa.amplitude.len() != pixels) {
        return Err(Error::invalid("phase/amplitude planes differ in size"));
    }
    let mut medians = vec![0.0f64; pixels];
    let mut column = vec![0.0; pa_series.len()];
    for p in 0..pixels {
        for (j, pa) in pa_series.iter().enumerate() {
            column[j] = pa.amplitude[p];
        }
        medians[p] = median_in_place(&mut column);
    }
    let peak = medians.iter().cloned().fold(0.0f64, f64::max);
    let floor = medians.iter().cloned().fold(f64::MAX, f64::min);
    let usable = amplitude_plane_has_contrast(peak, floor);
    Ok(medians.iter().map(|&m| usable && m >= threshold_fraction * peak).collect())
}
