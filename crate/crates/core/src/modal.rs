//! Frequency-domain feature extraction and damage decisions.
//!
//! Displacement signals become magnitude spectra (rectangular window; the
//! impulse-response records this tool targets decay to ~zero, so leakage is
//! negligible); resonances are picked as prominent spectral peaks; deflection
//! shapes are quantified by edge detection on motion-magnified frames; and a
//! baseline/test pair is compared through frequency shifts and the Modal
//! Assurance Criterion.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::VideoSequence;
use crate::pme::MotionSignal;

/// One-sided magnitude spectrum, DC through Nyquist.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Strictly increasing bin frequencies in Hz, `floor(N/2) + 1` of them.
    pub frequencies: Vec<f64>,
    /// Non-negative magnitudes, scaled so a full-record sinusoid of amplitude
    /// `a` reads `a` at its bin.
    pub magnitudes: Vec<f64>,
    /// Bin spacing `frame_rate / N` in Hz.
    pub resolution_hz: f64,
}

impl Spectrum {
    pub fn nyquist_hz(&self) -> f64 {
        *self.frequencies.last().unwrap_or(&0.0)
    }

    /// Frequency of the largest-magnitude bin above DC.
    pub fn dominant_frequency_hz(&self) -> Option<f64> {
        self.magnitudes
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| self.frequencies[k])
    }
}

/// Magnitude spectrum of a mean-removed series, rectangular window.
pub fn spectrum_of_series(series: &[f64], frame_rate_hz: f64) -> Result<Spectrum> {
    let n = series.len();
    if n < 8 {
        return Err(Error::invalid(format!("need >= 8 samples for a spectrum, got {n}")));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = series.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = n / 2 + 1;
    let df = frame_rate_hz / n as f64;
    let mut magnitudes = Vec::with_capacity(bins);
    for (k, v) in buf.iter().take(bins).enumerate() {
        // one-sided amplitude scaling; DC and Nyquist bins have no mirror
        let scale = if k == 0 || (n % 2 == 0 && k == n / 2) { 1.0 } else { 2.0 };
        magnitudes.push(scale * v.norm() / n as f64);
    }
    Ok(Spectrum {
        frequencies: (0..bins).map(|k| k as f64 * df).collect(),
        magnitudes,
        resolution_hz: df,
    })
}

/// Spectrum of one point of a motion signal; masked points are rejected.
pub fn spectrum(signal: &MotionSignal, point_index: usize) -> Result<Spectrum> {
    if point_index >= signal.point_count() {
        return Err(Error::invalid(format!(
            "point index {point_index} out of range ({} points)",
            signal.point_count()
        )));
    }
    if !signal.reliable[point_index] {
        return Err(Error::MaskedPoint { index: point_index });
    }
    spectrum_of_series(&signal.displacements_px[point_index], signal.frame_rate_hz)
}

/// Mean of per-point magnitude spectra over reliable points.
pub fn mean_spectrum(signal: &MotionSignal) -> Result<Spectrum> {
    let mut acc: Option<Spectrum> = None;
    let mut count = 0usize;
    for i in signal.reliable_indices() {
        let s = spectrum_of_series(&signal.displacements_px[i], signal.frame_rate_hz)?;
        match &mut acc {
            None => acc = Some(s),
            Some(a) => {
                for (m, v) in a.magnitudes.iter_mut().zip(&s.magnitudes) {
                    *m += v;
                }
            }
        }
        count += 1;
    }
    let mut out = acc.ok_or(Error::AllPointsMasked(signal.point_count()))?;
    for m in &mut out.magnitudes {
        *m /= count as f64;
    }
    Ok(out)
}

/// A picked resonance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModePeak {
    pub frequency_hz: f64,
    pub magnitude: f64,
    /// Height above the higher of the two flanking saddles.
    pub prominence: f64,
}

/// Peak-picking thresholds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PeakConfig {
    /// Candidates must reach this fraction of the spectrum maximum.
    pub min_prominence_fraction: f64,
    /// Greedy thinning radius in Hz.
    pub min_separation_hz: f64,
    pub max_peaks: usize,
}

impl Default for PeakConfig {
    fn default() -> Self {
        PeakConfig { min_prominence_fraction: 0.05, min_separation_hz: 2.0, max_peaks: 8 }
    }
}

/// Local maxima whose prominence reaches the relative threshold, greedily
/// thinned by magnitude to the separation radius, returned sorted by
/// frequency. DC and Nyquist bins never qualify. Filtering on prominence
/// rather than raw magnitude keeps the low-frequency skirt of decaying
/// records (a shallow bump against the removed mean) out of the peak list.
pub fn pick_peaks(spec: &Spectrum, cfg: &PeakConfig) -> Vec<ModePeak> {
    assert!(cfg.min_prominence_fraction > 0.0, "thresholds must be positive");
    assert!(cfg.min_separation_hz > 0.0, "thresholds must be positive");
    let m = &spec.magnitudes;
    let bins = m.len();
    if bins < 3 {
        return Vec::new();
    }
    let global_max = m[1..bins - 1].iter().cloned().fold(0.0f64, f64::max);
    if global_max <= 0.0 {
        return Vec::new();
    }
    let threshold = cfg.min_prominence_fraction * global_max;
    let mut candidates: Vec<(usize, f64)> = (1..bins - 1)
        .filter(|&k| m[k] > m[k - 1] && m[k] >= m[k + 1])
        .map(|k| (k, prominence_at(m, k)))
        .filter(|&(_, p)| p >= threshold)
        .collect();
    candidates.sort_by(|a, b| m[b.0].partial_cmp(&m[a.0]).unwrap());
    let mut accepted: Vec<(usize, f64)> = Vec::new();
    for (k, p) in candidates {
        if accepted.len() >= cfg.max_peaks {
            break;
        }
        let f = spec.frequencies[k];
        if accepted
            .iter()
            .all(|&(a, _)| (spec.frequencies[a] - f).abs() >= cfg.min_separation_hz)
        {
            accepted.push((k, p));
        }
    }
    accepted.sort_unstable_by_key(|&(k, _)| k);
    accepted
        .into_iter()
        .map(|(k, prominence)| ModePeak {
            frequency_hz: spec.frequencies[k],
            magnitude: m[k],
            prominence,
        })
        .collect()
}

/// Topographic prominence: walk each side until a higher bin (or the edge),
/// take the minimum seen, and subtract the larger of the two minima.
fn prominence_at(m: &[f64], k: usize) -> f64 {
    let peak = m[k];
    let mut left_min = peak;
    for i in (0..k).rev() {
        if m[i] > peak {
            break;
        }
        left_min = left_min.min(m[i]);
    }
    let mut right_min = peak;
    for &v in &m[k + 1..] {
        if v > peak {
            break;
        }
        right_min = right_min.min(v);
    }
    peak - left_min.max(right_min)
}

/// Image axis the structure's span lies along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanAxis {
    X,
    Y,
}

/// Sign of the intensity step the edge tracker locks onto, walking in the
/// transverse direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgePolarity {
    /// Dark-to-bright transition (first edge of a bright structure).
    Positive,
    /// Bright-to-dark transition.
    Negative,
    /// Strongest transition of either sign; may flip between opposite edges
    /// on symmetric silhouettes.
    Absolute,
}

/// Geometry and extraction settings for deflection-shape quantification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeConfig {
    pub structure_length_m: f64,
    pub span_axis: SpanAxis,
    /// Moving-average window (samples) applied to each transverse profile
    /// before differentiation; forced odd.
    pub smoothing_window: usize,
    /// Band label recorded on the output shape.
    pub frequency_hz: f64,
    /// Minimum smoothed-gradient magnitude for a column to count as having an
    /// edge.
    pub min_gradient: f64,
    pub edge_polarity: EdgePolarity,
    /// Moving-median window for outlier repair.
    pub outlier_window: usize,
}

impl ShapeConfig {
    pub fn new(structure_length_m: f64, span_axis: SpanAxis, frequency_hz: f64) -> Self {
        ShapeConfig {
            structure_length_m,
            span_axis,
            smoothing_window: 5,
            frequency_hz,
            min_gradient: 0.02,
            edge_polarity: EdgePolarity::Positive,
            outlier_window: 7,
        }
    }
}

/// Quantified deflection shape sampled along the span.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeflectionShape {
    /// Monotone increasing span positions in meters, zero at the first
    /// detected column.
    pub span_m: Vec<f64>,
    /// Displacements normalized so the largest magnitude is 1.
    pub displacement: Vec<f64>,
    pub frequency_hz: f64,
}

impl DeflectionShape {
    pub fn sample_count(&self) -> usize {
        self.span_m.len()
    }
}

/// Rest-position edge trace in pixel coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct RestEdge {
    /// Span coordinate (pixels) of each detected column.
    pub span_px: Vec<f64>,
    /// Temporal-median transverse edge position (pixels).
    pub edge_px: Vec<f64>,
}

/// Shape extraction output: the normalized shape plus diagnostics.
#[derive(Debug, Clone)]
pub struct ShapeExtraction {
    pub shape: DeflectionShape,
    pub rest_edge: RestEdge,
    /// Columns with no detectable edge.
    pub dropped_columns: usize,
    /// Frame index of maximum total deflection.
    pub peak_frame: usize,
    /// Samples replaced by the moving-median outlier repair.
    pub repaired_samples: usize,
}

/// Quantifies the deflection shape of a (typically motion-magnified) video.
///
/// Per span column the edge is located as the sub-pixel extremum of the
/// smoothed transverse intensity gradient; the frame of maximum total
/// deflection minus the temporal-median edge gives the shape. Isolated
/// outliers (beyond 3 MAD from a moving median) are replaced by the local
/// median, the span is calibrated to `structure_length_m`, and the shape is
/// normalized to unit peak magnitude.
pub fn extract_shape(video: &VideoSequence, cfg: &ShapeConfig) -> Result<ShapeExtraction> {
    if !(cfg.structure_length_m > 0.0) {
        return Err(Error::invalid("structure length must be > 0"));
    }
    let (span_len, transverse_len) = match cfg.span_axis {
        SpanAxis::X => (video.width() as usize, video.height() as usize),
        SpanAxis::Y => (video.height() as usize, video.width() as usize),
    };
    let n = video.frame_count();
    let window = cfg.smoothing_window.max(1) | 1; // force odd
    if transverse_len < window + 4 {
        return Err(Error::invalid("frame too small across the span for edge detection"));
    }

    // edge[t][col]: sub-pixel transverse edge position, NaN when undetected
    let mut profile = vec![0.0f64; transverse_len];
    let mut smoothed = vec![0.0f64; transverse_len];
    let mut edges = vec![f64::NAN; n * span_len];
    for t in 0..n {
        let frame = video.frame(t);
        for col in 0..span_len {
            for (j, p) in profile.iter_mut().enumerate() {
                *p = match cfg.span_axis {
                    SpanAxis::X => frame.get(col as u32, j as u32),
                    SpanAxis::Y => frame.get(j as u32, col as u32),
                };
            }
            moving_average(&profile, window, &mut smoothed);
            if let Some(pos) = locate_edge(&smoothed, cfg.edge_polarity, cfg.min_gradient) {
                edges[t * span_len + col] = pos;
            }
        }
    }

    // Keep columns detected in at least 80% of frames.
    let mut detected_cols = Vec::new();
    for col in 0..span_len {
        let hits = (0..n).filter(|&t| edges[t * span_len + col].is_finite()).count();
        if hits * 5 >= n * 4 {
            detected_cols.push(col);
        }
    }
    let dropped = span_len - detected_cols.len();
    if dropped * 5 > span_len {
        return Err(Error::InsufficientEdges { dropped, total: span_len });
    }
    if detected_cols.len() < 4 {
        return Err(Error::InsufficientEdges { dropped, total: span_len });
    }

    // Temporal median per detected column = rest position.
    let mut rest = Vec::with_capacity(detected_cols.len());
    let mut scratch = Vec::with_capacity(n);
    for &col in &detected_cols {
        scratch.clear();
        scratch.extend((0..n).filter_map(|t| {
            let e = edges[t * span_len + col];
            e.is_finite().then_some(e)
        }));
        scratch.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        rest.push(median_of_sorted(&scratch));
    }

    // Frame of maximum total deflection.
    let mut peak_frame = 0usize;
    let mut peak_total = -1.0f64;
    for t in 0..n {
        let total: f64 = detected_cols
            .iter()
            .enumerate()
            .map(|(i, &col)| {
                let e = edges[t * span_len + col];
                if e.is_finite() {
                    (e - rest[i]).abs()
                } else {
                    0.0
                }
            })
            .sum();
        if total > peak_total {
            peak_total = total;
            peak_frame = t;
        }
    }

    let mut shape_px: Vec<f64> = detected_cols
        .iter()
        .enumerate()
        .map(|(i, &col)| {
            let e = edges[peak_frame * span_len + col];
            if e.is_finite() {
                e - rest[i]
            } else {
                0.0
            }
        })
        .collect();

    let repaired = repair_outliers(&mut shape_px, cfg.outlier_window.max(3) | 1);

    let peak = shape_px.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroNormShape);
    }
    let displacement: Vec<f64> = shape_px.iter().map(|v| v / peak).collect();

    let first = detected_cols[0] as f64;
    let last = *detected_cols.last().unwrap() as f64;
    let extent = (last - first).max(1.0);
    let span_m: Vec<f64> = detected_cols
        .iter()
        .map(|&c| (c as f64 - first) / extent * cfg.structure_length_m)
        .collect();

    Ok(ShapeExtraction {
        shape: DeflectionShape { span_m, displacement, frequency_hz: cfg.frequency_hz },
        rest_edge: RestEdge {
            span_px: detected_cols.iter().map(|&c| c as f64).collect(),
            edge_px: rest,
        },
        dropped_columns: dropped,
        peak_frame,
        repaired_samples: repaired,
    })
}

fn moving_average(input: &[f64], window: usize, out: &mut [f64]) {
    let n = input.len();
    let half = window / 2;
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        out[i] = input[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
    }
}

/// Sub-pixel extremum of the central-difference gradient of a smoothed
/// profile; `None` when the strongest gradient stays under `min_gradient`.
///
/// The position is the centroid of the gradient lobe around the peak. The
/// lobe translates rigidly with the edge (box smoothing flattens its top, so
/// a parabolic fit would be ill-conditioned), making the centroid exact for
/// sub-pixel shifts.
fn locate_edge(smoothed: &[f64], polarity: EdgePolarity, min_gradient: f64) -> Option<f64> {
    let n = smoothed.len();
    let grad = |j: usize| (smoothed[j + 1] - smoothed[j - 1]) / 2.0;
    let score = |g: f64| match polarity {
        EdgePolarity::Positive => g,
        EdgePolarity::Negative => -g,
        EdgePolarity::Absolute => g.abs(),
    };
    let mut best_j = 0usize;
    let mut best = f64::MIN;
    for j in 1..n - 1 {
        let s = score(grad(j));
        if s > best {
            best = s;
            best_j = j;
        }
    }
    if best < min_gradient {
        return None;
    }
    // centroid over the contiguous lobe down to the zero crossings
    let mut lo = best_j;
    while lo > 1 && score(grad(lo - 1)) > 0.0 {
        lo -= 1;
    }
    let mut hi = best_j;
    while hi + 2 < n && score(grad(hi + 1)) > 0.0 {
        hi += 1;
    }
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for j in lo..=hi {
        let s = score(grad(j));
        sum += s;
        weighted += s * j as f64;
    }
    Some(weighted / sum)
}

/// Replaces samples more than 3 median-absolute-deviations from a moving
/// median with that local median. Returns how many were replaced.
fn repair_outliers(values: &mut [f64], window: usize) -> usize {
    let n = values.len();
    if n < window {
        return 0;
    }
    let half = window / 2;
    let mut local_median = vec![0.0f64; n];
    let mut buf = Vec::with_capacity(window);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        buf.clear();
        buf.extend_from_slice(&values[lo..hi]);
        buf.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        local_median[i] = median_of_sorted(&buf);
    }
    let mut residuals: Vec<f64> = values.iter().zip(&local_median).map(|(v, m)| (v - m).abs()).collect();
    residuals.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mad = median_of_sorted(&residuals);
    if mad <= 0.0 {
        return 0;
    }
    let mut repaired = 0;
    for i in 0..n {
        if (values[i] - local_median[i]).abs() > 3.0 * mad {
            values[i] = local_median[i];
            repaired += 1;
        }
    }
    repaired
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Counts interior sign changes between samples whose magnitude reaches
/// `significance` (relative to the unit-normalized shape).
pub fn interior_node_count(shape: &DeflectionShape, significance: f64) -> usize {
    let mut count = 0;
    let mut last_sign = 0i8;
    for &d in &shape.displacement {
        if d.abs() < significance {
            continue;
        }
        let sign = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}

/// Modal Assurance Criterion between two shapes, resampled by linear
/// interpolation onto a common span grid: `|<a, b>|^2 / (<a, a> <b, b>)`.
pub fn mac(shape_a: &DeflectionShape, shape_b: &DeflectionShape) -> Result<f64> {
    let lo = shape_a.span_m[0].max(shape_b.span_m[0]);
    let hi = shape_a.span_m.last().unwrap().min(*shape_b.span_m.last().unwrap());
    if !(hi > lo) {
        return Err(Error::invalid("shape spans do not overlap"));
    }
    let n = shape_a.sample_count().max(shape_b.sample_count()).max(2);
    let mut dot = 0.0f64;
    let mut na = 0.0f64;
    let mut nb = 0.0f64;
    for i in 0..n {
        let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let a = interp(&shape_a.span_m, &shape_a.displacement, s);
        let b = interp(&shape_b.span_m, &shape_b.displacement, s);
        dot += a * b;
        na += a * a;
        nb += b * b;
    }
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::ZeroNormShape);
    }
    Ok(dot * dot / (na * nb))
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => ys[i],
        Err(0) => ys[0],
        Err(i) if i >= xs.len() => ys[xs.len() - 1],
        Err(i) => {
            let (x0, x1) = (xs[i - 1], xs[i]);
            let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
            ys[i - 1] * (1.0 - t) + ys[i] * t
        }
    }
}

/// Modal features of one test article state.
#[derive(Debug, Clone, Default)]
pub struct FeatureSet {
    /// Resonances sorted by ascending frequency.
    pub peaks: Vec<ModePeak>,
    /// Deflection shapes paired with `peaks` by order; may be empty for a
    /// frequency-only comparison.
    pub shapes: Vec<DeflectionShape>,
}

/// Decision thresholds for the baseline/test comparison.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DamageThresholds {
    /// Frequency shifts beyond this magnitude indicate damage.
    pub freq_shift_hz: f64,
    /// MAC values below this indicate damage.
    pub mac: f64,
}

impl Default for DamageThresholds {
    fn default() -> Self {
        // 0.6 Hz matches the tool-vs-reference frequency agreement observed
        // on the blade test article; 0.85 the validated shape-similarity
        // floor.
        DamageThresholds { freq_shift_hz: 0.6, mac: 0.85 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BaselineConsistent,
    DamageIndicated,
}

impl Verdict {
    /// Process exit code contract: 0 consistent, 2 damage (1 is reserved for
    /// errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::BaselineConsistent => 0,
            Verdict::DamageIndicated => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::BaselineConsistent => write!(f, "baseline-consistent"),
            Verdict::DamageIndicated => write!(f, "damage-indicated"),
        }
    }
}

/// Per-mode comparison row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeComparison {
    pub baseline_hz: f64,
    pub test_hz: f64,
    pub shift_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mac: Option<f64>,
}

/// Feature-comparison verdict with the numbers behind it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DamageReport {
    pub thresholds: DamageThresholds,
    pub modes: Vec<ModeComparison>,
    pub verdict: Verdict,
}

/// Pairs modes by ascending-frequency order and decides between
/// baseline-consistent and damage-indicated: damage when any |shift| exceeds
/// the frequency threshold or any MAC falls below the MAC threshold.
pub fn detect_damage(
    baseline: &FeatureSet,
    test: &FeatureSet,
    thresholds: &DamageThresholds,
) -> Result<DamageReport> {
    if baseline.peaks.len() != test.peaks.len() {
        return Err(Error::ModeCountMismatch {
            baseline: baseline.peaks.len(),
            test: test.peaks.len(),
        });
    }
    if baseline.shapes.len() != test.shapes.len() {
        return Err(Error::ModeCountMismatch {
            baseline: baseline.shapes.len(),
            test: test.shapes.len(),
        });
    }
    if baseline.shapes.len() > baseline.peaks.len() {
        return Err(Error::invalid("more shapes than peaks"));
    }
    let mut base_sorted = baseline.peaks.clone();
    let mut test_sorted = test.peaks.clone();
    base_sorted.sort_by(|a, b| a.frequency_hz.partial_cmp(&b.frequency_hz).unwrap());
    test_sorted.sort_by(|a, b| a.frequency_hz.partial_cmp(&b.frequency_hz).unwrap());

    let mut modes = Vec::with_capacity(base_sorted.len());
    let mut damaged = false;
    for (i, (b, t)) in base_sorted.iter().zip(&test_sorted).enumerate() {
        let shift = t.frequency_hz - b.frequency_hz;
        let mode_mac = if i < baseline.shapes.len() {
            Some(mac(&baseline.shapes[i], &test.shapes[i])?)
        } else {
            None
        };
        if shift.abs() > thresholds.freq_shift_hz {
            damaged = true;
        }
        if let Some(m) = mode_mac {
            if m < thresholds.mac {
                damaged = true;
            }
        }
        modes.push(ModeComparison {
            baseline_hz: b.frequency_hz,
            test_hz: t.frequency_hz,
            shift_hz: shift,
            mac: mode_mac,
        });
    }
    Ok(DamageReport {
        thresholds: *thresholds,
        modes,
        verdict: if damaged { Verdict::DamageIndicated } else { Verdict::BaselineConsistent },
    })
}
