//! CSV/JSON export and import of analysis artifacts.
//!
//! Formats are fixed:
//! - motion: `time_s,point_0,point_1,...`
//! - spectrum: `freq_hz,magnitude`
//! - histogram: `bin_low,bin_high,count`
//! - shape: `span_m,displacement`
//! - rest edge: `span_px,edge_px`
//! - reports and metadata: pretty JSON

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gabor::{GaborKernel, GaborParams};
use crate::imaging::IntensityHistogram;
use crate::magnify::BandGainReport;
use crate::modal::{DamageReport, DeflectionShape, RestEdge, Spectrum};
use crate::pme::MotionSignal;

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Reader::from_reader(file))
}

/// Serializes any value as pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// `time_s,point_0,...` with one row per frame. Masked points are still
/// written; the metadata sidecar records which columns are reliable.
pub fn write_motion_csv(path: &Path, signal: &MotionSignal) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["time_s".to_string()];
    header.extend((0..signal.point_count()).map(|i| format!("point_{i}")));
    w.write_record(&header)?;
    for t in 0..signal.frame_count() {
        let mut row = Vec::with_capacity(signal.point_count() + 1);
        row.push((t as f64 / signal.frame_rate_hz).to_string());
        for p in 0..signal.point_count() {
            row.push(signal.displacements_px[p][t].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Sidecar metadata for a motion CSV.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct MotionMetadata {
    pub params: GaborParams,
    pub reliability_threshold: f64,
    pub frame_rate_hz: f64,
    pub frame_count: usize,
    pub points: Vec<(u32, u32)>,
    pub reliable: Vec<bool>,
}

impl MotionMetadata {
    pub fn of(signal: &MotionSignal) -> Self {
        MotionMetadata {
            params: signal.params,
            reliability_threshold: signal.reliability_threshold,
            frame_rate_hz: signal.frame_rate_hz,
            frame_count: signal.frame_count(),
            points: signal.points.clone(),
            reliable: signal.reliable.clone(),
        }
    }
}

/// Motion CSV read back into memory.
#[derive(Debug, Clone)]
pub struct MotionCsv {
    pub time_s: Vec<f64>,
    /// `[point][frame]`
    pub series: Vec<Vec<f64>>,
}

impl MotionCsv {
    /// Frame rate implied by the first time step.
    pub fn frame_rate_hz(&self) -> Result<f64> {
        if self.time_s.len() < 2 {
            return Err(Error::TooFewFrames { found: self.time_s.len() });
        }
        let dt = self.time_s[1] - self.time_s[0];
        if !(dt > 0.0) {
            return Err(Error::invalid("time column is not increasing"));
        }
        Ok(1.0 / dt)
    }

    /// Rebuilds a `MotionSignal`, marking every point reliable unless
    /// metadata says otherwise.
    pub fn into_signal(self, metadata: Option<MotionMetadata>) -> Result<MotionSignal> {
        let frame_rate_hz = self.frame_rate_hz()?;
        let n_points = self.series.len();
        let (params, reliable, points, threshold) = match metadata {
            Some(m) => (m.params, m.reliable, m.points, m.reliability_threshold),
            None => (
                GaborParams::with_wavelength(16.0, 0.0),
                vec![true; n_points],
                (0..n_points as u32).map(|i| (i, 0)).collect(),
                0.1,
            ),
        };
        if reliable.len() != n_points || points.len() != n_points {
            return Err(Error::invalid("metadata point count does not match CSV columns"));
        }
        Ok(MotionSignal {
            displacements_px: self.series,
            frame_rate_hz,
            params,
            reliable,
            points,
            reliability_threshold: threshold,
        })
    }
}

pub fn read_motion_csv(path: &Path) -> Result<MotionCsv> {
    let mut r = csv_reader(path)?;
    let headers = r.headers()?.clone();
    let n_points = headers.len().saturating_sub(1);
    if n_points == 0 {
        return Err(Error::Parse { path: path.into(), message: "no point columns".into() });
    }
    let mut time_s = Vec::new();
    let mut series = vec![Vec::new(); n_points];
    for record in r.records() {
        let record = record?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { path: path.into(), message: format!("bad number in column {i}") })
        };
        time_s.push(parse(0)?);
        for (p, column) in series.iter_mut().enumerate() {
            column.push(parse(p + 1)?);
        }
    }
    Ok(MotionCsv { time_s, series })
}

/// `freq_hz,magnitude`.
pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["freq_hz", "magnitude"])?;
    for (f, m) in spectrum.frequencies.iter().zip(&spectrum.magnitudes) {
        w.write_record([f.to_string(), m.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `bin_low,bin_high,count`.
pub fn write_histogram_csv(path: &Path, histogram: &IntensityHistogram) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["bin_low", "bin_high", "count"])?;
    for (i, &count) in histogram.counts.iter().enumerate() {
        w.write_record([
            histogram.bin_edges[i].to_string(),
            histogram.bin_edges[i + 1].to_string(),
            count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `span_m,displacement`.
pub fn write_shape_csv(path: &Path, shape: &DeflectionShape) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["span_m", "displacement"])?;
    for (s, d) in shape.span_m.iter().zip(&shape.displacement) {
        w.write_record([s.to_string(), d.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a shape CSV; `frequency_hz` is not stored in the CSV and must be
/// supplied (0.0 when unknown).
pub fn read_shape_csv(path: &Path, frequency_hz: f64) -> Result<DeflectionShape> {
    let mut r = csv_reader(path)?;
    let mut span_m = Vec::new();
    let mut displacement = Vec::new();
    for record in r.records() {
        let record = record?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { path: path.into(), message: format!("bad number in column {i}") })
        };
        span_m.push(parse(0)?);
        displacement.push(parse(1)?);
    }
    if span_m.len() < 2 {
        return Err(Error::Parse { path: path.into(), message: "shape needs >= 2 samples".into() });
    }
    Ok(DeflectionShape { span_m, displacement, frequency_hz })
}

/// `span_px,edge_px`.
pub fn write_rest_edge_csv(path: &Path, edge: &RestEdge) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["span_px", "edge_px"])?;
    for (s, e) in edge.span_px.iter().zip(&edge.edge_px) {
        w.write_record([s.to_string(), e.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Dumps kernel real/imaginary parts as two CSV grids (one row per kernel
/// row, no header).
pub fn write_kernel_csv(kernel: &GaborKernel, real_path: &Path, imag_path: &Path) -> Result<()> {
    let side = kernel.side();
    for (path, data) in [(real_path, kernel.real_part()), (imag_path, kernel.imag_part())] {
        let mut w = csv_writer(path)?;
        for row in data.chunks(side) {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Single-row CSV with the band gain summary.
pub fn write_band_gain_csv(path: &Path, report: &BandGainReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["f_c_hz", "b_hz", "alpha", "in_band_gain", "out_of_band_gain", "in_band_bins", "out_of_band_bins"])?;
    w.write_record([
        report.spec.f_c_hz.to_string(),
        report.spec.b_hz.to_string(),
        report.spec.alpha.to_string(),
        report.in_band_gain.to_string(),
        report.out_of_band_gain.to_string(),
        report.in_band_bins.to_string(),
        report.out_of_band_bins.to_string(),
    ])?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Human-readable aligned-column rendering of a damage report.
pub fn format_damage_report_text(report: &DamageReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verdict: {}\nthresholds: |shift| > {} Hz or MAC < {}\n\n",
        report.verdict, report.thresholds.freq_shift_hz, report.thresholds.mac
    ));
    out.push_str(&format!(
        "{:>4}  {:>12}  {:>12}  {:>10}  {:>8}\n",
        "mode", "baseline_hz", "test_hz", "shift_hz", "mac"
    ));
    for (i, m) in report.modes.iter().enumerate() {
        let mac = m.mac.map_or("-".to_string(), |v| format!("{v:.4}"));
        out.push_str(&format!(
            "{:>4}  {:>12.4}  {:>12.4}  {:>+10.4}  {:>8}\n",
            i + 1,
            m.baseline_hz,
            m.test_hz,
            m.shift_hz,
            mac
        ));
    }
    out
}

/// Writes both the JSON and aligned-text renderings of a damage report.
pub fn write_damage_report(json_path: &Path, text_path: &Path, report: &DamageReport) -> Result<()> {
    write_json(json_path, report)?;
    std::fs::write(text_path, format_damage_report_text(report)).map_err(|e| Error::io(text_path, e))
}
