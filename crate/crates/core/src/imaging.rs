//! Frame and video representation, disk I/O, and contrast enhancement.
//!
//! Frames hold normalized `[0, 1]` intensities regardless of the source bit
//! depth; all downstream math is floating point. Sequences are loaded from
//! directories of grayscale PNG/PGM files in lexicographic filename order.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A single grayscale frame with intensities normalized to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Frame {
    width: u32,
    height: u32,
    /// Row-major intensity grid, `height * width` samples.
    intensity: Vec<f32>,
    /// Source quantization in bits (8 or 16 for file-backed frames).
    pub bit_depth: u8,
}

impl Frame {
    /// Builds a frame from row-major intensities, validating range and shape.
    pub fn new(width: u32, height: u32, intensity: Vec<f32>, bit_depth: u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("frame dimensions must be >= 1"));
        }
        if intensity.len() != (width as usize) * (height as usize) {
            return Err(Error::invalid(format!(
                "intensity buffer has {} samples, expected {}",
                intensity.len(),
                (width as usize) * (height as usize)
            )));
        }
        if let Some(bad) = intensity.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(Error::invalid(format!("intensity {bad} outside [0, 1]")));
        }
        Ok(Frame { width, height, intensity, bit_depth })
    }

    /// Builds a frame by evaluating `f(x, y)`; the closure must stay in `[0, 1]`.
    pub fn from_fn(width: u32, height: u32, bit_depth: u8, f: impl Fn(u32, u32) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y) as f32);
            }
        }
        Frame::new(width, height, data, bit_depth)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.intensity.len()
    }

    /// Intensity at pixel `(x, y)`; panics when out of bounds.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.intensity[y as usize * self.width as usize + x as usize] as f64
    }

    /// Raw row-major intensity slice.
    pub fn data(&self) -> &[f32] {
        &self.intensity
    }

    /// Row `y` as a contiguous slice.
    #[inline]
    pub fn row(&self, y: u32) -> &[f32] {
        let w = self.width as usize;
        &self.intensity[y as usize * w..(y as usize + 1) * w]
    }
}

/// An ordered sequence of equally sized frames with a fixed frame rate.
#[derive(Debug, Clone)]
pub struct VideoSequence {
    frames: Vec<Frame>,
    frame_rate_hz: f64,
}

impl VideoSequence {
    /// Validates uniform dimensions, `>= 2` frames, and a positive frame rate.
    pub fn new(frames: Vec<Frame>, frame_rate_hz: f64) -> Result<Self> {
        if !(frame_rate_hz > 0.0) || !frame_rate_hz.is_finite() {
            return Err(Error::invalid("frame rate must be > 0"));
        }
        if frames.len() < 2 {
            return Err(Error::TooFewFrames { found: frames.len() });
        }
        let (w, h) = (frames[0].width, frames[0].height);
        for (i, f) in frames.iter().enumerate() {
            if f.width != w || f.height != h {
                return Err(Error::MixedDimensions {
                    file: PathBuf::from(format!("frame index {i}")),
                    expected_w: w,
                    expected_h: h,
                    found_w: f.width,
                    found_h: f.height,
                });
            }
        }
        Ok(VideoSequence { frames, frame_rate_hz })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, index: usize) -> &Frame {
        &self.frames[index]
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate_hz
    }

    pub fn width(&self) -> u32 {
        self.frames[0].width
    }

    pub fn height(&self) -> u32 {
        self.frames[0].height
    }

    /// Time of frame `k` in seconds.
    pub fn time_of(&self, k: usize) -> f64 {
        k as f64 / self.frame_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.frame_count() as f64 / self.frame_rate_hz
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.frame_rate_hz / 2.0
    }
}

/// Pixel-count histogram over uniform intensity bins spanning `[0, 1]`.
#[derive(Debug, Clone)]
pub struct IntensityHistogram {
    /// `num_bins + 1` edges; bin `i` covers `[edges[i], edges[i+1])`, the last
    /// bin is closed on the right so 1.0 is counted.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl IntensityHistogram {
    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Counts pixel intensities of `frame` into `num_bins` uniform bins over `[0, 1]`.
pub fn histogram(frame: &Frame, num_bins: usize) -> Result<IntensityHistogram> {
    if num_bins < 2 {
        return Err(Error::invalid(format!("num_bins must be >= 2, got {num_bins}")));
    }
    let mut counts = vec![0u64; num_bins];
    for &v in frame.data() {
        let mut bin = (v as f64 * num_bins as f64) as usize;
        if bin >= num_bins {
            bin = num_bins - 1; // v == 1.0 lands in the last bin
        }
        counts[bin] += 1;
    }
    let bin_edges = (0..=num_bins).map(|i| i as f64 / num_bins as f64).collect();
    Ok(IntensityHistogram { bin_edges, counts })
}

/// Result of a contrast stretch: the remapped frame plus what the map did.
#[derive(Debug, Clone)]
pub struct EnhancedFrame {
    pub frame: Frame,
    /// Intensity mapped to 0.
    pub low_intensity: f64,
    /// Intensity mapped to 1.
    pub high_intensity: f64,
    /// Fraction of pixels clamped at either end.
    pub clamped_fraction: f64,
    /// True when the quantile endpoints coincide and the frame was returned
    /// unchanged.
    pub degenerate: bool,
}

/// Affine dynamic-range remap: the `low_quantile` intensity maps to 0 and the
/// `high_quantile` intensity to 1, clamped to `[0, 1]`.
///
/// A degenerate frame (equal quantile endpoints) is returned unchanged with
/// `degenerate` set.
pub fn enhance_contrast(frame: &Frame, low_quantile: f64, high_quantile: f64) -> Result<EnhancedFrame> {
    validate_quantiles(low_quantile, high_quantile)?;
    let (lo, hi) = frame_quantiles(frame, low_quantile, high_quantile);
    if hi - lo <= f64::EPSILON {
        return Ok(EnhancedFrame {
            frame: frame.clone(),
            low_intensity: lo,
            high_intensity: hi,
            clamped_fraction: 0.0,
            degenerate: true,
        });
    }
    let (mapped, clamped) = apply_affine_map(frame, lo, hi);
    Ok(EnhancedFrame {
        frame: mapped,
        low_intensity: lo,
        high_intensity: hi,
        clamped_fraction: clamped as f64 / frame.pixel_count() as f64,
        degenerate: false,
    })
}

/// Stretch endpoints estimated over a whole sequence so one map can be applied
/// to every frame (which leaves frame-to-frame phase differences untouched).
///
/// Quantiles are pooled over all frames, subsampling frames when the sequence
/// is large.
pub fn sequence_quantiles(video: &VideoSequence, low_quantile: f64, high_quantile: f64) -> Result<(f64, f64)> {
    validate_quantiles(low_quantile, high_quantile)?;
    const MAX_SAMPLES: usize = 8_000_000;
    let per_frame = video.frame(0).pixel_count();
    let stride = (per_frame * video.frame_count() / MAX_SAMPLES).max(1);
    let mut pooled: Vec<f32> = Vec::new();
    for (i, f) in video.frames().iter().enumerate() {
        if i % stride == 0 {
            pooled.extend_from_slice(f.data());
        }
    }
    pooled.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((
        sorted_quantile(&pooled, low_quantile),
        sorted_quantile(&pooled, high_quantile),
    ))
}

/// Applies one fixed affine intensity map to every frame of a sequence;
/// returns the remapped video and the fraction of pixels clamped.
pub fn apply_intensity_map(
    video: &VideoSequence,
    low_intensity: f64,
    high_intensity: f64,
) -> Result<(VideoSequence, f64)> {
    if high_intensity - low_intensity <= f64::EPSILON {
        return Err(Error::invalid("degenerate intensity map: endpoints coincide"));
    }
    let mapped: Vec<(Frame, usize)> = video
        .frames()
        .par_iter()
        .map(|f| apply_affine_map(f, low_intensity, high_intensity))
        .collect();
    let clamped: usize = mapped.iter().map(|(_, c)| c).sum();
    let total: usize = video.frame_count() * video.frame(0).pixel_count();
    let frames = mapped.into_iter().map(|(f, _)| f).collect();
    Ok((VideoSequence::new(frames, video.frame_rate_hz())?, clamped as f64 / total as f64))
}

fn validate_quantiles(lo: f64, hi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::invalid(format!(
            "quantiles must satisfy 0 <= low < high <= 1, got ({lo}, {hi})"
        )));
    }
    Ok(())
}

fn frame_quantiles(frame: &Frame, lo_q: f64, hi_q: f64) -> (f64, f64) {
    let mut sorted = frame.data().to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    (sorted_quantile(&sorted, lo_q), sorted_quantile(&sorted, hi_q))
}

/// Linear-interpolated quantile of an ascending-sorted slice.
fn sorted_quantile(sorted: &[f32], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 >= sorted.len() {
        sorted[sorted.len() - 1] as f64
    } else {
        sorted[i] as f64 * (1.0 - frac) + sorted[i + 1] as f64 * frac
    }
}

fn apply_affine_map(frame: &Frame, lo: f64, hi: f64) -> (Frame, usize) {
    let scale = 1.0 / (hi - lo);
    let mut clamped = 0usize;
    let data = frame
        .data()
        .iter()
        .map(|&v| {
            let mapped = (v as f64 - lo) * scale;
            if !(0.0..=1.0).contains(&mapped) {
                clamped += 1;
            }
            mapped.clamp(0.0, 1.0) as f32
        })
        .collect();
    let out = Frame {
        width: frame.width,
        height: frame.height,
        intensity: data,
        bit_depth: frame.bit_depth,
    };
    (out, clamped)
}

/// Loads a grayscale frame from a PNG or PGM file, normalizing by
/// `2^bit_depth - 1`.
pub fn load_frame(path: &Path) -> Result<Frame> {
    let img = image::open(path).map_err(|e| Error::Image { path: path.to_path_buf(), source: e })?;
    let (frame, _) = decode_image(img, path)?;
    Ok(frame)
}

fn decode_image(img: image::DynamicImage, path: &Path) -> Result<(Frame, u8)> {
    use image::DynamicImage::*;
    match img {
        ImageLuma16(buf) => {
            let (w, h) = (buf.width(), buf.height());
            let data = buf.into_raw().into_iter().map(|v| v as f32 / 65535.0).collect();
            Ok((Frame::new(w, h, data, 16)?, 16))
        }
        other => {
            // Anything else (8-bit gray, or color sources) is reduced to 8-bit
            // luma.
            let buf = other.into_luma8();
            let (w, h) = (buf.width(), buf.height());
            let data = buf.into_raw().into_iter().map(|v| v as f32 / 255.0).collect();
            Ok((Frame::new(w, h, data, 8)?, 8))
        }
    }
    .map_err(|e: Error| match e {
        Error::InvalidParameter(msg) => Error::Parse { path: path.to_path_buf(), message: msg },
        e => e,
    })
}

/// Frame files (`.png`/`.pgm`) of a directory in lexicographic order.
pub fn frame_paths(directory: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(directory).map_err(|e| Error::io(directory, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|s| s.to_str()).map(|s| s.to_ascii_lowercase()),
                Some(ref ext) if ext == "png" || ext == "pgm"
            )
        })
        .collect();
    if paths.is_empty() {
        return Err(Error::EmptyDirectory(directory.to_path_buf()));
    }
    paths.sort();
    Ok(paths)
}

/// Loads a frame directory as a video: every `.png`/`.pgm` file, lexicographic
/// filename order taken as temporal order.
pub fn load_sequence(directory: &Path, frame_rate_hz: f64) -> Result<VideoSequence> {
    let paths = frame_paths(directory)?;
    if paths.len() < 2 {
        return Err(Error::TooFewFrames { found: paths.len() });
    }

    let frames: Result<Vec<Frame>> = paths.par_iter().map(|p| load_frame(p)).collect();
    let frames = frames?;
    let (w, h) = (frames[0].width, frames[0].height);
    for (frame, path) in frames.iter().zip(&paths) {
        if frame.width != w || frame.height != h {
            return Err(Error::MixedDimensions {
                file: path.clone(),
                expected_w: w,
                expected_h: h,
                found_w: frame.width,
                found_h: frame.height,
            });
        }
    }
    VideoSequence::new(frames, frame_rate_hz)
}

/// Writes a frame as grayscale PNG at its source bit depth (8 or 16 bits).
pub fn save_frame(frame: &Frame, path: &Path) -> Result<()> {
    let err = |e: image::ImageError| Error::Image { path: path.to_path_buf(), source: e };
    if frame.bit_depth > 8 {
        let buf: Vec<u16> = frame.data().iter().map(|&v| (v as f64 * 65535.0).round() as u16).collect();
        let img = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(frame.width, frame.height, buf)
            .expect("buffer sized from frame");
        img.save_with_format(path, image::ImageFormat::Png).map_err(err)
    } else {
        let buf: Vec<u8> = frame.data().iter().map(|&v| (v as f64 * 255.0).round() as u8).collect();
        let img = image::ImageBuffer::<image::Luma<u8>, _>::from_raw(frame.width, frame.height, buf)
            .expect("buffer sized from frame");
        img.save_with_format(path, image::ImageFormat::Png).map_err(err)
    }
}

/// Writes every frame as `frame_NNNNN.png` under `directory`.
pub fn save_sequence(video: &VideoSequence, directory: &Path) -> Result<()> {
    std::fs::create_dir_all(directory).map_err(|e| Error::io(directory, e))?;
    video
        .frames()
        .par_iter()
        .enumerate()
        .map(|(i, f)| save_frame(f, &directory.join(format!("frame_{i:05}.png"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(())
}
