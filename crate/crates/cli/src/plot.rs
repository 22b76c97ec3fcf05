//! Minimal line-plot rendering to PNG for spectra and shapes.

use std::path::Path;

use anyhow::{Context, Result};

const WIDTH: u32 = 900;
const HEIGHT: u32 = 480;
const MARGIN: u32 = 40;

/// Renders `(x, y)` series as a dark polyline on white with plain axes.
pub fn line_plot(path: &Path, xs: &[f64], ys: &[f64], title: &str) -> Result<()> {
    let mut img = image::RgbImage::from_pixel(WIDTH, HEIGHT, image::Rgb([255, 255, 255]));
    let (x0, x1) = span(xs);
    let (y0, y1) = span(ys);
    let to_px = |x: f64, y: f64| -> (f32, f32) {
        let fx = (x - x0) / (x1 - x0).max(1e-300);
        let fy = (y - y0) / (y1 - y0).max(1e-300);
        (
            MARGIN as f32 + fx as f32 * (WIDTH - 2 * MARGIN) as f32,
            (HEIGHT - MARGIN) as f32 - fy as f32 * (HEIGHT - 2 * MARGIN) as f32,
        )
    };

    // axes
    for x in MARGIN..WIDTH - MARGIN {
        img.put_pixel(x, HEIGHT - MARGIN, image::Rgb([0, 0, 0]));
    }
    for y in MARGIN..HEIGHT - MARGIN {
        img.put_pixel(MARGIN, y, image::Rgb([0, 0, 0]));
    }
    // zero line when the data crosses it
    if y0 < 0.0 && y1 > 0.0 {
        let (_, zy) = to_px(x0, 0.0);
        for x in MARGIN..WIDTH - MARGIN {
            img.put_pixel(x, zy as u32, image::Rgb([200, 200, 200]));
        }
    }

    for pair in xs.iter().zip(ys).collect::<Vec<_>>().windows(2) {
        let (ax, ay) = to_px(*pair[0].0, *pair[0].1);
        let (bx, by) = to_px(*pair[1].0, *pair[1].1);
        draw_line(&mut img, ax, ay, bx, by);
    }

    let _ = title; // kept for call-site clarity; no text rasterizer
    img.save(path).with_context(|| format!("writing plot {}", path.display()))
}

fn span(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::MAX, f64::min);
    let hi = v.iter().cloned().fold(f64::MIN, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn draw_line(img: &mut image::RgbImage, x0: f32, y0: f32, x1: f32, y1: f32) {
    let steps = ((x1 - x0).abs().max((y1 - y0).abs()).ceil() as u32).max(1);
    for i in 0..=steps {
        let t = i as f32 / steps as f32;
        let x = (x0 + t * (x1 - x0)).round() as i64;
        let y = (y0 + t * (y1 - y0)).round() as i64;
        if x >= 0 && y >= 0 && (x as u32) < WIDTH && (y as u32) < HEIGHT {
            img.put_pixel(x as u32, y as u32, image::Rgb([30, 60, 160]));
        }
    }
}
