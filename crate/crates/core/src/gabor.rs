//! Discretized complex 2D Gabor wavelets.
//!
//! A Gabor wavelet is a complex sinusoid of wavelength `lambda` along the
//! rotated x' axis, modulated by a Gaussian envelope of standard deviation
//! `sigma` (aspect ratio `gamma` across it). Its quadrature pair gives every
//! image location a local amplitude and phase.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default envelope truncation in units of sigma.
pub const DEFAULT_TRUNCATION_SIGMAS: f64 = 3.0;

/// Default cap on the support radius; larger radii almost always mean a
/// misconfigured `lambda`/`sigma`.
pub const DEFAULT_RADIUS_CAP: usize = 257;

/// Parameters of a complex 2D Gabor wavelet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborParams {
    /// Wavelength of the sinusoid in pixels.
    pub lambda: f64,
    /// Orientation in radians; 0 responds to x-direction structure/motion.
    pub theta: f64,
    /// Phase offset in radians.
    pub psi: f64,
    /// Gaussian envelope standard deviation in pixels.
    pub sigma: f64,
    /// Spatial aspect ratio of the envelope.
    pub gamma: f64,
}

impl GaborParams {
    /// Standard quadrature-filter tie: `sigma = lambda / 2`, `gamma = 1`,
    /// `psi = 0`.
    pub fn with_wavelength(lambda: f64, theta: f64) -> Self {
        GaborParams { lambda, theta, psi: 0.0, sigma: lambda / 2.0, gamma: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::invalid(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::invalid(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !self.theta.is_finite() || !self.psi.is_finite() {
            return Err(Error::invalid("theta and psi must be finite"));
        }
        Ok(())
    }
}

/// Rotated coordinates: `x' = x cos(theta) + y sin(theta)`,
/// `y' = -x sin(theta) + y cos(theta)`.
#[inline]
pub fn rotate_coords(x: f64, y: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (x * c + y * s, -x * s + y * c)
}

/// Evaluates the complex Gabor wavelet at a continuous offset from its center.
#[inline]
pub fn evaluate(params: &GaborParams, x: f64, y: f64) -> Complex64 {
    let (xp, yp) = rotate_coords(x, y, params.theta);
    let envelope = (-(xp * xp + params.gamma * params.gamma * yp * yp)
        / (2.0 * params.sigma * params.sigma))
        .exp();
    let phase = 2.0 * std::f64::consts::PI * xp / params.lambda + params.psi;
    Complex64::from_polar(envelope, phase)
}

/// A Gabor wavelet sampled at integer pixel offsets on a square grid of side
/// `2 * support_radius + 1`, centered at the origin sample.
#[derive(Debug, Clone)]
pub struct GaborKernel {
    pub params: GaborParams,
    pub support_radius: usize,
    /// Row-major real part, side `2 * support_radius + 1`.
    real: Vec<f64>,
    /// Row-major imaginary part (quadrature component).
    imag: Vec<f64>,
}

impl GaborKernel {
    pub fn side(&self) -> usize {
        2 * self.support_radius + 1
    }

    /// Complex sample at integer offset `(dx, dy)` from the center;
    /// `|dx|, |dy| <= support_radius`.
    #[inline]
    pub fn at(&self, dx: i64, dy: i64) -> Complex64 {
        let r = self.support_radius as i64;
        debug_assert!(dx.abs() <= r && dy.abs() <= r);
        let idx = ((dy + r) * (2 * r + 1) + (dx + r)) as usize;
        Complex64::new(self.real[idx], self.imag[idx])
    }

    pub fn real_part(&self) -> &[f64] {
        &self.real
    }

    pub fn imag_part(&self) -> &[f64] {
        &self.imag
    }

    /// Sum of squared moduli over the support.
    pub fn energy(&self) -> f64 {
        self.real.iter().zip(&self.imag).map(|(r, i)| r * r + i * i).sum()
    }

    /// Sum of sample moduli (the Gaussian envelope mass). A real carrier
    /// texture of amplitude `a` at the kernel wavelength produces
    /// coefficients of modulus `a * envelope_mass() / 2`, which is what
    /// synthesis has to undo.
    pub fn envelope_mass(&self) -> f64 {
        self.real.iter().zip(&self.imag).map(|(r, i)| r.hypot(*i)).sum()
    }

    /// Splits the kernel into per-axis factors when its orientation is axis
    /// aligned, enabling separable convolution. Returns `None` for oblique
    /// orientations.
    ///
    /// The factorization satisfies `kernel(dx, dy) = along[dx] * across[dy]`
    /// for theta near 0 or pi (motion along x), with the roles of dx/dy
    /// swapped for theta near +-pi/2.
    pub fn separable_factors(&self) -> Option<SeparableKernel> {
        let (s, c) = self.params.theta.sin_cos();
        let r = self.support_radius as i64;
        let sig2 = 2.0 * self.params.sigma * self.params.sigma;
        let g2 = self.params.gamma * self.params.gamma;
        let k0 = 2.0 * std::f64::consts::PI / self.params.lambda;
        const EPS: f64 = 1e-12;
        if s.abs() < EPS {
            // x' = c*dx, y' = c*dy with c = +-1
            let along = (-r..=r)
                .map(|d| {
                    let d = d as f64;
                    Complex64::from_polar((-(d * d) / sig2).exp(), k0 * c * d + self.params.psi)
                })
                .collect();
            let across = (-r..=r).map(|d| (-(g2 * (d as f64).powi(2)) / sig2).exp()).collect();
            Some(SeparableKernel { axis: KernelAxis::X, along, across })
        } else if c.abs() < EPS {
            // x' = s*dy, y' = -s*dx with s = +-1
            let along = (-r..=r)
                .map(|d| {
                    let d = d as f64;
                    Complex64::from_polar((-(d * d) / sig2).exp(), k0 * s * d + self.params.psi)
                })
                .collect();
            let across = (-r..=r).map(|d| (-(g2 * (d as f64).powi(2)) / sig2).exp()).collect();
            Some(SeparableKernel { axis: KernelAxis::Y, along, across })
        } else {
            None
        }
    }
}

/// Axis carrying the complex (oscillatory) factor of a separable kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelAxis {
    X,
    Y,
}

/// Per-axis factors of an axis-aligned Gabor kernel.
#[derive(Debug, Clone)]
pub struct SeparableKernel {
    pub axis: KernelAxis,
    /// Complex factor along the oscillatory axis, indexed `-r..=r`.
    pub along: Vec<Complex64>,
    /// Real Gaussian factor across it, indexed `-r..=r`.
    pub across: Vec<f64>,
}

/// Samples the wavelet on its truncated support.
///
/// `support_radius = ceil(truncation_sigmas * sigma * max(1, 1/gamma))`; radii
/// above `DEFAULT_RADIUS_CAP` are rejected as misconfiguration.
pub fn make_kernel(params: &GaborParams, truncation_sigmas: f64) -> Result<GaborKernel> {
    make_kernel_capped(params, truncation_sigmas, DEFAULT_RADIUS_CAP)
}

/// `make_kernel` with an explicit radius cap.
pub fn make_kernel_capped(params: &GaborParams, truncation_sigmas: f64, radius_cap: usize) -> Result<GaborKernel> {
    params.validate()?;
    if !(truncation_sigmas > 0.0) {
        return Err(Error::invalid(format!(
            "truncation_sigmas must be > 0, got {truncation_sigmas}"
        )));
    }
    let radius = (truncation_sigmas * params.sigma * (1.0f64).max(1.0 / params.gamma)).ceil() as usize;
    if radius > radius_cap {
        return Err(Error::KernelRadiusExceedsCap { radius, cap: radius_cap });
    }
    let side = 2 * radius + 1;
    let mut real = vec![0.0; side * side];
    let mut imag = vec![0.0; side * side];
    let r = radius as i64;
    for dy in -r..=r {
        for dx in -r..=r {
            let v = evaluate(params, dx as f64, dy as f64);
            let idx = ((dy + r) * side as i64 + (dx + r)) as usize;
            real[idx] = v.re;
            imag[idx] = v.im;
        }
    }
    Ok(GaborKernel { params: *params, support_radius: radius, real, imag })
}
