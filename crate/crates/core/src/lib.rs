//! Structural vibration analysis from monocular grayscale video.
//!
//! The pipeline stages are:
//!
//! 1. **imaging** – frame/video types, PNG/PGM directory I/O, contrast
//!    enhancement by dynamic-range remapping.
//! 2. **gabor** – discretized complex 2D Gabor wavelets.
//! 3. **pme** – phase-based motion estimation: coefficient fields,
//!    amplitude/phase split, per-point displacement from temporal phase
//!    differences.
//! 4. **magnify** – temporal band-pass phase magnification and video
//!    reconstruction.
//! 5. **modal** – spectra, peak picking, deflection-shape extraction by edge
//!    detection, MAC, and baseline-vs-test damage decisions.
//! 6. **synth** – ground-truth synthetic fixtures (moving Gaussian surface,
//!    cantilever beam scenes).

pub mod error;
pub mod export;
pub mod gabor;
pub mod imaging;
pub mod magnify;
pub mod modal;
pub mod pme;
pub mod synth;

pub use num_complex;

pub use error::{Error, Result};
pub use gabor::{make_kernel, GaborKernel, GaborParams};
pub use imaging::{Frame, IntensityHistogram, VideoSequence};
pub use magnify::{BandGainReport, BandpassSpec, FilteredPhaseStack};
pub use modal::{DamageReport, DamageThresholds, DeflectionShape, FeatureSet, ModePeak, Spectrum, Verdict};
pub use pme::{CoefficientField, MotionSignal, PhaseAmplitude, RoiSpec};
