//! Orthogonal discrete auditory transform.
//!
//! The transform maps a real frame `s` to `S = X·DFT(s)`, where `X` is a
//! block-diagonal unitary built from the time-one map of a discrete
//! Schrödinger equation whose potential is a Bark-scale spreading matrix.
//! DC and Nyquist bins pass through unchanged and conjugate symmetry is
//! preserved, so the inverse of a real frame's spectrum is real.
//!
//! ```
//! use odat::propagator::PropagatorConfig;
//! use odat::transform::{forward, inverse, Frame, TransformPlan};
//!
//! let plan = TransformPlan::new(16, 16000.0, PropagatorConfig::DEFAULT).unwrap();
//! let frame = Frame::new((0..16).map(|i| (i as f64 * 0.3).sin()).collect()).unwrap();
//! let spectrum = forward(&frame, &plan).unwrap();
//! let back = inverse(&spectrum, &plan).unwrap();
//! assert!(back.samples().iter().zip(frame.samples()).all(|(a, b)| (a - b).abs() < 1e-12));
//! ```

pub mod auditory;
pub mod denoise;
pub mod error;
pub mod fft;
pub mod harness;
pub mod linalg;
pub mod matrix;
pub mod propagator;
pub mod transform;

pub use error::{Error, ErrorKind, Result};
