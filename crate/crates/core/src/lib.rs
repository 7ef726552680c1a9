//! Convolutional dynamical sampling on the integer lattice.
//!
//! A signal `f` on ℤ evolves under a finitely supported convolution kernel
//! `a`; samples `(Aˢf)(λ)` are taken for `s` in `0..N` at spatial locations
//! `λ` of a sampling pattern. This crate simulates the evolution, collects
//! space-time samples, recovers `f` by solving one small stacked Vandermonde
//! system per frequency bin, and certifies stability through frame bounds,
//! node-multiplicity checks and Banach-density bounds.
//!
//! Module map:
//!
//! * [`signal`]: kernels, signals, symbols, evolution, DTFT.
//! * [`sampling`]: sampling patterns, sample collection, density and gap statistics.
//! * [`spectral`]: node vectors, stacked systems, multiplicity, inverse-norm bounds.
//! * [`reconstruct`]: per-bin reconstruction, noise injection, error sweeps.
//! * [`frames`]: regularity envelopes, lemma constants, frame bounds, density certificates.
//! * [`io`]: the CSV / text file formats.

pub mod error;
pub mod frames;
pub mod io;
mod linalg;
pub mod reconstruct;
pub mod sampling;
pub mod signal;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use signal::{Frequency, FrequencyGrid, Kernel, Signal};
