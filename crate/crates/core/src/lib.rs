//! Spectral analysis of primitive substitution subshifts.
//!
//! The crate decides structural properties of a substitution (primitivity,
//! pseudo-unimodularity, Pisot properties of the Perron eigenvalue),
//! proprifies it through return words, computes the additive group of
//! eigenvalues of its subshift, classifies the system, and renders Rauzy
//! fractals and domain exchanges.

pub mod cli;
pub mod exact;
pub mod geometry;
pub mod proprify;
pub mod spectrum;
pub mod substitution;
