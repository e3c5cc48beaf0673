//! Moderate and negligible nets of smooth functions over asymptotic scales.
//!
//! Nets `u(λ, x)` are written in a small expression language ([`expr`]),
//! compared against gauge scales indexed by a finite schedule of λ values
//! ([`scale`]), measured by grid seminorms ([`seminorm`]) and classified
//! ([`classifier`]). Everything numeric is generic over [`Scalar`] (`f32` or
//! `f64`); exponents and constants in expressions are exact rationals.

pub mod classifier;
pub mod expr;
pub mod scalar;
pub mod scale;
pub mod seminorm;

pub use scalar::{Rational, Scalar};

/// Double-precision scale family.
pub type Family = scale::ScaleFamily<f64>;
/// Double-precision sampled net.
pub type Net = scale::SampledNet<f64>;
/// Double-precision verdict.
pub type Verdict = scale::Verdict<f64>;
/// Double-precision box.
pub type Region = seminorm::CompactBox<f64>;
/// Double-precision seminorm net.
pub type SeminormNet = seminorm::SampledSeminormNet<f64>;
/// Double-precision classification report.
pub type Report = classifier::ClassificationReport<f64>;
/// Double-precision theorem report.
pub type Theorem = classifier::TheoremReport<f64>;

/// Single-precision scale family.
pub type Family32 = scale::ScaleFamily<f32>;
/// Single-precision box.
pub type Region32 = seminorm::CompactBox<f32>;
/// Single-precision verdict.
pub type Verdict32 = scale::Verdict<f32>;
