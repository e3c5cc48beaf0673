//! Polynomially overgenerated scale rings over Λ = (0, 1].
//!
//! A [`ScaleFamily`] fixes base gauges and a finite schedule of λ values;
//! "eventually" means "on the last `tail` schedule points". Elements of the
//! generated scale set are posynomial ratios ([`ScaleElement`]); arbitrary
//! nets enter as [`SampledNet`]s. Membership in the ring `A_B` and the
//! canonical ideal `I_B` is semi-decided by [`in_ring`] and [`in_ideal`].

mod family;
mod membership;
mod net;
mod normalize;
mod posynomial;
mod verdict;

pub use family::{
    Schedule, ScaleError, ScaleFamily, DEFAULT_SCHEDULE_LEN, DEFAULT_SCHEDULE_RATIO,
    DEFAULT_SCHEDULE_START, DEFAULT_TAIL,
};
pub use membership::{dominates, frontier, in_ideal, in_ring, Operand, DEFAULT_DEGREE};
pub use net::SampledNet;
pub use normalize::{normalize, Normalized};
pub use posynomial::{eventual_difference_sign, Monomial, Posynomial, ScaleElement};
pub use verdict::{Budget, Certificate, Evidence, Refutation, Verdict};

/// Swaps numerator and denominator; the scale set is closed under inversion.
pub fn invert(e: &ScaleElement) -> ScaleElement {
    e.invert()
}
