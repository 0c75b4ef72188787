//! Two-mode bosonic states generated by an asymmetric beam splitter.
//!
//! The crate carries every state in three independent representations:
//!
//! * [`exponent`]: the exact form `c·exp(w·a† + ½ a†ᵀF a†)|00⟩`, closed under
//!   displacements, passive mode mixing, quadratic squeezers and inner products;
//! * [`fock`]: truncated two-mode Fock vectors and operators, the brute-force
//!   oracle for every closed-form identity;
//! * [`phase_space`]: means and covariances of `(X₁, P₁, X₂, P₂)` propagated by
//!   symplectic maps.
//!
//! [`states`] builds the entangled kets `|η⟩` and `|η,θ⟩` and checks their
//! eigen-relations, [`squeezer`] implements the θ-dependent two-mode squeezer
//! `U`, and [`verify`] assembles representation-level experiments into
//! machine-readable reports.

pub mod error;
pub mod exponent;
pub mod fock;
pub mod phase_space;
pub mod squeezer;
pub mod states;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

use std::f64::consts::FRAC_PI_2;

/// Angles closer than this to 0 or π/2 are treated as the degenerate endpoints.
pub const ANGLE_EPS: f64 = 1e-12;

/// Rejects θ outside the open interval (0, π/2).
pub fn check_theta(theta: f64) -> Result<f64> {
    if theta.is_finite() && theta > ANGLE_EPS && theta < FRAC_PI_2 - ANGLE_EPS {
        Ok(theta)
    } else {
        Err(Error::DegenerateAngle { theta })
    }
}
