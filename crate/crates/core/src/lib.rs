//! Exact engine for an integer-valued SU(3) Casson invariant τ of homology
//! 3-spheres.
//!
//! The crate works with "moduli data": the integers (spectral flows, h¹
//! dimensions) and rationals (Chern–Simons lifts) that a generic small
//! perturbation of the flat SU(3) moduli space determines. From that data
//! it evaluates λ′, τ″, τ, λ″, λ_SU(3) and λ_SU(2), checks the algebraic laws
//! they satisfy (perturbation independence, orientation reversal, connected
//! sum), and produces moduli data for Brieskorn spheres by enumerating their
//! SU(2) and SU(3) representations numerically.

pub mod brieskorn;
pub mod composition;
pub mod error;
pub mod invariants;
pub mod moduli;
pub mod moves;
pub mod rational;

pub use error::{Error, Result};
pub use invariants::{summarize, InvariantSummary};
pub use moduli::{
    deck_shift, validate, validate_with, BoundsPolicy, IrreducibleOrbit, ModuliData, OrbitKey, ReducibleComponent,
    ReducibleOrbit, ValidationReport, ViolationKind,
};
pub use rational::Rational;
