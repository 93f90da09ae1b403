//! Exact vibronic dynamics of a three-level trapped ion driven on motional
//! sidebands, and survival-probability indicators for the generalized
//! quantum Zeno effect.
//!
//! Internal units set ħ = 1. Energies (couplings α, β, γ) and angular
//! frequencies share one unit; times are measured in its inverse. Files
//! written by the CLI report times scaled by ω(0) = |α|/ħ.
//!
//! Module layout:
//! - [`fock`]: Fock-state ladder algebra, Lamb-Dicke couplings, sideband series.
//! - [`dynamics`]: invariant blocks of the sideband Hamiltonian and their
//!   propagation, in closed form and by an eigendecomposition oracle.
//! - [`indicators`]: Poincaré time, survival minimum, mean survival,
//!   sub-threshold measure and Zeno-interval detection.
//! - [`config`], [`commands`], [`figures`], [`validate`], [`csv`]: the CLI layer.

pub mod commands;
pub mod config;
pub mod csv;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod fock;
pub mod indicators;
pub mod validate;

pub use error::{Error, Result};

/// Reduced Planck constant in internal units.
pub const HBAR: f64 = 1.0;
