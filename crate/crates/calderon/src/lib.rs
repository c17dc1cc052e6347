//! Decreasing rearrangements of finite step functions, weighted weak and
//! Marcinkiewicz quasi-norms, and numerical machinery for the constants of
//! the bilateral inequality between the two norms.
//!
//! The crate is organised around four ideas:
//!
//! * [`rearrangement`]: a non-negative step function and its decreasing
//!   rearrangement, kept exactly equimeasurable by construction.
//! * [`weights`]: admissible weights `w` on `(0, ∞)` together with the
//!   Calderón constant `γ(w) = sup_t (w(t)/t) ∫_0^t du/w(u)`.
//! * [`norms`]: the weak quasi-norm `sup_t w(t) f*(t)`, the Marcinkiewicz
//!   quasi-norm `sup_t w(t) f**(t)`, subset reformulations of both, and a
//!   checker for `‖f‖*_w ≤ ‖f‖_w ≤ γ(w) ‖f‖*_w`.
//! * [`sharpness`]: the extremal profiles `f*(t) = 1 − t^κ` on `(0, 1)`
//!   whose norm ratios bound the best constant from below, and the sweep
//!   that turns them into an upper bound for the optimal ratio.

pub mod cli;
pub mod error;
pub mod io;
pub mod norms;
pub mod random;
pub mod rearrangement;
pub mod sharpness;
pub mod weights;

mod quadrature;
mod search;

pub use error::{Error, Result};
pub use norms::{
    exhaustive_subset_norm, greedy_subset_norm, marcinkiewicz_norm, random_subset_lower_bound,
    verify_bilateral, weak_norm, BilateralChecker, MarcNorm, NormReport, WeakNorm,
};
pub use rearrangement::{sample_analytic, DecreasingProfile, Piece, StepFunction};
pub use sharpness::{
    closed_form_ghk_power, f_double_star_kappa, f_star_kappa, g_kappa, h_kappa, k_kappa,
    theta_upper_bound, ExtremalSup, KappaReport, SharpnessOptions, ThetaSweep,
};
pub use weights::{gamma, gamma_closed_power, GammaEstimate, GammaOptions, Weight, WeightFamily};
