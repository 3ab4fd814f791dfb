//! Geometry of full-rank `n×m` matrices ("frames") under the scale-invariant
//! metric `⟨u,v⟩_a = tr(u(aᵀa)⁻¹vᵀ)·√det(aᵀa)`, extended pointwise to
//! discretized vector-valued one-forms and to open curves.
//!
//! The crate is organized around the closed-form solution of the geodesic
//! initial value problem: every geodesic is `a(t) = f(t)^{1/m} e^{-s(t)ω₀} a₀ e^{s(t)P₀}`
//! for a quadratic `f` and explicit skew/square generators. On top of that sit
//!
//! * [`frame`] — the metric, traceless/pure-trace splitting, metric
//!   orthonormalization and the volume × unimodular product decomposition;
//! * [`geodesic`] — the geodesic ODE, its closed-form solution, blow-up
//!   classification, an independent RK4 integrator, path functionals and a
//!   shooting boundary-value solver;
//! * [`curvature`] — Christoffel symbols, the Riemann tensor (two independent
//!   evaluation routes), sectional curvature and seeded Monte-Carlo sign scans;
//! * [`submersion`] — the Riemannian submersion `a ↦ aᵀa` onto SPD matrices
//!   carrying the finite-dimensional Ebin metric, with horizontal lifts,
//!   orbit decomposition and the O'Neill curvature bookkeeping;
//! * [`forms`] — discretized one-forms over `[0,1]`, pointwise geodesics,
//!   distance bounds, reparametrization, and the curve ↔ one-form
//!   correspondence with closed-form curve geodesics;
//! * [`matrix`] — the dense small-matrix substrate (pseudoinverse, symmetric
//!   square root, matrix exponential, seeded Gaussian sampling).
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! when building without `std`. All types are plain immutable values and all
//! operations are pure functions, safe to call from any number of threads.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("building without `std` requires the `libm` feature for float math");

pub mod curvature;
pub mod error;
mod flt;
pub mod forms;
pub mod frame;
pub mod geodesic;
pub mod matrix;
pub mod submersion;

pub use error::Error;
pub use frame::{FrameMatrix, ProductPoint, TangentMatrix};
pub use geodesic::{GeodesicSolution, MatrixPath};
pub use matrix::{RealMatrix, Seed};

/// Full-rank threshold: `a` counts as full rank iff
/// `σ_min(a) > RANK_RTOL · max(n,m) · σ_max(a)`.
pub const RANK_RTOL: f64 = 1e-9;
