//! Worldline dynamics in a massless scalar quantum field with backreaction.
//!
//! The crate is organized around one pipeline:
//!
//! * [`geometry`] — Minkowski algebra, proper-time worldlines, closed-form
//!   reference trajectories (static, boosted, uniformly accelerated).
//! * [`greens`] — evaluable two-point functions of the field (Wightman,
//!   Hadamard, dissipation kernels) in vacuum and thermal states, free or
//!   Dirichlet-constrained by static and moving mirrors, plus their
//!   pullbacks along worldlines.
//! * [`ald`] — the semiclassical equation of motion with time-dependent
//!   dressing: order-reduced production integrator and a deliberately
//!   naive third-order mode that reproduces the classic runaway and
//!   preacceleration pathologies.
//! * [`noise`] — joint Gaussian sampling of the stochastic field χ and its
//!   gradient along a worldline from the Hadamard covariance, assembly of
//!   the Lorentz-covariant noise η, and spectral estimation.
//! * [`aldl`] — the linear Langevin equation for the fluctuation
//!   coordinate z(τ) around a mean worldline, ensembles over noise
//!   realizations, and fluctuation–dissipation checks.
//! * [`detector`] — excitation rates of a harmonic-oscillator detector on
//!   prescribed stationary trajectories, free or near mirrors.
//!
//! Units are natural (ħ = c = 1) with metric signature (+,−,−,−).

pub mod ald;
pub mod aldl;
pub mod detector;
pub mod geometry;
pub mod greens;
pub mod linalg;
pub mod noise;
pub mod quad;

pub use geometry::{
    minkowski_dot, renormalize_velocity, AnalyticTrajectory, FourVector, GeometryError,
    InterpolationOrder, Worldline, WorldlineState,
};
