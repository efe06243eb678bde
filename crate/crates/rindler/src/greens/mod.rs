//! Two-point functions of the massless scalar field.
//!
//! Everything here is an evaluable object: Wightman function G⁺, Hadamard
//! function G_H = ⟨{φ, φ}⟩ = 2 Re G⁺, and the dissipation kernel (the odd
//! part of G⁺, which is what survives of the retarded function once its
//! local worldline limit has been absorbed into equation-of-motion
//! coefficients). States are vacuum or thermal, in one or three spatial
//! dimensions; Dirichlet mirrors enter through the method of images (static)
//! or a null-ray map (moving, 1+1).
//!
//! Regularization is iε time-splitting. Coordinate-space evaluators shift
//! Δt → Δt − iε; worldline pullbacks split covariantly in proper time,
//! x(τ − iε/2) against x(τ′ + iε/2), which preserves the closed forms used
//! as oracles (e.g. the sinh⁻² law on the uniformly accelerated worldline).

mod jet;
mod kernels;
mod pullback;
mod raymap;

pub use jet::{KernelScalar, TwoPointJet};
pub use pullback::{
    dissipation_pullback, hadamard_block_tetrad, hadamard_pullback, thermal_equivalence_check,
    wightman_pullback, Traj,
};
pub use raymap::{build_ray_map, mirror_energy_flux, MirrorMotion, RayMap};

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::FourVector;

#[derive(Debug, Error)]
pub enum GreensError {
    #[error("regulator must be positive, got ε = {0}")]
    BadRegulator(f64),
    #[error("operation requires a {expected} mirror, got {got}")]
    WrongVariant {
        expected: &'static str,
        got: &'static str,
    },
    #[error("mirror trajectory is not subluminal: |ż| reaches {max_speed}")]
    SuperluminalMirror { max_speed: f64 },
    #[error("could not bracket the reflection time for u = {u} within the trajectory span")]
    RootBracketFailure { u: f64 },
    #[error("point lies behind the mirror (v = {v} < p(u) = {p_u})")]
    PointBehindMirror { v: f64, p_u: f64 },
    #[error("ray map degenerate at u = {u}: p'(u) = {dp}")]
    DegenerateMap { u: f64, dp: f64 },
    #[error("unsupported kernel combination: {0}")]
    UnsupportedCombination(String),
    #[error("{0} requires a stationary trajectory")]
    NonStationary(&'static str),
    #[error("thermal state requires T > 0, got {0}")]
    BadTemperature(f64),
}

/// Spatial dimension of the field theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialDim {
    OnePlusOne,
    ThreePlusOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Vacuum,
    /// Thermal equilibrium at temperature T (KMS state), T > 0.
    Thermal { temperature: f64 },
}

/// Gaussian state of the massless field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldState {
    pub dim: SpatialDim,
    pub kind: StateKind,
}

impl FieldState {
    pub fn vacuum(dim: SpatialDim) -> Self {
        FieldState {
            dim,
            kind: StateKind::Vacuum,
        }
    }

    pub fn thermal(dim: SpatialDim, temperature: f64) -> Result<Self, GreensError> {
        if temperature <= 0.0 || !temperature.is_finite() {
            return Err(GreensError::BadTemperature(temperature));
        }
        Ok(FieldState {
            dim,
            kind: StateKind::Thermal { temperature },
        })
    }

    pub fn beta(&self) -> Option<f64> {
        match self.kind {
            StateKind::Vacuum => None,
            StateKind::Thermal { temperature } => Some(1.0 / temperature),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Hadamard,
    Wightman,
    /// Odd-in-Δτ part of the Wightman function. The pointwise retarded
    /// function never appears in the equations of motion — its local limit
    /// is already inside the dressed coefficients — so this kind exists for
    /// fluctuation–dissipation spectra only.
    Retarded,
}

/// Dirichlet boundary for the field.
#[derive(Debug, Clone)]
pub enum MirrorConfig {
    /// Plane {x⃗·n̂ = offset} in 3+1.
    StaticPlane3p1 { offset: f64, normal: [f64; 3] },
    /// Point mirror at z = z0 in 1+1.
    StaticPoint1p1 { z0: f64 },
    /// Prescribed point mirror worldline z(t) in 1+1, |ż| < 1.
    MovingPoint1p1 { motion: MirrorMotion },
}

impl MirrorConfig {
    pub fn static_plane_z(offset: f64) -> Self {
        MirrorConfig::StaticPlane3p1 {
            offset,
            normal: [0.0, 0.0, 1.0],
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            MirrorConfig::StaticPlane3p1 { .. } => "static-plane-3p1",
            MirrorConfig::StaticPoint1p1 { .. } => "static-point-1p1",
            MirrorConfig::MovingPoint1p1 { .. } => "moving-point-1p1",
        }
    }
}

/// Evaluable two-point function: choose the kind, the field state, an
/// optional mirror, and the point-splitting width ε.
#[derive(Debug, Clone)]
pub struct CorrelatorKernel {
    pub kind: KernelKind,
    pub state: FieldState,
    pub mirror: Option<MirrorConfig>,
    pub epsilon: f64,
    /// Infrared scale ℓ of the 1+1 logarithm. It cancels in every
    /// constrained combination and in all spectra; it only shifts the free
    /// 1+1 value by a constant.
    pub ir_scale: f64,
}

impl CorrelatorKernel {
    pub fn new(kind: KernelKind, state: FieldState, epsilon: f64) -> Result<Self, GreensError> {
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(GreensError::BadRegulator(epsilon));
        }
        Ok(CorrelatorKernel {
            kind,
            state,
            mirror: None,
            epsilon,
            ir_scale: 1.0,
        })
    }

    pub fn hadamard(state: FieldState, epsilon: f64) -> Result<Self, GreensError> {
        Self::new(KernelKind::Hadamard, state, epsilon)
    }

    pub fn wightman(state: FieldState, epsilon: f64) -> Result<Self, GreensError> {
        Self::new(KernelKind::Wightman, state, epsilon)
    }

    pub fn with_mirror(mut self, mirror: MirrorConfig) -> Result<Self, GreensError> {
        match (&mirror, self.state.dim) {
            (MirrorConfig::StaticPlane3p1 { .. }, SpatialDim::ThreePlusOne) => {}
            (MirrorConfig::StaticPoint1p1 { .. }, SpatialDim::OnePlusOne) => {}
            (MirrorConfig::MovingPoint1p1 { .. }, SpatialDim::OnePlusOne) => {
                if self.state.kind != StateKind::Vacuum {
                    return Err(GreensError::UnsupportedCombination(
                        "moving mirror kernels are defined for the in-vacuum only".into(),
                    ));
                }
            }
            (m, d) => {
                return Err(GreensError::UnsupportedCombination(format!(
                    "{} mirror in {:?}",
                    m.variant_name(),
                    d
                )))
            }
        }
        self.mirror = Some(mirror);
        Ok(self)
    }

    /// Wightman value at two real spacetime points, with the coordinate iε
    /// prescription Δt → Δt − iε.
    pub fn wightman_at(&self, y: &FourVector, yp: &FourVector) -> Result<Complex64, GreensError> {
        let half = Complex64::new(0.0, -0.5 * self.epsilon);
        let mut yc = y.to_complex();
        let mut ypc = yp.to_complex();
        yc[0] += half;
        ypc[0] -= half;
        self.wightman_split(&yc, &ypc)
    }

    /// Hadamard value: G_H = ⟨{φ(y), φ(y′)}⟩ = 2 Re G⁺ (full anticommutator
    /// normalization, no ½).
    pub fn hadamard_at(&self, y: &FourVector, yp: &FourVector) -> Result<f64, GreensError> {
        Ok(2.0 * self.wightman_at(y, yp)?.re)
    }

    /// Core evaluator on complexified coordinates; the regulator must
    /// already be encoded in the inputs (coordinate shift or covariant
    /// proper-time splitting).
    pub fn wightman_split(
        &self,
        y: &[Complex64; 4],
        yp: &[Complex64; 4],
    ) -> Result<Complex64, GreensError> {
        kernels::eval_generic::<Complex64>(self, y, yp)
    }

    /// Jet evaluator: same closed forms, carrying first derivatives in both
    /// arguments and the mixed second-derivative block.
    pub fn wightman_jet(
        &self,
        y: &[Complex64; 4],
        yp: &[Complex64; 4],
    ) -> Result<TwoPointJet, GreensError> {
        let mut yj = [TwoPointJet::constant(Complex64::new(0.0, 0.0)); 4];
        let mut ypj = yj;
        for mu in 0..4 {
            yj[mu] = TwoPointJet::coord_a(y[mu], mu);
            ypj[mu] = TwoPointJet::coord_b(yp[mu], mu);
        }
        kernels::eval_generic::<TwoPointJet>(self, &yj, &ypj)
    }
}

/// Mirror image of a spacetime point under a static mirror; time component
/// unchanged. Applying it twice is the identity.
pub fn image_point(mirror: &MirrorConfig, y: &FourVector) -> Result<FourVector, GreensError> {
    match mirror {
        MirrorConfig::StaticPlane3p1 { offset, normal } => {
            let d = y[1] * normal[0] + y[2] * normal[1] + y[3] * normal[2] - offset;
            Ok(FourVector::new(
                y[0],
                y[1] - 2.0 * d * normal[0],
                y[2] - 2.0 * d * normal[1],
                y[3] - 2.0 * d * normal[2],
            ))
        }
        MirrorConfig::StaticPoint1p1 { z0 } => {
            Ok(FourVector::new(y[0], 2.0 * z0 - y[1], y[2], y[3]))
        }
        MirrorConfig::MovingPoint1p1 { .. } => Err(GreensError::WrongVariant {
            expected: "static",
            got: "moving-point-1p1",
        }),
    }
}

/// Free-field Hadamard function with ε-regulated denominators.
pub fn hadamard_free(
    state: FieldState,
    y: &FourVector,
    yp: &FourVector,
    epsilon: f64,
) -> Result<f64, GreensError> {
    CorrelatorKernel::hadamard(state, epsilon)?.hadamard_at(y, yp)
}

/// Dirichlet-constrained Hadamard function for a static mirror:
/// G_H(y,y′) − G_H(y, image(y′)).
pub fn hadamard_constrained_static(
    mirror: &MirrorConfig,
    state: FieldState,
    y: &FourVector,
    yp: &FourVector,
    epsilon: f64,
) -> Result<f64, GreensError> {
    if matches!(mirror, MirrorConfig::MovingPoint1p1 { .. }) {
        return Err(GreensError::WrongVariant {
            expected: "static",
            got: "moving-point-1p1",
        });
    }
    CorrelatorKernel::hadamard(state, epsilon)?
        .with_mirror(mirror.clone())?
        .hadamard_at(y, yp)
}

/// Constrained Hadamard function for a prescribed moving point mirror in
/// 1+1, in null coordinates (u, v) = (t − z, t + z) on the field side.
pub fn hadamard_constrained_moving_1p1(
    map: &RayMap,
    uv: (f64, f64),
    uv_p: (f64, f64),
    epsilon: f64,
) -> Result<f64, GreensError> {
    Ok(2.0 * kernels::wightman_moving_mirror(map, uv, uv_p, epsilon)?.re)
}

/// Wightman version of the moving-mirror kernel.
pub fn wightman_constrained_moving_1p1(
    map: &RayMap,
    uv: (f64, f64),
    uv_p: (f64, f64),
    epsilon: f64,
) -> Result<Complex64, GreensError> {
    kernels::wightman_moving_mirror(map, uv, uv_p, epsilon)
}
