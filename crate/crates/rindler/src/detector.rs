//! Excitation response of a pointlike detector on a prescribed trajectory.
//!
//! The detector's internal degree of freedom is a harmonic oscillator with
//! natural frequency Ω, linearly coupled to the (possibly mirror-
//! constrained) field along the worldline. In the prescribed-trajectory
//! approximation the accumulated response over an observation window is
//!
//!   F(Ω) = e² ∫∫ dτ dτ′ e^{−iΩ(τ−τ′)} G⁺(x(τ), x(τ′)),
//!
//! which for stationary trajectories reduces exactly to a single windowed
//! transform of the pullback. Monopole coupling uses the integrand as is;
//! minimal (derivative) coupling weights it by Ω².
//!
//! The sharp window makes the raw transform carry a universal switching
//! transient ~ ln(1/Ωε)/(2π²T_obs) sourced by the vacuum short-distance
//! singularity, which would drown Planck-suppressed rates. The integrand is
//! therefore split in the standard way: the exactly known inertial-vacuum
//! kernel W₀(s) = −1/(4π²(s−iε)²) is subtracted (the difference is regular
//! at s = 0, all singularities cancelling including their regulators) and
//! the exact inertial-vacuum rate, 0 for Ω > 0 and |Ω|/2π for Ω < 0, is
//! added back.

use thiserror::Error;

use crate::geometry::AnalyticTrajectory;
use crate::greens::{
    image_point, wightman_pullback, CorrelatorKernel, GreensError, MirrorConfig, SpatialDim,
    StateKind, Traj,
};
use crate::quad::{windowed_transform, WindowSpec};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("trajectory/kernel combination is not stationary: {0}")]
    NonStationaryTrajectory(String),
    #[error("observation window T_obs = {t_obs} must exceed 2π/|Ω| = {min}")]
    WindowTooShort { t_obs: f64, min: f64 },
    #[error("quadrature did not converge: error estimate {err:.3e} vs requested {tol:.3e}")]
    QuadratureNotConverged { err: f64, tol: f64 },
    #[error(transparent)]
    Greens(#[from] GreensError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// j = Q: response weight 1.
    Monopole,
    /// j = Q̇: the time derivative integrates by parts onto the phase,
    /// giving an Ω² weight.
    Minimal,
}

#[derive(Debug, Clone)]
pub struct DetectorConfig {
    /// Internal oscillator frequency. Positive for excitation; the
    /// quadrature accepts negative values for detailed-balance checks.
    pub omega: f64,
    pub coupling: Coupling,
    /// Coupling strength e (the rate scales as e²).
    pub coupling_strength: f64,
    pub trajectory: AnalyticTrajectory,
    pub kernel: CorrelatorKernel,
    pub t_obs: f64,
    /// Relative accuracy demanded of the quadrature.
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ResponseResult {
    /// Accumulated response F(Ω) over the window.
    pub f_omega: f64,
    /// F / T_obs, the excitation rate per unit proper time.
    pub rate: f64,
    pub error_estimate: f64,
}

/// Singularity locations for the stationary pullback. No decay truncation:
/// after the vacuum subtraction the integrand keeps an O(1/s²) tail from
/// the subtracted kernel, so the mesh always spans the full window.
fn window_spec(cfg: &DetectorConfig) -> Result<WindowSpec, DetectorError> {
    let mut spec = WindowSpec::new(cfg.t_obs, cfg.kernel.epsilon);
    match (&cfg.trajectory, &cfg.kernel.mirror) {
        (AnalyticTrajectory::UniformAcceleration { .. }, None) => {
            if cfg.kernel.state.kind != StateKind::Vacuum {
                return Err(DetectorError::NonStationaryTrajectory(
                    "accelerated detector in a thermal state".into(),
                ));
            }
        }
        (AnalyticTrajectory::UniformAcceleration { .. }, Some(_)) => {
            return Err(DetectorError::NonStationaryTrajectory(
                "accelerated detector near a mirror".into(),
            ));
        }
        (AnalyticTrajectory::Static { position }, mirror) => {
            if let Some(m) = mirror {
                if matches!(m, MirrorConfig::MovingPoint1p1 { .. }) {
                    return Err(DetectorError::NonStationaryTrajectory(
                        "moving mirror".into(),
                    ));
                }
                let im = image_point(m, position)?;
                let d = *position - im;
                let r_im = match cfg.kernel.state.dim {
                    SpatialDim::ThreePlusOne => d.spatial_norm(),
                    SpatialDim::OnePlusOne => d[1].abs(),
                };
                if r_im > 0.0 {
                    spec.singular_points.push(r_im);
                }
            }
        }
        (AnalyticTrajectory::UniformVelocity { .. }, None) => {}
        (AnalyticTrajectory::UniformVelocity { .. }, Some(_)) => {
            return Err(DetectorError::NonStationaryTrajectory(
                "moving detector near a mirror".into(),
            ));
        }
    }
    Ok(spec)
}

pub fn response_rate(cfg: &DetectorConfig) -> Result<ResponseResult, DetectorError> {
    let min_window = 2.0 * std::f64::consts::PI / cfg.omega.abs();
    if cfg.t_obs <= min_window {
        return Err(DetectorError::WindowTooShort {
            t_obs: cfg.t_obs,
            min: min_window,
        });
    }
    if cfg.kernel.state.dim != SpatialDim::ThreePlusOne {
        return Err(DetectorError::NonStationaryTrajectory(
            "detector response is implemented for the 3+1 field".into(),
        ));
    }
    let spec = window_spec(cfg)?;
    let traj = Traj::Analytic(cfg.trajectory);
    let eps = cfg.kernel.epsilon;
    let vac = |s: f64| {
        let d = num_complex::Complex64::new(s, -eps);
        -1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI * d * d)
    };
    let g = |s: f64| wightman_pullback(&cfg.kernel, &traj, s, &traj, 0.0).unwrap() - vac(s);
    let (mut val, mut err) = windowed_transform(g, cfg.omega, &spec);
    // exact inertial-vacuum rate added back
    if cfg.omega < 0.0 {
        val += -cfg.omega / (2.0 * std::f64::consts::PI);
    }

    let weight = match cfg.coupling {
        Coupling::Monopole => 1.0,
        Coupling::Minimal => cfg.omega * cfg.omega,
    };
    let e_sq = cfg.coupling_strength * cfg.coupling_strength;
    val *= weight * e_sq;
    err *= weight * e_sq;

    let tol = cfg.rel_tol * val.abs().max(1e-300);
    if err > tol.max(1e-10 * weight * e_sq) {
        return Err(DetectorError::QuadratureNotConverged { err, tol });
    }
    Ok(ResponseResult {
        f_omega: val * cfg.t_obs,
        rate: val,
        error_estimate: err,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceResponse {
    pub z: f64,
    pub rate: f64,
    pub error_estimate: f64,
    /// rate(z) / rate_free: the mirror modification factor.
    pub modification: f64,
}

/// Rate of a static detector at each distance from a static plane mirror,
/// plus the mirror modification factor extracted against the free rate.
pub fn response_vs_distance(
    cfg: &DetectorConfig,
    z_grid: &[f64],
) -> Result<Vec<DistanceResponse>, DetectorError> {
    let (offset, normal) = match &cfg.kernel.mirror {
        Some(MirrorConfig::StaticPlane3p1 { offset, normal }) => (*offset, *normal),
        other => {
            return Err(DetectorError::NonStationaryTrajectory(format!(
                "response_vs_distance needs a static plane mirror, got {other:?}"
            )))
        }
    };
    let mut free_cfg = cfg.clone();
    free_cfg.kernel.mirror = None;
    free_cfg.trajectory = AnalyticTrajectory::static_at_origin();
    let free = response_rate(&free_cfg)?;

    use rayon::prelude::*;
    z_grid
        .par_iter()
        .map(|&z| {
            let pos = crate::geometry::FourVector::new(
                0.0,
                normal[0] * (offset + z),
                normal[1] * (offset + z),
                normal[2] * (offset + z),
            );
            let mut c = cfg.clone();
            c.trajectory = AnalyticTrajectory::Static { position: pos };
            let r = response_rate(&c)?;
            Ok(DistanceResponse {
                z,
                rate: r.rate,
                error_estimate: r.error_estimate,
                modification: r.rate / free.rate,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::FieldState;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn wightman3(state: FieldState, eps: f64) -> CorrelatorKernel {
        CorrelatorKernel::wightman(state, eps).unwrap()
    }

    fn base(omega: f64, traj: AnalyticTrajectory, kernel: CorrelatorKernel) -> DetectorConfig {
        DetectorConfig {
            omega,
            coupling: Coupling::Monopole,
            coupling_strength: 1.0,
            trajectory: traj,
            kernel,
            t_obs: 200.0 / omega.abs(),
            rel_tol: 1e-4,
        }
    }

    #[test]
    fn inertial_vacuum_detector_stays_dark() {
        // the subtracted integrand vanishes identically here
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-5);
        let cfg = base(1.0, AnalyticTrajectory::static_at_origin(), k);
        let r = response_rate(&cfg).unwrap();
        assert!(r.rate.abs() < 1e-12, "vacuum rate {}", r.rate);

        // boosted inertial detector: same by Lorentz invariance
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-5);
        let traj = AnalyticTrajectory::uniform_velocity(
            crate::geometry::FourVector::ZERO,
            crate::geometry::FourVector::new(1.25, 0.75, 0.0, 0.0),
        )
        .unwrap();
        let cfg = base(1.0, traj, k);
        let r = response_rate(&cfg).unwrap();
        assert!(r.rate.abs() < 1e-10, "boosted vacuum rate {}", r.rate);
    }

    #[test]
    fn accelerated_detector_is_planckian() {
        // rate = (Ω/2π)/(e^{2πΩ/a} − 1); residue sum of the sinh⁻² pullback
        for (a, omega, tol) in [(2.0 * PI, 1.0, 2e-3), (1.0, 0.5, 1.5e-2)] {
            let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-6);
            let cfg = base(omega, AnalyticTrajectory::UniformAcceleration { a }, k);
            let r = response_rate(&cfg).unwrap();
            let expect = omega / (2.0 * PI) / ((2.0 * PI * omega / a).exp() - 1.0);
            assert_relative_eq!(r.rate, expect, max_relative = tol);
        }
        // spot value: a = 2π, Ω = 1 → 1/(2π(e−1)) ≈ 0.0926
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-6);
        let cfg = base(1.0, AnalyticTrajectory::UniformAcceleration { a: 2.0 * PI }, k);
        let r = response_rate(&cfg).unwrap();
        assert_abs_diff_eq!(r.rate, 0.0926, epsilon = 5e-4);
    }

    #[test]
    fn static_thermal_detector_with_mirror() {
        // rate = (Ω/2π) n(Ω) [1 − sin(2Ωz)/(2Ωz)]
        let t_temp = 1.0;
        let omega = 1.0;
        for z in [0.4, 1.1] {
            let k = wightman3(
                FieldState::thermal(SpatialDim::ThreePlusOne, t_temp).unwrap(),
                1e-6,
            )
            .with_mirror(MirrorConfig::static_plane_z(0.0))
            .unwrap();
            let traj = AnalyticTrajectory::Static {
                position: crate::geometry::FourVector::new(0.0, 0.0, 0.0, z),
            };
            let mut cfg = base(omega, traj, k);
            cfg.t_obs = 10_000.0;
            let r = response_rate(&cfg).unwrap();
            let n = 1.0 / ((omega / t_temp).exp() - 1.0);
            let bracket = 1.0 - (2.0 * omega * z).sin() / (2.0 * omega * z);
            let expect = omega / (2.0 * PI) * n * bracket;
            assert_relative_eq!(r.rate, expect, max_relative = 1e-3);
        }
    }

    #[test]
    fn detailed_balance_on_stationary_thermal_trajectories() {
        // rate(Ω)/rate(−Ω) = e^{−Ω/T_eff}, T_eff = a/2π for acceleration
        let a = 2.0;
        let omega = 0.6;
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-7);
        let cfg_p = base(omega, AnalyticTrajectory::UniformAcceleration { a }, k.clone());
        let mut cfg_m = cfg_p.clone();
        cfg_m.omega = -omega;
        let rp = response_rate(&cfg_p).unwrap();
        let rm = response_rate(&cfg_m).unwrap();
        let expect = (-2.0 * PI * omega / a).exp();
        assert_relative_eq!(rp.rate / rm.rate, expect, max_relative = 0.03);
    }

    #[test]
    fn minimal_coupling_is_omega_squared_weighted() {
        let a = 3.0;
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-6);
        let mut cfg = base(0.8, AnalyticTrajectory::UniformAcceleration { a }, k);
        let mono = response_rate(&cfg).unwrap();
        cfg.coupling = Coupling::Minimal;
        let min = response_rate(&cfg).unwrap();
        assert_relative_eq!(min.rate, 0.64 * mono.rate, max_relative = 1e-12);
    }

    #[test]
    fn mirror_modification_curve() {
        let t_temp = 1.0;
        let omega = 1.0;
        let k = wightman3(
            FieldState::thermal(SpatialDim::ThreePlusOne, t_temp).unwrap(),
            1e-6,
        )
        .with_mirror(MirrorConfig::static_plane_z(0.0))
        .unwrap();
        let mut cfg = base(
            omega,
            AnalyticTrajectory::Static {
                position: crate::geometry::FourVector::new(0.0, 0.0, 0.0, 1.0),
            },
            k,
        );
        cfg.t_obs = 100_000.0;
        let zs = [0.3, PI / (2.0 * omega), 2.0];
        let table = response_vs_distance(&cfg, &zs).unwrap();
        for row in &table {
            let bracket = 1.0 - (2.0 * omega * row.z).sin() / (2.0 * omega * row.z);
            assert_abs_diff_eq!(row.modification, bracket, epsilon = 1e-4);
            assert!(row.modification >= 0.0 && row.modification <= 1.22);
        }
        // first zero crossing of the correction: 2Ωz = π → modification 1
        assert_abs_diff_eq!(table[1].modification, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn window_validation() {
        let k = wightman3(FieldState::vacuum(SpatialDim::ThreePlusOne), 1e-6);
        let mut cfg = base(1.0, AnalyticTrajectory::static_at_origin(), k);
        cfg.t_obs = 1.0;
        assert!(matches!(
            response_rate(&cfg),
            Err(DetectorError::WindowTooShort { .. })
        ));
    }
}
