//! Kernel pullbacks along worldlines.
//!
//! The regulator is a covariant proper-time splitting: the two points are
//! taken at complexified parameters τ − iε/2 and τ′ + iε/2. For the
//! closed-form trajectories this is exact analytic continuation, so the
//! pullback on the uniformly accelerated worldline reproduces
//! −a²/(16π²)·sinh⁻²(a(Δτ − iε)/2) to rounding; on sampled worldlines the
//! first-order split Δ − (iε/2)(u + u′) is used.
//!
//! Same-trajectory pullbacks on stationary trajectories are rebased to a
//! symmetric parameter pair (−Δτ/2, +Δτ/2) whenever the state shares the
//! trajectory's symmetry (time translations for static and boosted inertial
//! motion, boosts for the hyperbola in vacuum). This keeps coordinates
//! bounded on long accelerated worldlines; kernel values are unchanged.

use num_complex::Complex64;

use super::{CorrelatorKernel, GreensError, MirrorConfig, StateKind, TwoPointJet};
use crate::geometry::{comoving_tetrad, AnalyticTrajectory, FourVector, Worldline};

/// A trajectory a kernel can be pulled back along.
#[derive(Debug, Clone)]
pub enum Traj<'a> {
    Analytic(AnalyticTrajectory),
    Sampled(&'a Worldline),
}

impl<'a> Traj<'a> {
    fn position_split(&self, tau: f64, half_eps: f64) -> Result<[Complex64; 4], GreensError> {
        match self {
            Traj::Analytic(t) => Ok(t.position_c(Complex64::new(tau, -half_eps))),
            Traj::Sampled(w) => {
                let s = w
                    .interpolate(tau)
                    .map_err(|e| GreensError::UnsupportedCombination(e.to_string()))?;
                let mut out = s.x.to_complex();
                for mu in 0..4 {
                    out[mu] -= Complex64::new(0.0, half_eps) * s.u[mu];
                }
                Ok(out)
            }
        }
    }

    fn tetrad(&self, tau: f64) -> Result<[FourVector; 4], GreensError> {
        match self {
            Traj::Analytic(t) => Ok(comoving_tetrad(&t.state(tau))),
            Traj::Sampled(w) => {
                let s = w
                    .interpolate(tau)
                    .map_err(|e| GreensError::UnsupportedCombination(e.to_string()))?;
                Ok(comoving_tetrad(&s))
            }
        }
    }
}

/// Whether the pair (trajectory, kernel) admits a shift of both parameters
/// by the same amount without changing the pullback.
fn rebasable(kernel: &CorrelatorKernel, t1: &Traj, t2: &Traj) -> bool {
    let (a, b) = match (t1, t2) {
        (Traj::Analytic(a), Traj::Analytic(b)) => (a, b),
        _ => return false,
    };
    match (a, b) {
        // time translation: any homogeneous stationary state, mirror must
        // not move and the trajectory must not move relative to it
        (AnalyticTrajectory::Static { .. }, AnalyticTrajectory::Static { .. }) => {
            !matches!(kernel.mirror, Some(MirrorConfig::MovingPoint1p1 { .. }))
        }
        // spatial translation involved: only valid with no mirror
        (AnalyticTrajectory::UniformVelocity { .. }, AnalyticTrajectory::UniformVelocity { .. }) => {
            kernel.mirror.is_none()
        }
        // boost symmetry: vacuum only, no mirror
        (
            AnalyticTrajectory::UniformAcceleration { .. },
            AnalyticTrajectory::UniformAcceleration { .. },
        ) => kernel.state.kind == StateKind::Vacuum && kernel.mirror.is_none(),
        _ => false,
    }
}

fn split_pair<'a>(
    kernel: &CorrelatorKernel,
    t1: &Traj<'a>,
    tau: f64,
    t2: &Traj<'a>,
    tau_p: f64,
) -> Result<(f64, f64), GreensError> {
    // Returns the (possibly rebased) parameters to evaluate at.
    if rebasable(kernel, t1, t2) {
        let mid = 0.5 * (tau + tau_p);
        Ok((tau - mid, tau_p - mid))
    } else {
        Ok((tau, tau_p))
    }
}

/// Wightman function evaluated between two worldline points,
/// G⁺(x₁(τ), x₂(τ′)).
pub fn wightman_pullback(
    kernel: &CorrelatorKernel,
    t1: &Traj,
    tau: f64,
    t2: &Traj,
    tau_p: f64,
) -> Result<Complex64, GreensError> {
    let (ta, tb) = split_pair(kernel, t1, tau, t2, tau_p)?;
    let half = 0.5 * kernel.epsilon;
    let y = t1.position_split(ta, half)?;
    let yp = t2.position_split(tb, -half)?;
    kernel.wightman_split(&y, &yp)
}

/// Hadamard pullback, 2 Re G⁺.
pub fn hadamard_pullback(
    kernel: &CorrelatorKernel,
    t1: &Traj,
    tau: f64,
    t2: &Traj,
    tau_p: f64,
) -> Result<f64, GreensError> {
    Ok(2.0 * wightman_pullback(kernel, t1, tau, t2, tau_p)?.re)
}

/// Odd (dissipative) part of the Wightman pullback: Im G⁺, which by
/// hermiticity equals (G⁺(τ,τ′) − G⁺(τ′,τ))/2i.
pub fn dissipation_pullback(
    kernel: &CorrelatorKernel,
    t1: &Traj,
    tau: f64,
    t2: &Traj,
    tau_p: f64,
) -> Result<f64, GreensError> {
    Ok(wightman_pullback(kernel, t1, tau, t2, tau_p)?.im)
}

/// Hadamard pullback with derivatives, contracted into the comoving tetrads
/// of the two worldline points. Returns the 5×5 block
///
///   [ G_H           ∂′_(β) G_H      ]
///   [ ∂_(α) G_H     ∂_(α) ∂′_(β) G_H ]
///
/// with tetrad component indices (0..3) = (e₀ = u, e₁ ∥ ẍ, e₂, e₃). On a
/// static worldline the tetrad is the coordinate frame and these are plain
/// coordinate derivatives.
pub fn hadamard_block_tetrad(
    kernel: &CorrelatorKernel,
    t1: &Traj,
    tau: f64,
    t2: &Traj,
    tau_p: f64,
) -> Result<[[f64; 5]; 5], GreensError> {
    let (ta, tb) = split_pair(kernel, t1, tau, t2, tau_p)?;
    let half = 0.5 * kernel.epsilon;
    let y = t1.position_split(ta, half)?;
    let yp = t2.position_split(tb, -half)?;
    let jet: TwoPointJet = kernel.wightman_jet(&y, &yp)?;
    let ea = t1.tetrad(ta)?;
    let eb = t2.tetrad(tb)?;

    let mut block = [[0.0f64; 5]; 5];
    block[0][0] = 2.0 * jet.val.re;
    for b in 0..4 {
        let mut d = Complex64::new(0.0, 0.0);
        for nu in 0..4 {
            d += jet.db[nu] * eb[b][nu];
        }
        block[0][1 + b] = 2.0 * d.re;
    }
    for a in 0..4 {
        let mut d = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            d += jet.da[mu] * ea[a][mu];
        }
        block[1 + a][0] = 2.0 * d.re;
    }
    for a in 0..4 {
        for b in 0..4 {
            let mut d = Complex64::new(0.0, 0.0);
            for mu in 0..4 {
                for nu in 0..4 {
                    d += jet.dab[mu][nu] * (ea[a][mu] * eb[b][nu]);
                }
            }
            block[1 + a][1 + b] = 2.0 * d.re;
        }
    }
    Ok(block)
}

/// Max-abs difference over a Δτ grid between the vacuum Hadamard pullback
/// on the uniformly accelerated worldline and the thermal (T = a/2π)
/// pullback on a static worldline — the Unruh-thermality identity.
pub fn thermal_equivalence_check(
    a: f64,
    dtau_grid: &[f64],
    epsilon: f64,
) -> Result<f64, GreensError> {
    use super::{FieldState, SpatialDim};
    let vac = CorrelatorKernel::hadamard(FieldState::vacuum(SpatialDim::ThreePlusOne), epsilon)?;
    let th = CorrelatorKernel::hadamard(
        FieldState::thermal(SpatialDim::ThreePlusOne, a / (2.0 * std::f64::consts::PI))?,
        epsilon,
    )?;
    let hyp = Traj::Analytic(AnalyticTrajectory::UniformAcceleration { a });
    let stat = Traj::Analytic(AnalyticTrajectory::static_at_origin());
    let mut max_diff = 0.0f64;
    for &dt in dtau_grid {
        let v = hadamard_pullback(&vac, &hyp, dt, &hyp, 0.0)?;
        let t = hadamard_pullback(&th, &stat, dt, &stat, 0.0)?;
        max_diff = max_diff.max((v - t).abs());
    }
    Ok(max_diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::{FieldState, SpatialDim};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn vac3() -> FieldState {
        FieldState::vacuum(SpatialDim::ThreePlusOne)
    }

    #[test]
    fn hyperbola_pullback_matches_sinh_form() {
        // a = 2, Δτ = 1, ε → 0: −a²/(8π² sinh²(aΔτ/2)) ≈ −3.67e−2
        let a = 2.0;
        let k = CorrelatorKernel::hadamard(vac3(), 1e-9).unwrap();
        let hyp = Traj::Analytic(AnalyticTrajectory::UniformAcceleration { a });
        let v = hadamard_pullback(&k, &hyp, 1.0, &hyp, 0.0).unwrap();
        let expect = -a * a / (8.0 * PI * PI * (a * 0.5f64).sinh().powi(2));
        assert_relative_eq!(v, expect, max_relative = 1e-9);
        assert_abs_diff_eq!(v, -3.67e-2, epsilon = 1e-4);

        // independent oracle: substitute the closed-form trajectory into
        // the coordinate-space evaluator (coordinate iε, small).
        let traj = AnalyticTrajectory::UniformAcceleration { a };
        let y = traj.state(1.0).x;
        let yp = traj.state(0.0).x;
        let direct = crate::greens::hadamard_free(vac3(), &y, &yp, 1e-9).unwrap();
        assert_relative_eq!(v, direct, max_relative = 1e-6);
    }

    #[test]
    fn pullback_is_stationary_and_finite_at_coincidence() {
        let k = CorrelatorKernel::hadamard(vac3(), 1e-3).unwrap();
        let stat = Traj::Analytic(AnalyticTrajectory::static_at_origin());
        let v1 = hadamard_pullback(&k, &stat, 0.7, &stat, 0.7).unwrap();
        let v2 = hadamard_pullback(&k, &stat, 12.3, &stat, 12.3).unwrap();
        assert!(v1.is_finite());
        assert_abs_diff_eq!(v1, v2, epsilon = 1e-12 * v1.abs());
        // coincidence value of the regulated kernel: +1/(2π²ε²)
        assert_relative_eq!(v1, 1.0 / (2.0 * PI * PI * 1e-6), max_relative = 1e-10);
    }

    #[test]
    fn static_trajectory_spacelike_kernel_support() {
        // Hadamard support at spacelike separation: evaluate between two
        // parallel static worldlines at unequal spatial points.
        let k = CorrelatorKernel::hadamard(vac3(), 1e-6).unwrap();
        let a = Traj::Analytic(AnalyticTrajectory::static_at_origin());
        let b = Traj::Analytic(AnalyticTrajectory::Static {
            position: FourVector::new(0.0, 2.0, 0.0, 0.0),
        });
        let v = hadamard_pullback(&k, &a, 0.5, &b, 0.5).unwrap();
        assert!(v > 0.0, "spacelike Hadamard should be nonzero, got {v}");
    }

    #[test]
    fn unruh_thermality_identity() {
        let grid: Vec<f64> = (0..40).map(|i| 0.1 + 9.9 * i as f64 / 39.0).collect();
        for a in [0.5, 1.0, 2.0 * PI] {
            let eps = 1e-3 * 0.1; // ε ≤ 1e−3·min Δτ
            let d = thermal_equivalence_check(a, &grid, eps).unwrap();
            assert!(d < 1e-6, "a = {a}: max diff {d}");
        }
    }

    #[test]
    fn zero_acceleration_limit_approaches_static_vacuum() {
        let k = CorrelatorKernel::hadamard(vac3(), 1e-8).unwrap();
        let stat = Traj::Analytic(AnalyticTrajectory::static_at_origin());
        for dt in [0.5, 2.0] {
            let hyp = Traj::Analytic(AnalyticTrajectory::UniformAcceleration { a: 1e-4 });
            let v_h = hadamard_pullback(&k, &hyp, dt, &hyp, 0.0).unwrap();
            let v_s = hadamard_pullback(&k, &stat, dt, &stat, 0.0).unwrap();
            assert_relative_eq!(v_h, v_s, max_relative = 1e-6);
        }
    }

    #[test]
    fn wightman_consistency_and_odd_imaginary_part() {
        let k = CorrelatorKernel::wightman(vac3(), 1e-4).unwrap();
        let stat = Traj::Analytic(AnalyticTrajectory::static_at_origin());
        let w = wightman_pullback(&k, &stat, 1.3, &stat, 0.0).unwrap();
        let h = hadamard_pullback(&k, &stat, 1.3, &stat, 0.0).unwrap();
        assert_abs_diff_eq!(2.0 * w.re, h, epsilon = 1e-15 * h.abs());

        // G⁺(Δτ) = −1/(4π²(Δτ−iε)²) for the static vacuum pullback
        let dt = Complex64::new(1.3, -1e-4);
        let closed = -1.0 / (4.0 * PI * PI * dt * dt);
        assert_relative_eq!(w.re, closed.re, max_relative = 1e-12);
        assert_relative_eq!(w.im, closed.im, max_relative = 1e-12);

        // odd imaginary part
        let wm = wightman_pullback(&k, &stat, -1.3, &stat, 0.0).unwrap();
        assert_abs_diff_eq!(w.im, -wm.im, epsilon = 1e-18);
        let d = dissipation_pullback(&k, &stat, 1.3, &stat, 0.0).unwrap();
        assert_abs_diff_eq!(d, w.im, epsilon = 0.0);
    }

    #[test]
    fn sampled_worldline_pullback_tracks_analytic() {
        let a = 1.0;
        let traj = AnalyticTrajectory::UniformAcceleration { a };
        let w = traj.sample(0.0, 1e-3, 3001).unwrap();
        let k = CorrelatorKernel::hadamard(vac3(), 1e-4).unwrap();
        let v_s = hadamard_pullback(&k, &Traj::Sampled(&w), 2.0, &Traj::Sampled(&w), 0.5).unwrap();
        let v_a = hadamard_pullback(
            &k,
            &Traj::Analytic(traj),
            2.0,
            &Traj::Analytic(traj),
            0.5,
        )
        .unwrap();
        assert_relative_eq!(v_s, v_a, max_relative = 1e-6);
    }

    #[test]
    fn tetrad_block_matches_plain_value_and_is_stationary_on_hyperbola() {
        let k = CorrelatorKernel::hadamard(vac3(), 1e-2).unwrap();
        let hyp = Traj::Analytic(AnalyticTrajectory::UniformAcceleration { a: 1.0 });
        let b1 = hadamard_block_tetrad(&k, &hyp, 1.0, &hyp, 0.3).unwrap();
        let v = hadamard_pullback(&k, &hyp, 1.0, &hyp, 0.3).unwrap();
        assert_relative_eq!(b1[0][0], v, max_relative = 1e-12);

        // rebased evaluation keeps blocks a function of Δτ only, even far
        // along the hyperbola
        let b2 = hadamard_block_tetrad(&k, &hyp, 40.0, &hyp, 39.3).unwrap();
        let b3 = hadamard_block_tetrad(&k, &hyp, 1.0, &hyp, 0.3).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_abs_diff_eq!(b2[i][j], b3[i][j], epsilon = 1e-10 * (1.0 + b3[i][j].abs()));
            }
        }
    }

    #[test]
    fn tetrad_block_derivatives_match_finite_differences_static() {
        // On a static worldline the tetrad is the coordinate frame; check
        // ∂_(0)∂′_(0) and ∂_(2)∂′_(2) against finite differences of the
        // coordinate evaluator.
        let eps = 0.05;
        let k = CorrelatorKernel::hadamard(vac3(), eps).unwrap();
        let stat = Traj::Analytic(AnalyticTrajectory::static_at_origin());
        let block = hadamard_block_tetrad(&k, &stat, 0.9, &stat, 0.0).unwrap();

        let h = 1e-4;
        let f = |t: f64, y: f64, tp: f64, yp: f64| {
            k.hadamard_at(
                &FourVector::new(t, 0.0, y, 0.0),
                &FourVector::new(tp, 0.0, yp, 0.0),
            )
            .unwrap()
        };
        let d00 = (f(0.9 + h, 0.0, h, 0.0) - f(0.9 + h, 0.0, -h, 0.0) - f(0.9 - h, 0.0, h, 0.0)
            + f(0.9 - h, 0.0, -h, 0.0))
            / (4.0 * h * h);
        assert_relative_eq!(block[1][1], d00, max_relative = 1e-5);

        let d22 = (f(0.9, h, 0.0, h) - f(0.9, h, 0.0, -h) - f(0.9, -h, 0.0, h)
            + f(0.9, -h, 0.0, -h))
            / (4.0 * h * h);
        assert_relative_eq!(block[3][3], d22, max_relative = 1e-5);
    }

    #[test]
    fn hyperbola_transverse_block_matches_closed_form() {
        // ∂_(2)∂′_(2) G_H on the hyperbola: a⁴/(16π²)·Re sinh⁻⁴(a(Δτ−iε)/2).
        let a = 1.3;
        let eps = 1e-3;
        let k = CorrelatorKernel::hadamard(vac3(), eps).unwrap();
        let hyp = Traj::Analytic(AnalyticTrajectory::UniformAcceleration { a });
        let dt = 0.9;
        let block = hadamard_block_tetrad(&k, &hyp, dt, &hyp, 0.0).unwrap();
        let s = Complex64::new(dt, -eps) * a * 0.5;
        let closed = (a.powi(4) / (16.0 * PI * PI)) * (1.0 / s.sinh().powi(4)).re;
        assert_relative_eq!(block[3][3], closed, max_relative = 1e-10);
    }
}
