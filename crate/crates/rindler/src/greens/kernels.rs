//! Closed-form kernel bodies, generic over plain complex values and
//! derivative jets.
//!
//! 3+1 vacuum:   G⁺ = −(1/4π²) · 1/((Δt − iε)² − r²)
//! 3+1 thermal:  G⁺ = −(1/8πβr) · sinh(2πr/β) / [sinh(π(z−r)/β) sinh(π(z+r)/β)]
//!               written below as an even function of r (sinhc form), exact
//!               for all r including coincident spatial points; it is the
//!               closed form of the thermal image sum over Δt + inβ.
//! 1+1 vacuum:   G⁺ = −(1/4π) [ln(Δu − iε) + ln(Δv − iε) − ln ℓ²]
//! 1+1 thermal:  G⁺ = −(1/4π) ln[(β/π)² sinh(πΔu/β) sinh(πΔv/β)/ℓ²]
//!
//! Static mirrors subtract one image term; the moving point mirror uses the
//! Davies–Fulling ray map p(u).

use num_complex::Complex64;
use std::f64::consts::PI;

use super::jet::KernelScalar;
use super::raymap::RayMap;
use super::{CorrelatorKernel, GreensError, MirrorConfig, SpatialDim, StateKind};

fn wightman_vacuum_3p1<S: KernelScalar>(dt: S, r_sq: S) -> S {
    let q = dt * dt - r_sq;
    if !q.value().is_finite() {
        // interval overflow: the kernel underflows to zero long before
        return S::from_f(0.0);
    }
    q.recip().scale(-1.0 / (4.0 * PI * PI))
}

fn wightman_thermal_3p1<S: KernelScalar>(dt: S, r_sq: S, beta: f64) -> S {
    // w = (π/β)² r²; numerator sinhc(4w) = sinh(2πr/β)/(2πr/β);
    // denominator sinh²(πΔt/β) − w·sinhc(w)² = sinh²(πΔt/β) − sinh²(πr/β).
    let c = (PI / beta) * (PI / beta);
    let w = r_sq.scale(c);
    let sh = dt.scale(PI / beta).sinh();
    let sc = w.sinhc();
    let den = sh * sh - w * sc * sc;
    if !den.value().is_finite() {
        return S::from_f(0.0);
    }
    let num = w.scale(4.0).sinhc();
    (num * den.recip()).scale(-1.0 / (4.0 * beta * beta))
}

fn wightman_vacuum_1p1<S: KernelScalar>(du: S, dv: S, ell: f64) -> S {
    (du.ln() + dv.ln() - S::from_f(2.0 * ell.ln())).scale(-1.0 / (4.0 * PI))
}

fn wightman_thermal_1p1<S: KernelScalar>(du: S, dv: S, beta: f64, ell: f64) -> S {
    let c = 2.0 * (beta / PI).ln() - 2.0 * ell.ln();
    (ln_sinh(du.scale(PI / beta)) + ln_sinh(dv.scale(PI / beta)) + S::from_f(c))
        .scale(-1.0 / (4.0 * PI))
}

/// ln(sinh(w)), overflow-safe for large |Re w|. Arguments here always carry
/// a small negative imaginary part from the iε prescription, which fixes
/// the branch for Re w < 0: sinh lands in the lower half plane, so
/// ln(−sinh(−w)) = ln(sinh(−w)) − iπ.
fn ln_sinh<S: KernelScalar>(w: S) -> S {
    let re = w.value().re;
    if re.abs() < 20.0 {
        return w.sinh().ln();
    }
    let (wa, flip) = if re > 0.0 { (w, false) } else { (-w, true) };
    // ln sinh(x) = x − ln 2 + ln(1 − e^{−2x}) for Re x > 0; the correction
    // is below f64 resolution at |Re| ≥ 20
    let val = wa - S::from_f(std::f64::consts::LN_2);
    if flip {
        val - S::from_c(Complex64::new(0.0, PI))
    } else {
        val
    }
}

fn free_term<S: KernelScalar>(kernel: &CorrelatorKernel, y: &[S; 4], yp: &[S; 4]) -> S {
    let dt = y[0] - yp[0];
    match kernel.state.dim {
        SpatialDim::ThreePlusOne => {
            let dx = y[1] - yp[1];
            let dy = y[2] - yp[2];
            let dz = y[3] - yp[3];
            let r_sq = dx * dx + dy * dy + dz * dz;
            match kernel.state.kind {
                StateKind::Vacuum => wightman_vacuum_3p1(dt, r_sq),
                StateKind::Thermal { temperature } => {
                    wightman_thermal_3p1(dt, r_sq, 1.0 / temperature)
                }
            }
        }
        SpatialDim::OnePlusOne => {
            let dzed = y[1] - yp[1];
            let du = dt - dzed;
            let dv = dt + dzed;
            match kernel.state.kind {
                StateKind::Vacuum => wightman_vacuum_1p1(du, dv, kernel.ir_scale),
                StateKind::Thermal { temperature } => {
                    wightman_thermal_1p1(du, dv, 1.0 / temperature, kernel.ir_scale)
                }
            }
        }
    }
}

/// Reflect the second argument through a static mirror. The reflection is
/// linear, so jets (and their derivative seeds) transform consistently.
fn reflect<S: KernelScalar>(mirror: &MirrorConfig, y: &[S; 4]) -> [S; 4] {
    match mirror {
        MirrorConfig::StaticPlane3p1 { offset, normal } => {
            let d = y[1].scale(normal[0]) + y[2].scale(normal[1]) + y[3].scale(normal[2])
                - S::from_f(*offset);
            [
                y[0],
                y[1] - d.scale(2.0 * normal[0]),
                y[2] - d.scale(2.0 * normal[1]),
                y[3] - d.scale(2.0 * normal[2]),
            ]
        }
        MirrorConfig::StaticPoint1p1 { z0 } => {
            [y[0], S::from_f(2.0 * z0) - y[1], y[2], y[3]]
        }
        MirrorConfig::MovingPoint1p1 { .. } => unreachable!("moving mirror has no image point"),
    }
}

pub(super) fn eval_generic<S: KernelScalar>(
    kernel: &CorrelatorKernel,
    y: &[S; 4],
    yp: &[S; 4],
) -> Result<S, GreensError> {
    match &kernel.mirror {
        None => Ok(free_term(kernel, y, yp)),
        Some(m @ (MirrorConfig::StaticPlane3p1 { .. } | MirrorConfig::StaticPoint1p1 { .. })) => {
            let ypi = reflect(m, yp);
            Ok(free_term(kernel, y, yp) - free_term(kernel, y, &ypi))
        }
        Some(MirrorConfig::MovingPoint1p1 { .. }) => Err(GreensError::UnsupportedCombination(
            "moving-mirror kernels are evaluated through their ray map in null coordinates; \
             use the dedicated moving-mirror evaluator"
                .into(),
        )),
    }
}

/// In-vacuum Wightman function constrained by a moving point mirror, in
/// null coordinates on the field side (v ≥ p(u)):
///
///   G⁺ = −(1/4π) ln[ (Δv − iε)(p(u) − p(u′) − iε)
///                    / ((v − p(u′) − iε)(p(u) − v′ − iε)) ]
pub(super) fn wightman_moving_mirror(
    map: &RayMap,
    (u, v): (f64, f64),
    (up, vp): (f64, f64),
    epsilon: f64,
) -> Result<Complex64, GreensError> {
    if epsilon <= 0.0 {
        return Err(GreensError::BadRegulator(epsilon));
    }
    let pu = map.p(u)?;
    let pup = map.p(up)?;
    let tol = 1e-12 * (1.0 + v.abs().max(pu.abs()));
    if v < pu - tol {
        return Err(GreensError::PointBehindMirror { v, p_u: pu });
    }
    if vp < pup - tol {
        return Err(GreensError::PointBehindMirror { v: vp, p_u: pup });
    }
    let ie = Complex64::new(0.0, epsilon);
    let ln = |x: f64| (Complex64::new(x, 0.0) - ie).ln();
    let val = ln(v - vp) + ln(pu - pup) - ln(v - pup) - ln(pu - vp);
    Ok(val * (-1.0 / (4.0 * PI)))
}
