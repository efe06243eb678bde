//! Null-ray map of a prescribed moving mirror in 1+1.
//!
//! A left-moving ray at fixed null coordinate u = t − z reflects off the
//! mirror worldline z(t) into a right-moving ray at v = p(u), where the
//! reflection time t_m solves t_m − z(t_m) = u and p(u) = t_m + z(t_m).
//! Subluminal motion makes t − z(t) strictly increasing, so the solve is a
//! bracketed monotone root find. The radiated flux is the Schwarzian
//! derivative of the map,
//!
//!   ⟨T_uu⟩ = −(1/24π) [ p‴/p′ − (3/2)(p″/p′)² ].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::GreensError;

type ZFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type DFn = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

/// Prescribed mirror worldline z(t), optionally with analytic ż, z̈, z⃛.
#[derive(Clone)]
pub struct MirrorMotion {
    z: ZFn,
    derivs: Option<DFn>,
    pub t_range: (f64, f64),
}

impl fmt::Debug for MirrorMotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MirrorMotion")
            .field("t_range", &self.t_range)
            .finish()
    }
}

impl MirrorMotion {
    pub fn from_fn<F>(z: F, t_range: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MirrorMotion {
            z: Arc::new(z),
            derivs: None,
            t_range,
        }
    }

    pub fn from_fn_with_derivs<F, G>(z: F, derivs: G, t_range: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        MirrorMotion {
            z: Arc::new(z),
            derivs: Some(Arc::new(derivs)),
            t_range,
        }
    }

    /// Mirror at rest at z0.
    pub fn static_at(z0: f64, t_range: (f64, f64)) -> Self {
        Self::from_fn_with_derivs(move |_| z0, |_| (0.0, 0.0, 0.0), t_range)
    }

    /// Uniform velocity z = βt.
    pub fn uniform(beta: f64, t_range: (f64, f64)) -> Self {
        Self::from_fn_with_derivs(move |t| beta * t, move |_| (beta, 0.0, 0.0), t_range)
    }

    /// Hyperbolic worldline z(t) = √(b² + t²) − c (asymptotically null,
    /// always subluminal). Its ray map has the closed form
    /// p(u) = b²/(c − u) − c for u < c − b... used as an oracle in tests.
    pub fn hyperbolic(b: f64, c: f64, t_range: (f64, f64)) -> Self {
        Self::from_fn_with_derivs(
            move |t| (b * b + t * t).sqrt() - c,
            move |t| {
                let s = (b * b + t * t).sqrt();
                let zdot = t / s;
                let zdd = b * b / (s * s * s);
                let zddd = -3.0 * b * b * t / (s * s * s * s * s);
                (zdot, zdd, zddd)
            },
            t_range,
        )
    }

    /// Sampled worldline; cubic Hermite between nodes with finite-difference
    /// slopes. Node times must be strictly increasing.
    pub fn from_table(t: Vec<f64>, z: Vec<f64>) -> Result<Self, GreensError> {
        if t.len() < 3 || t.len() != z.len() || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GreensError::UnsupportedCombination(
                "mirror table needs ≥ 3 strictly increasing samples".into(),
            ));
        }
        let range = (t[0], t[t.len() - 1]);
        let mut slope = vec![0.0; t.len()];
        for i in 0..t.len() {
            let (i0, i1) = if i == 0 {
                (0, 1)
            } else if i == t.len() - 1 {
                (t.len() - 2, t.len() - 1)
            } else {
                (i - 1, i + 1)
            };
            slope[i] = (z[i1] - z[i0]) / (t[i1] - t[i0]);
        }
        let eval = move |x: f64| -> f64 {
            let i = t.partition_point(|&tt| tt <= x).clamp(1, t.len() - 1) - 1;
            let h = t[i + 1] - t[i];
            let s = ((x - t[i]) / h).clamp(0.0, 1.0);
            let (s2, s3) = (s * s, s * s * s);
            z[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
                + slope[i] * h * (s3 - 2.0 * s2 + s)
                + z[i + 1] * (-2.0 * s3 + 3.0 * s2)
                + slope[i + 1] * h * (s3 - s2)
        };
        Ok(MirrorMotion {
            z: Arc::new(eval),
            derivs: None,
            t_range: range,
        })
    }

    pub fn z(&self, t: f64) -> f64 {
        (self.z)(t)
    }

    fn zdot(&self, t: f64) -> f64 {
        if let Some(d) = &self.derivs {
            d(t).0
        } else {
            let h = 1e-6 * (1.0 + t.abs());
            ((self.z)(t + h) - (self.z)(t - h)) / (2.0 * h)
        }
    }
}

/// Monotone map v = p(u) relating reflected to incident null coordinates.
#[derive(Clone)]
pub struct RayMap {
    kind: RayMapKind,
}

#[derive(Clone)]
enum RayMapKind {
    Solved(MirrorMotion),
    Closed { p: ZFn, derivs: DFn },
}

impl fmt::Debug for RayMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RayMapKind::Solved(m) => write!(f, "RayMap::Solved({:?})", m),
            RayMapKind::Closed { .. } => write!(f, "RayMap::Closed"),
        }
    }
}

/// Build the ray map from a subluminal mirror trajectory. The subluminal
/// bound is checked by sampling ż over the trajectory span.
pub fn build_ray_map(motion: MirrorMotion) -> Result<RayMap, GreensError> {
    let (t0, t1) = motion.t_range;
    let n = 512;
    let mut max_speed = 0.0f64;
    for i in 0..=n {
        let t = t0 + (t1 - t0) * i as f64 / n as f64;
        max_speed = max_speed.max(motion.zdot(t).abs());
    }
    if max_speed >= 1.0 {
        return Err(GreensError::SuperluminalMirror { max_speed });
    }
    Ok(RayMap {
        kind: RayMapKind::Solved(motion),
    })
}

impl RayMap {
    /// Ray map from closed-form p and derivatives (p′, p″, p‴); used for
    /// reference maps like the exponential (thermal-flux) trajectory.
    pub fn from_closed<F, G>(p: F, derivs: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        RayMap {
            kind: RayMapKind::Closed {
                p: Arc::new(p),
                derivs: Arc::new(derivs),
            },
        }
    }

    /// Reflection time: solve t_m − z(t_m) = u to 1e−12 (bisection on the
    /// strictly increasing t − z(t), then Newton polish).
    fn reflection_time(motion: &MirrorMotion, u: f64) -> Result<f64, GreensError> {
        let f = |t: f64| t - motion.z(t);
        let (mut lo, mut hi) = motion.t_range;
        if u < f(lo) || u > f(hi) {
            return Err(GreensError::RootBracketFailure { u });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 * (1.0 + mid.abs()) {
                break;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..4 {
            let slope = 1.0 - motion.zdot(t);
            if slope <= 0.0 {
                break;
            }
            let step = (f(t) - u) / slope;
            t -= step;
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }

    pub fn p(&self, u: f64) -> Result<f64, GreensError> {
        match &self.kind {
            RayMapKind::Closed { p, .. } => Ok(p(u)),
            RayMapKind::Solved(motion) => {
                let t = Self::reflection_time(motion, u)?;
                Ok(t + motion.z(t))
            }
        }
    }

    /// (p′, p″, p‴). Analytic through the chain rule when the mirror
    /// trajectory supplies derivatives, otherwise finite differences on the
    /// solved map.
    pub fn derivatives(&self, u: f64) -> Result<(f64, f64, f64), GreensError> {
        match &self.kind {
            RayMapKind::Closed { derivs, .. } => Ok(derivs(u)),
            RayMapKind::Solved(motion) => {
                if let Some(d) = &motion.derivs {
                    let t = Self::reflection_time(motion, u)?;
                    let (zd, zdd, zddd) = d(t);
                    let s = 1.0 - zd;
                    let p1 = (1.0 + zd) / s;
                    let p2 = 2.0 * zdd / (s * s * s);
                    let p3 = 2.0 * zddd / (s * s * s * s) + 6.0 * zdd * zdd / (s * s * s * s * s);
                    Ok((p1, p2, p3))
                } else {
                    let h = 1e-3 * (1.0 + u.abs());
                    let p = |x: f64| self.p(x);
                    let (p2h, p1h, pm1h, pm2h) = (p(u + 2.0 * h)?, p(u + h)?, p(u - h)?, p(u - 2.0 * h)?);
                    let p0 = p(u)?;
                    let d1 = (-p2h + 8.0 * p1h - 8.0 * pm1h + pm2h) / (12.0 * h);
                    let d2 = (-p2h + 16.0 * p1h - 30.0 * p0 + 16.0 * pm1h - pm2h) / (12.0 * h * h);
                    let d3 = (p2h - 2.0 * p1h + 2.0 * pm1h - pm2h) / (2.0 * h * h * h);
                    Ok((d1, d2, d3))
                }
            }
        }
    }
}

/// Radiated null flux off the mirror, −(1/24π)·{Schwarzian of p}.
pub fn mirror_energy_flux(map: &RayMap, u: f64) -> Result<f64, GreensError> {
    let (p1, p2, p3) = map.derivatives(u)?;
    if p1 <= 0.0 {
        return Err(GreensError::DegenerateMap { u, dp: p1 });
    }
    let r2 = p2 / p1;
    Ok(-(p3 / p1 - 1.5 * r2 * r2) / (24.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn static_mirror_identity_map() {
        let map = build_ray_map(MirrorMotion::static_at(0.0, (-100.0, 100.0))).unwrap();
        for u in [-50.0, -1.0, 0.0, 0.3, 20.0] {
            assert!((map.p(u).unwrap() - u).abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn uniform_velocity_doppler_map() {
        let beta = 0.5;
        let map = build_ray_map(MirrorMotion::uniform(beta, (-200.0, 200.0))).unwrap();
        let d = (1.0 + beta) / (1.0 - beta);
        for u in [-30.0, -2.0, 0.0, 1.7, 40.0] {
            assert!((map.p(u).unwrap() - d * u).abs() < 1e-12 * (1.0 + u.abs()), "u = {u}");
        }
    }

    #[test]
    fn hyperbolic_mirror_matches_quadratic_oracle() {
        // z(t) = √(b² + t²) − c: the reflection condition is a quadratic
        // with solution p(u) = b²/(c − u) − c.
        let (b, c) = (1.0, 2.0);
        let map = build_ray_map(MirrorMotion::hyperbolic(b, c, (-400.0, 400.0))).unwrap();
        for u in [-20.0, -5.0, -1.0, 0.0, 1.0, 1.8] {
            let oracle = b * b / (c - u) - c;
            assert!(
                (map.p(u).unwrap() - oracle).abs() < 1e-10 * (1.0 + oracle.abs()),
                "u = {u}"
            );
        }
    }

    #[test]
    fn superluminal_rejected() {
        let m = MirrorMotion::from_fn(|t| 1.2 * t, (-10.0, 10.0));
        match build_ray_map(m) {
            Err(GreensError::SuperluminalMirror { max_speed }) => assert!(max_speed > 1.0),
            other => panic!("expected SuperluminalMirror, got {other:?}"),
        }
    }

    #[test]
    fn flux_of_static_and_affine_maps_vanishes() {
        let map = build_ray_map(MirrorMotion::static_at(0.0, (-50.0, 50.0))).unwrap();
        assert_eq!(mirror_energy_flux(&map, 0.3).unwrap(), 0.0);

        let map = build_ray_map(MirrorMotion::uniform(0.8, (-50.0, 50.0))).unwrap();
        assert_eq!(mirror_energy_flux(&map, -4.0).unwrap(), 0.0);
    }

    #[test]
    fn exponential_map_gives_constant_thermal_flux() {
        let kappa = 1.7;
        let map = RayMap::from_closed(
            move |u| -(-kappa * u).exp() / kappa,
            move |u| {
                let e = (-kappa * u).exp();
                (e, -kappa * e, kappa * kappa * e)
            },
        );
        for u in [-2.0, 0.0, 1.3, 5.0] {
            let f = mirror_energy_flux(&map, u).unwrap();
            assert_relative_eq!(f, kappa * kappa / (48.0 * PI), max_relative = 1e-12);
        }
    }

    #[test]
    fn table_built_map_tracks_callable() {
        let beta = 0.3;
        let t: Vec<f64> = (0..400).map(|i| -20.0 + 0.1 * i as f64).collect();
        let z: Vec<f64> = t.iter().map(|&tt| beta * tt).collect();
        let map = build_ray_map(MirrorMotion::from_table(t, z).unwrap()).unwrap();
        let d = (1.0 + beta) / (1.0 - beta);
        for u in [-10.0, -3.0, 0.0, 5.0] {
            assert_abs_diff_eq!(map.p(u).unwrap(), d * u, epsilon = 1e-8);
        }
        // finite-difference derivatives on the solved map
        let (p1, p2, _) = map.derivatives(0.5).unwrap();
        assert_abs_diff_eq!(p1, d, epsilon = 1e-6);
        assert_abs_diff_eq!(p2, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn bracket_failure_reported() {
        let m = MirrorMotion::static_at(0.0, (-1.0, 1.0));
        let map = build_ray_map(m).unwrap();
        assert!(matches!(
            map.p(50.0),
            Err(GreensError::RootBracketFailure { .. })
        ));
    }
}
