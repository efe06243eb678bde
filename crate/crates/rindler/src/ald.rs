//! Semiclassical worldline dynamics with radiation reaction and dynamical
//! dressing.
//!
//! The equation of motion is
//!
//!   m(τ) ẍ_μ − ∂_μV = f_μ = e² g(τ) (ẋ_μ ẍ² + x⃛_μ),
//!
//! with dressing profiles m(τ) = m₀ − (κe²Λ/8π)·g_m(τ) and g(0) = 0,
//! g(∞) = 1 on the timescale τ_d ~ m₀r₀/Λ. The production integrator is
//! order-reduced: the jerk is replaced by the proper-time derivative of the
//! zeroth-order acceleration, which restores a causal second-order system
//! that needs only (x, u) initial data. The naive third-order mode keeps
//! x⃛ as a dynamical variable with g ≡ 1 and exists to demonstrate the
//! runaway and preacceleration pathologies it suffers from.

use thiserror::Error;

use crate::geometry::{
    renormalize_velocity, AnalyticTrajectory, FourVector, GeometryError, Worldline, WorldlineState,
};

#[derive(Debug, Error)]
pub enum AldError {
    #[error(
        "runaway-free condition violated: m0 = {m0} must exceed κe²Λ/8π = {bound:.6e}"
    )]
    RunawayBound { m0: f64, bound: f64 },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("naive third-order mode hit g(τ) = {g:.3e} at τ = {tau}; x⃛ is not solvable there")]
    GSingular { tau: f64, g: f64 },
    #[error("velocity left the timelike shell at τ = {tau}")]
    NonTimelikeStep { tau: f64 },
    #[error("state has no jerk data")]
    MissingJerk,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Bare-particle parameters. Construction enforces the runaway-free bound
/// m₀ > κe²Λ/8π, which also makes the renormalized mass positive.
#[derive(Debug, Clone, Copy)]
pub struct ParticleParams {
    pub m0: f64,
    pub e: f64,
    pub cutoff: f64,
    pub kappa: f64,
    pub r0: f64,
}

impl ParticleParams {
    pub fn new(m0: f64, e: f64, cutoff: f64, kappa: f64, r0: Option<f64>) -> Result<Self, AldError> {
        for (name, value) in [("m0", m0), ("cutoff", cutoff)] {
            if value <= 0.0 || !value.is_finite() {
                return Err(AldError::NonPositive { name, value });
            }
        }
        let r0 = r0.unwrap_or(e * e / (4.0 * std::f64::consts::PI * m0));
        if r0 <= 0.0 {
            return Err(AldError::NonPositive { name: "r0", value: r0 });
        }
        let p = ParticleParams { m0, e, cutoff, kappa, r0 };
        if p.m0 <= p.delta_m() {
            return Err(AldError::RunawayBound { m0, bound: p.delta_m() });
        }
        Ok(p)
    }

    pub fn e_sq(&self) -> f64 {
        self.e * self.e
    }

    /// κe²Λ/8π, the total mass shifted into the dressing cloud.
    pub fn delta_m(&self) -> f64 {
        self.kappa * self.e_sq() * self.cutoff / (8.0 * std::f64::consts::PI)
    }

    /// Renormalized late-time mass m(∞) = m₀ − κe²Λ/8π.
    pub fn m_inf(&self) -> f64 {
        self.m0 - self.delta_m()
    }

    /// Dressing timescale m₀r₀/Λ.
    pub fn default_tau_d(&self) -> f64 {
        self.m0 * self.r0 / self.cutoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchShape {
    Exponential,
    Smoothstep,
}

/// Monotone ramp with g(0) = 0 and g(∞) = 1. The exponential shape is
/// 1 − e^{−τ/τ_d}; smoothstep is the C² quintic completing at 3τ_d.
#[derive(Debug, Clone, Copy)]
pub struct SwitchProfile {
    pub shape: SwitchShape,
    pub tau_d: f64,
}

impl SwitchProfile {
    pub fn exponential(tau_d: f64) -> Result<Self, AldError> {
        if tau_d <= 0.0 {
            return Err(AldError::NonPositive { name: "tau_d", value: tau_d });
        }
        Ok(SwitchProfile { shape: SwitchShape::Exponential, tau_d })
    }

    pub fn smoothstep(tau_d: f64) -> Result<Self, AldError> {
        if tau_d <= 0.0 {
            return Err(AldError::NonPositive { name: "tau_d", value: tau_d });
        }
        Ok(SwitchProfile { shape: SwitchShape::Smoothstep, tau_d })
    }
}

/// Radiation-reaction switch g(τ) ∈ [0, 1].
pub fn switch_g(tau: f64, profile: &SwitchProfile) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    match profile.shape {
        SwitchShape::Exponential => -(-tau / profile.tau_d).exp_m1(),
        SwitchShape::Smoothstep => {
            let x = (tau / (3.0 * profile.tau_d)).min(1.0);
            x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
        }
    }
}

/// Time-dependent dressed mass m(τ) = m₀ − (κe²Λ/8π)·g_m(τ).
pub fn mass_m(tau: f64, params: &ParticleParams, profile: &SwitchProfile) -> f64 {
    params.m0 - params.delta_m() * switch_g(tau, profile)
}

/// External potential in the worldline action. The gradient is returned
/// with a lower index (∂_μV), which is what the equation of motion takes.
#[derive(Debug, Clone, Copy)]
pub enum ExternalPotential {
    None,
    /// V = −F·x (Minkowski product), optionally switched on at `onset_tau`;
    /// the gradient vanishes identically before the onset.
    Linear { force: FourVector, onset_tau: f64 },
    /// V = ½ k |x⃗ − c⃗|² (spatial displacement from the center).
    Harmonic { k: f64, center: FourVector },
}

impl ExternalPotential {
    pub fn v(&self, tau: f64, x: &FourVector) -> f64 {
        match self {
            ExternalPotential::None => 0.0,
            ExternalPotential::Linear { force, onset_tau } => {
                if tau < *onset_tau {
                    0.0
                } else {
                    -force.dot(x)
                }
            }
            ExternalPotential::Harmonic { k, center } => {
                let d = *x - *center;
                0.5 * k * (d[1] * d[1] + d[2] * d[2] + d[3] * d[3])
            }
        }
    }

    /// ∂_μ V, lower index.
    pub fn grad_lower(&self, tau: f64, x: &FourVector) -> FourVector {
        match self {
            ExternalPotential::None => FourVector::ZERO,
            ExternalPotential::Linear { force, onset_tau } => {
                if tau < *onset_tau {
                    FourVector::ZERO
                } else {
                    -force.lower()
                }
            }
            ExternalPotential::Harmonic { k, center } => {
                let d = *x - *center;
                FourVector::new(0.0, k * d[1], k * d[2], k * d[3])
            }
        }
    }

    /// Coordinate Hessian ∂_μ∂_ν V.
    pub fn hessian(&self, tau: f64, _x: &FourVector) -> [[f64; 4]; 4] {
        let mut h = [[0.0; 4]; 4];
        match self {
            ExternalPotential::None => {}
            ExternalPotential::Linear { .. } => {
                let _ = tau;
            }
            ExternalPotential::Harmonic { k, .. } => {
                h[1][1] = *k;
                h[2][2] = *k;
                h[3][3] = *k;
            }
        }
        h
    }
}

fn raise(lower: &FourVector) -> FourVector {
    FourVector::new(lower[0], -lower[1], -lower[2], -lower[3])
}

/// f_μ = e²g(ẋ_μ ẍ² + x⃛_μ), the radiation-reaction four-force of a state
/// with jerk data (lower index).
pub fn rr_force(state: &WorldlineState, g: f64, e: f64) -> Result<FourVector, AldError> {
    let jerk = state.jerk.ok_or(AldError::MissingJerk)?;
    let acc_sq = state.acc.norm_sq();
    Ok((state.u.lower() * acc_sq + jerk.lower()) * (e * e * g))
}

/// Radiation reaction evaluated through a closed-form trajectory's exact
/// invariants. On the hyperbola ẍ² = −a² and x⃛ = a²ẋ cancel identically;
/// evaluating via the invariant keeps that cancellation exact in floating
/// point at any aτ, where coordinate states cannot.
pub fn rr_force_analytic(traj: &AnalyticTrajectory, tau: f64, g: f64, e: f64) -> FourVector {
    let state = traj.state(tau);
    let acc_sq = traj.acc_squared();
    match traj {
        AnalyticTrajectory::UniformAcceleration { .. } => {
            // u·(−a²)·e²g + (a²·u)·e²g, identical float products
            let t1 = state.u.lower() * acc_sq;
            let t2 = state.u.lower() * (-acc_sq);
            (t1 + t2) * (e * e * g)
        }
        _ => (state.u.lower() * acc_sq + state.jerk.unwrap_or(FourVector::ZERO).lower())
            * (e * e * g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorMode {
    OrderReduced,
    NaiveThirdOrder,
}

#[derive(Debug, Clone)]
pub struct AldConfig {
    pub params: ParticleParams,
    pub potential: ExternalPotential,
    pub switch: SwitchProfile,
    /// Mass profile override; same family as the force switch by default.
    pub mass_switch: Option<SwitchProfile>,
    pub mode: IntegratorMode,
    pub dt: f64,
    pub tau_max: f64,
    pub initial_x: FourVector,
    pub initial_u: FourVector,
    /// Naive mode only: initial acceleration (third-order initial data).
    pub initial_acc: Option<FourVector>,
    /// Naive mode honors the switch profile instead of g ≡ 1, m ≡ m₀;
    /// fails with `GSingular` wherever g vanishes.
    pub naive_respect_switch: bool,
}

impl AldConfig {
    pub fn order_reduced(
        params: ParticleParams,
        potential: ExternalPotential,
        switch: SwitchProfile,
        dt: f64,
        tau_max: f64,
    ) -> Self {
        AldConfig {
            params,
            potential,
            switch,
            mass_switch: None,
            mode: IntegratorMode::OrderReduced,
            dt,
            tau_max,
            initial_x: FourVector::ZERO,
            initial_u: FourVector::new(1.0, 0.0, 0.0, 0.0),
            initial_acc: None,
            naive_respect_switch: false,
        }
    }
}

#[derive(Debug)]
pub struct AldRun {
    pub worldline: Worldline,
    /// f_μ sampled along the solution (order-reduced jerk substituted).
    pub rr: Vec<FourVector>,
    pub runaway_warning: bool,
}

struct OrderReduced<'a> {
    cfg: &'a AldConfig,
    mass_profile: SwitchProfile,
}

impl<'a> OrderReduced<'a> {
    /// Zeroth-order acceleration: m ẍ₀_μ = ∂_μV + e²g ẋ_μ (ẍ₀·ẍ₀), solved
    /// by two fixed-point sweeps.
    fn acc0(&self, tau: f64, x: &FourVector, u: &FourVector) -> FourVector {
        let g = switch_g(tau, &self.cfg.switch);
        let m = mass_m(tau, &self.cfg.params, &self.mass_profile);
        let e_sq = self.cfg.params.e_sq();
        let base = raise(&self.cfg.potential.grad_lower(tau, x));
        let mut acc = base * (1.0 / m);
        for _ in 0..2 {
            let a_sq = acc.norm_sq();
            acc = (base + *u * (e_sq * g * a_sq)) * (1.0 / m);
        }
        acc
    }

    /// Full order-reduced acceleration with x⃛ → dẍ₀/dτ by a centered
    /// directional derivative along the flow. The result is projected
    /// orthogonal to u so that the RK4 flow itself preserves u·u = 1; the
    /// per-step renormalization then only cleans rounding-level drift.
    fn acc_full(&self, tau: f64, x: &FourVector, u: &FourVector) -> FourVector {
        let g = switch_g(tau, &self.cfg.switch);
        let m = mass_m(tau, &self.cfg.params, &self.mass_profile);
        let e_sq = self.cfg.params.e_sq();
        let a0 = self.acc0(tau, x, u);
        let raw = if e_sq * g == 0.0 {
            a0
        } else {
            let h = 0.25 * self.cfg.dt;
            let ap = self.acc0(tau + h, &(*x + *u * h), &(*u + a0 * h));
            let am = self.acc0(tau - h, &(*x - *u * h), &(*u - a0 * h));
            let jerk = (ap - am) * (1.0 / (2.0 * h));
            let a_sq = a0.norm_sq();
            let base = raise(&self.cfg.potential.grad_lower(tau, x));
            (base + (*u * a_sq + jerk) * (e_sq * g)) * (1.0 / m)
        };
        raw - *u * (u.dot(&raw) / u.norm_sq())
    }
}

/// Integrate the equation of motion on a fixed grid with RK4; the velocity
/// is renormalized onto the unit shell after every step.
pub fn integrate_ald(cfg: &AldConfig) -> Result<AldRun, AldError> {
    if cfg.dt <= 0.0 {
        return Err(AldError::NonPositive { name: "dt", value: cfg.dt });
    }
    if cfg.tau_max <= 0.0 {
        return Err(AldError::NonPositive { name: "tau_max", value: cfg.tau_max });
    }
    match cfg.mode {
        IntegratorMode::OrderReduced => integrate_order_reduced(cfg),
        IntegratorMode::NaiveThirdOrder => integrate_naive(cfg),
    }
}

fn integrate_order_reduced(cfg: &AldConfig) -> Result<AldRun, AldError> {
    let solver = OrderReduced {
        cfg,
        mass_profile: cfg.mass_switch.unwrap_or(cfg.switch),
    };
    let n = (cfg.tau_max / cfg.dt).round() as usize;
    let dt = cfg.dt;
    let mut x = cfg.initial_x;
    let mut u = renormalize_velocity(&cfg.initial_u)?;
    let mut samples = Vec::with_capacity(n + 1);
    let mut rr = Vec::with_capacity(n + 1);
    let mut runaway_warning = false;
    let acc_bound = 10.0 / dt;

    let record = |tau: f64,
                  x: &FourVector,
                  u: &FourVector,
                  solver: &OrderReduced,
                  samples: &mut Vec<WorldlineState>,
                  rr: &mut Vec<FourVector>| {
        let a0 = solver.acc0(tau, x, u);
        let acc = solver.acc_full(tau, x, u);
        let h = 0.25 * dt;
        let ap = solver.acc0(tau + h, &(*x + *u * h), &(*u + a0 * h));
        let am = solver.acc0(tau - h, &(*x - *u * h), &(*u - a0 * h));
        let jerk = (ap - am) * (1.0 / (2.0 * h));
        let g = switch_g(tau, &solver.cfg.switch);
        let e_sq = solver.cfg.params.e_sq();
        rr.push(raise(&((u.lower() * a0.norm_sq() + jerk.lower()) * (e_sq * g))));
        samples.push(WorldlineState { tau, x: *x, u: *u, acc, jerk: Some(jerk) });
    };

    record(0.0, &x, &u, &solver, &mut samples, &mut rr);
    for i in 0..n {
        let tau = i as f64 * dt;
        // RK4 on (x, u)
        let k1x = u;
        let k1u = solver.acc_full(tau, &x, &u);
        let k2x = u + k1u * (0.5 * dt);
        let k2u = solver.acc_full(tau + 0.5 * dt, &(x + k1x * (0.5 * dt)), &(u + k1u * (0.5 * dt)));
        let k3x = u + k2u * (0.5 * dt);
        let k3u = solver.acc_full(tau + 0.5 * dt, &(x + k2x * (0.5 * dt)), &(u + k2u * (0.5 * dt)));
        let k4x = u + k3u * dt;
        let k4u = solver.acc_full(tau + dt, &(x + k3x * dt), &(u + k3u * dt));
        x = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
        let u_new = u + (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (dt / 6.0);
        u = renormalize_velocity(&u_new)
            .map_err(|_| AldError::NonTimelikeStep { tau: tau + dt })?;
        if k1u.max_abs() > acc_bound {
            runaway_warning = true;
        }
        record(tau + dt, &x, &u, &solver, &mut samples, &mut rr);
    }
    Ok(AldRun {
        worldline: Worldline::new(samples)?,
        rr,
        runaway_warning,
    })
}

fn integrate_naive(cfg: &AldConfig) -> Result<AldRun, AldError> {
    let n = (cfg.tau_max / cfg.dt).round() as usize;
    let dt = cfg.dt;
    let e_sq = cfg.params.e_sq();
    let mass_profile = cfg.mass_switch.unwrap_or(cfg.switch);
    let g_of = |tau: f64| -> Result<f64, AldError> {
        if cfg.naive_respect_switch {
            let g = switch_g(tau, &cfg.switch);
            if g < 1e-12 {
                return Err(AldError::GSingular { tau, g });
            }
            Ok(g)
        } else {
            Ok(1.0)
        }
    };
    let m_of = |tau: f64| {
        if cfg.naive_respect_switch {
            mass_m(tau, &cfg.params, &mass_profile)
        } else {
            cfg.params.m0
        }
    };
    // e²g x⃛_μ = m ẍ_μ − ∂_μV − e²g ẋ_μ(ẍ·ẍ)
    let jerk_of = |tau: f64, x: &FourVector, u: &FourVector, acc: &FourVector| -> Result<FourVector, AldError> {
        let g = g_of(tau)?;
        let grad = cfg.potential.grad_lower(tau, x);
        let a_sq = acc.norm_sq();
        let lower = (acc.lower() * m_of(tau) - grad) * (1.0 / (e_sq * g)) - u.lower() * a_sq;
        Ok(raise(&lower))
    };

    let mut x = cfg.initial_x;
    let mut u = renormalize_velocity(&cfg.initial_u)?;
    let mut acc = cfg.initial_acc.unwrap_or(FourVector::ZERO);
    let mut samples = Vec::with_capacity(n + 1);
    let mut rr = Vec::with_capacity(n + 1);

    let push = |tau: f64,
                x: &FourVector,
                u: &FourVector,
                acc: &FourVector,
                jerk: FourVector,
                samples: &mut Vec<WorldlineState>,
                rr: &mut Vec<FourVector>,
                g: f64| {
        rr.push(raise(&((u.lower() * acc.norm_sq() + jerk.lower()) * (e_sq * g))));
        samples.push(WorldlineState { tau, x: *x, u: *u, acc: *acc, jerk: Some(jerk) });
    };

    push(0.0, &x, &u, &acc, jerk_of(0.0, &x, &u, &acc)?, &mut samples, &mut rr, g_of(0.0)?);
    for i in 0..n {
        let tau = i as f64 * dt;
        let f = |t: f64, x: &FourVector, u: &FourVector, a: &FourVector| -> Result<(FourVector, FourVector, FourVector), AldError> {
            Ok((*u, *a, jerk_of(t, x, u, a)?))
        };
        let (k1x, k1u, k1a) = f(tau, &x, &u, &acc)?;
        let (k2x, k2u, k2a) = f(
            tau + 0.5 * dt,
            &(x + k1x * (0.5 * dt)),
            &(u + k1u * (0.5 * dt)),
            &(acc + k1a * (0.5 * dt)),
        )?;
        let (k3x, k3u, k3a) = f(
            tau + 0.5 * dt,
            &(x + k2x * (0.5 * dt)),
            &(u + k2u * (0.5 * dt)),
            &(acc + k2a * (0.5 * dt)),
        )?;
        let (k4x, k4u, k4a) = f(
            tau + dt,
            &(x + k3x * dt),
            &(u + k3u * dt),
            &(acc + k3a * dt),
        )?;
        x = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
        let u_new = u + (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (dt / 6.0);
        acc = acc + (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (dt / 6.0);
        u = renormalize_velocity(&u_new)
            .map_err(|_| AldError::NonTimelikeStep { tau: tau + dt })?;
        let tau1 = tau + dt;
        push(tau1, &x, &u, &acc, jerk_of(tau1, &x, &u, &acc)?, &mut samples, &mut rr, g_of(tau1)?);
    }
    Ok(AldRun {
        worldline: Worldline::new(samples)?,
        rr,
        runaway_warning: true,
    })
}

/// Max |u(τ) − u(0)| (componentwise) before the force onset. The onset is
/// read from the linear potential.
pub fn preacceleration_probe(cfg: &AldConfig) -> Result<f64, AldError> {
    let onset = match cfg.potential {
        ExternalPotential::Linear { onset_tau, .. } => onset_tau,
        _ => 0.0,
    };
    let run = integrate_ald(cfg)?;
    let u0 = run.worldline.samples()[0].u;
    let mut probe = 0.0f64;
    for s in run.worldline.samples() {
        if s.tau < onset {
            probe = probe.max((s.u - u0).max_abs());
        }
    }
    Ok(probe)
}
