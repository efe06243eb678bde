//! Windowed Fourier transforms of worldline correlation functions.
//!
//! The detector response and the fluctuation–dissipation spectra all reduce,
//! on stationary trajectories, to integrals of the form
//!
//!   I(ω) = ∫_{−T}^{T} (1 − |s|/T) e^{−iωs} g(s) ds
//!
//! (the exact double-time window integral after the change of variables).
//! g is hermitian, g(−s) = g(s)*, so I is real and only s ∈ [0, T] is
//! evaluated. g carries ε-regulated lightcone singularities on the real
//! axis; the mesh grades panel widths geometrically away from each singular
//! point, starting at the regulator scale, and caps panel width at a
//! quarter oscillation. Each panel gets 16-point Gauss–Legendre, with the
//! 8-point result used as the error estimate.

use num_complex::Complex64;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [−1, 1], computed by Newton
/// iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // P_n(x) and P'_n(x) via the three-term recurrence
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

/// Mesh/weighting options for [`windowed_transform`].
#[derive(Debug, Clone)]
pub struct WindowSpec {
    /// Half-length T of the observation window.
    pub t_obs: f64,
    /// Locations |s| of regulated singularities of g (0 is always included).
    pub singular_points: Vec<f64>,
    /// Regulator scale; panel grading starts here.
    pub eps_scale: f64,
    /// Exponential decay rate of |g|, if any: the mesh is truncated where
    /// e^{−rate·s} < 1e−18. Only set this for genuinely exponentially
    /// decaying kernels (thermal, uniformly accelerated).
    pub decay_rate: Option<f64>,
}

impl WindowSpec {
    pub fn new(t_obs: f64, eps_scale: f64) -> Self {
        WindowSpec {
            t_obs,
            singular_points: Vec::new(),
            eps_scale,
            decay_rate: None,
        }
    }
}

fn build_mesh(spec: &WindowSpec, omega: f64) -> Vec<f64> {
    // Exponential decay holds away from every singular point, so the mesh
    // may stop a few decay lengths beyond the farthest one — never before.
    let max_sing = spec
        .singular_points
        .iter()
        .fold(0.0f64, |m, s| m.max(s.abs()));
    let t_end = match spec.decay_rate {
        Some(rate) if rate > 0.0 => (max_sing + 41.5 / rate).min(spec.t_obs),
        _ => spec.t_obs,
    };
    let mut anchors: Vec<f64> = vec![0.0];
    for &s in &spec.singular_points {
        let s = s.abs();
        if s > 0.0 && s < t_end {
            anchors.push(s);
        }
    }
    anchors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    anchors.dedup_by(|a, b| (*a - *b).abs() < 1e-300);

    let mut pts = vec![0.0, t_end];
    for (i, &a) in anchors.iter().enumerate() {
        let left_gap = if i == 0 { a } else { a - anchors[i - 1] };
        let right_gap = if i + 1 < anchors.len() {
            anchors[i + 1] - a
        } else {
            t_end - a
        };
        let mut d = spec.eps_scale.max(1e-300);
        while d < right_gap {
            pts.push(a + d);
            d *= 2.0;
        }
        let mut d = spec.eps_scale.max(1e-300);
        while d < left_gap {
            if a - d > 0.0 {
                pts.push(a - d);
            }
            d *= 2.0;
        }
        if a > 0.0 {
            pts.push(a);
        }
    }
    pts.retain(|&p| (0.0..=t_end).contains(&p));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b) < 1e-15 * t_end.max(1.0));

    // cap panel width at a quarter oscillation (GL16 handles that easily)
    let cap = if omega.abs() > 0.0 {
        (std::f64::consts::PI / (2.0 * omega.abs())).min(t_end)
    } else {
        t_end
    };
    let mut mesh = Vec::with_capacity(pts.len() * 2);
    for w in pts.windows(2) {
        mesh.push(w[0]);
        let width = w[1] - w[0];
        if width > cap {
            let parts = (width / cap).ceil() as usize;
            for p in 1..parts {
                mesh.push(w[0] + width * p as f64 / parts as f64);
            }
        }
    }
    mesh.push(t_end);
    mesh
}

/// I(ω) = ∫_{−T}^{T} (1 − |s|/T) e^{−iωs} g(s) ds for hermitian g, together
/// with an error estimate.
///
/// Each panel is integrated with 16-point Gauss–Legendre whole and halved;
/// the halved value is kept and the difference is the error estimate.
pub fn windowed_transform<G>(g: G, omega: f64, spec: &WindowSpec) -> (f64, f64)
where
    G: Fn(f64) -> Complex64,
{
    let mesh = build_mesh(spec, omega);
    let (n16, w16) = gl16();
    let integrand = |s: f64| -> f64 {
        let phase = Complex64::from_polar(1.0, -omega * s);
        2.0 * (phase * g(s)).re * (1.0 - s / spec.t_obs)
    };
    let gl_panel = |a: f64, b: f64| -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for k in 0..16 {
            s += w16[k] * integrand(c + h * n16[k]);
        }
        s * h
    };
    let mut total = 0.0;
    let mut err = 0.0;
    for w in mesh.windows(2) {
        let coarse = gl_panel(w[0], w[1]);
        let mid = 0.5 * (w[0] + w[1]);
        let fine = gl_panel(w[0], mid) + gl_panel(mid, w[1]);
        total += fine;
        err += (fine - coarse).abs();
    }
    (total, err)
}
