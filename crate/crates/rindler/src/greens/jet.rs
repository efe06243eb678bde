//! Forward-mode derivative algebra for two-point functions.
//!
//! A [`TwoPointJet`] carries the value of f(y, y′) together with the first
//! derivatives in both arguments and the full mixed second-derivative block
//! ∂_μ ∂′_ν f. Kernels written generically over [`KernelScalar`] can then be
//! evaluated either as plain complex numbers or as jets, so the covariance
//! assembly gets analytic gradients of the same closed forms that the
//! pointwise evaluators use — no finite differencing of singular kernels.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Scalar interface the closed-form kernels are written against.
pub trait KernelScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_c(c: Complex64) -> Self;
    fn from_f(x: f64) -> Self {
        Self::from_c(Complex64::new(x, 0.0))
    }
    fn scale(self, s: f64) -> Self;
    fn recip(self) -> Self;
    fn ln(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    /// sinh(√x)/√x as an even analytic function of x.
    fn sinhc(self) -> Self;
    fn value(&self) -> Complex64;
}

impl KernelScalar for Complex64 {
    fn from_c(c: Complex64) -> Self {
        c
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    fn sinhc(self) -> Self {
        sinhc_value(self)
    }
    fn value(&self) -> Complex64 {
        *self
    }
}

pub(crate) fn sinhc_value(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        // sinh(s)/s = 1 + x/6 + x²/120 + x³/5040, x = s²
        Complex64::new(1.0, 0.0) + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0
    } else {
        let s = x.sqrt();
        s.sinh() / s
    }
}

fn sinhc_d1(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        Complex64::new(1.0 / 6.0, 0.0) + x / 60.0 + x * x / 1680.0
    } else {
        // d/dx [sinh(s)/s] = (s cosh s − sinh s) / (2 s³)
        let s = x.sqrt();
        (s * s.cosh() - s.sinh()) / (2.0 * s * s * s)
    }
}

fn sinhc_d2(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        Complex64::new(1.0 / 60.0, 0.0) + x / 840.0 + x * x / 30240.0
    } else {
        // ((s² + 3) sinh s − 3 s cosh s) / (4 s⁵)
        let s = x.sqrt();
        let s2 = s * s;
        ((s2 + 3.0) * s.sinh() - 3.0 * s * s.cosh()) / (4.0 * s2 * s2 * s)
    }
}

const DIM: usize = 4;

/// Value, first derivatives in both spacetime arguments, and the mixed
/// second-derivative block of a two-point function.
#[derive(Debug, Clone, Copy)]
pub struct TwoPointJet {
    pub val: Complex64,
    /// ∂f/∂y^μ
    pub da: [Complex64; DIM],
    /// ∂f/∂y′^ν
    pub db: [Complex64; DIM],
    /// ∂²f/∂y^μ ∂y′^ν
    pub dab: [[Complex64; DIM]; DIM],
}

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl TwoPointJet {
    pub fn constant(c: Complex64) -> Self {
        TwoPointJet {
            val: c,
            da: [C_ZERO; DIM],
            db: [C_ZERO; DIM],
            dab: [[C_ZERO; DIM]; DIM],
        }
    }

    /// Coordinate of the first point: unit derivative in direction `mu`.
    pub fn coord_a(value: Complex64, mu: usize) -> Self {
        let mut j = TwoPointJet::constant(value);
        j.da[mu] = Complex64::new(1.0, 0.0);
        j
    }

    /// Coordinate of the second point.
    pub fn coord_b(value: Complex64, nu: usize) -> Self {
        let mut j = TwoPointJet::constant(value);
        j.db[nu] = Complex64::new(1.0, 0.0);
        j
    }

    /// Chain rule through a scalar function with derivatives d1 = φ′(val),
    /// d2 = φ″(val).
    fn unary(self, val: Complex64, d1: Complex64, d2: Complex64) -> Self {
        let mut out = TwoPointJet::constant(val);
        for i in 0..DIM {
            out.da[i] = d1 * self.da[i];
            out.db[i] = d1 * self.db[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.dab[i][j] = d1 * self.dab[i][j] + d2 * self.da[i] * self.db[j];
            }
        }
        out
    }
}

impl Add for TwoPointJet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out.val = self.val + rhs.val;
        for i in 0..DIM {
            out.da[i] = self.da[i] + rhs.da[i];
            out.db[i] = self.db[i] + rhs.db[i];
            for j in 0..DIM {
                out.dab[i][j] = self.dab[i][j] + rhs.dab[i][j];
            }
        }
        out
    }
}

impl Sub for TwoPointJet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for TwoPointJet {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        out.val = -self.val;
        for i in 0..DIM {
            out.da[i] = -self.da[i];
            out.db[i] = -self.db[i];
            for j in 0..DIM {
                out.dab[i][j] = -self.dab[i][j];
            }
        }
        out
    }
}

impl Mul for TwoPointJet {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = TwoPointJet::constant(self.val * rhs.val);
        for i in 0..DIM {
            out.da[i] = self.da[i] * rhs.val + self.val * rhs.da[i];
            out.db[i] = self.db[i] * rhs.val + self.val * rhs.db[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.dab[i][j] = self.dab[i][j] * rhs.val
                    + self.da[i] * rhs.db[j]
                    + rhs.da[i] * self.db[j]
                    + self.val * rhs.dab[i][j];
            }
        }
        out
    }
}

impl KernelScalar for TwoPointJet {
    fn from_c(c: Complex64) -> Self {
        TwoPointJet::constant(c)
    }
    fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.val = self.val * s;
        for i in 0..DIM {
            out.da[i] = self.da[i] * s;
            out.db[i] = self.db[i] * s;
            for j in 0..DIM {
                out.dab[i][j] = self.dab[i][j] * s;
            }
        }
        out
    }
    fn recip(self) -> Self {
        let v = 1.0 / self.val;
        self.unary(v, -v * v, 2.0 * v * v * v)
    }
    fn ln(self) -> Self {
        let v = self.val;
        self.unary(v.ln(), 1.0 / v, -1.0 / (v * v))
    }
    fn sinh(self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.unary(s, c, s)
    }
    fn cosh(self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.unary(c, s, c)
    }
    fn sinhc(self) -> Self {
        self.unary(sinhc_value(self.val), sinhc_d1(self.val), sinhc_d2(self.val))
    }
    fn value(&self) -> Complex64 {
        self.val
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // f(y, y') = sinh(y0 - y'1) * 1/(y1 + y'0) has simple hand-checkable
    // derivatives; verify the jet against finite differences.
    fn f_jet(y0: f64, y1: f64, yp0: f64, yp1: f64) -> TwoPointJet {
        let a0 = TwoPointJet::coord_a(Complex64::new(y0, 0.0), 0);
        let a1 = TwoPointJet::coord_a(Complex64::new(y1, 0.0), 1);
        let b0 = TwoPointJet::coord_b(Complex64::new(yp0, 0.0), 0);
        let b1 = TwoPointJet::coord_b(Complex64::new(yp1, 0.0), 1);
        (a0 - b1).sinh() * (a1 + b0).recip()
    }

    fn f_val(y0: f64, y1: f64, yp0: f64, yp1: f64) -> f64 {
        (y0 - yp1).sinh() / (y1 + yp0)
    }

    #[test]
    fn jet_matches_finite_differences() {
        let (y0, y1, yp0, yp1) = (0.7, 1.3, 0.4, -0.2);
        let j = f_jet(y0, y1, yp0, yp1);
        let h = 1e-5;

        assert_abs_diff_eq!(j.val.re, f_val(y0, y1, yp0, yp1), epsilon = 1e-14);

        let d_y0 = (f_val(y0 + h, y1, yp0, yp1) - f_val(y0 - h, y1, yp0, yp1)) / (2.0 * h);
        assert_abs_diff_eq!(j.da[0].re, d_y0, epsilon = 1e-9);

        let d_yp0 = (f_val(y0, y1, yp0 + h, yp1) - f_val(y0, y1, yp0 - h, yp1)) / (2.0 * h);
        assert_abs_diff_eq!(j.db[0].re, d_yp0, epsilon = 1e-9);

        // mixed second derivative ∂_{y0} ∂_{y'1}
        let pp = f_val(y0 + h, y1, yp0, yp1 + h);
        let pm = f_val(y0 + h, y1, yp0, yp1 - h);
        let mp = f_val(y0 - h, y1, yp0, yp1 + h);
        let mm = f_val(y0 - h, y1, yp0, yp1 - h);
        let d2 = (pp - pm - mp + mm) / (4.0 * h * h);
        assert_abs_diff_eq!(j.dab[0][1].re, d2, epsilon = 1e-7);

        // directions that never entered are flat
        assert_eq!(j.da[2], Complex64::new(0.0, 0.0));
        assert_eq!(j.dab[3][3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn sinhc_series_matches_closed_form() {
        for x in [1e-6, 1e-4, 9e-4, 2e-3, 0.5, 4.0] {
            let series = sinhc_value(Complex64::new(x, 0.0));
            let direct = x.sqrt().sinh() / x.sqrt();
            assert_abs_diff_eq!(series.re, direct, epsilon = 1e-13);
        }
        // negative argument: sinh(i|s|)/(i|s|) = sin(|s|)/|s|
        let x = -0.25f64;
        let v = sinhc_value(Complex64::new(x, 0.0));
        assert_abs_diff_eq!(v.re, 0.5f64.sin() / 0.5, epsilon = 1e-13);
    }

    #[test]
    fn sinhc_derivatives_match_fd() {
        let f = |x: f64| sinhc_value(Complex64::new(x, 0.0)).re;
        for x0 in [-0.3, 5e-4, 0.8] {
            let h = 1e-6;
            let d1 = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
            assert_abs_diff_eq!(sinhc_d1(Complex64::new(x0, 0.0)).re, d1, epsilon = 1e-8);
            // wider step for the second difference: h² roundoff otherwise
            let h = 1e-4;
            let d2 = (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h);
            assert_abs_diff_eq!(sinhc_d2(Complex64::new(x0, 0.0)).re, d2, epsilon = 1e-6);
        }
    }
}
