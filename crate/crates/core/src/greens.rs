//! Free-space dyadic Green tensor in a dimensionless convention.
//!
//! With x = kR and R̂ = R/R the physical tensor is
//!
//! ```text
//! G(kR) = -(k e^{ix} / 4π) [ α/x + iβ/x² − β/x³ ],   α = I − R̂R̂,  β = I − 3R̂R̂
//! ```
//!
//! Every function here returns G̃ = (4π/k)·G, i.e.
//!
//! ```text
//! G̃(x) = A(x)·I + B(x)·R̂R̂
//! A(x) = −e^{ix}( 1/x + i/x² − 1/x³)
//! B(x) = −e^{ix}(−1/x − 3i/x² + 3/x³)
//! ```
//!
//! and spatial derivatives are taken with respect to the dimensionless
//! position ρ = k·R_vec. The k and 4π factors are restored in [`crate::coupling`]
//! and nowhere else.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CMat3, Mat3, Vec3};

/// ∂_l G̃_ij stored as `grad[l][(i, j)]`.
pub type GreenGradient = [CMat3; 3];

/// Real ∂_l H_ij for the imaginary-frequency tensor.
pub type RealGradient = [Mat3; 3];

const RHAT_TOL: f64 = 1e-12;

/// The transverse and longitudinal projector combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorPair {
    /// I − R̂R̂
    pub alpha: Mat3,
    /// I − 3R̂R̂
    pub beta: Mat3,
}

impl ProjectorPair {
    pub fn new(rhat: &Vec3) -> Self {
        let rr = rhat * rhat.transpose();
        Self {
            alpha: Mat3::identity() - rr,
            beta: Mat3::identity() - 3.0 * rr,
        }
    }
}

/// G̃ together with its gradient and curl at one separation.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenEval {
    pub x: f64,
    pub rhat: Vec3,
    pub g: CMat3,
    pub grad: GreenGradient,
    pub curl: CMat3,
}

impl GreenEval {
    pub fn new(x: f64, rhat: &Vec3) -> Result<Self> {
        check_args(x, rhat)?;
        let radial = Radial::at(Complex64::new(x, 0.0));
        Ok(Self {
            x,
            rhat: *rhat,
            g: radial.tensor(rhat),
            grad: radial.gradient(x, rhat),
            curl: radial.curl(x, rhat),
        })
    }
}

fn check_args(x: f64, rhat: &Vec3) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { what: "kR", value: x });
    }
    let n = rhat.norm();
    if !((n - 1.0).abs() <= RHAT_TOL) {
        return Err(Error::Domain {
            what: "|rhat|",
            value: n,
        });
    }
    Ok(())
}

/// Radial coefficients A, B and their x-derivatives, valid for complex
/// argument so the same expressions serve analytic continuation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Radial {
    pub a: Complex64,
    pub b: Complex64,
    pub da: Complex64,
    pub db: Complex64,
}

impl Radial {
    pub(crate) fn at(z: Complex64) -> Self {
        let i = Complex64::i();
        let (z1, z2, z3, z4) = (z.inv(), z.powi(-2), z.powi(-3), z.powi(-4));
        let e = (i * z).exp();
        let p = z1 + i * z2 - z3;
        let dp = -z2 - 2.0 * i * z3 + 3.0 * z4;
        let s = -z1 - 3.0 * i * z2 + 3.0 * z3;
        let ds = z2 + 6.0 * i * z3 - 9.0 * z4;
        Self {
            a: -e * p,
            b: -e * s,
            da: -e * (i * p + dp),
            db: -e * (i * s + ds),
        }
    }

    fn tensor(&self, rhat: &Vec3) -> CMat3 {
        let rr = (rhat * rhat.transpose()).map(|v| Complex64::new(v, 0.0));
        CMat3::identity() * self.a + rr * self.b
    }

    fn radial_derivative(&self, rhat: &Vec3) -> CMat3 {
        let rr = (rhat * rhat.transpose()).map(|v| Complex64::new(v, 0.0));
        CMat3::identity() * self.da + rr * self.db
    }

    fn gradient(&self, x: f64, rhat: &Vec3) -> GreenGradient {
        tensor_gradient(self.b, self.da, self.db, x, rhat)
    }

    /// (∇×G̃)_ij = ε_ilm ∂_l G̃_mj = (B/x − A')·ε_ijm r_m = (A' − B/x)·[r]ₓ.
    fn curl(&self, x: f64, rhat: &Vec3) -> CMat3 {
        let f = self.da - self.b / x;
        rhat.cross_matrix().map(|v| Complex64::new(v, 0.0)) * f
    }
}

/// ∂_l of a tensor a(x)·I + b(x)·R̂R̂ with respect to ρ, given the radial
/// derivatives. ∂_l x = r_l, ∂_l r_i = (δ_il − r_i r_l)/x.
fn tensor_gradient<T>(b: T, da: T, db: T, x: f64, rhat: &Vec3) -> [nalgebra::Matrix3<T>; 3]
where
    T: nalgebra::Scalar + Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let r = rhat;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    std::array::from_fn(|l| {
        nalgebra::Matrix3::from_fn(|i, j| {
            let proj = (delta(i, l) - r[i] * r[l]) * r[j] + r[i] * (delta(j, l) - r[j] * r[l]);
            da * (r[l] * delta(i, j)) + db * (r[l] * r[i] * r[j]) + b * (proj / x)
        })
    })
}

/// G̃(x, R̂).
pub fn green(x: f64, rhat: &Vec3) -> Result<CMat3> {
    check_args(x, rhat)?;
    Ok(Radial::at(Complex64::new(x, 0.0)).tensor(rhat))
}

/// dG̃/dx at fixed R̂.
pub fn green_dx(x: f64, rhat: &Vec3) -> Result<CMat3> {
    check_args(x, rhat)?;
    Ok(Radial::at(Complex64::new(x, 0.0)).radial_derivative(rhat))
}

/// ∂G̃/∂ρ_l for l = 0, 1, 2.
pub fn green_gradient(x: f64, rhat: &Vec3) -> Result<GreenGradient> {
    check_args(x, rhat)?;
    Ok(Radial::at(Complex64::new(x, 0.0)).gradient(x, rhat))
}

/// ∇×G̃ acting on the first index.
pub fn green_curl(x: f64, rhat: &Vec3) -> Result<CMat3> {
    check_args(x, rhat)?;
    Ok(Radial::at(Complex64::new(x, 0.0)).curl(x, rhat))
}

/// Imaginary-frequency tensor H = (4π/k₀)·G(iqR) at q = t·k₀.
///
/// Substituting k → iq gives a real tensor
/// `H = −t e^{−y}[α/y + β/y² + β/y³]` with y = t·x. Returns H and its
/// gradient with respect to ρ = k₀·R_vec.
pub fn green_imag_freq(t: f64, x: f64, rhat: &Vec3) -> Result<(Mat3, RealGradient)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            what: "q/k0",
            value: t,
        });
    }
    check_args(x, rhat)?;
    let y = t * x;
    let e = (-y).exp();
    let (y1, y2, y3, y4) = (1.0 / y, y.powi(-2), y.powi(-3), y.powi(-4));
    // α/y + β/y² + β/y³ = P·I + Q·R̂R̂
    let p = y1 + y2 + y3;
    let q = -y1 - 3.0 * y2 - 3.0 * y3;
    let dp = -y2 - 2.0 * y3 - 3.0 * y4;
    let dq = y2 + 6.0 * y3 + 9.0 * y4;
    let a = -t * e * p;
    let b = -t * e * q;
    // d/dx = t·d/dy
    let da = -t * t * e * (dp - p);
    let db = -t * t * e * (dq - q);
    let rr = rhat * rhat.transpose();
    let h = Mat3::identity() * a + rr * b;
    let grad = tensor_gradient(b, da, db, x, rhat);
    Ok((h, grad))
}

/// Contract a gradient with two vectors: (u·∂_l G̃·v)_l.
pub fn contract_gradient(grad: &GreenGradient, u: &Vec3, v: &Vec3) -> [Complex64; 3] {
    let uc = u.map(|c| Complex64::new(c, 0.0));
    let vc = v.map(|c| Complex64::new(c, 0.0));
    std::array::from_fn(|l| (uc.transpose() * grad[l] * vc)[(0, 0)])
}

/// u·M·v for a complex matrix and real vectors.
pub fn bilinear(m: &CMat3, u: &Vec3, v: &Vec3) -> Complex64 {
    let uc = u.map(|c| Complex64::new(c, 0.0));
    let vc = v.map(|c| Complex64::new(c, 0.0));
    (uc.transpose() * m * vc)[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::derivative;
    use proptest::prelude::*;

    fn unit(theta: f64, phi: f64) -> Vec3 {
        Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
    }

    fn max_abs(m: &CMat3) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn projectors_along_z() {
        let p = ProjectorPair::new(&Vec3::z());
        assert_eq!(p.alpha, Mat3::from_diagonal(&Vec3::new(1.0, 1.0, 0.0)));
        assert_eq!(p.beta, Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -2.0)));
        let r = unit(0.3, 1.1);
        let p = ProjectorPair::new(&r);
        assert!((p.alpha * r).norm() < 1e-15);
        assert!((p.alpha.trace() - 2.0).abs() < 1e-15);
        assert!(p.beta.trace().abs() < 1e-15);
    }

    #[test]
    fn matches_printed_bracket() {
        let r = unit(0.7, -0.4);
        let p = ProjectorPair::new(&r);
        let i = Complex64::i();
        for x in [0.05, 0.77, 3.0, 40.0] {
            let e = (i * x).exp();
            let c = |m: Mat3| m.map(Complex64::from);
            let expect = (c(p.alpha / x) + c(p.beta) * (i / (x * x)) - c(p.beta / (x * x * x))) * (-e);
            let g = green(x, &r).unwrap();
            assert!(max_abs(&(g - expect)) <= 1e-13 * max_abs(&expect));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(green(0.0, &Vec3::z()).is_err());
        assert!(green(-1.0, &Vec3::z()).is_err());
        assert!(green(f64::NAN, &Vec3::z()).is_err());
        assert!(green(1.0, &(Vec3::z() * 1.1)).is_err());
        assert!(green_imag_freq(0.0, 1.0, &Vec3::z()).is_err());
        assert!(green_imag_freq(-2.0, 1.0, &Vec3::z()).is_err());
    }

    #[test]
    fn small_x_imaginary_limit() {
        // Im G̃ → −(2/3)I, i.e. Im G → −(k/6π)I.
        for x in [1e-2, 3e-3, 1e-3] {
            let g = green(x, &unit(1.0, 2.0)).unwrap();
            let dev = g.map(|c| c.im) + Mat3::identity() * (2.0 / 3.0);
            // in physical units: Im G (6π/k) + I = (3/2) Im G̃ + I
            assert!((dev * 1.5).norm() < 5.0 * x * x, "x={x} dev={}", dev.norm());
        }
    }

    #[test]
    fn far_field_alpha_dominates() {
        let x = 1e4;
        let r = unit(0.2, 0.9);
        let g = green(x, &r).unwrap();
        let alpha = ProjectorPair::new(&r).alpha.map(Complex64::from);
        let far = alpha * (-(Complex64::i() * x).exp() / x);
        // next order is β/x², i.e. relative 1/x
        let rel = (g - far).norm() / g.norm();
        assert!(rel < 3.0 / x, "{rel}");
    }

    #[test]
    fn gradient_matches_finite_difference() {
        for (x, r) in [(0.3, unit(0.4, 0.1)), (1.7, unit(2.0, -1.0)), (12.0, unit(1.2, 2.5))] {
            let grad = green_gradient(x, &r).unwrap();
            let rho = r * x;
            for l in 0..3 {
                let f = |s: f64| {
                    let mut p = rho;
                    p[l] += s;
                    let g = green(p.norm(), &p.normalize()).unwrap();
                    g.iter().flat_map(|c| [c.re, c.im]).collect::<Vec<_>>()
                };
                let fd = derivative(f, 0.0, 1e-2 * x).unwrap();
                let an: Vec<f64> = grad[l].iter().flat_map(|c| [c.re, c.im]).collect();
                let scale = an.iter().map(|v| v * v).sum::<f64>().sqrt();
                let err = fd
                    .value
                    .iter()
                    .zip(&an)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(err <= 1e-8 * scale, "x={x} l={l} err={err} scale={scale}");
            }
        }
    }

    #[test]
    fn radial_directional_derivative() {
        let r = unit(0.9, 0.3);
        let x = 2.3;
        let grad = green_gradient(x, &r).unwrap();
        let along = grad[0] * Complex64::from(r[0]) + grad[1] * Complex64::from(r[1]) + grad[2] * Complex64::from(r[2]);
        let dx = green_dx(x, &r).unwrap();
        assert!(max_abs(&(along - dx)) < 1e-14 * max_abs(&dx));
    }

    #[test]
    fn curl_matches_gradient_contraction() {
        let r = unit(1.3, 0.6);
        let x = 0.9;
        let grad = green_gradient(x, &r).unwrap();
        let curl = green_curl(x, &r).unwrap();
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            match (i, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        let from_grad = CMat3::from_fn(|i, j| {
            let mut s = Complex64::new(0.0, 0.0);
            for l in 0..3 {
                for m in 0..3 {
                    s += grad[l][(m, j)] * eps(i, l, m);
                }
            }
            s
        });
        assert!(max_abs(&(curl - from_grad)) < 1e-13 * max_abs(&curl));
    }

    #[test]
    fn static_longitudinal_part_is_curl_free() {
        // the β/x³ term alone: A = 1/x³, B = −3/x³ ⇒ B/x − A' = −3/x⁴ + 3/x⁴ = 0
        let rad = Radial::at(Complex64::new(1e-3, 0.0));
        let full = (rad.b / 1e-3 - rad.da).norm();
        // remaining curl comes from the α part, O(1/x²), far below the 1/x⁴ scale
        assert!(full < 1e-2 * 1e-3f64.powi(-4));
        assert!(full > 0.1 * 1e-3f64.powi(-2));
    }

    #[test]
    fn imag_freq_matches_continuation() {
        let r = unit(0.5, 0.5);
        for (t, x) in [(0.1, 1.0), (1.0, 0.5), (3.0, 5.0), (20.0, 0.2)] {
            let (h, grad) = green_imag_freq(t, x, &r).unwrap();
            let z = Complex64::new(0.0, t * x);
            let rad = Radial::at(z);
            // G(iqR) = (iq/4π)·G̃(iqR) ⇒ H = i·t·G̃(i t x)
            let i = Complex64::i();
            let cont = rad.tensor(&r) * (i * t);
            let scale = h.norm();
            for (a, b) in h.iter().zip(cont.iter()) {
                assert!((b.re - a).abs() <= 1e-12 * scale);
                assert!(b.im.abs() <= 1e-12 * scale);
            }
            // d/dx of G̃(i t x) is i t G̃'(z)
            let cg = tensor_gradient(rad.b * (i * t), rad.da * (i * t) * (i * t), rad.db * (i * t) * (i * t), x, &r);
            let gscale = grad.iter().map(|m| m.norm()).fold(0.0, f64::max);
            for l in 0..3 {
                for (a, b) in grad[l].iter().zip(cg[l].iter()) {
                    assert!((b.re - a).abs() <= 1e-12 * gscale);
                    assert!(b.im.abs() <= 1e-12 * gscale);
                }
            }
        }
    }

    #[test]
    fn imag_freq_limits() {
        let r = Vec3::z();
        let (h, _) = green_imag_freq(200.0, 1.0, &r).unwrap();
        assert!(h.norm() < 1e-80);
        // static limit: H ≈ −t·β/(tx)³
        let t = 1e-4;
        let (h, _) = green_imag_freq(t, 1.0, &r).unwrap();
        let beta = ProjectorPair::new(&r).beta;
        let stat = -beta * (t / (t * 1.0f64).powi(3));
        assert!((h - stat).norm() < 1e-3 * stat.norm());
    }

    #[test]
    fn imag_freq_gradient_fd() {
        let r = unit(0.8, 1.9);
        let (t, x) = (0.7, 1.3);
        let (_, grad) = green_imag_freq(t, x, &r).unwrap();
        let rho = r * x;
        for l in 0..3 {
            let f = |s: f64| {
                let mut p = rho;
                p[l] += s;
                green_imag_freq(t, p.norm(), &p.normalize()).unwrap().0.iter().copied().collect::<Vec<_>>()
            };
            let fd = derivative(f, 0.0, 1e-2).unwrap();
            let err = fd.value.iter().zip(grad[l].iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-8 * grad[l].norm(), "{err}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn symmetric_and_even(x in 0.05f64..50.0, th in 0.0f64..3.14159, ph in 0.0f64..6.28318) {
            let r = unit(th, ph);
            let e = GreenEval::new(x, &r).unwrap();
            let scale = max_abs(&e.g);
            prop_assert!(max_abs(&(e.g - e.g.transpose())) <= 1e-14 * scale);
            let flipped = GreenEval::new(x, &(-r)).unwrap();
            prop_assert!(max_abs(&(e.g - flipped.g)) <= 1e-14 * scale);
            let gs = e.grad.iter().map(max_abs).fold(0.0, f64::max);
            for l in 0..3 {
                prop_assert!(max_abs(&(e.grad[l] + flipped.grad[l])) <= 1e-14 * gs);
            }
        }
    }
}
