//! Internal forces on the pair and the center-of-mass displacement.
//!
//! Forces are in ħk₀Γ₀, displacements in 1/k₀. The closed forms use
//! gradients with respect to the position of A relative to B, so
//! ∇_A = −∇ with the A→B gradients stored in [`CouplingRates`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::coupling::{rates_for, CouplingRates};
use crate::dynamics::{check_time, Phases};
use crate::error::{Error, Result};
use crate::greens::green_imag_freq;
use crate::quadrature::{integrate_adaptive, integrate_composite, AdaptiveOptions};
use crate::units::{rydberg_pair, to_internal, DyadConfig, PairParams, Quantity, UnitSystem};
use crate::Vec3;

/// All force contributions at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceSample {
    pub t: f64,
    pub f_a_cons: Vec3,
    pub f_b_cons: Vec3,
    pub f_net_cons: Vec3,
    pub f_a_noncons: Vec3,
    pub f_b_noncons: Vec3,
    pub f_net_noncons: Vec3,
    pub f_offres_a: Vec3,
}

impl ForceSample {
    pub fn f_offres_b(&self) -> Vec3 {
        -self.f_offres_a
    }

    /// Same sample with time in seconds and forces in newtons.
    pub fn to_si(&self, units: &UnitSystem) -> Self {
        let f = |v: &Vec3| units.vec_to_si(Quantity::Force, v);
        Self {
            t: units.to_si(Quantity::Time, self.t),
            f_a_cons: f(&self.f_a_cons),
            f_b_cons: f(&self.f_b_cons),
            f_net_cons: f(&self.f_net_cons),
            f_a_noncons: f(&self.f_a_noncons),
            f_b_noncons: f(&self.f_b_noncons),
            f_net_noncons: f(&self.f_net_noncons),
            f_offres_a: f(&self.f_offres_a),
        }
    }
}

/// Resonant conservative forces (f_A, f_B, f_net).
pub fn conservative_forces(rates: &CouplingRates, t: f64) -> Result<(Vec3, Vec3, Vec3)> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    let (grad_g, grad_w) = (-rates.grad_gamma, -rates.grad_omega);
    let sin_term = grad_g * (ph.decay * (2.0 * ph.osc).sin());
    let sinh_term = grad_w * (ph.decay * ph.hyp.sinh());
    let f_a = sin_term + sinh_term;
    let f_b = sin_term - sinh_term;
    Ok((f_a, f_b, f_a + f_b))
}

/// Net conservative force from its own closed form.
pub fn conservative_net(rates: &CouplingRates, t: f64) -> Result<Vec3> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    Ok(-rates.grad_gamma * (2.0 * ph.decay * (2.0 * ph.osc).sin()))
}

/// Nonconservative forces (f_A, f_B, f_net).
///
/// Prefactor k₀/(ε₀c) on Λ and Σ, which in internal units is already
/// folded into the stored vectors.
pub fn nonconservative_forces(rates: &CouplingRates, t: f64) -> Result<(Vec3, Vec3, Vec3)> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    let (lam, sig) = (-rates.lambda_ab, -rates.sigma_ab);
    let (c, s) = ((2.0 * ph.osc).cos(), (2.0 * ph.osc).sin());
    let (ch, sh) = (ph.hyp.cosh(), ph.hyp.sinh());
    let e = ph.decay;
    let f_a = (lam * (c * rates.omega) - sig * (ch * rates.gamma)) * (2.0 * e) - (lam * s - sig * sh) * e;
    let f_b = -(lam * (c * rates.omega) + sig * (ch * rates.gamma)) * (2.0 * e) + (lam * s + sig * sh) * e;
    Ok((f_a, f_b, nonconservative_net(rates, t)?))
}

/// Net nonconservative force from its own closed form.
pub fn nonconservative_net(rates: &CouplingRates, t: f64) -> Result<Vec3> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    let sig = -rates.sigma_ab;
    Ok(sig * (-4.0 * ph.decay * (ph.hyp.cosh() * rates.gamma - 0.5 * ph.hyp.sinh())))
}

/// Quadrature over imaginary frequencies, after q = k₀ tan u.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OffResonantQuadrature {
    Adaptive { rel_tol: f64, max_intervals: usize },
    /// Fixed K15 panels on [0, π/2].
    Composite { panels: usize },
}

impl Default for OffResonantQuadrature {
    fn default() -> Self {
        Self::Adaptive {
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

/// Time-independent part of the off-resonant force on A,
/// (9/4)κ²ε·(1/π)∫ t⁴ ĥ∇_Aĥ/(1+t²)² dt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffResonantIntegral {
    pub value: Vec3,
    pub error: f64,
    pub evaluations: usize,
}

fn offres_integrand(p: &PairParams, u: f64) -> Vec3 {
    let (s, c) = u.sin_cos();
    if c <= 0.0 || s <= 0.0 {
        return Vec3::zeros();
    }
    let t = s / c;
    let (h, grad) = match green_imag_freq(t, p.x, &p.rhat) {
        Ok(v) => v,
        Err(_) => return Vec3::zeros(),
    };
    let (ea, eb) = (&p.dipole_a, &p.dipole_b);
    let h_ab = ea.dot(&(h * eb));
    let grad_ba = Vec3::from_fn(|l, _| -eb.dot(&(grad[l] * ea)));
    // t⁴/(1+t²)² dt = sin⁴u du / cos²u
    grad_ba * (h_ab * s.powi(4) / (c * c))
}

pub fn offresonant_integral(params: &PairParams, quad: OffResonantQuadrature) -> Result<OffResonantIntegral> {
    let pre = 2.25 * params.kappa * params.kappa * params.eps / PI;
    let (a, b) = (0.0, 0.5 * PI);
    match quad {
        OffResonantQuadrature::Composite { panels } => {
            if panels == 0 {
                return Err(Error::Domain { what: "panels", value: 0.0 });
            }
            let v = Vec3::from_fn(|l, _| integrate_composite(|u| offres_integrand(params, u)[l], a, b, panels));
            Ok(OffResonantIntegral {
                value: v * pre,
                error: f64::NAN,
                evaluations: 15 * panels * 3,
            })
        }
        OffResonantQuadrature::Adaptive { rel_tol, max_intervals } => {
            if !(rel_tol > 0.0) {
                return Err(Error::Domain { what: "quadrature tolerance", value: rel_tol });
            }
            let scale = integrate_composite(|u| offres_integrand(params, u).norm(), a, b, 32);
            let mut value = Vec3::zeros();
            let (mut error, mut evaluations) = (0.0, 0);
            for l in 0..3 {
                let opts = AdaptiveOptions {
                    rel_tol,
                    abs_tol: rel_tol * scale,
                    max_intervals,
                };
                let r = integrate_adaptive(|u| offres_integrand(params, u)[l], a, b, opts)?;
                value[l] = r.value;
                error += r.error;
                evaluations += r.evaluations;
            }
            Ok(OffResonantIntegral {
                value: value * pre,
                error: error * pre,
                evaluations,
            })
        }
    }
}

/// cosh(2∂_ωΩ) − 2e^{−Γ₀T}cosh(2ΓT − 2∂_ωΩ).
pub fn offresonant_bracket(rates: &CouplingRates, t: f64) -> f64 {
    let ph = Phases::new(rates, t);
    (2.0 * rates.domega_domega).cosh() - 2.0 * ph.decay * ph.hyp.cosh()
}

/// Off-resonant forces on A and B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffResonantForce {
    pub a: Vec3,
    pub b: Vec3,
}

pub fn offresonant_force(rates: &CouplingRates, t: f64, quad: OffResonantQuadrature) -> Result<OffResonantForce> {
    check_time(t)?;
    let integral = offresonant_integral(&rates.params, quad)?;
    Ok(offresonant_from(&integral, rates, t))
}

pub fn offresonant_from(integral: &OffResonantIntegral, rates: &CouplingRates, t: f64) -> OffResonantForce {
    let a = integral.value * offresonant_bracket(rates, t);
    OffResonantForce { a, b: -a }
}

/// Every force at one time, reusing a precomputed off-resonant integral.
pub fn force_sample(rates: &CouplingRates, t: f64, offres: &OffResonantIntegral) -> Result<ForceSample> {
    let (f_a_cons, f_b_cons, f_net_cons) = conservative_forces(rates, t)?;
    let (f_a_noncons, f_b_noncons, f_net_noncons) = nonconservative_forces(rates, t)?;
    Ok(ForceSample {
        t,
        f_a_cons,
        f_b_cons,
        f_net_cons,
        f_a_noncons,
        f_b_noncons,
        f_net_noncons,
        f_offres_a: offresonant_from(offres, rates, t).a,
    })
}

/// Center-of-mass displacement along R̂ (positive towards B), in 1/k₀.
pub fn cm_displacement(rates: &CouplingRates, t: f64) -> Result<f64> {
    check_time(t)?;
    let r = rates.ratio();
    let w = 2.0 * rates.omega;
    let e = (-t).exp();
    let r2 = 1.0 + r * r;
    let bracket = r2 * w * t - 2.0 * r * (1.0 - e * (w * t).cos()) + (1.0 - r * r) * e * (w * t).sin();
    let grad_a = -rates.grad_gamma.dot(&rates.params.rhat);
    Ok(rates.params.recoil * grad_a * bracket / (r2 * r2))
}

/// S_CM over a set of separations at fixed time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementCurve {
    /// (k₀R, S_CM in m)
    pub points: Vec<(f64, f64)>,
    /// s
    pub t_final: f64,
    /// kg
    pub mass: f64,
}

impl DisplacementCurve {
    /// Local maxima of |S_CM| as (k₀R, |S_CM|).
    pub fn peaks(&self) -> Vec<(f64, f64)> {
        self.points
            .windows(3)
            .filter(|w| w[1].1.abs() > w[0].1.abs() && w[1].1.abs() >= w[2].1.abs())
            .map(|w| (w[1].0, w[1].1.abs()))
            .collect()
    }
}

/// `t` is Γ₀T.
pub fn displacement_curve(cfg: &DyadConfig, separations: &[f64], t: f64) -> Result<DisplacementCurve> {
    let units = cfg.unit_system();
    let points = separations
        .iter()
        .map(|&x| {
            let (_, p) = to_internal(&cfg.with_k0r(x)?)?;
            let s = cm_displacement(&rates_for(&p)?, t)?;
            Ok((x, units.to_si(Quantity::Displacement, s)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DisplacementCurve {
        points,
        t_final: units.to_si(Quantity::Time, t),
        mass: cfg.mass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: u32,
    /// max over Γ₀T ∈ [0, 5] of |f_net|, N
    pub force_peak: f64,
    /// |S_CM| at Γ₀T = 1, m
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingAudit {
    pub x: f64,
    pub rows: Vec<ScalingRow>,
    pub force_exponent: f64,
    pub displacement_exponent: f64,
}

/// Slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

/// Circular-state pairs with ħω₀ = 2E₀/n³ at fixed k₀R.
pub fn rydberg_scaling_audit(n_list: &[u32], x: f64, mass: f64) -> Result<ScalingAudit> {
    if n_list.len() < 2 {
        return Err(Error::InvalidConfig("scaling audit needs at least two n values".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = rydberg_pair(n, mass, None)?.with_k0r(x)?;
        let (units, p) = to_internal(&cfg)?;
        let rates = rates_for(&p)?;
        let mut peak: f64 = 0.0;
        for k in 0..=1000 {
            let f = conservative_net(&rates, 5.0 * k as f64 / 1000.0)?;
            peak = peak.max(f.norm());
        }
        rows.push(ScalingRow {
            n,
            force_peak: units.to_si(Quantity::Force, peak),
            displacement: units.to_si(Quantity::Displacement, cm_displacement(&rates, 1.0)?).abs(),
        });
    }
    let ns: Vec<f64> = rows.iter().map(|r| f64::from(r.n)).collect();
    let fs: Vec<f64> = rows.iter().map(|r| r.force_peak).collect();
    let ss: Vec<f64> = rows.iter().map(|r| r.displacement).collect();
    Ok(ScalingAudit {
        x,
        force_exponent: loglog_slope(&ns, &fs),
        displacement_exponent: loglog_slope(&ns, &ss),
        rows,
    })
}
