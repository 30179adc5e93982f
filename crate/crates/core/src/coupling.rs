//! Complex coupling Ω̃ = Ω − iΓ between the two atoms, its frequency and
//! spatial derivatives, and the longitudinal-momentum vectors Λ and Σ.
//!
//! All fields of [`CouplingRates`] are in internal units. Spatial gradients
//! are taken with respect to R_vec (A→B).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::greens::{self, bilinear, contract_gradient};
use crate::units::{to_internal, DyadConfig, PairParams, UnitSystem};
use crate::Vec3;

/// Coupling coefficients at ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingRates {
    pub params: PairParams,
    /// Ω_{kR}/Γ₀
    pub omega: f64,
    /// Γ_{kR}/Γ₀
    pub gamma: f64,
    /// ∂_ωΩ_{kR}, dimensionless
    pub domega_domega: f64,
    /// ∂_ωΓ_{kR}, dimensionless
    pub dgamma_domega: f64,
    /// ∇Ω in units of Γ₀k₀
    pub grad_omega: Vec3,
    /// ∇Γ in units of Γ₀k₀
    pub grad_gamma: Vec3,
    /// Λ_AB in units of ħk₀
    pub lambda_ab: Vec3,
    /// Σ_AB in units of ħk₀
    pub sigma_ab: Vec3,
}

/// The same coefficients in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingRatesSi {
    /// rad/s
    pub omega_kr: f64,
    /// 1/s
    pub gamma_kr: f64,
    pub domega_domega: f64,
    pub dgamma_domega: f64,
    /// rad/(s·m)
    pub grad_omega: Vec3,
    /// 1/(s·m)
    pub grad_gamma: Vec3,
    /// kg·m/s
    pub lambda_ab: Vec3,
    /// kg·m/s
    pub sigma_ab: Vec3,
    /// 1/s
    pub gamma0: f64,
}

impl CouplingRates {
    pub fn omega_tilde(&self) -> Complex64 {
        Complex64::new(self.omega, -self.gamma)
    }

    /// 𝓡 = 2Ω_{kR}/Γ₀.
    pub fn ratio(&self) -> f64 {
        2.0 * self.omega
    }

    /// Copy with both ∂_ω terms set to zero.
    pub fn without_retardation(mut self) -> Self {
        self.domega_domega = 0.0;
        self.dgamma_domega = 0.0;
        self
    }

    pub fn to_si(&self, units: &UnitSystem) -> CouplingRatesSi {
        let g0 = units.gamma0;
        let p = units.hbar * units.k0;
        CouplingRatesSi {
            omega_kr: self.omega * g0,
            gamma_kr: self.gamma * g0,
            domega_domega: self.domega_domega,
            dgamma_domega: self.dgamma_domega,
            grad_omega: self.grad_omega * (g0 * units.k0),
            grad_gamma: self.grad_gamma * (g0 * units.k0),
            lambda_ab: self.lambda_ab * p,
            sigma_ab: self.sigma_ab * p,
            gamma0: g0,
        }
    }
}

/// Γ₀ = k₀³|μ|²/(3πε₀ħ), from the x → 0 limit Im G̃ → −(2/3)I.
pub fn gamma0_rate(cfg: &DyadConfig) -> f64 {
    cfg.radiative_rate()
}

pub fn coupling_rates(cfg: &DyadConfig) -> Result<CouplingRates> {
    let (_, params) = to_internal(cfg)?;
    rates_for(&params)
}

/// Ω̃/Γ₀ at frequency s·ω₀ with the separation held fixed.
pub fn omega_tilde_at(params: &PairParams, s: f64) -> Result<Complex64> {
    let g = greens::green(params.x * s, &params.rhat)?;
    Ok(0.75 * params.kappa * s.powi(3) * bilinear(&g, &params.dipole_a, &params.dipole_b))
}

pub fn rates_for(params: &PairParams) -> Result<CouplingRates> {
    let (ea, eb) = (&params.dipole_a, &params.dipole_b);
    let pre = 0.75 * params.kappa;
    let eval = greens::GreenEval::new(params.x, &params.rhat)?;
    let dg = greens::green_dx(params.x, &params.rhat)?;

    let w = pre * bilinear(&eval.g, ea, eb);
    // d/dω of ω³G̃(ωR/c), per unit ω
    let dw = pre * params.eps * (3.0 * bilinear(&eval.g, ea, eb) + params.x * bilinear(&dg, ea, eb));
    let grad = contract_gradient(&eval.grad, ea, eb);
    let grad_omega = Vec3::from_fn(|l, _| pre * grad[l].re);
    let grad_gamma = Vec3::from_fn(|l, _| -pre * grad[l].im);

    let curl_b = |part: fn(&Complex64) -> f64| -> Vec3 {
        let m = eval.curl.map(|c| part(&c));
        m * eb
    };
    let long = pre * params.eps;
    let lambda_ab = -ea.cross(&curl_b(|c| c.im)) * long;
    let sigma_ab = ea.cross(&curl_b(|c| c.re)) * long;

    Ok(CouplingRates {
        params: *params,
        omega: w.re,
        gamma: -w.im,
        domega_domega: dw.re,
        dgamma_domega: -dw.im,
        grad_omega,
        grad_gamma,
        lambda_ab,
        sigma_ab,
    })
}
