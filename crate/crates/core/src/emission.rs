//! Angular distribution of the emitted photon and its momentum.
//!
//! Rates are per steradian in units of Γ₀; momentum rates are in ħk₀Γ₀.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coupling::CouplingRates;
use crate::dynamics::{check_time, Phases};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::{Mat3, Vec3};

/// Product rule on the sphere: Gauss–Legendre in cos θ, trapezoid in φ.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    pub nodes: Vec<Vec3>,
    /// sr
    pub weights: Vec<f64>,
    /// Gauss–Legendre points in cos θ
    pub order: usize,
    /// azimuthal points
    pub n_phi: usize,
    /// polar axis
    pub axis: Vec3,
}

impl AngularGrid {
    /// Polar axis along `axis`.
    pub fn product(order: usize, n_phi: usize, axis: &Vec3) -> Self {
        assert!(order > 0 && n_phi > 0, "empty angular grid");
        let (ct, wt) = gauss_legendre(order);
        let (e1, e2) = transverse_basis(axis);
        let e3 = axis.normalize();
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(order * n_phi);
        let mut weights = Vec::with_capacity(order * n_phi);
        for (c, w) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for j in 0..n_phi {
                let (sp, cp) = (j as f64 * dphi).sin_cos();
                nodes.push(e1 * (s * cp) + e2 * (s * sp) + e3 * *c);
                weights.push(w * dphi);
            }
        }
        Self {
            nodes,
            weights,
            order,
            n_phi,
            axis: e3,
        }
    }

    /// Grid resolving e^{i x k̂·R̂} integrands.
    pub fn for_separation(x: f64, axis: &Vec3) -> Self {
        let order = x.ceil() as usize + 20;
        Self::product(order, 2 * order, axis)
    }

    /// Roughly doubled resolution, for convergence checks.
    pub fn refined(&self) -> Self {
        Self::product(2 * self.order, 2 * self.n_phi, &self.axis)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(k, w)| w * f(k)).sum()
    }
}

fn transverse_basis(axis: &Vec3) -> (Vec3, Vec3) {
    let a = axis.normalize();
    let trial = if a.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (trial - a * a.dot(&trial)).normalize();
    (e1, a.cross(&e1))
}

/// Which angular formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmissionMode {
    /// Interference term only.
    AsPrinted,
    /// Interference plus the same-atom term.
    #[default]
    Consistent,
}

/// Sign of ∂_ωΓ inside the interference sine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferencePhase {
    /// sin(2ΩT − 2∂_ωΓ)
    AsPrinted,
    /// sin(2ΩT + 2∂_ωΓ)
    #[default]
    Conserving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EmissionOptions {
    pub mode: EmissionMode,
    pub phase: InterferencePhase,
}

fn transverse(khat: &Vec3) -> Mat3 {
    Mat3::identity() - khat * khat.transpose()
}

/// dΓ/dΘ along `khat` at Γ₀T = `t`.
pub fn angular_rate(rates: &CouplingRates, t: f64, khat: &Vec3, opts: EmissionOptions) -> Result<f64> {
    check_time(t)?;
    if ((khat.norm() - 1.0).abs()) > 1e-12 {
        return Err(Error::Domain { what: "|khat|", value: khat.norm() });
    }
    Ok(rate_unchecked(rates, &Phases::new(rates, t), t, khat, opts))
}

fn rate_unchecked(rates: &CouplingRates, ph: &Phases, t: f64, khat: &Vec3, opts: EmissionOptions) -> f64 {
    let p = &rates.params;
    let proj = transverse(khat);
    let p_ab = p.dipole_a.dot(&(proj * p.dipole_b));
    let phase = p.x * khat.dot(&p.rhat);
    let osc = match opts.phase {
        InterferencePhase::AsPrinted => 2.0 * (rates.omega * t - rates.dgamma_domega),
        InterferencePhase::Conserving => 2.0 * ph.osc,
    };
    let cross = -(3.0 * p.kappa / (8.0 * PI))
        * p_ab
        * ph.decay
        * (phase.cos() * ph.hyp.sinh() + phase.sin() * osc.sin());
    match opts.mode {
        EmissionMode::AsPrinted => cross,
        EmissionMode::Consistent => {
            let same = 0.5 * (p.dipole_a.dot(&(proj * p.dipole_a)) + p.dipole_b.dot(&(proj * p.dipole_b)));
            cross + 3.0 / (8.0 * PI) * same * ph.decay * ph.hyp.cosh()
        }
    }
}

/// Angular rate over a whole grid with its integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularRateSample {
    /// Γ₀T
    pub t: f64,
    pub mode: EmissionMode,
    /// per sr, one per grid node
    pub rate: Vec<f64>,
    pub total_rate: f64,
    /// ħk₀Γ₀
    pub momentum_rate: Vec3,
}

pub fn sample(rates: &CouplingRates, t: f64, grid: &AngularGrid, opts: EmissionOptions) -> Result<AngularRateSample> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    let rate: Vec<f64> = grid.nodes.iter().map(|k| rate_unchecked(rates, &ph, t, k, opts)).collect();
    let mut total = 0.0;
    let mut momentum = Vec3::zeros();
    for ((k, w), r) in grid.nodes.iter().zip(&grid.weights).zip(&rate) {
        total += w * r;
        momentum += k * (w * r);
    }
    Ok(AngularRateSample {
        t,
        mode: opts.mode,
        rate,
        total_rate: total,
        momentum_rate: momentum,
    })
}

fn momentum_on(rates: &CouplingRates, t: f64, grid: &AngularGrid, opts: EmissionOptions) -> (Vec3, f64) {
    let ph = Phases::new(rates, t);
    let mut acc = Vec3::zeros();
    let mut scale = 0.0;
    for (k, w) in grid.nodes.iter().zip(&grid.weights) {
        let r = rate_unchecked(rates, &ph, t, k, opts);
        acc += k * (w * r);
        scale += w * r.abs();
    }
    (acc, scale)
}

/// Photon momentum carried away per unit time, Σ ħk₀k̂·dΓ/dΘ.
///
/// The grid is checked against a refined one; a change larger than
/// `tolerance` relative to ∫|dΓ/dΘ| is an error.
pub fn photon_momentum_rate(
    rates: &CouplingRates,
    t: f64,
    grid: &AngularGrid,
    opts: EmissionOptions,
    tolerance: f64,
) -> Result<Vec3> {
    check_time(t)?;
    let (coarse, scale) = momentum_on(rates, t, grid, opts);
    let (fine, _) = momentum_on(rates, t, &grid.refined(), opts);
    let change = (fine - coarse).norm();
    if change > tolerance * scale {
        return Err(Error::UnderResolved {
            order: grid.order,
            change: change / scale,
            tolerance,
        });
    }
    Ok(coarse)
}
