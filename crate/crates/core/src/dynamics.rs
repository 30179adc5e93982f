//! Closed-form evolution of the singly excited pair after a sudden π-pulse
//! on atom A: amplitudes, populations and the emitted probability.
//!
//! Time is Γ₀T. The ∂_ω retardation terms enter additively inside the
//! arguments through z = (ΩT + ∂_ωΓ) + i(∂_ωΩ − ΓT).

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::CouplingRates;
use crate::error::{Error, Result};

/// Arguments shared by every closed form at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Phases {
    /// e^{−Γ₀T}
    pub decay: f64,
    /// ΩT + ∂_ωΓ
    pub osc: f64,
    /// 2ΓT − 2∂_ωΩ
    pub hyp: f64,
}

impl Phases {
    pub fn new(r: &CouplingRates, t: f64) -> Self {
        Self {
            decay: (-t).exp(),
            osc: r.omega * t + r.dgamma_domega,
            hyp: 2.0 * (r.gamma * t - r.domega_domega),
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "Γ₀T", value: t })
    }
}

/// Laser propagator in the (|A₊⟩, |A₋⟩) basis, SI arguments.
///
/// Row 0 carries the e^{−iω₀t−Γ₀t/2} factor.
pub fn rabi_propagator(omega_l: f64, t: f64, omega0: f64, gamma0: f64) -> Result<[[Complex64; 2]; 2]> {
    if !(omega_l > 0.0 && omega_l.is_finite()) {
        return Err(Error::Domain { what: "Ω_L", value: omega_l });
    }
    if omega_l < 100.0 * gamma0 {
        log::warn!("Rabi frequency {omega_l:e} is not much larger than Γ₀ = {gamma0:e}");
    }
    let i = Complex64::i();
    let f = (-i * omega0 * t - 0.5 * gamma0 * t).exp();
    let (s, c) = (0.5 * omega_l * t).sin_cos();
    Ok([[f * c, -i * f * s], [-i * s, Complex64::new(c, 0.0)]])
}

/// Excitation amplitudes of |A₊,B₋⟩ and |A₋,B₊⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudePair {
    /// Γ₀T
    pub t: f64,
    /// ω₀T, the carrier phase
    pub carrier: f64,
    /// a₊ without the carrier
    pub a_envelope: Complex64,
    /// b₊ without the carrier
    pub b_envelope: Complex64,
}

impl AmplitudePair {
    pub fn a_plus(&self) -> Complex64 {
        self.a_envelope * Complex64::from_polar(1.0, -self.carrier)
    }

    pub fn b_plus(&self) -> Complex64 {
        self.b_envelope * Complex64::from_polar(1.0, -self.carrier)
    }
}

pub fn amplitudes(rates: &CouplingRates, t: f64) -> Result<AmplitudePair> {
    check_time(t)?;
    let z = Complex64::new(
        rates.omega * t + rates.dgamma_domega,
        rates.domega_domega - rates.gamma * t,
    );
    let env = (-0.5 * t).exp();
    Ok(AmplitudePair {
        t,
        carrier: t / rates.params.eps,
        a_envelope: -Complex64::i() * env * z.cos(),
        b_envelope: -env * z.sin(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PopulationSample {
    /// Γ₀T
    pub t: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_gamma: f64,
    pub unitarity_sum: f64,
}

impl PopulationSample {
    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_sum - 1.0
    }
}

pub fn populations(rates: &CouplingRates, t: f64) -> Result<PopulationSample> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    let ch = ph.hyp.cosh();
    let c = (2.0 * ph.osc).cos();
    let p_a = 0.5 * ph.decay * (ch + c);
    let p_b = 0.5 * ph.decay * (ch - c);
    let p_gamma = (2.0 * rates.domega_domega).cosh() - ph.decay * ch;
    Ok(PopulationSample {
        t,
        p_a,
        p_b,
        p_gamma,
        unitarity_sum: p_a + p_b + p_gamma,
    })
}

/// dP_γ/d(Γ₀T) = e^{−Γ₀T}[cosh u − 2Γ sinh u], u = 2ΓT − 2∂_ωΩ.
pub fn emission_probability_rate(rates: &CouplingRates, t: f64) -> Result<f64> {
    check_time(t)?;
    let ph = Phases::new(rates, t);
    Ok(ph.decay * (ph.hyp.cosh() - 2.0 * rates.gamma * ph.hyp.sinh()))
}
