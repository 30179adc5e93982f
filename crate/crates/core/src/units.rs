//! Physical constants, the internal unit system and the Rydberg-pair builder.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec3;

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Speed of light (m/s)
    pub c: f64,
    /// Vacuum permittivity (F/m)
    pub eps0: f64,
    /// Elementary charge (C)
    pub e_charge: f64,
    /// Bohr radius (m)
    pub a0: f64,
    /// Hydrogen ground-state binding energy, 13.605693122994 eV (J)
    pub e0: f64,
    /// Atomic mass unit (kg)
    pub amu: f64,
}

/// CODATA 2018 recommended values.
pub const CODATA_2018: Constants = Constants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    eps0: 8.854_187_812_8e-12,
    e_charge: 1.602_176_634e-19,
    a0: 5.291_772_109_03e-11,
    e0: 13.605_693_122_994 * 1.602_176_634e-19,
    amu: 1.660_539_066_60e-27,
};

/// Mass of ⁷Li in atomic mass units.
pub const LI7_MASS_U: f64 = 7.016_003_436_6;

/// Quantity kinds that cross the SI/internal boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Time,
    Length,
    Frequency,
    Momentum,
    Force,
    Displacement,
}

/// Nondimensionalization anchored at (Γ₀, k₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    /// Γ₀ in 1/s
    pub gamma0: f64,
    /// k₀ in 1/m
    pub k0: f64,
    pub hbar: f64,
}

impl UnitSystem {
    pub fn new(gamma0: f64, k0: f64) -> Self {
        Self {
            gamma0,
            k0,
            hbar: CODATA_2018.hbar,
        }
    }

    /// SI value of one internal unit of `kind`.
    pub fn scale(&self, kind: Quantity) -> f64 {
        match kind {
            Quantity::Time => 1.0 / self.gamma0,
            Quantity::Length | Quantity::Displacement => 1.0 / self.k0,
            Quantity::Frequency => self.gamma0,
            Quantity::Momentum => self.hbar * self.k0,
            Quantity::Force => self.hbar * self.k0 * self.gamma0,
        }
    }

    pub fn to_internal(&self, kind: Quantity, si: f64) -> f64 {
        si / self.scale(kind)
    }

    pub fn to_si(&self, kind: Quantity, internal: f64) -> f64 {
        internal * self.scale(kind)
    }

    pub fn vec_to_si(&self, kind: Quantity, internal: &Vec3) -> Vec3 {
        internal * self.scale(kind)
    }
}

/// Physical description of the atom pair.
///
/// `r_vec` points from atom A to atom B. Dipoles are real vectors of equal
/// magnitude (identical atoms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyadConfig {
    /// Transition dipole of A (C·m)
    pub mu_a: Vec3,
    /// Transition dipole of B (C·m)
    pub mu_b: Vec3,
    /// Transition angular frequency (rad/s)
    pub omega0: f64,
    /// Single-atom decay rate (1/s)
    pub gamma0: f64,
    /// Mass of one atom (kg)
    pub mass: f64,
    /// Separation from A to B (m)
    pub r_vec: Vec3,
}

impl DyadConfig {
    pub fn new(
        mu_a: Vec3,
        mu_b: Vec3,
        omega0: f64,
        gamma0: f64,
        mass: f64,
        r_vec: Vec3,
    ) -> Result<Self> {
        let cfg = Self {
            mu_a,
            mu_b,
            omega0,
            gamma0,
            mass,
            r_vec,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (na, nb) = (self.mu_a.norm(), self.mu_b.norm());
        let all_finite = [self.omega0, self.gamma0, self.mass, na, nb, self.r_vec.norm()]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::NonFinite("DyadConfig"));
        }
        if na <= 0.0 {
            return Err(Error::InvalidConfig("dipole moment must be nonzero".into()));
        }
        if ((na - nb) / na).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "atoms must be identical: |mu_A| = {na:e}, |mu_B| = {nb:e}"
            )));
        }
        for (name, v) in [
            ("omega0", self.omega0),
            ("gamma0", self.gamma0),
            ("mass", self.mass),
            ("|R|", self.r_vec.norm()),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v:e}")));
            }
        }
        Ok(())
    }

    pub fn k0(&self) -> f64 {
        self.omega0 / CODATA_2018.c
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k0()
    }

    pub fn dipole(&self) -> f64 {
        self.mu_a.norm()
    }

    /// k₀R.
    pub fn k0r(&self) -> f64 {
        self.k0() * self.r_vec.norm()
    }

    pub fn rhat(&self) -> Vec3 {
        self.r_vec.normalize()
    }

    /// Same pair at a new dimensionless separation, keeping the axis.
    pub fn with_k0r(&self, x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain { what: "k0R", value: x });
        }
        let mut out = *self;
        out.r_vec = self.rhat() * (x / self.k0());
        Ok(out)
    }

    /// Radiative rate implied by the dipole and frequency, k₀³|μ|²/(3πε₀ħ).
    pub fn radiative_rate(&self) -> f64 {
        let c = CODATA_2018;
        self.k0().powi(3) * self.dipole().powi(2) / (3.0 * PI * c.eps0 * c.hbar)
    }

    pub fn unit_system(&self) -> UnitSystem {
        UnitSystem::new(self.gamma0, self.k0())
    }
}

/// Dimensionless description of the pair consumed by every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairParams {
    /// k₀R
    pub x: f64,
    /// Unit vector from A to B
    pub rhat: Vec3,
    /// Unit dipole direction of A
    pub dipole_a: Vec3,
    /// Unit dipole direction of B
    pub dipole_b: Vec3,
    /// Γ_rad/Γ₀ with Γ_rad = k₀³|μ|²/(3πε₀ħ); 1 when Γ₀ is the radiative rate
    pub kappa: f64,
    /// Γ₀/ω₀
    pub eps: f64,
    /// Recoil ratio ħk₀²/(MΓ₀)
    pub recoil: f64,
}

impl PairParams {
    /// Parallel dipoles perpendicular to the axis, R̂ = ẑ and μ̂ = x̂,
    /// radiative Γ₀ (κ = 1).
    pub fn perpendicular(x: f64, eps: f64, recoil: f64) -> Self {
        Self {
            x,
            rhat: Vec3::z(),
            dipole_a: Vec3::x(),
            dipole_b: Vec3::x(),
            kappa: 1.0,
            eps,
            recoil,
        }
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = x;
        self
    }
}

/// Split a configuration into its unit system and dimensionless parameters.
pub fn to_internal(cfg: &DyadConfig) -> Result<(UnitSystem, PairParams)> {
    cfg.validate()?;
    let units = cfg.unit_system();
    let k0 = cfg.k0();
    let params = PairParams {
        x: cfg.k0r(),
        rhat: cfg.rhat(),
        dipole_a: cfg.mu_a.normalize(),
        dipole_b: cfg.mu_b.normalize(),
        kappa: cfg.radiative_rate() / cfg.gamma0,
        eps: cfg.gamma0 / cfg.omega0,
        recoil: CODATA_2018.hbar * k0 * k0 / (cfg.mass * cfg.gamma0),
    };
    Ok((units, params))
}

/// Transition dipole e·a₀·n² of adjacent circular states.
pub fn circular_dipole(n: u32) -> f64 {
    let n = f64::from(n);
    CODATA_2018.e_charge * CODATA_2018.a0 * n * n
}

/// Transition wavelength from ħω₀ = 2E₀/n³.
pub fn circular_wavelength(n: u32) -> f64 {
    let c = CODATA_2018;
    let omega0 = 2.0 * c.e0 / (c.hbar * f64::from(n).powi(3));
    2.0 * PI * c.c / omega0
}

/// Pair of circular Rydberg atoms |nC⟩, |(n−1)C⟩.
///
/// Dipoles are parallel to x̂ and the axis is ẑ; the separation is set to
/// k₀R = 1, use [`DyadConfig::with_k0r`] to move it. Γ₀ is the radiative
/// rate of the transition.
pub fn rydberg_pair(n: u32, isotope_mass: f64, lambda0_override: Option<f64>) -> Result<DyadConfig> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "principal quantum number must be >= 2, got {n}"
        )));
    }
    if !(isotope_mass > 0.0 && isotope_mass.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "isotope mass must be positive, got {isotope_mass:e}"
        )));
    }
    let lambda0 = match lambda0_override {
        Some(l) if !(l > 0.0 && l.is_finite()) => {
            return Err(Error::InvalidConfig(format!("wavelength must be positive, got {l:e}")))
        }
        Some(l) => l,
        None => circular_wavelength(n),
    };
    let c = CODATA_2018;
    let k0 = 2.0 * PI / lambda0;
    let mu = circular_dipole(n);
    let gamma0 = k0.powi(3) * mu * mu / (3.0 * PI * c.eps0 * c.hbar);
    DyadConfig::new(
        Vec3::x() * mu,
        Vec3::x() * mu,
        k0 * c.c,
        gamma0,
        isotope_mass,
        Vec3::z() / k0,
    )
}

/// The ⁷Li |70C⟩/|69C⟩ pair with λ₀ = 448 μm.
pub fn lithium_70c() -> DyadConfig {
    rydberg_pair(70, LI7_MASS_U * CODATA_2018.amu, Some(448e-6)).expect("valid builtin pair")
}
