//! Closed-form dynamics of two identical two-level atoms that share a single
//! excitation: populations, spontaneous emission and its directionality, the
//! conservative, nonconservative and off-resonant internal forces, and the
//! resulting center-of-mass displacement.
//!
//! Everything downstream of [`units`] works in internal units anchored at the
//! single-atom decay rate Γ₀ and the resonant wavenumber k₀:
//!
//! | quantity      | unit        |
//! |---------------|-------------|
//! | time          | 1/Γ₀        |
//! | length        | 1/k₀        |
//! | rate          | Γ₀          |
//! | momentum      | ħk₀         |
//! | force         | ħk₀Γ₀       |
//!
//! SI values only appear at the boundary, through [`UnitSystem`].

pub mod coupling;
pub mod dynamics;
pub mod emission;
pub mod error;
pub mod forces;
pub mod greens;
pub mod oracle;
pub mod quadrature;
pub mod units;
pub mod verify;

pub use coupling::{coupling_rates, gamma0_rate, CouplingRates};
pub use dynamics::{amplitudes, populations, AmplitudePair, PopulationSample};
pub use emission::{AngularGrid, EmissionMode, EmissionOptions, InterferencePhase};
pub use error::{Error, Result};
pub use forces::{ForceSample, OffResonantQuadrature};
pub use greens::GreenEval;
pub use units::{rydberg_pair, Constants, DyadConfig, PairParams, UnitSystem, CODATA_2018};

/// Real 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Real 3×3 matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Complex 3×3 matrix.
pub type CMat3 = nalgebra::Matrix3<num_complex::Complex64>;
pub use num_complex::Complex64;
