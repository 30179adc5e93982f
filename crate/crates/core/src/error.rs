use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the closed form.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("step size underflow at t = {t:e} (h = {step:e})")]
    StepUnderflow { t: f64, step: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("angular grid under-resolved: order {order} changed result by {change:e} (tolerance {tolerance:e})")]
    UnderResolved {
        order: usize,
        change: f64,
        tolerance: f64,
    },
}
