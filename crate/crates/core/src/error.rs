use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("order {0} outside supported range |nu| <= {max}", max = crate::specfun::MAX_ORDER)]
    OrderOutOfRange(f64),

    #[error("result out of floating-point range for nu={nu}, |z|={abs_z}")]
    Overflow { nu: f64, abs_z: f64 },

    #[error("singular argument z = 0 for {0}")]
    SingularArgument(&'static str),

    #[error("confluent hypergeometric pole: c = {0} is a non-positive integer")]
    HypergeometricPole(f64),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("radius {r} outside the {region} region")]
    WrongRegion { r: f64, region: &'static str },

    #[error("barrier height U={u} is not evanescent: need E-Mc^2 < U < E+Mc^2")]
    NonEvanescentBarrier { u: f64 },

    #[error("resonance: {0}")]
    Resonance(String),

    #[error("anomalous channel diverges at r = 0 ({0})")]
    DivergentAtOrigin(&'static str),

    #[error("coupling alpha={0} outside the supported range {1}")]
    CouplingRange(f64, &'static str),

    #[error("angle theta={theta} inside the forward cone (theta_cut={cut})")]
    ForwardCone { theta: f64, cut: f64 },

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("partial-wave sum truncation failed: tail {tail:e} above tolerance {tol:e} at l_max cap {l_max}")]
    Truncation { tail: f64, tol: f64, l_max: usize },

    #[error("quadrature did not reach tolerance: estimate error {error:e} > {tol:e}")]
    Quadrature { error: f64, tol: f64 },

    #[error("ODE integration failed: {0}")]
    Ode(String),

    #[error("extrapolation unstable: spread {spread:e} exceeds {tol:e}")]
    Extrapolation { spread: f64, tol: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
