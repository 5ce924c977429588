use thiserror::Error;

/// Errors raised by the curvature calculus.
///
/// Every operation either returns a value that meets its documented
/// tolerance or one of these variants; nothing is silently degraded.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric (asymmetry {asymmetry:.3e})")]
    NotSkew { asymmetry: f64 },

    #[error("matrix is not a proper rotation (orthogonality defect {orthogonality:.3e}, det {det})")]
    NotRotation { orthogonality: f64, det: f64 },

    #[error("rotation angle {angle} is too close to pi for the logarithm map")]
    NearPiRotation { angle: f64 },

    #[error("tangent map is singular at rotation angle {angle}")]
    TangentMapSingular { angle: f64 },

    #[error("binomial index out of range: C({n}, {i}) with table limit {max}")]
    IndexError { n: usize, i: usize, max: usize },

    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("insufficient order: need {needed}, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("jet domain error: {0}")]
    JetDomain(String),

    #[error("rotation angle {angle} is too close to pi: the Gibbs vector diverges")]
    GimbalDomain { angle: f64 },

    #[error("rotation angle {angle} is near zero with a varying axis; supply a fixed axis")]
    SmallAngleAmbiguous { angle: f64 },

    #[error("inconsistent Gibbs pair: phi_bar * (|phi|^2 + 1) = {product}, expected 2")]
    InconsistentGibbs { product: f64 },

    #[error("co-rotational curvature is only defined for order n > 0")]
    ZeroCorotationalOrder,

    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    #[error("finite-difference stencil [{lo}, {hi}] leaves the admissible interval [{min}, {max}]")]
    StencilOutOfRange { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("invalid finite-difference configuration: {0}")]
    InvalidFdConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short stable identifier, used in reports and CLI messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSkew { .. } => "NotSkew",
            Error::NotRotation { .. } => "NotRotation",
            Error::NearPiRotation { .. } => "NearPiRotation",
            Error::TangentMapSingular { .. } => "TangentMapSingular",
            Error::IndexError { .. } => "IndexError",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::InsufficientOrder { .. } => "InsufficientOrder",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::JetDomain(_) => "JetDomain",
            Error::GimbalDomain { .. } => "GimbalDomain",
            Error::SmallAngleAmbiguous { .. } => "SmallAngleAmbiguous",
            Error::InconsistentGibbs { .. } => "InconsistentGibbs",
            Error::ZeroCorotationalOrder => "ZeroCorotationalOrder",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::StencilOutOfRange { .. } => "StencilOutOfRange",
            Error::InvalidFdConfig(_) => "InvalidFdConfig",
        }
    }

    /// True for errors caused by the rotation field leaving an admissible
    /// region (as opposed to caller mistakes such as order mismatches).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NearPiRotation { .. }
                | Error::TangentMapSingular { .. }
                | Error::JetDomain(_)
                | Error::GimbalDomain { .. }
                | Error::SmallAngleAmbiguous { .. }
        )
    }
}
