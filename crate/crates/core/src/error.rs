use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurvError {
    #[error("dimension {dim} is below the minimum {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("index ({i},{j},{k},{l}) out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        dim: usize,
    },

    #[error("conflicting values for component ({i},{j},{k},{l}): {existing} vs {requested}")]
    SymmetryConflict {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        existing: f64,
        requested: f64,
    },

    #[error("first Bianchi identity violated: relative residual {residual:e} exceeds {tol:e}")]
    BianchiViolation { residual: f64, tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degenerate plane: Gram determinant {gram:e}")]
    DegeneratePlane { gram: f64 },

    #[error("matrix is not symmetric: asymmetry {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("frame is not orthonormal: deviation {deviation:e}")]
    FrameNotOrthonormal { deviation: f64 },

    #[error("tolerance `{name}` must be strictly positive")]
    InvalidTolerance { name: &'static str },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CurvError> = std::result::Result<T, E>;
