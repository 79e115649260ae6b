use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RswError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("velocity decomposition undefined at the origin")]
    OriginSingular,

    #[error("depth {h:e} is below the depth floor")]
    ZeroDepth { h: f64 },

    #[error("singular time t = {t}: the map is undefined where sin(f t / 2) = 0")]
    SingularTime { t: f64 },

    #[error("point {point:?} lies outside the validity window ({reason})")]
    WindowViolation { point: [f64; 3], reason: String },

    #[error("no ring exists for these constants: {0}")]
    NoRingExists(String),

    #[error("structure-constant fit is rank deficient (rank {rank} < 9)")]
    FitDegenerate { rank: usize },

    #[error("adaptive quadrature exceeded its budget on [{a}, {b}]")]
    QuadratureFail { a: f64, b: f64 },

    #[error("family {0} has no closed-form trajectories")]
    UnsupportedFamily(String),

    #[error("trajectory left the domain at t = {t} (r = {r})")]
    LeftDomain { t: f64, r: f64 },

    #[error("step size underflow at t = {t}")]
    BlowUp { t: f64 },

    #[error("CFL condition violated: {0}")]
    CflViolation(String),

    #[error("negative depth {h:e} produced at cell ({i}, {j})")]
    NegativeDepth { i: usize, j: usize, h: f64 },

    #[error("structure tables differ: {0}")]
    Mismatch(String),
}

pub type Result<T, E = RswError> = std::result::Result<T, E>;
