use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p = {p} must be larger than 3")]
    InvalidExponent { p: f64 },
    #[error("spectral slack eps = {eps} must lie in (0, {max})")]
    InvalidSlack { eps: f64, max: f64 },
    #[error("time t = {t} is not before the blow-up time {blowup_time}")]
    PastBlowup { t: f64, blowup_time: f64 },
    #[error("point (t = {t}, r = {r}) lies outside the backward lightcone of ({blowup_time}, 0)")]
    OutsideLightcone { t: f64, r: f64, blowup_time: f64 },
    #[error("blow-up time {blowup_time} outside the admissible interval (1/2, 3/2)")]
    BlowupTimeOutOfRange { blowup_time: f64 },
    #[error("radius {requested} exceeds the data domain [0, {available}]")]
    OutOfDataDomain { requested: f64, available: f64 },
    #[error("first data component must vanish at the origin, found {value}")]
    NotInDataSpace { value: f64 },
    #[error("grid needs at least 3 nodes and a non-empty interval, got n = {n}")]
    InvalidGrid { n: usize },
    #[error("grid size mismatch: expected {expected} nodes, found {found}")]
    GridMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("discrete solution exploded at tau = {tau} (norm {norm:e})")]
    Unstable { tau: f64, norm: f64 },
    #[error("contour node lambda = {re} + {im}i is too close to the spectrum (condition {condition:e})")]
    ContourCollision { re: f64, im: f64, condition: f64 },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("norm sample {index} is not positive")]
    NonPositiveNorm { index: usize },
    #[error("Gamma function pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("hypergeometric series did not converge after {terms} terms (partial sum {re} + {im}i)")]
    SeriesDivergence { terms: usize, re: f64, im: f64 },
    #[error("hypergeometric argument |z| = {abs_z} outside the supported domain")]
    HypergeometricDomain { abs_z: f64 },
    #[error("search region must lie strictly right of Re lambda = {boundary}")]
    InvalidRegion { boundary: f64 },
    #[error("lambda = {re} + {im}i is not an eigenvalue (relative residual {residual:e})")]
    NotAnEigenvalue { re: f64, im: f64, residual: f64 },
    #[error("initial data norm {norm} exceeds the guard {guard}")]
    InitialDataTooLarge { norm: f64, guard: f64 },
    #[error("trajectory does not decay: Duhamel tail estimate {tail:e} above tolerance")]
    NotDecaying { tail: f64 },
    #[error("fixed-point iteration is not contracting (ratio {ratio} at iteration {iteration})")]
    DataTooLarge { ratio: f64, iteration: usize },
    #[error("fixed point has X-norm {x_norm} outside the ball of radius {delta}")]
    OutsideBall { x_norm: f64, delta: f64 },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("no sign change of the correction on [{t_lo}, {t_hi}] (f = {f_lo}, {f_hi})")]
    NoSignChange { t_lo: f64, t_hi: f64, f_lo: f64, f_hi: f64 },
    #[error("singular linear system")]
    Singular,
}
