use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed fraction {0:?}")]
    ParseFraction(String),
    #[error("non-canonical fraction {0:?} (expected lowest terms, positive denominator, no leading zeros)")]
    NonCanonical(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("cofactor expansion limited to n <= {max}, got n = {n}")]
    CofactorTooLarge { n: usize, max: usize },
    #[error("entry count {got} does not match {rows}x{cols}")]
    DimensionMismatch { rows: usize, cols: usize, got: usize },
    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index list must be strictly increasing, got {0:?}")]
    IndicesNotIncreasing(Vec<usize>),
    #[error("x[{i}] = y[{j}] = {value}: Cauchy nodes collide")]
    NodeCollision { i: usize, j: usize, value: String },
    #[error("Cauchy nodes must be distinct and nonzero: {0}")]
    InvalidNodes(String),
    #[error("node lists differ in length ({xs} vs {ys}) or are empty")]
    NodeLengthMismatch { xs: usize, ys: usize },
    #[error("sequence indices start at 1")]
    ZeroSequenceIndex,
    #[error("explicit sequence has {len} terms, index {index} requested")]
    ExplicitOutOfRange { index: usize, len: usize },
    #[error("explicit sequence term {0} is zero or repeats an earlier term")]
    InvalidExplicitTerm(usize),
    #[error("random sequence (seed {seed}, bound {bound}) could not produce a distinct term {index}")]
    RandomExhausted { seed: u64, bound: u64, index: usize },
    #[error("bad sequence spec {0:?} (expected nat, recip, list:a,b,..., random:<seed>:<bound>)")]
    ParseSequence(String),
    #[error("need 2 <= r < n, got r = {r}, n = {n}")]
    InvalidShape { r: usize, n: usize },
    #[error("index sets overlap at {0}")]
    IndexOverlap(usize),
    #[error("index lists have invalid lengths: {0}")]
    IndexLengths(String),
    #[error("invalid index selection: {0}")]
    InvalidIndices(String),
    #[error("Toeplitz diagonal list must have odd length, got {0}")]
    EvenToeplitzLength(usize),
    #[error("indices t, s, l must be pairwise distinct, got t = {t}, s = {s}, l = {l}")]
    CoincidentIndices { t: usize, s: usize, l: usize },
    #[error("formula family is not structural-times-constant: {0}")]
    NotStructural(String),
    #[error("column scale {0} is zero")]
    ZeroScale(usize),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{0}")]
    InvalidArgument(String),
}
