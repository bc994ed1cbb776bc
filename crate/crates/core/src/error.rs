use thiserror::Error;

/// Errors raised anywhere in the library. Each variant carries a stable code
/// (see [`Error::code`]) that the CLI surfaces in reports and exit messages.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group closure exceeds cap of {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("element is not in the group")]
    NotInGroup,
    #[error("generator images do not define a homomorphism")]
    NotAHomomorphism,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not {p}-perfect")]
    NotPPerfect { p: u64 },
    #[error("p-center reduction made no progress")]
    CenterReductionStalled,
    #[error("map is not an automorphism of the group")]
    NotAnAutomorphism,
    #[error("automorphism does not preserve the class multiset")]
    ClassNotPreserved,
    #[error("rank {r} is out of range (allowed {min}..={max})")]
    RankOutOfRange { r: usize, min: usize, max: usize },
    #[error("reduced classes require r = 4, got r = {0}")]
    RankNotFour(usize),
    #[error("class selector matched nothing: {0}")]
    UnknownClass(String),
    #[error("middle-twist formula mismatch: {0}")]
    FormulaMismatch(String),
    #[error("cusp members disagree on type: {0}")]
    InconsistentType(String),
    #[error("genus is not an integer (index sum {index_sum}, degree {degree})")]
    NonIntegralGenus { index_sum: usize, degree: usize },
    #[error("genus is negative (index sum {index_sum}, degree {degree})")]
    NegativeGenus { index_sum: usize, degree: usize },
    #[error("element order is divisible by p = {p}")]
    OrderNotPrime { p: u64 },
    #[error("middle product order is divisible by p = {p}")]
    MiddleProductNotPrime { p: u64 },
    #[error("genus-0 hypothesis fails (index sum {index_sum}, degree {degree})")]
    GenusHypothesisFails { index_sum: usize, degree: usize },
    #[error("entries do not act transitively")]
    NotTransitive,
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("invalid central extension: {0}")]
    BadExtension(String),
    #[error("kernel is not a {p}-group")]
    NotPGroupKernel { p: u64 },
    #[error("p'-preimage of a class splits into several classes")]
    MultiplePrimeClasses,
    #[error("unknown verification suite: {0}")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "NF001",
            Error::InvalidPermutation(_) => "NF002",
            Error::Parse(_) => "NF003",
            Error::ClosureExceedsCap { .. } => "NF004",
            Error::BadParameters(_) => "NF005",
            Error::NotInGroup => "NF006",
            Error::NotAHomomorphism => "NF007",
            Error::NotNormal => "NF008",
            Error::NotPPerfect { .. } => "NF009",
            Error::CenterReductionStalled => "NF010",
            Error::NotAnAutomorphism => "NF011",
            Error::ClassNotPreserved => "NF012",
            Error::RankOutOfRange { .. } => "NF013",
            Error::RankNotFour(_) => "NF014",
            Error::UnknownClass(_) => "NF015",
            Error::FormulaMismatch(_) => "NF016",
            Error::InconsistentType(_) => "NF017",
            Error::NonIntegralGenus { .. } => "NF018",
            Error::NegativeGenus { .. } => "NF019",
            Error::OrderNotPrime { .. } => "NF020",
            Error::MiddleProductNotPrime { .. } => "NF021",
            Error::GenusHypothesisFails { .. } => "NF022",
            Error::NotTransitive => "NF023",
            Error::NotSurjective => "NF024",
            Error::BadExtension(_) => "NF025",
            Error::NotPGroupKernel { .. } => "NF026",
            Error::MultiplePrimeClasses => "NF027",
            Error::UnknownSuite(_) => "NF028",
            Error::Config(_) => "NF029",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
