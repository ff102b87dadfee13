use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("0/0 is not a slope")]
    ZeroSlope,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("operation is undefined at infinity")]
    Infinite,
    #[error("Farey sum needs numerators of one sign, got {0} and {1}")]
    FareySumSigns(String, String),
    #[error("{0} and {1} are not Farey-adjacent")]
    NotAdjacent(String, String),
    #[error("continued fraction expansion needs a rational below -1, got {0}")]
    CfDomain(String),
    #[error("continued fraction entry {0} is above -2")]
    CfEntry(String),
    #[error("slope {0} is not of the form q/p with -q > p > 0")]
    InvalidSlope(String),
    #[error("p = {0} and q = {1} are not coprime")]
    NotCoprime(String, String),
    #[error("({0}, {1})-torus knots cannot be non-loose")]
    CannotBeNonLoose(String, String),
    #[error("q must be negative, got {0}")]
    PositiveQ(String),
    #[error("no representative with -q > p > 0 for ({0}, {1})")]
    NoRepresentative(String, String),
    #[error("decoration does not fit the block sequence: {0}")]
    BadDecoration(String),
    #[error("k = {k} outside 2..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("side is undefined for a fully consistent decoration")]
    FullyConsistent,
    #[error("unsupported contact coefficient {0}")]
    UnsupportedCoefficient(String),
    #[error("stabilization slots do not match block lengths: {0}")]
    SlotMismatch(String),
    #[error("component {0} still has unassigned stabilization slots")]
    UnassignedSlots(String),
    #[error("first homology has free rank {0}, expected 1")]
    FreeRank(usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("malformed diagram: {0}")]
    Diagram(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Construction(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroSlope => "zero_slope",
            Error::Overflow => "overflow",
            Error::Infinite => "infinite",
            Error::FareySumSigns(..) => "farey_sum_signs",
            Error::NotAdjacent(..) => "not_adjacent",
            Error::CfDomain(_) => "cf_domain",
            Error::CfEntry(_) => "cf_entry",
            Error::InvalidSlope(_) => "invalid_slope",
            Error::NotCoprime(..) => "not_coprime",
            Error::CannotBeNonLoose(..) => "cannot_be_non_loose",
            Error::PositiveQ(_) => "positive_q",
            Error::NoRepresentative(..) => "no_representative",
            Error::BadDecoration(_) => "bad_decoration",
            Error::KOutOfRange { .. } => "k_out_of_range",
            Error::FullyConsistent => "fully_consistent",
            Error::UnsupportedCoefficient(_) => "unsupported_coefficient",
            Error::SlotMismatch(_) => "slot_mismatch",
            Error::UnassignedSlots(_) => "unassigned_slots",
            Error::FreeRank(_) => "free_rank",
            Error::NotSquare(..) => "not_square",
            Error::Diagram(_) => "malformed_diagram",
            Error::Parse(_) => "parse",
            Error::Construction(_) => "construction",
        }
    }
}
