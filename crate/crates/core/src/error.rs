use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{kind} size {size} is below the minimum of {min}")]
    SizeTooSmall {
        kind: &'static str,
        size: usize,
        min: usize,
    },
    #[error("sycamore size must be even, got {0}")]
    OddSycamoreSize(usize),
    #[error("heavy-hex qubit count must be a multiple of 5, got {0}")]
    HeavyHexNotMultipleOfFive(usize),
    #[error("heavy-hex anchor index must be in 0..4, got {0}")]
    BadAnchor(usize),
    #[error("unknown unit id {0}")]
    UnknownUnit(usize),
    #[error("units {0} and {1} are not adjacent")]
    UnitsNotAdjacent(usize, usize),
    #[error("unit lengths differ: {0} vs {1}")]
    UnitLengthMismatch(usize, usize),
    #[error("physical qubit {0} appears twice in one layer")]
    LayerOverlap(usize),
    #[error("no link between physical qubits {0} and {1}")]
    NotAnEdge(usize, usize),
    #[error("physical qubit {0} is outside the graph")]
    QubitOutOfRange(usize),
    #[error("logical qubit {logical} sits on physical {actual}, not {claimed}")]
    MappingMismatch {
        logical: usize,
        claimed: usize,
        actual: usize,
    },
    #[error("on-path unit {0} does not lie between the two danglers")]
    ViaNotBetween(usize),
    #[error("segment is not a path in the host graph")]
    NotAPath,
    #[error("qubit count must be positive")]
    EmptyRegister,
    #[error("faulty qubit {0} is on the main path; only dangler faults are supported")]
    OnPathFault(usize),
    #[error("faulty qubits span more than one unit")]
    FaultsSpanUnits,
    #[error("fault exclusion leaves no usable unit")]
    TooFewUnits,
    #[error("excluded units {0} and {1} split the remaining units into two disconnected blocks")]
    FaultBandSplits(usize, usize),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("search space of {0} candidates exceeds the cap of {1}")]
    SearchSpaceTooLarge(u128, u128),
    #[error("unknown synthesis shape '{0}'")]
    UnknownShape(String),
}
