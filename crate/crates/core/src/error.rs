use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("generator with empty name")]
    EmptyName,
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("generator {0:?} has negative energy")]
    NegativeEnergy(String),
    #[error("generator {0:?} has zero energy; only the unit may have zero energy")]
    ZeroEnergyGenerator(String),
    #[error("energy cutoff {0} is negative")]
    NegativeCutoff(String),
    #[error("class has {found} exponents, monoid has rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator record {index} ({name:?}): {reason}")]
    BadRecord { index: usize, name: String, reason: String },
    #[error("monoid file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {0} is out of range")]
    NoSuchVertex(usize),
    #[error("edge {0} is out of range")]
    NoSuchEdge(usize),
    #[error("edge {0} is exterior")]
    ExteriorEdge(usize),
    #[error("vertex {0} is exterior")]
    ExteriorVertex(usize),
    #[error("tree is not connected or has a cycle")]
    NotATree,
    #[error("exterior vertex {0} has valence {1}")]
    ExteriorValence(usize, usize),
    #[error("root must be an exterior vertex")]
    BadRoot,
    #[error("tree has no interior vertex")]
    NoInteriorVertex,
    #[error("marks do not partition 1..={0}")]
    MarksNotPartition(usize),
    #[error("interior vertex {0} is unstable")]
    Unstable(usize),
    #[error("trees have different (k, ell, beta)")]
    IndexMismatch,
    #[error("second tree is not a contraction of the first")]
    NotComparable,
    #[error("malformed tree encoding: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NovikovError {
    #[error("class {0} has odd Maslov index {1}; half-integer e-powers are disabled")]
    OddMaslov(String, i64),
    #[error("basis index {0} out of range")]
    BasisIndex(usize),
    #[error("entry m_{{{k},{beta}}} has {found} inputs")]
    Arity { k: usize, beta: String, found: usize },
    #[error("entry m_{{{k},{beta}}}({inputs}) -> {output} violates the degree rule")]
    Degree { k: usize, beta: String, inputs: String, output: String },
    #[error("m_{{0,{0}}} entry present but curvature is disabled")]
    Curvature(String),
    #[error("family collar width must be positive")]
    NotCollared,
    #[error("family endpoints do not match for gluing")]
    GlueMismatch,
    #[error("operation table file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("triple {0} is missing predecessor {1}")]
    NotPredecessorClosed(String, String),
    #[error("point {0}: {1}")]
    BadPoint(String, String),
    #[error("cannot cover point {0} at the configured radii: {1}")]
    ResolutionTooCoarse(String, String),
    #[error("vertex {vertex} is not an interior vertex of the tree at {point}")]
    BadVertex { point: String, vertex: usize },
    #[error("model file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlaschkeError {
    #[error("point {0} is not on the unit circle")]
    OffCircle(String),
    #[error("zero {0} is not strictly inside the disk")]
    ZeroOutsideDisk(String),
    #[error("winding {0} is not integral within tolerance")]
    NonIntegralWinding(f64),
    #[error("({d}, {k}) is not in the stable range")]
    Unstable { d: u32, k: u32 },
    #[error("split ({0}, {1}) needs both parts positive")]
    BadSplit(u32, u32),
    #[error("slot {slot} out of range for a family with {k} boundary points")]
    BadSlot { slot: usize, k: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CornerError {
    #[error("{0:?} is not a permutation of 1..={1}")]
    NotAPermutation(Vec<usize>, usize),
}
