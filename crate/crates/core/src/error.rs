use std::fmt;

use thiserror::Error;

use crate::subset::Subset;

/// The defining equation an operation table can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    /// `x·x = x·1 = 1`, `1·x = x`.
    LogicalUnit,
    /// `(x·y)·(x·z) = (y·x)·(y·z)`.
    CycleEquation,
    /// `x·y = y·x = 1` implies `x = y`.
    Antisymmetry,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::LogicalUnit => "logical unit",
            Equation::CycleEquation => "cycle equation",
            Equation::Antisymmetry => "antisymmetry",
        })
    }
}

/// One failing instance of an axiom, with the element indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxiomViolation {
    pub equation: Equation,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.equation, self.witness)
    }
}

/// A claim that is proved for every L-algebra but failed on a concrete instance.
///
/// None of these should ever be produced; when one is, it carries enough
/// data to replay the failing check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FalsificationKind {
    NotTransitive,
    NonUniqueProduct,
    Distributivity,
    Prop2Mismatch,
    ResiduationNotGreatest,
    CongruenceNotCompatible,
    QuotientNotWellDefined,
    PrimeDefinitionMismatch,
    PrimeNotQuasiPrime,
    AttachmentNotPrime,
    NonUniqueAttachment,
    BijectionFailure,
    SpatialityFailure,
    NotASubalgebra,
    ProductMismatch,
    OrderedSumInvalid,
    UpperSetMismatch,
    EnumerationMismatch,
    /// A law check failed for a reason without a dedicated kind.
    LawViolation,
    /// A check could not run to completion.
    Unexpected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Falsification {
    pub kind: FalsificationKind,
    pub message: String,
    pub elements: Vec<usize>,
    pub ideals: Vec<Subset>,
}

impl Falsification {
    pub fn new(kind: FalsificationKind, message: impl Into<String>) -> Self {
        Falsification {
            kind,
            message: message.into(),
            elements: Vec::new(),
            ideals: Vec::new(),
        }
    }

    pub fn elements(mut self, elements: impl IntoIterator<Item = usize>) -> Self {
        self.elements.extend(elements);
        self
    }

    pub fn ideals(mut self, ideals: impl IntoIterator<Item = Subset>) -> Self {
        self.ideals.extend(ideals);
        self
    }
}

impl fmt::Display for Falsification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("carrier of size {size} exceeds the supported maximum of {max}")]
    TooLarge { size: usize, max: usize },
    #[error("{} axiom violation(s), first: {}", .0.len(), .0[0])]
    AxiomViolations(Vec<AxiomViolation>),
    #[error("falsified: {0}")]
    Falsified(Falsification),
    #[error("{0:?} is not an ideal")]
    NotAnIdeal(Subset),
    #[error("ideal lattice has more than {max} members")]
    TooManyIdeals { max: usize },
    #[error("enumeration supports 1 <= n <= {max}, got {n}")]
    SizeTooLarge { n: usize, max: usize },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
}

impl From<Falsification> for Error {
    fn from(f: Falsification) -> Self {
        Error::Falsified(f)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
