use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group specification: {0}")]
    InvalidGroup(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cocharacter {0} is not dominant")]
    NotDominant(String),
    #[error("pair is not strictly decreasing relative to the requested Levi")]
    NotStrictlyDecreasing,
    #[error("Levi containment violated: {0}")]
    LeviMismatch(String),
    #[error("cocharacters are not conjugate: {0}")]
    NotConjugate(String),
    #[error("cocharacter {0} is not minuscule")]
    NonMinuscule(String),
    #[error("torsion in center character lattice (invariant factors {0:?})")]
    Torsion(Vec<String>),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("support does not factor: {0}")]
    NotProduct(String),
    #[error("vector is not a combination of dictionary classes: {0}")]
    Regroup(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
