//! Closure systems, total degeneracy, the class quotient and free sequences.

mod axioms;
mod free;
mod quotient;
mod system;
mod table;
mod witness;

pub use axioms::{check_axioms, AxiomCheck, AxiomReport, AxiomWitness, Budget, Coverage};
pub use free::{enumerate_maximal_free, exhaustive_maximal_free, invariant_of, is_free, FreeSequence, Invariant};
pub use quotient::{quotient, structure_check, QuotientOrder, StructureVerdict};
pub use system::{
    cl_from_poset, members, set_of, Ambient, BaseKind, BaseOrder, Carrier, Closure, ClosureSpec, ClosureSystem,
    Construction, ElemSet, FiberSpec, TableSpec,
};
pub use table::ClosureTable;
pub use witness::{
    build_witness_order, random_order, random_witness_extension, verify_witness, AmbientConvexity, WitnessOrder,
    WitnessReport,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("duplicate element id {0:?}")]
    DuplicateId(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element index {0} is out of range")]
    OutOfRange(usize),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("construction requires a linear base order")]
    RequiresLinearBase,
    #[error("not a partial order: {0}")]
    BadOrder(String),
    #[error("not a closure operator: {0:?}")]
    NotClosure(AxiomWitness),
    #[error("closure system is not totally degenerated at {0:?}")]
    NotTotallyDegenerated(Vec<usize>),
    #[error("relation is not a strict partial order: {0}")]
    NotStrictOrder(String),
    #[error("carrier of {0} elements is too large for exhaustive enumeration")]
    TooLarge(usize),
}
