//! Exact computation of matrix units and primitive orthogonal idempotents in
//! simple components of rational group algebras.
//!
//! The pipeline: describe a finite group, pick a pair of subgroups (H, K)
//! with H/K cyclic, certify it with an inductive chain of centralizers, build
//! the crossed-product presentation of the component's non-matrix part,
//! decide whether that part splits or has prime Schur index, and emit a
//! complete set of matrix units whose defining relations are verified by
//! exact rational arithmetic.
//!
//! Everything here is `no_std` + `alloc`; IO, serialization, and the command
//! line live in the companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod algebra;
pub mod catalog;
pub mod crossed;
pub mod cyclotomic;
pub mod embedding;
pub mod group;
pub mod linalg;
pub mod perm;
pub mod rational;
pub mod shoda;
pub mod units;

pub use algebra::{GroupAlgebraElement, SubalgebraBasis};
pub use crossed::{
    build_presentation, norm_equation_solve, schur_decision, split_idempotent_probe,
    sylow_split, trivialize_factor_set, unit_power_scalar, ComponentPresentation,
    ComponentScaffold, CrossedElem, CrossedProductPresentation, DecisionConfig, OracleVerdict,
    PresentationError, SchurDecision, SchurVerdict, SchurWitness, SylowSplit, SylowSplitError,
    Trivialization,
};
pub use shoda::GsspCertificate;
pub use units::{
    assemble_component_units, component_matrix_units, prime_index_matrix_units,
    split_abelian_matrix_units, transport_matrix_units, transversal_matrix_units,
    verify_matrix_units, ComponentUnits, CornerCheck, MatrixUnitFailure, MatrixUnitSet,
    PrimeIndexError, PrimeIndexOverrides, PrimeIndexReport, SplitUnitsError, UnitsConfig,
    UnitsError, UnitsProvenance,
};
pub use cyclotomic::{CyclotomicNumber, GaloisElement, SubfieldDescriptor};
pub use group::{FiniteGroup, Subgroup};
pub use linalg::{SolveOutcome, Span};
pub use perm::Permutation;
pub use rational::Rational;
