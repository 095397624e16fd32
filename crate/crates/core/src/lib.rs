//! Factoring two-prime moduli with even-order elliptic curves.
//!
//! The attack path draws curves from the family with full rational 2-torsion,
//! multiplies a point by staged smooth multipliers and either catches a gcd
//! that splits `N`, or recovers the common local point order `d` and splits
//! `N` through its base-`d` digits. A lattice high-bits step is the last
//! fallback. Oracle mode (known `p`, `q`) exposes componentwise ground truth
//! for testing every predicate the attack relies on.

pub mod bigmod;
pub mod consistent;
pub mod curve;
mod error;
pub mod field;
pub mod multiplier;
pub mod pipeline;
pub mod smallroots;
pub mod smoothlab;
pub mod triples;

pub use bigmod::{InverseOutcome, Rational, SemiprimeContext};
pub use consistent::{BaseDDecomposition, ConsistentOutcome};
pub use curve::{AddOutcome, CurveE2, CurveW, OracleReduction, Point};
pub use error::{Error, Result};
pub use multiplier::{HasseWindow, Multiplier, SeparationReport};
pub use pipeline::{FactorOutcome, PipelineConfig, TrialOutcome, TrialRecord};
pub use smallroots::{HighBitsInstance, IntegerLattice};
pub use triples::AdmissibleTriple;
