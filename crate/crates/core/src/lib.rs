//! Exact combinatorial topology for symmetrized deleted joins.
//!
//! The crate is organised around five pieces:
//!
//! * [`complex`]: simplicial complexes on `[m]`, skeleta, Alexander duals and the
//!   six-vertex projective plane.
//! * [`joins`]: deleted joins and symmetrized deleted joins, with cells recorded as
//!   ordered partitions `(A_1, ..., A_r; B)` of `[m]`.
//! * [`morse`]: the stepwise pivot matching on join complexes, passports, acyclicity
//!   and critical-cell certificates.
//! * [`unavoidability`]: collective unavoidability by exhaustive search and by the
//!   deficiency / multipartite Kneser graph criterion.
//! * [`homology`]: exact reduced integral homology via sparse Smith normal form.

pub mod complex;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod joins;
pub mod morse;
pub mod sampling;
pub mod unavoidability;

pub use complex::{Complex, VertexSet};
pub use error::{Error, Result};
pub use homology::{ChainComplex, HomologyProfile};
pub use joins::{Family, JoinCell, JoinComplex, JoinKind};
pub use morse::{CriticalReport, GradientField, Passport};
pub use unavoidability::{Certificate, KneserGraph, Method, Witness};
