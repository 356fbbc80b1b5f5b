//! Exact-arithmetic local topological recursion over `Q(i, sqrt2)`.
//!
//! The crate computes the correlation forms `omega_{g,n}` of a local
//! spectral curve three ways and proves them equal on the nose:
//!
//! - [`recursion::tr_omega`]: the residue recursion itself;
//! - [`graphsum::tr_graph_sum`]: the decorated-graph sum with psi-class
//!   vertex weights, checked-jump edges and checked-time dilaton leaves;
//! - [`graphsum::givental_graph_sum`]: the R-matrix graph sum, connected to
//!   the curve side by the dictionary in [`dictionary`].
//!
//! On top of these sit the CP1 instance ([`cp1`]): the Norbury-Scott curve,
//! whose graph sum, pushed through the `W`-form basis, the `Psi` rotation
//! and the stationary residue coefficients, reproduces the stationary
//! Gromov-Witten invariants of the projective line; an independent
//! partition-sum oracle ([`oracle`]) pins every value.

pub mod check;
pub mod combin;
pub mod cp1;
pub mod curve;
pub mod dictionary;
pub mod error;
pub mod field;
pub mod graphs;
pub mod graphsum;
pub mod jsonio;
pub mod oracle;
pub mod psi;
pub mod recursion;
pub mod series;

pub use curve::LocalCurveData;
pub use error::{Error, Result};
pub use field::{FieldElement, Rat};
pub use recursion::CorrelationForm;
