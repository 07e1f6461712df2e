//! Cohomological support varieties of monomial rings, computed from Taylor complexes.
//!
//! The pipeline runs from a [`Presentation`] through its GCD and Taylor graphs
//! ([`graphs`]), the parametric 2-periodic complex ([`periodic`]), and pointwise rank
//! tests to a [`VarietyDescription`] ([`support`]), with exact answers for small
//! components ([`classifier`]) and deformation invariants ([`deformation`]).

pub mod classifier;
pub mod deformation;
pub mod error;
pub mod field;
pub mod graphs;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod periodic;
pub mod report;
pub mod support;
pub mod taylor;

pub use error::{Error, Result};
pub use field::{FieldPoint, FieldSpec};
pub use monomial::{sgn, Monomial, Presentation, SubsetIndex};
pub use parse::{parse_input, parse_presentation};
pub use support::{identify_variety, membership, Membership, SamplingConfig, VarietyDescription};
