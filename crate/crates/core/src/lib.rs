//! Exact computations with smooth cubic surfaces: finite and number fields,
//! homogeneous forms, the E6 lattice and its Weyl group, the 27 lines, and the
//! octanomial normal form with its automorphism strata.

pub mod checks;
pub mod cli;
pub mod e6;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod normal_form;
pub mod poly;
pub mod surface;

pub use error::{Error, Result};
pub use fields::{Elem, Field, FieldElement, FieldSpec, UniPoly};
