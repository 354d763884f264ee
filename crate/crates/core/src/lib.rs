//! Invariant and horizontal differential forms for diagonal actions of a
//! torus times a finite abelian group on affine space.

pub mod action;
pub mod canonical;
pub mod corpus;
pub mod cone;
pub mod error;
pub mod euler;
pub mod form;
pub mod invariant;
pub mod lattice;
pub mod linalg;
pub mod piece;
pub mod poly;
pub mod pullback;
pub mod report;
pub mod smoothness;

pub use action::{validate_action, ActionSpec, Weight};
pub use error::{Error, Result};
pub use form::{differential, Blade, PolyForm};
pub use poly::Polynomial;
