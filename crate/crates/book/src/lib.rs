//! The guide's chapters as modules, so `cargo test --doc` runs every sample.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/actions.md")]
pub mod actions {}
#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}
#[doc = include_str!("../../../book/src/euler.md")]
pub mod euler {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/surjectivity.md")]
pub mod surjectivity {}
#[doc = include_str!("../../../book/src/smoothness.md")]
pub mod smoothness {}
#[doc = include_str!("../../../book/src/canonical.md")]
pub mod canonical {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
