//! The guide in `book/` as doctests: each chapter is included as the
//! documentation of an empty module, so `cargo test -p tlbq-book` runs every
//! code sample against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/coefficients.md")]
pub mod coefficients {}
#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}
#[doc = include_str!("../../../book/src/cells.md")]
pub mod cells {}
#[doc = include_str!("../../../book/src/quantum-group.md")]
pub mod quantum_group {}
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
