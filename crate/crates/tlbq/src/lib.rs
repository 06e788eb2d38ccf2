//! Exact computations with type-B Temperley-Lieb categories.
//!
//! * [`qfield`] — the coefficient field `ℚ(i)(s, Q)` with `s = q^{1/2}`.
//! * [`linalg`] — dense exact matrices, ranks, determinants and null spaces.
//! * [`diagrams`] — marked planar diagrams and their composition.
//! * [`tlb`] — the algebras `TLB_n(q, Q)` and their presentation.
//! * [`cellular`] — cell modules, Gram matrices and semisimplicity.
//! * [`uqsl2`] — `U_q(sl2)` modules and R-matrices.
//! * [`duality`] — the functor from diagrams to intertwiners and its certificates.
//! * [`repro`] — certificate builders for every reproducible claim.

#[macro_use]
mod macros;
pub(crate) use macros::forward_owned_ops;

pub mod cellular;
pub mod certificate;
pub mod diagrams;
pub mod duality;
pub mod linalg;
pub mod qfield;
pub mod repro;
pub mod tlb;
pub mod uqsl2;
