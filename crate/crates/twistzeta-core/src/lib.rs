//! Exact twist Clifford theory for a finite group `G` with a normal
//! `p`-subgroup `N`.
//!
//! The crate is `no_std` (it only needs `alloc`). Modules, bottom-up:
//!
//! * [`cyclo`]: cyclotomic numbers and roots of unity.
//! * [`group`]: finite groups given by multiplication tables, subgroups,
//!   quotients, Sylow subgroups over `N` and coset bookkeeping.
//! * [`chars`]: character tables, linear characters, induction and the
//!   monomial pairs `(H, chi)` describing irreducibles of `N`.
//! * [`twist`]: `G`-twist classes, their stabilisers and the group `Gamma`.
//! * [`cohml`]: second cohomology with trivial coefficients and first
//!   cohomology with coefficients in functions modulo `Gamma`.
//! * [`inv`]: strong extensions, factor sets and the invariants `C` and `T`.
//! * [`zeta`]: Dirichlet polynomials and the assembled twist zeta polynomial.

#![no_std]

extern crate alloc;

pub mod chars;
pub mod cohml;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod inv;
pub mod twist;
pub mod zeta;

pub use error::{Error, Result};
