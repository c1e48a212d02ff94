//! Exact algebra behind the second obstruction to pseudoisotopy.
//!
//! The crate is layered bottom-up:
//!
//! - [`groups`]: free products of free and finitely generated abelian groups,
//!   with normal forms and a solution to the conjugacy problem.
//! - [`intlinalg`]: Smith normal form over arbitrary-precision integers and
//!   quotient presentations of finitely generated abelian groups.
//! - [`groupring`]: the integral group ring and square matrices over it.
//! - [`ghmodules`]: coefficient modules `A` with a group action by integer
//!   matrices, and module maps between them.
//! - [`wh1`]: the coinvariant group `Wh1+(G; A) = (A[G]/A[1])_G`.
//! - [`chi`]: finite-quotient 3-cocycles and the chain-level chi functional.
//! - [`obstruction`]: lens classes, the involution, suspensions, and the
//!   stable retraction invariant.

pub mod chi;
pub mod error;
pub mod ghmodules;
pub mod groupring;
pub mod groups;
pub mod intlinalg;
pub mod obstruction;
pub mod parse;
pub mod sample;
pub mod wh1;

pub use error::{Error, Result};
