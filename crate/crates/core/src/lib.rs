//! Exact bigraded Hochschild cohomology of the connected sums `V_* ⊓ B_*` over
//! GF(2), computed from Koszul complexes, together with the explicit coboundary
//! constructions for those algebras and a small Massey product engine for
//! finite dg-algebras.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod algebra;
pub mod blocked;
pub mod cli;
pub mod coboundary;
pub mod error;
pub mod format;
pub mod gf2;
pub mod hochschild;
pub mod koszul;
pub mod massey;

pub use algebra::{
    BooleanRing, CoefficientPair, ConnectedSumAlgebra, Generator, GradedElement, Subring,
};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use koszul::{admissible_sequences, AdmissibleSequence, Caps, KoszulBasis};
