//! Simulation and verification toolkit for "quantum origami": modular
//! transformations of the torus realised as transversal layer permutations
//! on folded multi-layer topological states.
//!
//! The crate is organised around five layers of checking:
//!
//! * [`mcg`] holds the exact integer algebra of SL±(2,Z).
//! * [`anyons`] holds modular data and the torus representation of words.
//! * [`origami`] traces Wilson loops through folded layer-permutation protocols.
//! * [`stabilizer`] is a microscopic oracle built on toric-code tableaux.
//! * [`interferometry`] checks the Fock-space measurement identities.

pub mod anyons;
pub mod error;
pub mod interferometry;
pub mod linalg;
pub mod mcg;
pub mod origami;
pub mod report;
pub mod stabilizer;

pub use error::{Error, Result};
