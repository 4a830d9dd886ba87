//! Toric-code tableaux used as a microscopic check on the origami protocols.
//!
//! Codes are stored as Pauli generators over [`fixedbitset`] rows. A move is
//! a qubit permutation (optionally with Hadamards); it is accepted when it
//! maps the stabilizer group to itself, and its logical action is read off by
//! reducing the conjugated logical operators over GF(2).

mod action;
mod code;
mod gf2;
mod moves;
mod pauli;

pub use action::{
    expected_action, folded_view, logical_action, origami_permutation, protocol_action, symplectic_of_unitary, FoldMap,
    LogicalAction, ProtocolCheck, Symplectic, TransversalCertificate,
};
pub use code::{
    build_bilayer_genon_code, build_bilayer_genon_code_with, build_toric_torus, double_genon_loop, CodeKind, GenonCuts,
    QubitCoord, StabilizerCode,
};
pub use gf2::RowSpace;
pub use moves::{
    geometric_permutation, normalizes, raw_permutation, sequence_permutation, GenonRegion, Move, MOVE_NAMES,
};
pub use pauli::{PauliOp, QubitPermutation};
