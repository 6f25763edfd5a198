//! Deterministic simulator of single-photon logic gates that act on orbital
//! angular momentum (OAM), with the gate action supplied by non-degenerate
//! four-wave mixing (FWM) in a nonlinear medium.
//!
//! Qubits are encoded in the topological charge `l` of Laguerre-Gaussian (LG)
//! beam modes: charge 0 is logical `|0⟩` and charge ±1 is logical `|1⟩`. A
//! third-order mixing process with two pump beams (P1, P2) and a probe (P3)
//! emits a signal beam S whose charge obeys the conservation rule
//! `l_S = l_P1 + l_P2 − l_P3`; the conjugation of the probe field makes the
//! map antilinear in P3, which is what lets a fixed set of holograms and
//! mirrors realize I, NOT, C-NOT and Z-CNOT gates. On top of the gates sits
//! the two-qubit Deutsch algorithm: a single evaluation of the gate decides
//! whether the function it implements is constant or balanced.
//!
//! The crate is organized bottom-up:
//!
//! * [`lgmode`] — LG mode amplitudes, grid sampling, overlaps, projections;
//! * [`oamstate`] — charge-basis superpositions, logical encode/decode,
//!   Hadamard on the logical subspace;
//! * [`fwm`] — the charge-conserving, probe-conjugating mixing transform;
//! * [`gates`] — optical elements, canonical gate setups, truth tables and
//!   physical-consistency validation;
//! * [`deutsch`] — the full algorithm pipeline and its stage snapshots;
//! * [`render`] — intensity images, pattern statistics and PGM/CSV I/O.
//!
//! Everything is deterministic: the same inputs produce bitwise-identical
//! states, grids and files, with or without the `parallel` feature.

#![warn(missing_docs)]
#![warn(clippy::all)]

pub mod deutsch;
pub mod error;
pub mod fwm;
pub mod gates;
pub mod lgmode;
pub mod oamstate;
pub mod render;

pub use error::{Error, Result};
pub use lgmode::{BeamParams, FieldGrid, GridSpec, ModeIndex};
pub use oamstate::{LogicalConvention, OamSuperposition, Role};
