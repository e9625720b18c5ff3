//! Metastability-containing comparators and sorting networks over binary
//! reflected Gray code.
//!
//! The crate is layered bottom-up:
//!
//! - [`ternary`]: the `{0, 1, M}` value domain, gate semantics and the
//!   brute-force metastable closure used as the oracle everywhere else.
//! - [`gray`]: Gray code, valid strings and their total order.
//! - [`fsm`]: the four-state comparison automaton and its closed operators.
//! - [`netlist`]: gate-level IR, ternary simulation, metrics, JSON and
//!   structural Verilog export.
//! - [`synth`]: the gate-level `2-sort(B)` construction (selection cells,
//!   operator blocks, parallel prefix tree).
//! - [`network`]: comparator schedules and `n`-channel sorters.
//! - [`verify`]: verification campaigns and reports.

pub mod fsm;
pub mod gray;
pub mod netlist;
pub mod network;
pub mod synth;
pub mod ternary;
pub mod verify;

pub use fsm::{HatStatePair, StatePair};
pub use gray::{CodeValue, ValidGrayWord};
pub use ternary::{TernaryWord, Trit};
