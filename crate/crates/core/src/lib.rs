//! Discrete-Morse-theoretic invariants of tree braid groups: critical cells and
//! Betti numbers, the cup-product complex Δ, reconstruction of the tree from Δ for
//! four and five strands, and a brute-force cube-complex oracle.

pub mod cells;
pub mod corpus;
pub mod delta;
pub mod error;
pub mod forms;
pub mod oracle;
pub mod par;
pub mod tree;

pub use error::{Error, Result};
