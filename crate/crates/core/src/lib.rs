//! Combinatorial link and spatial-graph diagrams with a local-move engine
//! (crossing change, delta, clasp-pass, band sums with link models) and
//! exact finite type invariant experiments on top of an integer Conway
//! polynomial skein engine.

pub mod catalog;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod lab;
pub mod moves;
pub mod poly;

pub use diagram::{CanonicalCode, Diagram, FormalSum, SingularDiagram};
pub use error::{AkError, Result};
pub use poly::Poly;
