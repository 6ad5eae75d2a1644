//! Graph isomorphism invariants from quantum phase estimation.
//!
//! A graph on `n` vertices becomes a controlled-phase oracle that rotates
//! each vertex subset by `θ` per induced edge. Phase estimation over the
//! uniform superposition of subsets then reads out the histogram of induced
//! edge counts, which [`invariant`] also computes classically.

pub mod circuit;
pub mod fixtures;
pub mod graph;
pub mod invariant;
pub mod simulator;
pub mod survey;
