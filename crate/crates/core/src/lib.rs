//! Feasibility of (f0, f1) pairs for d-polytopes, with exact witness construction.

pub mod constructions;
pub mod geometry;
pub mod lattice;
pub mod oracle;
pub mod planner;
