//! Exact-arithmetic toolkit for primitive lattice zonotopes.
//!
//! Builds the zonotopes generated by all primitive lattice vectors of a
//! q-norm ball, counts their generators two independent ways, checks the
//! exact identities relating their diameter to the size of the smallest
//! enclosing lattice cube, certifies diameters on explicit vertex–edge
//! graphs, and compares finite-radius ratios with their limit constants.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod number_theory;
pub mod primitive_points;
pub mod verify;
pub mod zonotope;
pub mod zonotope_graph;

pub use error::{Result, ZonolatError};
pub use primitive_points::{CountReport, EnumerationCaps, LatticeVector, QNorm, Region};
pub use zonotope::{GeneratorSet, ZonotopeMetrics};
