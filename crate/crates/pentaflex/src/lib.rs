//! Flexible pentagonal bipyramids.
//!
//! Constructs the explicit flexible pentagonal bipyramids (and the
//! embedded 8-vertex polyhedron obtained by subdividing one face),
//! certifies their flexes in exact or interval arithmetic, scans for
//! face self-intersections, and classifies the sign-flip group that the
//! top-bottom distance map induces on the oriented equatorial volumes.

pub mod cayley_menger;
pub mod complexes;
pub mod constructions;
pub mod cli;
pub mod galois;
pub mod intersections;
pub mod json;
pub mod numeric;
pub mod obj;
