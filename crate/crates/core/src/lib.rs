//! Exact verification engine for the two-boson realization of quantum
//! affine `sl2` at level `-1/2`.

pub mod qscalar;
pub mod qseries;
pub mod fock;
pub mod currents;
pub mod repcheck;
pub mod vertexops;
pub mod report;
