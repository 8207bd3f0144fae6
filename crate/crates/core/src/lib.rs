//! Volumes of generalized hyperbolic tetrahedra and critical points of the
//! volume functional on angle structures.

pub mod geomlib;
pub mod quadrature;
pub mod simplex;
pub mod triangulation;
pub mod volume;
pub mod optimizer;
pub mod analysis;
pub mod config;
pub mod constructions;
pub mod report;
