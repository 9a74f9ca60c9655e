//! Finite-dimensional g-frames and g-fusion frames, their canonical duals and
//! frame operators, and a catalog of numerical checks for the identities and
//! operator inequalities they satisfy.

pub mod framefile;
pub mod gen;
pub mod gframe;
pub mod gfusion;
pub mod index;
pub mod linops;
pub mod report;
pub mod verify;
