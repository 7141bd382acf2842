//! Finite-window machinery for the compactification Ξ(P) of a discrete
//! space, exact Riesz interpolation in dimension-group models, and
//! certified pseudocovering constructions over the dyadic tree.

pub mod linalg;
pub mod pseudocover;
pub mod rational;
pub mod report;
pub mod riesz;
pub mod suite;
pub mod topology;
