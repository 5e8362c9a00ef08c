//! Lengths of local cohomology of monomial ideals and their asymptotics.

pub mod asymptotics;
pub mod cech;
pub mod cli;
pub mod dsl;
pub mod graphs;
pub mod homology;
pub mod ideal;
pub mod linalg;
pub mod polyhedra;
pub mod takayama;
