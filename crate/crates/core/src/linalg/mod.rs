//! Exact linear algebra: GF(2) elimination, integer lattices, rational solves.

pub mod gf2;
pub mod lattice;
pub mod rational;

pub use gf2::{gf2_solve, BitVec, Gf2Elimination, Gf2Matrix};
pub use lattice::{int_lattice_member, HermiteForm, IntMatrix};
pub use rational::{determinant, rank, rational, rational_linear_solve, LinearSolution, Rational};
