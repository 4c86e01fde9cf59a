//! Exact-arithmetic lattice calculus for irreducible holomorphic symplectic
//! manifolds of OG10 type.
//!
//! The crate provides, over arbitrary-precision integers and rationals:
//!
//! - exact integer/rational linear algebra (Smith and Hermite normal forms,
//!   saturated kernels, linear solving) in [`matrix`];
//! - even lattices with signatures, divisibilities, orthogonal complements
//!   and the named lattices `U`, `E8(-1)`, `A2(-1)` and the rank-24 OG10
//!   lattice in [`lattice`];
//! - discriminant groups with their Q/2Z quadratic forms and the Eichler
//!   orbit criteria in [`discriminant`];
//! - the wall-divisor and stably-prime-exceptional classification calculus,
//!   integral reflections and sigma-orthogonal projections in [`wall`];
//! - algebraic Mukai-lattice machinery for moduli of sheaves on K3 surfaces:
//!   Picard lattices of the symplectic resolutions, curve-class solving and
//!   the divisorial/small contraction classifier in [`moduli`];
//! - rank-2 positive-cone machinery: norm equations, wall rays, chamber
//!   decompositions, the intermediate-jacobian contexts and the unique
//!   compactification test in [`cones`].
//!
//! The crate is `no_std` (with `alloc`); all values are immutable after
//! construction and every operation is a pure function.

#![cfg_attr(not(test), no_std)]
// Index loops mirror the Gram-matrix arithmetic they implement.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod cones;
pub mod discriminant;
pub mod lattice;
pub mod matrix;
pub mod moduli;
pub mod wall;

pub use lattice::{Class, Lattice, LatticeError, Sublattice};
pub use matrix::{Int, IntMatrix, Rat, RatVector};
