#![allow(clippy::needless_range_loop)]

//! Exact arithmetic for even integral lattices: Gram-matrix algebra, short
//! vector enumeration, E8 orbits, glue counts between a vector and its
//! orthogonal complement, and the divisor data of restricted Borcherds forms
//! on moduli of polarized K3 surfaces.

pub mod e8;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod glue;
pub mod lattice;
pub mod matrix;
pub mod report;
pub mod sbad;

pub use error::{LatticeError, Result};
pub use lattice::{DiscriminantGroup, Lattice, RationalVector};
