//! Exact decision procedures for extremality, stationarity and their dual
//! characterizations for pairs of sets built from finitely many polyhedra.

pub mod cones;
pub mod corpus;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod mappings;
pub mod num;
pub mod primal;
pub mod report;
pub mod scene;
pub mod svg;
pub mod verdict;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use num::Scalar;
pub use verdict::{Certificate, Status, Verdict};
