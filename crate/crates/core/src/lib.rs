//! Toroidal dimer models, Mahler measures of their characteristic polynomials,
//! spanning-tree entropy of periodic lattices, and the hyperbolic volumes that
//! bound them.

pub mod catalog;
pub mod ckl;
pub mod error;
pub mod isoradial;
pub mod kasteleyn;
pub mod laurent;
pub mod linalg;
pub mod mahler;
pub mod periodic_graph;
pub mod quadrature;
pub mod report;
pub mod spanning_tree;
pub mod special_functions;

pub use error::{Error, Result};
