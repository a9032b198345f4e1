//! Generating polynomials of virtual intersection numbers on hyperquot
//! schemes.
//!
//! The pipeline: a problem spec fixes a rank chain and genus; the degree
//! support of the requested insertion is enumerated; a Bethe-type
//! polynomial system is solved by homotopy continuation at seeded random
//! parameters; point values are summed over solution orbits; and exact
//! integer coefficients are recovered by least-squares interpolation with
//! strict rounding and held-out validation gates.

pub mod dd;
pub mod error;
pub mod insertion;
pub mod linalg;
pub mod oracles;
pub mod poly;
pub mod scalar;
pub mod spec;

pub use error::{Error, Result};
pub use insertion::{parse_insertion, Insertion, Primitive};
pub use poly::GeneratingPolynomial;
pub use scalar::{Precision, Scalar};
pub use spec::{degree_support, reduce_bundle_degree, ProblemSpec, Support};
