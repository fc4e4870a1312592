//! Matching diagrams for 0-dimensional persistence.
//!
//! Given two finite metric spaces and a mapping between their point sets,
//! this crate computes the barcodes of their Vietoris–Rips filtrations in
//! degree zero, the block function counting how bars of the domain map onto
//! bars of the codomain, and everything derived from it: the matching
//! diagram, kernel/image/cokernel barcodes, ladder decompositions,
//! ε-matchings between diagrams, and bottleneck distances between barcodes.
//!
//! ```
//! use matchdiag::blockfn::{block_function, SetMapping};
//! use matchdiag::metric::FiniteMetricSpace;
//!
//! // Three points on a line mapping into a stretched copy: the middle point
//! // lands further from its neighbors than it started.
//! let x = FiniteMetricSpace::from_points(&[vec![0.0], vec![0.5], vec![1.0]]).unwrap();
//! let z = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
//! let mapping = SetMapping::new(vec![0, 1, 2], 3).unwrap();
//!
//! let bf = block_function(&x, &z, &mapping).unwrap();
//! assert_eq!(bf.cells(), &[(0.5, 1.0, 1), (0.5, 2.0, 1)]);
//! ```

pub mod blockfn;
pub mod decomposition;
pub mod document;
pub mod error;
pub mod filtration;
pub mod geomfn;
pub mod gf2;
pub mod io;
pub mod matching;
pub mod metric;
#[cfg(test)]
pub(crate) mod proptest_support;
pub mod svg;

pub use error::{Error, Result};
