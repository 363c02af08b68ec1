//! Oriented incidence hypergraphs: exact matrix combinatorics and the
//! finite topos of incidence hypergraphs.

pub mod bidirected;
pub mod classical;
pub mod contributors;
pub mod error;
pub mod fixtures;
pub mod homomorphism;
pub mod hypergraph;
pub mod io;
pub mod leibniz;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod topos;

pub use error::{Error, Result};
pub use homomorphism::Homomorphism;
pub use hypergraph::{IncidenceHypergraph, OrientedHypergraph, SignOrigin, Subhypergraph};
pub use leibniz::Mode;
pub use matrix::Matrix;
pub use poly::{Monomial, MultiPoly, Poly};
pub use scalar::Ring;

pub type IntegerMatrix = Matrix<i64>;
pub type MultivariatePolynomial = MultiPoly<i64>;
pub type IntegerPolynomial = Poly<i64>;

/// Guards on the exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest matrix handled by permutation expansion and contributor
    /// enumeration.
    pub max_vertices: usize,
    /// Largest vertex set for total-minor, Sachs and arborescence enumeration.
    pub max_total_minor_vertices: usize,
    /// Cap on enumerated homomorphism candidates and similar search spaces.
    pub max_enum: u128,
    /// Cap on the number of subhypergraphs materialized at once.
    pub max_subhypergraphs: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_vertices: 9,
            max_total_minor_vertices: 8,
            max_enum: 100_000_000,
            max_subhypergraphs: 100_000,
        }
    }
}
