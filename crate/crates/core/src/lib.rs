//! Vertex-cover lattices of unmixed bipartite graphs, the explicit minimal
//! resolution of their Hibi ideals, and edge-ring invariants read off the
//! lattice.
//!
//! ```
//! use unmixed::{fixtures, invariants};
//!
//! let l = fixtures::fig1();
//! assert_eq!(invariants::depth_edge_ring(&l), 6);
//! assert_eq!(invariants::pd_and_reg_h(&l).0, 8);
//! ```
//!
//! Every closed-form value can be checked against [`oracle`], which computes
//! Betti numbers from simplicial homology and knows nothing about lattices.

pub mod betti;
pub mod corpus;
pub mod fixtures;
pub mod graph;
pub mod ideal;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mask;
pub mod oracle;
pub mod resolution;
pub mod verify;

pub use betti::BettiTable;
pub use graph::BipartiteGraph;
pub use ideal::{Monomial, MonomialIdeal};
pub use invariants::InvariantReport;
pub use lattice::CoverLattice;
pub use linalg::Field;
pub use mask::SubsetMask;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Ideal(#[from] ideal::IdealError),
    #[error(transparent)]
    Resolution(#[from] resolution::ResolutionError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Invariant(#[from] invariants::InvariantError),
    #[error(transparent)]
    Format(#[from] io::FormatError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
}

// The book's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/resolution.md")]
    mod resolution {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}
