//! Tools for edge-count spectral Turán problems with forbidden `K_{2,r+1}` and
//! `θ_{1,2,3}`: graph construction, forbidden-subgraph detection, spectral
//! radii, quotient matrices, exhaustive and heuristic extremal search, and
//! numeric checks of the known bounds.

pub mod canon;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod pattern;
pub mod poly;
pub mod search;
pub mod spectral;
pub mod verify;

pub use canon::{canonical_form, CanonicalCode};
pub use error::{Error, Result};
pub use graph::Graph;
pub use pattern::PatternId;
pub use poly::{ClosedForm, IntPolynomial, Polynomial};
pub use spectral::{spectral_radius, Partition, QuotientMatrix, SpectralResult};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
