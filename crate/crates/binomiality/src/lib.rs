//! Binomiality detection for polynomial ideals without Gröbner bases.
//!
//! The library decides whether an ideal given by homogeneous generators is
//! binomial using exact linear algebra only, and provides a heuristic
//! simplification pipeline (with replayable equivalence certificates) for the
//! inhomogeneous ideals that arise as steady-state systems of mass-action
//! reaction networks.

pub mod scalar;
pub mod poly;
pub mod parse;
pub mod matrix;
pub mod classes;
pub mod certificate;
pub mod crn;
pub mod detect;
pub mod groebner;
pub mod report;
pub mod simplify;

pub use poly::{Context, Monomial, MonomialOrder, PolySystem, Polynomial};
pub use scalar::Scalar;

/// The user guide, one module per chapter.  Including the Markdown here
/// makes every code block in `book/src` run under `cargo test --doc`, so
/// the guide can never drift from the crate.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/systems.md")]
    pub mod systems {}
    #[doc = include_str!("../../../book/src/detection.md")]
    pub mod detection {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub mod pipeline {}
    #[doc = include_str!("../../../book/src/networks.md")]
    pub mod networks {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
}
