//! Exact combinatorics of almost-toric fibrations of the projective plane.

pub mod atf;
pub mod error;
pub mod geometry;
pub mod markov;
pub mod moduli;
pub mod monodromy;
pub mod potential;
pub mod rational;
pub mod shapes;
mod svg;

pub use atf::{standard_diagram, ATFDiagram};
pub use error::{Error, Result};
pub use geometry::{HalfSpace, Mat2Z, RationalPolygon, Segment, VecQ};
pub use markov::MarkovTriple;
pub use potential::LaurentPoly;
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/markov.md")]
    mod markov {}
    #[doc = include_str!("../../../book/src/atf.md")]
    mod atf {}
    #[doc = include_str!("../../../book/src/monodromy.md")]
    mod monodromy {}
    #[doc = include_str!("../../../book/src/potential.md")]
    mod potential {}
    #[doc = include_str!("../../../book/src/shapes.md")]
    mod shapes {}
    #[doc = include_str!("../../../book/src/moduli.md")]
    mod moduli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
