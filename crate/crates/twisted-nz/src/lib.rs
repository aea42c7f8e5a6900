//! Twisted Neumann-Zagier matrices and the twisted 1-loop invariant of
//! one-cusped ideal triangulations.
//!
//! The pipeline: parse a [`triangulation::Triangulation`], solve for a
//! [`homology::Cocycle`], build twisted gluing matrices ([`twist`]), solve
//! shapes ([`shapes`]) and evaluate the invariant ([`invariant`]).

pub mod cli;
pub mod homology;
pub mod invariant;
pub mod laurent;
pub mod shapes;
pub mod triangulation;
pub mod twist;

/// Dense row-major integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

/// Bundled triangulations of the figure-eight knot and 6_3.
pub mod fixtures {
    use crate::triangulation::{parse_triangulation, Triangulation};

    pub const FIGURE_EIGHT_JSON: &str = include_str!("../fixtures/4_1.json");
    pub const SIX_THREE_JSON: &str = include_str!("../fixtures/6_3.json");

    pub fn figure_eight() -> Triangulation {
        parse_triangulation(FIGURE_EIGHT_JSON).expect("bundled fixture parses")
    }

    pub fn six_three() -> Triangulation {
        parse_triangulation(SIX_THREE_JSON).expect("bundled fixture parses")
    }
}
