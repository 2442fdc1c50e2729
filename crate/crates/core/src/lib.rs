//! Exact, desk-scale construction of a random "chessboard" 2-coloring of the
//! integers that defeats long monochromatic arithmetic progressions whose
//! differences are bounded away from Bohr recurrence, together with brute
//! force verifiers for each step of the argument.
//!
//! All arithmetic that feeds a claim is exact: frequencies are rationals,
//! torus coordinates are rationals, and the integer fast paths used by the
//! scanners are checked against the rational route in the test suite.

pub mod chessboard;
pub mod coloring;
pub mod diophantine;
mod error;
pub mod halesjewett;
pub mod orbits;
pub mod rational;
pub mod verifier;

pub use chessboard::{
    build_params, cell_of, classic_half_coloring, color_of_integer, f_map, mini_cell_of,
    random_chessboard, CellIndex, Chessboard, ChessboardParams, DivisibilityReport,
    MiniCellIndex, ParamRequest, PullbackColoring, TorusPoint,
};
pub use coloring::{Color, Coloring, FnColoring, HalfIntervalColoring};
pub use diophantine::{
    bohr_gap, convergents, in_restricted_set, near_return, torus_norm, AlphaVector,
    BohrThreshold,
};
pub use error::{Error, Result};
pub use rational::Rational;
