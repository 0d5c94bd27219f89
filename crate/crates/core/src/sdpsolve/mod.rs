//! SDP solving: inequality and conic forms, weak separation, the ellipsoid
//! method, folding, and rounding of Lasserre optima.

pub mod conic;
pub mod ellipsoid;
pub mod fold;
pub mod pencil;

pub use conic::{
    conic_to_inequality, inequality_to_conic, make_full_dimensional, weak_separation, ConicForm, ConicSDP,
    FullDimensional, WeakSeparation,
};
pub use ellipsoid::{
    ellipsoid_optimize, folded_optimize, Ellipsoid, EllipsoidConfig, Outcome, PencilOracle, Separation,
    SeparationStrategy, SolveReport,
};
pub use fold::{almost_fold, fold_matrix, fold_psd_check, fold_vector, unfold, IndexMap, MatrixIndexMap};
pub use pencil::{AffineBlock, InequalitySDP};

use num_bigint::BigInt;

use crate::error::{contract, Result};
use crate::exactlin::rational::{nearest_integer, norm_floor_one};
use crate::exactlin::Rational;

/// The default tolerance `1 / (4·max{1, ‖c‖})`, with the norm rounded up.
pub fn rounding_tolerance(c: &[Rational]) -> Rational {
    (norm_floor_one(c) * Rational::from_integer(4.into())).recip()
}

/// Nearest integer to `s`; an exactly half-integral `s` cannot come from a
/// solve meeting the rounding precondition and is rejected. The objective
/// must be integral so that the integer optimum is an integer.
pub fn round_to_integer_optimum(s: &Rational, c: &[Rational]) -> Result<BigInt> {
    if !c.iter().all(|x| x.is_integer()) {
        return contract("rounding needs an integral objective");
    }
    match nearest_integer(s) {
        Some(z) => Ok(z),
        None => contract(format!("value {s} is half-integral; the rounding precondition fails")),
    }
}
