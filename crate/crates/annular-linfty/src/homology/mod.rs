//! GF(2) matrices, homology computations and chain contractions.

mod contraction;
mod matrix;

pub use contraction::{
    check_side_conditions, contract_onto_homology, GradingTag, ModuleContraction, PivotStrategy,
};
pub use matrix::{F2Matrix, F2Vec, MatrixTriplets, DENSE_COL_LIMIT};
