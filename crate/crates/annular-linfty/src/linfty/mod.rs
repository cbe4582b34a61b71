//! L-infinity algebras and modules over F2: symmetric operation tables,
//! relation checkers, homotopy transfer, and restriction of scalars.

pub mod check;
pub mod ops;
pub mod restrict;
pub mod transfer;
pub mod unshuffle;

pub use check::{
    check_algebra_morphism, check_algebra_relation, check_module_morphism,
    check_module_relation, Violation,
};
pub use ops::{LInftyAlgebraOps, LInftyModuleOps, LInftyMorphism, ModuleMorphism};
pub use restrict::restrict_scalars;
pub use transfer::{theta_vector, transfer_algebra, transfer_module};
pub use unshuffle::{
    anchored_unshuffles, compositions, sorted_compositions, sorted_unshuffles, unshuffles,
};
