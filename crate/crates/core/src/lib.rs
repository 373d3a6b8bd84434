//! Exact algebra for surgery on links in 3-manifolds with fundamental group `pi`:
//! Hermitian forms over `Z[pi]`, realization of linking matrices, decorated
//! trivalent graph groups, equivariant Milnor triple invariants and the formal
//! surgery-bracket calculus.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod filtration;
pub mod graphspace;
pub mod groupring;
pub mod groups;
pub mod hermitian;
pub mod intlinalg;
pub mod matrix;
pub mod milnor;
pub mod multisig;
pub mod realization;
pub mod scalar;

pub use error::{Error, Result};
pub use groups::{Group, GroupElement, QuotientMap};
pub use scalar::{Coeff, Int};

/// Element of `Z[pi]` with arbitrary precision coefficients.
pub type ZPi = groupring::GroupRingElement<Int>;
/// Matrix over `Z[pi]` with arbitrary precision coefficients.
pub type ZPiMatrix = matrix::Matrix<Int>;
/// Hermitian matrix over `Z[pi]` with arbitrary precision coefficients.
pub type Hermitian = hermitian::HermitianMatrix<Int>;
