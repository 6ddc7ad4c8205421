//! Numerical companion for concentration levels and extremals of
//! Adams-type inequalities.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod extremal;
pub mod hardy;
pub mod moser1d;
pub mod profile;
pub mod quadrature;
pub mod rearrange;
pub mod specfun;

pub use error::{Error, Result};
pub use profile::{Piece, PiecewiseProfile, PowerTerm};
pub use quadrature::QuadratureSpec;
