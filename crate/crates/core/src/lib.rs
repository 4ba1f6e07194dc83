//! Artin-Schreier curves `y^p - y = x R(x)` with `R` additive over F_{p^r}.

pub mod autgrp;
pub mod checks;
pub mod curve;
pub mod error;
pub mod gf;
pub mod linpoly;
pub mod sparse;
pub mod zeta;

pub use curve::{make_curve, CurveAS, Limits};
pub use error::{Error, Result};
pub use gf::{make_field, FieldDesc, FieldElem};
pub use linpoly::LinearizedPoly;
