//! Exact arithmetic: integer polynomials, cyclotomic fields, truncated
//! power series, and cyclotomic-denominator rational functions.
//!
//! Rational numbers are [`num_rational::BigRational`]; nothing in this
//! module touches floating point except the display helpers and the fast
//! first pass of [`realcmp`].

pub mod arith;
pub mod cyclo;
pub(crate) mod decimal;
pub(crate) mod groupring;
pub mod poly;
pub mod ratfunc;
pub mod realcmp;
pub mod series;

pub use cyclo::{CycloElem, MAX_CONDUCTOR};
pub use num_rational::BigRational;
pub use poly::{cyclotomic_poly, IntPoly};
pub use ratfunc::RatFunc;
pub use realcmp::{real_cmp, real_sign};
pub use series::{series_inverse, TruncSeries};
