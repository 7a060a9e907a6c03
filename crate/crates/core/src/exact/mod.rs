//! Exact arithmetic and linear algebra over the polynomial ring and its
//! fraction field, plus deterministic rational sample points.

mod mat;
mod poly;
mod ratfun;
mod sample;

pub use mat::{
    generic_rank, nullspace_sym, numeric_rank, solve_membership, span_contained,
    span_intersection, spans_intersect_trivially, Mat, RMat,
};
pub use poly::{Poly, Vars};
pub use ratfun::RatFun;
pub use sample::SamplePlan;

/// Arbitrary-precision rational number, the coefficient field everywhere.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for the rational p/q.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
