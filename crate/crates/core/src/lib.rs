//! Exact symbolic verification and construction of poly-symplectic and
//! poly-Poisson structures on polynomial coordinate charts.
//!
//! Everything is computed over the field of arbitrary-precision rationals:
//! differential forms, vector fields and maps carry exact polynomial
//! coefficients, identities are decided by expanding both sides, and rank
//! conditions are decided as generic (fraction-field) rank plus pointwise
//! rank at deterministically sampled rational points.
//!
//! Module map:
//! - [`exact`]: sparse multivariate polynomials, rational functions,
//!   fraction-free linear algebra, deterministic sample points.
//! - [`cartan`]: exterior calculus for vector-valued forms on a chart.
//! - [`polysymp`]: vector-valued symplectic forms and their constructions.
//! - [`polypoisson`]: poly-Poisson structures, their checker and builders.
//! - [`foliation`]: the induced foliation and its pointwise inverse problem.
//! - [`avcourant`]: the twisted Courant algebroid `TM (+) (+_k T*M)`.
//! - [`liealg`]: structure constants, nilpotent group charts, coadjoint data.
//! - [`groupoid`]: polynomially charted groupoids and multiplicative forms.
//! - [`reduction`]: symmetries, moment maps, quotients at chart level.

pub mod avcourant;
pub mod cartan;
pub mod error;
pub mod exact;
pub mod foliation;
pub mod groupoid;
pub mod liealg;
pub mod polypoisson;
pub mod polysymp;
pub mod reduction;
pub mod report;

pub use error::{Error, Result};
pub use exact::{Mat, Poly, Rat, RatFun, SamplePlan, Vars};
pub use report::{Check, Conventions, Report, Verdict};
