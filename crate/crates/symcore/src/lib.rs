//! Exact arithmetic for the Dwork computations: rationals, sparse
//! multivariate polynomials, reduced rational functions (optionally modulo
//! one quadratic relation), matrices over them, and linear solving.

pub mod coeff;
pub mod error;
pub mod gcd;
pub mod matrix;
pub mod mono;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod var;

/// Exact rational number.
pub type Rat = num_rational::BigRational;

pub use error::SymError;
pub use matrix::{mat_inverse, solve_linear, LinearSolution, MatF};
pub use mono::Mono;
pub use oracle::{oracle_equal, sample_points, Quad, SamplePoint, ORACLE_POINTS};
pub use parse::{parse_ratfn, parse_zpoly};
pub use poly::{Poly, ZPoly};
pub use ratfn::{rat, rat_int, QuotientCtx, RatFn, Relation};
pub use var::{Var, VarKind, MAX_VARS};

/// Convenience: canonical form of num/den.
pub fn normalize(num: &Poly<Rat>, den: &Poly<Rat>, ctx: &QuotientCtx) -> Result<RatFn, SymError> {
    ctx.normalize(num, den)
}

/// Convenience: formal partial derivative.
pub fn derive(f: &RatFn, v: Var, ctx: &QuotientCtx) -> RatFn {
    ctx.derive(f, v)
}
