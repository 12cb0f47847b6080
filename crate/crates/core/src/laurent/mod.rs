//! Exact Laurent polynomials, subtraction-free ratios and their
//! tropicalization.

mod poly;
mod rational;
mod text;
mod trop;

pub use poly::{lp_arith, standard_vars, ArithOp, Exponent, LaurentPoly};
pub use rational::{is_laurent, lp_substitute, rational_substitute, substitute_general, PosRational};
pub use text::parse_fraction;
pub use trop::{
    limit_error_bound, numeric_limit_check, tropicalize, tropicalize_poly_expr, TropExpr, TropNode,
};
