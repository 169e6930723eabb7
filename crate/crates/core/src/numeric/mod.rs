//! Numeric oracle: concrete polynomial fields, evaluation of symbols, and a
//! direct numeric application of the star-product operator.

pub mod compare;
pub mod eval;
pub mod model;
pub mod poly;

pub use compare::{
    compare_symbolic_numeric, discrepancy, monomial_pairs, monomials_up_to, sample_points,
    CompareOptions, CompareReport, Symbol, ABS_FLOOR, DEFAULT_TOL,
};
pub use eval::{eval_series, eval_words, numeric_star};
pub use model::{EvalPoint, FieldModel};
pub use poly::{Exponents, RealPoly};
