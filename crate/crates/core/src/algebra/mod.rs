//! Exact arithmetic: rationals, polynomials with rational exponents, graded
//! bivariate polynomials, rational functions and integer/polynomial matrices.

pub mod efraction;
pub mod graded;
pub mod json;
pub mod matrix;
pub mod rational;
pub mod termwise;
pub mod wpoly;

pub use efraction::EFraction;
pub use graded::GradedPoly;
pub use matrix::{check_negative_definite, poly_determinant, solve_rational_system, symmetric_pivots, IntMatrix};
pub use rational::{parse_rational, rat, Rational};
pub use termwise::{eval_termwise_at_zero, LemmaSummand};
pub use wpoly::WPoly;
