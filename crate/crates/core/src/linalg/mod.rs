//! Exact linear algebra over ℚ: scalars, dense vectors and matrices, rank,
//! linear systems and a rational simplex solver.

mod lp;
mod matrix;
mod rational;
mod solve;

pub use lp::{
    lp_solve, strict_feasibility, Bound, Constraint, LpOutcome, LpProblem, Relation, Sense,
    StrictFeasibility,
};
pub use matrix::{QMatrix, QVector};
pub use rational::{common_denominator, q, ParseRationalError, Rational};
pub use solve::{nullspace, rank, rref, solve_linear, Solution};
