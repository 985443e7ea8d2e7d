//! rnforge: a toolkit for Ramanujan-Nagell type exponential Diophantine
//! equations x^2 = A*k^n + B — exact enumeration, divisor-method search,
//! generalized Pell machinery, elementary completeness certificates with
//! an independent verifier, parametric family constructors, and
//! reproduction harnesses for the published tables.

pub mod app;
pub mod arith;
pub mod certify;
pub mod error;
pub mod families;
pub mod model;
pub mod pell;
pub mod search;

pub use error::{Result, RnError};
pub use model::{Completeness, Equation, Solution, SolutionSet};
