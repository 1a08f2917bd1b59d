//! Exact arithmetic for multivariate Laurent polynomials and rational
//! functions over the rationals. This is the scalar field for every matrix
//! and equation in the crate.

mod factor;
mod monomial;
mod parse;
mod polynomial;
mod rational_function;

use std::collections::BTreeMap;

pub use factor::{factor_shallow, factor_shallow_with, ShallowFactorization};
pub use monomial::{Monomial, Variable};
pub use polynomial::Polynomial;
pub use rational_function::{RationalFunction, RationalFunctionJson};

/// Arbitrary-precision rational numbers.
pub type Q = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("inverse of the zero rational function")]
    ZeroInverse,
    #[error("denominator vanishes at {assignment}")]
    DenominatorVanishes { assignment: String },
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Arithmetic on two rational functions, dispatched by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(op: ArithOp, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}

pub fn rf_invert(a: &RationalFunction) -> Result<RationalFunction, SymError> {
    a.inv()
}

pub fn rf_eval(a: &RationalFunction, assignment: &BTreeMap<Variable, Q>) -> Result<Q, SymError> {
    a.eval(assignment)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub(crate) fn format_assignment(a: &BTreeMap<Variable, Q>) -> String {
    let parts: Vec<String> = a.iter().map(|(v, x)| format!("{v}: {x}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Parses `name=value` pairs separated by commas, e.g. `b=2,c=1/3`.
pub fn parse_assignment(s: &str) -> Result<BTreeMap<Variable, Q>, SymError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) =
            part.split_once('=').ok_or_else(|| SymError::Parse(format!("expected name=value, got {part:?}")))?;
        let rf = RationalFunction::parse(v.trim())?;
        let val = rf.as_constant().ok_or_else(|| SymError::Parse(format!("value for {k} is not a constant")))?;
        out.insert(Variable::new(k.trim()), val);
    }
    Ok(out)
}
