use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::Variable;
use super::polynomial::Polynomial;
use super::{SymError, Q};

/// A quotient of Laurent polynomials.
///
/// Denominators carry no scalar or monomial content: any such factor is
/// moved into the numerator, where Laurent exponents absorb it. Equality is
/// cross-multiplication, so two values compare equal whenever they agree as
/// elements of the fraction field, whatever their representation.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn from_q(c: Q) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Polynomial::var(name))
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_one() {
            return RationalFunction { num, den };
        }
        let (c, m, rest) = den.content_split();
        let unit = Polynomial::term(c.recip(), m.inv());
        let num = &num * &unit;
        if rest.is_one() {
            return RationalFunction { num, den: rest };
        }
        match num.div_exact(&rest) {
            Some(q) => RationalFunction { num: q, den: Polynomial::one() },
            None => RationalFunction { num, den: rest },
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, SymError> {
        if self.num.is_zero() {
            return Err(SymError::ZeroInverse);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn powi(&self, e: i32) -> Result<Self, SymError> {
        if e < 0 {
            return self.inv()?.powi(-e);
        }
        let k = e as u32;
        Ok(RationalFunction { num: self.num.pow(k), den: self.den.pow(k) })
    }

    pub fn eval(&self, assignment: &BTreeMap<Variable, Q>) -> Result<Q, SymError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(SymError::DenominatorVanishes { assignment: super::format_assignment(assignment) });
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> Result<Self, SymError> {
        let n = self.num.try_substitute(map)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = self.den.try_substitute(map)?;
        if d.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(&n / &d)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Variable> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn parse(s: &str) -> Result<Self, SymError> {
        super::parse::parse_rational_function(s)
    }

    pub fn to_json(&self) -> RationalFunctionJson {
        RationalFunctionJson { num: self.num.to_string(), den: self.den.to_string() }
    }
}

/// `{num, den}` wire form with canonical polynomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub num: String,
    pub den: String,
}

impl TryFrom<&RationalFunctionJson> for RationalFunction {
    type Error = SymError;
    fn try_from(j: &RationalFunctionJson) -> Result<Self, SymError> {
        RationalFunction::new(Polynomial::parse(&j.num)?, Polynomial::parse(&j.den)?)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Polynomial| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_poly(num);
            }
            return RationalFunction::normalize(num, self.den.clone());
        }
        if rhs.den.is_one() {
            let num = &self.num + &(&rhs.num * &self.den);
            return RationalFunction::normalize(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction::normalize(num, rhs.den.clone());
        }
        if let Some(k) = rhs.den.div_exact(&self.den) {
            // self.den | rhs.den
            let num = &(&self.num * &k) + &rhs.num;
            return RationalFunction::normalize(num, rhs.den.clone());
        }
        if let Some(k) = self.den.div_exact(&rhs.den) {
            let num = &self.num + &(&rhs.num * &k);
            return RationalFunction::normalize(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalize(num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cancel each numerator against the opposite denominator when it divides
        let (mut n1, mut d2) = (self.num.clone(), rhs.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Polynomial::one();
            }
        }
        let (mut n2, mut d1) = (rhs.num.clone(), self.den.clone());
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Polynomial::one();
            }
        }
        RationalFunction::normalize(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::inv`] to handle it.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inv().expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}
