use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Variable};
use super::rational_function::RationalFunction;
use super::{SymError, Q};

/// A multivariate Laurent polynomial with exact rational coefficients.
/// Zero coefficients are never stored; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Q::from_integer(c.into()))
    }

    pub fn var(name: &str) -> Self {
        Self::term(Q::one(), Monomial::var(Variable::new(name)))
    }

    pub fn variable(v: &Variable) -> Self {
        Self::term(Q::one(), Monomial::var(v.clone()))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// The single term if this polynomial is a nonzero monomial times a scalar.
    pub fn as_term(&self) -> Option<(&Monomial, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term in degrevlex order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn contains_var(&self, v: &Variable) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    /// (min, max) exponent of `v` over all terms; (0, 0) if absent.
    pub fn exponent_range(&self, v: &Variable) -> (i32, i32) {
        let mut lo = 0;
        let mut hi = 0;
        for m in self.terms.keys() {
            let e = m.exponent(v);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    /// Coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: &Variable, e: i32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_var(v);
            if k == e {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, k)| (m.mul(mono), k.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Monomial gcd of all terms (minimum exponent per variable), so that
    /// dividing by it leaves a proper polynomial with no monomial factor.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut acc = first.clone();
        for m in it {
            acc = acc.min_exponents(m);
        }
        acc
    }

    /// Splits `self = scalar * monomial * rest` where `rest` is a proper
    /// polynomial without monomial content whose leading coefficient is 1.
    pub fn content_split(&self) -> (Q, Monomial, Polynomial) {
        if self.is_zero() {
            return (Q::zero(), Monomial::one(), Polynomial::zero());
        }
        let mono = self.monomial_content();
        let lc = self.leading().map(|(_, c)| c.clone()).unwrap();
        let inv_mono = mono.inv();
        let inv_lc = lc.recip();
        let rest = Polynomial { terms: self.terms.iter().map(|(m, c)| (m.mul(&inv_mono), c * &inv_lc)).collect() };
        (lc, mono, rest)
    }

    /// Canonical representative up to a unit of the Laurent ring (nonzero
    /// scalar times monomial). Two polynomials are associates iff their
    /// normalized forms are equal.
    pub fn normalized(&self) -> Polynomial {
        self.content_split().2
    }

    /// Exact division. Returns `Some(q)` with `self = q * d` when `d` divides
    /// `self` in the Laurent polynomial ring, `None` otherwise.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let (dc, dm, dp) = d.content_split();
        let (sc, sm, sp) = self.content_split();
        let unit_c = &sc / &dc;
        let unit_m = sm.div(&dm);
        if dp.is_one() {
            return Some(sp.scale(&unit_c).mul_monomial(&unit_m));
        }
        // proper-polynomial long division by the monic dp
        let (dlm, _) = dp.leading().unwrap();
        let dlm = dlm.clone();
        let mut rem = sp;
        let mut quot = Polynomial::zero();
        while let Some((lm, lc)) = rem.leading() {
            if !dlm.divides(lm) {
                return None;
            }
            let qm = lm.div(&dlm);
            let qc = lc.clone();
            let t = Polynomial::term(qc.clone(), qm.clone());
            rem = &rem - &(&dp * &t);
            quot.add_term(qm, qc);
        }
        Some(quot.scale(&unit_c).mul_monomial(&unit_m))
    }

    pub fn eval(&self, assignment: &BTreeMap<Variable, Q>) -> Result<Q, SymError> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = assignment.get(v).ok_or_else(|| SymError::UnassignedVariable(v.to_string()))?;
                if *e < 0 && x.is_zero() {
                    return Err(SymError::DenominatorVanishes { assignment: super::format_assignment(assignment) });
                }
                t *= num_traits::pow::Pow::pow(x, *e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of variables by rational functions. Variables
    /// not in the map are kept.
    pub fn substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> RationalFunction {
        self.try_substitute(map).expect("substituted a zero value into a negative power")
    }

    /// As [`Polynomial::substitute`], failing when a zero value lands in a
    /// negative power.
    pub fn try_substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> Result<RationalFunction, SymError> {
        if !self.terms.keys().any(|m| m.iter().any(|(v, _)| map.contains_key(v))) {
            return Ok(RationalFunction::from_poly(self.clone()));
        }
        // polynomial-valued substitutions stay in the polynomial ring
        let poly_map: Option<BTreeMap<&Variable, (&Polynomial, bool)>> = map
            .iter()
            .map(|(v, rf)| if rf.den().is_one() { Some((v, (rf.num(), rf.num().as_term().is_some()))) } else { None })
            .collect();
        if let Some(pm) = poly_map {
            let negative_ok = self
                .terms
                .keys()
                .all(|m| m.iter().all(|(v, e)| *e >= 0 || pm.get(v).is_none_or(|(_, is_term)| *is_term)));
            if negative_ok {
                let mut acc = Polynomial::zero();
                let mut cache: BTreeMap<(Variable, i32), Polynomial> = BTreeMap::new();
                for (m, c) in &self.terms {
                    let mut keep: Vec<(Variable, i32)> = Vec::new();
                    let mut t = Polynomial::constant(c.clone());
                    for (v, e) in m.iter() {
                        match pm.get(v) {
                            None => keep.push((v.clone(), *e)),
                            Some((p, _)) => {
                                let pw = cache
                                    .entry((v.clone(), *e))
                                    .or_insert_with(|| {
                                        if *e >= 0 {
                                            p.pow(*e as u32)
                                        } else {
                                            let (tm, tc) = p.as_term().unwrap();
                                            Polynomial::term(num_traits::pow::Pow::pow(tc, *e), tm.pow(*e))
                                        }
                                    })
                                    .clone();
                                t = &t * &pw;
                            }
                        }
                    }
                    acc = &acc + &t.mul_monomial(&Monomial::from_pairs(keep));
                }
                return Ok(RationalFunction::from_poly(acc));
            }
        }
        let mut acc = RationalFunction::zero();
        for (m, c) in &self.terms {
            let mut keep: Vec<(Variable, i32)> = Vec::new();
            let mut t = RationalFunction::from_poly(Polynomial::constant(c.clone()));
            for (v, e) in m.iter() {
                match map.get(v) {
                    None => keep.push((v.clone(), *e)),
                    Some(rf) => {
                        let pw = rf.powi(*e)?;
                        t = &t * &pw;
                    }
                }
            }
            let t = &t * &RationalFunction::from_poly(Polynomial::term(Q::one(), Monomial::from_pairs(keep)));
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitution of a single variable by a rational value.
    pub fn substitute_value(&self, v: &Variable, value: &Q) -> Result<Polynomial, SymError> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e < 0 && value.is_zero() {
                return Err(SymError::DenominatorVanishes { assignment: format!("{v}: 0") });
            }
            out.add_term(rest, c * num_traits::pow::Pow::pow(value, e));
        }
        Ok(out)
    }

    /// If this polynomial has degree exactly one in `v` (and no negative
    /// powers of `v`), returns `(coefficient, rest)` with
    /// `self = coefficient * v + rest`.
    pub fn linear_in(&self, v: &Variable) -> Option<(Polynomial, Polynomial)> {
        let (lo, hi) = self.exponent_range(v);
        if lo < 0 || hi != 1 {
            return None;
        }
        Some((self.coeff_of(v, 1), self.coeff_of(v, 0)))
    }

    /// Univariate coefficient list in `v` (index = exponent), when the
    /// polynomial involves only `v` with nonnegative exponents.
    pub fn univariate_coeffs(&self, v: &Variable) -> Option<Vec<Q>> {
        let (lo, hi) = self.exponent_range(v);
        if lo < 0 {
            return None;
        }
        let mut out = vec![Q::zero(); hi as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if !rest.is_one() {
                return None;
            }
            out[e as usize] = c.clone();
        }
        Some(out)
    }

    /// Canonical string form: terms in increasing degrevlex order.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Result<Polynomial, SymError> {
        let rf = super::parse::parse_rational_function(s)?;
        if rf.den().is_one() {
            return Ok(rf.num().clone());
        }
        rf.num().div_exact(rf.den()).ok_or_else(|| SymError::Parse(format!("not a polynomial: {s}")))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(p("1 - b*c").to_string(), "1 - b*c");
        assert_eq!(p("-b*c + 1").to_string(), "1 - b*c");
        assert_eq!(p("(1-t)*t").to_string(), "t - t^2");
        assert_eq!(p("x^-1 + 1/2").to_string(), "x^-1 + 1/2");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = p("w*x + x*z");
        assert_eq!(a.div_exact(&p("w + z")), Some(p("x")));
        assert_eq!(a.div_exact(&p("w + 1")), None);
        let b = p("a^2 - 1");
        assert_eq!(b.div_exact(&p("a - 1")), Some(p("a + 1")));
        // Laurent units divide anything
        assert_eq!(p("x^2*y").div_exact(&p("3*x^5")), Some(p("1/3*x^-3*y")));
    }

    #[test]
    fn substitute_keeps_laurent_exactness() {
        let mut map = BTreeMap::new();
        map.insert(Variable::new("y"), RationalFunction::parse("1/x").unwrap());
        let r = p("x*y - 1").substitute(&map);
        assert!(r.is_zero());
        let r = p("y^-2").substitute(&map);
        assert_eq!(r, RationalFunction::parse("x^2").unwrap());
    }

    #[test]
    fn linear_detection() {
        let e = p("w^2 + x*y - 1");
        let (c, rest) = e.linear_in(&Variable::new("x")).unwrap();
        assert_eq!(c, p("y"));
        assert_eq!(rest, p("w^2 - 1"));
        assert!(e.linear_in(&Variable::new("w")).is_none());
    }
}
