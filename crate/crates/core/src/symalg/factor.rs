use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, Variable};
use super::polynomial::Polynomial;
use super::Q;

/// `scalar * monomial * prod(factor^multiplicity)`. Factors are monic in
/// degrevlex, proper, and carry no monomial content; they are not
/// guaranteed irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct ShallowFactorization {
    pub scalar: Q,
    pub monomial: Monomial,
    pub factors: Vec<(Polynomial, u32)>,
}

impl ShallowFactorization {
    pub fn expand(&self) -> Polynomial {
        let mut acc = Polynomial::term(self.scalar.clone(), self.monomial.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// Variables with positive exponent in the monomial content.
    pub fn content_vars(&self) -> Vec<Variable> {
        self.monomial.iter().filter(|(_, e)| *e > 0).map(|(v, _)| v.clone()).collect()
    }

    /// Every distinct nonconstant factor, with content variables first.
    pub fn distinct_factors(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = self.content_vars().iter().map(Polynomial::variable).collect();
        out.extend(self.factors.iter().map(|(f, _)| f.clone()));
        out
    }
}

pub fn factor_shallow(p: &Polynomial) -> ShallowFactorization {
    factor_shallow_with(p, &[])
}

/// Shallow factorization. Extracts scalar and monomial content, divides out
/// any of the `known` polynomials that divide exactly, then peels linear
/// factors `v - r` for rational `r` found by substitution. Whatever is left
/// is returned as one factor.
pub fn factor_shallow_with(p: &Polynomial, known: &[Polynomial]) -> ShallowFactorization {
    assert!(!p.is_zero(), "factor_shallow of the zero polynomial");
    let (scalar, monomial, mut rest) = p.content_split();
    let mut factors: BTreeMap<Polynomial, u32> = BTreeMap::new();

    for h in known {
        if h.is_constant() {
            continue;
        }
        let h = h.normalized();
        if h.is_one() || h.num_terms() < 2 {
            continue;
        }
        while rest.num_terms() > 1 {
            match rest.div_exact(&h) {
                Some(q) => {
                    *factors.entry(h.clone()).or_default() += 1;
                    rest = q;
                }
                None => break,
            }
        }
    }

    'outer: loop {
        if rest.num_terms() < 2 {
            break;
        }
        for v in rest.vars() {
            for r in root_candidates(&rest, &v) {
                let Ok(s) = rest.substitute_value(&v, &r) else { continue };
                if !s.is_zero() {
                    continue;
                }
                let lin = &Polynomial::variable(&v) - &Polynomial::constant(r.clone());
                if let Some(q) = rest.div_exact(&lin) {
                    *factors.entry(lin.normalized()).or_default() += 1;
                    rest = q;
                    continue 'outer;
                }
            }
        }
        break;
    }

    // the remaining cofactor absorbs the scalar so `expand` is exact
    let (rc, rm, rp) = rest.content_split();
    let scalar = scalar * rc;
    let monomial = monomial.mul(&rm);
    if !rp.is_one() {
        *factors.entry(rp).or_default() += 1;
    }
    // re-normalize collected factors (they were monic already) and fold units
    let mut out = Vec::new();
    let mut scalar = scalar;
    let mut monomial = monomial;
    for (f, m) in factors {
        let (c, mono, fp) = f.content_split();
        scalar *= num_traits::pow::Pow::pow(&c, m);
        monomial = monomial.mul(&mono.pow(m as i32));
        if !fp.is_one() {
            out.push((fp, m));
        }
    }
    ShallowFactorization { scalar, monomial, factors: out }
}

const MAX_ROOT_SEARCH: u64 = 1_000_000_000;

/// Rational roots of some univariate coefficient slice of `p` in `v`. A root
/// of `p` as a polynomial in `v` over the other variables must be a root of
/// every such slice, so the sparsest one yields the smallest candidate set.
fn root_candidates(p: &Polynomial, v: &Variable) -> Vec<Q> {
    let (lo, hi) = p.exponent_range(v);
    if lo < 0 || hi == 0 {
        return Vec::new();
    }
    let mut slices: BTreeMap<Monomial, BTreeMap<i32, Q>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (e, rest) = m.split_var(v);
        slices.entry(rest).or_default().insert(e, c.clone());
    }
    let Some(slice) =
        slices.values().filter(|s| s.keys().any(|e| *e > 0)).min_by_key(|s| (s.len(), s.keys().max().copied()))
    else {
        return Vec::new();
    };
    if slice.len() == 1 {
        // c * v^e vanishes only at zero
        return vec![Q::zero()];
    }
    let deg = *slice.keys().max().unwrap();
    let low = *slice.keys().min().unwrap();
    let mut out = Vec::new();
    if low > 0 {
        out.push(Q::zero());
    }
    if deg - low == 1 {
        let a = slice[&deg].clone();
        let b = slice[&low].clone();
        out.push(-b / a);
        return out;
    }
    let lcm = slice.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lead = (&slice[&deg] * Q::from_integer(lcm.clone())).to_integer();
    let tail = (&slice[&low] * Q::from_integer(lcm)).to_integer();
    let (Some(ln), Some(tn)) = (lead.abs().to_u64(), tail.abs().to_u64()) else {
        return out;
    };
    if ln > MAX_ROOT_SEARCH || tn > MAX_ROOT_SEARCH {
        return out;
    }
    for pnum in divisors(tn) {
        for qden in divisors(ln) {
            let r = Q::new(BigInt::from(pnum), BigInt::from(qden));
            out.push(r.clone());
            out.push(-r);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn monomial_content_split() {
        let f = factor_shallow(&p("w*x + x*z"));
        assert_eq!(f.monomial.to_string(), "x");
        assert_eq!(f.factors, vec![(p("w + z"), 1)]);
        assert_eq!(f.expand(), p("w*x + x*z"));
    }

    #[test]
    fn no_content_single_factor() {
        let f = factor_shallow(&p("w^2 + x*y - 1"));
        assert!(f.monomial.is_one());
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.expand(), p("w^2 + x*y - 1"));
    }

    #[test]
    fn content_with_cofactor() {
        let f = factor_shallow(&p("a^2 + b*c*a - a"));
        assert_eq!(f.monomial.to_string(), "a");
        assert_eq!(f.factors, vec![(p("a + b*c - 1"), 1)]);
    }

    #[test]
    fn linear_roots_by_substitution() {
        let f = factor_shallow(&p("w^2 - 1"));
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), p("w^2 - 1"));
        let f = factor_shallow(&p("2*d^2*b - 2*d*b"));
        assert_eq!(f.expand(), p("2*d^2*b - 2*d*b"));
        assert!(f.factors.contains(&(p("d - 1"), 1)));
        let f = factor_shallow(&p("(z - 1/2)^2*(x + y)"));
        assert!(f.factors.contains(&(p("z - 1/2"), 2)));
    }

    #[test]
    fn known_factors_are_divided_out() {
        let g = p("b*c + 1");
        let f = factor_shallow_with(&(&g * &p("x^2 + y + 3")), std::slice::from_ref(&g));
        assert!(f.factors.contains(&(g, 1)));
    }
}
