use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// A named indeterminate. Variables are ordered lexicographically by name,
/// which fixes the variable order for every algorithm in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Self {
        Variable(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Variable::new(&s))
    }
}

/// A Laurent monomial: a product of variables raised to nonzero integer
/// powers. Stored sorted by variable with no zero exponents, so the empty
/// monomial is the unit.
///
/// The `Ord` instance is degree-reverse-lexicographic, which is also the
/// order terms are printed in.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Variable, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Variable) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Variable, e: i32) -> Self {
        let mut m = Monomial::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Variable, i32)>>(pairs: I) -> Self {
        let mut v: Vec<(Variable, i32)> = pairs.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: SmallVec<[(Variable, i32); 4]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Variable, i32)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Variable) -> i32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    /// True when every exponent is nonnegative.
    pub fn is_proper(&self) -> bool {
        self.0.iter().all(|(_, e)| *e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(Variable, i32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    /// Componentwise minimum of exponents, treating absent variables as
    /// exponent zero. The result divides both arguments in the Laurent sense
    /// and leaves both quotients with nonnegative exponents.
    pub fn min_exponents(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(Variable, i32)> = Vec::new();
        for (v, e) in self.0.iter() {
            let m = (*e).min(other.exponent(v));
            if m != 0 {
                pairs.push((v.clone(), m));
            }
        }
        for (v, e) in other.0.iter() {
            if self.exponent(v) == 0 && *e < 0 {
                pairs.push((v.clone(), *e));
            }
        }
        Monomial::from_pairs(pairs)
    }

    /// Splits off the power of `v`: returns `(exponent, rest)`.
    pub fn split_var(&self, v: &Variable) -> (i32, Monomial) {
        let mut rest = self.clone();
        match rest.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let (_, e) = rest.0.remove(i);
                (e, rest)
            }
            Err(_) => (0, rest),
        }
    }

    /// Proper-polynomial divisibility: true if `other` divides `self` with a
    /// quotient having nonnegative exponents.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
            && other.0.iter().all(|(v, e)| *e >= 0 || self.exponent(v) <= *e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            // reverse lexicographic tie-break: scan from the last variable,
            // the side with the smaller exponent is the larger monomial
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (a.len(), b.len());
            while i > 0 || j > 0 {
                let (va, ea) = if i > 0 { (Some(&a[i - 1].0), a[i - 1].1) } else { (None, 0) };
                let (vb, eb) = if j > 0 { (Some(&b[j - 1].0), b[j - 1].1) } else { (None, 0) };
                let ord = match (va, vb) {
                    (Some(x), Some(y)) => x.cmp(y),
                    (Some(_), None) => Ordering::Greater,
                    (None, Some(_)) => Ordering::Less,
                    (None, None) => unreachable!(),
                };
                let (ex, ey) = match ord {
                    Ordering::Greater => {
                        i -= 1;
                        (ea, 0)
                    }
                    Ordering::Less => {
                        j -= 1;
                        (0, eb)
                    }
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                        (ea, eb)
                    }
                };
                if ex != ey {
                    return ey.cmp(&ex);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(&str, i32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|(v, e)| (Variable::new(v), *e)))
    }

    #[test]
    fn zero_exponents_are_dropped() {
        assert!(m(&[("x", 1), ("x", -1)]).is_one());
        assert_eq!(m(&[("y", 2), ("x", 1)]).to_string(), "x*y^2");
    }

    #[test]
    fn degrevlex_order() {
        // total degree first
        assert!(m(&[]) < m(&[("b", 1)]));
        assert!(m(&[("z", 1)]) < m(&[("a", 1), ("b", 1)]));
        // same degree: smaller power of the last variable wins
        assert!(m(&[("a", 2)]) > m(&[("a", 1), ("b", 1)]));
        assert!(m(&[("a", 1), ("b", 1)]) > m(&[("b", 2)]));
        assert!(m(&[("a", 1), ("c", 1)]) < m(&[("b", 2)]));
    }

    #[test]
    fn min_exponents_is_common_content() {
        let a = m(&[("x", 2), ("y", -1)]);
        let b = m(&[("x", 1), ("z", 1)]);
        assert_eq!(a.min_exponents(&b), m(&[("x", 1), ("y", -1)]));
    }

    #[test]
    fn divides_checks_exponents() {
        assert!(m(&[("x", 1)]).divides(&m(&[("x", 2), ("y", 1)])));
        assert!(!m(&[("x", 1), ("z", 1)]).divides(&m(&[("x", 2)])));
    }
}
