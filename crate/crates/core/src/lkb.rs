//! The Lawrence-Krammer-Bigelow representation of B_n, its welded version
//! at t = 1, and a two-family extension on three strands.
//!
//! Basis vectors `x_{i,j}`, `1 <= i < j <= n`, are ordered
//! lexicographically; column `c` of a matrix is the image of basis vector
//! `c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localrep::{ExplicitRep, LocalRepError, Rep};
use crate::matrix::RfMatrix;
use crate::presentations::{Generator, Group};
use crate::symalg::{RationalFunction, Variable};

#[derive(Debug, Error)]
pub enum LkbError {
    #[error("generator index {k} out of range for n = {n}")]
    IndexOutOfRange { n: usize, k: usize },
    #[error("need n >= 3, got {0}")]
    TooFewStrands(usize),
    #[error(transparent)]
    LocalRep(#[from] LocalRepError),
}

pub type Result<T, E = LkbError> = std::result::Result<T, E>;

/// A basis pair `(i, j)` with `1 <= i < j <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LkbBasisIndex {
    pub i: usize,
    pub j: usize,
}

/// All basis pairs in lexicographic order.
pub fn basis(n: usize) -> Vec<LkbBasisIndex> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| LkbBasisIndex { i, j })).collect()
}

fn position(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    // pairs before row i, then offset inside row i
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

fn rf(s: &str) -> RationalFunction {
    RationalFunction::parse(s).expect("literal")
}

fn q_pow(e: i32) -> RationalFunction {
    RationalFunction::var("q").powi(e).expect("q is nonzero")
}

/// Accumulates the image of one basis vector.
struct Column<'a> {
    n: usize,
    m: &'a mut RfMatrix,
    col: usize,
}

impl Column<'_> {
    fn add(&mut self, i: usize, j: usize, c: RationalFunction) {
        let r = position(self.n, i, j);
        let v = self.m.get(r, self.col) + &c;
        self.m.set(r, self.col, v);
    }
}

fn check(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(LkbError::TooFewStrands(n));
    }
    if k == 0 || k >= n {
        return Err(LkbError::IndexOutOfRange { n, k });
    }
    Ok(())
}

/// `K(σ_k)` of the Lawrence-Krammer-Bigelow representation, over
/// `Z[t^±1, q^±1]`.
pub fn lkb_matrix(n: usize, k: usize) -> Result<RfMatrix> {
    check(n, k)?;
    let dim = n * (n - 1) / 2;
    let mut m = RfMatrix::zeros(dim, dim);
    let t = rf("t");
    let qm1 = rf("q - 1");
    for b in basis(n) {
        let (i, j) = (b.i, b.j);
        let mut col = Column { n, m: &mut m, col: position(n, i, j) };
        if i == k && j == k + 1 {
            col.add(k, k + 1, &t * &q_pow(2));
        } else if i < k && j == k {
            col.add(i, k, rf("1 - q"));
            col.add(i, k + 1, rf("q"));
        } else if i < k && j == k + 1 {
            col.add(i, k, RationalFunction::one());
            col.add(k, k + 1, &(&t * &q_pow((k - i + 1) as i32)) * &qm1);
        } else if i == k && j > k + 1 {
            col.add(k, k + 1, &(&t * &q_pow(1)) * &qm1);
            col.add(k + 1, j, rf("q"));
        } else if i == k + 1 && j > k + 1 {
            col.add(k, j, RationalFunction::one());
            col.add(k + 1, j, rf("1 - q"));
        } else if i < k && j > k + 1 {
            col.add(i, j, RationalFunction::one());
            col.add(k, k + 1, &(&t * &q_pow((k - i) as i32)) * &(&qm1 * &qm1));
        } else {
            col.add(i, j, RationalFunction::one());
        }
    }
    Ok(m)
}

/// `σ_k` of the welded representation over `Z[q^±1]`.
pub fn welded_sigma(n: usize, k: usize) -> Result<RfMatrix> {
    check(n, k)?;
    let dim = n * (n - 1) / 2;
    let mut m = RfMatrix::zeros(dim, dim);
    let qq = rf("q*(q - 1)");
    for b in basis(n) {
        let (a, l) = (b.i, b.j);
        let mut col = Column { n, m: &mut m, col: position(n, a, l) };
        if a < k && l == k {
            col.add(a, k, rf("1 - q"));
            col.add(a, k + 1, rf("q"));
            col.add(k, k + 1, qq.clone());
        } else if a < k && l == k + 1 {
            col.add(a, k, RationalFunction::one());
        } else if a == k && l == k + 1 {
            col.add(k, k + 1, q_pow(2));
        } else if a == k && l > k + 1 {
            col.add(k, k + 1, qq.clone());
            col.add(k, l, rf("1 - q"));
            col.add(k + 1, l, rf("q"));
        } else if a == k + 1 {
            col.add(k, l, RationalFunction::one());
        } else {
            col.add(a, l, RationalFunction::one());
        }
    }
    Ok(m)
}

/// `ρ_k` of the welded representation: the basis permutation induced by
/// swapping indices `k` and `k + 1`.
pub fn welded_rho(n: usize, k: usize) -> Result<RfMatrix> {
    check(n, k)?;
    let dim = n * (n - 1) / 2;
    let mut m = RfMatrix::zeros(dim, dim);
    let swap = |x: usize| {
        if x == k {
            k + 1
        } else if x == k + 1 {
            k
        } else {
            x
        }
    };
    for b in basis(n) {
        let (i, j) = (swap(b.i), swap(b.j));
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        m.set(position(n, i, j), position(n, b.i, b.j), RationalFunction::one());
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LkbVariant {
    /// `B_n` in `t, q`.
    Full,
    /// `WB_n` in `q`.
    WeldedT1,
    /// `M_2WB_3` in `q, b`, with the second family's images attached to
    /// the strand pairs that satisfy the defining relations.
    M2wb3,
    /// The same six matrices with the second family's labels exchanged.
    M2wb3Exchanged,
}

impl std::str::FromStr for LkbVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(LkbVariant::Full),
            "welded" | "welded-t1" => Ok(LkbVariant::WeldedT1),
            "m2wb3" => Ok(LkbVariant::M2wb3),
            "m2wb3-exchanged" => Ok(LkbVariant::M2wb3Exchanged),
            _ => Err(format!("unknown LKB variant {s:?} (full, welded, m2wb3, m2wb3-exchanged)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LkbRep {
    pub n: usize,
    pub variant: LkbVariant,
    pub rep: ExplicitRep,
}

impl LkbRep {
    pub fn as_rep(&self) -> Rep {
        Rep::Explicit(self.rep.clone())
    }

    pub fn matrix(&self, g: &Generator) -> Option<&RfMatrix> {
        self.rep.images.get(g)
    }
}

fn nonzero(names: &[&str]) -> Vec<RationalFunction> {
    names.iter().map(|s| rf(s)).collect()
}

pub fn lkb(n: usize) -> Result<LkbRep> {
    if n < 3 {
        return Err(LkbError::TooFewStrands(n));
    }
    let mut images = BTreeMap::new();
    for k in 1..n {
        images.insert(Generator::sigma(k as u32), lkb_matrix(n, k)?);
    }
    let rep = ExplicitRep::new(format!("lkb_{n}"), Group::B, n, 0, images, nonzero(&["t", "q"]))?;
    Ok(LkbRep { n, variant: LkbVariant::Full, rep })
}

/// The welded representation of `WB_n`, presented as one virtual family.
pub fn welded_lkb(n: usize) -> Result<LkbRep> {
    if n < 3 {
        return Err(LkbError::TooFewStrands(n));
    }
    let mut images = BTreeMap::new();
    for k in 1..n {
        images.insert(Generator::sigma(k as u32), welded_sigma(n, k)?);
        images.insert(Generator::rho(k as u32, 0), welded_rho(n, k)?);
    }
    let rep = ExplicitRep::new(format!("welded_lkb_{n}"), Group::MkWB, n, 1, images, nonzero(&["q"]))?;
    Ok(LkbRep { n, variant: LkbVariant::WeldedT1, rep })
}

/// `[[0, b, 0], [1/b, 0, 0], [0, 0, 1]]`
fn swap_12(b: &RationalFunction) -> RfMatrix {
    let z = RationalFunction::zero;
    let one = RationalFunction::one;
    let inv = b.inv().expect("b is nonzero");
    RfMatrix::from_rows(vec![vec![z(), b.clone(), z()], vec![inv, z(), z()], vec![z(), z(), one()]])
}

/// `[[1, 0, 0], [0, 0, b], [0, 1/b, 0]]`
fn swap_23(b: &RationalFunction) -> RfMatrix {
    let z = RationalFunction::zero;
    let one = RationalFunction::one;
    let inv = b.inv().expect("b is nonzero");
    RfMatrix::from_rows(vec![vec![one(), z(), z()], vec![z(), z(), b.clone()], vec![z(), inv, z()]])
}

/// The welded representation on three strands with a second virtual
/// family: `ρ_1^1` rescales the `ρ_1^0` swap of `x_{1,3}, x_{2,3}` by `b`,
/// and `ρ_2^1` rescales the `ρ_2^0` swap of `x_{1,2}, x_{1,3}`.
pub fn m2wb3_extension(b: &Variable) -> Result<LkbRep> {
    m2wb3(b, false)
}

/// As [`m2wb3_extension`] with the two `ρ^1` images exchanged. This
/// assignment does not satisfy the relations; it is kept so the check can
/// be reproduced.
pub fn m2wb3_exchanged(b: &Variable) -> Result<LkbRep> {
    m2wb3(b, true)
}

fn m2wb3(b: &Variable, exchanged: bool) -> Result<LkbRep> {
    let base = welded_lkb(3)?;
    let bv = RationalFunction::from_poly(crate::symalg::Polynomial::variable(b));
    let mut images = base.rep.images.clone();
    let (r1, r2) = if exchanged { (swap_12(&bv), swap_23(&bv)) } else { (swap_23(&bv), swap_12(&bv)) };
    images.insert(Generator::rho(1, 1), r1);
    images.insert(Generator::rho(2, 1), r2);
    let (name, variant) =
        if exchanged { ("m2wb3_exchanged", LkbVariant::M2wb3Exchanged) } else { ("m2wb3", LkbVariant::M2wb3) };
    let rep = ExplicitRep::new(name, Group::MkWB, 3, 2, images, vec![rf("q"), bv])?;
    Ok(LkbRep { n: 3, variant, rep })
}

/// The representation for a variant on `n` strands.
pub fn lkb_variant(variant: LkbVariant, n: usize) -> Result<LkbRep> {
    let b = Variable::new("b");
    match variant {
        LkbVariant::Full => lkb(n),
        LkbVariant::WeldedT1 => welded_lkb(n),
        LkbVariant::M2wb3 | LkbVariant::M2wb3Exchanged if n != 3 => Err(LkbError::IndexOutOfRange { n, k: 3 }),
        LkbVariant::M2wb3 => m2wb3_extension(&b),
        LkbVariant::M2wb3Exchanged => m2wb3_exchanged(&b),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T1Comparison {
    pub n: usize,
    /// Generator indices where `K(σ_k)` at `t = 1` differs from the welded
    /// `σ_k`.
    pub mismatched: Vec<usize>,
}

impl T1Comparison {
    pub fn equal(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Compares `K(σ_k)` at `t = 1` with the welded `σ_k` entry by entry.
pub fn compare_t1(n: usize) -> Result<T1Comparison> {
    let t1: BTreeMap<Variable, RationalFunction> = [(Variable::new("t"), RationalFunction::one())].into();
    let mut mismatched = Vec::new();
    for k in 1..n {
        let full = lkb_matrix(n, k)?.substitute(&t1).map_err(LocalRepError::from)?;
        if full != welded_sigma(n, k)? {
            mismatched.push(k);
        }
    }
    Ok(T1Comparison { n, mismatched })
}
