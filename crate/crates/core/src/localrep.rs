//! Homogeneous local representations: one block per generator family,
//! embedded along the diagonal at the generator's index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixJson, RfMatrix, Scalar};
use crate::par;
use crate::presentations::{Family, Generator, Group, Presentation, PresentationError, Relation, Word};
use crate::symalg::{RationalFunction, SymError, Variable};

#[derive(Debug, Error)]
pub enum LocalRepError {
    #[error("block index {i} out of range for n = {n}")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("representation has no image for generator {0}")]
    UnknownFamily(String),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("invalid family choice: {0}")]
    InvalidChoice(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("side condition {0} is identically zero")]
    InconsistentSideCondition(String),
    #[error("image of {0} is singular")]
    Singular(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

pub type Result<T, E = LocalRepError> = std::result::Result<T, E>;

fn rf(s: &str) -> RationalFunction {
    RationalFunction::parse(s).expect("catalog literal")
}

fn block(rows: [[&str; 2]; 2]) -> RfMatrix {
    RfMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect())
}

/// `[[0, x], [1/x, 0]]`
pub fn swap_block(x: &RationalFunction) -> RfMatrix {
    let inv = x.inv().expect("swap parameter must be nonzero");
    RfMatrix::from_rows(vec![vec![RationalFunction::zero(), x.clone()], vec![inv, RationalFunction::zero()]])
}

/// Identity except the block `b` at rows and columns `i..i+m` (1-based `i`).
pub fn embed_block(b: &RfMatrix, i: usize, dim: usize) -> Result<RfMatrix> {
    let m = b.rows();
    if i == 0 || i + m - 1 > dim {
        return Err(LocalRepError::IndexOutOfRange { i, n: dim + 2 - m });
    }
    let mut out = RfMatrix::identity(dim);
    for r in 0..m {
        for c in 0..m {
            out.set(i - 1 + r, i - 1 + c, b.get(r, c).clone());
        }
    }
    Ok(out)
}

/// Choice of the σ block in the MkVB classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SChoice {
    Identity,
    /// `[[1-bc, b], [c, 0]]`
    Burau,
    /// `[[0, b], [c, 0]]`
    Anti,
    /// `[[0, (1-d)/c], [c, d]]`
    DType,
}

/// Choice of the σ block in the MkWB classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AChoice {
    /// `[[1-bc, b], [c, 0]]`
    Burau,
    /// `[[0, b], [c, 0]]`
    Anti,
    /// `[[0, b], [(1-d)/b, d]]`
    BType,
}

/// Block of a virtual family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XChoice {
    Identity,
    /// `[[0, x_α], [1/x_α, 0]]` with its own parameter.
    Swap,
    /// `[[0, b], [1/b, 0]]` sharing the σ parameter `b`.
    SwapB,
}

const S_ORDER: [SChoice; 4] = [SChoice::Burau, SChoice::Anti, SChoice::Identity, SChoice::DType];
const A_ORDER: [AChoice; 3] = [AChoice::Burau, AChoice::Anti, AChoice::BType];

impl SChoice {
    fn key(&self) -> &'static str {
        match self {
            SChoice::Identity => "id",
            SChoice::Burau => "burau",
            SChoice::Anti => "anti",
            SChoice::DType => "dtype",
        }
    }
}

impl AChoice {
    fn key(&self) -> &'static str {
        match self {
            AChoice::Burau => "burau",
            AChoice::Anti => "anti",
            AChoice::BType => "btype",
        }
    }
}

impl XChoice {
    fn key(&self) -> &'static str {
        match self {
            XChoice::Identity => "id",
            XChoice::Swap => "swap",
            XChoice::SwapB => "swapb",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "id" => Some(XChoice::Identity),
            "swap" | "swapx" => Some(XChoice::Swap),
            "swapb" => Some(XChoice::SwapB),
            _ => None,
        }
    }
}

/// A member of the MkVB or MkWB classification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogFamily {
    Trivial(Group),
    /// σ block and the blocks of families 1..k-1; family 0 is always a swap.
    Mvb {
        s: SChoice,
        x: Vec<XChoice>,
    },
    /// σ block and the blocks of families 0..k-1.
    Mwb {
        a: AChoice,
        y: Vec<XChoice>,
    },
}

impl CatalogFamily {
    pub fn group(&self) -> Group {
        match self {
            CatalogFamily::Trivial(g) => *g,
            CatalogFamily::Mvb { .. } => Group::MkVB,
            CatalogFamily::Mwb { .. } => Group::MkWB,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            CatalogFamily::Trivial(_) => None,
            CatalogFamily::Mvb { x, .. } => Some(x.len() + 1),
            CatalogFamily::Mwb { y, .. } => Some(y.len()),
        }
    }

    /// Checks the choice against the classification constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LocalRepError::InvalidChoice(format!("{self}: {m}")));
        match self {
            CatalogFamily::Trivial(Group::MkVB | Group::MkWB) => Ok(()),
            CatalogFamily::Trivial(g) => bad(&format!("no catalog for group {g}")),
            CatalogFamily::Mvb { x, .. } => {
                if x.contains(&XChoice::SwapB) {
                    return bad("MkVB virtual blocks are swap or id");
                }
                Ok(())
            }
            CatalogFamily::Mwb { a, y } => {
                let Some(y0) = y.first() else { return bad("need k >= 1") };
                let kind = if *a == AChoice::Anti { XChoice::Swap } else { XChoice::SwapB };
                if *y0 != kind {
                    return bad(&format!("family 0 must be {}", kind.key()));
                }
                if y[1..].iter().any(|c| *c != kind && *c != XChoice::Identity) {
                    return bad(&format!("families 1.. must be {} or id", kind.key()));
                }
                Ok(())
            }
        }
    }

    /// All members of the MkVB classification in catalog order.
    pub fn mvb_all(k: usize) -> Vec<CatalogFamily> {
        let mut out = vec![CatalogFamily::Trivial(Group::MkVB)];
        for pattern in patterns(k.saturating_sub(1), XChoice::Swap) {
            for s in S_ORDER {
                out.push(CatalogFamily::Mvb { s, x: pattern.clone() });
            }
        }
        out
    }

    /// All members of the MkWB classification in catalog order.
    pub fn mwb_all(k: usize) -> Vec<CatalogFamily> {
        let mut out = vec![CatalogFamily::Trivial(Group::MkWB)];
        for pattern in patterns(k.saturating_sub(1), XChoice::Swap) {
            for a in A_ORDER {
                let kind = if a == AChoice::Anti { XChoice::Swap } else { XChoice::SwapB };
                let mut y = vec![kind];
                y.extend(pattern.iter().map(|c| if *c == XChoice::Swap { kind } else { XChoice::Identity }));
                out.push(CatalogFamily::Mwb { a, y });
            }
        }
        out
    }

    /// Short name where one exists: `beta1..beta9` and `zeta1..zeta7`, with
    /// every virtual family above 0 following family 1 when k > 2.
    pub fn alias(&self) -> Option<String> {
        match self {
            CatalogFamily::Trivial(Group::MkVB) => Some("beta1".into()),
            CatalogFamily::Trivial(Group::MkWB) => Some("zeta1".into()),
            CatalogFamily::Trivial(_) => None,
            CatalogFamily::Mvb { s, x } => {
                let p = uniform_pattern(x)?;
                let si = S_ORDER.iter().position(|c| c == s)?;
                Some(format!("beta{}", 2 + 4 * p + si))
            }
            CatalogFamily::Mwb { a, y } => {
                let p = uniform_pattern(&y[1..])?;
                let ai = A_ORDER.iter().position(|c| c == a)?;
                Some(format!("zeta{}", 2 + 3 * p + ai))
            }
        }
    }

    pub fn from_alias(name: &str, k: usize) -> Option<CatalogFamily> {
        let (list, j) = if let Some(j) = name.strip_prefix("beta") {
            (Self::mvb_all(k), j)
        } else {
            let j = name.strip_prefix("zeta")?;
            (Self::mwb_all(k), j)
        };
        let j: usize = j.parse().ok()?;
        list.into_iter().find(|f| f.alias().as_deref() == Some(&format!("{}{j}", &name[..4])))
    }
}

/// `m` choices from {id, on} in lexicographic order, id first.
fn patterns(m: usize, on: XChoice) -> Vec<Vec<XChoice>> {
    (0..1usize << m)
        .map(|bits| (0..m).map(|pos| if bits >> (m - 1 - pos) & 1 == 1 { on } else { XChoice::Identity }).collect())
        .collect()
}

fn uniform_pattern(x: &[XChoice]) -> Option<usize> {
    if x.is_empty() {
        return None;
    }
    let first = x[0];
    if x.iter().any(|c| *c != first) {
        return None;
    }
    Some(usize::from(first != XChoice::Identity))
}

impl fmt::Display for CatalogFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |x: &[XChoice]| x.iter().map(|c| c.key()).collect::<Vec<_>>().join(",");
        match self {
            CatalogFamily::Trivial(Group::MkWB) => f.write_str("mwb(trivial)"),
            CatalogFamily::Trivial(_) => f.write_str("mvb(trivial)"),
            CatalogFamily::Mvb { s, x } => write!(f, "mvb({};{})", s.key(), join(x)),
            CatalogFamily::Mwb { a, y } => write!(f, "mwb({};{})", a.key(), join(y)),
        }
    }
}

impl FromStr for CatalogFamily {
    type Err = LocalRepError;

    /// Parses `mvb(anti;swap)`, `mwb(burau;swapb,id)` or `mvb(trivial)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || LocalRepError::UnknownName(s.to_string());
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let group = match head.trim() {
            "mvb" => Group::MkVB,
            "mwb" => Group::MkWB,
            _ => return Err(bad()),
        };
        if inner.trim() == "trivial" {
            return Ok(CatalogFamily::Trivial(group));
        }
        let (blk, xs) = inner.split_once(';').unwrap_or((inner, ""));
        let xs: Vec<XChoice> = xs
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| XChoice::parse(t).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let fam = match group {
            Group::MkVB => {
                let s = match blk.trim() {
                    "id" => SChoice::Identity,
                    "burau" => SChoice::Burau,
                    "anti" => SChoice::Anti,
                    "dtype" => SChoice::DType,
                    _ => return Err(bad()),
                };
                CatalogFamily::Mvb { s, x: xs }
            }
            _ => {
                let a = match blk.trim() {
                    "burau" => AChoice::Burau,
                    "anti" => AChoice::Anti,
                    "btype" => AChoice::BType,
                    _ => return Err(bad()),
                };
                CatalogFamily::Mwb { a, y: xs }
            }
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// A homogeneous local representation: the same `m×m` block for every
/// generator of a family, so the representation has dimension `n + m - 2`.
#[derive(Clone, Debug)]
pub struct LocalRepSpec {
    pub name: String,
    pub group: Group,
    pub n: usize,
    pub k: usize,
    pub sigma: RfMatrix,
    pub rho: Vec<RfMatrix>,
    /// Each must be nonzero on the validity domain.
    pub side_conditions: Vec<RationalFunction>,
    pub family: Option<CatalogFamily>,
}

impl LocalRepSpec {
    pub fn new(
        name: impl Into<String>,
        group: Group,
        n: usize,
        sigma: RfMatrix,
        rho: Vec<RfMatrix>,
        side_conditions: Vec<RationalFunction>,
    ) -> Result<Self> {
        let m = sigma.rows();
        if !sigma.is_square() || m < 1 || rho.iter().any(|b| b.rows() != m || b.cols() != m) {
            return Err(LocalRepError::DimensionMismatch("blocks must be square of equal size".into()));
        }
        if n + 1 < m || n < 2 {
            return Err(LocalRepError::DimensionMismatch(format!("n = {n} too small for {m}x{m} blocks")));
        }
        if let Some(z) = side_conditions.iter().find(|c| c.is_zero()) {
            return Err(LocalRepError::InconsistentSideCondition(z.to_string()));
        }
        let mut conds: Vec<RationalFunction> = Vec::new();
        for c in side_conditions {
            if !conds.contains(&c) {
                conds.push(c);
            }
        }
        Ok(LocalRepSpec { name: name.into(), group, n, k: rho.len(), sigma, rho, side_conditions: conds, family: None })
    }

    pub fn block_size(&self) -> usize {
        self.sigma.rows()
    }

    pub fn dim(&self) -> usize {
        self.n + self.block_size() - 2
    }

    pub fn block(&self, fam: Family) -> Option<&RfMatrix> {
        match fam {
            Family::Sigma => Some(&self.sigma),
            Family::Rho(a) => self.rho.get(a as usize),
        }
    }

    pub fn rep_image(&self, g: &Generator) -> Result<RfMatrix> {
        let b = self.block(g.family).ok_or_else(|| LocalRepError::UnknownFamily(g.to_string()))?;
        if g.index == 0 || g.index as usize >= self.n {
            return Err(LocalRepError::IndexOutOfRange { i: g.index as usize, n: self.n });
        }
        embed_block(b, g.index as usize, self.dim())
    }

    /// The same blocks on `n` strands.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut s = LocalRepSpec::new(
            self.name.clone(),
            self.group,
            n,
            self.sigma.clone(),
            self.rho.clone(),
            self.side_conditions.clone(),
        )?;
        s.family = self.family.clone();
        Ok(s)
    }

    /// Substitutes parameters in every block and side condition.
    pub fn substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> Result<Self> {
        let mut s = LocalRepSpec::new(
            self.name.clone(),
            self.group,
            self.n,
            self.sigma.substitute(map)?,
            self.rho.iter().map(|b| b.substitute(map)).collect::<Result<_, _>>()?,
            substitute_all(&self.side_conditions, map)?,
        )?;
        s.family = self.family.clone();
        Ok(s)
    }

    pub fn parameters(&self) -> Vec<String> {
        let mut vs = self.sigma.vars();
        for b in &self.rho {
            vs.extend(b.vars());
        }
        vs.iter().map(|v| v.name().to_string()).collect()
    }

    pub fn to_json(&self) -> SpecJson {
        SpecJson {
            name: self.name.clone(),
            family: self.family.as_ref().map(ToString::to_string),
            group: self.group,
            n: self.n,
            k: self.k,
            parameters: self.parameters(),
            blocks: BlocksJson { sigma: self.sigma.to_json(), rho: self.rho.iter().map(RfMatrix::to_json).collect() },
            side_conditions: self.side_conditions.iter().map(|c| format!("{c} != 0")).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksJson {
    pub sigma: MatrixJson,
    pub rho: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub group: Group,
    pub n: usize,
    pub k: usize,
    pub parameters: Vec<String>,
    pub blocks: BlocksJson,
    pub side_conditions: Vec<String>,
}

/// A representation given by one full matrix per generator.
#[derive(Clone, Debug)]
pub struct ExplicitRep {
    pub name: String,
    pub group: Group,
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    pub images: BTreeMap<Generator, RfMatrix>,
    pub side_conditions: Vec<RationalFunction>,
}

impl ExplicitRep {
    pub fn new(
        name: impl Into<String>,
        group: Group,
        n: usize,
        k: usize,
        images: BTreeMap<Generator, RfMatrix>,
        side_conditions: Vec<RationalFunction>,
    ) -> Result<Self> {
        let dim = images.values().next().map_or(0, RfMatrix::rows);
        for (g, m) in &images {
            if m.rows() != dim || m.cols() != dim {
                return Err(LocalRepError::DimensionMismatch(format!("image of {g} is {}x{}", m.rows(), m.cols())));
            }
            if !g.is_valid(n, k) {
                return Err(LocalRepError::UnknownFamily(g.to_string()));
            }
        }
        Ok(ExplicitRep { name: name.into(), group, n, k, dim, images, side_conditions })
    }

    pub fn substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> Result<Self> {
        let images =
            self.images.iter().map(|(g, m)| Ok((*g, m.substitute(map)?))).collect::<Result<BTreeMap<_, _>>>()?;
        ExplicitRep::new(
            self.name.clone(),
            self.group,
            self.n,
            self.k,
            images,
            substitute_all(&self.side_conditions, map)?,
        )
    }

    pub fn to_json(&self) -> ExplicitJson {
        ExplicitJson {
            name: self.name.clone(),
            group: self.group,
            n: self.n,
            k: self.k,
            dim: self.dim,
            images: self.images.iter().map(|(g, m)| (g.to_string(), m.to_json())).collect(),
            side_conditions: self.side_conditions.iter().map(|c| format!("{c} != 0")).collect(),
        }
    }

    pub fn from_json(j: &ExplicitJson) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (g, m) in &j.images {
            let w: Word = g.parse()?;
            let [l] = w.letters() else {
                return Err(LocalRepError::UnknownFamily(g.clone()));
            };
            if l.exp != 1 {
                return Err(LocalRepError::UnknownFamily(g.clone()));
            }
            images.insert(l.gen, RfMatrix::from_json(m)?);
        }
        let conds = j
            .side_conditions
            .iter()
            .map(|s| RationalFunction::parse(s.trim_end_matches("!= 0").trim()))
            .collect::<Result<Vec<_>, _>>()?;
        ExplicitRep::new(j.name.clone(), j.group, j.n, j.k, images, conds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitJson {
    pub name: String,
    pub group: Group,
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    pub images: BTreeMap<String, MatrixJson>,
    #[serde(default)]
    pub side_conditions: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Rep {
    Local(LocalRepSpec),
    Explicit(ExplicitRep),
}

impl From<LocalRepSpec> for Rep {
    fn from(s: LocalRepSpec) -> Self {
        Rep::Local(s)
    }
}

impl From<ExplicitRep> for Rep {
    fn from(e: ExplicitRep) -> Self {
        Rep::Explicit(e)
    }
}

impl Rep {
    pub fn name(&self) -> &str {
        match self {
            Rep::Local(s) => &s.name,
            Rep::Explicit(e) => &e.name,
        }
    }

    pub fn group(&self) -> Group {
        match self {
            Rep::Local(s) => s.group,
            Rep::Explicit(e) => e.group,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Rep::Local(s) => s.n,
            Rep::Explicit(e) => e.n,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Rep::Local(s) => s.k,
            Rep::Explicit(e) => e.k,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Rep::Local(s) => s.dim(),
            Rep::Explicit(e) => e.dim,
        }
    }

    pub fn side_conditions(&self) -> &[RationalFunction] {
        match self {
            Rep::Local(s) => &s.side_conditions,
            Rep::Explicit(e) => &e.side_conditions,
        }
    }

    pub fn image(&self, g: &Generator) -> Result<RfMatrix> {
        match self {
            Rep::Local(s) => s.rep_image(g),
            Rep::Explicit(e) => e.images.get(g).cloned().ok_or_else(|| LocalRepError::UnknownFamily(g.to_string())),
        }
    }

    /// Every generator with an image, in generator order.
    pub fn generators(&self) -> Vec<Generator> {
        match self {
            Rep::Local(s) => {
                let mut out: Vec<Generator> = (1..s.n as u32).map(Generator::sigma).collect();
                for a in 0..s.k as u32 {
                    out.extend((1..s.n as u32).map(|i| Generator::rho(i, a)));
                }
                out
            }
            Rep::Explicit(e) => e.images.keys().copied().collect(),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<Variable, RationalFunction>) -> Result<Self> {
        Ok(match self {
            Rep::Local(s) => Rep::Local(s.substitute(map)?),
            Rep::Explicit(e) => Rep::Explicit(e.substitute(map)?),
        })
    }

    /// Every parameter appearing in an image.
    pub fn parameters(&self) -> Vec<String> {
        match self {
            Rep::Local(s) => s.parameters(),
            Rep::Explicit(e) => {
                let mut vs = std::collections::BTreeSet::new();
                for m in e.images.values() {
                    vs.extend(m.vars());
                }
                vs.iter().map(|v| v.name().to_string()).collect()
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Rep::Local(s) => serde_json::to_value(s.to_json()),
            Rep::Explicit(e) => serde_json::to_value(e.to_json()),
        }
        .expect("serializable")
    }
}

/// How one generator acts when a word image is built by right
/// multiplication.
#[derive(Clone, Debug)]
enum Action {
    /// Block at 0-based offset.
    Block {
        at: usize,
        fwd: RfMatrix,
        inv: RfMatrix,
    },
    Dense {
        fwd: RfMatrix,
        inv: RfMatrix,
    },
}

/// Cached generator images and their inverses.
#[derive(Clone, Debug)]
pub struct ImageTable {
    dim: usize,
    actions: BTreeMap<Generator, Action>,
}

impl ImageTable {
    pub fn new(rep: &Rep, gens: &[Generator]) -> Result<Self> {
        let mut actions = BTreeMap::new();
        for g in gens {
            let act = match rep {
                Rep::Local(s) => {
                    let fwd = s.block(g.family).ok_or_else(|| LocalRepError::UnknownFamily(g.to_string()))?;
                    if g.index == 0 || g.index as usize >= s.n {
                        return Err(LocalRepError::IndexOutOfRange { i: g.index as usize, n: s.n });
                    }
                    let inv = fwd.inverse().ok_or_else(|| LocalRepError::Singular(g.to_string()))?;
                    Action::Block { at: g.index as usize - 1, fwd: fwd.clone(), inv }
                }
                Rep::Explicit(_) => {
                    let fwd = rep.image(g)?;
                    let inv = fwd.inverse().ok_or_else(|| LocalRepError::Singular(g.to_string()))?;
                    Action::Dense { fwd, inv }
                }
            };
            actions.insert(*g, act);
        }
        Ok(ImageTable { dim: rep.dim(), actions })
    }

    pub fn for_presentation(rep: &Rep, pres: &Presentation) -> Result<Self> {
        if rep.n() != pres.n {
            return Err(LocalRepError::DimensionMismatch(format!(
                "representation on {} strands, presentation on {}",
                rep.n(),
                pres.n
            )));
        }
        Self::new(rep, &pres.generators())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_image(&self, g: &Generator, exp: i8) -> Result<RfMatrix> {
        let act = self.actions.get(g).ok_or_else(|| LocalRepError::UnknownFamily(g.to_string()))?;
        Ok(match act {
            Action::Block { at, fwd, inv } => embed_block(if exp > 0 { fwd } else { inv }, at + 1, self.dim)?,
            Action::Dense { fwd, inv } => {
                if exp > 0 {
                    fwd.clone()
                } else {
                    inv.clone()
                }
            }
        })
    }

    /// Image of `w`: the product of letter images, left to right.
    pub fn word_image(&self, w: &Word) -> Result<RfMatrix> {
        let mut acc = RfMatrix::identity(self.dim);
        for l in w.letters() {
            let act = self.actions.get(&l.gen).ok_or_else(|| LocalRepError::UnknownFamily(l.gen.to_string()))?;
            acc = match act {
                Action::Block { at, fwd, inv } => right_mul_block(&acc, if l.exp > 0 { fwd } else { inv }, *at),
                Action::Dense { fwd, inv } => acc.mul(if l.exp > 0 { fwd } else { inv }),
            };
        }
        Ok(acc)
    }
}

/// `m · embed(b, at)` touching only the block's columns.
fn right_mul_block(m: &RfMatrix, b: &RfMatrix, at: usize) -> RfMatrix {
    let w = b.rows();
    let mut out = m.clone();
    for r in 0..m.rows() {
        let row: Vec<&RationalFunction> = (0..w).map(|l| m.get(r, at + l)).collect();
        if row.iter().all(|e| e.is_zero()) {
            continue;
        }
        for j in 0..w {
            let mut acc = RationalFunction::zero();
            for (l, e) in row.iter().enumerate() {
                let bj = b.get(l, j);
                if !e.is_zero() && !Scalar::is_zero(bj) {
                    acc = &acc + &(*e * bj);
                }
            }
            out.set(r, at + j, acc);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub tag: String,
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub representation: String,
    pub presentation: String,
    pub n: usize,
    pub k: usize,
    pub pass: bool,
    pub checked: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<RelationCheck>,
    pub side_conditions: Vec<String>,
    pub relations: Vec<RelationCheck>,
}

/// Whether each relation holds identically under the representation.
pub fn check_relations(table: &ImageTable, relations: &[Relation]) -> Result<Vec<RelationCheck>> {
    let results = par::map(relations, |r| -> Result<RelationCheck> {
        let holds = table.word_image(&r.lhs)? == table.word_image(&r.rhs)?;
        Ok(RelationCheck { tag: r.tag.to_string(), relation: r.to_string(), holds })
    });
    results.into_iter().collect()
}

pub fn verify_representation(rep: &Rep, pres: &Presentation) -> Result<VerificationReport> {
    let table = ImageTable::for_presentation(rep, pres)?;
    let relations = check_relations(&table, &pres.relations)?;
    Ok(report(rep, pres, relations))
}

pub(crate) fn report(rep: &Rep, pres: &Presentation, relations: Vec<RelationCheck>) -> VerificationReport {
    let failed = relations.iter().filter(|r| !r.holds).count();
    VerificationReport {
        representation: rep.name().to_string(),
        presentation: pres.label(),
        n: pres.n,
        k: pres.k,
        pass: failed == 0,
        checked: relations.len(),
        failed,
        first_failure: relations.iter().find(|r| !r.holds).cloned(),
        side_conditions: rep.side_conditions().iter().map(|c| format!("{c} != 0")).collect(),
        relations,
    }
}

fn substitute_all(
    list: &[RationalFunction],
    map: &BTreeMap<Variable, RationalFunction>,
) -> Result<Vec<RationalFunction>> {
    list.iter().map(|c| Ok(c.substitute(map)?)).collect()
}

fn nonzero_set(list: &[&str]) -> Vec<RationalFunction> {
    list.iter().map(|s| rf(s)).collect()
}

impl CatalogFamily {
    /// The family as a spec on `n` strands with symbolic parameters
    /// `b, c, d, x0, x1, ...`.
    pub fn spec(&self, n: usize, k: usize) -> Result<LocalRepSpec> {
        self.validate()?;
        if let Some(kk) = self.k() {
            if kk != k {
                return Err(LocalRepError::InvalidChoice(format!("{self} has k = {kk}, requested k = {k}")));
            }
        }
        if k < 1 {
            return Err(LocalRepError::InvalidChoice("k must be at least 1".into()));
        }
        let id = RfMatrix::identity(2);
        let xa = |a: usize| RationalFunction::var(&format!("x{a}"));
        let mut conds = Vec::new();
        let (sigma, rho) = match self {
            CatalogFamily::Trivial(_) => (id.clone(), vec![id.clone(); k]),
            CatalogFamily::Mvb { s, x } => {
                let sigma = match s {
                    SChoice::Identity => id.clone(),
                    SChoice::Burau => {
                        conds.extend(nonzero_set(&["b*c"]));
                        block([["1 - b*c", "b"], ["c", "0"]])
                    }
                    SChoice::Anti => {
                        conds.extend(nonzero_set(&["b*c"]));
                        block([["0", "b"], ["c", "0"]])
                    }
                    SChoice::DType => {
                        conds.extend(nonzero_set(&["c", "d - 1"]));
                        block([["0", "(1 - d)/c"], ["c", "d"]])
                    }
                };
                conds.push(xa(0));
                let mut rho = vec![swap_block(&xa(0))];
                for (i, c) in x.iter().enumerate() {
                    rho.push(match c {
                        XChoice::Identity => id.clone(),
                        _ => {
                            conds.push(xa(i + 1));
                            swap_block(&xa(i + 1))
                        }
                    });
                }
                (sigma, rho)
            }
            CatalogFamily::Mwb { a, y } => {
                let sigma = match a {
                    AChoice::Burau => {
                        conds.extend(nonzero_set(&["b*c"]));
                        block([["1 - b*c", "b"], ["c", "0"]])
                    }
                    AChoice::Anti => {
                        conds.extend(nonzero_set(&["b*c"]));
                        block([["0", "b"], ["c", "0"]])
                    }
                    AChoice::BType => {
                        conds.extend(nonzero_set(&["b", "d - 1"]));
                        block([["0", "b"], ["(1 - d)/b", "d"]])
                    }
                };
                let b = RationalFunction::var("b");
                let rho = y
                    .iter()
                    .enumerate()
                    .map(|(i, c)| match c {
                        XChoice::Identity => id.clone(),
                        XChoice::Swap => {
                            conds.push(xa(i));
                            swap_block(&xa(i))
                        }
                        XChoice::SwapB => {
                            conds.push(b.clone());
                            swap_block(&b)
                        }
                    })
                    .collect();
                (sigma, rho)
            }
        };
        let name = self.alias().unwrap_or_else(|| self.to_string());
        let mut spec = LocalRepSpec::new(name, self.group(), n, sigma, rho, conds)?;
        spec.family = Some(self.clone());
        Ok(spec)
    }
}

/// Names accepted by [`builtin_catalog`] besides the `mvb(..)`/`mwb(..)`
/// descriptors.
pub const CATALOG_NAMES: &[&str] = &[
    "burau", "f_rep", "bn_beta1", "bn_beta2", "bn_beta3", "beta1", "beta2", "beta3", "beta4", "beta5", "beta6",
    "beta7", "beta8", "beta9", "zeta1", "zeta2", "zeta3", "zeta4", "zeta5", "zeta6", "zeta7",
];

/// A named representation on `n` strands; `k` is the number of virtual
/// families for the multi-virtual and multi-welded families.
pub fn builtin_catalog(name: &str, n: usize, k: usize) -> Result<Rep> {
    let bn = |name: &str, blk: RfMatrix, conds: &[&str]| -> Result<Rep> {
        Ok(Rep::Local(LocalRepSpec::new(name, Group::B, n, blk, vec![], nonzero_set(conds))?))
    };
    match name {
        "burau" => bn(name, block([["1 - t", "t"], ["1", "0"]]), &["t"]),
        "f_rep" => {
            let m = RfMatrix::parse_rows(&[&["1", "1", "0"], &["0", "-t", "0"], &["0", "t", "1"]])?;
            bn(name, m, &["t"])
        }
        "bn_beta1" => bn(name, block([["a", "(1 - a)/c"], ["c", "0"]]), &["c", "a - 1"]),
        "bn_beta2" => bn(name, block([["0", "(1 - d)/c"], ["c", "d"]]), &["c", "d - 1"]),
        "bn_beta3" => bn(name, block([["0", "b"], ["c", "0"]]), &["b*c"]),
        _ if name.starts_with("beta") || name.starts_with("zeta") => {
            if k < 2 {
                return Err(LocalRepError::InvalidChoice(format!("{name} needs k >= 2")));
            }
            let fam = CatalogFamily::from_alias(name, k).ok_or_else(|| LocalRepError::UnknownName(name.into()))?;
            Ok(Rep::Local(fam.spec(n, k)?))
        }
        _ if name.starts_with("mvb(") || name.starts_with("mwb(") => {
            let fam: CatalogFamily = name.parse()?;
            let k = fam.k().unwrap_or(k);
            Ok(Rep::Local(fam.spec(n, k)?))
        }
        _ => Err(LocalRepError::UnknownName(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::build_presentation;

    #[test]
    fn embed_examples() {
        let x = RationalFunction::var("x");
        let m = embed_block(&swap_block(&x), 1, 3).unwrap();
        assert_eq!(m, RfMatrix::parse_rows(&[&["0", "x", "0"], &["1/x", "0", "0"], &["0", "0", "1"]]).unwrap());
        assert!(embed_block(&RfMatrix::identity(2), 2, 4).unwrap().is_identity());
        assert!(embed_block(&RfMatrix::identity(2), 3, 3).is_err());
    }

    #[test]
    fn aliases_round_trip() {
        for k in 2..=4 {
            let all = CatalogFamily::mvb_all(k);
            assert_eq!(all.len(), (1 << (k + 1)) + 1);
            let all = CatalogFamily::mwb_all(k);
            assert_eq!(all.len(), 3 * (1 << (k - 1)) + 1);
        }
        let b7 = CatalogFamily::from_alias("beta7", 2).unwrap();
        assert_eq!(b7.to_string(), "mvb(anti;swap)");
        let z2 = CatalogFamily::from_alias("zeta2", 2).unwrap();
        assert_eq!(z2.to_string(), "mwb(burau;swapb,id)");
        assert_eq!("mwb(anti;swap,swap)".parse::<CatalogFamily>().unwrap().alias().unwrap(), "zeta6");
        assert!("mwb(burau;swap,id)".parse::<CatalogFamily>().is_err());
    }

    #[test]
    fn beta7_image() {
        let Rep::Local(s) = builtin_catalog("beta7", 3, 2).unwrap() else { panic!() };
        let m = s.rep_image(&Generator::sigma(1)).unwrap();
        assert_eq!(m, embed_block(&block([["0", "b"], ["c", "0"]]), 1, 3).unwrap());
    }

    #[test]
    fn burau_on_b4() {
        let p = build_presentation(Group::B, 4, 0).unwrap();
        let rep = builtin_catalog("burau", 4, 0).unwrap();
        assert!(verify_representation(&rep, &p).unwrap().pass);
    }

    #[test]
    fn m2vb3_families_pass() {
        let p = build_presentation(Group::MkVB, 3, 2).unwrap();
        for j in 1..=9 {
            let rep = builtin_catalog(&format!("beta{j}"), 3, 2).unwrap();
            let r = verify_representation(&rep, &p).unwrap();
            assert!(r.pass, "beta{j}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn bad_spec_reports_failure() {
        let p = build_presentation(Group::MkVB, 3, 2).unwrap();
        let one = RationalFunction::one();
        let spec = LocalRepSpec::new(
            "bad",
            Group::MkVB,
            3,
            block([["1", "1"], ["0", "1"]]),
            vec![swap_block(&one), swap_block(&one)],
            vec![],
        )
        .unwrap();
        let r = verify_representation(&Rep::Local(spec), &p).unwrap();
        assert!(!r.pass);
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn inverse_images_match() {
        let rep = builtin_catalog("zeta4", 4, 2).unwrap();
        let gens = rep.generators();
        let t = ImageTable::new(&rep, &gens).unwrap();
        for g in gens {
            let m = rep.image(&g).unwrap();
            assert_eq!(t.generator_image(&g, -1).unwrap(), m.inverse().unwrap());
        }
    }
}
