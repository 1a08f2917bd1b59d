//! Generators, words and instantiated relation lists for the braid-type
//! groups B, VB, MkVB, MkWB and MkUB, together with permutation and sign
//! quotients used to certify that words are nontrivial.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid size: n = {n}, k = {k} (need n >= 2 and k >= 1)")]
    InvalidSize { n: usize, k: usize },
    #[error("quotient {quotient} is not a homomorphism: relation {relation} [{tag}] fails")]
    InvalidQuotient { quotient: String, relation: String, tag: String },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("generator {gen} is out of range for n = {n}, k = {k}")]
    GeneratorOutOfRange { gen: String, n: usize, k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Sigma,
    Rho(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    /// 1-based strand index.
    pub index: u32,
}

impl Generator {
    pub const fn sigma(index: u32) -> Self {
        Generator { family: Family::Sigma, index }
    }

    pub const fn rho(index: u32, alpha: u32) -> Self {
        Generator { family: Family::Rho(alpha), index }
    }

    pub fn is_valid(&self, n: usize, k: usize) -> bool {
        let idx_ok = self.index >= 1 && (self.index as usize) < n;
        match self.family {
            Family::Sigma => idx_ok,
            Family::Rho(a) => idx_ok && (a as usize) < k,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sigma => write!(f, "s{}", self.index),
            Family::Rho(a) => write!(f, "r{}^{a}", self.index),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Generator,
    /// +1 or -1.
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, exp: -self.exp }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp < 0 {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: Generator) -> Self {
        Word(vec![Letter { gen: g, exp: 1 }])
    }

    pub fn inv_gen(g: Generator) -> Self {
        Word(vec![Letter { gen: g, exp: -1 }])
    }

    /// Product of generators taken with exponent +1.
    pub fn of(gens: &[Generator]) -> Self {
        Self::from_letters(gens.iter().map(|&g| Letter { gen: g, exp: 1 }))
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|p| p.gen == l.gen && p.exp == -l.exp) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_valid(&self, n: usize, k: usize) -> bool {
        self.0.iter().all(|l| l.gen.is_valid(n, k))
    }
}

pub fn word_multiply(u: &Word, v: &Word) -> Word {
    Word::from_letters(u.0.iter().chain(v.0.iter()).copied())
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        word_multiply(self, rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = PresentationError;

    /// Parses `"s1 r1^0^-1 s2^-1"`; `"e"` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PresentationError::Parse(s.to_string());
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (head, exp) = match tok.strip_suffix("^-1") {
                Some(h) if h.starts_with('s') || h.matches('^').count() == 1 => (h, -1),
                _ => (tok, 1),
            };
            let gen = if let Some(rest) = head.strip_prefix('s') {
                Generator::sigma(rest.parse().map_err(|_| bad())?)
            } else if let Some(rest) = head.strip_prefix('r') {
                let (i, a) = rest.split_once('^').ok_or_else(bad)?;
                Generator::rho(i.parse().map_err(|_| bad())?, a.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            };
            letters.push(Letter { gen, exp });
        }
        Ok(Word::from_letters(letters))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
    pub tag: &'static str,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    B,
    VB,
    MkVB,
    MkWB,
    MkUB,
}

impl Group {
    pub fn name(&self) -> &'static str {
        match self {
            Group::B => "B",
            Group::VB => "VB",
            Group::MkVB => "MkVB",
            Group::MkWB => "MkWB",
            Group::MkUB => "MkUB",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(Group::B),
            "vb" => Ok(Group::VB),
            "mvb" | "mkvb" => Ok(Group::MkVB),
            "mwb" | "mkwb" | "wb" => Ok(Group::MkWB),
            "mub" | "mkub" | "ub" => Ok(Group::MkUB),
            _ => Err(PresentationError::Parse(s.to_string())),
        }
    }
}

pub struct Presentation {
    pub group: Group,
    pub n: usize,
    /// Number of virtual generator families; 0 for B and 1 for VB.
    pub k: usize,
    pub relations: Vec<Relation>,
    pub forbidden: Vec<Relation>,
    quotient_cache: RwLock<BTreeMap<QuotientSpec, Result<(), PresentationError>>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            group: self.group,
            n: self.n,
            k: self.k,
            relations: self.relations.clone(),
            forbidden: self.forbidden.clone(),
            quotient_cache: RwLock::new(self.quotient_cache.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("group", &self.group)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("relations", &self.relations.len())
            .field("forbidden", &self.forbidden.len())
            .finish()
    }
}

fn s(i: usize) -> Generator {
    Generator::sigma(i as u32)
}

fn r(i: usize, a: usize) -> Generator {
    Generator::rho(i as u32, a as u32)
}

fn rel(lhs: &[Generator], rhs: &[Generator], tag: &'static str) -> Relation {
    Relation { lhs: Word::of(lhs), rhs: Word::of(rhs), tag }
}

fn braid_relations(n: usize, out: &mut Vec<Relation>) {
    for i in 1..n.saturating_sub(1) {
        out.push(rel(&[s(i), s(i + 1), s(i)], &[s(i + 1), s(i), s(i + 1)], "braid"));
    }
    for i in 1..n {
        for j in i + 2..n {
            out.push(rel(&[s(i), s(j)], &[s(j), s(i)], "far-commute"));
        }
    }
}

fn multi_virtual_relations(n: usize, k: usize, out: &mut Vec<Relation>) {
    for i in 1..n.saturating_sub(1) {
        out.push(rel(&[s(i), s(i + 1), s(i)], &[s(i + 1), s(i), s(i + 1)], "braid"));
    }
    for i in 1..n {
        for j in i + 2..n {
            out.push(rel(&[s(i), s(j)], &[s(j), s(i)], "far-commute"));
        }
    }
    for a in 0..k {
        for i in 1..n {
            out.push(Relation { lhs: Word::of(&[r(i, a), r(i, a)]), rhs: Word::identity(), tag: "rho-involution" });
        }
    }
    for a in 0..k {
        for i in 1..n {
            for j in i + 2..n {
                out.push(rel(&[r(i, a), r(j, a)], &[r(j, a), r(i, a)], "rho-far-commute"));
            }
        }
    }
    for a in 0..k {
        for i in 1..n.saturating_sub(1) {
            out.push(rel(&[r(i, a), r(i + 1, a), r(i, a)], &[r(i + 1, a), r(i, a), r(i + 1, a)], "rho-braid"));
        }
    }
    for a in 0..k {
        for i in 1..n {
            for j in 1..n {
                if i.abs_diff(j) >= 2 {
                    out.push(rel(&[s(i), r(j, a)], &[r(j, a), s(i)], "mixed-far-commute"));
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            for i in 1..n {
                for j in i + 2..n {
                    out.push(rel(&[r(i, a), r(j, b)], &[r(j, b), r(i, a)], "rho-families-commute"));
                }
            }
        }
    }
    for i in 1..n.saturating_sub(1) {
        out.push(rel(&[s(i), r(i + 1, 0), r(i, 0)], &[r(i + 1, 0), r(i, 0), s(i + 1)], "mixed-detour"));
    }
    for b in 1..k {
        for i in 1..n.saturating_sub(1) {
            out.push(rel(&[r(i, 0), r(i + 1, 0), r(i, b)], &[r(i + 1, b), r(i, 0), r(i + 1, 0)], "family-detour"));
        }
    }
}

fn virtual_relations(n: usize, out: &mut Vec<Relation>) {
    braid_relations(n, out);
    for i in 1..n {
        out.push(Relation { lhs: Word::of(&[r(i, 0), r(i, 0)]), rhs: Word::identity(), tag: "rho-involution" });
    }
    for i in 1..n {
        for j in i + 2..n {
            out.push(rel(&[r(i, 0), r(j, 0)], &[r(j, 0), r(i, 0)], "rho-far-commute"));
        }
    }
    for i in 1..n.saturating_sub(1) {
        out.push(rel(&[r(i, 0), r(i + 1, 0), r(i, 0)], &[r(i + 1, 0), r(i, 0), r(i + 1, 0)], "rho-braid"));
    }
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) >= 2 {
                out.push(rel(&[s(i), r(j, 0)], &[r(j, 0), s(i)], "mixed-far-commute"));
            }
        }
    }
    for i in 1..n.saturating_sub(1) {
        out.push(rel(&[r(i, 0), r(i + 1, 0), s(i)], &[s(i + 1), r(i, 0), r(i + 1, 0)], "mixed-detour"));
    }
}

fn f1(n: usize, k: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for a in 0..k {
        for i in 1..n.saturating_sub(1) {
            out.push(rel(&[s(i), s(i + 1), r(i, a)], &[r(i + 1, a), s(i), s(i + 1)], "F1"));
        }
    }
    out
}

fn f2(n: usize, k: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for a in 0..k {
        for i in 1..n.saturating_sub(1) {
            out.push(rel(&[s(i + 1), s(i), r(i + 1, a)], &[r(i, a), s(i + 1), s(i)], "F2"));
        }
    }
    out
}

fn f3(n: usize, k: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        for b in 1..k {
            out.push(rel(&[r(i, 0), r(i + 1, b), r(i, b)], &[r(i + 1, b), r(i, b), r(i + 1, 0)], "F3"));
        }
        for b in 1..k {
            for g in 1..b {
                out.push(rel(&[r(i, g), r(i + 1, b), r(i, b)], &[r(i + 1, b), r(i, b), r(i + 1, g)], "F3b"));
            }
        }
        for b in 1..k {
            for g in 1..b {
                out.push(rel(&[r(i, g), r(i + 1, g), r(i, b)], &[r(i + 1, b), r(i, g), r(i + 1, g)], "F3c"));
            }
        }
    }
    out
}

/// Builds the full instantiated presentation. `k` is the number of virtual
/// families and is ignored for `B` and `VB`.
pub fn build_presentation(group: Group, n: usize, k: usize) -> Result<Presentation, PresentationError> {
    let kk = match group {
        Group::B => 0,
        Group::VB => 1,
        _ => k,
    };
    if n < 2 || (kk < 1 && group != Group::B) {
        return Err(PresentationError::InvalidSize { n, k });
    }
    let mut relations = Vec::new();
    let forbidden = match group {
        Group::B => {
            braid_relations(n, &mut relations);
            Vec::new()
        }
        Group::VB => {
            virtual_relations(n, &mut relations);
            [f1(n, 1), f2(n, 1)].concat()
        }
        Group::MkVB => {
            multi_virtual_relations(n, kk, &mut relations);
            [f1(n, kk), f2(n, kk), f3(n, kk)].concat()
        }
        Group::MkWB => {
            multi_virtual_relations(n, kk, &mut relations);
            relations.extend(f1(n, kk));
            [f2(n, kk), f3(n, kk)].concat()
        }
        Group::MkUB => {
            multi_virtual_relations(n, kk, &mut relations);
            relations.extend(f1(n, kk));
            relations.extend(f2(n, kk));
            f3(n, kk)
        }
    };
    Ok(Presentation { group, n, k: kk, relations, forbidden, quotient_cache: RwLock::new(BTreeMap::new()) })
}

impl Presentation {
    pub fn generators(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = (1..self.n).map(s).collect();
        for a in 0..self.k {
            out.extend((1..self.n).map(|i| r(i, a)));
        }
        out
    }

    pub fn label(&self) -> String {
        match self.group {
            Group::B | Group::VB => format!("{}_{}", self.group, self.n),
            g => format!("{}_{} (k={})", g, self.n, self.k),
        }
    }

    /// Checks once that every relation maps to the identity under `q`.
    pub fn check_quotient(&self, q: &QuotientSpec) -> Result<(), PresentationError> {
        if let Some(r) = self.quotient_cache.read().unwrap().get(q) {
            return r.clone();
        }
        let res = self
            .relations
            .iter()
            .find(|rel| q.eval_unchecked(&rel.lhs, self.n) != q.eval_unchecked(&rel.rhs, self.n))
            .map_or(Ok(()), |rel| {
                Err(PresentationError::InvalidQuotient {
                    quotient: q.to_string(),
                    relation: rel.to_string(),
                    tag: rel.tag.to_string(),
                })
            });
        self.quotient_cache.write().unwrap().entry(q.clone()).or_insert(res).clone()
    }

    /// Whitelisted quotients in a fixed order, valid or not.
    pub fn quotient_whitelist(&self) -> Vec<QuotientSpec> {
        let mut out = vec![
            QuotientSpec::PermAll,
            QuotientSpec::PermRhoOnly,
            QuotientSpec::PermSigmaOnly,
            QuotientSpec::SignSigma,
        ];
        // families 1..k-1 sent to the identity or not; family 0 always kept
        let fams = (1u32 << self.k.saturating_sub(1)) * u32::from(self.k > 0);
        for mask in 0..fams {
            if mask == (1 << (self.k - 1)) - 1 {
                continue;
            }
            let kept: Vec<u32> =
                std::iter::once(0).chain((1..self.k as u32).filter(|b| mask >> (b - 1) & 1 == 1)).collect();
            out.push(QuotientSpec::PermSelect(kept));
        }
        out
    }

    pub fn valid_quotients(&self) -> Vec<QuotientSpec> {
        self.quotient_whitelist().into_iter().filter(|q| self.check_quotient(q).is_ok()).collect()
    }

    pub fn to_json(&self) -> PresentationJson {
        let entry = |r: &Relation| RelationJson { tag: r.tag.to_string(), relation: r.to_string() };
        PresentationJson {
            group: self.group,
            n: self.n,
            k: self.k,
            generators: self.generators().iter().map(ToString::to_string).collect(),
            relations: self.relations.iter().map(entry).collect(),
            forbidden: self.forbidden.iter().map(entry).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub tag: String,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub group: Group,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<String>,
    pub relations: Vec<RelationJson>,
    pub forbidden: Vec<RelationJson>,
}

/// Maps from generators to a symmetric group or to {±1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuotientSpec {
    /// σ_i ↦ s_i, ρ_i^α ↦ s_i
    PermAll,
    /// σ_i ↦ e, ρ_i^α ↦ s_i
    PermRhoOnly,
    /// σ_i ↦ s_i, ρ_i^α ↦ e
    PermSigmaOnly,
    /// σ_i ↦ −1, ρ_i^α ↦ +1
    SignSigma,
    /// σ_i ↦ s_i, ρ_i^α ↦ s_i for the listed families and e for the others.
    PermSelect(Vec<u32>),
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::PermAll => f.write_str("PermAll"),
            QuotientSpec::PermRhoOnly => f.write_str("PermRhoOnly"),
            QuotientSpec::PermSigmaOnly => f.write_str("PermSigmaOnly"),
            QuotientSpec::SignSigma => f.write_str("SignSigma"),
            QuotientSpec::PermSelect(fams) => {
                let v: Vec<String> = fams.iter().map(ToString::to_string).collect();
                write!(f, "PermSelect{{{}}}", v.join(","))
            }
        }
    }
}

impl FromStr for QuotientSpec {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PermAll" => Ok(QuotientSpec::PermAll),
            "PermRhoOnly" => Ok(QuotientSpec::PermRhoOnly),
            "PermSigmaOnly" => Ok(QuotientSpec::PermSigmaOnly),
            "SignSigma" => Ok(QuotientSpec::SignSigma),
            _ => {
                let inner = s
                    .strip_prefix("PermSelect{")
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(|| PresentationError::Parse(s.to_string()))?;
                let fams = inner
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.trim().parse::<u32>().map_err(|_| PresentationError::Parse(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(QuotientSpec::PermSelect(fams))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuotientValue {
    /// Images of 1..n as a 0-based permutation.
    Perm(Vec<usize>),
    Sign(i8),
}

impl QuotientValue {
    pub fn is_identity(&self) -> bool {
        match self {
            QuotientValue::Perm(p) => p.iter().enumerate().all(|(i, &x)| i == x),
            QuotientValue::Sign(s) => *s == 1,
        }
    }
}

impl fmt::Display for QuotientValue {
    /// Cycle notation with 1-based points, `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientValue::Sign(s) => write!(f, "{s:+}"),
            QuotientValue::Perm(p) => {
                let mut seen = vec![false; p.len()];
                let mut any = false;
                for start in 0..p.len() {
                    if seen[start] || p[start] == start {
                        continue;
                    }
                    any = true;
                    let mut cyc = Vec::new();
                    let mut x = start;
                    while !seen[x] {
                        seen[x] = true;
                        cyc.push((x + 1).to_string());
                        x = p[x];
                    }
                    write!(f, "({})", cyc.join(" "))?;
                }
                if !any {
                    f.write_str("e")?;
                }
                Ok(())
            }
        }
    }
}

impl QuotientSpec {
    fn maps_to_transposition(&self, g: &Generator) -> bool {
        match (self, g.family) {
            (QuotientSpec::PermAll, _) => true,
            (QuotientSpec::PermRhoOnly, fam) => fam != Family::Sigma,
            (QuotientSpec::PermSigmaOnly, fam) => fam == Family::Sigma,
            (QuotientSpec::PermSelect(fams), Family::Rho(a)) => fams.contains(&a),
            (QuotientSpec::PermSelect(_), Family::Sigma) => true,
            (QuotientSpec::SignSigma, _) => false,
        }
    }

    /// Image of `w` on `n` points, without checking that the quotient is a
    /// homomorphism on any presentation.
    pub fn eval_unchecked(&self, w: &Word, n: usize) -> QuotientValue {
        if let QuotientSpec::SignSigma = self {
            let odd = w.letters().iter().filter(|l| l.gen.family == Family::Sigma).count() % 2 == 1;
            return QuotientValue::Sign(if odd { -1 } else { 1 });
        }
        // left-to-right product: apply each transposition to the positions
        let mut perm: Vec<usize> = (0..n).collect();
        for l in w.letters() {
            if self.maps_to_transposition(&l.gen) {
                let i = l.gen.index as usize - 1;
                // perm ∘ s_i: swap the images of i and i+1
                perm.swap(i, i + 1);
            }
        }
        QuotientValue::Perm(perm)
    }
}

/// Image of `w` in the quotient, after the quotient has been checked to be a
/// homomorphism on `pres`.
pub fn quotient_eval(
    w: &Word,
    quotient: &QuotientSpec,
    pres: &Presentation,
) -> Result<QuotientValue, PresentationError> {
    pres.check_quotient(quotient)?;
    Ok(quotient.eval_unchecked(w, pres.n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(p: &Presentation, tag: &str) -> usize {
        p.relations.iter().filter(|r| r.tag == tag).count()
    }

    #[test]
    fn mkvb_3_2_counts() {
        let p = build_presentation(Group::MkVB, 3, 2).unwrap();
        assert_eq!(p.relations.len(), 9);
        assert_eq!(count(&p, "braid"), 1);
        assert_eq!(count(&p, "rho-involution"), 4);
        assert_eq!(count(&p, "rho-braid"), 2);
        assert_eq!(count(&p, "mixed-detour"), 1);
        assert_eq!(count(&p, "family-detour"), 1);
    }

    #[test]
    fn b3_single_relation() {
        let p = build_presentation(Group::B, 3, 0).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].to_string(), "s1 s2 s1 = s2 s1 s2");
    }

    #[test]
    fn welded_adds_f1() {
        let v = build_presentation(Group::MkVB, 3, 2).unwrap();
        let w = build_presentation(Group::MkWB, 3, 2).unwrap();
        assert_eq!(w.relations.len(), v.relations.len() + 2);
        assert!(w.forbidden.iter().all(|r| r.tag != "F1"));
    }

    #[test]
    fn invalid_sizes() {
        assert!(build_presentation(Group::MkVB, 1, 2).is_err());
        assert!(build_presentation(Group::MkVB, 3, 0).is_err());
    }

    #[test]
    fn free_reduction() {
        let a = Word::gen(Generator::sigma(1));
        assert!(word_multiply(&a, &a.inverse()).is_empty());
        let r = Word::gen(Generator::rho(1, 0));
        assert_eq!(word_multiply(&r, &r).len(), 2);
        let w: Word = "s1 r1^0^-1 s2^-1".parse().unwrap();
        assert_eq!(w.to_string(), "s1 r1^0^-1 s2^-1");
        assert_eq!("e".parse::<Word>().unwrap(), Word::identity());
    }

    #[test]
    fn quotient_validity() {
        let v = build_presentation(Group::MkVB, 3, 2).unwrap();
        let w = build_presentation(Group::MkWB, 3, 2).unwrap();
        assert!(v.check_quotient(&QuotientSpec::PermRhoOnly).is_ok());
        assert!(v.check_quotient(&QuotientSpec::PermSigmaOnly).is_err());
        assert!(w.check_quotient(&QuotientSpec::PermRhoOnly).is_err());
        assert!(w.check_quotient(&QuotientSpec::SignSigma).is_ok());
        let x = quotient_eval(&"r1^1".parse().unwrap(), &QuotientSpec::PermAll, &v).unwrap();
        assert_eq!(x.to_string(), "(1 2)");
        let e = quotient_eval(&Word::identity(), &QuotientSpec::PermAll, &v).unwrap();
        assert!(e.is_identity());
    }
}
