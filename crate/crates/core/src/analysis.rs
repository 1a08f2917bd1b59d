//! Irreducibility and faithfulness checks: common fixed vectors, diagonal
//! conjugation, the Burnside span test at rational samples, and searches
//! for nontrivial words with identity image.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localrep::{check_relations, ExplicitRep, ImageTable, LocalRepError, LocalRepSpec, RelationCheck, Rep};
use crate::matrix::{QMatrix, RfMatrix};
use crate::par;
use crate::presentations::{Letter, Presentation, PresentationError, QuotientSpec, QuotientValue, Word};
use crate::symalg::{RationalFunction, SymError, Variable, Q};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("conjugator entry {0} is zero")]
    SingularConjugator(usize),
    #[error("conjugator has {got} entries, representation has dimension {dim}")]
    ConjugatorSize { got: usize, dim: usize },
    #[error("sample is outside the validity domain: {0}")]
    DenominatorVanishes(String),
    #[error("no admissible sample found for {0}")]
    NoSample(String),
    #[error(transparent)]
    LocalRep(#[from] LocalRepError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

pub type Result<T, E = AnalysisError> = std::result::Result<T, E>;

/// `diag(t_1, .., t_n)` with every entry nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalConjugator {
    entries: Vec<RationalFunction>,
}

impl DiagonalConjugator {
    pub fn new(entries: Vec<RationalFunction>) -> Result<Self> {
        if let Some(i) = entries.iter().position(RationalFunction::is_zero) {
            return Err(AnalysisError::SingularConjugator(i));
        }
        Ok(DiagonalConjugator { entries })
    }

    /// `diag(u^(1-n), u^(2-n), .., u, 1)`
    pub fn geometric(u: &RationalFunction, n: usize) -> Result<Self> {
        let entries = (0..n).map(|i| u.powi(i as i32 + 1 - n as i32)).collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn matrix(&self) -> RfMatrix {
        RfMatrix::diagonal(&self.entries)
    }

    /// The common ratio `t_{i+1} / t_i`, if there is one.
    fn ratio(&self) -> Option<RationalFunction> {
        let mut it = self.entries.windows(2).map(|w| &w[1] / &w[0]);
        let first = it.next()?;
        it.all(|r| r == first).then_some(first)
    }
}

/// `T^-1 M T` for every generator image. Homogeneous local specs stay local
/// when consecutive entries of `T` have a fixed ratio; otherwise the result
/// is an explicit representation.
pub fn conjugate(rep: &Rep, t: &DiagonalConjugator) -> Result<Rep> {
    if t.entries.len() != rep.dim() {
        return Err(AnalysisError::ConjugatorSize { got: t.entries.len(), dim: rep.dim() });
    }
    if let Rep::Local(spec) = rep {
        if let Some(u) = t.ratio() {
            return Ok(Rep::Local(conjugate_blocks(spec, &u)?));
        }
        if spec.dim() == 1 {
            return Ok(rep.clone());
        }
    }
    let inv: Vec<RationalFunction> = t.entries.iter().map(|e| e.inv()).collect::<Result<_, _>>()?;
    let mut images = BTreeMap::new();
    for g in rep.generators() {
        let m = rep.image(&g)?;
        let c = RfMatrix::from_rows(
            (0..m.rows()).map(|r| (0..m.cols()).map(|s| &(&inv[r] * m.get(r, s)) * &t.entries[s]).collect()).collect(),
        );
        images.insert(g, c);
    }
    let name = format!("{} (conjugated)", rep.name());
    Ok(Rep::Explicit(ExplicitRep::new(name, rep.group(), rep.n(), rep.k(), images, rep.side_conditions().to_vec())?))
}

/// Block entry `(r, s)` scales by `u^(s - r)`.
fn conjugate_blocks(spec: &LocalRepSpec, u: &RationalFunction) -> Result<LocalRepSpec> {
    let conj = |b: &RfMatrix| -> Result<RfMatrix> {
        let m = b.rows();
        let mut out = b.clone();
        for r in 0..m {
            for s in 0..m {
                if !b.get(r, s).is_zero() && r != s {
                    out.set(r, s, b.get(r, s) * &u.powi(s as i32 - r as i32)?);
                }
            }
        }
        Ok(out)
    };
    let mut out = LocalRepSpec::new(
        format!("{} (conjugated)", spec.name),
        spec.group,
        spec.n,
        conj(&spec.sigma)?,
        spec.rho.iter().map(conj).collect::<Result<_>>()?,
        spec.side_conditions.clone(),
    )?;
    out.family = spec.family.clone();
    Ok(out)
}

/// Stacks `M_g - I` (or its transpose) for every generator.
fn fixed_space_system(rep: &Rep, transpose: bool) -> Result<RfMatrix> {
    let dim = rep.dim();
    let id = RfMatrix::identity(dim);
    let mut rows = Vec::new();
    for g in rep.generators() {
        let m = rep.image(&g)?;
        let m = if transpose { m.transpose() } else { m };
        let d = m.sub(&id);
        rows.extend((0..dim).map(|r| d.row(r).to_vec()));
    }
    Ok(RfMatrix::from_rows(rows))
}

/// Scales so that the last nonzero entry is 1.
fn normalize(mut v: Vec<RationalFunction>) -> Vec<RationalFunction> {
    if let Some(last) = v.iter().rev().find(|e| !e.is_zero()).cloned() {
        let inv = last.inv().expect("nonzero");
        for e in &mut v {
            *e = &*e * &inv;
        }
    }
    v
}

/// A nonzero vector fixed by every generator image, over the parameter
/// field. Found by solving the stacked system exactly, so `None` means there
/// is no common fixed vector for generic parameters. It does not rule out
/// other invariant subspaces.
pub fn find_invariant_vector(rep: &Rep) -> Result<Option<Vec<RationalFunction>>> {
    Ok(fixed_space_system(rep, false)?.kernel().into_iter().next().map(normalize))
}

/// A nonzero row vector `w` with `w M_g = w` for every generator; its
/// kernel is an invariant hyperplane.
pub fn find_invariant_covector(rep: &Rep) -> Result<Option<Vec<RationalFunction>>> {
    Ok(fixed_space_system(rep, true)?.kernel().into_iter().next().map(normalize))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Burnside {
    Irreducible {
        dimension: usize,
    },
    /// Basis of a proper invariant subspace, as column vectors.
    Reducible {
        dimension: usize,
        subspace: Vec<Vec<String>>,
    },
    Inconclusive {
        dimension: usize,
    },
}

impl Burnside {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Burnside::Irreducible { .. })
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Burnside::Reducible { .. })
    }

    pub fn algebra_dimension(&self) -> usize {
        match self {
            Burnside::Irreducible { dimension }
            | Burnside::Reducible { dimension, .. }
            | Burnside::Inconclusive { dimension } => *dimension,
        }
    }
}

/// Incremental row echelon basis over Q.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the basis.
    fn insert(&mut self, v: Vec<Q>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].recip();
        for x in &mut v {
            *x *= &inv;
        }
        for (_, r) in &mut self.rows {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

fn evaluate_images(rep: &Rep, sample: &BTreeMap<Variable, Q>) -> Result<Vec<QMatrix>> {
    for c in rep.side_conditions() {
        match c.eval(sample) {
            Ok(v) if !v.is_zero() => {}
            _ => return Err(AnalysisError::DenominatorVanishes(format!("{c} vanishes"))),
        }
    }
    rep.generators()
        .iter()
        .map(|g| rep.image(g)?.eval(sample).map_err(|e| AnalysisError::DenominatorVanishes(e.to_string())))
        .collect()
}

/// Basis of the algebra spanned by all products of `gens`, identity
/// included.
fn algebra_basis(gens: &[QMatrix], dim: usize) -> Vec<QMatrix> {
    let mut ech = Echelon::default();
    let id = QMatrix::identity(dim);
    ech.insert(id.entries().to_vec());
    let mut basis = vec![id];
    let mut next = 0;
    while next < basis.len() && basis.len() < dim * dim {
        let a = basis[next].clone();
        next += 1;
        for g in gens {
            let b = a.mul(g);
            if ech.insert(b.entries().to_vec()) {
                basis.push(b);
                if basis.len() == dim * dim {
                    break;
                }
            }
        }
    }
    basis
}

/// `span { B v : B in basis }`
fn orbit_span(basis: &[QMatrix], v: &[Q]) -> Vec<Vec<Q>> {
    let mut ech = Echelon::default();
    let mut out = Vec::new();
    for b in basis {
        let w = b.mul_vec(v);
        if ech.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Characteristic polynomial coefficients `c_0 .. c_n` (monic) by
/// Faddeev-LeVerrier.
fn char_poly(a: &QMatrix) -> Vec<Q> {
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = QMatrix::zeros(n, n);
    let id = QMatrix::identity(n);
    for k in 1..=n {
        m = a.mul(&m).add(&id.scale(&c[n - k + 1]));
        let am = a.mul(&m);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + am.get(i, i));
        c[n - k] = -tr / Q::from_integer(BigInt::from(k));
    }
    c
}

fn rational_roots(c: &[Q]) -> Vec<Q> {
    let lam = Variable::new("lambda_");
    let p = c.iter().enumerate().fold(crate::symalg::Polynomial::zero(), |acc, (i, ci)| {
        &acc + &crate::symalg::Polynomial::term(ci.clone(), crate::symalg::Monomial::var_pow(lam.clone(), i as i32))
    });
    if p.is_zero() {
        return Vec::new();
    }
    let f = crate::symalg::factor_shallow(&p);
    let mut roots = Vec::new();
    if !f.monomial.is_one() {
        roots.push(Q::zero());
    }
    for (g, _) in f.factors {
        if let Some((a, b)) = g.linear_in(&lam) {
            if let (Some(a), Some(b)) = (a.as_constant(), b.as_constant()) {
                roots.push(-b / a);
            }
        }
    }
    roots
}

fn kernel_basis_rows(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return (0..dim).map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    }
    QMatrix::from_rows(rows.to_vec()).kernel()
}

/// A proper invariant subspace of the algebra, searched from coordinate
/// vectors, the all-ones vector and rational eigenvectors of algebra
/// elements.
fn invariant_subspace(basis: &[QMatrix], dim: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Q>>> {
    let mut candidates: Vec<Vec<Q>> = Vec::new();
    for i in 0..dim {
        candidates.push((0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect());
    }
    candidates.push(vec![Q::one(); dim]);
    let mut elements: Vec<QMatrix> = basis.iter().skip(1).take(2 * dim).cloned().collect();
    for _ in 0..4 {
        let mut x = QMatrix::zeros(dim, dim);
        for b in basis {
            let c = Q::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
            x = x.add(&b.scale(&c));
        }
        elements.push(x);
    }
    for x in &elements {
        for lam in rational_roots(&char_poly(x)) {
            let shifted = x.sub(&QMatrix::identity(dim).scale(&lam));
            candidates.extend(shifted.kernel());
        }
    }
    for v in &candidates {
        let w = orbit_span(basis, v);
        if !w.is_empty() && w.len() < dim {
            return Some(w);
        }
    }
    None
}

/// Burnside test at a rational sample: the span of all products of the
/// generator images is the full matrix algebra exactly when the
/// representation is absolutely irreducible there.
pub fn burnside_irreducible(rep: &Rep, sample: &BTreeMap<Variable, Q>) -> Result<Burnside> {
    let dim = rep.dim();
    let gens = evaluate_images(rep, sample)?;
    let basis = algebra_basis(&gens, dim);
    let dimension = basis.len();
    if dimension == dim * dim {
        return Ok(Burnside::Irreducible { dimension });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let show = |w: Vec<Vec<Q>>| w.into_iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
    if let Some(w) = invariant_subspace(&basis, dim, &mut rng) {
        return Ok(Burnside::Reducible { dimension, subspace: show(w) });
    }
    // an invariant subspace of the transposed algebra has an invariant
    // annihilator
    let tbasis: Vec<QMatrix> = basis.iter().map(QMatrix::transpose).collect();
    if let Some(w) = invariant_subspace(&tbasis, dim, &mut rng) {
        return Ok(Burnside::Reducible { dimension, subspace: show(kernel_basis_rows(&w, dim)) });
    }
    Ok(Burnside::Inconclusive { dimension })
}

fn small_rational(rng: &mut impl Rng) -> Q {
    let n: i64 = rng.random_range(1..=12) * if rng.random_bool(0.5) { 1 } else { -1 };
    let d: i64 = rng.random_range(1..=6);
    Q::new(n.into(), d.into())
}

/// Random values for every parameter not in `fixed`, redrawn until each
/// side condition and generator determinant is nonzero.
pub fn random_sample(rep: &Rep, fixed: &BTreeMap<Variable, Q>, rng: &mut impl Rng) -> Result<BTreeMap<Variable, Q>> {
    let free: Vec<Variable> =
        rep.parameters().iter().map(|p| Variable::new(p)).filter(|v| !fixed.contains_key(v)).collect();
    let dets: Vec<RationalFunction> =
        rep.generators().iter().map(|g| Ok(rep.image(g)?.determinant())).collect::<Result<_>>()?;
    for _ in 0..200 {
        let mut s = fixed.clone();
        for v in &free {
            s.insert(v.clone(), small_rational(rng));
        }
        let ok = |c: &RationalFunction| c.eval(&s).is_ok_and(|v| !v.is_zero());
        if rep.side_conditions().iter().all(ok) && dets.iter().all(ok) {
            return Ok(s);
        }
    }
    Err(AnalysisError::NoSample(rep.name().to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledVerdict {
    /// "Irreducible", "Reducible" or "Inconclusive".
    pub verdict: String,
    pub samples: usize,
    pub seed: u64,
    pub results: Vec<Burnside>,
    pub points: Vec<BTreeMap<String, String>>,
}

impl std::fmt::Display for SampledVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.verdict == "Inconclusive" {
            write!(f, "Inconclusive ({} samples disagree or no subspace found)", self.samples)
        } else {
            write!(f, "{} (generic, {} samples)", self.verdict, self.samples)
        }
    }
}

/// Runs the Burnside test at `samples` random completions of `fixed`. The
/// verdict is reported only when every sample agrees.
pub fn sampled_irreducibility(
    rep: &Rep,
    fixed: &BTreeMap<Variable, Q>,
    samples: usize,
    seed: u64,
) -> Result<SampledVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<BTreeMap<Variable, Q>> =
        (0..samples).map(|_| random_sample(rep, fixed, &mut rng)).collect::<Result<_>>()?;
    let results: Vec<Burnside> =
        par::map(&points, |p| burnside_irreducible(rep, p)).into_iter().collect::<Result<_>>()?;
    let verdict = if results.iter().all(Burnside::is_irreducible) {
        "Irreducible"
    } else if results.iter().all(Burnside::is_reducible) {
        "Reducible"
    } else {
        "Inconclusive"
    };
    Ok(SampledVerdict {
        verdict: verdict.into(),
        samples,
        seed,
        results,
        points: points.iter().map(|p| p.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()).collect(),
    })
}

/// How a witness word was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessStage {
    /// A generator whose image is the identity.
    Generator,
    /// `g h^-1` for two generators with equal images.
    EqualPair,
    /// Exhaustive search over reduced words.
    Search,
}

/// A word with identity image whose value in a valid quotient is not the
/// identity, so the word is nontrivial in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub word: Word,
    pub quotient: QuotientSpec,
    pub value: QuotientValue,
    pub stage: WitnessStage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub word: String,
    pub image: String,
    pub quotient: String,
    pub value: String,
}

impl WitnessCertificate {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            word: self.word.to_string(),
            image: "identity".into(),
            quotient: self.quotient.to_string(),
            value: self.value.to_string(),
        }
    }

    /// Recomputes everything: the image is exactly the identity, the
    /// quotient is a homomorphism on `pres`, and the word's value there is
    /// not the identity.
    pub fn validate(&self, rep: &Rep, pres: &Presentation) -> Result<bool> {
        let table = ImageTable::for_presentation(rep, pres)?;
        if !table.word_image(&self.word)?.is_identity() {
            return Ok(false);
        }
        if pres.check_quotient(&self.quotient).is_err() {
            return Ok(false);
        }
        let v = self.quotient.eval_unchecked(&self.word, pres.n);
        Ok(v == self.value && !v.is_identity())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions {
    /// Longest word tried by the search stage.
    pub max_len: usize,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { max_len: 6, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSearch {
    pub certificate: Option<WitnessCertificate>,
    /// Words with identity image that no valid quotient separates from the
    /// identity, from the generator and pair stages.
    pub uncertified: Vec<Word>,
    /// Reduced words of full length tried by the search stage.
    pub words_searched: u64,
    /// Words with identity image that were relators in every quotient.
    pub search_identity_hits: u64,
    pub max_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearchJson {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<WitnessStage>,
    pub uncertified: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub words_searched: u64,
    pub max_len: usize,
}

impl WitnessSearch {
    pub fn to_json(&self) -> WitnessSearchJson {
        WitnessSearchJson {
            found: self.certificate.is_some(),
            certificate: self.certificate.as_ref().map(WitnessCertificate::to_json),
            stage: self.certificate.as_ref().map(|c| c.stage),
            uncertified: self.uncertified.iter().map(ToString::to_string).collect(),
            note: (!self.uncertified.is_empty())
                .then(|| "identity image; no whitelisted quotient certifies nontriviality".to_string()),
            words_searched: self.words_searched,
            max_len: self.max_len,
        }
    }
}

fn certify(word: &Word, quotients: &[QuotientSpec], n: usize, stage: WitnessStage) -> Option<WitnessCertificate> {
    quotients.iter().find_map(|q| {
        let value = q.eval_unchecked(word, n);
        (!value.is_identity()).then(|| WitnessCertificate { word: word.clone(), quotient: q.clone(), value, stage })
    })
}

/// Searches for a certified nontrivial word with identity image: first
/// single generators, then `g h^-1` for generators with equal images, then
/// every freely reduced word up to `opts.max_len`. The last stage filters
/// words at a random point modulo a large prime and confirms survivors
/// exactly.
pub fn kernel_witness(rep: &Rep, pres: &Presentation, opts: &WitnessOptions) -> Result<WitnessSearch> {
    let table = ImageTable::for_presentation(rep, pres)?;
    let quotients = pres.valid_quotients();
    let gens = pres.generators();
    let mut out = WitnessSearch {
        certificate: None,
        uncertified: Vec::new(),
        words_searched: 0,
        search_identity_hits: 0,
        max_len: opts.max_len,
    };
    let images: Vec<RfMatrix> = gens.iter().map(|g| table.generator_image(g, 1)).collect::<Result<_, _>>()?;

    for (g, m) in gens.iter().zip(&images) {
        if m.is_identity() {
            let w = Word::gen(*g);
            match certify(&w, &quotients, pres.n, WitnessStage::Generator) {
                Some(c) => {
                    out.certificate = Some(c);
                    return Ok(out);
                }
                None => out.uncertified.push(w),
            }
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if images[i] == images[j] {
                let w = Word::from_letters([Letter { gen: gens[i], exp: 1 }, Letter { gen: gens[j], exp: -1 }]);
                match certify(&w, &quotients, pres.n, WitnessStage::EqualPair) {
                    Some(c) => {
                        out.certificate = Some(c);
                        return Ok(out);
                    }
                    None => out.uncertified.push(w),
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let point = random_sample(rep, &BTreeMap::new(), &mut rng)?;
    let letters: Vec<Letter> =
        gens.iter().flat_map(|g| [Letter { gen: *g, exp: 1 }, Letter { gen: *g, exp: -1 }]).collect();
    let mods: Vec<ModMatrix> = letters
        .iter()
        .map(|l| {
            let m = table.generator_image(&l.gen, l.exp)?.eval(&point)?;
            ModMatrix::from_q(&m).ok_or_else(|| AnalysisError::DenominatorVanishes("modular reduction".into()))
        })
        .collect::<Result<_>>()?;
    // iterative deepening, so the first certified length ends the search
    for len in 2..=opts.max_len {
        let search = ModSearch { letters: &letters, mods: &mods, quotients: &quotients, n: pres.n, len };
        let shards = par::map_range(letters.len(), |first| search.run(first));
        let mut hits: Vec<Vec<usize>> = Vec::new();
        for s in shards {
            out.words_searched += s.visited;
            out.search_identity_hits += s.relator_hits;
            hits.extend(s.hits);
        }
        hits.sort();
        for h in hits {
            let w = Word::from_letters(h.iter().map(|&i| letters[i]));
            if table.word_image(&w)?.is_identity() {
                if let Some(c) = certify(&w, &quotients, pres.n, WitnessStage::Search) {
                    out.certificate = Some(c);
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn q_mod(q: &Q) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let num = q.numer().mod_floor(&p).to_u64()?;
    let den = q.denom().mod_floor(&p).to_u64()?;
    (den != 0).then(|| mulmod(num, powmod(den, PRIME - 2)))
}

#[derive(Clone, PartialEq, Eq)]
struct ModMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    fn from_q(m: &QMatrix) -> Option<Self> {
        Some(ModMatrix { dim: m.rows(), data: m.entries().iter().map(q_mod).collect::<Option<_>>()? })
    }

    fn identity(dim: usize) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        ModMatrix { dim, data }
    }

    fn mul(&self, o: &ModMatrix) -> ModMatrix {
        let n = self.dim;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = o.data[l * n + j];
                    if b != 0 {
                        let s = data[i * n + j] + mulmod(a, b);
                        data[i * n + j] = if s >= PRIME { s - PRIME } else { s };
                    }
                }
            }
        }
        ModMatrix { dim: n, data }
    }

    fn is_identity(&self) -> bool {
        let n = self.dim;
        self.data.iter().enumerate().all(|(idx, &x)| x == u64::from(idx / n == idx % n))
    }
}

struct ModSearch<'a> {
    letters: &'a [Letter],
    mods: &'a [ModMatrix],
    quotients: &'a [QuotientSpec],
    n: usize,
    /// Exact word length searched.
    len: usize,
}

#[derive(Default)]
struct Shard {
    visited: u64,
    relator_hits: u64,
    hits: Vec<Vec<usize>>,
}

impl ModSearch<'_> {
    /// Every reduced word of length `self.len` starting with letter `first`.
    fn run(&self, first: usize) -> Shard {
        let mut shard = Shard::default();
        let mut word = vec![first];
        let prod = ModMatrix::identity(self.mods[first].dim).mul(&self.mods[first]);
        self.visit(&mut word, &prod, &mut shard);
        shard
    }

    fn visit(&self, word: &mut Vec<usize>, prod: &ModMatrix, shard: &mut Shard) {
        if word.len() == self.len {
            shard.visited += 1;
            if prod.is_identity() {
                let w = Word::from_letters(word.iter().map(|&i| self.letters[i]));
                if self.quotients.iter().any(|q| !q.eval_unchecked(&w, self.n).is_identity()) {
                    shard.hits.push(word.clone());
                } else {
                    shard.relator_hits += 1;
                }
            }
            return;
        }
        let last = *word.last().expect("nonempty");
        // letters come in (g, g^-1) pairs
        let cancel = last ^ 1;
        for next in 0..self.letters.len() {
            if next == cancel {
                continue;
            }
            word.push(next);
            let p = prod.mul(&self.mods[next]);
            self.visit(word, &p, shard);
            word.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenAudit {
    pub representation: String,
    pub presentation: String,
    pub relations: Vec<RelationCheck>,
}

impl ForbiddenAudit {
    /// Tags of the forbidden relations the images satisfy.
    pub fn satisfied(&self) -> Vec<&str> {
        self.relations.iter().filter(|r| r.holds).map(|r| r.tag.as_str()).collect()
    }
}

/// Which relations forbidden in the group hold for the images anyway.
pub fn forbidden_audit(rep: &Rep, pres: &Presentation) -> Result<ForbiddenAudit> {
    let table = ImageTable::for_presentation(rep, pres)?;
    Ok(ForbiddenAudit {
        representation: rep.name().to_string(),
        presentation: pres.label(),
        relations: check_relations(&table, &pres.forbidden)?,
    })
}

/// Whether `v` is fixed by every generator image.
pub fn is_invariant(rep: &Rep, v: &[RationalFunction]) -> Result<bool> {
    for g in rep.generators() {
        if rep.image(&g)?.mul_vec(v) != v {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localrep::builtin_catalog;
    use crate::presentations::{build_presentation, Group};

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    fn point(pairs: &[(&str, i64)]) -> BTreeMap<Variable, Q> {
        pairs.iter().map(|(v, x)| (Variable::new(v), Q::from_integer(BigInt::from(*x)))).collect()
    }

    fn fix(rep: &Rep, pairs: &[(&str, &str)]) -> Rep {
        let map = pairs.iter().map(|(v, x)| (Variable::new(v), rf(x))).collect();
        rep.substitute(&map).unwrap()
    }

    #[test]
    fn identity_conjugator_is_a_no_op() {
        let rep = builtin_catalog("beta7", 3, 2).unwrap();
        let t = DiagonalConjugator::new(vec![RationalFunction::one(); 3]).unwrap();
        let Rep::Local(c) = conjugate(&rep, &t).unwrap() else { panic!("expected local") };
        let Rep::Local(s) = rep else { unreachable!() };
        assert_eq!(c.sigma, s.sigma);
        assert_eq!(c.rho, s.rho);
    }

    #[test]
    fn zero_conjugator_entry_is_rejected() {
        let err = DiagonalConjugator::new(vec![RationalFunction::one(), RationalFunction::zero()]);
        assert!(matches!(err, Err(AnalysisError::SingularConjugator(1))));
    }

    #[test]
    fn geometric_conjugation_of_burau_block() {
        let rep = builtin_catalog("beta6", 3, 2).unwrap();
        let t = DiagonalConjugator::geometric(&rf("c"), 3).unwrap();
        let Rep::Local(c) = conjugate(&rep, &t).unwrap() else { panic!("expected local") };
        assert_eq!(c.sigma, RfMatrix::parse_rows(&[&["1 - b*c", "b*c"], &["1", "0"]]).unwrap());
        assert_eq!(c.rho[0], RfMatrix::parse_rows(&[&["0", "c*x0"], &["1/(c*x0)", "0"]]).unwrap());
    }

    #[test]
    fn trivial_rep_fixes_everything() {
        let rep = builtin_catalog("beta1", 3, 2).unwrap();
        assert!(find_invariant_vector(&rep).unwrap().is_some());
        let b = burnside_irreducible(&rep, &BTreeMap::new()).unwrap();
        assert!(b.is_reducible());
        assert_eq!(b.algebra_dimension(), 1);
    }

    #[test]
    fn anti_family_irreducible_at_sample() {
        let rep = builtin_catalog("beta7", 3, 2).unwrap();
        let b = burnside_irreducible(&rep, &point(&[("b", 2), ("c", 1), ("x0", 3), ("x1", 5)])).unwrap();
        assert_eq!(b, Burnside::Irreducible { dimension: 9 });
        let at = fix(&rep, &[("b", "2"), ("c", "1"), ("x0", "3"), ("x1", "5")]);
        assert_eq!(find_invariant_vector(&at).unwrap(), None);
    }

    #[test]
    fn anti_family_reducible_when_all_parameters_one() {
        let rep = builtin_catalog("beta7", 3, 2).unwrap();
        let b = burnside_irreducible(&rep, &point(&[("b", 1), ("c", 1), ("x0", 1), ("x1", 1)])).unwrap();
        assert!(b.is_reducible(), "{b:?}");
        let at = fix(&rep, &[("b", "1"), ("c", "1"), ("x0", "1"), ("x1", "1")]);
        assert_eq!(find_invariant_vector(&at).unwrap(), Some(vec![RationalFunction::one(); 3]));
    }

    #[test]
    fn generator_witness_for_identity_family() {
        let rep = builtin_catalog("beta2", 3, 2).unwrap();
        let pres = build_presentation(Group::MkVB, 3, 2).unwrap();
        let w = kernel_witness(&rep, &pres, &WitnessOptions::default()).unwrap();
        let c = w.certificate.unwrap();
        assert_eq!(c.word.to_string(), "r1^1");
        assert_eq!(c.quotient, QuotientSpec::PermAll);
        assert_eq!(c.value.to_string(), "(1 2)");
        assert!(c.validate(&rep, &pres).unwrap());
    }

    #[test]
    fn equal_pair_witness() {
        let rep = fix(&builtin_catalog("beta7", 3, 2).unwrap(), &[("x0", "b"), ("c", "1/b")]);
        let pres = build_presentation(Group::MkVB, 3, 2).unwrap();
        let c = kernel_witness(&rep, &pres, &WitnessOptions::default()).unwrap().certificate.unwrap();
        assert_eq!(c.word.to_string(), "s1 r1^0^-1");
        assert_eq!(c.quotient, QuotientSpec::PermRhoOnly);
        assert_eq!(
            serde_json::to_string(&c.to_json()).unwrap(),
            r#"{"word":"s1 r1^0^-1","image":"identity","quotient":"PermRhoOnly","value":"(1 2)"}"#
        );
        assert!(c.validate(&rep, &pres).unwrap());
    }

    #[test]
    fn search_finds_forbidden_move_relators() {
        let pres = build_presentation(Group::MkVB, 3, 2).unwrap();
        for (name, word, quotient) in [
            ("beta7", "s1 s2 r1^0 s2^-1 s1^-1 r2^0", QuotientSpec::PermRhoOnly),
            ("beta6", "s1 r2^1 r1^1 s2^-1 r1^1 r2^1", QuotientSpec::PermSelect(vec![0])),
        ] {
            let rep = builtin_catalog(name, 3, 2).unwrap();
            let w = kernel_witness(&rep, &pres, &WitnessOptions::default()).unwrap();
            let c = w.certificate.unwrap();
            assert_eq!(c.stage, WitnessStage::Search);
            assert_eq!((c.word.to_string().as_str(), &c.quotient), (word, &quotient));
            assert!(c.validate(&rep, &pres).unwrap());
        }
    }

    #[test]
    fn forbidden_audit_of_trivial_rep() {
        let rep = builtin_catalog("zeta1", 3, 2).unwrap();
        let pres = build_presentation(Group::MkWB, 3, 2).unwrap();
        let a = forbidden_audit(&rep, &pres).unwrap();
        assert!(!a.relations.is_empty());
        assert!(a.relations.iter().all(|r| r.holds));
    }

    #[test]
    fn char_poly_of_swap() {
        let m = QMatrix::from_rows(vec![vec![Q::zero(), Q::one()], vec![Q::one(), Q::zero()]]);
        let c = char_poly(&m);
        assert_eq!(c, vec![-Q::one(), Q::zero(), Q::one()]);
        let mut r = rational_roots(&c);
        r.sort();
        assert_eq!(r, vec![-Q::one(), Q::one()]);
    }
}
