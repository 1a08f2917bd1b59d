//! Derivation and solution of the polynomial system satisfied by the
//! unknown 2×2 blocks of a homogeneous 2-local representation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localrep::{verify_representation, CatalogFamily, ImageTable, LocalRepError, LocalRepSpec, Rep};
use crate::matrix::RfMatrix;
use crate::par;
use crate::presentations::{build_presentation, Group, Presentation, PresentationError};
use crate::symalg::{factor_shallow_with, Polynomial, RationalFunction, SymError, Variable, Q};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("branch budget exceeded: more than {0} branches")]
    BudgetExceeded(usize),
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("empty system")]
    EmptySystem,
    #[error(transparent)]
    LocalRep(#[from] LocalRepError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

pub type Result<T, E = ClassifierError> = std::result::Result<T, E>;

const BLOCK_NAMES: [[&str; 4]; 5] =
    [["a", "b", "c", "d"], ["w", "x", "y", "z"], ["p", "q", "r", "s"], ["f", "g", "h", "i"], ["j", "k", "l", "m"]];

/// Four fresh unknowns per generator family, row-major in each block:
/// σ gets `a b c d`, ρ^0 `w x y z`, ρ^1 `p q r s`, ρ^2 `f g h i`,
/// ρ^3 `j k l m`, and ρ^α for α ≥ 4 gets `u{α}_1 .. u{α}_4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub blocks: Vec<[Variable; 4]>,
}

impl BlockLayout {
    pub fn standard(k: usize) -> Self {
        let blocks = (0..=k)
            .map(|f| match BLOCK_NAMES.get(f) {
                Some(names) => names.map(Variable::new),
                None => std::array::from_fn(|e| Variable::new(&format!("u{}_{}", f - 1, e + 1))),
            })
            .collect();
        BlockLayout { blocks }
    }

    pub fn k(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn unknowns(&self) -> Vec<Variable> {
        self.blocks.iter().flatten().cloned().collect()
    }

    fn block(&self, f: usize, values: &dyn Fn(&Variable) -> RationalFunction) -> RfMatrix {
        let v = &self.blocks[f];
        RfMatrix::from_rows(vec![vec![values(&v[0]), values(&v[1])], vec![values(&v[2]), values(&v[3])]])
    }

    /// The representation whose block entries are the given values.
    pub fn spec_with(
        &self,
        name: &str,
        group: Group,
        n: usize,
        values: &dyn Fn(&Variable) -> RationalFunction,
    ) -> Result<LocalRepSpec> {
        let sigma = self.block(0, values);
        let rho = (1..self.blocks.len()).map(|f| self.block(f, values)).collect();
        Ok(LocalRepSpec::new(name, group, n, sigma, rho, vec![])?)
    }

    fn determinants(&self) -> Vec<Polynomial> {
        self.blocks
            .iter()
            .map(|v| {
                let p = |x: &Variable| Polynomial::variable(x);
                &(&p(&v[0]) * &p(&v[3])) - &(&p(&v[1]) * &p(&v[2]))
            })
            .collect()
    }

    /// Catalog value of every unknown for a spec with the same shape.
    pub fn read_spec(&self, spec: &LocalRepSpec) -> Result<BTreeMap<Variable, RationalFunction>> {
        if spec.block_size() != 2 || spec.k != self.k() {
            return Err(ClassifierError::LayoutMismatch(format!(
                "spec has {} families of {}x{} blocks, layout has {}",
                spec.k,
                spec.block_size(),
                spec.block_size(),
                self.k()
            )));
        }
        let mut out = BTreeMap::new();
        for (f, vars) in self.blocks.iter().enumerate() {
            let m = if f == 0 { &spec.sigma } else { &spec.rho[f - 1] };
            for (e, v) in vars.iter().enumerate() {
                out.insert(v.clone(), m.get(e / 2, e % 2).clone());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct UnknownBlockSystem {
    pub group: Group,
    pub n: usize,
    pub layout: BlockLayout,
    pub unknowns: Vec<Variable>,
    /// Each must vanish.
    pub equations: Vec<Polynomial>,
    /// Block determinants; each must be nonzero.
    pub invertibility: Vec<Polynomial>,
}

/// Expands every relation of `pres` with unknown blocks. Entry differences
/// that vanish are dropped, as are exact duplicates up to sign.
pub fn derive_system(pres: &Presentation, layout: &BlockLayout) -> Result<UnknownBlockSystem> {
    if pres.k != layout.k() {
        return Err(ClassifierError::LayoutMismatch(format!("presentation k = {}, layout k = {}", pres.k, layout.k())));
    }
    let spec =
        layout.spec_with("unknown", pres.group, pres.n, &|v| RationalFunction::from_poly(Polynomial::variable(v)))?;
    let table = ImageTable::for_presentation(&Rep::Local(spec), pres)?;
    let per_relation: Vec<Result<Vec<Polynomial>>> = par::map(&pres.relations, |r| {
        let l = table.word_image(&r.lhs)?;
        let rr = table.word_image(&r.rhs)?;
        let diff = l.sub(&rr);
        Ok(diff
            .entries()
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| {
                debug_assert!(e.den().is_one());
                e.num().clone()
            })
            .collect())
    });
    let mut equations: Vec<Polynomial> = Vec::new();
    let mut seen = BTreeSet::new();
    for eqs in per_relation {
        for p in eqs? {
            let neg = -&p;
            let key = if p < neg { p.clone() } else { neg };
            if seen.insert(key) {
                equations.push(p);
            }
        }
    }
    Ok(UnknownBlockSystem {
        group: pres.group,
        n: pres.n,
        unknowns: layout.unknowns(),
        invertibility: layout.determinants(),
        layout: layout.clone(),
        equations,
    })
}

/// The system for `group` with `k` virtual families, derived at `n = 3`.
pub fn standard_system(group: Group, k: usize) -> Result<UnknownBlockSystem> {
    let pres = build_presentation(group, 3, k)?;
    derive_system(&pres, &BlockLayout::standard(k))
}

/// The system from every relation at `n` strands rather than the `n = 3`
/// instances. Its solution set must agree with [`standard_system`].
pub fn exhaustive_system(group: Group, k: usize, n: usize) -> Result<UnknownBlockSystem> {
    let pres = build_presentation(group, n, k)?;
    derive_system(&pres, &BlockLayout::standard(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBranch {
    /// Values of the eliminated unknowns in terms of the free ones.
    pub assignment: BTreeMap<Variable, RationalFunction>,
    pub free: Vec<Variable>,
    /// Each must be nonzero.
    pub disequalities: Vec<Polynomial>,
    /// Equations the solver could not eliminate; empty on a closed branch.
    pub residual: Vec<Polynomial>,
}

impl SolutionBranch {
    pub fn is_closed(&self) -> bool {
        self.residual.is_empty()
    }

    /// Value of an unknown: its assigned expression, or itself when free.
    pub fn value(&self, v: &Variable) -> RationalFunction {
        self.assignment.get(v).cloned().unwrap_or_else(|| RationalFunction::from_poly(Polynomial::variable(v)))
    }

    pub fn values(&self, unknowns: &[Variable]) -> BTreeMap<Variable, RationalFunction> {
        unknowns.iter().map(|v| (v.clone(), self.value(v))).collect()
    }

    /// The branch as a representation on `n` strands.
    pub fn to_spec(&self, layout: &BlockLayout, group: Group, n: usize, name: &str) -> Result<LocalRepSpec> {
        let mut spec = layout.spec_with(name, group, n, &|v| self.value(v))?;
        spec.side_conditions = self.disequalities.iter().cloned().map(RationalFunction::from_poly).collect();
        Ok(spec)
    }

    /// Whether every equation of `system` vanishes identically on the branch.
    pub fn is_sound(&self, system: &UnknownBlockSystem) -> bool {
        let values = self.values(&system.unknowns);
        self.is_closed() && system.equations.iter().all(|e| e.try_substitute(&values).is_ok_and(|v| v.is_zero()))
    }

    /// A random point of the branch: small rationals for the free unknowns,
    /// redrawn until every disequality and block determinant is nonzero.
    pub fn sample(
        &self,
        system: &UnknownBlockSystem,
        rng: &mut impl Rng,
    ) -> Option<BTreeMap<Variable, RationalFunction>> {
        for _ in 0..SAMPLE_ATTEMPTS {
            let free: BTreeMap<Variable, RationalFunction> =
                self.free.iter().map(|v| (v.clone(), RationalFunction::from_q(small_rational(rng)))).collect();
            let Ok(point) = system
                .unknowns
                .iter()
                .map(|u| Ok((u.clone(), self.value(u).substitute(&free)?)))
                .collect::<Result<BTreeMap<_, _>, SymError>>()
            else {
                continue;
            };
            let nonzero = |p: &Polynomial| p.try_substitute(&point).is_ok_and(|v| !v.is_zero());
            if self.disequalities.iter().all(|p| p.try_substitute(&free).is_ok_and(|v| !v.is_zero()))
                && system.invertibility.iter().all(nonzero)
            {
                return Some(point);
            }
        }
        None
    }
}

const SAMPLE_ATTEMPTS: usize = 100;

fn small_rational(rng: &mut impl Rng) -> Q {
    let mut n: i64 = rng.random_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    let d: i64 = rng.random_range(1..=5);
    Q::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub branch_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { branch_cap: 10_000 }
    }
}

#[derive(Clone, Debug)]
struct State {
    assign: BTreeMap<Variable, RationalFunction>,
    /// Each equation as its list of distinct factors; the product vanishes.
    eqs: Vec<Vec<Polynomial>>,
    /// Normalized polynomials known to be nonzero on this branch.
    nonzero: BTreeSet<Polynomial>,
    residual: Vec<Polynomial>,
}

struct Ctx {
    cap: usize,
    count: AtomicUsize,
}

impl Ctx {
    fn spawn(&self, n: usize) -> Result<()> {
        let c = self.count.fetch_add(n, Ordering::Relaxed) + n;
        if c > self.cap {
            return Err(ClassifierError::BudgetExceeded(self.cap));
        }
        Ok(())
    }
}

/// Outcome of simplifying a branch.
enum Simplified {
    Dead,
    Live(State),
}

impl State {
    /// Normalized factors of `p` that are not already known nonzero, or
    /// `None` if every factor is known nonzero (so `p = 0` is impossible).
    fn open_factors(&self, p: &Polynomial) -> Option<Vec<Polynomial>> {
        if p.is_zero() {
            return Some(Vec::new());
        }
        let known: Vec<Polynomial> = self.nonzero.iter().cloned().collect();
        let f = factor_shallow_with(p, &known);
        let mut out: Vec<Polynomial> = f.distinct_factors().into_iter().filter(|q| !self.nonzero.contains(q)).collect();
        out.sort();
        out.dedup();
        if out.is_empty() {
            None
        } else {
            Some(out)
        }
    }

    /// Records `p != 0`. Returns false if `p` is identically zero.
    fn add_nonzero(&mut self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return false;
        }
        let known: Vec<Polynomial> = self.nonzero.iter().cloned().collect();
        for q in factor_shallow_with(p, &known).distinct_factors() {
            self.nonzero.insert(q);
        }
        true
    }

    fn add_nonzero_rf(&mut self, r: &RationalFunction) -> bool {
        // denominator factors are nonzero wherever the value is defined
        self.add_nonzero(r.num()) && self.add_nonzero(r.den())
    }

    /// Substitutes `v := value` everywhere.
    fn assign(mut self, v: &Variable, value: RationalFunction) -> Result<Simplified> {
        let map: BTreeMap<Variable, RationalFunction> = [(v.clone(), value.clone())].into();
        for val in self.assign.values_mut() {
            if val.vars().contains(v) {
                *val = val.substitute(&map)?;
            }
        }
        self.assign.insert(v.clone(), value.clone());
        if !value.den().is_one() && !self.add_nonzero(value.den()) {
            return Ok(Simplified::Dead);
        }
        let old_nonzero = std::mem::take(&mut self.nonzero);
        for p in old_nonzero {
            if !p.contains_var(v) {
                self.nonzero.insert(p);
                continue;
            }
            let r = p.substitute(&map);
            if !self.add_nonzero_rf(&r) {
                return Ok(Simplified::Dead);
            }
        }
        let eqs = std::mem::take(&mut self.eqs);
        for fs in eqs {
            if fs.iter().any(|f| f.contains_var(v)) {
                let prod = fs.iter().fold(Polynomial::one(), |acc, f| &acc * f);
                self.eqs.push(vec![prod.substitute(&map).num().clone()]);
            } else {
                self.eqs.push(fs);
            }
        }
        let res = std::mem::take(&mut self.residual);
        for p in res {
            self.eqs.push(vec![p.substitute(&map).num().clone()]);
        }
        Ok(self.simplify())
    }

    fn simplify(mut self) -> Simplified {
        let eqs = std::mem::take(&mut self.eqs);
        let mut out: Vec<Vec<Polynomial>> = Vec::new();
        for fs in eqs {
            let prod = if fs.len() == 1 { fs[0].clone() } else { fs.iter().fold(Polynomial::one(), |a, f| &a * f) };
            if prod.is_zero() {
                continue;
            }
            match self.open_factors(&prod) {
                None => return Simplified::Dead,
                Some(f) if f.is_empty() => continue,
                Some(f) => {
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
        self.eqs = out;
        Simplified::Live(self)
    }
}

fn eq_key(fs: &[Polynomial]) -> (i64, usize, String) {
    let prod = fs.iter().fold(Polynomial::one(), |a, f| &a * f);
    (prod.total_degree(), prod.vars().len(), prod.to_canonical_string())
}

fn explore(state: State, ctx: &Ctx) -> Result<Vec<State>> {
    let Some(idx) = (0..state.eqs.len()).min_by_key(|&i| eq_key(&state.eqs[i])) else {
        return Ok(vec![state]);
    };
    let fs = state.eqs[idx].clone();
    let mut children: Vec<State> = Vec::new();

    if fs.len() > 1 {
        // f1 = 0 | f1 != 0, f2 = 0 | ...
        for j in 0..fs.len() {
            let mut st = state.clone();
            st.eqs[idx] = vec![fs[j].clone()];
            let mut ok = true;
            for f in &fs[..j] {
                ok &= st.add_nonzero(f);
            }
            if ok {
                if let Simplified::Live(s) = st.simplify() {
                    children.push(s);
                }
            }
        }
    } else {
        let f = &fs[0];
        type Pivot = ((u8, usize, i64, Variable), Polynomial, Polynomial);
        let mut best: Option<Pivot> = None;
        for v in f.vars() {
            let Some((g, h)) = f.linear_in(&v) else { continue };
            let score = if g.is_constant() {
                0
            } else if state.open_factors(&g).is_none() {
                1
            } else {
                2
            };
            let key = (score, g.num_terms(), g.total_degree(), v.clone());
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, g, h));
            }
        }
        let Some(((score, _, _, v), g, h)) = best else {
            // nonlinear in every unknown: keep as residual
            let mut st = state;
            let p = st.eqs.remove(idx);
            st.residual.push(p.into_iter().fold(Polynomial::one(), |a, f| &a * &f));
            return explore(st, ctx);
        };
        let value = RationalFunction::new(-&h, g.clone())?;
        if score == 2 {
            let mut zero = state.clone();
            zero.eqs[idx] = vec![g.clone()];
            zero.eqs.push(vec![h]);
            if let Simplified::Live(s) = zero.simplify() {
                children.push(s);
            }
            let mut nz = state;
            nz.eqs.remove(idx);
            if nz.add_nonzero(&g) {
                if let Simplified::Live(s) = nz.assign(&v, value)? {
                    children.push(s);
                }
            }
        } else {
            let mut st = state;
            st.eqs.remove(idx);
            if let Simplified::Live(s) = st.assign(&v, value)? {
                children.push(s);
            }
        }
    }

    ctx.spawn(children.len())?;
    let results = par::map(&children, |c| explore(c.clone(), ctx));
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn finish(state: State, unknowns: &[Variable]) -> SolutionBranch {
    let free: Vec<Variable> = unknowns.iter().filter(|v| !state.assign.contains_key(*v)).cloned().collect();
    SolutionBranch {
        assignment: state.assign,
        free,
        disequalities: state.nonzero.into_iter().filter(|p| !p.is_constant()).collect(),
        residual: state.residual,
    }
}

/// `a` lies on the closure of `b`: sending each free unknown of `b` to its
/// value on `a` reproduces every value of `a`. Returns the indices of `b`'s
/// disequalities that vanish there.
pub fn specializes(a: &SolutionBranch, b: &SolutionBranch, unknowns: &[Variable]) -> Option<Vec<usize>> {
    let psi: BTreeMap<Variable, RationalFunction> = b.free.iter().map(|v| (v.clone(), a.value(v))).collect();
    for u in unknowns {
        let Ok(val) = b.value(u).substitute(&psi) else { return None };
        if val != a.value(u) {
            return None;
        }
    }
    Some(
        b.disequalities
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.try_substitute(&psi).is_ok_and(|v| !v.is_zero()))
            .map(|(i, _)| i)
            .collect(),
    )
}

/// Drops every branch lying on the closure of another one; of two mutually
/// contained branches the earlier is kept. A surviving branch loses the
/// disequalities that fail on the branches it absorbed, since the equations
/// hold on the whole closure.
pub fn merge_branches(branches: Vec<SolutionBranch>, unknowns: &[Variable]) -> Vec<SolutionBranch> {
    let n = branches.len();
    let contained: Vec<Vec<Option<Vec<usize>>>> = par::map_range(n, |i| {
        (0..n).map(|j| if i == j { None } else { specializes(&branches[i], &branches[j], unknowns) }).collect()
    });
    let dropped = |i: usize| (0..n).any(|j| contained[i][j].is_some() && (contained[j][i].is_none() || j < i));
    let mut out = Vec::new();
    for (j, mut b) in branches.into_iter().enumerate() {
        if dropped(j) {
            continue;
        }
        let lost: BTreeSet<usize> = (0..n).filter_map(|i| contained[i][j].as_ref()).flatten().copied().collect();
        if !lost.is_empty() {
            b.disequalities =
                b.disequalities.into_iter().enumerate().filter(|(k, _)| !lost.contains(k)).map(|(_, p)| p).collect();
        }
        out.push(b);
    }
    out
}

pub fn solve(system: &UnknownBlockSystem, opts: &SolveOptions) -> Result<Vec<SolutionBranch>> {
    if system.equations.is_empty() {
        return Err(ClassifierError::EmptySystem);
    }
    let mut root = State { assign: BTreeMap::new(), eqs: Vec::new(), nonzero: BTreeSet::new(), residual: Vec::new() };
    for d in &system.invertibility {
        root.add_nonzero(d);
    }
    root.eqs = system.equations.iter().map(|p| vec![p.clone()]).collect();
    let ctx = Ctx { cap: opts.branch_cap, count: AtomicUsize::new(1) };
    let leaves = match root.simplify() {
        Simplified::Dead => Vec::new(),
        Simplified::Live(s) => explore(s, &ctx)?,
    };
    let branches: Vec<SolutionBranch> = leaves.into_iter().map(|s| finish(s, &system.unknowns)).collect();
    Ok(merge_branches(branches, &system.unknowns))
}

/// Parameter locators: for each spec parameter, an unknown whose catalog
/// value is exactly that parameter.
fn locate(values: &BTreeMap<Variable, RationalFunction>) -> BTreeMap<Variable, Variable> {
    let mut out = BTreeMap::new();
    for (u, val) in values {
        if let Some((m, c)) = val.num().as_term() {
            if val.den().is_one() && c == &num_traits::One::one() {
                let mut it = m.iter();
                if let (Some((p, 1)), None) = (it.next(), it.next()) {
                    out.entry(p.clone()).or_insert_with(|| u.clone());
                }
            }
        }
    }
    out
}

/// Whether the branch and the spec describe the same family up to renaming
/// parameters: each side's generic point satisfies the other.
pub fn match_branch(branch: &SolutionBranch, spec: &LocalRepSpec, layout: &BlockLayout) -> Result<bool> {
    let unknowns = layout.unknowns();
    let cat = layout.read_spec(spec)?;
    if branch.assignment.keys().chain(&branch.free).any(|v| !cat.contains_key(v)) {
        return Err(ClassifierError::LayoutMismatch("branch uses unknowns outside the layout".into()));
    }

    // spec inside branch: free unknowns take their catalog values
    let psi: BTreeMap<Variable, RationalFunction> = branch.free.iter().map(|v| (v.clone(), cat[v].clone())).collect();
    for u in &unknowns {
        match branch.value(u).substitute(&psi) {
            Ok(v) if v == cat[u] => {}
            _ => return Ok(false),
        }
    }
    if branch.disequalities.iter().any(|p| p.substitute(&psi).is_zero()) {
        return Ok(false);
    }

    // branch inside spec: parameters read off their locator unknowns
    let params: BTreeSet<Variable> = cat.values().flat_map(|v| v.vars()).collect();
    let loc = locate(&cat);
    let mut phi = BTreeMap::new();
    for p in &params {
        let Some(u) = loc.get(p) else { return Ok(false) };
        phi.insert(p.clone(), branch.value(u));
    }
    for u in &unknowns {
        match cat[u].substitute(&phi) {
            Ok(v) if v == branch.value(u) => {}
            _ => return Ok(false),
        }
    }
    Ok(spec.side_conditions.iter().all(|c| c.substitute(&phi).is_ok_and(|v| !v.is_zero())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub assignment: BTreeMap<String, String>,
    pub free: Vec<String>,
    pub disequalities: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub residual: Vec<String>,
    pub matched_family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family_descriptor: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub group: Group,
    pub k: usize,
    pub derivation_n: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub expected: usize,
    pub branches: Vec<BranchJson>,
    pub catalog_unmatched: Vec<String>,
    pub bijection: bool,
}

pub struct Classification {
    pub system: UnknownBlockSystem,
    pub branches: Vec<SolutionBranch>,
    pub catalog: Vec<CatalogFamily>,
    /// Catalog index matched by each branch, if any.
    pub matches: Vec<Option<usize>>,
}

impl Classification {
    pub fn bijection(&self) -> bool {
        let mut hit = vec![0usize; self.catalog.len()];
        for m in &self.matches {
            match m {
                Some(i) => hit[*i] += 1,
                None => return false,
            }
        }
        hit.iter().all(|&h| h == 1) && self.branches.len() == self.catalog.len()
    }

    pub fn report(&self) -> ClassificationReport {
        let branches = self
            .branches
            .iter()
            .zip(&self.matches)
            .map(|(b, m)| BranchJson {
                assignment: b.assignment.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                free: b.free.iter().map(ToString::to_string).collect(),
                disequalities: b.disequalities.iter().map(|p| format!("{p} != 0")).collect(),
                residual: b.residual.iter().map(|p| format!("{p} = 0")).collect(),
                matched_family: m.map(|i| self.family_name(i)),
                family_descriptor: m.map(|i| self.catalog[i].to_string()),
            })
            .collect();
        let matched: BTreeSet<usize> = self.matches.iter().flatten().copied().collect();
        ClassificationReport {
            schema: crate::SCHEMA_VERSION,
            group: self.system.group,
            k: self.system.layout.k(),
            derivation_n: self.system.n,
            unknowns: self.system.unknowns.len(),
            equations: self.system.equations.len(),
            expected: self.catalog.len(),
            branches,
            catalog_unmatched: (0..self.catalog.len())
                .filter(|i| !matched.contains(i))
                .map(|i| self.family_name(i))
                .collect(),
            bijection: self.bijection(),
        }
    }

    fn family_name(&self, i: usize) -> String {
        let f = &self.catalog[i];
        f.alias().filter(|_| self.system.layout.k() == 2).unwrap_or_else(|| f.to_string())
    }

    /// Markdown table: one row per branch with its blocks and conditions.
    pub fn to_markdown(&self) -> String {
        let k = self.system.layout.k();
        let mut s = String::new();
        let _ = writeln!(
            s,
            "## {} classification, k = {} ({} branches, {} expected)\n",
            self.system.group,
            k,
            self.branches.len(),
            self.catalog.len()
        );
        let mut head = "| # | family | S |".to_string();
        for a in 0..k {
            let _ = write!(head, " X{a} |");
        }
        head.push_str(" conditions |");
        let _ = writeln!(s, "{head}");
        let _ = writeln!(s, "|{}", "---|".repeat(k + 4));
        for (idx, (b, m)) in self.branches.iter().zip(&self.matches).enumerate() {
            let name = m.map_or_else(|| "unmatched".to_string(), |i| self.family_name(i));
            let blk = |f: usize| {
                let v = &self.system.layout.blocks[f];
                format!("[[{}, {}], [{}, {}]]", b.value(&v[0]), b.value(&v[1]), b.value(&v[2]), b.value(&v[3]))
            };
            let mut row = format!("| {} | {} | {} |", idx + 1, name, blk(0));
            for f in 1..=k {
                let _ = write!(row, " {} |", blk(f));
            }
            let conds: Vec<String> = b.disequalities.iter().map(|p| format!("{p} != 0")).collect();
            let _ = write!(row, " {} |", if conds.is_empty() { "-".to_string() } else { conds.join(", ") });
            let _ = writeln!(s, "{row}");
        }
        let _ = writeln!(s, "\nbijection with catalog: {}", if self.bijection() { "yes" } else { "no" });
        s
    }
}

pub fn catalog_for(group: Group, k: usize) -> Result<Vec<CatalogFamily>> {
    match group {
        Group::MkVB => Ok(CatalogFamily::mvb_all(k)),
        Group::MkWB => Ok(CatalogFamily::mwb_all(k)),
        g => Err(ClassifierError::LayoutMismatch(format!("no classification catalog for {g}"))),
    }
}

/// Solves the system and matches each branch against the catalog.
pub fn classify_system(system: UnknownBlockSystem, opts: &SolveOptions) -> Result<Classification> {
    let k = system.layout.k();
    let catalog = catalog_for(system.group, k)?;
    let branches = solve(&system, opts)?;
    let specs: Vec<LocalRepSpec> = catalog.iter().map(|f| f.spec(3, k)).collect::<Result<_, _>>()?;
    let matches =
        par::map(&branches, |b| specs.iter().position(|s| match_branch(b, s, &system.layout).unwrap_or(false)));
    Ok(Classification { system, branches, catalog, matches })
}

pub fn classify(group: Group, k: usize, opts: &SolveOptions) -> Result<Classification> {
    classify_system(standard_system(group, k)?, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub seed: u64,
    pub samples: usize,
    pub strands: Vec<usize>,
    pub verified: usize,
    /// Branch index, strand count and point of each failure.
    pub failures: Vec<(usize, usize, String)>,
    /// Branches for which no admissible point was drawn.
    pub unsampled: Vec<usize>,
}

impl SamplingReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.unsampled.is_empty()
    }
}

/// Draws `samples` points spread round-robin over the branches and checks
/// each against the full presentation at every strand count in `strands`.
pub fn sampling_cross_check(
    c: &Classification,
    samples: usize,
    strands: &[usize],
    seed: u64,
) -> Result<SamplingReport> {
    let sys = &c.system;
    let k = sys.layout.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(samples);
    let mut unsampled = BTreeSet::new();
    for idx in 0..samples {
        let b = idx % c.branches.len().max(1);
        match c.branches.get(b).and_then(|br| br.sample(sys, &mut rng)) {
            Some(pt) => points.push((b, pt)),
            None => {
                unsampled.insert(b);
            }
        }
    }
    let pres: Vec<Presentation> =
        strands.iter().map(|&n| build_presentation(sys.group, n, k)).collect::<Result<_, _>>()?;
    let checks = par::map(&points, |(b, pt)| -> Result<Vec<(usize, usize, String)>> {
        let mut bad = Vec::new();
        for p in &pres {
            let spec = sys.layout.spec_with("sample", sys.group, p.n, &|v| pt[v].clone())?;
            if !verify_representation(&Rep::Local(spec), p)?.pass {
                let at: Vec<String> = pt.iter().map(|(v, x)| format!("{v}={x}")).collect();
                bad.push((*b, p.n, at.join(",")));
            }
        }
        Ok(bad)
    });
    let mut failures = Vec::new();
    for r in checks {
        failures.extend(r?);
    }
    Ok(SamplingReport {
        seed,
        samples,
        strands: strands.to_vec(),
        verified: points.len() * strands.len() - failures.len(),
        failures,
        unsampled: unsampled.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn m2vb_system_contains_known_equations() {
        let sys = standard_system(Group::MkVB, 2).unwrap();
        assert_eq!(sys.unknowns.len(), 12);
        let has = |q: &Polynomial| sys.equations.iter().any(|e| e == q || &-e == q);
        assert!(has(&p("w*x + x*z")));
        assert!(has(&p("a^2 + a*b*c - a")));
    }

    #[test]
    fn m2wb_adds_f1_equations() {
        let v = standard_system(Group::MkVB, 2).unwrap();
        let w = standard_system(Group::MkWB, 2).unwrap();
        assert!(w.equations.len() > v.equations.len());
    }

    #[test]
    fn m2vb_classification() {
        let c = classify(Group::MkVB, 2, &SolveOptions::default()).unwrap();
        assert_eq!(c.branches.len(), 9, "{}", c.to_markdown());
        assert!(c.bijection(), "{}", c.to_markdown());
        assert!(c.branches.iter().all(|b| b.is_sound(&c.system)));
    }

    #[test]
    fn m2wb_classification() {
        let c = classify(Group::MkWB, 2, &SolveOptions::default()).unwrap();
        assert_eq!(c.branches.len(), 7, "{}", c.to_markdown());
        assert!(c.bijection(), "{}", c.to_markdown());
    }

    #[test]
    fn exhaustive_derivation_agrees() {
        let c = classify_system(exhaustive_system(Group::MkVB, 2, 4).unwrap(), &SolveOptions::default()).unwrap();
        assert!(c.bijection(), "{}", c.to_markdown());
    }

    #[test]
    fn branch_cap_is_enforced() {
        let err = classify(Group::MkVB, 2, &SolveOptions { branch_cap: 3 }).err();
        assert!(matches!(err, Some(ClassifierError::BudgetExceeded(3))));
    }

    #[test]
    fn match_branch_examples() {
        let layout = BlockLayout::standard(2);
        let c = classify(Group::MkVB, 2, &SolveOptions::default()).unwrap();
        let b3 = &c.branches[c.matches.iter().position(|m| *m == Some(2)).unwrap()];
        let beta7 = CatalogFamily::from_alias("beta7", 2).unwrap().spec(3, 2).unwrap();
        let beta3 = CatalogFamily::from_alias("beta3", 2).unwrap().spec(3, 2).unwrap();
        assert!(match_branch(b3, &beta3, &layout).unwrap());
        assert!(!match_branch(b3, &beta7, &layout).unwrap());
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = classify(Group::MkVB, 2, &SolveOptions::default()).unwrap();
        let a = sampling_cross_check(&c, 18, &[3], 7).unwrap();
        let b = sampling_cross_check(&c, 18, &[3], 7).unwrap();
        assert!(a.pass(), "{a:?}");
        assert_eq!(a, b);
    }
}
