//! Contributors, `[u, w]`-classes, reduced contributors and the total-minor
//! polynomials assembled from them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{domain, invariant, resource, Result};
use crate::hypergraph::{IncidenceHypergraph, OrientedHypergraph};
use crate::leibniz::{char_poly_univariate, cycle_lengths, symbolic_minor_poly, Mode};
use crate::matrix::{adjacency_matrix, laplacian_matrix, Matrix};
use crate::poly::{Monomial, MultiPoly, Poly};
use crate::topos::zero_loading;
use crate::Limits;

/// The image of a directed path of length one: `tail -i- edge -j- head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneStep {
    pub tail: usize,
    pub tail_incidence: usize,
    pub edge: usize,
    pub head_incidence: usize,
    pub head: usize,
}

impl OneStep {
    pub fn is_backstep(&self) -> bool {
        self.tail_incidence == self.head_incidence
    }

    pub fn is_loop(&self) -> bool {
        !self.is_backstep() && self.tail == self.head
    }

    pub fn is_adjacency(&self) -> bool {
        !self.is_backstep()
    }

    pub fn sign(&self, og: &OrientedHypergraph) -> i8 {
        og.sign(self.tail_incidence) * og.sign(self.head_incidence)
    }

    /// `−σ(i)σ(j)`, the weak-walk sign of the step.
    pub fn walk_sign(&self, og: &OrientedHypergraph) -> i8 {
        -self.sign(og)
    }

    pub fn format(&self, g: &IncidenceHypergraph) -> String {
        format!(
            "{} -{}- {} -{}-> {}",
            g.vertices()[self.tail],
            g.incidence(self.tail_incidence).id,
            g.edges()[self.edge],
            g.incidence(self.head_incidence).id,
            g.vertices()[self.head]
        )
    }
}

/// Every step out of `v`, ordered by tail incidence then head incidence.
pub fn steps_from(g: &IncidenceHypergraph, v: usize) -> Vec<OneStep> {
    let mut out = Vec::new();
    for i in g.incidences_at_vertex(v) {
        let e = g.edge_of(i);
        for j in g.incidences_on_edge(e) {
            out.push(OneStep {
                tail: v,
                tail_incidence: i,
                edge: e,
                head_incidence: j,
                head: g.vertex_of(j),
            });
        }
    }
    out
}

/// One step per vertex, with heads forming a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Contributor {
    steps: Vec<OneStep>,
}

impl Contributor {
    pub fn new(steps: Vec<OneStep>) -> Result<Self> {
        let n = steps.len();
        let mut seen = vec![false; n];
        for (v, s) in steps.iter().enumerate() {
            if s.tail != v || s.head >= n || seen[s.head] {
                return Err(domain("steps do not form a contributor"));
            }
            seen[s.head] = true;
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[OneStep] {
        &self.steps
    }

    pub fn permutation(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.head).collect()
    }

    pub fn is_strong(&self) -> bool {
        self.steps.iter().all(OneStep::is_adjacency)
    }

    pub fn backsteps(&self) -> Vec<usize> {
        (0..self.steps.len()).filter(|&v| self.steps[v].is_backstep()).collect()
    }

    /// The tail incidences, which determine tail-equivalence.
    pub fn tail_image(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.tail_incidence).collect()
    }

    pub fn format(&self, g: &IncidenceHypergraph) -> String {
        self.steps.iter().map(|s| s.format(g)).join("; ")
    }
}

/// Cycle and path statistics of a (possibly reduced) contributor.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentProfile {
    pub bs: usize,
    pub loops: usize,
    pub oc: usize,
    pub ec: usize,
    pub pc: usize,
    pub nc: usize,
    pub paths: usize,
    /// Head of each vertex that still has a step.
    pub permutation: Vec<Option<usize>>,
}

impl ComponentProfile {
    pub fn circles(&self) -> usize {
        self.oc + self.ec - self.paths
    }
}

/// Components of a partial step family: backsteps, circles (loops and
/// cycles of adjacencies) and maximal paths. A component is odd when it has
/// an odd number of steps and negative when the product of its walk signs
/// is negative.
pub fn profile_of_steps(og: &OrientedHypergraph, steps: &[Option<OneStep>]) -> ComponentProfile {
    let n = steps.len();
    let permutation: Vec<Option<usize>> = steps.iter().map(|s| s.map(|s| s.head)).collect();
    let mut has_incoming = vec![false; n];
    for h in permutation.iter().flatten() {
        has_incoming[*h] = true;
    }
    let mut p = ComponentProfile {
        permutation,
        ..Default::default()
    };
    let mut seen = vec![false; n];
    let record = |p: &mut ComponentProfile, len: usize, sign: i8| {
        if len % 2 == 1 {
            p.oc += 1;
        } else {
            p.ec += 1;
        }
        if sign < 0 {
            p.nc += 1;
        } else {
            p.pc += 1;
        }
    };
    // paths start where nothing arrives
    for start in 0..n {
        if steps[start].is_none() || has_incoming[start] {
            continue;
        }
        let (mut v, mut len, mut sign) = (start, 0, 1i8);
        while let Some(s) = steps[v] {
            seen[v] = true;
            sign *= s.walk_sign(og);
            len += 1;
            v = s.head;
        }
        p.paths += 1;
        record(&mut p, len, sign);
    }
    for start in 0..n {
        if seen[start] || steps[start].is_none() {
            continue;
        }
        let first = steps[start].expect("checked");
        if first.head == start {
            seen[start] = true;
            if first.is_backstep() {
                p.bs += 1;
            } else {
                p.loops += 1;
                record(&mut p, 1, first.walk_sign(og));
            }
            continue;
        }
        let (mut v, mut len, mut sign) = (start, 0, 1i8);
        while !seen[v] {
            seen[v] = true;
            let s = steps[v].expect("cycle vertices have steps");
            sign *= s.walk_sign(og);
            len += 1;
            v = s.head;
        }
        record(&mut p, len, sign);
    }
    p
}

pub fn component_profile(og: &OrientedHypergraph, c: &Contributor) -> ComponentProfile {
    let steps: Vec<Option<OneStep>> = c.steps.iter().copied().map(Some).collect();
    profile_of_steps(og, &steps)
}

/// `∏ σ(tail incidence)·σ(head incidence)` over all steps.
pub fn contributor_sign(og: &OrientedHypergraph, c: &Contributor) -> i8 {
    c.steps.iter().map(|s| s.sign(og)).product()
}

fn guard_vertices(n: usize, max: usize, what: &str) -> Result<()> {
    if n > max {
        return Err(resource(format!("{n} vertices exceed the {what} limit of {max}")));
    }
    Ok(())
}

/// Depth-first choice of one step per listed tail with distinct heads drawn
/// from `heads`.
fn enumerate_families(
    n: usize,
    tails: &[usize],
    heads: &BTreeSet<usize>,
    candidates: &[Vec<OneStep>],
    cap: u128,
) -> Result<Vec<Vec<Option<OneStep>>>> {
    fn dfs(
        k: usize,
        tails: &[usize],
        candidates: &[Vec<OneStep>],
        free: &mut [bool],
        current: &mut Vec<Option<OneStep>>,
        out: &mut Vec<Vec<Option<OneStep>>>,
        cap: u128,
    ) -> Result<()> {
        if k == tails.len() {
            if out.len() as u128 >= cap {
                return Err(resource(format!("more than {cap} step families")));
            }
            out.push(current.clone());
            return Ok(());
        }
        let v = tails[k];
        for s in &candidates[v] {
            if free[s.head] {
                free[s.head] = false;
                current[v] = Some(*s);
                dfs(k + 1, tails, candidates, free, current, out, cap)?;
                current[v] = None;
                free[s.head] = true;
            }
        }
        Ok(())
    }
    let mut free = vec![false; n];
    for &h in heads {
        free[h] = true;
    }
    let mut out = Vec::new();
    let mut current = vec![None; n];
    dfs(0, tails, candidates, &mut free, &mut current, &mut out, cap)?;
    Ok(out)
}

/// All contributors, in lexicographic order of their step choices.
pub fn enumerate_contributors(g: &IncidenceHypergraph, strong_only: bool, limits: &Limits) -> Result<Vec<Contributor>> {
    let n = g.vertex_count();
    guard_vertices(n, limits.max_vertices, "contributor")?;
    let candidates: Vec<Vec<OneStep>> = (0..n)
        .map(|v| {
            steps_from(g, v)
                .into_iter()
                .filter(|s| !strong_only || s.is_adjacency())
                .collect()
        })
        .collect();
    let tails: Vec<usize> = (0..n).collect();
    let families = enumerate_families(n, &tails, &(0..n).collect(), &candidates, limits.max_enum)?;
    Ok(families
        .into_iter()
        .map(|f| Contributor {
            steps: f.into_iter().map(|s| s.expect("total family")).collect(),
        })
        .collect())
}

/// Groups contributor indices by tail image.
pub fn tail_equivalence_classes(contributors: &[Contributor]) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, c) in contributors.iter().enumerate() {
        classes.entry(c.tail_image()).or_default().push(k);
    }
    classes.into_values().collect()
}

/// An ordered pair of equal-length vertex tuples, each without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorClass {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
}

impl MinorClass {
    pub fn new(u: Vec<usize>, w: Vec<usize>, n: usize) -> Result<Self> {
        if u.len() != w.len() {
            return Err(domain("class tuples differ in length"));
        }
        for t in [&u, &w] {
            if t.iter().any(|&v| v >= n) || t.iter().collect::<BTreeSet<_>>().len() != t.len() {
                return Err(domain("class tuple repeats a vertex or leaves the vertex set"));
            }
        }
        Ok(Self { u, w })
    }

    pub fn empty() -> Self {
        Self { u: Vec::new(), w: Vec::new() }
    }

    /// Resolve vertex ids.
    pub fn from_ids(g: &IncidenceHypergraph, u: &[&str], w: &[&str]) -> Result<Self> {
        let look = |ids: &[&str]| -> Result<Vec<usize>> {
            ids.iter()
                .map(|id| g.vertex_index(id).ok_or_else(|| domain(format!("unknown vertex `{id}`"))))
                .collect()
        };
        Self::new(look(u)?, look(w)?, g.vertex_count())
    }

    /// The same class with `u` sorted ascending; the monomial depends only
    /// on the set of pairs.
    pub fn canonical(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.u.iter().copied().zip(self.w.iter().copied()).collect();
        pairs.sort_unstable();
        Self {
            u: pairs.iter().map(|p| p.0).collect(),
            w: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.u.iter().copied().zip(self.w.iter().copied()).collect())
            .expect("class rows are distinct")
    }

    pub fn head_of(&self, v: usize) -> Option<usize> {
        self.u.iter().position(|&x| x == v).map(|k| self.w[k])
    }

    /// All classes on `n` vertices with `u` ascending, ordered by size then
    /// lexicographically.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for k in 0..=n {
            for u in (0..n).combinations(k) {
                for w in (0..n).permutations(k) {
                    out.push(Self { u: u.clone(), w });
                }
            }
        }
        out
    }
}

/// A contributor with the steps out of `u` deleted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedContributor {
    pub class: MinorClass,
    pub steps: Vec<Option<OneStep>>,
}

impl ReducedContributor {
    pub fn format(&self, g: &IncidenceHypergraph) -> String {
        self.steps.iter().flatten().map(|s| s.format(g)).join("; ")
    }
}

/// Contributors sending each `u_i` to `w_i`.
pub fn class_contributors(g: &IncidenceHypergraph, class: &MinorClass, limits: &Limits) -> Result<Vec<Contributor>> {
    MinorClass::new(class.u.clone(), class.w.clone(), g.vertex_count())?;
    Ok(enumerate_contributors(g, false, limits)?
        .into_iter()
        .filter(|c| class.u.iter().zip(&class.w).all(|(&u, &w)| c.steps[u].head == w))
        .collect())
}

pub fn reduce_contributor(c: &Contributor, class: &MinorClass) -> Result<ReducedContributor> {
    let mut steps: Vec<Option<OneStep>> = c.steps.iter().copied().map(Some).collect();
    for (&u, &w) in class.u.iter().zip(&class.w) {
        if c.steps.get(u).map(|s| s.head) != Some(w) {
            return Err(domain("contributor is not in the class"));
        }
        steps[u] = None;
    }
    Ok(ReducedContributor {
        class: class.clone(),
        steps,
    })
}

/// The permutation of any extension of `s`: surviving heads plus `u_i ↦ w_i`.
pub fn class_permutation(s: &ReducedContributor) -> Vec<usize> {
    (0..s.steps.len())
        .map(|v| match s.steps[v] {
            Some(step) => step.head,
            None => s.class.head_of(v).expect("removed vertices belong to u"),
        })
        .collect()
}

/// Every contributor of `g` restricting to `s`.
pub fn extensions(g: &IncidenceHypergraph, s: &ReducedContributor) -> Vec<Contributor> {
    let choices: Vec<Vec<OneStep>> = s
        .class
        .u
        .iter()
        .zip(&s.class.w)
        .map(|(&u, &w)| steps_from(g, u).into_iter().filter(|st| st.head == w).collect())
        .collect();
    let picks: Vec<Vec<OneStep>> = if choices.is_empty() {
        vec![Vec::new()]
    } else {
        choices.into_iter().multi_cartesian_product().collect()
    };
    picks
        .into_iter()
        .map(|picked| {
            let mut steps = s.steps.clone();
            for st in picked {
                steps[st.tail] = Some(st);
            }
            Contributor {
                steps: steps.into_iter().map(|x| x.expect("complete")).collect(),
            }
        })
        .collect()
}

/// Which matrix a total-minor polynomial expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Adjacency,
    Laplacian,
}

pub fn target_matrix(og: &OrientedHypergraph, target: Target) -> Result<Matrix<i64>> {
    match target {
        Target::Adjacency => Ok(adjacency_matrix(og)),
        Target::Laplacian => laplacian_matrix(og),
    }
}

/// Sign attached to a reduced contributor with the given profile and class
/// permutation.
pub fn reduced_sign(target: Target, mode: Mode, p: &ComponentProfile, class_perm: &[usize]) -> i64 {
    let ec = cycle_lengths(class_perm).iter().filter(|&&l| l % 2 == 0).count();
    let exponent = match (target, mode) {
        (Target::Adjacency, Mode::Permanent) => p.oc + p.nc,
        (Target::Adjacency, Mode::Determinant) => ec + p.oc + p.nc,
        (Target::Laplacian, Mode::Permanent) => p.nc + p.bs,
        (Target::Laplacian, Mode::Determinant) => ec + p.nc + p.bs,
    };
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

fn nonzero_steps(og: &OrientedHypergraph, strong: bool) -> Vec<Vec<OneStep>> {
    let g = og.structure();
    (0..g.vertex_count())
        .map(|v| {
            steps_from(g, v)
                .into_iter()
                .filter(|s| s.sign(og) != 0 && (!strong || s.is_adjacency()))
                .collect()
        })
        .collect()
}

/// The nonzero-sign reduced contributors of the 0-loading in `class`, strong
/// ones only for the adjacency target.
pub fn class_reduced_contributors(
    og: &OrientedHypergraph,
    class: &MinorClass,
    target: Target,
    limits: &Limits,
) -> Result<Vec<ReducedContributor>> {
    let n = og.vertex_count();
    MinorClass::new(class.u.clone(), class.w.clone(), n)?;
    let loaded = zero_loading(og);
    let candidates = nonzero_steps(&loaded, target == Target::Adjacency);
    reduced_families(n, class, &candidates, limits)
}

fn reduced_families(
    n: usize,
    class: &MinorClass,
    candidates: &[Vec<OneStep>],
    limits: &Limits,
) -> Result<Vec<ReducedContributor>> {
    let tails: Vec<usize> = (0..n).filter(|v| !class.u.contains(v)).collect();
    let heads: BTreeSet<usize> = (0..n).filter(|v| !class.w.contains(v)).collect();
    Ok(enumerate_families(n, &tails, &heads, candidates, limits.max_enum)?
        .into_iter()
        .map(|steps| ReducedContributor {
            class: class.clone(),
            steps,
        })
        .collect())
}

/// The total-minor polynomial `det(X − M)` or `perm(X − M)` for `M` the
/// adjacency or Laplacian matrix, assembled class by class from reduced
/// contributors of the 0-loading.
pub fn total_minor_poly(og: &OrientedHypergraph, target: Target, mode: Mode, limits: &Limits) -> Result<MultiPoly<i64>> {
    let n = og.vertex_count();
    guard_vertices(n, limits.max_total_minor_vertices, "total-minor")?;
    let loaded = zero_loading(og);
    let candidates = nonzero_steps(&loaded, target == Target::Adjacency);
    let classes = MinorClass::all(n);
    let terms = classes
        .par_iter()
        .map(|class| -> Result<(Monomial, i64)> {
            let mut coeff = 0i64;
            for s in reduced_families(n, class, &candidates, limits)? {
                let p = profile_of_steps(&loaded, &s.steps);
                coeff += reduced_sign(target, mode, &p, &class_permutation(&s));
            }
            Ok((class.monomial(), coeff))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut poly = MultiPoly::zero();
    for (m, c) in terms {
        poly.add_term(m, c);
    }
    Ok(poly)
}

/// The univariate polynomial read off full contributors of the 0-loading:
/// for the adjacency, contributors with exactly `k` backsteps, all removed;
/// for the Laplacian, every `k`-subset of backsteps removed. Distinct reduced
/// elements are counted once and zero-sign ones dropped.
pub fn univariate_from_contributors(og: &OrientedHypergraph, target: Target, mode: Mode, limits: &Limits) -> Result<Poly<i64>> {
    let n = og.vertex_count();
    guard_vertices(n, limits.max_total_minor_vertices, "total-minor")?;
    if n == 0 {
        return Ok(Poly::constant(1));
    }
    let loaded = zero_loading(og);
    let mut reduced: BTreeSet<ReducedContributor> = BTreeSet::new();
    for c in enumerate_contributors(loaded.structure(), false, limits)? {
        let bs = c.backsteps();
        let subsets: Vec<Vec<usize>> = match target {
            Target::Adjacency => vec![bs],
            Target::Laplacian => bs.iter().copied().powerset().collect(),
        };
        for removed in subsets {
            let class = MinorClass {
                u: removed.clone(),
                w: removed,
            };
            reduced.insert(reduce_contributor(&c, &class)?);
        }
    }
    let mut coeffs = vec![0i64; n + 1];
    for s in &reduced {
        if s.steps.iter().flatten().any(|st| st.sign(&loaded) == 0) {
            continue;
        }
        let p = profile_of_steps(&loaded, &s.steps);
        coeffs[s.class.u.len()] += reduced_sign(target, mode, &p, &class_permutation(s));
    }
    Ok(Poly::new(coeffs))
}

/// Both contributor routes and the direct expansion, checked equal.
pub fn verified_univariate(og: &OrientedHypergraph, target: Target, mode: Mode, limits: &Limits) -> Result<Poly<i64>> {
    let direct = char_poly_univariate(&target_matrix(og, target)?, mode, limits)?;
    let via_total = total_minor_poly(og, target, mode, limits)?.substitute_diagonal();
    let via_backsteps = univariate_from_contributors(og, target, mode, limits)?;
    if via_total != direct || via_backsteps != direct {
        return Err(invariant(format!(
            "univariate routes disagree: expansion {direct}, total-minor {via_total}, backsteps {via_backsteps}"
        )));
    }
    Ok(direct)
}

/// The Leibniz oracle for the same `(target, mode)`.
pub fn oracle_poly(og: &OrientedHypergraph, target: Target, mode: Mode, limits: &Limits) -> Result<MultiPoly<i64>> {
    symbolic_minor_poly(&target_matrix(og, target)?, mode, limits)
}
