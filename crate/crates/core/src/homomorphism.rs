//! Incidence hypergraph homomorphisms and their exhaustive enumeration.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{domain, resource, Result};
use crate::hypergraph::IncidenceHypergraph;

/// A triple of maps on vertices, edges and incidences commuting with the
/// incidence maps of source and target.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    source: Arc<IncidenceHypergraph>,
    target: Arc<IncidenceHypergraph>,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub incidence_map: Vec<usize>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_map == other.vertex_map
            && self.edge_map == other.edge_map
            && self.incidence_map == other.incidence_map
            && same(&self.source, &other.source)
            && same(&self.target, &other.target)
    }
}

impl Eq for Homomorphism {}

fn same(a: &Arc<IncidenceHypergraph>, b: &Arc<IncidenceHypergraph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Homomorphism {
    /// Checked constructor.
    pub fn new(
        source: Arc<IncidenceHypergraph>,
        target: Arc<IncidenceHypergraph>,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
        incidence_map: Vec<usize>,
    ) -> Result<Self> {
        let h = Self::from_parts_unchecked(source, target, vertex_map, edge_map, incidence_map);
        h.check()?;
        Ok(h)
    }

    pub(crate) fn from_parts_unchecked(
        source: Arc<IncidenceHypergraph>,
        target: Arc<IncidenceHypergraph>,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
        incidence_map: Vec<usize>,
    ) -> Self {
        Self {
            source,
            target,
            vertex_map,
            edge_map,
            incidence_map,
        }
    }

    /// Builds a map from id lookups: each component is given as a function
    /// from source ids to target ids.
    pub fn from_id_maps(
        source: Arc<IncidenceHypergraph>,
        target: Arc<IncidenceHypergraph>,
        vertex: impl Fn(&str) -> String,
        edge: impl Fn(&str) -> String,
        incidence: impl Fn(&str) -> String,
    ) -> Result<Self> {
        let look = |kind: &str, id: String, found: Option<usize>| {
            found.ok_or_else(|| domain(format!("{kind} `{id}` is not in the target")))
        };
        let vertex_map = source
            .vertices()
            .iter()
            .map(|v| {
                let t = vertex(v);
                let k = target.vertex_index(&t);
                look("vertex", t, k)
            })
            .collect::<Result<Vec<_>>>()?;
        let edge_map = source
            .edges()
            .iter()
            .map(|e| {
                let t = edge(e);
                let k = target.edge_index(&t);
                look("edge", t, k)
            })
            .collect::<Result<Vec<_>>>()?;
        let incidence_map = source
            .incidences()
            .iter()
            .map(|i| {
                let t = incidence(&i.id);
                let k = target.incidence_index(&t);
                look("incidence", t, k)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, vertex_map, edge_map, incidence_map)
    }

    pub fn identity(g: Arc<IncidenceHypergraph>) -> Self {
        let (nv, ne, ni) = (g.vertex_count(), g.edge_count(), g.incidence_count());
        Self::from_parts_unchecked(
            g.clone(),
            g,
            (0..nv).collect(),
            (0..ne).collect(),
            (0..ni).collect(),
        )
    }

    pub fn source(&self) -> &Arc<IncidenceHypergraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<IncidenceHypergraph> {
        &self.target
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.vertex_map.len() != s.vertex_count()
            || self.edge_map.len() != s.edge_count()
            || self.incidence_map.len() != s.incidence_count()
        {
            return Err(domain("homomorphism component has the wrong length"));
        }
        if self.vertex_map.iter().any(|&v| v >= t.vertex_count())
            || self.edge_map.iter().any(|&e| e >= t.edge_count())
            || self.incidence_map.iter().any(|&i| i >= t.incidence_count())
        {
            return Err(domain("homomorphism component leaves the target"));
        }
        for (i, &j) in self.incidence_map.iter().enumerate() {
            if t.vertex_of(j) != self.vertex_map[s.vertex_of(i)] {
                return Err(domain(format!(
                    "vertex square fails at incidence `{}`",
                    s.incidence(i).id
                )));
            }
            if t.edge_of(j) != self.edge_map[s.edge_of(i)] {
                return Err(domain(format!(
                    "edge square fails at incidence `{}`",
                    s.incidence(i).id
                )));
            }
        }
        Ok(())
    }

    /// Whether both commuting squares hold pointwise.
    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// Monomorphisms are exactly the componentwise injections.
    pub fn is_monic(&self) -> bool {
        injective(&self.vertex_map) && injective(&self.edge_map) && injective(&self.incidence_map)
    }

    pub fn is_iso(&self) -> bool {
        self.is_monic()
            && self.vertex_map.len() == self.target.vertex_count()
            && self.edge_map.len() == self.target.edge_count()
            && self.incidence_map.len() == self.target.incidence_count()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if !same(&self.target, &next.source) {
            return Err(domain("composition of non-composable homomorphisms"));
        }
        Ok(Self::from_parts_unchecked(
            self.source.clone(),
            next.target.clone(),
            self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            self.edge_map.iter().map(|&e| next.edge_map[e]).collect(),
            self.incidence_map.iter().map(|&i| next.incidence_map[i]).collect(),
        ))
    }
}

fn injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(map.len());
    map.iter().all(|x| seen.insert(*x))
}

/// Size of the incidence-first search space, saturating.
fn search_space(g: &IncidenceHypergraph, h: &IncidenceHypergraph) -> u128 {
    let mut covered_v = vec![false; g.vertex_count()];
    let mut covered_e = vec![false; g.edge_count()];
    for i in g.incidences() {
        covered_v[i.vertex] = true;
        covered_e[i.edge] = true;
    }
    let free_v = covered_v.iter().filter(|c| !**c).count() as u32;
    let free_e = covered_e.iter().filter(|c| !**c).count() as u32;
    let pow = |base: usize, exp: u32| (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
    pow(h.incidence_count(), g.incidence_count() as u32)
        .saturating_mul(pow(h.vertex_count(), free_v))
        .saturating_mul(pow(h.edge_count(), free_e))
}

/// Visits every homomorphism `g → h` in canonical order: incidence images
/// first, lexicographically, then the images of vertices and edges that no
/// incidence constrains.
pub fn for_each_homomorphism<F>(
    g: &IncidenceHypergraph,
    h: &IncidenceHypergraph,
    cap: u128,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize], &[usize], &[usize]) -> ControlFlow<()>,
{
    let space = search_space(g, h);
    if space > cap {
        return Err(resource(format!(
            "homomorphism search space {space} exceeds cap {cap}"
        )));
    }
    let mut state = Search {
        g,
        h,
        vmap: vec![usize::MAX; g.vertex_count()],
        emap: vec![usize::MAX; g.edge_count()],
        imap: vec![usize::MAX; g.incidence_count()],
        vfree: Vec::new(),
        efree: Vec::new(),
    };
    let mut covered_v = vec![false; g.vertex_count()];
    let mut covered_e = vec![false; g.edge_count()];
    for i in g.incidences() {
        covered_v[i.vertex] = true;
        covered_e[i.edge] = true;
    }
    state.vfree = (0..g.vertex_count()).filter(|&v| !covered_v[v]).collect();
    state.efree = (0..g.edge_count()).filter(|&e| !covered_e[e]).collect();
    let _ = state.incidence_step(0, &mut visit);
    Ok(())
}

struct Search<'a> {
    g: &'a IncidenceHypergraph,
    h: &'a IncidenceHypergraph,
    vmap: Vec<usize>,
    emap: Vec<usize>,
    imap: Vec<usize>,
    vfree: Vec<usize>,
    efree: Vec<usize>,
}

impl Search<'_> {
    fn incidence_step<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[usize], &[usize]) -> ControlFlow<()>,
    {
        if k == self.imap.len() {
            return self.vertex_step(0, visit);
        }
        let (v, e) = (self.g.vertex_of(k), self.g.edge_of(k));
        for j in 0..self.h.incidence_count() {
            let (tv, te) = (self.h.vertex_of(j), self.h.edge_of(j));
            let v_set = self.vmap[v] == usize::MAX;
            let e_set = self.emap[e] == usize::MAX;
            if (!v_set && self.vmap[v] != tv) || (!e_set && self.emap[e] != te) {
                continue;
            }
            self.vmap[v] = tv;
            self.emap[e] = te;
            self.imap[k] = j;
            let flow = self.incidence_step(k + 1, visit);
            if v_set {
                self.vmap[v] = usize::MAX;
            }
            if e_set {
                self.emap[e] = usize::MAX;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn vertex_step<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[usize], &[usize]) -> ControlFlow<()>,
    {
        if k == self.vfree.len() {
            return self.edge_step(0, visit);
        }
        let v = self.vfree[k];
        for tv in 0..self.h.vertex_count() {
            self.vmap[v] = tv;
            self.vertex_step(k + 1, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn edge_step<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[usize], &[usize]) -> ControlFlow<()>,
    {
        if k == self.efree.len() {
            return visit(&self.vmap, &self.emap, &self.imap);
        }
        let e = self.efree[k];
        for te in 0..self.h.edge_count() {
            self.emap[e] = te;
            self.edge_step(k + 1, visit)?;
        }
        ControlFlow::Continue(())
    }
}

/// All homomorphisms `g → h` in canonical order.
pub fn enumerate_homomorphisms(
    g: &Arc<IncidenceHypergraph>,
    h: &Arc<IncidenceHypergraph>,
    cap: u128,
) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    for_each_homomorphism(g, h, cap, |v, e, i| {
        out.push(Homomorphism::from_parts_unchecked(
            g.clone(),
            h.clone(),
            v.to_vec(),
            e.to_vec(),
            i.to_vec(),
        ));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_homomorphisms(g: &IncidenceHypergraph, h: &IncidenceHypergraph, cap: u128) -> Result<u64> {
    let mut n = 0u64;
    for_each_homomorphism(g, h, cap, |_, _, _| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::topos::terminal;

    const CAP: u128 = 1_000_000_000;

    /// Nested loops over every triple of functions, keeping the valid ones.
    fn brute_count(g: &IncidenceHypergraph, h: &IncidenceHypergraph) -> usize {
        fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
            let mut out = vec![vec![]];
            for _ in 0..n {
                out = out
                    .into_iter()
                    .flat_map(|p| {
                        (0..m).map(move |x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                    })
                    .collect();
            }
            out
        }
        let (g, h) = (Arc::new(g.clone()), Arc::new(h.clone()));
        let mut n = 0;
        for v in all_maps(g.vertex_count(), h.vertex_count()) {
            for e in all_maps(g.edge_count(), h.edge_count()) {
                for i in all_maps(g.incidence_count(), h.incidence_count()) {
                    if Homomorphism::new(g.clone(), h.clone(), v.clone(), e.clone(), i).is_ok() {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn path_into_three_edge() {
        let p1 = Arc::new(fixtures::directed_path_one());
        let g2 = Arc::new(fixtures::g2());
        // every ordered pair of incidences on the 3-edge
        let homs = enumerate_homomorphisms(&p1, &g2, CAP).unwrap();
        assert_eq!(homs.len(), 9);
        assert_eq!(brute_count(&p1, &g2), 9);
        assert!(homs.iter().all(Homomorphism::is_valid));
    }

    #[test]
    fn terminal_counts() {
        let t = Arc::new(terminal());
        for g in [fixtures::k3(), fixtures::g2(), IncidenceHypergraph::empty()] {
            let g = Arc::new(g);
            assert_eq!(
                enumerate_homomorphisms(&t, &g, CAP).unwrap().len(),
                g.incidence_count()
            );
            assert_eq!(enumerate_homomorphisms(&g, &t, CAP).unwrap().len(), 1);
        }
    }

    #[test]
    fn enumerator_matches_brute_force() {
        let k3 = fixtures::k3();
        let g2 = fixtures::g2();
        let p1 = fixtures::directed_path_one();
        for (a, b) in [(&p1, &k3), (&g2, &p1), (&p1, &p1), (&g2, &g2)] {
            assert_eq!(count_homomorphisms(a, b, CAP).unwrap() as usize, brute_count(a, b));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let k3 = fixtures::k3();
        assert!(matches!(
            count_homomorphisms(&k3, &k3, 10),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn monic_checks() {
        let k3 = Arc::new(fixtures::k3());
        assert!(Homomorphism::identity(k3.clone()).is_monic());
        let t = Arc::new(terminal());
        let collapse = enumerate_homomorphisms(&k3, &t, CAP).unwrap().remove(0);
        assert!(!collapse.is_monic());
    }

    #[test]
    fn composition_is_associative_on_samples() {
        let p1 = Arc::new(fixtures::directed_path_one());
        let g2 = Arc::new(fixtures::g2());
        let t = Arc::new(terminal());
        let f = &enumerate_homomorphisms(&p1, &g2, CAP).unwrap()[4];
        let g = &enumerate_homomorphisms(&g2, &g2, CAP).unwrap()[7];
        let h = &enumerate_homomorphisms(&g2, &t, CAP).unwrap()[0];
        let left = f.then(g).unwrap().then(h).unwrap();
        let right = f.then(&g.then(h).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(left.is_valid());
    }
}
