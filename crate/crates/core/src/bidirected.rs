//! Bidirected graphs: packing and unpacking of steps, Boolean activation
//! classes, and the single-element classes matching `k`-arborescences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::classical::{endpoints, is_forest};
use crate::contributors::{
    enumerate_contributors, reduce_contributor, Contributor, MinorClass, OneStep, ReducedContributor,
};
use crate::error::{domain, invariant, resource, Result};
use crate::hypergraph::{IncidenceHypergraph, OrientedHypergraph};
use crate::Limits;

/// An oriented graph whose edges all have two incidences; completion edges
/// carry sign 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BidirectedGraph {
    og: OrientedHypergraph,
    completion: Vec<bool>,
}

impl BidirectedGraph {
    pub fn new(og: OrientedHypergraph) -> Result<Self> {
        let g = og.structure();
        if !g.is_graph_like() {
            return Err(domain("bidirected graphs need exactly two incidences per edge"));
        }
        if og.signs().contains(&0) {
            return Err(domain("bidirected edges are signed ±1"));
        }
        let completion = vec![false; g.edge_count()];
        Ok(Self { og, completion })
    }

    pub fn oriented(&self) -> &OrientedHypergraph {
        &self.og
    }

    pub fn structure(&self) -> &IncidenceHypergraph {
        self.og.structure()
    }

    pub fn is_completion_edge(&self, e: usize) -> bool {
        self.completion[e]
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        endpoints(self.structure())[e]
    }

    /// Add a 0-signed edge between every pair of distinct non-adjacent
    /// vertices.
    pub fn completion(&self) -> Result<Self> {
        let g = self.structure();
        let n = g.vertex_count();
        let mut adjacent = vec![vec![false; n]; n];
        for (a, b) in endpoints(g) {
            adjacent[a][b] = true;
            adjacent[b][a] = true;
        }
        let mut edges = g.edges().to_vec();
        let mut taken: BTreeSet<String> = edges.iter().cloned().collect();
        let mut taken_inc: BTreeSet<String> = g.incidences().iter().map(|i| i.id.clone()).collect();
        let mut incidences: Vec<(String, usize, usize)> =
            g.incidences().iter().map(|i| (i.id.clone(), i.vertex, i.edge)).collect();
        let fresh = |set: &mut BTreeSet<String>, mut id: String| {
            while set.contains(&id) {
                id.push('\'');
            }
            set.insert(id.clone());
            id
        };
        let mut signs = self.og.signs().to_vec();
        let mut completion = self.completion.clone();
        for a in 0..n {
            for b in a + 1..n {
                if adjacent[a][b] {
                    continue;
                }
                let (va, vb) = (&g.vertices()[a], &g.vertices()[b]);
                let e = edges.len();
                edges.push(fresh(&mut taken, format!("(0,{va},{vb})")));
                incidences.push((fresh(&mut taken_inc, format!("(0,{va},{vb}):{va}")), a, e));
                incidences.push((fresh(&mut taken_inc, format!("(0,{va},{vb}):{vb}")), b, e));
                signs.extend([0, 0]);
                completion.push(true);
            }
        }
        let structure = IncidenceHypergraph::from_indices(g.vertices().to_vec(), edges, incidences)?;
        Ok(Self {
            og: OrientedHypergraph::new(structure, signs)?,
            completion,
        })
    }

    /// The other incidence on the edge of `i`.
    fn partner(&self, i: usize) -> usize {
        let g = self.structure();
        g.incidences_on_edge(g.edge_of(i))
            .find(|&j| j != i)
            .expect("graph edges have two incidences")
    }

    /// Where the backstep at tail incidence `i` unpacks to.
    fn unpacked(&self, step: &OneStep) -> OneStep {
        let j = self.partner(step.tail_incidence);
        OneStep {
            head_incidence: j,
            head: self.structure().vertex_of(j),
            ..*step
        }
    }
}

/// Replace the adjacency at `v` by the backstep on its tail incidence.
pub fn pack(p: &[OneStep], v: usize) -> Result<Vec<OneStep>> {
    let step = p.get(v).ok_or_else(|| domain("no step at that vertex"))?;
    if step.is_backstep() {
        return Err(domain("only adjacencies can be packed"));
    }
    let mut out = p.to_vec();
    out[v] = OneStep {
        head_incidence: step.tail_incidence,
        head: step.tail,
        ..*step
    };
    Ok(out)
}

/// Replace the backstep at `v` by the adjacency completing its edge.
pub fn unpack(g: &BidirectedGraph, p: &[OneStep], v: usize) -> Result<Vec<OneStep>> {
    let step = p.get(v).ok_or_else(|| domain("no step at that vertex"))?;
    if !step.is_backstep() {
        return Err(domain("only backsteps can be unpacked"));
    }
    let mut out = p.to_vec();
    out[v] = g.unpacked(step);
    Ok(out)
}

/// Cycles of the unpack map restricted to the backstep vertices of `c`.
fn activatable_circles(g: &BidirectedGraph, steps: &[Option<OneStep>]) -> Vec<Vec<usize>> {
    let n = steps.len();
    let target = |v: usize| -> Option<usize> {
        steps[v].filter(OneStep::is_backstep).map(|s| g.unpacked(&s).head)
    };
    let mut state = vec![0u8; n];
    let mut out = Vec::new();
    for start in 0..n {
        if state[start] != 0 || target(start).is_none() {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        loop {
            if state[v] == 1 {
                let at = path.iter().position(|&x| x == v).expect("on current path");
                out.push(path[at..].to_vec());
                break;
            }
            if state[v] == 2 {
                break;
            }
            state[v] = 1;
            path.push(v);
            match target(v) {
                Some(w) if steps[w].is_some_and(|s| s.is_backstep()) => v = w,
                _ => break,
            }
        }
        for x in path {
            state[x] = 2;
        }
    }
    out.sort();
    out
}

fn activate(g: &BidirectedGraph, c: &Contributor, circle: &[usize]) -> Result<Contributor> {
    let mut steps = c.steps().to_vec();
    for &v in circle {
        steps[v] = g.unpacked(&steps[v]);
    }
    Contributor::new(steps)
}

/// A Boolean lattice of contributors generated by independent circles over
/// its all-backstep bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationClass {
    pub members: Vec<Contributor>,
    pub bottom: Contributor,
    pub generators: Vec<Vec<usize>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Partition all contributors into activation classes, checking each is a
/// Boolean lattice over a unique bottom.
pub fn activation_classes(g: &BidirectedGraph, limits: &Limits) -> Result<Vec<ActivationClass>> {
    let contributors = enumerate_contributors(g.structure(), false, limits)?;
    let index: HashMap<&Contributor, usize> = contributors.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut dsu = Dsu((0..contributors.len()).collect());
    for (k, c) in contributors.iter().enumerate() {
        let steps: Vec<Option<OneStep>> = c.steps().iter().copied().map(Some).collect();
        for circle in activatable_circles(g, &steps) {
            let up = activate(g, c, &circle)?;
            let j = *index
                .get(&up)
                .ok_or_else(|| invariant("activation left the contributor set"))?;
            dsu.union(k, j);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..contributors.len() {
        groups.entry(dsu.find(k)).or_default().push(k);
    }
    groups
        .into_values()
        .map(|ks| {
            let members: Vec<Contributor> = ks.iter().map(|&k| contributors[k].clone()).collect();
            check_boolean(g, members)
        })
        .collect()
}

fn check_boolean(g: &BidirectedGraph, members: Vec<Contributor>) -> Result<ActivationClass> {
    let most = members.iter().map(|c| c.backsteps().len()).max().unwrap_or(0);
    let bottoms: Vec<&Contributor> = members.iter().filter(|c| c.backsteps().len() == most).collect();
    if bottoms.len() != 1 {
        return Err(invariant(format!("activation class has {} bottoms", bottoms.len())));
    }
    let bottom = bottoms[0].clone();
    let steps: Vec<Option<OneStep>> = bottom.steps().iter().copied().map(Some).collect();
    let generators = activatable_circles(g, &steps);
    let expected = 1usize
        .checked_shl(generators.len() as u32)
        .ok_or_else(|| resource("too many generators"))?;
    let mut lattice = BTreeSet::new();
    for subset in generators.iter().powerset() {
        let mut c = bottom.clone();
        for circle in subset {
            c = activate(g, &c, circle)?;
        }
        lattice.insert(c);
    }
    let actual: BTreeSet<Contributor> = members.iter().cloned().collect();
    if lattice.len() != expected || actual.len() != members.len() || lattice != actual {
        return Err(invariant(format!(
            "activation class of size {} is not the Boolean lattice on {} generators",
            members.len(),
            generators.len()
        )));
    }
    let mut members = members;
    members.sort();
    Ok(ActivationClass {
        members,
        bottom,
        generators,
    })
}

/// A spanning forest with one designated sink per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    pub roots: Vec<usize>,
    /// Edge indices, ascending.
    pub edges: Vec<usize>,
    /// For each vertex, the position in `roots` of its component's sink.
    pub component: Vec<usize>,
}

impl Arborescence {
    pub fn display<'a>(&'a self, g: &'a IncidenceHypergraph) -> impl fmt::Display + 'a {
        ArborescenceDisplay { a: self, g }
    }
}

struct ArborescenceDisplay<'a> {
    a: &'a Arborescence,
    g: &'a IncidenceHypergraph,
}

impl fmt::Display for ArborescenceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.a.roots.iter().enumerate().map(|(k, &r)| {
            let vs = (0..self.a.component.len())
                .filter(|&v| self.a.component[v] == k)
                .map(|v| self.g.vertices()[v].as_str())
                .join(",");
            format!("{}:{{{vs}}}", self.g.vertices()[r])
        });
        let edges = self.a.edges.iter().map(|&e| self.g.edges()[e].as_str()).join(",");
        write!(f, "sinks {} edges {{{edges}}}", parts.format(" "))
    }
}

fn components_for(n: usize, roots: &[usize], edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut component = vec![usize::MAX; n];
    for (k, &r) in roots.iter().enumerate() {
        if component[r] != usize::MAX {
            return None;
        }
        let mut stack = vec![r];
        component[r] = k;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if component[w] == usize::MAX {
                    component[w] = k;
                    stack.push(w);
                } else if component[w] != k {
                    return None;
                }
            }
        }
    }
    component.iter().all(|&c| c != usize::MAX).then_some(component)
}

/// Every spanning forest of `g` whose components each contain exactly one of
/// `roots`, by brute force over edge subsets.
pub fn k_arborescences(g: &IncidenceHypergraph, roots: &[usize], limits: &Limits) -> Result<Vec<Arborescence>> {
    if !g.is_graph_like() {
        return Err(domain("arborescences need a graph"));
    }
    let n = g.vertex_count();
    if n > limits.max_total_minor_vertices {
        return Err(resource(format!("{n} vertices exceed the arborescence limit")));
    }
    if roots.iter().any(|&r| r >= n) || roots.iter().collect::<BTreeSet<_>>().len() != roots.len() {
        return Err(domain("roots must be distinct vertices"));
    }
    if roots.is_empty() {
        return Ok(Vec::new());
    }
    let ends = endpoints(g);
    let m = ends.len();
    if m > 30 {
        return Err(resource(format!("{m} edges is too many for subset enumeration")));
    }
    let size = n - roots.len();
    let mut out = Vec::new();
    for chosen in (0..m).combinations(size) {
        let pairs: Vec<(usize, usize)> = chosen.iter().map(|&e| ends[e]).collect();
        if !is_forest(n, pairs.iter().copied()) {
            continue;
        }
        if let Some(component) = components_for(n, roots, &pairs) {
            out.push(Arborescence {
                roots: roots.to_vec(),
                edges: chosen,
                component,
            });
        }
    }
    Ok(out)
}

/// Unpack every remaining backstep and read the result as a forest directed
/// towards the vertices of `u`. Fails if a circle remains.
pub fn total_unpacking(g: &BidirectedGraph, s: &ReducedContributor) -> Result<Arborescence> {
    let n = s.steps.len();
    let unpacked: Vec<Option<OneStep>> = s
        .steps
        .iter()
        .map(|st| st.map(|st| if st.is_backstep() { g.unpacked(&st) } else { st }))
        .collect();
    let mut component = vec![usize::MAX; n];
    for (k, &u) in s.class.u.iter().enumerate() {
        component[u] = k;
    }
    for start in 0..n {
        let mut path = Vec::new();
        let mut v = start;
        while component[v] == usize::MAX {
            if path.len() > n {
                return Err(invariant("total unpacking produced a circle"));
            }
            path.push(v);
            v = unpacked[v].expect("non-sink vertices keep a step").head;
        }
        for x in path {
            component[x] = component[v];
        }
    }
    let mut edges: Vec<usize> = unpacked.iter().flatten().map(|st| st.edge).collect();
    edges.sort_unstable();
    Ok(Arborescence {
        roots: s.class.u.clone(),
        edges,
        component,
    })
}

/// Reduced contributors that are the only nonzero member of their
/// activation class within `class`, computed on the completion, each with
/// its total unpacking.
pub fn single_element_classes(
    g: &BidirectedGraph,
    class: &MinorClass,
    limits: &Limits,
) -> Result<Vec<(ReducedContributor, Arborescence)>> {
    let n = g.structure().vertex_count();
    if n > limits.max_total_minor_vertices {
        return Err(resource(format!("{n} vertices exceed the arborescence limit")));
    }
    MinorClass::new(class.u.clone(), class.w.clone(), n)?;
    let complete = g.completion()?;
    let og = complete.oriented();
    let mut singles = BTreeSet::new();
    for a in activation_classes(&complete, limits)? {
        let restricted: BTreeSet<ReducedContributor> = a
            .members
            .iter()
            .filter(|c| class.u.iter().zip(&class.w).all(|(&u, &w)| c.steps()[u].head == w))
            .map(|c| reduce_contributor(c, class))
            .collect::<Result<BTreeSet<_>>>()?
            .into_iter()
            .filter(|s| s.steps.iter().flatten().all(|st| st.sign(og) != 0))
            .collect();
        if restricted.len() == 1 {
            singles.extend(restricted);
        }
    }
    singles
        .into_iter()
        .map(|s| {
            let arb = total_unpacking(&complete, &s)?;
            Ok((s, arb))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lim() -> Limits {
        Limits::default()
    }

    fn bidirected(n: usize, edges: &[(usize, usize)]) -> BidirectedGraph {
        BidirectedGraph::new(fixtures::positive_graph(n, edges)).unwrap()
    }

    #[test]
    fn pack_unpack_inverse() {
        let g = bidirected(3, &fixtures::complete_edges(3));
        for c in enumerate_contributors(g.structure(), false, &lim()).unwrap() {
            let mut packed = c.steps().to_vec();
            for v in 0..3 {
                if packed[v].is_adjacency() {
                    let once = pack(&packed, v).unwrap();
                    assert_eq!(unpack(&g, &once, v).unwrap(), packed);
                    packed = once;
                }
            }
            assert!(packed.iter().all(OneStep::is_backstep));
            assert!(pack(&packed, 0).is_err());
        }
        let k2 = bidirected(2, &[(0, 1)]);
        let bottom = enumerate_contributors(k2.structure(), false, &lim()).unwrap()[0].clone();
        assert!(bottom.steps().iter().all(OneStep::is_backstep));
        assert_eq!(unpack(&k2, bottom.steps(), 0).unwrap()[0].head, 1);
    }

    #[test]
    fn activation_examples() {
        let k2 = activation_classes(&bidirected(2, &[(0, 1)]), &lim()).unwrap();
        assert_eq!(k2.len(), 1);
        assert_eq!(k2[0].members.len(), 2);
        let two = activation_classes(&bidirected(4, &[(0, 1), (2, 3)]), &lim()).unwrap();
        let big = two.iter().find(|a| a.generators.len() == 2).unwrap();
        assert_eq!(big.members.len(), 4);
        assert!(activation_classes(&bidirected(1, &[]), &lim()).unwrap().is_empty());
        let k3 = activation_classes(&bidirected(3, &fixtures::complete_edges(3)), &lim()).unwrap();
        assert_eq!(k3.iter().map(|a| a.members.len()).sum::<usize>(), 16);
    }

    #[test]
    fn arborescence_counts() {
        let k3 = fixtures::k3();
        assert_eq!(k_arborescences(&k3, &[0], &lim()).unwrap().len(), 3);
        assert_eq!(k_arborescences(&k3, &[0, 1], &lim()).unwrap().len(), 2);
        let empty = fixtures::graph(3, &[]);
        assert_eq!(k_arborescences(&empty, &[0, 1, 2], &lim()).unwrap().len(), 1);
        let k4 = fixtures::graph(4, &fixtures::complete_edges(4));
        assert_eq!(k_arborescences(&k4, &[0], &lim()).unwrap().len(), 16);
    }

    #[test]
    fn single_element_classes_match_arborescences() {
        let k3 = bidirected(3, &fixtures::complete_edges(3));
        let one = MinorClass::new(vec![0], vec![0], 3).unwrap();
        assert_eq!(single_element_classes(&k3, &one, &lim()).unwrap().len(), 3);
        let two = MinorClass::new(vec![0, 1], vec![0, 1], 3).unwrap();
        let singles = single_element_classes(&k3, &two, &lim()).unwrap();
        let arbs: BTreeSet<Arborescence> = k_arborescences(k3.structure(), &[0, 1], &lim()).unwrap().into_iter().collect();
        let found: BTreeSet<Arborescence> = singles.into_iter().map(|(_, a)| a).collect();
        assert_eq!(found, arbs);
        let k4 = bidirected(4, &fixtures::complete_edges(4));
        let root = MinorClass::new(vec![0], vec![0], 4).unwrap();
        assert_eq!(single_element_classes(&k4, &root, &lim()).unwrap().len(), 16);
    }

    #[test]
    fn completion_adds_zero_edges() {
        let path = bidirected(3, &[(0, 1), (1, 2)]);
        let c = path.completion().unwrap();
        assert_eq!(c.structure().edge_count(), 3);
        assert!(c.is_completion_edge(2));
        assert_eq!(c.edge_endpoints(2), (0, 2));
        assert_eq!(&c.oriented().signs()[4..], &[0, 0]);
    }
}
