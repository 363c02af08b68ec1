//! Finite-set realizations of the topos structure on incidence hypergraphs:
//! the partial morphism representer, the subobject classifier, the power
//! hypergraph, injectivity and the injective envelope (loading).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{domain, invariant, resource, Result};
use crate::homomorphism::{for_each_homomorphism, Homomorphism};
use crate::hypergraph::{
    generated_subhypergraph, IncidenceHypergraph, OrientedHypergraph, Product, SignOrigin,
    Subhypergraph,
};

/// An element of a partial morphism representer: either an original element
/// (`True`) or one of the added "false" elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TaggedElement {
    True(String),
    FalseVertex,
    FalseEdge,
    FalseIncidence {
        vertex: Box<TaggedElement>,
        edge: Box<TaggedElement>,
    },
}

impl TaggedElement {
    pub fn is_true(&self) -> bool {
        matches!(self, TaggedElement::True(_))
    }
}

impl fmt::Display for TaggedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaggedElement::True(id) => write!(f, "(1,{id})"),
            TaggedElement::FalseVertex | TaggedElement::FalseEdge => write!(f, "(0,0)"),
            TaggedElement::FalseIncidence { vertex, edge } => write!(f, "(0,{vertex},{edge})"),
        }
    }
}

/// The empty hypergraph.
pub fn initial() -> IncidenceHypergraph {
    IncidenceHypergraph::empty()
}

/// The 1-edge: one vertex, one edge, one incidence, all named `1`.
pub fn terminal() -> IncidenceHypergraph {
    IncidenceHypergraph::from_indices(
        vec!["1".into()],
        vec!["1".into()],
        vec![("1".into(), 0, 0)],
    )
    .expect("terminal object is valid")
}

/// `G̃` with its embedding `η: G → G̃` and element tags.
///
/// Layout: true vertices `0..n` then the false vertex at `n`; likewise for
/// edges. True incidences come first, followed by one false incidence for
/// every pair `(v, e)` of `G̃`, in row-major order.
#[derive(Debug, Clone)]
pub struct Tilde {
    pub graph: Arc<IncidenceHypergraph>,
    pub eta: Homomorphism,
    pub vertex_tags: Vec<TaggedElement>,
    pub edge_tags: Vec<TaggedElement>,
    pub incidence_tags: Vec<TaggedElement>,
}

impl Tilde {
    pub fn false_vertex(&self) -> usize {
        self.vertex_tags.len() - 1
    }

    pub fn false_edge(&self) -> usize {
        self.edge_tags.len() - 1
    }

    /// Index of the false incidence over the `G̃` vertex `v` and edge `e`.
    pub fn false_incidence(&self, v: usize, e: usize) -> usize {
        let base = self.incidence_tags.len() - self.vertex_tags.len() * self.edge_tags.len();
        base + v * self.edge_tags.len() + e
    }
}

pub fn tilde(g: &IncidenceHypergraph) -> Result<Tilde> {
    let (nv, ne, ni) = (g.vertex_count(), g.edge_count(), g.incidence_count());
    let mut vertex_tags: Vec<TaggedElement> =
        g.vertices().iter().cloned().map(TaggedElement::True).collect();
    vertex_tags.push(TaggedElement::FalseVertex);
    let mut edge_tags: Vec<TaggedElement> =
        g.edges().iter().cloned().map(TaggedElement::True).collect();
    edge_tags.push(TaggedElement::FalseEdge);
    let mut incidence_tags: Vec<TaggedElement> = g
        .incidences()
        .iter()
        .map(|i| TaggedElement::True(i.id.clone()))
        .collect();
    let mut incidences: Vec<(String, usize, usize)> = g
        .incidences()
        .iter()
        .zip(&incidence_tags)
        .map(|(i, t)| (t.to_string(), i.vertex, i.edge))
        .collect();
    for v in 0..=nv {
        for e in 0..=ne {
            let tag = TaggedElement::FalseIncidence {
                vertex: Box::new(vertex_tags[v].clone()),
                edge: Box::new(edge_tags[e].clone()),
            };
            incidences.push((tag.to_string(), v, e));
            incidence_tags.push(tag);
        }
    }
    let graph = IncidenceHypergraph::from_indices(
        vertex_tags.iter().map(ToString::to_string).collect(),
        edge_tags.iter().map(ToString::to_string).collect(),
        incidences,
    )
    .map_err(|e| invariant(format!("tagged ids collide: {e}")))?;
    let graph = Arc::new(graph);
    let eta = Homomorphism::from_parts_unchecked(
        Arc::new(g.clone()),
        graph.clone(),
        (0..nv).collect(),
        (0..ne).collect(),
        (0..ni).collect(),
    );
    Ok(Tilde {
        graph,
        eta,
        vertex_tags,
        edge_tags,
        incidence_tags,
    })
}

/// The functorial action of `~` on a homomorphism.
pub fn tilde_map(phi: &Homomorphism) -> Result<Homomorphism> {
    let tg = tilde(phi.source())?;
    let th = tilde(phi.target())?;
    tilde_map_between(phi, &tg, &th)
}

pub fn tilde_map_between(phi: &Homomorphism, tg: &Tilde, th: &Tilde) -> Result<Homomorphism> {
    let g = phi.source();
    let (nv, ne, ni) = (g.vertex_count(), g.edge_count(), g.incidence_count());
    let vmap: Vec<usize> = (0..=nv)
        .map(|v| if v < nv { phi.vertex_map[v] } else { th.false_vertex() })
        .collect();
    let emap: Vec<usize> = (0..=ne)
        .map(|e| if e < ne { phi.edge_map[e] } else { th.false_edge() })
        .collect();
    let imap: Vec<usize> = (0..tg.graph.incidence_count())
        .map(|k| {
            if k < ni {
                phi.incidence_map[k]
            } else {
                th.false_incidence(vmap[tg.graph.vertex_of(k)], emap[tg.graph.edge_of(k)])
            }
        })
        .collect();
    Homomorphism::new(tg.graph.clone(), th.graph.clone(), vmap, emap, imap)
}

/// For a monic `φ: H → K` and any `ψ: H → G`, the classifying map
/// `ψ̂: K → G̃` of the partial map `(φ, ψ)`.
pub fn represent_partial(phi: &Homomorphism, psi: &Homomorphism, tg: &Tilde) -> Result<Homomorphism> {
    if !phi.is_monic() {
        return Err(domain("represent_partial needs a monic first leg"));
    }
    if phi.source() != psi.source() {
        return Err(domain("the two legs must share a source"));
    }
    if tg.eta.source() != psi.target() {
        return Err(domain("the representer does not belong to the target of the second leg"));
    }
    let k = phi.target();
    let mut vmap = vec![tg.false_vertex(); k.vertex_count()];
    for (w, &v) in phi.vertex_map.iter().enumerate() {
        vmap[v] = psi.vertex_map[w];
    }
    let mut emap = vec![tg.false_edge(); k.edge_count()];
    for (f, &e) in phi.edge_map.iter().enumerate() {
        emap[e] = psi.edge_map[f];
    }
    let mut imap: Vec<Option<usize>> = vec![None; k.incidence_count()];
    for (j, &i) in phi.incidence_map.iter().enumerate() {
        imap[i] = Some(psi.incidence_map[j]);
    }
    let imap = imap
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.unwrap_or_else(|| tg.false_incidence(vmap[k.vertex_of(i)], emap[k.edge_of(i)])))
        .collect();
    Homomorphism::new(k.clone(), tg.graph.clone(), vmap, emap, imap)
}

/// Whether `(p1: P → A, p2: P → B)` is a pullback of `(f: A → X, g: B → X)`,
/// checked componentwise: the square commutes and `P` is in bijection with
/// the fibre product in each of the three component sets.
pub fn is_pullback(p1: &Homomorphism, p2: &Homomorphism, f: &Homomorphism, g: &Homomorphism) -> bool {
    fn component(p1: &[usize], p2: &[usize], f: &[usize], g: &[usize]) -> bool {
        if p1.iter().zip(p2).any(|(&a, &b)| f[a] != g[b]) {
            return false;
        }
        let fibre: BTreeSet<(usize, usize)> = (0..f.len())
            .flat_map(|a| (0..g.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| f[a] == g[b])
            .collect();
        let image: BTreeSet<(usize, usize)> = p1.iter().copied().zip(p2.iter().copied()).collect();
        image.len() == p1.len() && image == fibre
    }
    component(&p1.vertex_map, &p2.vertex_map, &f.vertex_map, &g.vertex_map)
        && component(&p1.edge_map, &p2.edge_map, &f.edge_map, &g.edge_map)
        && component(
            &p1.incidence_map,
            &p2.incidence_map,
            &f.incidence_map,
            &g.incidence_map,
        )
}

/// The subobject classifier `Ω = 1̃` with its truth map.
#[derive(Debug, Clone)]
pub struct SubobjectClassifier {
    pub tilde: Tilde,
}

impl SubobjectClassifier {
    pub fn new() -> Self {
        Self {
            tilde: tilde(&terminal()).expect("terminal ids never collide"),
        }
    }

    pub fn omega(&self) -> &Arc<IncidenceHypergraph> {
        &self.tilde.graph
    }

    pub fn truth(&self) -> &Homomorphism {
        &self.tilde.eta
    }

    pub const TRUE_VERTEX: usize = 0;
    pub const FALSE_VERTEX: usize = 1;
    pub const TRUE_EDGE: usize = 0;
    pub const FALSE_EDGE: usize = 1;
    pub const TRUE_INCIDENCE: usize = 0;

    /// The false incidence over vertex truth value `v` and edge truth value `e`.
    pub fn false_incidence(&self, v_true: bool, e_true: bool) -> usize {
        let v = if v_true { Self::TRUE_VERTEX } else { Self::FALSE_VERTEX };
        let e = if e_true { Self::TRUE_EDGE } else { Self::FALSE_EDGE };
        self.tilde.false_incidence(v, e)
    }
}

impl Default for SubobjectClassifier {
    fn default() -> Self {
        Self::new()
    }
}

/// The classifying map `χ_K: G → Ω` of a subhypergraph.
pub fn classify(k: &Subhypergraph, omega: &SubobjectClassifier) -> Result<Homomorphism> {
    let g = k.parent();
    let vmap: Vec<usize> = (0..g.vertex_count())
        .map(|v| {
            if k.vertices.contains(&v) {
                SubobjectClassifier::TRUE_VERTEX
            } else {
                SubobjectClassifier::FALSE_VERTEX
            }
        })
        .collect();
    let emap: Vec<usize> = (0..g.edge_count())
        .map(|e| {
            if k.edges.contains(&e) {
                SubobjectClassifier::TRUE_EDGE
            } else {
                SubobjectClassifier::FALSE_EDGE
            }
        })
        .collect();
    let imap = (0..g.incidence_count())
        .map(|i| {
            if k.incidences.contains(&i) {
                SubobjectClassifier::TRUE_INCIDENCE
            } else {
                omega.false_incidence(
                    vmap[g.vertex_of(i)] == SubobjectClassifier::TRUE_VERTEX,
                    emap[g.edge_of(i)] == SubobjectClassifier::TRUE_EDGE,
                )
            }
        })
        .collect();
    Homomorphism::new(g.clone(), omega.omega().clone(), vmap, emap, imap)
}

/// The subhypergraph generated by the true preimages of `χ`.
pub fn subobject_from_map(chi: &Homomorphism, omega: &SubobjectClassifier) -> Result<Subhypergraph> {
    if chi.target().as_ref() != omega.omega().as_ref() {
        return Err(domain("classifying map must land in the subobject classifier"));
    }
    let s1 = preimage(&chi.vertex_map, SubobjectClassifier::TRUE_VERTEX);
    let s2 = preimage(&chi.edge_map, SubobjectClassifier::TRUE_EDGE);
    let s3 = preimage(&chi.incidence_map, SubobjectClassifier::TRUE_INCIDENCE);
    generated_subhypergraph(chi.source(), &s1, &s2, &s3)
}

fn preimage(map: &[usize], value: usize) -> BTreeSet<usize> {
    map.iter()
        .enumerate()
        .filter(|(_, &x)| x == value)
        .map(|(k, _)| k)
        .collect()
}

fn preimage_of_set(map: &[usize], values: &BTreeSet<usize>) -> BTreeSet<usize> {
    map.iter()
        .enumerate()
        .filter(|(_, x)| values.contains(x))
        .map(|(k, _)| k)
        .collect()
}

/// Number of subhypergraphs, by the closed-form sum over incidence subsets.
pub fn count_subhypergraphs(g: &IncidenceHypergraph) -> Result<u128> {
    let ni = g.incidence_count();
    if ni > 24 {
        return Err(resource(format!("{ni} incidences is too many to sum over")));
    }
    let (nv, ne) = (g.vertex_count() as u32, g.edge_count() as u32);
    let mut total: u128 = 0;
    for mask in 0u32..(1 << ni) {
        let (vs, es) = closure_sets(g, mask);
        let free = (nv - vs.len() as u32) + (ne - es.len() as u32);
        let term = 1u128
            .checked_shl(free)
            .filter(|_| free < 127)
            .ok_or_else(|| resource("subhypergraph count overflows"))?;
        total = total.saturating_add(term);
    }
    Ok(total)
}

fn closure_sets(g: &IncidenceHypergraph, mask: u32) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    for i in 0..g.incidence_count() {
        if mask >> i & 1 == 1 {
            vs.insert(g.vertex_of(i));
            es.insert(g.edge_of(i));
        }
    }
    (vs, es)
}

/// Every subhypergraph, incidence subset first, then the free vertex and edge
/// choices. Fails before materializing anything when the count exceeds `cap`.
pub fn enumerate_subhypergraphs(g: &Arc<IncidenceHypergraph>, cap: u128) -> Result<Vec<Subhypergraph>> {
    let count = count_subhypergraphs(g)?;
    if count > cap {
        return Err(resource(format!("{count} subhypergraphs exceed cap {cap}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    for mask in 0u32..(1 << g.incidence_count()) {
        let (vs, es) = closure_sets(g, mask);
        let incidences: BTreeSet<usize> = (0..g.incidence_count()).filter(|i| mask >> i & 1 == 1).collect();
        let free_v: Vec<usize> = (0..g.vertex_count()).filter(|v| !vs.contains(v)).collect();
        let free_e: Vec<usize> = (0..g.edge_count()).filter(|e| !es.contains(e)).collect();
        for vmask in 0u64..(1 << free_v.len()) {
            let mut vertices = vs.clone();
            vertices.extend(free_v.iter().enumerate().filter(|(k, _)| vmask >> k & 1 == 1).map(|(_, &v)| v));
            for emask in 0u64..(1 << free_e.len()) {
                let mut edges = es.clone();
                edges.extend(free_e.iter().enumerate().filter(|(k, _)| emask >> k & 1 == 1).map(|(_, &e)| e));
                out.push(Subhypergraph::new_unchecked(
                    g.clone(),
                    vertices.clone(),
                    edges,
                    incidences.clone(),
                ));
            }
        }
    }
    if out.len() as u128 != count {
        return Err(invariant("subhypergraph enumeration disagrees with the count formula"));
    }
    Ok(out)
}

/// The power hypergraph `Pwr(G)`: vertex subsets, edge subsets, and one
/// incidence per subhypergraph.
#[derive(Debug, Clone)]
pub struct PowerHypergraph {
    pub base: Arc<IncidenceHypergraph>,
    pub graph: Arc<IncidenceHypergraph>,
    pub vertex_sets: Vec<BTreeSet<usize>>,
    pub edge_sets: Vec<BTreeSet<usize>>,
    pub members: Vec<Subhypergraph>,
    member_index: HashMap<Subhypergraph, usize>,
    vertex_set_index: HashMap<BTreeSet<usize>, usize>,
    edge_set_index: HashMap<BTreeSet<usize>, usize>,
}

fn all_subsets(n: usize) -> Vec<BTreeSet<usize>> {
    (0u64..(1 << n))
        .map(|m| (0..n).filter(|k| m >> k & 1 == 1).collect())
        .collect()
}

fn set_name(ids: &[String], set: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = set.iter().map(|&k| ids[k].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

pub fn power(g: &Arc<IncidenceHypergraph>, cap: u128) -> Result<PowerHypergraph> {
    if g.vertex_count() > 20 || g.edge_count() > 20 {
        return Err(resource("power hypergraph vertex or edge set too large"));
    }
    let members = enumerate_subhypergraphs(g, cap)?;
    let vertex_sets = all_subsets(g.vertex_count());
    let edge_sets = all_subsets(g.edge_count());
    let vertex_set_index: HashMap<_, _> = vertex_sets.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
    let edge_set_index: HashMap<_, _> = edge_sets.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
    let incidence_ids: Vec<String> = g.incidences().iter().map(|i| i.id.clone()).collect();
    let incidences = members
        .iter()
        .map(|m| {
            let id = format!(
                "({},{},{})",
                set_name(g.vertices(), &m.vertices),
                set_name(g.edges(), &m.edges),
                set_name(&incidence_ids, &m.incidences)
            );
            (id, vertex_set_index[&m.vertices], edge_set_index[&m.edges])
        })
        .collect();
    let graph = IncidenceHypergraph::from_indices(
        vertex_sets.iter().map(|s| set_name(g.vertices(), s)).collect(),
        edge_sets.iter().map(|s| set_name(g.edges(), s)).collect(),
        incidences,
    )
    .map_err(|e| invariant(format!("power hypergraph ids collide: {e}")))?;
    let member_index = members.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    Ok(PowerHypergraph {
        base: g.clone(),
        graph: Arc::new(graph),
        vertex_sets,
        edge_sets,
        members,
        member_index,
        vertex_set_index,
        edge_set_index,
    })
}

impl PowerHypergraph {
    pub fn member(&self, k: &Subhypergraph) -> Option<usize> {
        self.member_index.get(k).copied()
    }

    pub fn vertex_set(&self, s: &BTreeSet<usize>) -> Option<usize> {
        self.vertex_set_index.get(s).copied()
    }

    pub fn edge_set(&self, s: &BTreeSet<usize>) -> Option<usize> {
        self.edge_set_index.get(s).copied()
    }
}

/// The membership map `elem_G: G ∏ Pwr(G) → Ω`, together with the product
/// it is defined on.
pub fn elem(pwr: &PowerHypergraph, omega: &SubobjectClassifier) -> Result<(Product, Homomorphism)> {
    let g = &pwr.base;
    let product = g.product(&pwr.graph);
    let p = &pwr.graph;
    let mut vmap = vec![0; product.graph.vertex_count()];
    for v in 0..g.vertex_count() {
        for (s, set) in pwr.vertex_sets.iter().enumerate() {
            vmap[product.vertex(v, s)] = if set.contains(&v) {
                SubobjectClassifier::TRUE_VERTEX
            } else {
                SubobjectClassifier::FALSE_VERTEX
            };
        }
    }
    let mut emap = vec![0; product.graph.edge_count()];
    for e in 0..g.edge_count() {
        for (t, set) in pwr.edge_sets.iter().enumerate() {
            emap[product.edge(e, t)] = if set.contains(&e) {
                SubobjectClassifier::TRUE_EDGE
            } else {
                SubobjectClassifier::FALSE_EDGE
            };
        }
    }
    let mut imap = vec![0; product.graph.incidence_count()];
    for i in 0..g.incidence_count() {
        for k in 0..p.incidence_count() {
            let member = &pwr.members[k];
            imap[product.incidence(i, k)] = if member.incidences.contains(&i) {
                SubobjectClassifier::TRUE_INCIDENCE
            } else {
                omega.false_incidence(
                    member.vertices.contains(&g.vertex_of(i)),
                    member.edges.contains(&g.edge_of(i)),
                )
            };
        }
    }
    let map = Homomorphism::new(product.graph.clone(), omega.omega().clone(), vmap, emap, imap)?;
    Ok((product, map))
}

/// The transpose `φ̂: K → Pwr(G)` of `φ: G ∏ K → Ω`.
pub fn power_transpose(
    phi: &Homomorphism,
    product: &Product,
    pwr: &PowerHypergraph,
) -> Result<Homomorphism> {
    let g = product.left.target();
    let k = product.right.target();
    if phi.source().as_ref() != product.graph.as_ref() || g.as_ref() != pwr.base.as_ref() {
        return Err(domain("power_transpose: map, product and power hypergraph do not match"));
    }
    let true_vertices = |v: usize| -> BTreeSet<usize> {
        (0..g.vertex_count())
            .filter(|&w| phi.vertex_map[product.vertex(w, v)] == SubobjectClassifier::TRUE_VERTEX)
            .collect()
    };
    let true_edges = |e: usize| -> BTreeSet<usize> {
        (0..g.edge_count())
            .filter(|&f| phi.edge_map[product.edge(f, e)] == SubobjectClassifier::TRUE_EDGE)
            .collect()
    };
    let vmap = (0..k.vertex_count())
        .map(|v| pwr.vertex_set(&true_vertices(v)).expect("every subset is a vertex"))
        .collect();
    let emap = (0..k.edge_count())
        .map(|e| pwr.edge_set(&true_edges(e)).expect("every subset is an edge"))
        .collect();
    let imap = (0..k.incidence_count())
        .map(|i| {
            let t: BTreeSet<usize> = (0..g.incidence_count())
                .filter(|&j| phi.incidence_map[product.incidence(j, i)] == SubobjectClassifier::TRUE_INCIDENCE)
                .collect();
            let sub = generated_subhypergraph(
                &pwr.base,
                &true_vertices(k.vertex_of(i)),
                &true_edges(k.edge_of(i)),
                &t,
            )?;
            pwr.member(&sub)
                .ok_or_else(|| invariant("generated subhypergraph missing from the power hypergraph"))
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::new(k.clone(), pwr.graph.clone(), vmap, emap, imap)
}

/// `f × g` between two products.
pub fn product_map(
    f: &Homomorphism,
    g: &Homomorphism,
    source: &Product,
    target: &Product,
) -> Result<Homomorphism> {
    let (sa, sc) = (source.left.target(), source.right.target());
    if f.source().as_ref() != sa.as_ref() || g.source().as_ref() != sc.as_ref() {
        return Err(domain("product_map: factors do not match the source product"));
    }
    let mut vmap = vec![0; source.graph.vertex_count()];
    for a in 0..sa.vertex_count() {
        for c in 0..sc.vertex_count() {
            vmap[source.vertex(a, c)] = target.vertex(f.vertex_map[a], g.vertex_map[c]);
        }
    }
    let mut emap = vec![0; source.graph.edge_count()];
    for a in 0..sa.edge_count() {
        for c in 0..sc.edge_count() {
            emap[source.edge(a, c)] = target.edge(f.edge_map[a], g.edge_map[c]);
        }
    }
    let mut imap = vec![0; source.graph.incidence_count()];
    for a in 0..sa.incidence_count() {
        for c in 0..sc.incidence_count() {
            imap[source.incidence(a, c)] = target.incidence(f.incidence_map[a], g.incidence_map[c]);
        }
    }
    Homomorphism::new(source.graph.clone(), target.graph.clone(), vmap, emap, imap)
}

/// `Pwr(φ): Pwr(H) → Pwr(G)` for `φ: G → H`, by preimages.
pub fn power_map(phi: &Homomorphism, pwr_g: &PowerHypergraph, pwr_h: &PowerHypergraph) -> Result<Homomorphism> {
    if phi.source().as_ref() != pwr_g.base.as_ref() || phi.target().as_ref() != pwr_h.base.as_ref() {
        return Err(domain("power_map: power hypergraphs do not match the map"));
    }
    let vmap = pwr_h
        .vertex_sets
        .iter()
        .map(|s| pwr_g.vertex_set(&preimage_of_set(&phi.vertex_map, s)).expect("subset"))
        .collect();
    let emap = pwr_h
        .edge_sets
        .iter()
        .map(|t| pwr_g.edge_set(&preimage_of_set(&phi.edge_map, t)).expect("subset"))
        .collect();
    let imap = pwr_h
        .members
        .iter()
        .map(|k| {
            let sub = generated_subhypergraph(
                &pwr_g.base,
                &preimage_of_set(&phi.vertex_map, &k.vertices),
                &preimage_of_set(&phi.edge_map, &k.edges),
                &preimage_of_set(&phi.incidence_map, &k.incidences),
            )?;
            pwr_g
                .member(&sub)
                .ok_or_else(|| invariant("preimage subhypergraph missing from the power hypergraph"))
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::new(pwr_h.graph.clone(), pwr_g.graph.clone(), vmap, emap, imap)
}

/// Injective objects: nonempty vertex and edge sets and an incidence
/// between every vertex and every edge.
pub fn is_injective(g: &IncidenceHypergraph) -> bool {
    if g.vertex_count() == 0 || g.edge_count() == 0 {
        return false;
    }
    let mut hit = vec![false; g.vertex_count() * g.edge_count()];
    for i in g.incidences() {
        hit[i.vertex * g.edge_count() + i.edge] = true;
    }
    hit.into_iter().all(|h| h)
}

/// The six-condition characterization of essential monomorphisms.
pub fn is_essential_mono(phi: &Homomorphism) -> Result<bool> {
    if !phi.is_monic() {
        return Err(domain("is_essential_mono needs a monomorphism"));
    }
    let (g, h) = (phi.source(), phi.target());
    let bijective = |map: &[usize], target_len: usize| map.len() == target_len;
    // 1 and 2
    if g.vertex_count() > 0 {
        if !bijective(&phi.vertex_map, h.vertex_count()) {
            return Ok(false);
        }
    } else if h.vertex_count() > 1 {
        return Ok(false);
    }
    // 3 and 4
    if g.edge_count() > 0 {
        if !bijective(&phi.edge_map, h.edge_count()) {
            return Ok(false);
        }
    } else if h.edge_count() > 1 {
        return Ok(false);
    }
    // 5
    for v in 0..g.vertex_count() {
        for e in 0..g.edge_count() {
            let here = g.inc(v, e);
            if here.is_empty() {
                continue;
            }
            let image: BTreeSet<usize> = here.iter().map(|&i| phi.incidence_map[i]).collect();
            let there: BTreeSet<usize> = h.inc(phi.vertex_map[v], phi.edge_map[e]).into_iter().collect();
            if image != there {
                return Ok(false);
            }
        }
    }
    // 6
    let covered: BTreeSet<(usize, usize)> = phi
        .incidence_map
        .iter()
        .map(|&j| (h.vertex_of(j), h.edge_of(j)))
        .collect();
    for x in 0..h.vertex_count() {
        for y in 0..h.edge_count() {
            if !covered.contains(&(x, y)) && h.inc(x, y).len() > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The loading `L(G)` with its essential embedding `j_G`.
#[derive(Debug, Clone)]
pub struct Loading {
    pub graph: Arc<IncidenceHypergraph>,
    pub embedding: Homomorphism,
    /// Indices (in `graph`) of the incidences added by the loading.
    pub added_incidences: Vec<usize>,
    pub added_vertex: bool,
    pub added_edge: bool,
}

pub fn loading(g: &IncidenceHypergraph) -> Loading {
    let mut vertices = g.vertices().to_vec();
    let mut edges = g.edges().to_vec();
    let added_vertex = vertices.is_empty();
    let added_edge = edges.is_empty();
    if added_vertex {
        vertices.push("0".into());
    }
    if added_edge {
        edges.push("0".into());
    }
    let mut taken: BTreeSet<String> = g.incidences().iter().map(|i| i.id.clone()).collect();
    let mut incidences: Vec<(String, usize, usize)> = g
        .incidences()
        .iter()
        .map(|i| (i.id.clone(), i.vertex, i.edge))
        .collect();
    let mut hit = vec![false; vertices.len() * edges.len()];
    for i in g.incidences() {
        hit[i.vertex * edges.len() + i.edge] = true;
    }
    let mut added_incidences = Vec::new();
    for v in 0..vertices.len() {
        for e in 0..edges.len() {
            if hit[v * edges.len() + e] {
                continue;
            }
            let mut id = format!("(0,{},{})", vertices[v], edges[e]);
            while taken.contains(&id) {
                id.push('\'');
            }
            taken.insert(id.clone());
            added_incidences.push(incidences.len());
            incidences.push((id, v, e));
        }
    }
    let graph = Arc::new(
        IncidenceHypergraph::from_indices(vertices, edges, incidences)
            .expect("loading keeps ids unique"),
    );
    let embedding = Homomorphism::from_parts_unchecked(
        Arc::new(g.clone()),
        graph.clone(),
        (0..g.vertex_count()).collect(),
        (0..g.edge_count()).collect(),
        (0..g.incidence_count()).collect(),
    );
    Loading {
        graph,
        embedding,
        added_incidences,
        added_vertex,
        added_edge,
    }
}

/// The 0-loading: load the structure and sign every new incidence 0.
pub fn zero_loading(og: &OrientedHypergraph) -> OrientedHypergraph {
    let l = loading(og.structure());
    let n = l.graph.incidence_count();
    let mut signs = og.signs().to_vec();
    let mut origins = og.origins().to_vec();
    signs.resize(n, 0);
    origins.resize(n, SignOrigin::ZeroLoaded);
    OrientedHypergraph::with_origins(l.graph.as_ref().clone(), signs, origins)
        .expect("0-loading preserves sign invariants")
}

/// The monic `ψ: L(G) → G̃` with `ψ ∘ j_G = η_G`.
pub fn loading_into_tilde(l: &Loading, tg: &Tilde) -> Result<Homomorphism> {
    let g = l.embedding.source();
    let lg = &l.graph;
    let vmap: Vec<usize> = (0..lg.vertex_count())
        .map(|v| if l.added_vertex { tg.false_vertex() } else { v })
        .collect();
    let emap: Vec<usize> = (0..lg.edge_count())
        .map(|e| if l.added_edge { tg.false_edge() } else { e })
        .collect();
    let imap = (0..lg.incidence_count())
        .map(|i| {
            if i < g.incidence_count() {
                i
            } else {
                tg.false_incidence(vmap[lg.vertex_of(i)], emap[lg.edge_of(i)])
            }
        })
        .collect();
    Homomorphism::new(lg.clone(), tg.graph.clone(), vmap, emap, imap)
}

/// All minimal (under inclusion) injective subhypergraphs of `G̃` containing
/// the image of `η_G`. Exhaustive over the added elements, so only usable on
/// small inputs.
pub fn minimal_injective_in_tilde(tg: &Tilde, cap: u128) -> Result<Vec<Subhypergraph>> {
    let g = tg.eta.source();
    let parent = &tg.graph;
    let extra_incidences: Vec<usize> = (g.incidence_count()..parent.incidence_count()).collect();
    let space = 1u128
        .checked_shl(extra_incidences.len() as u32 + 2)
        .unwrap_or(u128::MAX);
    if space > cap {
        return Err(resource(format!("{space} candidate subhypergraphs exceed cap {cap}")));
    }
    let base_v: BTreeSet<usize> = (0..g.vertex_count()).collect();
    let base_e: BTreeSet<usize> = (0..g.edge_count()).collect();
    let base_i: BTreeSet<usize> = (0..g.incidence_count()).collect();
    let mut injective = Vec::new();
    for extra in 0u8..4 {
        let mut vs = base_v.clone();
        let mut es = base_e.clone();
        if extra & 1 == 1 {
            vs.insert(tg.false_vertex());
        }
        if extra & 2 == 2 {
            es.insert(tg.false_edge());
        }
        let allowed: Vec<usize> = extra_incidences
            .iter()
            .copied()
            .filter(|&i| vs.contains(&parent.vertex_of(i)) && es.contains(&parent.edge_of(i)))
            .collect();
        for mask in 0u64..(1 << allowed.len()) {
            let mut is = base_i.clone();
            is.extend(allowed.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i));
            let sub = Subhypergraph::new_unchecked(parent.clone(), vs.clone(), es.clone(), is);
            if is_injective(&sub.materialize()) {
                injective.push(sub);
            }
        }
    }
    let minimal = injective
        .iter()
        .filter(|s| {
            !injective
                .iter()
                .any(|t| t != *s && t.is_subhypergraph_of(s))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// All `K → G̃` maps that make `(φ, ψ)` a pullback of `(·, η_G)`; used to
/// check that `represent_partial` is the unique one.
pub fn pullback_classifiers(
    phi: &Homomorphism,
    psi: &Homomorphism,
    tg: &Tilde,
    cap: u128,
) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    let k = phi.target();
    for_each_homomorphism(k, &tg.graph, cap, |v, e, i| {
        let cand = Homomorphism::from_parts_unchecked(k.clone(), tg.graph.clone(), v.to_vec(), e.to_vec(), i.to_vec());
        if is_pullback(phi, psi, &cand, &tg.eta) {
            out.push(cand);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homomorphism::{count_homomorphisms, enumerate_homomorphisms};

    const CAP: u128 = 1_000_000_000;

    fn sizes(g: &IncidenceHypergraph) -> (usize, usize, usize) {
        (g.vertex_count(), g.edge_count(), g.incidence_count())
    }

    #[test]
    fn initial_and_terminal() {
        let t = Arc::new(terminal());
        let i = Arc::new(initial());
        for g in [fixtures::k3(), fixtures::g2(), initial()] {
            let g = Arc::new(g);
            assert_eq!(count_homomorphisms(&g, &t, CAP).unwrap(), 1);
            assert_eq!(count_homomorphisms(&i, &g, CAP).unwrap(), 1);
        }
        assert_eq!(count_homomorphisms(&t, &t, CAP).unwrap(), 1);
    }

    #[test]
    fn tilde_sizes() {
        assert_eq!(sizes(&tilde(&terminal()).unwrap().graph), (2, 2, 5));
        assert_eq!(sizes(&tilde(&initial()).unwrap().graph), (1, 1, 1));
        assert_eq!(sizes(&tilde(&fixtures::g2()).unwrap().graph), (4, 2, 11));
        let t = tilde(&fixtures::k3()).unwrap();
        assert!(t.eta.is_valid() && t.eta.is_monic());
        assert_eq!(t.incidence_tags[6].to_string(), "(0,(1,v1),(1,e12))");
    }

    #[test]
    fn omega_has_one_true_and_four_false_incidences() {
        let omega = SubobjectClassifier::new();
        let tags = &omega.tilde.incidence_tags;
        assert_eq!(tags.iter().filter(|t| t.is_true()).count(), 1);
        let falses: BTreeSet<(usize, usize)> = (0..5)
            .filter(|&k| !tags[k].is_true())
            .map(|k| (omega.omega().vertex_of(k), omega.omega().edge_of(k)))
            .collect();
        assert_eq!(falses.len(), 4);
        assert!(omega.truth().is_valid());
    }

    #[test]
    fn tilde_map_is_functorial() {
        let g2 = Arc::new(fixtures::g2());
        let id = Homomorphism::identity(g2.clone());
        let tid = tilde_map(&id).unwrap();
        assert_eq!(tid, Homomorphism::identity(tid.source().clone()));

        let p1 = Arc::new(fixtures::directed_path_one());
        let k3 = Arc::new(fixtures::k3());
        let fs = enumerate_homomorphisms(&p1, &g2, CAP).unwrap();
        let gs = enumerate_homomorphisms(&g2, &p1, CAP).unwrap();
        let hs = enumerate_homomorphisms(&p1, &k3, CAP).unwrap();
        for f in &fs {
            for g in &gs {
                let lhs = tilde_map(&f.then(g).unwrap()).unwrap();
                let rhs = tilde_map(f).unwrap().then(&tilde_map(g).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // collapsing both path vertices onto one K3 vertex is impossible, but
        // composing into the terminal collapses everything
        let t = Arc::new(terminal());
        let bang = enumerate_homomorphisms(&k3, &t, CAP).unwrap().remove(0);
        let tb = tilde_map(&bang).unwrap();
        let tk = tilde(&k3).unwrap();
        let tt = tilde(&t).unwrap();
        assert_eq!(tb.vertex_map[tk.false_vertex()], tt.false_vertex());
        assert!(!hs.is_empty());
    }

    #[test]
    fn represent_partial_cases() {
        let k3 = Arc::new(fixtures::k3());
        let t = Arc::new(terminal());
        let tt = tilde(&t).unwrap();
        let tk = tilde(&k3).unwrap();

        // total map: ψ̂ = η ∘ ψ
        let id = Homomorphism::identity(k3.clone());
        let hat = represent_partial(&id, &id, &tk).unwrap();
        assert_eq!(hat, id.then(&tk.eta).unwrap());

        // empty domain: everything false
        let empty = Arc::new(initial());
        let into_k3 = enumerate_homomorphisms(&empty, &k3, CAP).unwrap().remove(0);
        let into_t = enumerate_homomorphisms(&empty, &t, CAP).unwrap().remove(0);
        let hat = represent_partial(&into_k3, &into_t, &tt).unwrap();
        assert!(hat.vertex_map.iter().all(|&v| v == tt.false_vertex()));
        assert!(hat.incidence_map.iter().all(|&i| !tt.incidence_tags[i].is_true()));

        // a single vertex of K3
        let v1 = generated_subhypergraph(&k3, &[0].into(), &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let incl = v1.inclusion();
        let bang = enumerate_homomorphisms(incl.source(), &t, CAP).unwrap().remove(0);
        let hat = represent_partial(&incl, &bang, &tt).unwrap();
        assert_eq!(hat.vertex_map, vec![0, 1, 1]);
        assert!(is_pullback(&incl, &bang, &hat, &tt.eta));
        assert_eq!(pullback_classifiers(&incl, &bang, &tt, CAP).unwrap(), vec![hat]);

        let collapse = enumerate_homomorphisms(&k3, &t, CAP).unwrap().remove(0);
        assert!(represent_partial(&collapse, &collapse, &tt).is_err());
    }

    #[test]
    fn classify_round_trips_on_terminal() {
        let omega = SubobjectClassifier::new();
        let t = Arc::new(terminal());
        let subs = enumerate_subhypergraphs(&t, CAP).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(count_homomorphisms(&t, omega.omega(), CAP).unwrap(), 5);
        for s in &subs {
            let chi = classify(s, &omega).unwrap();
            assert_eq!(&subobject_from_map(&chi, &omega).unwrap(), s);
        }
        let k3 = Arc::new(fixtures::k3());
        let all = classify(&Subhypergraph::full(k3.clone()), &omega).unwrap();
        assert!(all.incidence_map.iter().all(|&i| i == SubobjectClassifier::TRUE_INCIDENCE));
        let none = classify(&Subhypergraph::empty(k3), &omega).unwrap();
        assert!(none.incidence_map.iter().all(|&i| i != SubobjectClassifier::TRUE_INCIDENCE));
        assert!(none.vertex_map.iter().all(|&v| v == SubobjectClassifier::FALSE_VERTEX));
    }

    #[test]
    fn classify_agrees_with_represent_partial() {
        let omega = SubobjectClassifier::new();
        let t = Arc::new(terminal());
        let g = Arc::new(fixtures::g2());
        for s in enumerate_subhypergraphs(&g, CAP).unwrap() {
            let incl = s.inclusion();
            let bang = enumerate_homomorphisms(incl.source(), &t, CAP).unwrap().remove(0);
            let hat = represent_partial(&incl, &bang, &omega.tilde).unwrap();
            assert_eq!(hat, classify(&s, &omega).unwrap());
        }
    }

    #[test]
    fn power_of_small_objects() {
        let omega = SubobjectClassifier::new();
        let t = Arc::new(terminal());
        let p = power(&t, CAP).unwrap();
        assert_eq!(sizes(&p.graph), (2, 2, 5));
        let pe = power(&Arc::new(initial()), CAP).unwrap();
        assert_eq!(sizes(&pe.graph), (1, 1, 1));

        let (product, el) = elem(&p, &omega).unwrap();
        assert!(el.is_valid());
        let tt = t.product(&t);
        let lhs = count_homomorphisms(&tt.graph, omega.omega(), CAP).unwrap();
        let rhs = count_homomorphisms(&t, &p.graph, CAP).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(product.graph.incidence_count(), 5);
    }

    #[test]
    fn power_transpose_round_trip() {
        let omega = SubobjectClassifier::new();
        let g = Arc::new(fixtures::directed_path_one());
        let k = Arc::new(terminal());
        let pwr = power(&g, CAP).unwrap();
        let (gp, el) = elem(&pwr, &omega).unwrap();
        let gk = g.product(&k);
        let id = Homomorphism::identity(g.clone());
        for phi in enumerate_homomorphisms(&gk.graph, omega.omega(), CAP).unwrap() {
            let hat = power_transpose(&phi, &gk, &pwr).unwrap();
            let back = product_map(&id, &hat, &gk, &gp).unwrap().then(&el).unwrap();
            assert_eq!(back, phi);
        }
    }

    #[test]
    fn power_map_contravariant() {
        let p1 = Arc::new(fixtures::directed_path_one());
        let g2 = Arc::new(fixtures::g2());
        let t = Arc::new(terminal());
        let pp = power(&p1, CAP).unwrap();
        let pg = power(&g2, CAP).unwrap();
        let pt = power(&t, CAP).unwrap();
        let bang = enumerate_homomorphisms(&g2, &t, CAP).unwrap().remove(0);
        for f in enumerate_homomorphisms(&p1, &g2, CAP).unwrap() {
            let composite = f.then(&bang).unwrap();
            let lhs = power_map(&composite, &pp, &pt).unwrap();
            let rhs = power_map(&bang, &pg, &pt)
                .unwrap()
                .then(&power_map(&f, &pp, &pg).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn injectivity() {
        assert!(is_injective(&terminal()));
        assert!(!is_injective(&fixtures::k3()));
        assert!(!is_injective(&initial()));
        assert!(is_injective(&fixtures::g2()));
    }

    #[test]
    fn essential_monos() {
        for g in [fixtures::k3(), fixtures::g2(), initial(), terminal()] {
            let l = loading(&g);
            assert!(is_essential_mono(&l.embedding).unwrap());
            let tg = tilde(&g).unwrap();
            assert_eq!(is_essential_mono(&tg.eta).unwrap(), g.is_empty());
            let id = Homomorphism::identity(Arc::new(g));
            assert!(is_essential_mono(&id).unwrap());
        }
        let k3 = Arc::new(fixtures::k3());
        let t = Arc::new(terminal());
        let collapse = enumerate_homomorphisms(&k3, &t, CAP).unwrap().remove(0);
        assert!(is_essential_mono(&collapse).is_err());
    }

    #[test]
    fn loading_k3_is_uniform() {
        let l = loading(&fixtures::k3());
        assert_eq!(l.graph.incidence_count(), 9);
        assert_eq!(l.added_incidences.len(), 3);
        for e in 0..3 {
            assert_eq!(l.graph.incidences_on_edge(e).count(), 3);
        }
        assert!(is_injective(&l.graph));
        let le = loading(&initial());
        assert_eq!(sizes(&le.graph), (1, 1, 1));
        let lt = loading(&fixtures::g2());
        assert_eq!(lt.graph.as_ref(), &fixtures::g2());
        assert!(lt.added_incidences.is_empty());
        // idempotent
        let again = loading(&l.graph);
        assert!(again.added_incidences.is_empty());
    }

    #[test]
    fn zero_loading_signs() {
        let og = fixtures::k3_positive();
        let z = zero_loading(&og);
        assert_eq!(&z.signs()[..6], og.signs());
        assert!(z.signs()[6..].iter().all(|&s| s == 0));
        assert!(z.origins()[6..].iter().all(|&o| o == SignOrigin::ZeroLoaded));
    }

    #[test]
    fn loading_is_the_minimal_injective_part_of_tilde() {
        for g in [fixtures::k3(), fixtures::g2(), initial(), fixtures::directed_path_one()] {
            let tg = tilde(&g).unwrap();
            let l = loading(&g);
            let minimal = minimal_injective_in_tilde(&tg, 1 << 24).unwrap();
            assert_eq!(minimal.len(), 1, "minimal injective part is unique");
            let psi = loading_into_tilde(&l, &tg).unwrap();
            assert!(psi.is_monic());
            assert_eq!(l.embedding.then(&psi).unwrap(), tg.eta);
            let image = Subhypergraph::new(
                tg.graph.clone(),
                psi.vertex_map.iter().copied().collect(),
                psi.edge_map.iter().copied().collect(),
                psi.incidence_map.iter().copied().collect(),
            )
            .unwrap();
            assert_eq!(image, minimal[0]);
        }
    }
}
