//! Finite incidence hypergraphs and their orientations.
//!
//! An incidence hypergraph is a set of vertices, a set of edges and a set of
//! incidences, each incidence pointing at one vertex and one edge. All ids are
//! opaque strings; the order in which they are supplied is the canonical order
//! used for matrix rows and columns and for every enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::homomorphism::Homomorphism;

/// One incidence, stored with the indices of its vertex and edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Incidence {
    pub id: String,
    pub vertex: usize,
    pub edge: usize,
}

/// An incidence given by ids, as it appears in input documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSpec {
    pub id: String,
    pub vertex: String,
    pub edge: String,
}

impl IncidenceSpec {
    pub fn new(id: impl Into<String>, vertex: impl Into<String>, edge: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            vertex: vertex.into(),
            edge: edge.into(),
        }
    }
}

/// The first invariant broken by a candidate hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex(String),
    DuplicateEdge(String),
    DuplicateIncidence(String),
    UnknownVertex { incidence: String, vertex: String },
    UnknownEdge { incidence: String, edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex id `{v}`"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge id `{e}`"),
            Violation::DuplicateIncidence(i) => write!(f, "duplicate incidence id `{i}`"),
            Violation::UnknownVertex { incidence, vertex } => {
                write!(f, "incidence `{incidence}` references unknown vertex `{vertex}`")
            }
            Violation::UnknownEdge { incidence, edge } => {
                write!(f, "incidence `{incidence}` references unknown edge `{edge}`")
            }
        }
    }
}

/// Checks the hypergraph invariants on raw id data without building anything.
pub fn validate(
    vertices: &[String],
    edges: &[String],
    incidences: &[IncidenceSpec],
) -> std::result::Result<(), Violation> {
    let mut seen = BTreeSet::new();
    for v in vertices {
        if !seen.insert(v.as_str()) {
            return Err(Violation::DuplicateVertex(v.clone()));
        }
    }
    let vertex_set = seen;
    let mut edge_set = BTreeSet::new();
    for e in edges {
        if !edge_set.insert(e.as_str()) {
            return Err(Violation::DuplicateEdge(e.clone()));
        }
    }
    let mut inc_set = BTreeSet::new();
    for i in incidences {
        if !inc_set.insert(i.id.as_str()) {
            return Err(Violation::DuplicateIncidence(i.id.clone()));
        }
        if !vertex_set.contains(i.vertex.as_str()) {
            return Err(Violation::UnknownVertex {
                incidence: i.id.clone(),
                vertex: i.vertex.clone(),
            });
        }
        if !edge_set.contains(i.edge.as_str()) {
            return Err(Violation::UnknownEdge {
                incidence: i.id.clone(),
                edge: i.edge.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct IncidenceHypergraph {
    vertices: Vec<String>,
    edges: Vec<String>,
    incidences: Vec<Incidence>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    incidence_index: HashMap<String, usize>,
}

impl PartialEq for IncidenceHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.incidences == other.incidences
    }
}

impl Eq for IncidenceHypergraph {}

impl IncidenceHypergraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a hypergraph from ids, rejecting anything `validate` rejects.
    pub fn from_ids<V, E>(vertices: V, edges: E, incidences: Vec<IncidenceSpec>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator,
        E::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let edges: Vec<String> = edges.into_iter().map(Into::into).collect();
        validate(&vertices, &edges, &incidences).map_err(|v| Error::Parse(v.to_string()))?;
        let vertex_index = index_of(&vertices);
        let edge_index = index_of(&edges);
        let incidences = incidences
            .into_iter()
            .map(|i| Incidence {
                vertex: vertex_index[&i.vertex],
                edge: edge_index[&i.edge],
                id: i.id,
            })
            .collect::<Vec<_>>();
        Ok(Self::assemble(vertices, edges, incidences))
    }

    /// Builds a hypergraph from ids plus index-based incidences.
    pub fn from_indices(
        vertices: Vec<String>,
        edges: Vec<String>,
        incidences: Vec<(String, usize, usize)>,
    ) -> Result<Self> {
        let specs = incidences
            .into_iter()
            .map(|(id, v, e)| {
                let vertex = vertices
                    .get(v)
                    .ok_or_else(|| domain(format!("incidence `{id}`: vertex index {v} out of range")))?;
                let edge = edges
                    .get(e)
                    .ok_or_else(|| domain(format!("incidence `{id}`: edge index {e} out of range")))?;
                Ok(IncidenceSpec::new(id, vertex.clone(), edge.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ids(vertices, edges, specs)
    }

    fn assemble(vertices: Vec<String>, edges: Vec<String>, incidences: Vec<Incidence>) -> Self {
        let vertex_index = index_of(&vertices);
        let edge_index = index_of(&edges);
        let incidence_index = incidences
            .iter()
            .enumerate()
            .map(|(k, i)| (i.id.clone(), k))
            .collect();
        Self {
            vertices,
            edges,
            incidences,
            vertex_index,
            edge_index,
            incidence_index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn incidence_count(&self) -> usize {
        self.incidences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.incidences.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn incidences(&self) -> &[Incidence] {
        &self.incidences
    }

    pub fn incidence(&self, i: usize) -> &Incidence {
        &self.incidences[i]
    }

    /// The vertex of incidence `i` (the map ς).
    pub fn vertex_of(&self, i: usize) -> usize {
        self.incidences[i].vertex
    }

    /// The edge of incidence `i` (the map ω).
    pub fn edge_of(&self, i: usize) -> usize {
        self.incidences[i].edge
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn incidence_index(&self, id: &str) -> Option<usize> {
        self.incidence_index.get(id).copied()
    }

    /// Incidences joining vertex `v` and edge `e`, in canonical order.
    pub fn inc(&self, v: usize, e: usize) -> Vec<usize> {
        self.incidences
            .iter()
            .enumerate()
            .filter(|(_, i)| i.vertex == v && i.edge == e)
            .map(|(k, _)| k)
            .collect()
    }

    /// `inc` by ids; unknown ids are a domain error.
    pub fn inc_by_id(&self, v: &str, e: &str) -> Result<Vec<String>> {
        let vi = self
            .vertex_index(v)
            .ok_or_else(|| domain(format!("unknown vertex `{v}`")))?;
        let ei = self
            .edge_index(e)
            .ok_or_else(|| domain(format!("unknown edge `{e}`")))?;
        Ok(self
            .inc(vi, ei)
            .into_iter()
            .map(|k| self.incidences[k].id.clone())
            .collect())
    }

    pub fn incidences_at_vertex(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.incidences.len()).filter(move |&k| self.incidences[k].vertex == v)
    }

    pub fn incidences_on_edge(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.incidences.len()).filter(move |&k| self.incidences[k].edge == e)
    }

    /// Whether every edge has exactly two incidences.
    pub fn is_graph_like(&self) -> bool {
        let mut sizes = vec![0usize; self.edges.len()];
        for i in &self.incidences {
            sizes[i.edge] += 1;
        }
        sizes.iter().all(|&s| s == 2)
    }

    /// Componentwise product; ids of the product are `(a,b)`.
    pub fn product(&self, other: &IncidenceHypergraph) -> Product {
        let pair = |a: &str, b: &str| format!("({a},{b})");
        let (nv, ne, ni) = (
            other.vertex_count(),
            other.edge_count(),
            other.incidence_count(),
        );
        let vertices = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| pair(a, b)))
            .collect::<Vec<_>>();
        let edges = self
            .edges
            .iter()
            .flat_map(|a| other.edges.iter().map(move |b| pair(a, b)))
            .collect::<Vec<_>>();
        let mut incidences = Vec::with_capacity(self.incidence_count() * ni);
        for x in &self.incidences {
            for y in &other.incidences {
                incidences.push(Incidence {
                    id: pair(&x.id, &y.id),
                    vertex: x.vertex * nv + y.vertex,
                    edge: x.edge * ne + y.edge,
                });
            }
        }
        let graph = Arc::new(Self::assemble(vertices, edges, incidences));
        let left_src = Arc::new(self.clone());
        let right_src = Arc::new(other.clone());
        let left = Homomorphism::from_parts_unchecked(
            graph.clone(),
            left_src,
            (0..graph.vertex_count()).map(|k| k / nv.max(1)).collect(),
            (0..graph.edge_count()).map(|k| k / ne.max(1)).collect(),
            (0..graph.incidence_count()).map(|k| k / ni.max(1)).collect(),
        );
        let right = Homomorphism::from_parts_unchecked(
            graph.clone(),
            right_src,
            (0..graph.vertex_count()).map(|k| k % nv.max(1)).collect(),
            (0..graph.edge_count()).map(|k| k % ne.max(1)).collect(),
            (0..graph.incidence_count()).map(|k| k % ni.max(1)).collect(),
        );
        Product { graph, left, right }
    }

    /// Tagged disjoint union; summand `k` contributes ids `k:id`.
    pub fn disjoint_union(parts: &[IncidenceHypergraph]) -> Coproduct {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut incidences = Vec::new();
        let mut offsets = Vec::with_capacity(parts.len());
        for (k, g) in parts.iter().enumerate() {
            let (ov, oe, oi) = (vertices.len(), edges.len(), incidences.len());
            offsets.push((ov, oe, oi));
            vertices.extend(g.vertices.iter().map(|v| format!("{k}:{v}")));
            edges.extend(g.edges.iter().map(|e| format!("{k}:{e}")));
            incidences.extend(g.incidences.iter().map(|i| Incidence {
                id: format!("{k}:{}", i.id),
                vertex: i.vertex + ov,
                edge: i.edge + oe,
            }));
        }
        let graph = Arc::new(Self::assemble(vertices, edges, incidences));
        let injections = parts
            .iter()
            .zip(&offsets)
            .map(|(g, &(ov, oe, oi))| {
                Homomorphism::from_parts_unchecked(
                    Arc::new(g.clone()),
                    graph.clone(),
                    (0..g.vertex_count()).map(|v| v + ov).collect(),
                    (0..g.edge_count()).map(|e| e + oe).collect(),
                    (0..g.incidence_count()).map(|i| i + oi).collect(),
                )
            })
            .collect();
        Coproduct { graph, injections }
    }
}

fn index_of(ids: &[String]) -> HashMap<String, usize> {
    ids.iter().enumerate().map(|(k, id)| (id.clone(), k)).collect()
}

/// A product together with its two projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub graph: Arc<IncidenceHypergraph>,
    pub left: Homomorphism,
    pub right: Homomorphism,
}

impl Product {
    /// Index of the product vertex `(a, b)`.
    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a * self.right.target().vertex_count() + b
    }

    pub fn edge(&self, a: usize, b: usize) -> usize {
        a * self.right.target().edge_count() + b
    }

    pub fn incidence(&self, a: usize, b: usize) -> usize {
        a * self.right.target().incidence_count() + b
    }
}

/// A disjoint union together with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub graph: Arc<IncidenceHypergraph>,
    pub injections: Vec<Homomorphism>,
}

/// A subhypergraph: subsets of a parent's vertices, edges and incidences,
/// closed under the incidence maps.
#[derive(Debug, Clone)]
pub struct Subhypergraph {
    parent: Arc<IncidenceHypergraph>,
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub incidences: BTreeSet<usize>,
}

impl PartialEq for Subhypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.incidences == other.incidences
            && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl Eq for Subhypergraph {}

impl std::hash::Hash for Subhypergraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
        self.edges.hash(state);
        self.incidences.hash(state);
    }
}

impl Subhypergraph {
    /// Checked constructor: the incidence subset must land inside the vertex
    /// and edge subsets.
    pub fn new(
        parent: Arc<IncidenceHypergraph>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<usize>,
        incidences: BTreeSet<usize>,
    ) -> Result<Self> {
        check_subsets(&parent, &vertices, &edges, &incidences)?;
        for &i in &incidences {
            if !vertices.contains(&parent.vertex_of(i)) || !edges.contains(&parent.edge_of(i)) {
                return Err(domain(format!(
                    "incidence `{}` is not closed in the subhypergraph",
                    parent.incidence(i).id
                )));
            }
        }
        Ok(Self {
            parent,
            vertices,
            edges,
            incidences,
        })
    }

    pub(crate) fn new_unchecked(
        parent: Arc<IncidenceHypergraph>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<usize>,
        incidences: BTreeSet<usize>,
    ) -> Self {
        Self {
            parent,
            vertices,
            edges,
            incidences,
        }
    }

    pub fn full(parent: Arc<IncidenceHypergraph>) -> Self {
        let vertices = (0..parent.vertex_count()).collect();
        let edges = (0..parent.edge_count()).collect();
        let incidences = (0..parent.incidence_count()).collect();
        Self::new_unchecked(parent, vertices, edges, incidences)
    }

    pub fn empty(parent: Arc<IncidenceHypergraph>) -> Self {
        Self::new_unchecked(parent, BTreeSet::new(), BTreeSet::new(), BTreeSet::new())
    }

    pub fn parent(&self) -> &Arc<IncidenceHypergraph> {
        &self.parent
    }

    /// A standalone copy keeping the parent's ids and canonical order.
    pub fn materialize(&self) -> IncidenceHypergraph {
        let vpos: HashMap<usize, usize> = self.vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let epos: HashMap<usize, usize> = self.edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let vertices = self.vertices.iter().map(|&v| self.parent.vertices[v].clone()).collect();
        let edges = self.edges.iter().map(|&e| self.parent.edges[e].clone()).collect();
        let incidences = self
            .incidences
            .iter()
            .map(|&i| {
                let inc = self.parent.incidence(i);
                Incidence {
                    id: inc.id.clone(),
                    vertex: vpos[&inc.vertex],
                    edge: epos[&inc.edge],
                }
            })
            .collect();
        IncidenceHypergraph::assemble(vertices, edges, incidences)
    }

    /// The canonical inclusion of the materialized subhypergraph.
    pub fn inclusion(&self) -> Homomorphism {
        let source = Arc::new(self.materialize());
        Homomorphism::from_parts_unchecked(
            source,
            self.parent.clone(),
            self.vertices.iter().copied().collect(),
            self.edges.iter().copied().collect(),
            self.incidences.iter().copied().collect(),
        )
    }

    pub fn is_subhypergraph_of(&self, other: &Subhypergraph) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self.incidences.is_subset(&other.incidences)
    }

    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.incidences.len()
    }
}

fn check_subsets(
    g: &IncidenceHypergraph,
    s1: &BTreeSet<usize>,
    s2: &BTreeSet<usize>,
    s3: &BTreeSet<usize>,
) -> Result<()> {
    if let Some(v) = s1.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(domain(format!("vertex index {v} is not in the hypergraph")));
    }
    if let Some(e) = s2.iter().find(|&&e| e >= g.edge_count()) {
        return Err(domain(format!("edge index {e} is not in the hypergraph")));
    }
    if let Some(i) = s3.iter().find(|&&i| i >= g.incidence_count()) {
        return Err(domain(format!("incidence index {i} is not in the hypergraph")));
    }
    Ok(())
}

/// The least subhypergraph containing the given vertices, edges and
/// incidences: each incidence drags in its vertex and edge.
pub fn generated_subhypergraph(
    g: &Arc<IncidenceHypergraph>,
    s1: &BTreeSet<usize>,
    s2: &BTreeSet<usize>,
    s3: &BTreeSet<usize>,
) -> Result<Subhypergraph> {
    check_subsets(g, s1, s2, s3)?;
    let mut vertices = s1.clone();
    let mut edges = s2.clone();
    for &i in s3 {
        vertices.insert(g.vertex_of(i));
        edges.insert(g.edge_of(i));
    }
    Ok(Subhypergraph::new_unchecked(g.clone(), vertices, edges, s3.clone()))
}

/// Where an incidence sign came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignOrigin {
    User,
    ZeroLoaded,
}

/// An incidence hypergraph with a sign in {-1, 0, +1} on every incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedHypergraph {
    structure: IncidenceHypergraph,
    signs: Vec<i8>,
    origins: Vec<SignOrigin>,
}

impl OrientedHypergraph {
    pub fn new(structure: IncidenceHypergraph, signs: Vec<i8>) -> Result<Self> {
        let origins = vec![SignOrigin::User; signs.len()];
        Self::with_origins(structure, signs, origins)
    }

    pub fn with_origins(
        structure: IncidenceHypergraph,
        signs: Vec<i8>,
        origins: Vec<SignOrigin>,
    ) -> Result<Self> {
        if signs.len() != structure.incidence_count() || origins.len() != signs.len() {
            return Err(domain(format!(
                "expected {} signs, got {}",
                structure.incidence_count(),
                signs.len()
            )));
        }
        if let Some(k) = signs.iter().position(|s| !(-1..=1).contains(s)) {
            return Err(domain(format!(
                "incidence `{}` has sign {} outside {{-1, 0, 1}}",
                structure.incidence(k).id,
                signs[k]
            )));
        }
        Ok(Self {
            structure,
            signs,
            origins,
        })
    }

    /// Every incidence signed +1.
    pub fn positive(structure: IncidenceHypergraph) -> Self {
        let n = structure.incidence_count();
        Self {
            structure,
            signs: vec![1; n],
            origins: vec![SignOrigin::User; n],
        }
    }

    pub fn structure(&self) -> &IncidenceHypergraph {
        &self.structure
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn origin(&self, i: usize) -> SignOrigin {
        self.origins[i]
    }

    pub fn origins(&self) -> &[SignOrigin] {
        &self.origins
    }

    pub fn vertex_count(&self) -> usize {
        self.structure.vertex_count()
    }
}
