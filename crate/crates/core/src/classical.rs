//! Classical graph results used as cross-checks: the Matrix-tree theorem
//! and Sachs' coefficient theorem.

use crate::error::{domain, resource, Result};
use crate::hypergraph::{IncidenceHypergraph, OrientedHypergraph};
use crate::leibniz::determinant;
use crate::matrix::laplacian_matrix;
use crate::poly::Poly;
use crate::Limits;

fn require_graph(g: &IncidenceHypergraph) -> Result<()> {
    if g.is_graph_like() {
        Ok(())
    } else {
        Err(domain("expected a graph: every edge needs exactly two incidences"))
    }
}

/// Each edge signed `+1` at its first incidence and `−1` at its second, so
/// every adjacency is positive.
pub fn positive_orientation(g: &IncidenceHypergraph) -> Result<OrientedHypergraph> {
    require_graph(g)?;
    let mut signs = vec![0i8; g.incidence_count()];
    for e in 0..g.edge_count() {
        let mut on_edge = g.incidences_on_edge(e);
        if let (Some(a), Some(b)) = (on_edge.next(), on_edge.next()) {
            signs[a] = 1;
            signs[b] = -1;
        }
    }
    OrientedHypergraph::new(g.clone(), signs)
}

/// `det(L_{ij})`, the Laplacian with row `i` and column `j` deleted.
pub fn matrix_tree_cofactor(g: &IncidenceHypergraph, i: usize, j: usize) -> Result<i64> {
    let og = positive_orientation(g)?;
    let n = g.vertex_count();
    if i >= n || j >= n {
        return Err(domain("cofactor index out of range"));
    }
    let l = laplacian_matrix::<i64>(&og)?;
    determinant(&l.minor(i, j))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Whether the given edges (as vertex pairs) form a forest.
pub(crate) fn is_forest(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut uf = UnionFind::new(n);
    edges.into_iter().all(|(a, b)| uf.union(a, b))
}

pub(crate) fn endpoints(g: &IncidenceHypergraph) -> Vec<(usize, usize)> {
    (0..g.edge_count())
        .map(|e| {
            let mut on_edge = g.incidences_on_edge(e);
            let a = on_edge.next().expect("graph edge");
            let b = on_edge.next().expect("graph edge");
            (g.vertex_of(a), g.vertex_of(b))
        })
        .collect()
}

/// Number of spanning trees, by scanning every `(n − 1)`-subset of edges.
pub fn spanning_tree_count(g: &IncidenceHypergraph) -> Result<u64> {
    require_graph(g)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    if m > 30 {
        return Err(resource(format!("{m} edges is too many for subset enumeration")));
    }
    if n <= 1 {
        return Ok(1);
    }
    let ends = endpoints(g);
    let count = (0u64..(1 << m))
        .filter(|mask| mask.count_ones() as usize == n - 1)
        .filter(|mask| is_forest(n, (0..m).filter(|k| mask >> k & 1 == 1).map(|k| ends[k])))
        .count();
    Ok(count as u64)
}

/// `Σ_k Σ_U (−1)^{p(U)} 2^{c(U)} x^k` over elementary subgraphs `U` (disjoint
/// single edges and cycles) covering `n − k` vertices, for a simple graph.
pub fn sachs_char_poly(g: &IncidenceHypergraph, limits: &Limits) -> Result<Poly<i64>> {
    require_graph(g)?;
    let n = g.vertex_count();
    if n > limits.max_total_minor_vertices {
        return Err(resource(format!(
            "{n} vertices exceed the Sachs enumeration limit of {}",
            limits.max_total_minor_vertices
        )));
    }
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in endpoints(g) {
        if a == b || adj[a][b] {
            return Err(domain("Sachs expansion needs a simple graph"));
        }
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut sachs = Sachs {
        adj: &adj,
        fate: vec![Fate::Undecided; n],
        coeffs: vec![0; n + 1],
    };
    sachs.run(0, 0);
    Ok(Poly::new(sachs.coeffs))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fate {
    Undecided,
    Covered,
    Isolated,
}

struct Sachs<'a> {
    adj: &'a [Vec<bool>],
    fate: Vec<Fate>,
    coeffs: Vec<i64>,
}

impl Sachs<'_> {
    /// Decide the first undecided vertex: left isolated, matched by an edge,
    /// or the smallest vertex of a cycle.
    fn run(&mut self, parts: u32, cycles: u32) {
        let n = self.adj.len();
        let Some(v) = (0..n).find(|&v| self.fate[v] == Fate::Undecided) else {
            let k = self.fate.iter().filter(|&&f| f == Fate::Isolated).count();
            let sign = if parts.is_multiple_of(2) { 1 } else { -1 };
            self.coeffs[k] += sign * (1i64 << cycles);
            return;
        };
        self.fate[v] = Fate::Isolated;
        self.run(parts, cycles);
        self.fate[v] = Fate::Covered;
        for w in v + 1..n {
            if self.adj[v][w] && self.fate[w] == Fate::Undecided {
                self.fate[w] = Fate::Covered;
                self.run(parts + 1, cycles);
                self.fate[w] = Fate::Undecided;
            }
        }
        let mut path = vec![v];
        self.cycles_from(&mut path, parts, cycles);
        self.fate[v] = Fate::Undecided;
    }

    /// Extend a simple path from its smallest vertex `path[0]`; each cycle is
    /// taken in the direction with `path[1] < path[last]`.
    fn cycles_from(&mut self, path: &mut Vec<usize>, parts: u32, cycles: u32) {
        let n = self.adj.len();
        let (start, last) = (path[0], *path.last().expect("nonempty path"));
        if path.len() >= 3 && self.adj[last][start] && path[1] < last {
            self.run(parts + 1, cycles + 1);
        }
        for w in start + 1..n {
            if self.adj[last][w] && self.fate[w] == Fate::Undecided {
                self.fate[w] = Fate::Covered;
                path.push(w);
                self.cycles_from(path, parts, cycles);
                path.pop();
                self.fate[w] = Fate::Undecided;
            }
        }
    }
}
