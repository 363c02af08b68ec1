//! Small named hypergraphs used throughout tests and examples.

use crate::hypergraph::{IncidenceHypergraph, IncidenceSpec, OrientedHypergraph};

/// A graph given by vertex count and edge list, as an incidence hypergraph.
///
/// Vertices are `v1..vn`; edge `(a, b)` (0-based) becomes edge `e{a+1}{b+1}`
/// with incidences `i{a+1}{b+1}a` at `a` and `i{a+1}{b+1}b` at `b`. Repeated
/// pairs get a `_k` suffix.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> IncidenceHypergraph {
    let vertices: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let mut names = Vec::with_capacity(edges.len());
    let mut incidences = Vec::with_capacity(2 * edges.len());
    for (k, &(a, b)) in edges.iter().enumerate() {
        let base = format!("{}{}", a + 1, b + 1);
        let dup = edges[..k].iter().filter(|&&p| p == (a, b)).count();
        let tag = if dup == 0 { base } else { format!("{base}_{dup}") };
        let name = format!("e{tag}");
        incidences.push(IncidenceSpec::new(format!("i{tag}a"), vertices[a].clone(), name.clone()));
        incidences.push(IncidenceSpec::new(format!("i{tag}b"), vertices[b].clone(), name.clone()));
        names.push(name);
    }
    IncidenceHypergraph::from_ids(vertices, names, incidences).expect("fixture graph is valid")
}

/// A graph oriented so that every adjacency is positive: the first
/// incidence of each edge is +1 and the second -1.
pub fn positive_graph(n: usize, edges: &[(usize, usize)]) -> OrientedHypergraph {
    let g = graph(n, edges);
    let signs = (0..g.incidence_count())
        .map(|k| if k % 2 == 0 { 1 } else { -1 })
        .collect();
    OrientedHypergraph::new(g, signs).expect("signs have the right length")
}

pub fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// K3 as an incidence graph (3 vertices, 3 edges, 6 incidences).
pub fn k3() -> IncidenceHypergraph {
    graph(3, &complete_edges(3))
}

/// K3 with every adjacency positive; its adjacency matrix is the ordinary one.
pub fn k3_positive() -> OrientedHypergraph {
    positive_graph(3, &complete_edges(3))
}

/// A single 3-edge on vertices v1, v2, v3.
pub fn g2() -> IncidenceHypergraph {
    IncidenceHypergraph::from_ids(
        ["v1", "v2", "v3"],
        ["e"],
        vec![
            IncidenceSpec::new("i1", "v1", "e"),
            IncidenceSpec::new("i2", "v2", "e"),
            IncidenceSpec::new("i3", "v3", "e"),
        ],
    )
    .expect("fixture is valid")
}

/// The 3-edge with every incidence +1: all adjacencies negative.
pub fn g2_sigma1() -> OrientedHypergraph {
    OrientedHypergraph::new(g2(), vec![1, 1, 1]).expect("fixture is valid")
}

/// The 3-edge with incidence at v3 flipped.
pub fn g2_sigma2() -> OrientedHypergraph {
    OrientedHypergraph::new(g2(), vec![1, 1, -1]).expect("fixture is valid")
}

/// The directed path of length one: tail `t`, head `h`, one edge.
pub fn directed_path_one() -> IncidenceHypergraph {
    IncidenceHypergraph::from_ids(
        ["t", "h"],
        ["e"],
        vec![IncidenceSpec::new("it", "t", "e"), IncidenceSpec::new("ih", "h", "e")],
    )
    .expect("fixture is valid")
}
