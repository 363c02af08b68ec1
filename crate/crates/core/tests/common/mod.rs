#![allow(dead_code)]

use std::collections::BTreeSet;

use incidence::bidirected::BidirectedGraph;
use incidence::hypergraph::IncidenceSpec;
use incidence::{IncidenceHypergraph, OrientedHypergraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vertices `v1..`, edges `e1..`, incidences `i1..` in the order given.
pub fn structure(nv: usize, ne: usize, pairs: &[(usize, usize)]) -> IncidenceHypergraph {
    let vertices: Vec<String> = (1..=nv).map(|k| format!("v{k}")).collect();
    let edges: Vec<String> = (1..=ne).map(|k| format!("e{k}")).collect();
    let incidences = pairs
        .iter()
        .enumerate()
        .map(|(k, &(v, e))| IncidenceSpec::new(format!("i{}", k + 1), vertices[v].clone(), edges[e].clone()))
        .collect();
    IncidenceHypergraph::from_ids(vertices, edges, incidences).unwrap()
}

fn random_structure(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize, max_i: usize, min_v: usize) -> (usize, usize, Vec<(usize, usize)>) {
    let nv = rng.gen_range(min_v..=max_v);
    let ne = rng.gen_range(0..=max_e);
    let ni = if nv == 0 || ne == 0 { 0 } else { rng.gen_range(0..=max_i) };
    let mut pairs: Vec<(usize, usize)> = (0..ni).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..ne))).collect();
    pairs.sort_unstable();
    (nv, ne, pairs)
}

/// Deterministic corpus of distinct structures with at most 4 vertices,
/// 3 edges and 8 incidences.
pub fn oracle_corpus(size: usize) -> Vec<IncidenceHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut seen = BTreeSet::new();
    seen.insert((0, 0, Vec::new()));
    let mut out = vec![structure(0, 0, &[])];
    while out.len() < size {
        let key = random_structure(&mut rng, 4, 3, 8, 1);
        if seen.insert(key.clone()) {
            out.push(structure(key.0, key.1, &key.2));
        }
    }
    out
}

/// Every ±1 signing when there are at most 256, otherwise 200 seeded ones.
pub fn signings(g: &IncidenceHypergraph) -> Vec<OrientedHypergraph> {
    let n = g.incidence_count();
    let sign = |mask: u64, k: usize| if mask >> k & 1 == 1 { -1 } else { 1 };
    if n <= 8 {
        (0u64..(1 << n))
            .map(|m| OrientedHypergraph::new(g.clone(), (0..n).map(|k| sign(m, k)).collect()).unwrap())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        (0..200)
            .map(|_| {
                let m: u64 = rng.gen();
                OrientedHypergraph::new(g.clone(), (0..n).map(|k| sign(m, k)).collect()).unwrap()
            })
            .collect()
    }
}

/// All structures with at most `max` vertices, edges and incidences, with
/// incidences listed as sorted multisets of vertex/edge pairs.
pub fn small_hypergraphs(max: usize) -> Vec<IncidenceHypergraph> {
    let mut out = Vec::new();
    for nv in 0..=max {
        for ne in 0..=max {
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|v| (0..ne).map(move |e| (v, e))).collect();
            let top = if pairs.is_empty() { 0 } else { max };
            for ni in 0..=top {
                for choice in multisets(pairs.len(), ni) {
                    let chosen: Vec<(usize, usize)> = choice.iter().map(|&k| pairs[k]).collect();
                    out.push(structure(nv, ne, &chosen));
                }
            }
        }
    }
    out
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in from..n {
            cur.push(x);
            go(n, k, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// `count` seeded hypergraphs, the first of them empty.
pub fn random_hypergraphs(count: usize, seed: u64) -> Vec<IncidenceHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![structure(0, 0, &[])];
    while out.len() < count {
        let (nv, ne, pairs) = random_structure(&mut rng, 4, 3, 7, 0);
        out.push(structure(nv, ne, &pairs));
    }
    out
}

/// Every labelled simple graph on `n` vertices.
pub fn simple_graphs(n: usize) -> Vec<IncidenceHypergraph> {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..(1 << all.len()))
        .map(|mask| {
            let edges: Vec<(usize, usize)> = (0..all.len()).filter(|k| mask >> k & 1 == 1).map(|k| all[k]).collect();
            incidence::fixtures::graph(n, &edges)
        })
        .collect()
}

pub fn is_connected(g: &IncidenceHypergraph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for i in g.incidences_at_vertex(v) {
            for j in g.incidences_on_edge(g.edge_of(i)) {
                let w = g.vertex_of(j);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Connected simple graphs on 1 to `max` vertices.
pub fn connected_graphs(max: usize) -> Vec<IncidenceHypergraph> {
    (1..=max).flat_map(simple_graphs).filter(is_connected).collect()
}

/// Bidirected graphs on 2 to 4 vertices with at most 5 edges: every simple
/// graph plus seeded multigraphs, each with a seeded ±1 signing.
pub fn bidirected_corpus() -> Vec<BidirectedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut graphs: Vec<IncidenceHypergraph> = (2..=4)
        .flat_map(simple_graphs)
        .filter(|g| g.edge_count() <= 5)
        .collect();
    for _ in 0..40 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..=5);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                (a.min(b), a.max(b))
            })
            .collect();
        graphs.push(incidence::fixtures::graph(n, &edges));
    }
    graphs
        .into_iter()
        .map(|g| {
            let signs = (0..g.incidence_count()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            BidirectedGraph::new(OrientedHypergraph::new(g, signs).unwrap()).unwrap()
        })
        .collect()
}

pub type Terms = std::collections::BTreeMap<Vec<(usize, usize)>, i64>;

/// Adjacency and Laplacian straight from the incidence signs.
pub fn oracle_matrices(og: &OrientedHypergraph) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let g = og.structure();
    let n = g.vertex_count();
    let mut a = vec![vec![0i64; n]; n];
    let mut d = vec![0i64; n];
    for i in 0..g.incidence_count() {
        let si = og.sign(i) as i64;
        d[g.vertex_of(i)] += si * si;
        for j in 0..g.incidence_count() {
            if i != j && g.edge_of(i) == g.edge_of(j) {
                a[g.vertex_of(i)][g.vertex_of(j)] -= si * og.sign(j) as i64;
            }
        }
    }
    let l = (0..n)
        .map(|r| (0..n).map(|c| if r == c { d[r] - a[r][c] } else { -a[r][c] }).collect())
        .collect();
    (a, l)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|a| (a + 1..p.len()).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count()
}

/// `det(X − M)` (or the permanent) expanded term by term: every permutation
/// and every choice of rows taking the variable.
pub fn oracle_minor_poly(m: &[Vec<i64>], det: bool) -> Terms {
    let n = m.len();
    let mut out = Terms::new();
    for p in permutations(n) {
        let weight = if det && inversions(&p) % 2 == 1 { -1 } else { 1 };
        for mask in 0u32..(1 << n) {
            let mut coeff = weight;
            let mut vars = Vec::new();
            for r in 0..n {
                if mask >> r & 1 == 1 {
                    vars.push((r, p[r]));
                } else {
                    coeff *= -m[r][p[r]];
                }
            }
            if coeff != 0 {
                *out.entry(vars).or_insert(0) += coeff;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn terms_of(p: &incidence::MultiPoly<i64>) -> Terms {
    p.terms().filter(|(_, c)| **c != 0).map(|(m, c)| (m.vars().to_vec(), *c)).collect()
}
