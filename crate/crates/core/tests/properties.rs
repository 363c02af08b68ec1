mod common;

use std::collections::BTreeSet;

use incidence::bidirected::k_arborescences;
use incidence::classical::positive_orientation;
use incidence::contributors::{
    class_permutation, class_reduced_contributors, contributor_sign, enumerate_contributors, extensions,
    tail_equivalence_classes, total_minor_poly, univariate_from_contributors, MinorClass, Target,
};
use incidence::homomorphism::count_homomorphisms;
use incidence::leibniz::{char_poly_univariate, determinant, symbolic_minor_poly};
use incidence::matrix::{adjacency_matrix, degree_matrix, incidence_matrix, laplacian_matrix};
use incidence::topos::{is_essential_mono, is_injective, loading, tilde, zero_loading};
use incidence::{IncidenceHypergraph, Limits, Matrix, Mode, OrientedHypergraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn lim() -> Limits {
    Limits::default()
}

fn hypergraph(max_v: usize, max_e: usize, max_i: usize) -> impl Strategy<Value = IncidenceHypergraph> {
    (1..=max_v, 1..=max_e).prop_flat_map(move |(nv, ne)| {
        prop::collection::vec((0..nv, 0..ne), 0..=max_i).prop_map(move |pairs| common::structure(nv, ne, &pairs))
    })
}

fn oriented(max_v: usize, max_e: usize, max_i: usize, zeros: bool) -> impl Strategy<Value = OrientedHypergraph> {
    hypergraph(max_v, max_e, max_i).prop_flat_map(move |g| {
        let lo = if zeros { -1i8 } else { 0 };
        prop::collection::vec(lo..=1i8, g.incidence_count()).prop_map(move |raw| {
            let signs = raw.into_iter().map(|s| if !zeros && s == 0 { -1 } else { s }).collect();
            OrientedHypergraph::new(g.clone(), signs).unwrap()
        })
    })
}

fn int_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)
}

fn to_matrix<T: incidence::Ring>(rows: &[Vec<i64>]) -> Matrix<T> {
    let labels: Vec<String> = (1..=rows.len()).map(|k| k.to_string()).collect();
    let entries = rows.iter().flatten().map(|&x| T::from_int(x)).collect();
    Matrix::new(labels.clone(), labels, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn laplacian_factorizations(og in oriented(5, 4, 9, true)) {
        let h = incidence_matrix::<i64>(&og);
        let l = laplacian_matrix::<i64>(&og).unwrap();
        let dma = degree_matrix::<i64>(&og).sub(&adjacency_matrix(&og)).unwrap();
        prop_assert_eq!(&h.mul(&h.transpose()).unwrap(), &l);
        prop_assert_eq!(&dma, &l);
        let (a, lo) = common::oracle_matrices(&og);
        prop_assert_eq!(adjacency_matrix::<i64>(&og).rows(), a);
        prop_assert_eq!(l.rows(), lo);
    }

    #[test]
    fn diagonal_substitution_is_the_characteristic_polynomial(og in oriented(4, 3, 7, true)) {
        for target in [Target::Adjacency, Target::Laplacian] {
            for mode in [Mode::Determinant, Mode::Permanent] {
                let total = total_minor_poly(&og, target, mode, &lim()).unwrap();
                let m = incidence::contributors::target_matrix(&og, target).unwrap();
                let direct = char_poly_univariate(&m, mode, &lim()).unwrap();
                prop_assert_eq!(&total.substitute_diagonal(), &direct);
                prop_assert_eq!(&univariate_from_contributors(&og, target, mode, &lim()).unwrap(), &direct);
            }
        }
    }

    #[test]
    fn zero_signs_match_the_oracle(og in oriented(4, 3, 6, true)) {
        let (a, l) = common::oracle_matrices(&og);
        for (target, m) in [(Target::Adjacency, &a), (Target::Laplacian, &l)] {
            for mode in [Mode::Determinant, Mode::Permanent] {
                let got = total_minor_poly(&og, target, mode, &lim()).unwrap();
                prop_assert_eq!(common::terms_of(&got), common::oracle_minor_poly(m, mode == Mode::Determinant));
            }
        }
    }

    #[test]
    fn tail_classes_partition_contributors(g in hypergraph(4, 3, 8)) {
        let all = enumerate_contributors(&g, false, &lim()).unwrap();
        let classes = tail_equivalence_classes(&all);
        let mut seen = BTreeSet::new();
        for class in &classes {
            prop_assert!(!class.is_empty());
            let image = all[class[0]].tail_image();
            for &k in class {
                prop_assert!(seen.insert(k));
                prop_assert_eq!(all[k].tail_image(), image.clone());
            }
        }
        prop_assert_eq!(seen.len(), all.len());
        let strong = enumerate_contributors(&g, true, &lim()).unwrap();
        prop_assert!(strong.iter().all(|c| c.is_strong() && all.contains(c)));
    }

    #[test]
    fn contributors_are_permutations(g in hypergraph(4, 3, 8)) {
        for c in enumerate_contributors(&g, false, &lim()).unwrap() {
            let mut p = c.permutation();
            p.sort_unstable();
            prop_assert_eq!(p, (0..g.vertex_count()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn coefficients_are_bounded_by_reduced_contributors(og in oriented(4, 3, 7, true)) {
        let n = og.structure().vertex_count();
        for target in [Target::Adjacency, Target::Laplacian] {
            for mode in [Mode::Determinant, Mode::Permanent] {
                let total = total_minor_poly(&og, target, mode, &lim()).unwrap();
                for class in MinorClass::all(n) {
                    let count = class_reduced_contributors(&og, &class, target, &lim()).unwrap().len() as i64;
                    prop_assert!(total.coefficient(&class.monomial()).abs() <= count);
                }
            }
        }
    }

    #[test]
    fn class_permutation_is_extension_independent(og in oriented(4, 3, 6, true)) {
        let loaded = zero_loading(&og);
        for class in MinorClass::all(og.structure().vertex_count()) {
            for s in class_reduced_contributors(&og, &class, Target::Laplacian, &lim()).unwrap() {
                let perm = class_permutation(&s);
                let ext = extensions(loaded.structure(), &s);
                prop_assert!(!ext.is_empty());
                for c in ext {
                    prop_assert_eq!(c.permutation(), perm.clone());
                }
            }
        }
    }

    #[test]
    fn all_backstep_contributor_is_alone_in_its_tail_class(g in hypergraph(4, 3, 8)) {
        let all = enumerate_contributors(&g, false, &lim()).unwrap();
        for class in tail_equivalence_classes(&all) {
            let bottoms = class.iter().filter(|&&k| all[k].backsteps().len() == g.vertex_count()).count();
            prop_assert!(bottoms <= 1);
        }
    }

    #[test]
    fn incidence_sets_partition_incidences(g in hypergraph(4, 4, 10)) {
        let total: usize = (0..g.vertex_count())
            .flat_map(|v| (0..g.edge_count()).map(move |e| (v, e)))
            .map(|(v, e)| g.inc(v, e).len())
            .sum();
        prop_assert_eq!(total, g.incidence_count());
        let one = std::sync::Arc::new(incidence::topos::terminal());
        prop_assert_eq!(count_homomorphisms(&one, &g, 1 << 30).unwrap() as usize, g.incidence_count());
    }

    #[test]
    fn contributor_signs_are_units(og in oriented(4, 3, 8, false)) {
        for c in enumerate_contributors(og.structure(), false, &lim()).unwrap() {
            prop_assert!(contributor_sign(&og, &c).abs() == 1);
        }
    }

    #[test]
    fn determinant_agrees_across_rings(rows in (1usize..=5).prop_flat_map(int_matrix)) {
        let i = determinant(&to_matrix::<i64>(&rows)).unwrap();
        let b = determinant(&to_matrix::<BigInt>(&rows)).unwrap();
        let q = determinant(&to_matrix::<BigRational>(&rows)).unwrap();
        prop_assert_eq!(BigInt::from(i), b.clone());
        prop_assert_eq!(BigRational::from_integer(b), q);
    }

    #[test]
    fn symbolic_polynomial_agrees_across_rings(rows in (1usize..=4).prop_flat_map(int_matrix)) {
        let small = symbolic_minor_poly(&to_matrix::<i64>(&rows), Mode::Determinant, &lim()).unwrap();
        let big = symbolic_minor_poly(&to_matrix::<BigInt>(&rows), Mode::Determinant, &lim()).unwrap();
        prop_assert_eq!(small.len(), big.len());
        for (m, c) in small.terms() {
            prop_assert_eq!(BigInt::from(*c), big.coefficient(m));
        }
        prop_assert_eq!(common::terms_of(&small), common::oracle_minor_poly(&rows, true));
    }

    #[test]
    fn loading_is_an_injective_essential_envelope(g in hypergraph(4, 3, 7)) {
        let l = loading(&g);
        prop_assert!(is_injective(&l.graph));
        prop_assert!(is_essential_mono(&l.embedding).unwrap());
        prop_assert!(loading(&l.graph).added_incidences.is_empty());
        let tg = tilde(&g).unwrap();
        prop_assert_eq!(
            tg.graph.incidence_count(),
            g.incidence_count() + (g.vertex_count() + 1) * (g.edge_count() + 1)
        );
        prop_assert!(!is_essential_mono(&tg.eta).unwrap());
    }
}

#[test]
fn positive_laplacian_diagonal_coefficients_count_arborescences() {
    for g in common::connected_graphs(4) {
        let og = positive_orientation(&g).unwrap();
        let total = total_minor_poly(&og, Target::Laplacian, Mode::Determinant, &lim()).unwrap();
        let n = g.vertex_count();
        for mask in 1u32..(1 << n) {
            let u: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            let class = MinorClass::new(u.clone(), u.clone(), n).unwrap();
            let karb = k_arborescences(&g, &u, &lim()).unwrap().len() as i64;
            assert_eq!(total.coefficient(&class.monomial()).abs(), karb, "U = {u:?}");
        }
    }
}
