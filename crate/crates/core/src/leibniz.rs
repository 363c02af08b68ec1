//! Leibniz expansion over permutations: determinants, permanents and the
//! symbolic characteristic polynomials `det(X − M)` and `perm(X − M)`.

use rayon::prelude::*;

use crate::error::{domain, resource, Result};
use crate::matrix::Matrix;
use crate::poly::{Monomial, MultiPoly, Poly};
use crate::scalar::Ring;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Determinant,
    Permanent,
}

impl Mode {
    pub fn weight(self, perm: &[usize]) -> i8 {
        match self {
            Mode::Determinant => permutation_sign(perm),
            Mode::Permanent => 1,
        }
    }
}

/// `(−1)^{#even cycles}`.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut even = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = perm[v];
            len += 1;
        }
        if len % 2 == 0 {
            even += 1;
        }
    }
    if even % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cycle lengths of a permutation, in order of smallest element.
pub fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = perm[v];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Depth-first walk over permutations, row by row, descending into column
/// `c` only when `state` allows it. The first row is split across threads.
fn fold_permutations<S, R, Step, Leaf, Merge>(
    n: usize,
    init: S,
    step: &Step,
    leaf: &Leaf,
    merge: &Merge,
    zero: R,
) -> R
where
    S: Clone + Send + Sync,
    R: Clone + Send + Sync,
    Step: Fn(&S, usize, usize) -> Option<S> + Sync,
    Leaf: Fn(&S, &[usize]) -> R + Sync,
    Merge: Fn(R, R) -> R + Sync,
{
    fn dfs<S: Clone, R: Clone>(
        row: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        state: &S,
        step: &dyn Fn(&S, usize, usize) -> Option<S>,
        leaf: &dyn Fn(&S, &[usize]) -> R,
        merge: &dyn Fn(R, R) -> R,
        acc: R,
    ) -> R {
        if row == used.len() {
            return merge(acc, leaf(state, perm));
        }
        let mut acc = acc;
        for c in 0..used.len() {
            if used[c] {
                continue;
            }
            if let Some(next) = step(state, row, c) {
                used[c] = true;
                perm.push(c);
                acc = dfs(row + 1, perm, used, &next, step, leaf, merge, acc);
                perm.pop();
                used[c] = false;
            }
        }
        acc
    }
    if n == 0 {
        return merge(zero, leaf(&init, &[]));
    }
    (0..n)
        .into_par_iter()
        .filter_map(|c| step(&init, 0, c).map(|s| (c, s)))
        .map(|(c, s)| {
            let mut used = vec![false; n];
            used[c] = true;
            let mut perm = vec![c];
            dfs(1, &mut perm, &mut used, &s, step, leaf, merge, zero.clone())
        })
        .reduce(|| zero.clone(), merge)
}

fn require_square<T: Ring>(m: &Matrix<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(domain(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())))
    }
}

fn guard(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_vertices {
        return Err(resource(format!(
            "{n} rows exceed the permutation-expansion limit of {}",
            limits.max_vertices
        )));
    }
    Ok(())
}

/// `Σ_π w(π) ∏ M(v, π(v))`, skipping permutations through zero entries.
pub fn leibniz<T: Ring>(m: &Matrix<T>, mode: Mode) -> Result<T> {
    require_square(m)?;
    let value = fold_permutations(
        m.nrows(),
        T::one(),
        &|acc: &T, r, c| {
            let x = m.get(r, c);
            (!x.is_zero()).then(|| acc.clone() * x.clone())
        },
        &|acc: &T, perm| acc.clone() * T::from_int(mode.weight(perm) as i64),
        &|a: T, b: T| a + b,
        T::zero(),
    );
    Ok(value)
}

pub fn determinant<T: Ring>(m: &Matrix<T>) -> Result<T> {
    leibniz(m, Mode::Determinant)
}

pub fn permanent<T: Ring>(m: &Matrix<T>) -> Result<T> {
    leibniz(m, Mode::Permanent)
}

/// `det(X − M)` or `perm(X − M)` with one variable `x_{rc}` per entry.
pub fn symbolic_minor_poly<T: Ring>(m: &Matrix<T>, mode: Mode, limits: &Limits) -> Result<MultiPoly<T>> {
    require_square(m)?;
    let n = m.nrows();
    guard(n, limits)?;
    // Per permutation, each row picks either the variable or `−M(r, π(r))`.
    type Partial<T> = Vec<(Vec<(usize, usize)>, T)>;
    let init: Partial<T> = vec![(Vec::new(), T::one())];
    let poly = fold_permutations(
        n,
        init,
        &|partials: &Partial<T>, r, c| {
            let x = m.get(r, c);
            let mut next = Vec::with_capacity(partials.len() * 2);
            for (vars, coeff) in partials {
                let mut with_var = vars.clone();
                with_var.push((r, c));
                next.push((with_var, coeff.clone()));
                if !x.is_zero() {
                    next.push((vars.clone(), coeff.clone() * (-x.clone())));
                }
            }
            Some(next)
        },
        &|partials: &Partial<T>, perm| {
            let w = T::from_int(mode.weight(perm) as i64);
            let mut out = MultiPoly::zero();
            for (vars, coeff) in partials {
                out.add_term(Monomial::from_sorted(vars.clone()), coeff.clone() * w.clone());
            }
            out
        },
        &|a: MultiPoly<T>, b: MultiPoly<T>| a.merge(b),
        MultiPoly::zero(),
    );
    Ok(poly)
}

/// `det(xI − M)` or `perm(xI − M)` by direct univariate expansion.
pub fn char_poly_univariate<T: Ring>(m: &Matrix<T>, mode: Mode, limits: &Limits) -> Result<Poly<T>> {
    require_square(m)?;
    let n = m.nrows();
    guard(n, limits)?;
    let poly = fold_permutations(
        n,
        Poly::constant(T::one()),
        &|acc: &Poly<T>, r, c| {
            let x = m.get(r, c);
            if r == c {
                Some(acc.mul_linear(&T::one(), &(-x.clone())))
            } else if x.is_zero() {
                None
            } else {
                Some(acc.scale(&(-x.clone())))
            }
        },
        &|acc: &Poly<T>, perm| acc.scale(&T::from_int(mode.weight(perm) as i64)),
        &|a: Poly<T>, b: Poly<T>| a + b,
        Poly::zero(),
    );
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::{adjacency_matrix, laplacian_matrix};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn signs_by_even_cycles() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[1, 0, 3, 2]), 1);
        assert_eq!(permutation_sign(&[]), 1);
    }

    #[test]
    fn small_determinants() {
        let m = Matrix::<i64>::from_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), 3);
        assert_eq!(permanent(&m).unwrap(), 5);
        let e = Matrix::<i64>::from_rows(&[]).unwrap();
        assert_eq!(determinant(&e).unwrap(), 1);
    }

    #[test]
    fn k3_char_polys() {
        let og = fixtures::k3_positive();
        let l = laplacian_matrix::<i64>(&og).unwrap();
        let a = adjacency_matrix::<i64>(&og);
        let det = Mode::Determinant;
        assert_eq!(char_poly_univariate(&l, det, &lim()).unwrap(), Poly::from_ints(&[0, 9, -6, 1]));
        assert_eq!(char_poly_univariate(&a, det, &lim()).unwrap(), Poly::from_ints(&[-2, -3, 0, 1]));
        assert_eq!(
            char_poly_univariate(&a, Mode::Permanent, &lim()).unwrap(),
            Poly::from_ints(&[-2, 3, 0, 1])
        );
    }

    #[test]
    fn zero_one_by_one() {
        let m = Matrix::<i64>::from_rows(&[&[0]]).unwrap();
        let p = symbolic_minor_poly(&m, Mode::Determinant, &lim()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&Monomial::new(vec![(0, 0)]).unwrap()), 1);
    }

    #[test]
    fn substitution_matches_direct_expansion() {
        for og in [fixtures::k3_positive(), fixtures::g2_sigma1(), fixtures::g2_sigma2()] {
            for m in [laplacian_matrix::<i64>(&og).unwrap(), adjacency_matrix(&og)] {
                for mode in [Mode::Determinant, Mode::Permanent] {
                    let sym = symbolic_minor_poly(&m, mode, &lim()).unwrap();
                    assert_eq!(sym.substitute_diagonal(), char_poly_univariate(&m, mode, &lim()).unwrap());
                }
            }
        }
    }

    #[test]
    fn size_guard() {
        let limits = Limits {
            max_vertices: 2,
            ..Limits::default()
        };
        let m = laplacian_matrix::<i64>(&fixtures::k3_positive()).unwrap();
        assert!(matches!(
            symbolic_minor_poly(&m, Mode::Determinant, &limits),
            Err(crate::Error::Resource(_))
        ));
        let rect = Matrix::<i64>::new(vec!["a".into()], vec![], vec![]).unwrap();
        assert!(matches!(determinant(&rect), Err(crate::Error::Domain(_))));
    }
}
