//! Exact univariate and multivariate polynomials in canonical form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Result};
use crate::scalar::Ring;

/// A univariate polynomial, coefficients indexed by degree, with no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Multiply by `a·x + b`.
    pub fn mul_linear(&self, a: &T, b: &T) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = out[k + 1].clone() + a.clone() * c.clone();
            out[k] = out[k].clone() + b.clone() * c.clone();
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in rhs.coeffs.iter().enumerate() {
                out[a + b] = out[a + b].clone() + x.clone() * y.clone();
            }
        }
        Self::new(out)
    }
}

/// Highest degree first, unit coefficients elided: `x^3 - 6x^2 + 9x`.
impl<T: Ring> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if k == 0 || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// A squarefree monomial `∏ x_{r,c}` over matrix positions with pairwise
/// distinct rows, stored sorted by row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(usize, usize)>);

impl Monomial {
    pub fn new(mut vars: Vec<(usize, usize)>) -> Result<Self> {
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(domain("monomial repeats a row"));
        }
        Ok(Self(vars))
    }

    pub(crate) fn from_sorted(vars: Vec<(usize, usize)>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0].0 < w[1].0));
        Self(vars)
    }

    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn vars(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|&(r, c)| r == c)
    }

    pub fn format(&self, rows: &[String], cols: &[String]) -> String {
        self.0
            .iter()
            .map(|&(r, c)| format!("x[{},{}]", rows[r], cols[c]))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Degree descending, then lexicographic on positions.
fn display_order(a: &Monomial, b: &Monomial) -> Ordering {
    b.degree().cmp(&a.degree()).then_with(|| a.cmp(b))
}

/// A multivariate polynomial with squarefree monomials and nonzero
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Ring> Default for MultiPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Ring> MultiPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    /// Terms in printing order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &T)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| display_order(a.0, b.0));
        out
    }

    /// The part of total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `x_{vv} ↦ x`, `x_{uw} ↦ 0` for `u ≠ w`.
    pub fn substitute_diagonal(&self) -> Poly<T> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.is_diagonal() {
                if coeffs.len() <= m.degree() {
                    coeffs.resize(m.degree() + 1, T::zero());
                }
                coeffs[m.degree()] = coeffs[m.degree()].clone() + c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Signed terms separated by spaces, e.g. `+1*x[v1,v1]*x[v2,v2] -1*x[v1,v2]*x[v2,v1]`.
    pub fn format(&self, rows: &[String], cols: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let sign = if c.is_negative() { "" } else { "+" };
                if m.degree() == 0 {
                    format!("{sign}{c}")
                } else {
                    format!("{sign}{c}*{}", m.format(rows, cols))
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}
