//! Labelled dense matrices and the incidence, degree, adjacency and
//! Laplacian matrices of an oriented hypergraph.

use std::fmt;

use crate::error::{domain, invariant, Result};
use crate::hypergraph::OrientedHypergraph;
use crate::scalar::Ring;

/// A dense row-major matrix with string labels on rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, entries: Vec<T>) -> Result<Self> {
        if entries.len() != row_labels.len() * col_labels.len() {
            return Err(domain(format!(
                "{} entries do not fill a {}x{} matrix",
                entries.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        Ok(Self {
            row_labels,
            col_labels,
            entries,
        })
    }

    pub fn zeros(row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        let entries = vec![T::zero(); row_labels.len() * col_labels.len()];
        Self {
            row_labels,
            col_labels,
            entries,
        }
    }

    /// Square matrix from integer rows; labels `1..n`.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let labels: Vec<String> = (1..=rows.len()).map(|k| k.to_string()).collect();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| T::from_int(x))).collect();
        Self::new(labels.clone(), labels, entries)
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.ncols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        let n = self.ncols();
        self.entries[r * n + c] = value;
    }

    fn add_at(&mut self, r: usize, c: usize, value: T) {
        let n = self.ncols();
        let slot = &mut self.entries[r * n + c];
        *slot = slot.clone() + value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.col_labels.clone(), self.row_labels.clone());
        for r in 0..self.nrows() {
            for c in 0..self.ncols() {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(domain("matrix product dimensions differ"));
        }
        let mut out = Self::zeros(self.row_labels.clone(), other.col_labels.clone());
        for r in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols() {
                    out.add_at(r, c, a.clone() * other.get(k, c).clone());
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(domain("matrix difference dimensions differ"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries,
        })
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        Self {
            row_labels: rows.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c].clone()).collect(),
            entries,
        }
    }

    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        self.submatrix(keep, keep)
    }

    /// Delete row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.nrows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.ncols()).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.nrows())
            .map(|r| (0..self.ncols()).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }
}

impl<T: Ring> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nrows() == 0 || self.ncols() == 0 {
            return writeln!(f, "({}x{} empty)", self.nrows(), self.ncols());
        }
        let cells: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let label_width = self.row_labels.iter().map(String::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.ncols())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].len())
                    .chain([self.col_labels[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        write!(f, "{:label_width$}", "")?;
        for (c, w) in widths.iter().enumerate() {
            write!(f, "  {:>w$}", self.col_labels[c])?;
        }
        writeln!(f)?;
        for (r, row) in cells.iter().enumerate() {
            write!(f, "{:label_width$}", self.row_labels[r])?;
            for (cell, w) in row.iter().zip(&widths) {
                write!(f, "  {cell:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn sigma<T: Ring>(og: &OrientedHypergraph, i: usize) -> T {
    T::from_int(og.sign(i) as i64)
}

/// `H(v, e) = Σ σ(i)` over incidences between `v` and `e`.
pub fn incidence_matrix<T: Ring>(og: &OrientedHypergraph) -> Matrix<T> {
    let g = og.structure();
    let mut h = Matrix::zeros(g.vertices().to_vec(), g.edges().to_vec());
    for (k, i) in g.incidences().iter().enumerate() {
        h.add_at(i.vertex, i.edge, sigma(og, k));
    }
    h
}

/// `D(v, v) = Σ σ(i)²` over incidences at `v`.
pub fn degree_matrix<T: Ring>(og: &OrientedHypergraph) -> Matrix<T> {
    let g = og.structure();
    let mut d = Matrix::zeros(g.vertices().to_vec(), g.vertices().to_vec());
    for (k, i) in g.incidences().iter().enumerate() {
        let s: T = sigma(og, k);
        d.add_at(i.vertex, i.vertex, s.clone() * s);
    }
    d
}

/// `A(u, w) = Σ −σ(i)σ(j)` over ordered pairs of distinct incidences on a
/// common edge with `i` at `u` and `j` at `w`. Loops land on the diagonal.
pub fn adjacency_matrix<T: Ring>(og: &OrientedHypergraph) -> Matrix<T> {
    let g = og.structure();
    let mut a = Matrix::zeros(g.vertices().to_vec(), g.vertices().to_vec());
    for e in 0..g.edge_count() {
        let on_edge: Vec<usize> = g.incidences_on_edge(e).collect();
        for &i in &on_edge {
            for &j in &on_edge {
                if i != j {
                    let w = -(sigma::<T>(og, i) * sigma(og, j));
                    a.add_at(g.vertex_of(i), g.vertex_of(j), w);
                }
            }
        }
    }
    a
}

/// `L = H·Hᵀ`, checked against `D − A`.
pub fn laplacian_matrix<T: Ring>(og: &OrientedHypergraph) -> Result<Matrix<T>> {
    let h = incidence_matrix::<T>(og);
    let l = h.mul(&h.transpose())?;
    let d_minus_a = degree_matrix::<T>(og).sub(&adjacency_matrix(og))?;
    if l != d_minus_a {
        return Err(invariant("H·Hᵀ differs from D − A"));
    }
    Ok(l)
}

/// One element of an alternating vertex/edge walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkItem {
    Vertex(usize),
    Edge(usize),
    Incidence(usize),
}

/// `(−1)^⌊n/2⌋ ∏ σ(i_h)` for a walk `a₀, i₁, a₁, …, i_n, a_n`.
pub fn weak_walk_sign(og: &OrientedHypergraph, walk: &[WalkItem]) -> Result<i8> {
    let g = og.structure();
    if walk.len().is_multiple_of(2) {
        return Err(domain("a walk has odd length: object, incidence, object, ..."));
    }
    let mut product: i8 = 1;
    let mut n = 0usize;
    for k in (1..walk.len()).step_by(2) {
        let WalkItem::Incidence(i) = walk[k] else {
            return Err(domain(format!("walk position {k} must be an incidence")));
        };
        if i >= g.incidence_count() {
            return Err(domain(format!("walk incidence {i} out of range")));
        }
        let joins = |x: WalkItem| match x {
            WalkItem::Vertex(v) => g.vertex_of(i) == v,
            WalkItem::Edge(e) => g.edge_of(i) == e,
            WalkItem::Incidence(_) => false,
        };
        let (before, after) = (walk[k - 1], walk[k + 1]);
        let alternates = matches!(
            (before, after),
            (WalkItem::Vertex(_), WalkItem::Edge(_)) | (WalkItem::Edge(_), WalkItem::Vertex(_))
        );
        if !alternates || !joins(before) || !joins(after) {
            return Err(domain(format!("incidence at walk position {k} does not join its neighbours")));
        }
        product *= og.sign(i);
        n += 1;
    }
    Ok(if (n / 2) % 2 == 1 { -product } else { product })
}
