//! Exact rational row reduction on sparse rows.
//!
//! [`Echelon`] keeps a reduced row echelon basis of the rows inserted so far.
//! Pivots are chosen at the first nonzero column, so the basis depends only on
//! the row space and not on insertion order.

use num_traits::{One, Zero};

use crate::scalars::Rational;

/// Sorted `(column, value)` pairs with no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

pub fn sparse(dense: &[Rational]) -> SparseRow {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn dense(row: &SparseRow, ncols: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); ncols];
    for (c, v) in row {
        out[*c] = v.clone();
    }
    out
}

/// `a + factor·b`.
fn axpy(a: &SparseRow, factor: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn value_at(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// Sorted by pivot column; each row is monic at its pivot and zero at
    /// every other pivot column.
    rows: Vec<SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseRow>>(ncols: usize, rows: I) -> Self {
        let mut e = Self::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn from_dense<'a, I: IntoIterator<Item = &'a Vec<Rational>>>(ncols: usize, rows: I) -> Self {
        Self::from_rows(ncols, rows.into_iter().map(|r| sparse(r)))
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    fn pivot_index(&self, col: usize) -> Option<usize> {
        self.rows.binary_search_by_key(&col, |r| r[0].0).ok()
    }

    /// Remainder of `row` after eliminating every pivot column.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let hits: Vec<(usize, Rational)> = row
            .iter()
            .filter_map(|(c, v)| self.pivot_index(*c).map(|k| (k, v.clone())))
            .collect();
        let mut out = row.clone();
        for (k, v) in hits {
            out = axpy(&out, &(-v), &self.rows[k]);
        }
        out
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(&row);
        if r.is_empty() {
            return false;
        }
        let (pivot, lead) = (r[0].0, r[0].1.clone());
        let inv = lead.recip();
        let r: SparseRow = r.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        for existing in &mut self.rows {
            if let Some(v) = value_at(existing, pivot).cloned() {
                *existing = axpy(existing, &(-v), &r);
            }
        }
        let at = self.rows.partition_point(|x| x[0].0 < pivot);
        self.rows.insert(at, r);
        true
    }

    /// A basis of `{x : row·x = 0 for every row}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (k, row) in self.rows.iter().enumerate() {
                    if let Some(a) = value_at(row, free) {
                        v[pivots[k]] = -a.clone();
                    }
                }
                v
            })
            .collect()
    }

    pub fn same_space(&self, other: &Echelon) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }

    /// Whether every row of `other` lies in this row space.
    pub fn contains_space(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    Echelon::from_dense(ncols, rows).rank()
}

/// Right nullspace of a dense matrix.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    Echelon::from_dense(ncols, rows).nullspace()
}

pub fn transpose(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_vec(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// Determinant by fraction-keeping elimination.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}
