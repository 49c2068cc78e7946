//! Brute-force invariants of `O(m)` and `SO(m)` in `(Q^m)^{⊗r}`.
//!
//! `SO(m)`-invariants are computed as the common kernel of the `so_m`
//! generators acting as derivations. The reflection `diag(−1, 1, …, 1)^{⊗r}`
//! acts on basis tensors by `(−1)^(number of slots equal to the first index)`,
//! and its ±1 eigenspaces give the `O(m)`-invariants and the det-twisted ones.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseRow};
use crate::report::Report;
use crate::scalars::{rat, Rational};
use crate::tensor::{self, Tensor};

/// Largest `m^r` the oracle accepts.
pub const ORACLE_GUARD: usize = 6561;

/// Side of the `π_Λ` comparison: run only when `m^(m+r)` stays this small.
const PROJECTION_LIMIT: usize = 729;

fn space_dim(m: usize, r: usize) -> Result<usize> {
    let n = (m as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if n > ORACLE_GUARD as u128 {
        return Err(Error::TensorGuard {
            entries: n,
            guard: ORACLE_GUARD as u128,
        });
    }
    Ok(n as usize)
}

fn digits(mut idx: usize, m: usize, r: usize) -> Vec<usize> {
    let mut d = vec![0; r];
    for x in d.iter_mut().rev() {
        *x = idx % m;
        idx /= m;
    }
    d
}

fn undigits(d: &[usize], m: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * m + x)
}

/// One sparse matrix (as rows) per `E_ab − E_ba`, `a < b`, in lexicographic
/// order of `(a, b)`.
pub fn so_action_matrices(m: usize, r: usize) -> Result<Vec<Vec<SparseRow>>> {
    let n = space_dim(m, r)?;
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
            for col in 0..n {
                let mut d = digits(col, m, r);
                for k in 0..r {
                    let (to, sign) = match d[k] {
                        x if x == b => (a, 1),
                        x if x == a => (b, -1),
                        _ => continue,
                    };
                    let old = d[k];
                    d[k] = to;
                    let row = undigits(&d, m);
                    d[k] = old;
                    *rows[row].entry(col).or_insert_with(Rational::zero) += rat(sign);
                }
            }
            out.push(
                rows.into_iter()
                    .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                    .collect(),
            );
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub m: usize,
    pub r: usize,
    /// Reduced echelon basis of the `SO(m)`-invariants.
    pub basis: Echelon,
    pub plus: Echelon,
    pub minus: Echelon,
    pub dim_plus: usize,
    pub dim_minus: usize,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis_tensors(&self) -> Vec<Tensor> {
        rows_as_tensors(&self.basis, self.m, self.r)
    }

    pub fn plus_tensors(&self) -> Vec<Tensor> {
        rows_as_tensors(&self.plus, self.m, self.r)
    }

    pub fn minus_tensors(&self) -> Vec<Tensor> {
        rows_as_tensors(&self.minus, self.m, self.r)
    }
}

fn rows_as_tensors(e: &Echelon, m: usize, r: usize) -> Vec<Tensor> {
    e.rows()
        .iter()
        .map(|row| Tensor::from_vector(m, r, linalg::dense(row, e.ncols())).expect("within guard"))
        .collect()
}

/// Eigenvalue of the reflection on basis index `idx`.
fn reflection_sign(idx: usize, m: usize, r: usize) -> bool {
    digits(idx, m, r).iter().filter(|&&x| x == 0).count() % 2 == 0
}

/// The `(±1)`-components of a sparse vector under the reflection.
fn split(row: &SparseRow, m: usize, r: usize) -> (SparseRow, SparseRow) {
    row.iter().cloned().partition(|(c, _)| reflection_sign(*c, m, r))
}

pub fn invariant_space(m: usize, r: usize) -> Result<InvariantSpace> {
    if m < 2 {
        return Err(Error::InvalidM(m));
    }
    let n = space_dim(m, r)?;
    let actions = so_action_matrices(m, r)?;
    let mut eq = Echelon::new(n);
    // Interleave generators row by row so each reduction step touches few pivots.
    for i in 0..n {
        for a in &actions {
            if !a[i].is_empty() {
                eq.insert(a[i].clone());
            }
        }
    }
    let kernel = Echelon::from_rows(n, eq.nullspace().iter().map(|v| linalg::sparse(v)));
    let mut plus = Echelon::new(n);
    let mut minus = Echelon::new(n);
    for row in kernel.rows() {
        let (p, q) = split(row, m, r);
        plus.insert(p);
        minus.insert(q);
    }
    Ok(InvariantSpace {
        m,
        r,
        dim_plus: plus.rank(),
        dim_minus: minus.rank(),
        basis: kernel,
        plus,
        minus,
    })
}

/// `d(r)` = dimension of the `O(m)`-invariants, for `r = 0..=r_max`.
pub fn d_table(m: usize, r_max: usize) -> Result<BTreeMap<usize, usize>> {
    (0..=r_max).map(|r| Ok((r, invariant_space(m, r)?.dim_plus))).collect()
}

pub fn d_table_csv(table: &BTreeMap<usize, usize>) -> String {
    let mut s = String::from("r,d\n");
    for (r, d) in table {
        s.push_str(&format!("{r},{d}\n"));
    }
    s
}

/// `Λ ⊗ Č^{⊗k}`.
pub fn lambda_seed(m: usize, k: usize) -> Result<Tensor> {
    let mut t = tensor::lambda(m)?;
    let cup = tensor::cup(m)?;
    for _ in 0..k {
        t = t.tensor(&cup)?;
    }
    Ok(t)
}

fn echelon_of(tensors: &[Tensor], n: usize) -> Echelon {
    Echelon::from_rows(n, tensors.iter().map(|t| linalg::sparse(t.entries())))
}

/// The det-twisted invariants are spanned by the `Sym_r`-orbit of
/// `Λ ⊗ Č^{⊗(r−m)/2}`, and vanish unless `r − m` is a non-negative even number.
pub fn verify_thm_so_inv(m: usize, r: usize) -> Result<Report> {
    let space = invariant_space(m, r)?;
    let mut report = Report::new();
    let tag = format!("m={m} r={r}");
    if r < m || (r - m) % 2 == 1 {
        report.check(
            format!("det-twisted invariants vanish ({tag})"),
            space.dim_minus == 0,
            format!("dim={}", space.dim_minus),
        );
    } else {
        let orbit = tensor::sym_span(&lambda_seed(m, (r - m) / 2)?)?;
        let span = echelon_of(&orbit, space.basis.ncols());
        report.check(
            format!("det-twisted invariants = span Sym_r(Λ⊗Č^k) ({tag})"),
            span.same_space(&space.minus),
            format!("orbit rank {} vs dim {}", span.rank(), space.dim_minus),
        );
    }
    let big = (m as u128).checked_pow((m + r) as u32).unwrap_or(u128::MAX);
    if big <= PROJECTION_LIMIT as u128 {
        // π_Λ carries the O(m)-invariants of V^{⊗(m+r)} onto Λ ⊗ (det-twisted of V^{⊗r}).
        let outer = invariant_space(m, m + r)?;
        let projected: Vec<Tensor> = outer
            .plus_tensors()
            .iter()
            .map(Tensor::pi_lambda)
            .collect::<Result<_>>()?;
        let lam = tensor::lambda(m)?;
        let target: Vec<Tensor> = space
            .minus_tensors()
            .iter()
            .map(|t| lam.tensor(t))
            .collect::<Result<_>>()?;
        let n = outer.basis.ncols();
        let (a, b) = (echelon_of(&projected, n), echelon_of(&target, n));
        report.check(
            format!("π_Λ of invariants = Λ ⊗ det-twisted ({tag})"),
            a.same_space(&b),
            format!("ranks {} and {}", a.rank(), b.rank()),
        );
    }
    Ok(report)
}

/// For even `r`: the `O(m)`-invariants are spanned by the pair-partition
/// contractions `Sym_r(Č^{⊗r/2})`; for odd `r` they vanish.
pub fn verify_fft(m: usize, r: usize) -> Result<Report> {
    let space = invariant_space(m, r)?;
    let mut report = Report::new();
    let tag = format!("m={m} r={r}");
    if r % 2 == 1 {
        report.check(format!("no O(m)-invariants in odd degree ({tag})"), space.dim_plus == 0, format!("dim={}", space.dim_plus));
        return Ok(report);
    }
    let mut seed = Tensor::scalar(m, rat(1));
    let cup = tensor::cup(m)?;
    for _ in 0..r / 2 {
        seed = seed.tensor(&cup)?;
    }
    let span = echelon_of(&tensor::sym_span(&seed)?, space.basis.ncols());
    report.check(
        format!("O(m)-invariants = span of pair partitions ({tag})"),
        span.same_space(&space.plus),
        format!("span rank {} vs dim {}", span.rank(), space.dim_plus),
    );
    Ok(report)
}

/// Every `SO(m)`-invariant is uniquely the sum of an `O(m)`-invariant and a
/// det-twisted one, each of them again `so_m`-annihilated.
pub fn verify_decomposition(m: usize, r: usize) -> Result<Report> {
    let space = invariant_space(m, r)?;
    let mut report = Report::new();
    let tag = format!("m={m} r={r}");
    let refl = tensor::reflection(m);
    let mut ok = true;
    for t in space.basis_tensors() {
        let (p, q) = split(&linalg::sparse(t.entries()), m, r);
        let n = space.basis.ncols();
        let tp = Tensor::from_vector(m, r, linalg::dense(&p, n))?;
        let tq = Tensor::from_vector(m, r, linalg::dense(&q, n))?;
        ok &= tp.add(&tq)? == t;
        ok &= tp.act(&refl) == tp && tq.act(&refl) == tq.scale(&rat(-1));
        ok &= space.plus.contains(&p) && space.minus.contains(&q);
        ok &= space.basis.contains(&p) && space.basis.contains(&q);
    }
    report.check(format!("α = α₁ + α₂ for every invariant ({tag})"), ok, "");
    let mut both = space.plus.clone();
    for row in space.minus.rows() {
        both.insert(row.clone());
    }
    report.check(
        format!("O(m) ⊕ det-twisted = SO(m)-invariants ({tag})"),
        both.rank() == space.dim() && space.dim_plus + space.dim_minus == space.dim(),
        format!("{} + {} vs {}", space.dim_plus, space.dim_minus, space.dim()),
    );
    // Annihilation by every generator.
    let actions = so_action_matrices(m, r)?;
    let killed = space.basis.rows().iter().all(|v| {
        let dense = linalg::dense(v, space.basis.ncols());
        actions.iter().all(|a| {
            a.iter().all(|row| row.iter().fold(Rational::zero(), |acc, (c, x)| acc + x * &dense[*c]).is_zero())
        })
    });
    report.check(format!("basis annihilated by so_m ({tag})"), killed, "");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matrix(rows: &[SparseRow], n: usize) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| linalg::dense(r, n)).collect()
    }

    #[test]
    fn generators() {
        let a = so_action_matrices(2, 1).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(dense_matrix(&a[0], 2), vec![vec![rat(0), rat(1)], vec![rat(-1), rat(0)]]);
        let g = so_action_matrices(3, 1).unwrap();
        assert_eq!(g.len(), 3);
        let d: Vec<_> = g.iter().map(|x| dense_matrix(x, 3)).collect();
        let span = Echelon::from_rows(9, d.iter().map(|x| linalg::sparse(&x.concat())));
        for i in 0..3 {
            for j in 0..3 {
                let ab = tensor::mat_mul(&d[i], &d[j]);
                let ba = tensor::mat_mul(&d[j], &d[i]);
                let comm: Vec<Rational> = ab.concat().iter().zip(ba.concat()).map(|(x, y)| x - y).collect();
                assert!(span.contains(&linalg::sparse(&comm)));
            }
        }
    }

    #[test]
    fn cup_is_annihilated() {
        for m in 2..=4 {
            let c = tensor::cup(m).unwrap();
            for a in so_action_matrices(m, 2).unwrap() {
                let v = linalg::mat_vec(&dense_matrix(&a, m * m), c.entries());
                assert!(v.iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn small_spaces() {
        let s = invariant_space(2, 2).unwrap();
        assert_eq!((s.dim_plus, s.dim_minus), (1, 1));
        let s = invariant_space(3, 3).unwrap();
        assert_eq!((s.dim_plus, s.dim_minus), (0, 1));
        for m in 2..=4 {
            let s = invariant_space(m, 1).unwrap();
            assert_eq!((s.dim_plus, s.dim_minus), (0, 0));
        }
        assert!(invariant_space(3, 9).is_err());
    }

    #[test]
    fn d_values() {
        let two = d_table(2, 6).unwrap();
        let three = d_table(3, 6).unwrap();
        for t in [&two, &three] {
            assert_eq!(t[&0], 1);
            assert_eq!(t[&2], 1);
            assert_eq!(t[&4], 3);
            for r in [1, 3, 5] {
                assert_eq!(t[&r], 0);
            }
        }
        assert_eq!(two[&6], 10);
        assert_eq!(three[&6], 15);
        assert_eq!(d_table_csv(&d_table(2, 2).unwrap()), "r,d\n0,1\n1,0\n2,1\n");
    }

    #[test]
    fn so_dimensions() {
        // SO(2): central binomials in even degree; SO(3): Riordan numbers.
        let so2: Vec<usize> = (0..=6).map(|r| invariant_space(2, r).unwrap().dim()).collect();
        assert_eq!(so2, vec![1, 0, 2, 0, 6, 0, 20]);
        let so3: Vec<usize> = (0..=6).map(|r| invariant_space(3, r).unwrap().dim()).collect();
        assert_eq!(so3, vec![1, 0, 1, 1, 3, 6, 15]);
    }

    #[test]
    fn theorems_small() {
        for (m, r) in [(2, 1), (2, 2), (2, 4), (3, 3), (3, 5), (3, 4)] {
            let rep = verify_thm_so_inv(m, r).unwrap();
            assert!(rep.passed(), "{rep}");
            let rep = verify_fft(m, r).unwrap();
            assert!(rep.passed(), "{rep}");
            let rep = verify_decomposition(m, r).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }
}
