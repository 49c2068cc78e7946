//! Hom-space dimensions of the enhanced category, three ways.
//!
//! * `gram`: rank of the closure pairing on the canonical spanning set;
//! * `functor`: rank of the tensor images of the spanning set;
//! * `formula`: `C(r, m)·d(r − m) + d(r)` with `r = s + t` and `d` from the oracle.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::diagram::{all_diagrams, BrauerMorphism};
use crate::enhanced::{single_delta_diagrams, EnhancedDiagram, EnhancedMorphism, Rewriter};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::oracle;
use crate::report::Report;
use crate::scalars::{factorial, Rational};
use crate::tensor::{self, Tensor};

pub const SPANNING_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Gram,
    Functor,
    Formula,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gram" => Ok(Route::Gram),
            "functor" => Ok(Route::Functor),
            "formula" => Ok(Route::Formula),
            _ => Err(Error::Invalid(format!("unknown route {s:?}"))),
        }
    }
}

/// Brauer diagrams first, then single-vertex diagrams, each in canonical order.
pub fn spanning_set(m: usize, s: usize, t: usize) -> Result<Vec<EnhancedDiagram>> {
    if s + t > SPANNING_CAP {
        return Err(Error::CapExceeded {
            what: format!("spanning set of {s}→{t}"),
            terms: format!("{} points", s + t),
            cap: SPANNING_CAP,
        });
    }
    let mut out: Vec<EnhancedDiagram> = all_diagrams(s, t).into_iter().map(Into::into).collect();
    out.extend(single_delta_diagrams(m, s, t));
    Ok(out)
}

fn as_morphism(m: usize, d: &EnhancedDiagram) -> Result<EnhancedMorphism> {
    EnhancedMorphism::from_terms(m, d.source(), d.target(), [(d.clone(), Rational::one())])
}

/// `⟨x, y⟩`: rotate both to `0 → s+t`, then close `y* ∘ x`.
pub fn pairing(x: &EnhancedMorphism, y: &EnhancedMorphism) -> Result<Rational> {
    if x.m() != y.m() {
        return Err(Error::MismatchedM(x.m(), y.m()));
    }
    if (x.source(), x.target()) != (y.source(), y.target()) {
        return Err(Error::arity(
            format!("{}→{}", x.source(), x.target()),
            format!("{}→{}", y.source(), y.target()),
        ));
    }
    let rw = Rewriter::new(x.m())?;
    let (xr, yr) = (x.rotate_up(x.source())?, y.rotate_up(y.source())?);
    let closed = rw.compose(&xr, &rw.dual(&yr)?)?;
    Ok(closed.as_scalar().expect("closed diagram"))
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub m: usize,
    pub s: usize,
    pub t: usize,
    pub basis: Vec<EnhancedDiagram>,
    pub entries: Vec<Vec<Rational>>,
}

impl GramMatrix {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries)
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        linalg::nullspace(&self.entries, self.basis.len())
    }
}

pub fn gram_matrix(m: usize, s: usize, t: usize) -> Result<GramMatrix> {
    let basis = spanning_set(m, s, t)?;
    let rw = Rewriter::new(m)?;
    let rotated: Vec<EnhancedMorphism> = basis
        .iter()
        .map(|d| as_morphism(m, d)?.rotate_up(s))
        .collect::<Result<_>>()?;
    let duals: Vec<EnhancedMorphism> = rotated.iter().map(|x| rw.dual(x)).collect::<Result<_>>()?;
    let n = basis.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<Rational> = cells
        .par_iter()
        .map(|&(i, j)| {
            let closed = rw.compose(&rotated[i], &duals[j])?;
            Ok(closed.as_scalar().expect("closed diagram"))
        })
        .collect::<Result<_>>()?;
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for (&(i, j), v) in cells.iter().zip(values) {
        entries[j][i] = v.clone();
        entries[i][j] = v;
    }
    Ok(GramMatrix { m, s, t, basis, entries })
}

/// Flattened tensor images of the spanning set.
pub fn functor_images(m: usize, s: usize, t: usize) -> Result<Vec<Tensor>> {
    spanning_set(m, s, t)?.iter().map(|d| tensor::eval_diagram(d, m)).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(r, m)·d(r − m) + d(r)`.
pub fn formula_dim(m: usize, r: usize, d: &BTreeMap<usize, usize>) -> usize {
    let lookup = |k: usize| *d.get(&k).expect("d-table covers r");
    let twisted = if r >= m { binomial(r, m) * lookup(r - m) } else { 0 };
    twisted + lookup(r)
}

pub fn dim_hom(m: usize, s: usize, t: usize, route: Route) -> Result<usize> {
    match route {
        Route::Gram => Ok(gram_matrix(m, s, t)?.rank()),
        Route::Functor => Ok(tensor::span_rank(&functor_images(m, s, t)?)),
        Route::Formula => Ok(formula_dim(m, s + t, &oracle::d_table(m, s + t)?)),
    }
}

fn combination(m: usize, s: usize, t: usize, basis: &[EnhancedDiagram], coeffs: &[Rational]) -> Result<EnhancedMorphism> {
    EnhancedMorphism::from_terms(
        m,
        s,
        t,
        basis
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d.clone(), c.clone())),
    )
}

/// A basis of the Gram null space, as combinations of spanning diagrams.
pub fn sft_kernel(m: usize, s: usize, t: usize) -> Result<Vec<EnhancedMorphism>> {
    let gram = gram_matrix(m, s, t)?;
    gram.nullspace()
        .iter()
        .map(|v| combination(m, s, t, &gram.basis, v))
        .collect()
}

/// Coefficient vectors over the spanning set with zero tensor image.
pub fn functor_kernel(images: &[Tensor]) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = images.iter().map(|t| t.entries().to_vec()).collect();
    let rows = linalg::transpose(&cols);
    linalg::nullspace(&rows, images.len())
}

/// The Gram null space and the functor kernel coincide, and every Gram-null
/// combination evaluates to zero.
pub fn verify_sft(m: usize, s: usize, t: usize) -> Result<Report> {
    let mut report = Report::new();
    let tag = format!("m={m} {s}→{t}");
    let gram = gram_matrix(m, s, t)?;
    let images = functor_images(m, s, t)?;
    let n = gram.basis.len();
    let g_null = Echelon::from_dense(n, &gram.nullspace());
    let f_null = Echelon::from_dense(n, &functor_kernel(&images));
    report.check(
        format!("Gram null space ⊆ functor kernel ({tag})"),
        f_null.contains_space(&g_null),
        format!("nullities {} and {}", g_null.rank(), f_null.rank()),
    );
    report.check(
        format!("functor kernel ⊆ Gram null space ({tag})"),
        g_null.contains_space(&f_null),
        "",
    );
    let mut all_vanish = true;
    for row in g_null.rows() {
        let c = combination(m, s, t, &gram.basis, &linalg::dense(row, n))?;
        all_vanish &= tensor::eval_enhanced(&c)?.is_zero();
    }
    report.check(format!("kernel combinations evaluate to zero ({tag})"), all_vanish, "");
    if s == m + 1 && t == m + 1 {
        let sigma = EnhancedMorphism::from_brauer(&BrauerMorphism::antisymmetrizer(m + 1)?, m);
        let coeffs: Vec<Rational> = gram.basis.iter().map(|d| sigma.coefficient(d)).collect();
        report.check(
            format!("Σ_{} lies in the kernel ({tag})", m + 1),
            g_null.contains(&linalg::sparse(&coeffs)),
            "",
        );
    }
    Ok(report)
}

/// `Σ_{m+1}` vanishes both under the functor and against every Brauer
/// diagram, while `Σ_m` survives both tests. Only `m ≤ 3` is within reach.
pub fn verify_antisymmetrizer_vanishing(m: usize) -> Result<Report> {
    if !(2..=3).contains(&m) {
        return Err(Error::Invalid(format!("antisymmetrizer check supports m ∈ {{2, 3}}, got {m}")));
    }
    let mut report = Report::new();
    for (r, should_vanish) in [(m + 1, true), (m, false)] {
        let sigma = EnhancedMorphism::from_brauer(&BrauerMorphism::antisymmetrizer(r)?, m);
        let image_zero = tensor::eval_enhanced(&sigma)?.is_zero();
        let mut pairs_zero = true;
        for d in spanning_set(m, r, r)?.iter().filter(|d| d.is_brauer()) {
            pairs_zero &= pairing(&sigma, &as_morphism(m, d)?)?.is_zero();
            if !pairs_zero {
                break;
            }
        }
        let verb = if should_vanish { "vanishes" } else { "is nonzero" };
        report.check(
            format!("Σ_{r} {verb} under the functor (m={m})"),
            image_zero == should_vanish,
            "",
        );
        report.check(
            format!("Σ_{r} {verb} against all pairings (m={m})"),
            pairs_zero == should_vanish,
            "",
        );
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub m: usize,
    pub s: usize,
    pub t: usize,
    pub gram: usize,
    pub functor: usize,
    pub formula: usize,
}

impl DimensionRow {
    pub fn agree(&self) -> bool {
        self.gram == self.functor && self.functor == self.formula
    }
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub rows: Vec<DimensionRow>,
    /// Per `r`: whether the Gram rank is the same for every split `s + t = r`.
    pub split_independent: BTreeMap<usize, bool>,
}

impl DimensionReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(DimensionRow::agree) && self.split_independent.values().all(|&b| b)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("m,s,t,gram,functor,formula,agree\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.m,
                r.s,
                r.t,
                r.gram,
                r.functor,
                r.formula,
                r.agree()
            ));
        }
        out
    }
}

pub fn dimension_report(m: usize, r_max: usize) -> Result<DimensionReport> {
    let d = oracle::d_table(m, r_max)?;
    let mut rows = Vec::new();
    let mut split_independent = BTreeMap::new();
    for r in 0..=r_max {
        let mut grams = Vec::new();
        for s in 0..=r {
            let t = r - s;
            let gram = dim_hom(m, s, t, Route::Gram)?;
            grams.push(gram);
            rows.push(DimensionRow {
                m,
                s,
                t,
                gram,
                functor: dim_hom(m, s, t, Route::Functor)?,
                formula: formula_dim(m, r, &d),
            });
        }
        split_independent.insert(r, grams.windows(2).all(|w| w[0] == w[1]));
    }
    Ok(DimensionReport { rows, split_independent })
}

/// `pairing(x, y)` agrees with the standard form on tensor images for every
/// pair of spanning diagrams; Brauer × single-vertex entries vanish.
pub fn verify_pairing_soundness(m: usize, s: usize, t: usize) -> Result<Report> {
    let mut report = Report::new();
    let gram = gram_matrix(m, s, t)?;
    let images = functor_images(m, s, t)?;
    let n = gram.basis.len();
    let mut sound = true;
    let mut block = true;
    for i in 0..n {
        for j in 0..n {
            sound &= images[i].bilinear_form(&images[j])? == gram.entries[i][j];
            if gram.basis[i].is_brauer() != gram.basis[j].is_brauer() {
                block &= gram.entries[i][j].is_zero();
            }
        }
    }
    let tag = format!("m={m} {s}→{t}");
    report.check(format!("pairing = form on images ({tag})"), sound, "");
    report.check(format!("Brauer × single-vertex block vanishes ({tag})"), block, "");
    Ok(report)
}

/// `⟨Δ, Δ⟩ = m!`, handy as a smoke test.
pub fn delta_norm(m: usize) -> Result<Rational> {
    let d = EnhancedMorphism::delta(m)?;
    let v = pairing(&d, &d)?;
    debug_assert_eq!(v, factorial(m));
    Ok(v)
}

/// Largest spanning set over which normal forms are reduced modulo the
/// functor kernel; beyond it [`reduce_modulo_kernel`] is the identity.
pub const REDUCTION_LIMIT: usize = 2000;

fn double_factorial_odd(n: usize) -> usize {
    (1..=n).step_by(2).product()
}

/// Size of [`spanning_set`] without enumerating it.
pub fn spanning_size(m: usize, s: usize, t: usize) -> usize {
    let r = s + t;
    let brauer = if r % 2 == 0 { double_factorial_odd(r.saturating_sub(1)) } else { 0 };
    let single = if r >= m && (r - m) % 2 == 0 {
        binomial(r, m) * double_factorial_odd((r - m).saturating_sub(1))
    } else {
        0
    };
    brauer + single
}

/// Kernel of the functor on one Hom space, echelonised with the last spanning
/// diagram as the most preferred pivot.
struct Quotient {
    basis: Vec<EnhancedDiagram>,
    index: HashMap<EnhancedDiagram, usize>,
    kernel: Echelon,
}

impl Quotient {
    fn build(m: usize, s: usize, t: usize) -> Result<Self> {
        let basis = spanning_set(m, s, t)?;
        let n = basis.len();
        let width = m.pow((s + t) as u32);
        // Rows [F(b_i) | e_(n−1−i)]: once the image part is eliminated, what is
        // left are kernel vectors, already in reduced echelon form.
        let rows: Vec<linalg::SparseRow> = basis
            .par_iter()
            .enumerate()
            .map(|(i, d)| {
                let mut row = linalg::sparse(tensor::eval_diagram(d, m)?.entries());
                row.push((width + n - 1 - i, Rational::one()));
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let full = Echelon::from_rows(width + n, rows);
        let kernel = Echelon::from_rows(
            n,
            full.rows()
                .iter()
                .filter(|r| r[0].0 >= width)
                .map(|r| r.iter().map(|(c, v)| (c - width, v.clone())).collect()),
        );
        let index = basis.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        Ok(Self { basis, index, kernel })
    }
}

type QuotientCache = Mutex<HashMap<(usize, usize, usize), Arc<Quotient>>>;

fn quotient(m: usize, s: usize, t: usize) -> Result<Arc<Quotient>> {
    static CACHE: OnceLock<QuotientCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.lock().expect("cache lock").get(&(m, s, t)) {
        return Ok(q.clone());
    }
    let q = Arc::new(Quotient::build(m, s, t)?);
    cache.lock().expect("cache lock").insert((m, s, t), q.clone());
    Ok(q)
}

/// Whether [`reduce_modulo_kernel`] acts on `s → t`.
pub fn reducible(m: usize, s: usize, t: usize) -> bool {
    s + t > 0 && s + t <= SPANNING_CAP && spanning_size(m, s, t) <= REDUCTION_LIMIT
}

/// The unique representative of `f` modulo the functor kernel whose terms are
/// the earliest linearly independent spanning diagrams.
///
/// Two morphisms with the same tensor image reduce to the same value, so this
/// is a normal form for equality in the enhanced category.
pub fn reduce_modulo_kernel(f: &EnhancedMorphism) -> Result<EnhancedMorphism> {
    let (m, s, t) = (f.m(), f.source(), f.target());
    if f.is_empty() || !reducible(m, s, t) {
        return Ok(f.clone());
    }
    let q = quotient(m, s, t)?;
    let n = q.basis.len();
    let mut row: linalg::SparseRow = f
        .terms()
        .map(|(d, c)| {
            let i = *q.index.get(d).expect("normal-form terms lie in the spanning set");
            (n - 1 - i, c.clone())
        })
        .collect();
    row.sort_by_key(|(c, _)| *c);
    let rem = q.kernel.reduce(&row);
    EnhancedMorphism::from_terms(m, s, t, rem.into_iter().map(|(c, v)| (q.basis[n - 1 - c].clone(), v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Generator;
    use crate::scalars::rat;

    #[test]
    fn spanning_sets() {
        assert_eq!(spanning_set(2, 0, 2).unwrap().len(), 2);
        let s = spanning_set(3, 0, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!(!s[0].is_brauer());
        let s = spanning_set(2, 2, 2).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.iter().filter(|d| d.is_brauer()).count(), 3);
        assert!(spanning_set(2, 6, 5).is_err());
    }

    #[test]
    fn pairings() {
        for m in 2..=4 {
            let u = EnhancedMorphism::from_brauer(&BrauerMorphism::generator(Generator::U), m);
            assert_eq!(pairing(&u, &u).unwrap(), rat(m as i64));
            assert_eq!(delta_norm(m).unwrap(), factorial(m));
        }
        let u = EnhancedMorphism::from_brauer(&BrauerMorphism::generator(Generator::U), 2);
        let d = EnhancedMorphism::delta(2).unwrap();
        assert!(pairing(&d, &u).unwrap().is_zero());
        let i = EnhancedMorphism::identity(2, 1);
        assert!(pairing(&d, &i).is_err());
    }

    #[test]
    fn dimensions() {
        for route in [Route::Gram, Route::Functor, Route::Formula] {
            assert_eq!(dim_hom(2, 1, 1, route).unwrap(), 2);
            assert_eq!(dim_hom(3, 0, 3, route).unwrap(), 1);
            assert_eq!(dim_hom(2, 0, 3, route).unwrap(), 0);
        }
        assert_eq!(dim_hom(2, 0, 0, Route::Gram).unwrap(), 1);
    }

    #[test]
    fn kernels() {
        assert!(sft_kernel(2, 1, 1).unwrap().is_empty());
        assert!(sft_kernel(3, 2, 2).unwrap().is_empty());
        let g = gram_matrix(3, 2, 2).unwrap();
        assert_eq!(g.basis.len(), 3);
        assert_ne!(linalg::determinant(&g.entries), rat(0));
        let rep = verify_sft(2, 3, 3).unwrap();
        assert!(rep.passed(), "{rep}");
        for k in sft_kernel(2, 2, 2).unwrap() {
            assert!(tensor::eval_enhanced(&k).unwrap().is_zero());
        }
    }

    #[test]
    fn antisymmetrizers() {
        let rep = verify_antisymmetrizer_vanishing(2).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn soundness_small() {
        for (m, s, t) in [(2, 1, 1), (2, 0, 4), (2, 2, 2), (3, 1, 2), (3, 0, 5)] {
            let rep = verify_pairing_soundness(m, s, t).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn report_csv() {
        let rep = dimension_report(2, 1).unwrap();
        assert_eq!(
            rep.csv(),
            "m,s,t,gram,functor,formula,agree\n2,0,0,1,1,1,true\n2,0,1,0,0,0,true\n2,1,0,0,0,0,true\n"
        );
        assert!(rep.all_agree());
    }
}
