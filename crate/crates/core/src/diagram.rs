//! Brauer diagrams over a generic loop parameter δ.
//!
//! Points `0..source` are the bottom boundary and `source..source+target` the
//! top boundary, both read left to right. A diagram is a perfect matching on
//! those points; a [`BrauerMorphism`] is a finite δ-polynomial combination of
//! diagrams with common arities, kept with like terms collected.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::net::{End, Net};
use crate::perm;
use crate::scalars::{factorial, rat, DeltaPoly, Rational};

/// Default largest `r` for which Σ_r is expanded (8! = 40320 terms).
pub const ANTISYMMETRIZER_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BrauerDiagram {
    source: usize,
    target: usize,
    pairs: Vec<(usize, usize)>,
}

impl BrauerDiagram {
    /// Validates and canonicalises a matching.
    pub fn new(source: usize, target: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = source + target;
        if n % 2 != 0 {
            return Err(Error::Invalid(format!(
                "a matching needs an even number of points, got {source}+{target}"
            )));
        }
        check_matching(n, &pairs, &[])?;
        Ok(Self::from_pairs_unchecked(source, target, pairs))
    }

    pub(crate) fn from_pairs_unchecked(source: usize, target: usize, pairs: Vec<(usize, usize)>) -> Self {
        Self {
            source,
            target,
            pairs: canonical_pairs(pairs),
        }
    }

    pub fn identity(r: usize) -> Self {
        Self::from_pairs_unchecked(r, r, (0..r).map(|p| (p, r + p)).collect())
    }

    pub fn empty() -> Self {
        Self::identity(0)
    }

    /// Bottom point `p` joined to top point `perm[p]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let r = perm.len();
        Self::from_pairs_unchecked(r, r, perm.iter().enumerate().map(|(p, &q)| (p, r + q)).collect())
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub(crate) fn net(&self) -> Net {
        Net::from_parts(self.source, self.target, &self.pairs, None)
    }

    /// Glue `self` below `g`; returns the diagram and the number of closed loops.
    pub fn then(&self, g: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
        if self.target != g.source {
            return Err(Error::arity(arity_label(self.source, self.target), arity_label(g.source, g.target)));
        }
        Ok(from_net(&self.net().then(&g.net())))
    }

    pub fn beside(&self, g: &BrauerDiagram) -> BrauerDiagram {
        from_net(&self.net().beside(&g.net())).0
    }

    pub fn reflect(&self) -> BrauerDiagram {
        from_net(&self.net().reflect()).0
    }

    /// The permutation if every strand is a through-strand.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.source != self.target {
            return None;
        }
        let r = self.source;
        let mut p = vec![0; r];
        for &(a, b) in &self.pairs {
            if a >= r || b < r {
                return None;
            }
            p[a] = b - r;
        }
        Some(p)
    }
}

fn from_net(net: &Net) -> (BrauerDiagram, usize) {
    let traced = net.trace();
    let pairs = traced
        .links
        .iter()
        .map(|link| match *link {
            (End::Point(a), End::Point(b)) => (a, b),
            _ => unreachable!("Brauer nets have no vertices"),
        })
        .collect();
    (
        BrauerDiagram::from_pairs_unchecked(net.source, net.target, pairs),
        traced.loops,
    )
}

pub(crate) fn canonical_pairs(pairs: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort_unstable();
    pairs
}

/// Checks that `pairs` and `taken` together cover `0..n` exactly once.
pub(crate) fn check_matching(n: usize, pairs: &[(usize, usize)], taken: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    let points = pairs.iter().flat_map(|&(a, b)| [a, b]).chain(taken.iter().copied());
    for p in points {
        if p >= n {
            return Err(Error::Invalid(format!("point {p} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::Invalid(format!("point {p} used twice")));
        }
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(Error::Invalid(format!("point {p} left unmatched")));
    }
    Ok(())
}

pub(crate) fn arity_label(s: usize, t: usize) -> String {
    format!("{s}→{t}")
}

/// All perfect matchings of `points` (sorted), in lexicographic order of the
/// canonical pair list.
pub fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    if points.len() % 2 == 1 {
        return Vec::new();
    }
    let first = points[0];
    let mut out = Vec::new();
    for i in 1..points.len() {
        let rest: Vec<usize> = points[1..]
            .iter()
            .enumerate()
            .filter(|&(j, _)| j + 1 != i)
            .map(|(_, &p)| p)
            .collect();
        for mut tail in matchings(&rest) {
            let mut m = vec![(first, points[i])];
            m.append(&mut tail);
            out.push(m);
        }
    }
    out
}

/// Every Brauer diagram `s → t`, canonical order.
pub fn all_diagrams(s: usize, t: usize) -> Vec<BrauerDiagram> {
    let points: Vec<usize> = (0..s + t).collect();
    matchings(&points)
        .into_iter()
        .map(|pairs| BrauerDiagram::from_pairs_unchecked(s, t, pairs))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Generator {
    I,
    U,
    A,
    X,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BrauerMorphism {
    source: usize,
    target: usize,
    terms: BTreeMap<BrauerDiagram, DeltaPoly>,
}

impl BrauerMorphism {
    pub fn zero(source: usize, target: usize) -> Self {
        Self {
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: BrauerDiagram) -> Self {
        Self::from_term(d, DeltaPoly::one())
    }

    pub fn from_term(d: BrauerDiagram, coeff: DeltaPoly) -> Self {
        let mut out = Self::zero(d.source, d.target);
        out.add_term(d, coeff);
        out
    }

    /// Builds a morphism from terms; like terms are collected.
    pub fn from_terms(
        source: usize,
        target: usize,
        terms: impl IntoIterator<Item = (BrauerDiagram, DeltaPoly)>,
    ) -> Result<Self> {
        let mut out = Self::zero(source, target);
        for (d, c) in terms {
            if d.source != source || d.target != target {
                return Err(Error::arity(arity_label(source, target), arity_label(d.source, d.target)));
            }
            out.add_term(d, c);
        }
        Ok(out)
    }

    pub fn generator(kind: Generator) -> Self {
        let d = match kind {
            Generator::I => BrauerDiagram::identity(1),
            Generator::U => BrauerDiagram::from_pairs_unchecked(0, 2, vec![(0, 1)]),
            Generator::A => BrauerDiagram::from_pairs_unchecked(2, 0, vec![(0, 1)]),
            Generator::X => BrauerDiagram::from_pairs_unchecked(2, 2, vec![(0, 3), (1, 2)]),
        };
        Self::from_diagram(d)
    }

    pub fn identity(r: usize) -> Self {
        Self::from_diagram(BrauerDiagram::identity(r))
    }

    pub fn scalar(c: DeltaPoly) -> Self {
        Self::from_term(BrauerDiagram::empty(), c)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
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

    pub fn terms(&self) -> impl Iterator<Item = (&BrauerDiagram, &DeltaPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &BrauerDiagram) -> DeltaPoly {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, d: BrauerDiagram, c: DeltaPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&DeltaPoly::from(-1)))
    }

    pub fn scale(&self, c: &DeltaPoly) -> Self {
        let mut out = Self::zero(self.source, self.target);
        for (d, a) in &self.terms {
            out.add_term(d.clone(), a * c);
        }
        out
    }

    fn check_same_arity(&self, other: &Self) -> Result<()> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::arity(
                arity_label(self.source, self.target),
                arity_label(other.source, other.target),
            ));
        }
        Ok(())
    }

    /// `g ∘ self`: apply `self` first. Each closed loop contributes a factor δ.
    pub fn then(&self, g: &Self) -> Result<Self> {
        if self.target != g.source {
            return Err(Error::arity(
                arity_label(self.source, self.target),
                arity_label(g.source, g.target),
            ));
        }
        let mut out = Self::zero(self.source, g.target);
        for (df, cf) in &self.terms {
            for (dg, cg) in &g.terms {
                let (d, loops) = df.then(dg)?;
                out.add_term(d, (cf * cg).shift(loops));
            }
        }
        Ok(out)
    }

    pub fn tensor(&self, g: &Self) -> Self {
        let mut out = Self::zero(self.source + g.source, self.target + g.target);
        for (df, cf) in &self.terms {
            for (dg, cg) in &g.terms {
                out.add_term(df.beside(dg), cf * cg);
            }
        }
        out
    }

    pub fn tensor_power(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(0), |acc, _| acc.tensor(self))
    }

    pub fn dual(&self) -> Self {
        let mut out = Self::zero(self.target, self.source);
        for (d, c) in &self.terms {
            out.add_term(d.reflect(), c.clone());
        }
        out
    }

    pub fn permutation(perm: &[usize]) -> Self {
        Self::from_diagram(BrauerDiagram::permutation(perm))
    }

    pub fn antisymmetrizer(r: usize) -> Result<Self> {
        Self::antisymmetrizer_with_cap(r, ANTISYMMETRIZER_CAP)
    }

    /// Σ_r = Σ_π ε(π) π.
    pub fn antisymmetrizer_with_cap(r: usize, cap: usize) -> Result<Self> {
        if r > cap {
            return Err(Error::CapExceeded {
                what: format!("Σ_{r}"),
                terms: factorial(r).to_string(),
                cap,
            });
        }
        Self::from_terms(
            r,
            r,
            perm::all(r)
                .into_iter()
                .map(|p| (BrauerDiagram::permutation(&p), DeltaPoly::from(perm::sign(&p)))),
        )
    }

    /// `p+q → r` to `p → r+q`: the rightmost `q` bottom points are bent up to
    /// the right of the top boundary using nested cups.
    pub fn rotate_up(&self, q: usize) -> Result<Self> {
        if q > self.source {
            return Err(Error::ArityUnderflow {
                requested: q,
                available: self.source,
            });
        }
        let p = self.source - q;
        let cups = BrauerMorphism::identity(p).tensor(&nested_cups(q));
        cups.then(&self.tensor(&Self::identity(q)))
    }

    /// `p → r+q` to `p+q → r`: the rightmost `q` top points are bent down to the
    /// right of the bottom boundary using nested caps.
    pub fn rotate_down(&self, q: usize) -> Result<Self> {
        if q > self.target {
            return Err(Error::ArityUnderflow {
                requested: q,
                available: self.target,
            });
        }
        let r = self.target - q;
        let caps = BrauerMorphism::identity(r).tensor(&nested_cups(q).dual());
        self.tensor(&Self::identity(q)).then(&caps)
    }

    /// Closes the rightmost strand: `(I^{r-1}⊗A)∘(f⊗I)∘(I^{r-1}⊗U)`.
    pub fn partial_trace(&self) -> Result<Self> {
        if self.source == 0 || self.target == 0 {
            return Err(Error::ArityUnderflow {
                requested: 1,
                available: self.source.min(self.target),
            });
        }
        let u = Self::generator(Generator::U);
        let a = Self::generator(Generator::A);
        let bottom = Self::identity(self.source - 1).tensor(&u);
        let top = Self::identity(self.target - 1).tensor(&a);
        bottom.then(&self.tensor(&Self::identity(1)))?.then(&top)
    }

    /// Specialise every coefficient at δ = `value`.
    pub fn specialize(&self, value: &Rational) -> BTreeMap<BrauerDiagram, Rational> {
        self.terms
            .iter()
            .map(|(d, c)| (d.clone(), c.evaluate(value)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// The coefficient of the empty diagram for a `0 → 0` morphism.
    pub fn as_scalar(&self) -> Option<DeltaPoly> {
        (self.source == 0 && self.target == 0).then(|| self.coefficient(&BrauerDiagram::empty()))
    }
}

/// 0 → 2q: point k joined to point 2q−1−k.
fn nested_cups(q: usize) -> BrauerMorphism {
    BrauerMorphism::from_diagram(BrauerDiagram::from_pairs_unchecked(
        0,
        2 * q,
        (0..q).map(|k| (k, 2 * q - 1 - k)).collect(),
    ))
}

/// Identity (1) in the Σ_r recursion: Σ_{r-1}⊗I − (r−2)!⁻¹ (Σ_{r-1}⊗I)(I^{r-2}⊗X)(Σ_{r-1}⊗I).
pub fn antisymmetrizer_recursion_rhs(r: usize) -> Result<BrauerMorphism> {
    assert!(r >= 2);
    let lower = BrauerMorphism::antisymmetrizer(r - 1)?.tensor(&BrauerMorphism::identity(1));
    let swap = BrauerMorphism::identity(r - 2).tensor(&BrauerMorphism::generator(Generator::X));
    let sandwich = lower.then(&swap)?.then(&lower)?;
    let weight = DeltaPoly::constant(factorial(r - 2).recip());
    lower.sub(&sandwich.scale(&weight))
}

/// Identity (2): closing the last strand of Σ_r gives −(r−1−δ)·Σ_{r−1}.
pub fn antisymmetrizer_trace_rhs(r: usize) -> Result<BrauerMorphism> {
    assert!(r >= 1);
    let factor = DeltaPoly::from_coeffs(vec![rat(1 - r as i64), Rational::one()]);
    Ok(BrauerMorphism::antisymmetrizer(r - 1)?.scale(&factor))
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}→{}:", self.source, self.target)?;
        for (a, b) in &self.pairs {
            write!(f, " {a}-{b}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BrauerMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 ({}→{})", self.source, self.target);
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({c}) {d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn g(k: Generator) -> BrauerMorphism {
        BrauerMorphism::generator(k)
    }

    fn pairs(m: &BrauerMorphism) -> Vec<(usize, usize)> {
        assert_eq!(m.len(), 1);
        m.terms().next().unwrap().0.pairs().to_vec()
    }

    #[test]
    fn generators() {
        assert_eq!(pairs(&g(I)), vec![(0, 1)]);
        assert_eq!((g(U).source(), g(U).target()), (0, 2));
        assert_eq!(pairs(&g(U)), vec![(0, 1)]);
        assert_eq!(pairs(&g(X)), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn loop_gives_delta() {
        let loop_ = g(U).then(&g(A)).unwrap();
        assert_eq!(loop_, BrauerMorphism::scalar(DeltaPoly::delta()));
    }

    #[test]
    fn basic_compositions() {
        assert_eq!(g(X).then(&g(X)).unwrap(), BrauerMorphism::identity(2));
        assert_eq!(g(U).then(&g(X)).unwrap(), g(U));
        assert_eq!(g(X).then(&g(A)).unwrap(), g(A));
        assert!(matches!(g(U).then(&g(U)), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn tensors() {
        assert_eq!(g(I).tensor(&g(I)), BrauerMorphism::identity(2));
        let ua = g(U).tensor(&g(A));
        assert_eq!((ua.source(), ua.target()), (2, 2));
        assert_eq!(pairs(&ua), vec![(0, 1), (2, 3)]);
        assert_eq!(g(X).tensor(&BrauerMorphism::identity(0)), g(X));
    }

    #[test]
    fn duals() {
        assert_eq!(g(U).dual(), g(A));
        assert_eq!(g(X).dual(), g(X));
    }

    #[test]
    fn permutations_compose_like_the_group() {
        let perms = perm::all(3);
        for a in &perms {
            for b in &perms {
                let lhs = BrauerMorphism::permutation(b)
                    .then(&BrauerMorphism::permutation(a))
                    .unwrap();
                assert_eq!(lhs, BrauerMorphism::permutation(&perm::compose(a, b)));
            }
        }
        assert_eq!(BrauerMorphism::permutation(&[1, 0]), g(X));
        assert_eq!(BrauerMorphism::permutation(&[0, 1, 2]), BrauerMorphism::identity(3));
    }

    #[test]
    fn antisymmetrizers() {
        assert_eq!(BrauerMorphism::antisymmetrizer(1).unwrap(), g(I));
        let s2 = BrauerMorphism::antisymmetrizer(2).unwrap();
        assert_eq!(s2, BrauerMorphism::identity(2).sub(&g(X)).unwrap());
        for m in 2..=3 {
            let s = BrauerMorphism::antisymmetrizer(m).unwrap();
            assert_eq!(s.then(&s).unwrap(), s.scale(&DeltaPoly::constant(factorial(m))));
        }
        let err = BrauerMorphism::antisymmetrizer(9).unwrap_err();
        assert!(err.to_string().contains("362880"), "{err}");
    }

    #[test]
    fn sigma_absorbs_permutations_with_sign() {
        for r in 1..=4 {
            let s = BrauerMorphism::antisymmetrizer(r).unwrap();
            for p in perm::all(r) {
                let pi = BrauerMorphism::permutation(&p);
                let expected = s.scale(&DeltaPoly::from(perm::sign(&p)));
                assert_eq!(pi.then(&s).unwrap(), expected);
                assert_eq!(s.then(&pi).unwrap(), expected);
            }
        }
    }

    #[test]
    fn rotations() {
        // bending one leg of the cap gives the identity strand
        assert_eq!(g(A).rotate_up(1).unwrap(), g(I));
        assert_eq!(g(A).rotate_up(2).unwrap(), g(U));
        assert_eq!(g(U).rotate_down(2).unwrap(), g(A));
        assert!(matches!(g(U).rotate_up(1), Err(Error::ArityUnderflow { .. })));
        let s2 = BrauerMorphism::antisymmetrizer(2).unwrap();
        assert_eq!(s2.rotate_up(2).unwrap().rotate_down(2).unwrap(), s2);
        let full = s2.partial_trace().unwrap().partial_trace().unwrap();
        assert_eq!(full.as_scalar().unwrap(), DeltaPoly::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn identity_closure_counts_loops() {
        for r in 0..=4 {
            let mut f = BrauerMorphism::identity(r);
            for _ in 0..r {
                f = f.partial_trace().unwrap();
            }
            assert_eq!(f.as_scalar().unwrap(), DeltaPoly::monomial(Rational::one(), r));
        }
    }

    #[test]
    fn reduction_lemma_small_cases() {
        let s2 = BrauerMorphism::antisymmetrizer(2).unwrap();
        assert_eq!(
            s2.partial_trace().unwrap(),
            g(I).scale(&DeltaPoly::from_ints(&[-1, 1]))
        );
        for r in 2..=4 {
            let s = BrauerMorphism::antisymmetrizer(r).unwrap();
            assert_eq!(s, antisymmetrizer_recursion_rhs(r).unwrap(), "recursion r={r}");
            assert_eq!(s.partial_trace().unwrap(), antisymmetrizer_trace_rhs(r).unwrap(), "trace r={r}");
        }
    }

    #[test]
    fn matching_counts_are_double_factorials() {
        let expected = [1, 1, 3, 15, 105];
        for (d, &n) in expected.iter().enumerate() {
            assert_eq!(all_diagrams(0, 2 * d).len(), n);
        }
        assert!(all_diagrams(1, 2).is_empty());
    }

    #[test]
    fn construction_validates() {
        assert!(BrauerDiagram::new(1, 1, vec![(1, 0)]).is_ok());
        assert!(BrauerDiagram::new(1, 1, vec![(0, 0)]).is_err());
        assert!(BrauerDiagram::new(2, 1, vec![(0, 1)]).is_err());
        assert!(BrauerDiagram::new(2, 2, vec![(0, 1), (0, 2)]).is_err());
    }
}
