//! The enhanced Brauer category: Brauer diagrams plus at most one
//! antisymmetric `m`-valent vertex Δ per canonical term, with δ fixed to `m`.
//!
//! Rewriting happens on glued strand nets and uses four rules:
//!
//! * a closed loop is removed for a factor `m`;
//! * a term in which two legs of one vertex are joined vanishes (harmonicity);
//! * two vertices are replaced by Σ_π ε(π)·(leg k of the first joined to leg
//!   π(k) of the second), the expansion of Δ∘Δ* = Σ_m after rotating the two
//!   vertices to face each other;
//! * the legs of the surviving vertex are sorted by boundary point, with the
//!   sign of the sorting permutation.
//!
//! These rules alone do not give unique normal forms: with three or more
//! vertices, different fusion orders can leave results that differ by a
//! combination of diagrams with zero tensor image (an analogue of Σ_{m+1}).
//! [`Rewriter::normalize`] therefore finishes by reducing modulo that kernel,
//! see [`crate::homspace::reduce_modulo_kernel`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::diagram::{self, arity_label, check_matching, BrauerDiagram, BrauerMorphism};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::net::{End, Net};
use crate::perm;
use crate::scalars::{rat, Rational};

pub const DEFAULT_TERM_BOUND: usize = 1_000_000;

/// A Brauer diagram or a single-vertex diagram in canonical form.
///
/// Field order gives the canonical term order: Brauer-only diagrams sort
/// before single-Δ diagrams, then by legs, then by pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EnhancedDiagram {
    source: usize,
    target: usize,
    delta_legs: Option<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
}

impl EnhancedDiagram {
    /// Validates a diagram whose legs are already strictly increasing.
    pub fn new(
        source: usize,
        target: usize,
        delta_legs: Option<Vec<usize>>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = source + target;
        let legs = delta_legs.as_deref().unwrap_or(&[]);
        if legs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("delta legs must be strictly increasing".into()));
        }
        if delta_legs.as_ref().is_some_and(|l| l.len() < 2) {
            return Err(Error::Invalid("a delta vertex needs at least two legs".into()));
        }
        check_matching(n, &pairs, legs)?;
        Ok(Self {
            source,
            target,
            delta_legs,
            pairs: diagram::canonical_pairs(pairs),
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn delta_legs(&self) -> Option<&[usize]> {
        self.delta_legs.as_deref()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_brauer(&self) -> bool {
        self.delta_legs.is_none()
    }

    pub(crate) fn net(&self) -> Net {
        Net::from_parts(self.source, self.target, &self.pairs, self.delta_legs.as_deref())
    }
}

impl From<BrauerDiagram> for EnhancedDiagram {
    fn from(d: BrauerDiagram) -> Self {
        Self {
            source: d.source(),
            target: d.target(),
            delta_legs: None,
            pairs: d.pairs().to_vec(),
        }
    }
}

/// Which pair of vertices is fused first when a net carries several.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum FusionOrder {
    #[default]
    Leftmost,
    Rightmost,
}

/// Evaluation order for [`Rewriter::normalize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    /// Normalise every subexpression as soon as it is built.
    #[default]
    Innermost,
    /// Glue the whole expression first, rewrite once at the end.
    Outermost,
}

/// Rewrite settings for a fixed `m`.
#[derive(Clone, Debug)]
pub struct Rewriter {
    m: usize,
    term_bound: usize,
    fusion: FusionOrder,
    reduce: bool,
}

impl Rewriter {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidM(m));
        }
        Ok(Self {
            m,
            term_bound: DEFAULT_TERM_BOUND,
            fusion: FusionOrder::Leftmost,
            reduce: true,
        })
    }

    pub fn with_term_bound(mut self, bound: usize) -> Self {
        self.term_bound = bound;
        self
    }

    pub fn with_fusion(mut self, fusion: FusionOrder) -> Self {
        self.fusion = fusion;
        self
    }

    /// Turns the final kernel reduction of [`Rewriter::normalize`] on or off.
    pub fn with_kernel_reduction(mut self, reduce: bool) -> Self {
        self.reduce = reduce;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn term_bound(&self) -> usize {
        self.term_bound
    }

    /// Rewrites a weighted sum of nets to canonical form.
    pub(crate) fn resolve(&self, source: usize, target: usize, nets: Vec<(Net, Rational)>) -> Result<EnhancedMorphism> {
        let mut acc = Accumulator {
            terms: BTreeMap::new(),
            produced: 0,
            bound: self.term_bound,
        };
        for (net, c) in nets {
            self.resolve_net(net, c, &mut acc)?;
        }
        Ok(EnhancedMorphism {
            m: self.m,
            source,
            target,
            terms: acc.terms,
        })
    }

    fn resolve_net(&self, net: Net, coeff: Rational, acc: &mut Accumulator) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        let traced = net.trace();
        let self_joined = traced.links.iter().any(|link| {
            matches!(link, (End::Leg { vertex: a, .. }, End::Leg { vertex: b, .. }) if a == b)
        });
        if self_joined {
            return Ok(());
        }
        let coeff = coeff * rat(self.m as i64).pow(traced.loops as i32);

        match net.vertices.len() {
            0 | 1 => {
                let mut pairs = Vec::new();
                let mut attach = vec![usize::MAX; self.m];
                for link in &traced.links {
                    match *link {
                        (End::Point(a), End::Point(b)) => pairs.push((a, b)),
                        (End::Point(p), End::Leg { leg, .. }) | (End::Leg { leg, .. }, End::Point(p)) => {
                            attach[leg] = p
                        }
                        (End::Leg { .. }, End::Leg { .. }) => unreachable!("single vertex joined to itself"),
                    }
                }
                let (delta_legs, sign) = if net.vertices.is_empty() {
                    (None, 1)
                } else {
                    let (sorted, sign) = perm::sort_with_sign(&attach).expect("legs reach distinct points");
                    (Some(sorted), sign)
                };
                let d = EnhancedDiagram {
                    source: net.source,
                    target: net.target,
                    delta_legs,
                    pairs: diagram::canonical_pairs(pairs),
                };
                acc.push(d, coeff * rat(sign))
            }
            n => {
                let reduced = reduced_net(&net, &traced.links);
                let (v, w) = match self.fusion {
                    FusionOrder::Leftmost => (0, 1),
                    FusionOrder::Rightmost => (n - 2, n - 1),
                };
                for p in perm::all(self.m) {
                    let sign = rat(perm::sign(&p));
                    self.resolve_net(reduced.fuse(v, w, &p), &coeff * sign, acc)?;
                }
                Ok(())
            }
        }
    }

    /// Rewrites an expression tree to canonical form.
    pub fn normalize(&self, expr: &Expr, strategy: Strategy) -> Result<EnhancedMorphism> {
        let (source, target) = expr.arity(self.m)?;
        let rewritten = match strategy {
            Strategy::Innermost => self.normalize_innermost(expr)?,
            Strategy::Outermost => {
                let nets = self.raw_nets(expr)?;
                self.resolve(source, target, nets)?
            }
        };
        self.finish(rewritten)
    }

    /// Rewrites an existing morphism (for example one read from disk) to the
    /// same normal form [`Rewriter::normalize`] produces.
    pub fn canonicalize(&self, f: &EnhancedMorphism) -> Result<EnhancedMorphism> {
        self.check_m(f)?;
        let nets = f.terms.iter().map(|(d, c)| (d.net(), c.clone())).collect();
        let rewritten = self.resolve(f.source, f.target, nets)?;
        self.finish(rewritten)
    }

    fn finish(&self, f: EnhancedMorphism) -> Result<EnhancedMorphism> {
        if self.reduce {
            crate::homspace::reduce_modulo_kernel(&f)
        } else {
            Ok(f)
        }
    }

    fn normalize_innermost(&self, expr: &Expr) -> Result<EnhancedMorphism> {
        match expr {
            Expr::Atom(a) => self.atom(a),
            Expr::Compose(g, f) => {
                let f = self.normalize_innermost(f)?;
                let g = self.normalize_innermost(g)?;
                self.compose(&f, &g)
            }
            Expr::Tensor(a, b) => {
                let a = self.normalize_innermost(a)?;
                let b = self.normalize_innermost(b)?;
                self.tensor(&a, &b)
            }
            Expr::Power(e, k) => {
                let e = self.normalize_innermost(e)?;
                let mut acc = EnhancedMorphism::identity(self.m, 0);
                for _ in 0..*k {
                    acc = self.tensor(&acc, &e)?;
                }
                Ok(acc)
            }
            Expr::Dual(e) => self.dual(&self.normalize_innermost(e)?),
        }
    }

    fn atom(&self, a: &Atom) -> Result<EnhancedMorphism> {
        let m = self.m;
        Ok(match a {
            Atom::I => EnhancedMorphism::identity(m, 1),
            Atom::U => EnhancedMorphism::from_brauer(&BrauerMorphism::generator(diagram::Generator::U), m),
            Atom::A => EnhancedMorphism::from_brauer(&BrauerMorphism::generator(diagram::Generator::A), m),
            Atom::X => EnhancedMorphism::from_brauer(&BrauerMorphism::generator(diagram::Generator::X), m),
            Atom::Delta => EnhancedMorphism::delta(m)?,
            Atom::Sigma(r) => {
                let terms = (1..=*r).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
                if terms > self.term_bound {
                    return Err(Error::TermBound {
                        terms,
                        bound: self.term_bound,
                    });
                }
                EnhancedMorphism::from_brauer(&BrauerMorphism::antisymmetrizer(*r)?, m)
            }
            Atom::Perm(p) => EnhancedMorphism::from_brauer(&BrauerMorphism::permutation(p), m),
        })
    }

    /// The un-rewritten sum of nets for an expression.
    fn raw_nets(&self, expr: &Expr) -> Result<Vec<(Net, Rational)>> {
        let nets = match expr {
            Expr::Atom(a) => self
                .atom(a)?
                .terms
                .into_iter()
                .map(|(d, c)| (d.net(), c))
                .collect(),
            Expr::Compose(g, f) => {
                let f = self.raw_nets(f)?;
                let g = self.raw_nets(g)?;
                self.product(&f, &g, Net::then)?
            }
            Expr::Tensor(a, b) => {
                let a = self.raw_nets(a)?;
                let b = self.raw_nets(b)?;
                self.product(&a, &b, Net::beside)?
            }
            Expr::Power(e, k) => {
                let e = self.raw_nets(e)?;
                let mut acc = vec![(Net::from_parts(0, 0, &[], None), Rational::one())];
                for _ in 0..*k {
                    acc = self.product(&acc, &e, Net::beside)?;
                }
                acc
            }
            Expr::Dual(e) => self
                .raw_nets(e)?
                .into_iter()
                .map(|(n, c)| (n.reflect(), c))
                .collect(),
        };
        Ok(nets)
    }

    fn product(
        &self,
        a: &[(Net, Rational)],
        b: &[(Net, Rational)],
        glue: impl Fn(&Net, &Net) -> Net,
    ) -> Result<Vec<(Net, Rational)>> {
        let n = a.len() * b.len();
        if n > self.term_bound {
            return Err(Error::TermBound {
                terms: n,
                bound: self.term_bound,
            });
        }
        let mut out = Vec::with_capacity(n);
        for (na, ca) in a {
            for (nb, cb) in b {
                out.push((glue(na, nb), ca * cb));
            }
        }
        Ok(out)
    }

    fn check_m(&self, f: &EnhancedMorphism) -> Result<()> {
        if f.m != self.m {
            return Err(Error::MismatchedM(self.m, f.m));
        }
        Ok(())
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: &EnhancedMorphism, g: &EnhancedMorphism) -> Result<EnhancedMorphism> {
        self.check_m(f)?;
        self.check_m(g)?;
        if f.target != g.source {
            return Err(Error::arity(
                arity_label(f.source, f.target),
                arity_label(g.source, g.target),
            ));
        }
        let mut nets = Vec::with_capacity(f.terms.len() * g.terms.len());
        for (df, cf) in &f.terms {
            let nf = df.net();
            for (dg, cg) in &g.terms {
                nets.push((nf.then(&dg.net()), cf * cg));
            }
        }
        self.resolve(f.source, g.target, nets)
    }

    pub fn tensor(&self, f: &EnhancedMorphism, g: &EnhancedMorphism) -> Result<EnhancedMorphism> {
        self.check_m(f)?;
        self.check_m(g)?;
        let mut nets = Vec::with_capacity(f.terms.len() * g.terms.len());
        for (df, cf) in &f.terms {
            let nf = df.net();
            for (dg, cg) in &g.terms {
                nets.push((nf.beside(&dg.net()), cf * cg));
            }
        }
        self.resolve(f.source + g.source, f.target + g.target, nets)
    }

    pub fn dual(&self, f: &EnhancedMorphism) -> Result<EnhancedMorphism> {
        self.check_m(f)?;
        let nets = f.terms.iter().map(|(d, c)| (d.net().reflect(), c.clone())).collect();
        self.resolve(f.target, f.source, nets)
    }
}

struct Accumulator {
    terms: BTreeMap<EnhancedDiagram, Rational>,
    produced: usize,
    bound: usize,
}

impl Accumulator {
    fn push(&mut self, d: EnhancedDiagram, c: Rational) -> Result<()> {
        self.produced += 1;
        if self.produced > self.bound {
            return Err(Error::TermBound {
                terms: self.produced,
                bound: self.bound,
            });
        }
        add_term(&mut self.terms, d, c);
        Ok(())
    }
}

fn add_term(terms: &mut BTreeMap<EnhancedDiagram, Rational>, d: EnhancedDiagram, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(d) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Rebuild a net from its traced links: boundary points, one fresh node per
/// vertex leg, one edge per link. Loops are dropped.
fn reduced_net(net: &Net, links: &[(End, End)]) -> Net {
    let boundary = net.boundary();
    let mut vertices = Vec::with_capacity(net.vertices.len());
    let mut next = boundary;
    for legs in &net.vertices {
        vertices.push((next..next + legs.len()).collect::<Vec<_>>());
        next += legs.len();
    }
    let node = |e: End| match e {
        End::Point(p) => p,
        End::Leg { vertex, leg } => vertices[vertex][leg],
    };
    let edges = links.iter().map(|&(a, b)| (node(a), node(b))).collect();
    Net {
        source: net.source,
        target: net.target,
        nodes: next,
        edges,
        vertices,
    }
}

/// A rational combination of canonical enhanced diagrams at fixed `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnhancedMorphism {
    m: usize,
    source: usize,
    target: usize,
    terms: BTreeMap<EnhancedDiagram, Rational>,
}

impl EnhancedMorphism {
    pub fn zero(m: usize, source: usize, target: usize) -> Self {
        Self {
            m,
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    /// Collects like terms; every diagram must carry `m` legs if it has a vertex.
    pub fn from_terms(
        m: usize,
        source: usize,
        target: usize,
        terms: impl IntoIterator<Item = (EnhancedDiagram, Rational)>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidM(m));
        }
        let mut out = Self::zero(m, source, target);
        for (d, c) in terms {
            if (d.source, d.target) != (source, target) {
                return Err(Error::arity(arity_label(source, target), arity_label(d.source, d.target)));
            }
            if d.delta_legs.as_ref().is_some_and(|l| l.len() != m) {
                return Err(Error::Invalid(format!("delta vertex must have {m} legs")));
            }
            add_term(&mut out.terms, d, c);
        }
        Ok(out)
    }

    pub fn identity(m: usize, r: usize) -> Self {
        Self::from_brauer(&BrauerMorphism::identity(r), m)
    }

    /// Δ_m: legs at top points `0..m`.
    pub fn delta(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidM(m));
        }
        let d = EnhancedDiagram {
            source: 0,
            target: m,
            delta_legs: Some((0..m).collect()),
            pairs: Vec::new(),
        };
        Self::from_terms(m, 0, m, [(d, Rational::one())])
    }

    /// Specialise δ = m.
    pub fn from_brauer(b: &BrauerMorphism, m: usize) -> Self {
        let mut out = Self::zero(m, b.source(), b.target());
        for (d, c) in b.specialize(&rat(m as i64)) {
            add_term(&mut out.terms, d.into(), c);
        }
        out
    }

    pub fn scalar(m: usize, c: Rational) -> Self {
        let mut out = Self::zero(m, 0, 0);
        add_term(&mut out.terms, BrauerDiagram::empty().into(), c);
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EnhancedDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &EnhancedDiagram) -> Rational {
        self.terms.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value of a `0 → 0` morphism.
    pub fn as_scalar(&self) -> Option<Rational> {
        (self.source == 0 && self.target == 0)
            .then(|| self.coefficient(&BrauerDiagram::empty().into()))
    }

    pub fn max_vertices_per_term(&self) -> usize {
        self.terms.keys().map(|d| usize::from(d.delta_legs.is_some())).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::MismatchedM(self.m, other.m));
        }
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::arity(
                arity_label(self.source, self.target),
                arity_label(other.source, other.target),
            ));
        }
        let mut out = self.clone();
        for (d, c) in &other.terms {
            add_term(&mut out.terms, d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.m, self.source, self.target);
        for (d, a) in &self.terms {
            add_term(&mut out.terms, d.clone(), a * c);
        }
        out
    }

    /// `g ∘ self` with default rewrite settings.
    pub fn then(&self, g: &Self) -> Result<Self> {
        Rewriter::new(self.m)?.compose(self, g)
    }

    pub fn tensor(&self, g: &Self) -> Result<Self> {
        Rewriter::new(self.m)?.tensor(self, g)
    }

    pub fn dual(&self) -> Result<Self> {
        Rewriter::new(self.m)?.dual(self)
    }

    /// Bend the rightmost `q` bottom points up (nested cups).
    pub fn rotate_up(&self, q: usize) -> Result<Self> {
        if q > self.source {
            return Err(Error::ArityUnderflow {
                requested: q,
                available: self.source,
            });
        }
        let cups = Self::from_brauer(&BrauerMorphism::identity(q).rotate_up(q)?, self.m);
        let bend = Self::identity(self.m, self.source - q).tensor(&cups)?;
        bend.then(&self.tensor(&Self::identity(self.m, q))?)
    }

    /// Bend the rightmost `q` top points down (nested caps).
    pub fn rotate_down(&self, q: usize) -> Result<Self> {
        if q > self.target {
            return Err(Error::ArityUnderflow {
                requested: q,
                available: self.target,
            });
        }
        let caps = Self::from_brauer(&BrauerMorphism::identity(q).rotate_down(q)?, self.m);
        let bend = Self::identity(self.m, self.target - q).tensor(&caps)?;
        self.tensor(&Self::identity(self.m, q))?.then(&bend)
    }

    /// The Brauer-only part.
    pub fn brauer_part(&self) -> Self {
        self.filter(EnhancedDiagram::is_brauer)
    }

    /// The single-Δ part.
    pub fn delta_part(&self) -> Self {
        self.filter(|d| !d.is_brauer())
    }

    fn filter(&self, keep: impl Fn(&EnhancedDiagram) -> bool) -> Self {
        Self {
            m: self.m,
            source: self.source,
            target: self.target,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| keep(d))
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Every canonical single-vertex diagram `s → t`: legs on an `m`-subset of the
/// points (increasing), a perfect matching on the rest.
pub fn single_delta_diagrams(m: usize, s: usize, t: usize) -> Vec<EnhancedDiagram> {
    let n = s + t;
    if n < m || (n - m) % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for legs in subsets(n, m) {
        let rest: Vec<usize> = (0..n).filter(|p| !legs.contains(p)).collect();
        for pairs in diagram::matchings(&rest) {
            out.push(EnhancedDiagram {
                source: s,
                target: t,
                delta_legs: Some(legs.clone()),
                pairs,
            });
        }
    }
    out.sort();
    out
}

/// Increasing `k`-subsets of `0..n`, lexicographic.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for EnhancedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}→{}:", self.source, self.target)?;
        if let Some(legs) = &self.delta_legs {
            let legs: Vec<String> = legs.iter().map(usize::to_string).collect();
            write!(f, " Δ({})", legs.join(","))?;
        }
        for (a, b) in &self.pairs {
            write!(f, " {a}-{b}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for EnhancedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_scalar() {
            return write!(f, "{c}");
        }
        if self.terms.is_empty() {
            return write!(f, "0 ({}→{})", self.source, self.target);
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            write!(f, "{sign} {} {d}", c.abs())?;
        }
        Ok(())
    }
}
