//! Dense exact tensors on `(Q^m)^{⊗r}` and the functor from diagrams to them.
//!
//! A tensor `s → t` stores `m^(s+t)` entries. The flat index of an entry is
//! `out·m^s + in`, where `out` and `in` read the top and bottom multi-indices
//! as base-`m` numbers with the leftmost slot most significant.
//!
//! The functor sends I to the identity, U to Č = Σ eᵢ⊗eᵢ, A to the pairing,
//! X to the swap and Δ to the tensor whose entry at a permutation σ of
//! `(1,…,m)` is ε(σ), i.e. `m!·(e₁∧…∧e_m)`. That normalisation is the one for
//! which Δ∘Δ* = Σ_m and Δ*∘Δ = m! hold on the nose.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::diagram::{BrauerDiagram, BrauerMorphism, Generator};
use crate::enhanced::{EnhancedDiagram, EnhancedMorphism};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::linalg;
use crate::perm;
use crate::scalars::{factorial, format_rational, rat, Rational};

pub const DEFAULT_ENTRY_GUARD: u128 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    m: usize,
    source: usize,
    target: usize,
    entries: Vec<Rational>,
}

fn guard(m: usize, slots: usize) -> Result<usize> {
    let entries = (m as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if entries > DEFAULT_ENTRY_GUARD {
        return Err(Error::TensorGuard {
            entries,
            guard: DEFAULT_ENTRY_GUARD,
        });
    }
    Ok(entries as usize)
}

impl Tensor {
    pub fn zeros(m: usize, source: usize, target: usize) -> Result<Self> {
        let n = guard(m, source + target)?;
        Ok(Self {
            m,
            source,
            target,
            entries: vec![Rational::zero(); n],
        })
    }

    /// A `0 → r` tensor from its coordinates.
    pub fn from_vector(m: usize, r: usize, entries: Vec<Rational>) -> Result<Self> {
        let n = guard(m, r)?;
        if entries.len() != n {
            return Err(Error::Invalid(format!("expected {n} coordinates, got {}", entries.len())));
        }
        Ok(Self {
            m,
            source: 0,
            target: r,
            entries,
        })
    }

    pub fn identity(m: usize, r: usize) -> Result<Self> {
        let mut t = Self::zeros(m, r, r)?;
        let n = m.pow(r as u32);
        for i in 0..n {
            t.entries[i * n + i] = Rational::one();
        }
        Ok(t)
    }

    pub fn scalar(m: usize, c: Rational) -> Self {
        Self {
            m,
            source: 0,
            target: 0,
            entries: vec![c],
        }
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

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn as_scalar(&self) -> Option<&Rational> {
        (self.source == 0 && self.target == 0).then(|| &self.entries[0])
    }

    fn dim(&self, slots: usize) -> usize {
        self.m.pow(slots as u32)
    }

    /// Entry addressed by the value (0-based) at each boundary point, bottom
    /// points first.
    pub fn get(&self, point_values: &[usize]) -> &Rational {
        &self.entries[self.flat(point_values)]
    }

    fn flat(&self, point_values: &[usize]) -> usize {
        debug_assert_eq!(point_values.len(), self.source + self.target);
        let (bottom, top) = point_values.split_at(self.source);
        let digits = |xs: &[usize]| xs.iter().fold(0, |acc, &x| acc * self.m + x);
        digits(top) * self.dim(self.source) + digits(bottom)
    }

    fn check_shape(&self, other: &Tensor) -> Result<()> {
        if (self.m, self.source, self.target) != (other.m, other.source, other.target) {
            return Err(Error::arity(self.shape(), other.shape()));
        }
        Ok(())
    }

    fn shape(&self) -> String {
        format!("m={} {}→{}", self.m, self.source, self.target)
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(self.with_entries(entries))
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        self.with_entries(self.entries.iter().map(|a| a * c).collect())
    }

    fn with_entries(&self, entries: Vec<Rational>) -> Tensor {
        Tensor {
            m: self.m,
            source: self.source,
            target: self.target,
            entries,
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Tensor) -> Result<Tensor> {
        if self.m != g.m || self.target != g.source {
            return Err(Error::arity(self.shape(), g.shape()));
        }
        let mut out = Tensor::zeros(self.m, self.source, g.target)?;
        let (ns, nt, nu) = (self.dim(self.source), self.dim(self.target), self.dim(g.target));
        for mid in 0..nt {
            for inp in 0..ns {
                let f = &self.entries[mid * ns + inp];
                if f.is_zero() {
                    continue;
                }
                for o in 0..nu {
                    let gv = &g.entries[o * nt + mid];
                    if !gv.is_zero() {
                        out.entries[o * ns + inp] += f * gv;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ⊗ g`.
    pub fn tensor(&self, g: &Tensor) -> Result<Tensor> {
        if self.m != g.m {
            return Err(Error::MismatchedM(self.m, g.m));
        }
        let mut out = Tensor::zeros(self.m, self.source + g.source, self.target + g.target)?;
        let (fs, ft) = (self.dim(self.source), self.dim(self.target));
        let (gs, gt) = (g.dim(g.source), g.dim(g.target));
        for fo in 0..ft {
            for fi in 0..fs {
                let a = &self.entries[fo * fs + fi];
                if a.is_zero() {
                    continue;
                }
                for go in 0..gt {
                    for gi in 0..gs {
                        let b = &g.entries[go * gs + gi];
                        if !b.is_zero() {
                            out.entries[(fo * gt + go) * (fs * gs) + fi * gs + gi] = a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transpose: the image of the horizontal reflection.
    pub fn dual(&self) -> Tensor {
        let (ns, nt) = (self.dim(self.source), self.dim(self.target));
        let mut entries = vec![Rational::zero(); ns * nt];
        for o in 0..nt {
            for i in 0..ns {
                entries[i * nt + o] = self.entries[o * ns + i].clone();
            }
        }
        Tensor {
            m: self.m,
            source: self.target,
            target: self.source,
            entries,
        }
    }

    /// Frobenius pairing Σ xᵢyᵢ in the orthonormal standard basis.
    pub fn bilinear_form(&self, other: &Tensor) -> Result<Rational> {
        self.check_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// For `0 → r`: `(σ·x)` has slot `σ(k)` carrying what slot `k` carried.
    pub fn permute_slots(&self, sigma: &[usize]) -> Tensor {
        assert_eq!(self.source, 0);
        let r = self.target;
        assert_eq!(sigma.len(), r);
        let mut out = vec![Rational::zero(); self.entries.len()];
        let mut digits = vec![0usize; r];
        let mut moved = vec![0usize; r];
        for (idx, v) in self.entries.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            self.digits_of(idx, &mut digits);
            for k in 0..r {
                moved[sigma[k]] = digits[k];
            }
            let j = moved.iter().fold(0, |acc, &x| acc * self.m + x);
            out[j] = v.clone();
        }
        self.with_entries(out)
    }

    fn digits_of(&self, mut idx: usize, digits: &mut [usize]) {
        for d in digits.iter_mut().rev() {
            *d = idx % self.m;
            idx /= self.m;
        }
    }

    /// Contract slots `a < b` of a `0 → r` tensor with the form.
    pub fn contract(&self, a: usize, b: usize) -> Result<Tensor> {
        assert_eq!(self.source, 0);
        let r = self.target;
        assert!(a < b && b < r);
        let mut out = Tensor::zeros(self.m, 0, r - 2)?;
        let mut digits = vec![0usize; r];
        for (idx, v) in self.entries.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            self.digits_of(idx, &mut digits);
            if digits[a] != digits[b] {
                continue;
            }
            let j = digits
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != a && k != b)
                .fold(0, |acc, (_, &x)| acc * self.m + x);
            out.entries[j] += v;
        }
        Ok(out)
    }

    /// Every pairwise slot contraction vanishes.
    pub fn is_harmonic(&self) -> bool {
        let r = self.target;
        assert_eq!(self.source, 0);
        assert!(r >= 2, "harmonicity needs at least two slots");
        (0..r).all(|a| (a + 1..r).all(|b| self.contract(a, b).is_ok_and(|c| c.is_zero())))
    }

    /// Orthogonal projection onto `QΛ` in the first `m` slots, identity on the rest.
    pub fn pi_lambda(&self) -> Result<Tensor> {
        let m = self.m;
        if self.source != 0 || self.target < m {
            return Err(Error::ArityUnderflow {
                requested: m,
                available: self.target,
            });
        }
        let lambda = lambda(m)?;
        let norm = lambda.bilinear_form(&lambda)?;
        let head = self.dim(m);
        let tail = self.dim(self.target - m);
        let mut out = vec![Rational::zero(); self.entries.len()];
        for t in 0..tail {
            let c = (0..head)
                .filter(|&h| !lambda.entries[h].is_zero())
                .fold(Rational::zero(), |acc, h| acc + &lambda.entries[h] * &self.entries[h * tail + t]);
            if c.is_zero() {
                continue;
            }
            let c = c / &norm;
            for h in 0..head {
                if !lambda.entries[h].is_zero() {
                    out[h * tail + t] = &c * &lambda.entries[h];
                }
            }
        }
        Ok(self.with_entries(out))
    }

    /// Apply `g^{⊗r}` to a `0 → r` tensor; `g` is `m × m`.
    pub fn act(&self, g: &[Vec<Rational>]) -> Tensor {
        assert_eq!(self.source, 0);
        let mut cur = self.entries.clone();
        let r = self.target;
        let m = self.m;
        for slot in 0..r {
            let stride = m.pow((r - 1 - slot) as u32);
            let mut next = vec![Rational::zero(); cur.len()];
            for (idx, v) in cur.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let digit = (idx / stride) % m;
                let base = idx - digit * stride;
                for (row, grow) in g.iter().enumerate() {
                    let a = &grow[digit];
                    if !a.is_zero() {
                        next[base + row * stride] += a * v;
                    }
                }
            }
            cur = next;
        }
        self.with_entries(cur)
    }

    /// Nonzero entries keyed by the one-based value at each boundary point,
    /// bottom points first, concatenated.
    pub fn to_json(&self) -> Value {
        let n = self.source + self.target;
        let mut values = vec![0usize; n];
        let mut rows: Vec<(String, String)> = Vec::new();
        for_each_assignment(self.m, n, &mut values, &mut |vals| {
            let v = self.get(vals);
            if !v.is_zero() {
                let key: String = vals.iter().map(|x| (x + 1).to_string()).collect();
                rows.push((key, format_rational(v)));
            }
        });
        json!({
            "m": self.m,
            "source": self.source,
            "target": self.target,
            "entries": rows.into_iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
        })
    }
}

impl Tensor {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialise")
    }
}

fn for_each_assignment(m: usize, n: usize, values: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn go(m: usize, k: usize, values: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k == values.len() {
            f(values);
            return;
        }
        for v in 0..m {
            values[k] = v;
            go(m, k + 1, values, f);
        }
    }
    values.resize(n, 0);
    go(m, 0, values, f);
}

/// e₁∧…∧e_m = (m!)⁻¹ Σ ε(σ) e_σ, as a `0 → m` tensor.
pub fn lambda(m: usize) -> Result<Tensor> {
    Ok(vertex(m)?.scale(&factorial(m).recip()))
}

/// The image of Δ: Σ ε(σ) e_σ.
pub fn vertex(m: usize) -> Result<Tensor> {
    let mut t = Tensor::zeros(m, 0, m)?;
    for p in perm::all(m) {
        let idx = t.flat(&p);
        t.entries[idx] = rat(perm::sign(&p));
    }
    Ok(t)
}

/// Č = Σ eᵢ⊗eᵢ.
pub fn cup(m: usize) -> Result<Tensor> {
    eval_brauer_diagram(&BrauerDiagram::new(0, 2, vec![(0, 1)])?, m)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorKind {
    I,
    U,
    A,
    X,
    Delta,
}

pub fn eval_generator(kind: GeneratorKind, m: usize) -> Result<Tensor> {
    let brauer = |g| eval_brauer(&BrauerMorphism::generator(g), m);
    match kind {
        GeneratorKind::I => brauer(Generator::I),
        GeneratorKind::U => brauer(Generator::U),
        GeneratorKind::A => brauer(Generator::A),
        GeneratorKind::X => brauer(Generator::X),
        GeneratorKind::Delta => vertex(m),
    }
}

/// Direct contraction of a single diagram: each pair forces equal values, the
/// vertex legs contribute ε of their values.
pub fn eval_diagram(d: &EnhancedDiagram, m: usize) -> Result<Tensor> {
    let mut t = Tensor::zeros(m, d.source(), d.target())?;
    let n = d.source() + d.target();
    let pairs = d.pairs();
    let legs = d.delta_legs();
    let leg_choices: Vec<(Vec<usize>, Rational)> = match legs {
        None => vec![(Vec::new(), Rational::one())],
        Some(l) => {
            if l.len() != m {
                return Err(Error::Invalid(format!("vertex with {} legs evaluated at m={m}", l.len())));
            }
            perm::all(m).into_iter().map(|p| {
                let s = rat(perm::sign(&p));
                (p, s)
            }).collect()
        }
    };
    let mut values = vec![0usize; n];
    let mut pair_values = vec![0usize; pairs.len()];
    let total = m.pow(pairs.len() as u32);
    for code in 0..total {
        let mut c = code;
        for v in pair_values.iter_mut().rev() {
            *v = c % m;
            c /= m;
        }
        for (&(a, b), &v) in pairs.iter().zip(&pair_values) {
            values[a] = v;
            values[b] = v;
        }
        for (choice, sign) in &leg_choices {
            if let Some(l) = legs {
                for (&point, &v) in l.iter().zip(choice) {
                    values[point] = v;
                }
            }
            let idx = t.flat(&values);
            t.entries[idx] = sign.clone();
        }
    }
    Ok(t)
}

pub fn eval_brauer_diagram(d: &BrauerDiagram, m: usize) -> Result<Tensor> {
    eval_diagram(&d.clone().into(), m)
}

/// Linear extension with δ = m.
pub fn eval_brauer(f: &BrauerMorphism, m: usize) -> Result<Tensor> {
    let mut out = Tensor::zeros(m, f.source(), f.target())?;
    for (d, c) in f.specialize(&rat(m as i64)) {
        accumulate(&mut out, &eval_brauer_diagram(&d, m)?, &c);
    }
    Ok(out)
}

pub fn eval_enhanced(f: &EnhancedMorphism) -> Result<Tensor> {
    let m = f.m();
    let mut out = Tensor::zeros(m, f.source(), f.target())?;
    for (d, c) in f.terms() {
        accumulate(&mut out, &eval_diagram(d, m)?, c);
    }
    Ok(out)
}

fn accumulate(acc: &mut Tensor, t: &Tensor, c: &Rational) {
    for (a, b) in acc.entries.iter_mut().zip(&t.entries) {
        if !b.is_zero() {
            *a += b * c;
        }
    }
}

/// Evaluates an expression compositionally from generator images, without
/// going through the rewrite engine.
pub fn eval_expr(expr: &Expr, m: usize) -> Result<Tensor> {
    expr.arity(m)?;
    eval_expr_unchecked(expr, m)
}

fn eval_expr_unchecked(expr: &Expr, m: usize) -> Result<Tensor> {
    match expr {
        Expr::Atom(a) => match a {
            Atom::I => eval_generator(GeneratorKind::I, m),
            Atom::U => eval_generator(GeneratorKind::U, m),
            Atom::A => eval_generator(GeneratorKind::A, m),
            Atom::X => eval_generator(GeneratorKind::X, m),
            Atom::Delta => eval_generator(GeneratorKind::Delta, m),
            Atom::Sigma(r) => {
                let mut out = Tensor::zeros(m, *r, *r)?;
                for p in perm::all(*r) {
                    accumulate(&mut out, &permutation_tensor(&p, m)?, &rat(perm::sign(&p)));
                }
                Ok(out)
            }
            Atom::Perm(p) => permutation_tensor(p, m),
        },
        Expr::Compose(g, f) => eval_expr_unchecked(f, m)?.then(&eval_expr_unchecked(g, m)?),
        Expr::Tensor(a, b) => eval_expr_unchecked(a, m)?.tensor(&eval_expr_unchecked(b, m)?),
        Expr::Power(e, k) => {
            let e = eval_expr_unchecked(e, m)?;
            let mut acc = Tensor::identity(m, 0)?;
            for _ in 0..*k {
                acc = acc.tensor(&e)?;
            }
            Ok(acc)
        }
        Expr::Dual(e) => Ok(eval_expr_unchecked(e, m)?.dual()),
    }
}

/// Bottom slot `p` carried to top slot `perm[p]`.
pub fn permutation_tensor(p: &[usize], m: usize) -> Result<Tensor> {
    let r = p.len();
    let mut t = Tensor::zeros(m, r, r)?;
    let n = t.dim(r);
    let mut digits = vec![0usize; r];
    let mut moved = vec![0usize; r];
    for inp in 0..n {
        t.digits_of(inp, &mut digits);
        for k in 0..r {
            moved[p[k]] = digits[k];
        }
        let out = moved.iter().fold(0, |acc, &x| acc * m + x);
        t.entries[out * n + inp] = Rational::one();
    }
    Ok(t)
}

/// Distinct images of a `0 → r` tensor under all slot permutations.
pub fn sym_span(seed: &Tensor) -> Result<Vec<Tensor>> {
    let r = seed.target;
    if r > 8 {
        return Err(Error::CapExceeded {
            what: format!("Sym_{r} orbit"),
            terms: factorial(r).to_string(),
            cap: 8,
        });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in perm::all(r) {
        let t = seed.permute_slots(&p);
        if seen.insert(t.entries.clone()) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Rank of a family of same-shape tensors, read as vectors.
pub fn span_rank(tensors: &[Tensor]) -> usize {
    span(tensors).rank()
}

pub fn span(tensors: &[Tensor]) -> linalg::Echelon {
    let ncols = tensors.first().map_or(0, |t| t.entries.len());
    linalg::Echelon::from_rows(ncols, tensors.iter().map(|t| linalg::sparse(&t.entries)))
}

/// Rotation by the angle with cosine `c` and sine `s` in the `(a, b)` plane.
pub fn givens(m: usize, a: usize, b: usize, c: &Rational, s: &Rational) -> Vec<Vec<Rational>> {
    let mut g: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    g[a][a] = c.clone();
    g[b][b] = c.clone();
    g[a][b] = -s.clone();
    g[b][a] = s.clone();
    g
}

/// diag(−1, 1, …, 1).
pub fn reflection(m: usize) -> Vec<Vec<Rational>> {
    let mut g = givens(m, 0, 1.min(m - 1), &Rational::one(), &Rational::zero());
    g[0][0] = rat(-1);
    g
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}
