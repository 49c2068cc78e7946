#![allow(dead_code)]

use brauer::diagram::all_diagrams;
use brauer::enhanced::single_delta_diagrams;
use brauer::expr::{Atom, Expr};
use brauer::scalars::{ratio, Rational};
use brauer::{BrauerMorphism, DeltaPoly, EnhancedMorphism, Tensor};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let n = rng.gen_range(-4i64..=4);
    let d = rng.gen_range(1i64..=3);
    ratio(if n == 0 { 1 } else { n }, d)
}

/// One layer `s → ?` built from side-by-side atoms covering exactly `s`
/// inputs, with at most `budget` atoms. Returns the layer and its target.
fn layer(rng: &mut impl Rng, m: usize, s: usize, budget: &mut usize) -> (Expr, usize) {
    let mut parts: Vec<(Expr, usize)> = Vec::new();
    let mut left = s;
    while left > 0 || parts.is_empty() {
        let mut options: Vec<(Expr, usize, usize)> = vec![(Expr::atom(Atom::I), 1, 1)];
        if left >= 2 {
            options.push((Expr::atom(Atom::A), 2, 0));
            options.push((Expr::atom(Atom::X), 2, 2));
        }
        if left >= m {
            options.push((Expr::atom(Atom::Delta).dual(), m, 0));
        }
        if *budget > 0 {
            options.push((Expr::atom(Atom::U), 0, 2));
            options.push((Expr::atom(Atom::Delta), 0, m));
        }
        if left == 0 {
            options.retain(|o| o.1 == 0);
        }
        let (e, src, tgt) = options.choose(rng).unwrap().clone();
        *budget = budget.saturating_sub(1);
        left -= src;
        parts.push((e, tgt));
    }
    let target = parts.iter().map(|p| p.1).sum();
    let mut iter = parts.into_iter().map(|p| p.0);
    let first = iter.next().unwrap();
    (iter.fold(first, |acc, e| acc.tensor(e)), target)
}

/// A random well-typed expression with at most about `max_atoms` atoms.
pub fn random_expr(rng: &mut impl Rng, m: usize, max_atoms: usize) -> Expr {
    loop {
        let s = rng.gen_range(0..=3);
        let mut budget = max_atoms;
        let (mut e, mut t) = layer(rng, m, s, &mut budget);
        let extra = rng.gen_range(0..=2);
        for _ in 0..extra {
            if budget == 0 || t > 6 {
                break;
            }
            let (g, t2) = layer(rng, m, t, &mut budget);
            e = g.after(e);
            t = t2;
        }
        if t <= 6 && e.size() <= 2 * max_atoms + 4 {
            return e;
        }
    }
}

/// A random combination of up to `terms` spanning diagrams `s → t`.
pub fn random_enhanced(rng: &mut impl Rng, m: usize, s: usize, t: usize, terms: usize) -> EnhancedMorphism {
    let mut basis: Vec<_> = all_diagrams(s, t).into_iter().map(Into::into).collect::<Vec<_>>();
    basis.extend(single_delta_diagrams(m, s, t));
    if basis.is_empty() {
        return EnhancedMorphism::zero(m, s, t);
    }
    let picks: Vec<_> = (0..terms)
        .map(|_| (basis.choose(rng).unwrap().clone(), small_rational(rng)))
        .collect();
    EnhancedMorphism::from_terms(m, s, t, picks).unwrap()
}

pub fn random_brauer(rng: &mut impl Rng, s: usize, t: usize, terms: usize) -> BrauerMorphism {
    let basis = all_diagrams(s, t);
    if basis.is_empty() {
        return BrauerMorphism::zero(s, t);
    }
    let picks: Vec<_> = (0..terms)
        .map(|_| {
            let c = DeltaPoly::from_coeffs(vec![small_rational(rng), ratio(rng.gen_range(-2..=2), 1)]);
            (basis.choose(rng).unwrap().clone(), c)
        })
        .collect();
    BrauerMorphism::from_terms(s, t, picks).unwrap()
}

pub fn random_tensor(rng: &mut impl Rng, m: usize, r: usize) -> Tensor {
    let n = m.pow(r as u32);
    let entries = (0..n)
        .map(|_| if rng.gen_bool(0.5) { small_rational(rng) } else { ratio(0, 1) })
        .collect();
    Tensor::from_vector(m, r, entries).unwrap()
}

/// Compatible arities `(s, t)` with `s + t` of the right parity for some diagram.
pub fn random_arity(rng: &mut impl Rng, max: usize) -> (usize, usize) {
    let s = rng.gen_range(0..=max);
    let t = rng.gen_range(0..=max);
    (s, t)
}
