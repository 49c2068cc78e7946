mod common;

use brauer::diagram::{all_diagrams, antisymmetrizer_recursion_rhs, antisymmetrizer_trace_rhs};
use brauer::perm;
use brauer::{BrauerMorphism, DeltaPoly};
use common::*;
use rand::Rng;

#[test]
fn composition_is_associative() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let (a, b, c, d) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let f = random_brauer(&mut rng, a, b, 3);
        let g = random_brauer(&mut rng, b, c, 3);
        let h = random_brauer(&mut rng, c, d, 3);
        assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
    }
}

#[test]
fn tensor_is_associative_and_dual_is_contravariant() {
    let mut rng = rng(5);
    for _ in 0..100 {
        let (a, b, c) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let f = random_brauer(&mut rng, a, b, 2);
        let g = random_brauer(&mut rng, b, c, 2);
        let h = random_brauer(&mut rng, c, a, 2);
        assert_eq!(f.tensor(&g).tensor(&h), f.tensor(&g.tensor(&h)));
        assert_eq!(f.then(&g).unwrap().dual(), g.dual().then(&f.dual()).unwrap());
        assert_eq!(f.tensor(&g).dual(), f.dual().tensor(&g.dual()));
        assert_eq!(f.dual().dual(), f);
    }
}

#[test]
fn closing_identities_counts_loops() {
    for r in 0..=5 {
        let closed = BrauerMorphism::identity(r).rotate_up(r).unwrap().rotate_down(r).unwrap();
        let cups = BrauerMorphism::identity(r).rotate_up(r).unwrap();
        let value = cups.then(&cups.dual()).unwrap();
        assert_eq!(value.as_scalar(), Some(DeltaPoly::monomial(brauer::scalars::rat(1), r)));
        assert_eq!(closed, BrauerMorphism::identity(r));
    }
}

#[test]
fn antisymmetrizer_absorbs_permutations() {
    for r in 1..=4 {
        let sigma = BrauerMorphism::antisymmetrizer(r).unwrap();
        for p in perm::all(r) {
            let pi = BrauerMorphism::permutation(&p);
            let signed = sigma.scale(&DeltaPoly::from(perm::sign(&p)));
            assert_eq!(pi.then(&sigma).unwrap(), signed);
            assert_eq!(sigma.then(&pi).unwrap(), signed);
        }
    }
}

#[test]
fn reduction_lemma_through_five() {
    for r in 2..=5 {
        let sigma = BrauerMorphism::antisymmetrizer(r).unwrap();
        assert_eq!(sigma, antisymmetrizer_recursion_rhs(r).unwrap(), "recursion r={r}");
        assert_eq!(sigma.partial_trace().unwrap(), antisymmetrizer_trace_rhs(r).unwrap(), "trace r={r}");
    }
}

#[test]
fn matchings_are_double_factorial() {
    let mut expected = 1;
    for d in 1..=4 {
        expected *= 2 * d - 1;
        assert_eq!(all_diagrams(0, 2 * d).len(), expected);
    }
    assert!(all_diagrams(0, 3).is_empty());
}

#[test]
fn closure_of_sigma_two() {
    let sigma = BrauerMorphism::antisymmetrizer(2).unwrap();
    let closed = sigma.partial_trace().unwrap().partial_trace().unwrap();
    assert_eq!(closed.as_scalar(), Some(DeltaPoly::from_ints(&[0, -1, 1])));
}
