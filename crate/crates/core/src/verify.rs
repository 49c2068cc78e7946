//! Verification suites: each returns a [`Report`] rather than failing fast.

use std::str::FromStr;

use num_traits::Zero;

use crate::diagram::{antisymmetrizer_recursion_rhs, antisymmetrizer_trace_rhs, BrauerMorphism};
use crate::enhanced::{Rewriter, Strategy};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::homspace;
use crate::oracle;
use crate::report::Report;
use crate::scalars::{factorial, rat, DeltaPoly};
use crate::tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Reduction,
    Sigma,
    Delta,
    Dims,
    SoInv,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => Suite::Relations,
            "reduction" => Suite::Reduction,
            "sigma" => Suite::Sigma,
            "delta" => Suite::Delta,
            "dims" => Suite::Dims,
            "so-inv" => Suite::SoInv,
            "all" => Suite::All,
            _ => return Err(Error::Invalid(format!("unknown suite {s:?}"))),
        })
    }
}

/// Largest tensor degree the dimension and invariant suites visit.
pub const SUITE_R_MAX: usize = 6;

/// Brauer relations sampled from the defining presentation: `(lhs, rhs)`.
const BRAUER_RELATIONS: &[(&str, &str)] = &[
    ("(A⊗I)∘(I⊗U)", "I"),
    ("(I⊗A)∘(U⊗I)", "I"),
    ("X∘X", "I⊗I"),
    ("(X⊗I)∘(I⊗X)∘(X⊗I)", "(I⊗X)∘(X⊗I)∘(I⊗X)"),
    ("A∘X", "A"),
    ("X∘U", "U"),
    ("(A⊗I)∘(I⊗X)", "(I⊗A)∘(X⊗I)"),
    ("(I⊗X)∘(U⊗I)", "(X⊗I)∘(I⊗U)"),
];

fn padded(m: usize, r: usize, middle: &str) -> String {
    let mut parts = Vec::new();
    if r > 0 {
        parts.push(format!("I^{{{r}}}"));
    }
    parts.push(middle.to_string());
    let rest = m - r - 2;
    if rest > 0 {
        parts.push(format!("I^{{{rest}}}"));
    }
    format!("({})∘D", parts.join("⊗"))
}

/// `lhs = rhs` in the rewrite engine under both strategies and under the functor.
fn relation(report: &mut Report, rw: &Rewriter, label: &str, lhs: &Expr, rhs: &Expr) -> Result<()> {
    let m = rw.m();
    let mut engine = true;
    let mut detail = String::new();
    for strategy in [Strategy::Innermost, Strategy::Outermost] {
        let (l, r) = (rw.normalize(lhs, strategy)?, rw.normalize(rhs, strategy)?);
        if l != r {
            engine = false;
            detail = format!("{l} ≠ {r}");
        }
    }
    report.check(format!("{label} in the engine (m={m})"), engine, detail);
    let functor = tensor::eval_expr(lhs, m)? == tensor::eval_expr(rhs, m)?;
    report.check(format!("{label} under F (m={m})"), functor, "");
    Ok(())
}

/// Relations (1)–(4) of the enhanced category, in the engine and under F.
pub fn verify_defining_relations(m: usize) -> Result<Report> {
    let rw = Rewriter::new(m)?;
    let mut report = Report::new();
    for (l, r) in BRAUER_RELATIONS {
        relation(&mut report, &rw, &format!("{l} = {r}"), &parse(l)?, &parse(r)?)?;
    }
    let cap_loop = rw.normalize(&parse("A∘U")?, Strategy::Innermost)?;
    report.check(
        format!("A∘U = δ (m={m})"),
        cap_loop.as_scalar() == Some(rat(m as i64)),
        cap_loop.to_string(),
    );
    for r in 0..=m - 2 {
        let harm = parse(&padded(m, r, "A"))?;
        let mut ok = true;
        for strategy in [Strategy::Innermost, Strategy::Outermost] {
            ok &= rw.normalize(&harm, strategy)?.is_zero();
        }
        report.check(format!("harmonicity at r={r} in the engine (m={m})"), ok, "");
        report.check(
            format!("harmonicity at r={r} under F (m={m})"),
            tensor::eval_expr(&harm, m)?.is_zero(),
            "",
        );
        let swap = parse(&padded(m, r, "X"))?;
        let neg = rw.normalize(&parse("D")?, Strategy::Innermost)?.scale(&rat(-1));
        let mut ok = true;
        for strategy in [Strategy::Innermost, Strategy::Outermost] {
            ok &= rw.normalize(&swap, strategy)? == neg;
        }
        report.check(format!("antisymmetry at r={r} in the engine (m={m})"), ok, "");
        report.check(
            format!("antisymmetry at r={r} under F (m={m})"),
            tensor::eval_expr(&swap, m)? == tensor::vertex(m)?.scale(&rat(-1)),
            "",
        );
    }
    relation(&mut report, &rw, "Δ∘Δ* = Σ_m", &parse("D∘D^*")?, &parse(&format!("S{{{m}}}"))?)?;
    Ok(report)
}

/// Both identities of the reduction lemma over generic δ.
pub fn verify_reduction_lemma(r: usize) -> Result<Report> {
    if r < 2 {
        return Err(Error::Invalid(format!("reduction lemma needs r ≥ 2, got {r}")));
    }
    let mut report = Report::new();
    let sigma = BrauerMorphism::antisymmetrizer(r)?;
    let rhs = antisymmetrizer_recursion_rhs(r)?;
    report.check(
        format!("Σ_{r} recursion"),
        sigma == rhs,
        format!("{} vs {} terms", sigma.len(), rhs.len()),
    );
    let traced = sigma.partial_trace()?;
    report.check(
        format!("closing a strand of Σ_{r} gives −(r−1−δ)Σ_{}", r - 1),
        traced == antisymmetrizer_trace_rhs(r)?,
        "",
    );
    Ok(report)
}

/// Σ_{m+1} = 0 in the enhanced category, Σ_m ≠ 0.
pub fn verify_sigma_vanishing(m: usize) -> Result<Report> {
    homspace::verify_antisymmetrizer_vanishing(m)
}

/// The consequences for δ of the vertex relations.
pub fn delta_constraint_check(m: usize) -> Result<Report> {
    if m < 2 {
        return Err(Error::InvalidM(m));
    }
    let mut report = Report::new();
    let at = rat(m as i64);
    let ff = DeltaPoly::falling_factorial(m);
    report.check(
        format!("δ(δ−1)…(δ−m+1) = m! at δ=m (m={m})"),
        ff.evaluate(&at) == factorial(m),
        "",
    );
    let f = DeltaPoly::f_m(m);
    report.check(format!("f_m(m) = 0 (m={m})"), f.evaluate(&at).is_zero(), f.to_string());
    let g = DeltaPoly::gcd(&(&ff - &DeltaPoly::constant(factorial(m))), &f);
    let expect = DeltaPoly::from_coeffs(vec![-at.clone(), rat(1)]);
    report.check(format!("gcd of the constraints = δ−m (m={m})"), g == expect, g.to_string());
    if m <= 4 {
        let rw = Rewriter::new(m)?;
        let norm = rw.normalize(&parse("D^*∘D")?, Strategy::Innermost)?;
        report.check(
            format!("Δ*∘Δ = m! (m={m})"),
            norm.as_scalar() == Some(factorial(m)),
            norm.to_string(),
        );
    }
    Ok(report)
}

/// Three-route dimension agreement, split independence, SFT double
/// containment, pairing soundness, and agreement with the oracle.
pub fn verify_dims(m: usize, r_max: usize) -> Result<Report> {
    let mut report = Report::new();
    let dims = homspace::dimension_report(m, r_max)?;
    for row in &dims.rows {
        report.check(
            format!("dim Hom {}→{} agrees across routes (m={m})", row.s, row.t),
            row.agree(),
            format!("gram={} functor={} formula={}", row.gram, row.functor, row.formula),
        );
    }
    for (r, ok) in &dims.split_independent {
        report.check(format!("gram rank independent of split, r={r} (m={m})"), *ok, "");
    }
    for r in 0..=r_max {
        let so = oracle::invariant_space(m, r)?.dim();
        let gram = dims.rows.iter().find(|row| row.s + row.t == r).map_or(0, |row| row.gram);
        report.check(
            format!("gram rank = SO(m)-invariants, r={r} (m={m})"),
            gram == so,
            format!("{gram} vs {so}"),
        );
        for s in 0..=r {
            report.extend(homspace::verify_sft(m, s, r - s)?);
            report.extend(homspace::verify_pairing_soundness(m, s, r - s)?);
        }
    }
    if m <= 3 {
        report.extend(homspace::verify_sft(m, m + 1, m + 1)?);
    }
    Ok(report)
}

/// The invariant-theory theorems checked against the oracle.
pub fn verify_so_inv(m: usize, r_max: usize) -> Result<Report> {
    let mut report = Report::new();
    for r in 0..=r_max {
        report.extend(oracle::verify_thm_so_inv(m, r)?);
        report.extend(oracle::verify_fft(m, r)?);
        report.extend(oracle::verify_decomposition(m, r)?);
    }
    Ok(report)
}

fn r_max_for(m: usize) -> usize {
    (0..=SUITE_R_MAX)
        .take_while(|&r| (m as u128).pow(r as u32) <= oracle::ORACLE_GUARD as u128)
        .last()
        .unwrap_or(0)
}

pub fn run_suite(suite: Suite, m: usize) -> Result<Report> {
    if m < 2 {
        return Err(Error::InvalidM(m));
    }
    let r_max = r_max_for(m);
    Ok(match suite {
        Suite::Relations => verify_defining_relations(m)?,
        Suite::Reduction => {
            let mut rep = Report::new();
            for r in 2..=5 {
                rep.extend(verify_reduction_lemma(r)?);
            }
            rep
        }
        Suite::Sigma => verify_sigma_vanishing(m)?,
        Suite::Delta => delta_constraint_check(m)?,
        Suite::Dims => verify_dims(m, r_max)?,
        Suite::SoInv => verify_so_inv(m, r_max)?,
        Suite::All => {
            let mut rep = Report::new();
            for s in [
                Suite::Relations,
                Suite::Reduction,
                Suite::Sigma,
                Suite::Delta,
                Suite::Dims,
                Suite::SoInv,
            ] {
                if s == Suite::Sigma && m > 3 {
                    continue;
                }
                rep.extend(run_suite(s, m)?);
            }
            rep
        }
    })
}
