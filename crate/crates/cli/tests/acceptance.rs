//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use brauer::enhanced::{Rewriter, Strategy};
use brauer::homspace;
use brauer::io::{self, Morphism};
use brauer::oracle;
use brauer::report::Report;
use brauer::scalars::{factorial, rat, DeltaPoly};
use brauer::tensor::{eval_enhanced, eval_expr};
use brauer::verify;
use brauer::{expr, BrauerMorphism, EnhancedMorphism};
use rand::Rng;

type Outcome = Result<Report, String>;

fn merge(reports: impl IntoIterator<Item = brauer::Result<Report>>) -> Outcome {
    let mut all = Report::new();
    for r in reports {
        all.extend(r.map_err(|e| e.to_string())?);
    }
    Ok(all)
}

fn relations() -> Outcome {
    merge((2..=4).map(verify::verify_defining_relations))
}

fn reduction() -> Outcome {
    merge((2..=5).map(verify::verify_reduction_lemma))
}

fn delta_relation() -> Outcome {
    let mut rep = Report::new();
    for m in 2..=4 {
        let rw = Rewriter::new(m).map_err(|e| e.to_string())?;
        let e = expr::parse("D^*∘D").unwrap();
        for strategy in [Strategy::Innermost, Strategy::Outermost] {
            let v = rw.normalize(&e, strategy).map_err(|e| e.to_string())?;
            rep.check(format!("Δ*∘Δ = {m}! ({strategy:?})"), v.as_scalar() == Some(factorial(m)), v.to_string());
        }
    }
    for m in 2..=6 {
        let v = DeltaPoly::falling_factorial(m).evaluate(&rat(m as i64));
        rep.check(format!("falling factorial at δ={m} is {m}!"), v == factorial(m), v.to_string());
    }
    Ok(rep)
}

fn consistency() -> Outcome {
    let mut rep = Report::new();
    for m in 2..=6 {
        let c = verify::delta_constraint_check(m).map_err(|e| e.to_string())?;
        for check in c.checks().iter().filter(|c| !c.name.starts_with("Δ*")) {
            rep.check(check.name.clone(), check.passed, check.detail.clone());
        }
    }
    rep.extend(merge((2..=3).map(verify::verify_sigma_vanishing))?);
    Ok(rep)
}

fn so_invariants() -> Outcome {
    let mut rep = Report::new();
    for m in 2..=3 {
        for r in 0..=6 {
            rep.extend(oracle::verify_thm_so_inv(m, r).map_err(|e| e.to_string())?);
            rep.extend(oracle::verify_decomposition(m, r).map_err(|e| e.to_string())?);
        }
    }
    Ok(rep)
}

fn fft() -> Outcome {
    merge((2..=3).flat_map(|m| (0..=6).step_by(2).map(move |r| oracle::verify_fft(m, r))))
}

fn dimensions() -> Outcome {
    let mut rep = Report::new();
    for m in 2..=3 {
        let dims = homspace::dimension_report(m, 6).map_err(|e| e.to_string())?;
        for row in &dims.rows {
            rep.check(
                format!("m={m} {}→{}", row.s, row.t),
                row.agree(),
                format!("gram={} functor={} formula={}", row.gram, row.functor, row.formula),
            );
        }
        for (r, ok) in &dims.split_independent {
            rep.check(format!("m={m} r={r} split independence"), *ok, "");
        }
    }
    Ok(rep)
}

fn sft() -> Outcome {
    let mut reports = Vec::new();
    for m in 2..=3 {
        for r in 0..=6 {
            for s in 0..=r {
                reports.push(homspace::verify_sft(m, s, r - s));
            }
        }
        reports.push(homspace::verify_sft(m, m + 1, m + 1));
    }
    merge(reports)
}

fn soundness() -> Outcome {
    let mut rep = Report::new();
    let mut rng = common::rng(2024);
    let cases = 200;
    let (mut commute, mut agree, mut functorial, mut adjoint, mut rotation) = (0, 0, 0, 0, 0);
    for case in 0..cases {
        let m = 2 + case % 2;
        let e = common::random_expr(&mut rng, m, 6);
        let rw = Rewriter::new(m).unwrap();
        let n = rw.normalize(&e, Strategy::Innermost).map_err(|x| x.to_string())?;
        let o = rw.normalize(&e, Strategy::Outermost).map_err(|x| x.to_string())?;
        let fe = eval_expr(&e, m).unwrap();
        commute += (eval_enhanced(&n).unwrap() == fe && eval_enhanced(&o).unwrap() == fe) as usize;
        agree += (n == o) as usize;

        let (s, t) = common::random_arity(&mut rng, 3);
        let u = rng.gen_range(0..=3);
        let f = common::random_enhanced(&mut rng, m, s, t, 3);
        let g = common::random_enhanced(&mut rng, m, t, u, 3);
        let (ef, eg) = (eval_enhanced(&f).unwrap(), eval_enhanced(&g).unwrap());
        functorial += (eval_enhanced(&f.then(&g).unwrap()).unwrap() == ef.then(&eg).unwrap()
            && eval_enhanced(&f.tensor(&g).unwrap()).unwrap() == ef.tensor(&eg).unwrap()) as usize;

        let (x, y) = (common::random_tensor(&mut rng, m, s), common::random_tensor(&mut rng, m, t));
        let edual = eval_enhanced(&f.dual().unwrap()).unwrap();
        adjoint += (x.then(&ef).unwrap().bilinear_form(&y).unwrap()
            == x.bilinear_form(&y.then(&edual).unwrap()).unwrap()) as usize;

        let q = rng.gen_range(0..=s);
        let p = rng.gen_range(0..=t);
        rotation += (f.rotate_up(q).unwrap().rotate_down(q).unwrap() == f
            && f.rotate_down(p).unwrap().rotate_up(p).unwrap() == f) as usize;
    }
    for (name, ok) in [
        ("normalize–eval commutation", commute),
        ("both strategies give the same normal form", agree),
        ("functoriality", functorial),
        ("duality adjointness", adjoint),
        ("rotation round trips", rotation),
    ] {
        rep.check(name, ok == cases, format!("{ok}/{cases}"));
    }
    Ok(rep)
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .args(args)
        .env_remove("BRAUER_TERM_CAP")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("brauer-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cli() -> Outcome {
    let mut rep = Report::new();
    let golden: [(&[&str], i32, &str); 3] = [
        (&["dim-hom", "--m", "2", "--s", "1", "--t", "1", "--route", "all"], 0, "gram=2 functor=2 formula=2 agree=true\n"),
        (&["verify", "--suite", "relations", "--m", "3"], 0, ""),
        (&["eval", "--m", "2", "--expr", "A∘U"], 0, "2\n"),
    ];
    for (args, code, stdout) in golden {
        let (c, out) = binary(args);
        let out_ok = stdout.is_empty() || out == stdout;
        rep.check(format!("brauer {}", args.join(" ")), c == code && out_ok, format!("exit {c}, stdout {out:?}"));
    }
    let (_, a) = binary(&["dim-hom", "--m", "2", "--s", "1", "--t", "1", "--route", "all"]);
    let (_, b) = binary(&["dim-hom", "--m", "2", "--s", "1", "--t", "1", "--route", "all"]);
    rep.check("repeated runs are byte-identical", a == b, "");

    let delta = EnhancedMorphism::delta(2).unwrap();
    let fifteen = {
        let sigma = BrauerMorphism::antisymmetrizer(3).unwrap();
        let all = brauer::diagram::all_diagrams(3, 3);
        let extra = BrauerMorphism::from_terms(
            3,
            3,
            all.into_iter().enumerate().map(|(k, d)| (d, DeltaPoly::from(rat(k as i64 + 2)))),
        )
        .unwrap();
        sigma.add(&extra).unwrap()
    };
    rep.check("15-term morphism", fifteen.len() == 15, fifteen.len().to_string());
    for (name, f) in [
        ("Δ_2", Morphism::Enhanced(delta.clone())),
        ("15-term Brauer", Morphism::Brauer(fifteen.clone())),
        ("15-term enhanced", Morphism::Enhanced(EnhancedMorphism::from_brauer(&fifteen, 3))),
    ] {
        let path = scratch(&format!("{}.json", name.replace(' ', "_")));
        io::save(&f, &path).unwrap();
        let back = io::load(&path, None).map_err(|e| e.to_string())?;
        rep.check(format!("save/load round trip of {name}"), back == f, "");
    }
    let path = scratch("delta.json");
    io::save(&Morphism::Enhanced(delta), &path).unwrap();
    rep.check("load with the wrong m is refused", io::load(&path, Some(3)).is_err(), "");
    let p = path.to_str().unwrap();
    let again = scratch("again.json");
    let (c1, _) = binary(&["normalize", "--m", "2", "--in", p, "--out", again.to_str().unwrap()]);
    let same = std::fs::read(&path).ok() == std::fs::read(&again).ok();
    rep.check("CLI load/save round trip is byte-identical", c1 == 0 && same, "");
    let (c2, _) = binary(&["normalize", "--m", "3", "--in", p]);
    rep.check("CLI rejects a file for another m", c2 == 2, format!("exit {c2}"));
    Ok(rep)
}

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "defining relations in the engine and under F, m = 2..4", limit: Duration::from_secs(10), run: relations },
        Criterion { id: 2, title: "reduction lemma identities over generic δ, r = 2..5", limit: Duration::from_secs(30), run: reduction },
        Criterion { id: 3, title: "Δ*∘Δ = m! and the falling-factorial relation", limit: Duration::from_secs(5), run: delta_relation },
        Criterion { id: 4, title: "f_m(m) = 0, gcd = δ − m, Σ_{m+1} = 0 and Σ_m ≠ 0", limit: Duration::from_secs(60), run: consistency },
        Criterion { id: 5, title: "det-twisted invariants and the ± decomposition", limit: Duration::from_secs(60), run: so_invariants },
        Criterion { id: 6, title: "O(m)-invariants are spanned by pair partitions", limit: Duration::from_secs(60), run: fft },
        Criterion { id: 7, title: "dim Hom agrees across gram, functor and formula", limit: Duration::from_secs(300), run: dimensions },
        Criterion { id: 8, title: "Gram null space = functor kernel, Σ_{m+1} in the kernel", limit: Duration::from_secs(300), run: sft },
        Criterion { id: 9, title: "randomised soundness, 200 cases per property", limit: Duration::from_secs(120), run: soundness },
        Criterion { id: 10, title: "CLI golden outputs and save/load round trips", limit: Duration::from_secs(120), run: cli },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match &outcome {
            Ok(rep) if rep.passed() && elapsed <= c.limit => (true, format!("{} checks", rep.checks().len())),
            Ok(rep) if rep.passed() => (false, format!("too slow (limit {:?})", c.limit)),
            Ok(rep) => {
                let bad: Vec<String> = rep.failures().map(|f| format!("{} [{}]", f.name, f.detail)).collect();
                (false, format!("{} of {} checks failed: {}", bad.len(), rep.checks().len(), bad.join("; ")))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !ok as usize;
        println!(
            "criterion {:>2}: {} — {} ({:.2}s) {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
