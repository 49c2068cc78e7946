//! Argument handling for the `brauer` binary, kept in a library so tests can
//! drive it without spawning processes.

use std::io::Write;
use std::path::{Path, PathBuf};

use brauer::enhanced::{Rewriter, Strategy, DEFAULT_TERM_BOUND};
use brauer::homspace::{self, Route};
use brauer::io::{self, Morphism};
use brauer::verify::{self, Suite};
use brauer::{expr, oracle, render, tensor, EnhancedMorphism, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const TERM_CAP_VAR: &str = "BRAUER_TERM_CAP";

#[derive(Parser, Debug)]
#[command(name = "brauer", version, about = "Exact Brauer-diagram calculus with an antisymmetric vertex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// g∘f of two saved morphisms (the first --in is applied first).
    Compose(Pair),
    /// f⊗g of two saved morphisms.
    Tensor(Pair),
    /// Canonical form of an expression.
    Normalize(Source),
    /// Tensor image; a scalar for closed diagrams.
    Eval(Source),
    /// Hom-space dimension.
    DimHom(DimHom),
    /// Invariant-space dimensions from the brute-force oracle.
    Oracle(Degree),
    /// Run a verification suite; exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// SVG picture of a morphism.
    Render(Source),
    /// CSV of d(r) for r = 0..=R.
    DTable(Degree),
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long = "in", num_args = 1, required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Args, Debug)]
struct Source {
    #[arg(long)]
    m: usize,
    #[arg(long, conflicts_with = "input")]
    expr: Option<String>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Gram,
    Functor,
    Formula,
    All,
}

#[derive(Args, Debug)]
struct DimHom {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value = "all")]
    route: RouteArg,
}

#[derive(Args, Debug)]
struct Degree {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Relations,
    Reduction,
    Sigma,
    Delta,
    Dims,
    SoInv,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long)]
    m: usize,
}

/// Failure of a run, carrying its exit status.
enum Failure {
    Usage(String),
    Check,
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TermBound { .. } | Error::CapExceeded { .. } | Error::TensorGuard { .. } => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn term_bound(flag: Option<usize>, env: Option<&str>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match env {
        None => Ok(DEFAULT_TERM_BOUND),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{TERM_CAP_VAR} must be a positive integer, got {v:?}"))),
    }
}

fn write_out(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            Ok(())
        }
    }
}

fn write_morphism(out: &mut dyn Write, path: Option<&Path>, f: &Morphism) -> Outcome {
    match path {
        Some(_) => write_out(out, path, &io::to_string(f)),
        None => {
            let text = match f {
                Morphism::Brauer(b) => b.to_string(),
                Morphism::Enhanced(e) => e.to_string(),
            };
            write_out(out, None, &text)
        }
    }
}

struct Context {
    env_cap: Option<String>,
}

impl Context {
    fn rewriter(&self, m: usize, flag: Option<usize>) -> Result<Rewriter, Failure> {
        Ok(Rewriter::new(m)?.with_term_bound(term_bound(flag, self.env_cap.as_deref())?))
    }

    /// The enhanced morphism named by `--expr` or `--in`.
    fn enhanced(&self, src: &Source) -> Result<EnhancedMorphism, Failure> {
        let rw = self.rewriter(src.m, src.max_terms)?;
        match (&src.expr, &src.input) {
            (Some(text), _) => Ok(rw.normalize(&expr::parse_checked(text, src.m)?, Strategy::Innermost)?),
            (None, Some(path)) => match io::load(path, Some(src.m))? {
                Morphism::Enhanced(e) => Ok(rw.canonicalize(&e)?),
                Morphism::Brauer(b) => Ok(rw.canonicalize(&EnhancedMorphism::from_brauer(&b, src.m))?),
            },
            (None, None) => Err(Failure::Usage("one of --expr or --in is required".into())),
        }
    }

    fn pair(&self, p: &Pair, tensor: bool, out: &mut dyn Write) -> Outcome {
        if p.inputs.len() != 2 {
            return Err(Failure::Usage("exactly two --in files are required".into()));
        }
        let f = io::load(&p.inputs[0], None)?;
        let g = io::load(&p.inputs[1], None)?;
        let result = match (f, g) {
            (Morphism::Brauer(f), Morphism::Brauer(g)) => {
                Morphism::Brauer(if tensor { f.tensor(&g) } else { f.then(&g)? })
            }
            (Morphism::Enhanced(f), Morphism::Enhanced(g)) => {
                if f.m() != g.m() {
                    return Err(Error::MismatchedM(f.m(), g.m()).into());
                }
                let rw = self.rewriter(f.m(), p.max_terms)?;
                let raw = if tensor { rw.tensor(&f, &g)? } else { rw.compose(&f, &g)? };
                Morphism::Enhanced(rw.canonicalize(&raw)?)
            }
            _ => {
                return Err(Failure::Usage(
                    "cannot mix a Brauer morphism with an enhanced one; add \"m\" to the Brauer file".into(),
                ));
            }
        };
        write_morphism(out, p.out.as_deref(), &result)
    }

    fn dispatch(&self, cmd: Command, out: &mut dyn Write) -> Outcome {
        match cmd {
            Command::Compose(p) => self.pair(&p, false, out),
            Command::Tensor(p) => self.pair(&p, true, out),
            Command::Normalize(src) => {
                let f = self.enhanced(&src)?;
                write_morphism(out, src.out.as_deref(), &Morphism::Enhanced(f))
            }
            Command::Eval(src) => {
                let t = match &src.expr {
                    Some(text) => {
                        let e = expr::parse_checked(text, src.m)?;
                        tensor::eval_expr(&e, src.m)?
                    }
                    None => tensor::eval_enhanced(&self.enhanced(&src)?)?,
                };
                let text = match t.as_scalar() {
                    Some(c) => brauer::scalars::format_rational(c),
                    None => t.to_json_string(),
                };
                write_out(out, src.out.as_deref(), &text)
            }
            Command::DimHom(a) => {
                let routes: &[(Route, &str)] = &[(Route::Gram, "gram"), (Route::Functor, "functor"), (Route::Formula, "formula")];
                let chosen: Vec<(Route, &str)> = match a.route {
                    RouteArg::Gram => vec![routes[0]],
                    RouteArg::Functor => vec![routes[1]],
                    RouteArg::Formula => vec![routes[2]],
                    RouteArg::All => routes.to_vec(),
                };
                let mut parts = Vec::new();
                let mut values = Vec::new();
                for (route, name) in chosen {
                    let v = homspace::dim_hom(a.m, a.s, a.t, route)?;
                    parts.push(format!("{name}={v}"));
                    values.push(v);
                }
                if values.len() > 1 {
                    parts.push(format!("agree={}", values.windows(2).all(|w| w[0] == w[1])));
                }
                write_out(out, None, &parts.join(" "))
            }
            Command::Oracle(d) => {
                let space = oracle::invariant_space(d.m, d.r)?;
                let text = format!(
                    "m={} r={} so={} o={} det={}",
                    d.m,
                    d.r,
                    space.dim(),
                    space.dim_plus,
                    space.dim_minus
                );
                write_out(out, None, &text)
            }
            Command::Verify(v) => {
                let suite = match v.suite {
                    SuiteArg::Relations => Suite::Relations,
                    SuiteArg::Reduction => Suite::Reduction,
                    SuiteArg::Sigma => Suite::Sigma,
                    SuiteArg::Delta => Suite::Delta,
                    SuiteArg::Dims => Suite::Dims,
                    SuiteArg::SoInv => Suite::SoInv,
                    SuiteArg::All => Suite::All,
                };
                let report = verify::run_suite(suite, v.m)?;
                write_out(out, None, &report.to_string())?;
                if report.passed() {
                    Ok(())
                } else {
                    Err(Failure::Check)
                }
            }
            Command::Render(src) => {
                let svg = render::render_svg(&self.enhanced(&src)?)?;
                write_out(out, src.out.as_deref(), &svg)
            }
            Command::DTable(d) => {
                let table = oracle::d_table(d.m, d.r)?;
                write_out(out, None, &oracle::d_table_csv(&table))
            }
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status: 0 success, 1 failed checks or refused computation,
/// 2 usage or input errors.
pub fn run<I, S>(args: I, env_cap: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let ctx = Context { env_cap };
    match ctx.dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        call_env(args, None)
    }

    fn call_env(args: &[&str], env: Option<&str>) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["brauer"];
        argv.extend_from_slice(args);
        let code = run(argv, env.map(String::from), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn golden_outputs() {
        assert_eq!(
            call(&["dim-hom", "--m", "2", "--s", "1", "--t", "1", "--route", "all"]),
            (0, "gram=2 functor=2 formula=2 agree=true\n".into(), String::new())
        );
        assert_eq!(call(&["eval", "--m", "2", "--expr", "A∘U"]), (0, "2\n".into(), String::new()));
        assert_eq!(call(&["eval", "--m", "2", "--expr", "A.U"]).1, "2\n");
        assert_eq!(call(&["verify", "--suite", "relations", "--m", "3"]).0, 0);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["eval", "--m", "2"]).0, 2);
        let (code, _, err) = call(&["eval", "--m", "2", "--expr", "(I⊗A⊗I)∘? "]);
        assert_eq!(code, 2);
        assert!(err.contains("byte 14"), "{err}");
        assert_eq!(call(&["eval", "--m", "2", "--expr", "D.D"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn term_cap_precedence() {
        let args = ["normalize", "--m", "3", "--expr", "S{4}∘S{4}"];
        assert_eq!(call_env(&args, Some("10")).0, 1);
        let mut with_flag = args.to_vec();
        with_flag.extend(["--max-terms", "100000"]);
        assert_eq!(call_env(&with_flag, Some("10")).0, 0);
        assert_eq!(call_env(&args, Some("lots")).0, 2);
    }

    #[test]
    fn tables() {
        assert_eq!(call(&["d-table", "--m", "2", "--r", "4"]).1, "r,d\n0,1\n1,0\n2,1\n3,0\n4,3\n");
        assert_eq!(call(&["oracle", "--m", "3", "--r", "3"]).1, "m=3 r=3 so=1 o=0 det=1\n");
    }
}
