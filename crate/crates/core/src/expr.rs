//! Expression trees over the generators and a small text grammar for them.
//!
//! ```text
//! expr    := compose
//! compose := tensor (("∘" | ".") tensor)*
//! tensor  := postfix (("⊗" | "*") postfix)*
//! postfix := primary ("^{" k "}" | "^*")*
//! primary := "I" | "U" | "A" | "X" | "D" | "Δ" | "S{" r "}" | "Σ{" r "}"
//!          | "P{" images "}" | "(" expr ")"
//! ```
//!
//! `g∘f` applies `f` first. `P{2,3,1}` is the permutation diagram joining
//! bottom point 1 to top point 2, 2 to 3 and 3 to 1 (one-based).
//! `^*` is the horizontal reflection.

use std::fmt;

use crate::diagram::arity_label;
use crate::error::{Error, Result};
use crate::perm;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    I,
    U,
    A,
    X,
    /// The antisymmetric vertex Δ_m, `0 → m`.
    Delta,
    /// Σ_r.
    Sigma(usize),
    /// Zero-based images.
    Perm(Vec<usize>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Atom(Atom),
    /// `Compose(g, f)` is `g∘f`.
    Compose(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, usize),
    Dual(Box<Expr>),
}

impl Expr {
    pub fn atom(a: Atom) -> Self {
        Expr::Atom(a)
    }

    /// `self ∘ inner`.
    pub fn after(self, inner: Expr) -> Self {
        Expr::Compose(Box::new(self), Box::new(inner))
    }

    pub fn tensor(self, right: Expr) -> Self {
        Expr::Tensor(Box::new(self), Box::new(right))
    }

    pub fn power(self, k: usize) -> Self {
        Expr::Power(Box::new(self), k)
    }

    pub fn dual(self) -> Self {
        Expr::Dual(Box::new(self))
    }

    /// `I^{⊗r}` (the empty diagram when `r = 0`).
    pub fn identity(r: usize) -> Self {
        Expr::Atom(Atom::I).power(r)
    }

    /// `(source, target)` for a given `m`, or the offending pair of sub-expressions.
    pub fn arity(&self, m: usize) -> Result<(usize, usize)> {
        Ok(match self {
            Expr::Atom(a) => match a {
                Atom::I => (1, 1),
                Atom::U => (0, 2),
                Atom::A => (2, 0),
                Atom::X => (2, 2),
                Atom::Delta => (0, m),
                Atom::Sigma(r) => (*r, *r),
                Atom::Perm(p) => (p.len(), p.len()),
            },
            Expr::Compose(g, f) => {
                let (fs, ft) = f.arity(m)?;
                let (gs, gt) = g.arity(m)?;
                if ft != gs {
                    return Err(Error::arity(
                        format!("{f} ({})", arity_label(fs, ft)),
                        format!("{g} ({})", arity_label(gs, gt)),
                    ));
                }
                (fs, gt)
            }
            Expr::Tensor(a, b) => {
                let (a_s, a_t) = a.arity(m)?;
                let (b_s, b_t) = b.arity(m)?;
                (a_s + b_s, a_t + b_t)
            }
            Expr::Power(e, k) => {
                let (s, t) = e.arity(m)?;
                (s * k, t * k)
            }
            Expr::Dual(e) => {
                let (s, t) = e.arity(m)?;
                (t, s)
            }
        })
    }

    pub fn contains_delta(&self) -> bool {
        match self {
            Expr::Atom(a) => *a == Atom::Delta,
            Expr::Compose(a, b) | Expr::Tensor(a, b) => a.contains_delta() || b.contains_delta(),
            Expr::Power(e, k) => *k > 0 && e.contains_delta(),
            Expr::Dual(e) => e.contains_delta(),
        }
    }

    /// Number of atoms in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Atom(_) => 1,
            Expr::Compose(a, b) | Expr::Tensor(a, b) => a.size() + b.size(),
            Expr::Power(e, _) | Expr::Dual(e) => e.size(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::I => write!(f, "I"),
            Atom::U => write!(f, "U"),
            Atom::A => write!(f, "A"),
            Atom::X => write!(f, "X"),
            Atom::Delta => write!(f, "D"),
            Atom::Sigma(r) => write!(f, "S{{{r}}}"),
            Atom::Perm(p) => {
                let images: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, "P{{{}}}", images.join(","))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Compose(g, h) => write!(f, "({g}∘{h})"),
            Expr::Tensor(a, b) => write!(f, "({a}⊗{b})"),
            Expr::Power(e, k) => write!(f, "{e}^{{{k}}}"),
            Expr::Dual(e) => write!(f, "{e}^*"),
        }
    }
}

/// Parses an expression; arities are not checked (see [`parse_checked`]).
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { text, pos: 0 };
    let e = p.compose()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

/// Parses and checks arities for the given `m`.
pub fn parse_checked(text: &str, m: usize) -> Result<Expr> {
    let e = parse(text)?;
    e.arity(m)?;
    Ok(e)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, options: &[&str]) -> bool {
        self.skip_ws();
        for o in options {
            if self.rest().starts_with(o) {
                self.pos += o.len();
                return true;
            }
        }
        false
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn compose(&mut self) -> Result<Expr> {
        let mut e = self.tensor()?;
        while self.eat(&["∘", "."]) {
            let rhs = self.tensor()?;
            e = e.after(rhs);
        }
        Ok(e)
    }

    fn tensor(&mut self) -> Result<Expr> {
        let mut e = self.postfix()?;
        while self.eat(&["⊗", "*"]) {
            let rhs = self.postfix()?;
            e = e.tensor(rhs);
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.eat(&["^*"]) {
                e = e.dual();
            } else if self.eat(&["^{"]) {
                let k = self.number()?;
                self.expect("}")?;
                e = e.power(k);
            } else {
                return Ok(e);
            }
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(&[token]) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        let n = digits.parse().map_err(|_| self.error("number too large"))?;
        self.pos += digits.len();
        Ok(n)
    }

    fn primary(&mut self) -> Result<Expr> {
        self.skip_ws();
        let atom = if self.eat(&["("]) {
            let e = self.compose()?;
            self.expect(")")?;
            return Ok(e);
        } else if self.eat(&["I"]) {
            Atom::I
        } else if self.eat(&["U"]) {
            Atom::U
        } else if self.eat(&["A"]) {
            Atom::A
        } else if self.eat(&["X"]) {
            Atom::X
        } else if self.eat(&["D", "Δ"]) {
            Atom::Delta
        } else if self.eat(&["S", "Σ"]) {
            self.expect("{")?;
            let r = self.number()?;
            self.expect("}")?;
            Atom::Sigma(r)
        } else if self.eat(&["P"]) {
            self.expect("{")?;
            let start = self.pos;
            let images = self.images()?;
            self.expect("}")?;
            if !perm::is_permutation(&images) {
                return Err(Error::Syntax {
                    offset: start,
                    message: "not a permutation".into(),
                });
            }
            Atom::Perm(images)
        } else {
            return Err(self.error("expected a generator or '('"));
        };
        Ok(Expr::Atom(atom))
    }

    /// One-based images, comma separated or as a run of single digits.
    fn images(&mut self) -> Result<Vec<usize>> {
        self.skip_ws();
        let body: String = self.rest().chars().take_while(|&c| c != '}').collect();
        let items: Vec<String> = if body.contains(',') {
            body.split(',').map(|s| s.trim().to_string()).collect()
        } else {
            body.trim().chars().map(String::from).collect()
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            let v: usize = item.parse().map_err(|_| self.error("bad permutation image"))?;
            if v == 0 {
                return Err(self.error("permutation images are one-based"));
            }
            out.push(v - 1);
        }
        self.pos += body.len();
        Ok(out)
    }
}
