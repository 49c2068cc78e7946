//! JSON form of morphisms.
//!
//! ```text
//! {"source": i, "target": j, "terms": [{"coeff": ["c0", "c1", …], "pairs": [[a, b], …]}, …]}
//! ```
//!
//! `coeff` lists the δ-polynomial coefficients in ascending powers. Enhanced
//! morphisms add a top-level `"m"` and an optional `"delta_legs"` per term;
//! their coefficients are written as constant polynomials, and any polynomial
//! read back is specialised at δ = m.

use std::fs;
use std::path::Path;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::diagram::{BrauerDiagram, BrauerMorphism};
use crate::enhanced::{EnhancedDiagram, EnhancedMorphism};
use crate::error::{Error, Result};
use crate::scalars::{format_rational, rat, DeltaPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Morphism {
    Brauer(BrauerMorphism),
    Enhanced(EnhancedMorphism),
}

fn pairs_json(pairs: &[(usize, usize)]) -> Value {
    Value::Array(pairs.iter().map(|&(a, b)| json!([a, b])).collect())
}

pub fn brauer_to_json(f: &BrauerMorphism) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(d, c)| json!({"coeff": c.to_strings(), "pairs": pairs_json(d.pairs())}))
        .collect();
    json!({"source": f.source(), "target": f.target(), "terms": terms})
}

pub fn enhanced_to_json(f: &EnhancedMorphism) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(d, c)| {
            let mut t = Map::new();
            t.insert("coeff".into(), json!([format_rational(c)]));
            t.insert("pairs".into(), pairs_json(d.pairs()));
            if let Some(legs) = d.delta_legs() {
                t.insert("delta_legs".into(), json!(legs));
            }
            Value::Object(t)
        })
        .collect();
    json!({"m": f.m(), "source": f.source(), "target": f.target(), "terms": terms})
}

pub fn to_json(f: &Morphism) -> Value {
    match f {
        Morphism::Brauer(b) => brauer_to_json(b),
        Morphism::Enhanced(e) => enhanced_to_json(e),
    }
}

struct Reader<'a> {
    root: &'a Value,
}

fn object<'v>(v: &'v Value, at: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(at, "expected an object"))
}

fn array<'v>(v: &'v Value, at: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(at, "expected an array"))
}

fn natural(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::schema(at, "expected a non-negative integer"))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, at: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(at, format!("missing field {key:?}")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::schema(format!("{at}/{k}"), "unknown field")),
        None => Ok(()),
    }
}

struct RawTerm {
    coeff: DeltaPoly,
    pairs: Vec<(usize, usize)>,
    legs: Option<Vec<usize>>,
}

impl Reader<'_> {
    fn header(&self, enhanced: bool) -> Result<(usize, usize, Vec<RawTerm>)> {
        let obj = object(self.root, "")?;
        let allowed: &[&str] = if enhanced {
            &["m", "source", "target", "terms"]
        } else {
            &["source", "target", "terms"]
        };
        check_keys(obj, allowed, "")?;
        let source = natural(field(obj, "source", "")?, "/source")?;
        let target = natural(field(obj, "target", "")?, "/target")?;
        let terms = array(field(obj, "terms", "")?, "/terms")?;
        let mut out = Vec::with_capacity(terms.len());
        for (k, t) in terms.iter().enumerate() {
            let at = format!("/terms/{k}");
            let t = object(t, &at)?;
            check_keys(t, if enhanced { &["coeff", "pairs", "delta_legs"] } else { &["coeff", "pairs"] }, &at)?;
            let coeff = poly(field(t, "coeff", &at)?, &format!("{at}/coeff"))?;
            let pairs = array(field(t, "pairs", &at)?, &format!("{at}/pairs"))?
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let pat = format!("{at}/pairs/{j}");
                    match array(p, &pat)?.as_slice() {
                        [a, b] => Ok((natural(a, &format!("{pat}/0"))?, natural(b, &format!("{pat}/1"))?)),
                        _ => Err(Error::schema(pat, "a pair has exactly two points")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let legs = match t.get("delta_legs") {
                None => None,
                Some(v) => {
                    let lat = format!("{at}/delta_legs");
                    Some(
                        array(v, &lat)?
                            .iter()
                            .enumerate()
                            .map(|(j, x)| natural(x, &format!("{lat}/{j}")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
            };
            out.push(RawTerm { coeff, pairs, legs });
        }
        Ok((source, target, out))
    }
}

fn poly(v: &Value, at: &str) -> Result<DeltaPoly> {
    let items = array(v, at)?;
    let strings = items
        .iter()
        .enumerate()
        .map(|(k, x)| {
            x.as_str()
                .ok_or_else(|| Error::schema(format!("{at}/{k}"), "expected a rational string"))
        })
        .collect::<Result<Vec<_>>>()?;
    DeltaPoly::from_strings(&strings).map_err(|e| Error::schema(at, e.to_string()))
}

fn located(k: usize, e: Error) -> Error {
    match e {
        Error::Schema { .. } => e,
        other => Error::schema(format!("/terms/{k}"), other.to_string()),
    }
}

pub fn brauer_from_json(v: &Value) -> Result<BrauerMorphism> {
    let (source, target, terms) = Reader { root: v }.header(false)?;
    let mut out = Vec::new();
    for (k, t) in terms.into_iter().enumerate() {
        let d = BrauerDiagram::new(source, target, t.pairs).map_err(|e| located(k, e))?;
        out.push((d, t.coeff));
    }
    BrauerMorphism::from_terms(source, target, out)
}

/// Reads an enhanced morphism; `expected_m` rejects files for another `m`.
pub fn enhanced_from_json(v: &Value, expected_m: Option<usize>) -> Result<EnhancedMorphism> {
    let obj = object(v, "")?;
    let m = natural(field(obj, "m", "")?, "/m")?;
    if let Some(want) = expected_m {
        if want != m {
            return Err(Error::schema("/m", format!("file has m={m}, expected m={want}")));
        }
    }
    if m < 2 {
        return Err(Error::schema("/m", Error::InvalidM(m).to_string()));
    }
    let (source, target, terms) = Reader { root: v }.header(true)?;
    let at = rat(m as i64);
    let mut out = Vec::new();
    for (k, t) in terms.into_iter().enumerate() {
        if t.legs.as_ref().is_some_and(|l| l.len() != m) {
            return Err(Error::schema(format!("/terms/{k}/delta_legs"), format!("a vertex has {m} legs")));
        }
        let d = EnhancedDiagram::new(source, target, t.legs, t.pairs).map_err(|e| located(k, e))?;
        let c: Rational = t.coeff.evaluate(&at);
        if !c.is_zero() {
            out.push((d, c));
        }
    }
    EnhancedMorphism::from_terms(m, source, target, out)
}

/// Enhanced when the document carries `"m"`, Brauer otherwise.
pub fn from_json(v: &Value, expected_m: Option<usize>) -> Result<Morphism> {
    let obj = object(v, "")?;
    if obj.contains_key("m") {
        Ok(Morphism::Enhanced(enhanced_from_json(v, expected_m)?))
    } else {
        Ok(Morphism::Brauer(brauer_from_json(v)?))
    }
}

pub fn to_string(f: &Morphism) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(f)).expect("json values serialise");
    s.push('\n');
    s
}

pub fn from_str(text: &str, expected_m: Option<usize>) -> Result<Morphism> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))?;
    from_json(&v, expected_m)
}

pub fn save(f: &Morphism, path: &Path) -> Result<()> {
    fs::write(path, to_string(f)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path, expected_m: Option<usize>) -> Result<Morphism> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    from_str(&text, expected_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::all_diagrams;
    use crate::scalars::ratio;
    use crate::enhanced::{Rewriter, Strategy};
    use crate::expr::parse;

    /// Σ_3 plus a distinct multiple of every 3 → 3 diagram: 15 terms.
    fn fifteen_terms() -> BrauerMorphism {
        let extra = BrauerMorphism::from_terms(
            3,
            3,
            all_diagrams(3, 3)
                .into_iter()
                .enumerate()
                .map(|(k, d)| (d, DeltaPoly::from_coeffs(vec![ratio(k as i64 + 1, 7), rat(k as i64 % 3)]))),
        )
        .unwrap();
        BrauerMorphism::antisymmetrizer(3).unwrap().add(&extra).unwrap()
    }

    #[test]
    fn brauer_round_trip() {
        let f = fifteen_terms();
        assert_eq!(f.len(), 15);
        let g = from_str(&to_string(&Morphism::Brauer(f.clone())), None).unwrap();
        assert_eq!(g, Morphism::Brauer(f));
    }

    #[test]
    fn enhanced_round_trip() {
        let rw = Rewriter::new(3).unwrap();
        let f = EnhancedMorphism::from_brauer(&fifteen_terms(), 3);
        let g = rw.normalize(&parse("D⊗D^*").unwrap(), Strategy::Innermost).unwrap();
        for h in [f, g] {
            let text = to_string(&Morphism::Enhanced(h.clone()));
            assert_eq!(from_str(&text, Some(3)).unwrap(), Morphism::Enhanced(h));
        }
    }

    #[test]
    fn delta_round_trip_and_schema() {
        let d = EnhancedMorphism::delta(2).unwrap();
        let v = enhanced_to_json(&d);
        assert_eq!(
            v,
            json!({"m": 2, "source": 0, "target": 2, "terms": [{"coeff": ["1"], "pairs": [], "delta_legs": [0, 1]}]})
        );
        assert_eq!(enhanced_from_json(&v, Some(2)).unwrap(), d);
        let e = enhanced_from_json(&v, Some(3)).unwrap_err();
        assert!(matches!(e, Error::Schema { ref pointer, .. } if pointer == "/m"));
    }

    #[test]
    fn schema_errors_are_located() {
        let bad = json!({"source": 1, "target": 1, "terms": [{"coeff": ["1"], "pairs": [[0, 1]]}, {"coeff": [3], "pairs": [[0, 1]]}]});
        let e = brauer_from_json(&bad).unwrap_err();
        assert_eq!(e, Error::schema("/terms/1/coeff/0", "expected a rational string"));
        let bad = json!({"source": 1, "target": 1, "terms": [{"coeff": ["1"], "pairs": [[0, 0]]}]});
        assert!(matches!(brauer_from_json(&bad).unwrap_err(), Error::Schema { pointer, .. } if pointer == "/terms/0"));
        let bad = json!({"source": 1, "target": 1, "terms": [{"coeff": ["1"], "pairs": [[0, 1, 2]]}]});
        assert!(matches!(brauer_from_json(&bad).unwrap_err(), Error::Schema { pointer, .. } if pointer == "/terms/0/pairs/0"));
        let bad = json!({"source": 1, "target": 1, "extra": 0, "terms": []});
        assert!(matches!(brauer_from_json(&bad).unwrap_err(), Error::Schema { pointer, .. } if pointer == "/extra"));
        assert!(from_str("{", None).is_err());
    }
}
