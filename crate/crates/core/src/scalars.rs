//! Exact rationals and univariate polynomials in the loop parameter δ.
//!
//! Every coefficient in the library lives here: Brauer morphisms carry
//! [`DeltaPoly`] coefficients (generic δ), enhanced morphisms carry plain
//! [`Rational`]s because δ has already been specialised to `m`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::parse(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::parse(s))?;
            if d.is_zero() {
                return Err(Error::parse(s));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(t.parse().map_err(|_| Error::parse(s))?),
    };
    Ok(parsed)
}

/// Dense polynomial in δ, ascending powers, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DeltaPoly {
    coeffs: Vec<Rational>,
}

impl DeltaPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn delta() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Constant value if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn evaluate(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by δ^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lc;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Monic gcd over Q. `gcd(0, 0)` is the zero polynomial.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x
    }

    /// δ(δ−1)⋯(δ−(k−1)); the empty product is 1.
    pub fn falling_factorial(k: usize) -> Self {
        (0..k as i64).fold(Self::one(), |acc, j| {
            acc * Self::from_coeffs(vec![rat(-j), Rational::one()])
        })
    }

    /// (δ−(m−1))(δ−(m−2))⋯(δ−1) − (m−1)!.
    pub fn f_m(m: usize) -> Self {
        assert!(m >= 2, "f_m is defined for m >= 2");
        let product = (1..m as i64).fold(Self::one(), |acc, j| {
            acc * Self::from_coeffs(vec![rat(-j), Rational::one()])
        });
        product - Self::constant(factorial(m - 1))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }
}

impl From<Rational> for DeltaPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for DeltaPoly {
    fn from(c: i64) -> Self {
        Self::constant(rat(c))
    }
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;

    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = rhs.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                }
            })
            .collect();
        DeltaPoly::from_coeffs(coeffs)
    }
}

impl Neg for &DeltaPoly {
    type Output = DeltaPoly;

    fn neg(self) -> DeltaPoly {
        DeltaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &DeltaPoly {
    type Output = DeltaPoly;

    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        self + &(-rhs)
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;

    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        if self.is_zero() || rhs.is_zero() {
            return DeltaPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        DeltaPoly::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DeltaPoly {
            type Output = DeltaPoly;
            fn $method(self, rhs: DeltaPoly) -> DeltaPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        -&self
    }
}

impl AddAssign<&DeltaPoly> for DeltaPoly {
    fn add_assign(&mut self, rhs: &DeltaPoly) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "δ")?,
                (1, false) => write!(f, "{mag}δ")?,
                (_, true) => write!(f, "δ^{k}")?,
                (_, false) => write!(f, "{mag}δ^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> DeltaPoly {
        DeltaPoly::from_ints(c)
    }

    #[test]
    fn products_and_identities() {
        assert_eq!(p(&[-1, 1]) * DeltaPoly::delta(), p(&[0, -1, 1]));
        assert_eq!(p(&[3, 0, 2]) + DeltaPoly::zero(), p(&[3, 0, 2]));
        // (δ−2)(δ+1) = δ²−δ−2, which is also falling_factorial(2) − 2
        let expanded = p(&[-2, 1]) * p(&[1, 1]);
        assert_eq!(expanded, p(&[-2, -1, 1]));
        assert_eq!(expanded, DeltaPoly::falling_factorial(2) - p(&[2]));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[-2, 1]).evaluate(&rat(2)), rat(0));
        assert_eq!(DeltaPoly::falling_factorial(3).evaluate(&rat(3)), rat(6));
        assert_eq!(p(&[-2, -1, 1]).evaluate(&rat(-1)), rat(0));
        assert_eq!(p(&[1, 1]).evaluate(&ratio(1, 2)), ratio(3, 2));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(DeltaPoly::falling_factorial(0), DeltaPoly::one());
        assert_eq!(DeltaPoly::falling_factorial(2), p(&[0, -1, 1]));
        for m in 2..=6 {
            assert_eq!(
                DeltaPoly::falling_factorial(m).evaluate(&rat(m as i64)),
                factorial(m)
            );
        }
    }

    #[test]
    fn f_m_values() {
        assert_eq!(DeltaPoly::f_m(2), p(&[-2, 1]));
        assert_eq!(DeltaPoly::f_m(3), p(&[0, -3, 1]));
        for m in 2..=6 {
            assert!(DeltaPoly::f_m(m).evaluate(&rat(m as i64)).is_zero());
        }
    }

    #[test]
    fn gcds() {
        assert_eq!(DeltaPoly::gcd(&p(&[-2, -1, 1]), &p(&[-2, 1])), p(&[-2, 1]));
        let q = p(&[4, 0, -2]);
        assert_eq!(DeltaPoly::gcd(&q, &q), q.monic());
        // δ³−3δ²+2δ−6 = (δ−3)(δ²+2) against δ²−3δ = δ(δ−3)
        let lhs = DeltaPoly::falling_factorial(3) - p(&[6]);
        assert_eq!(lhs, p(&[-6, 2, -3, 1]));
        assert_eq!(DeltaPoly::gcd(&lhs, &DeltaPoly::f_m(3)), p(&[-3, 1]));
        for m in 2..=6 {
            let a = DeltaPoly::falling_factorial(m) - DeltaPoly::constant(factorial(m));
            let g = DeltaPoly::gcd(&a, &DeltaPoly::f_m(m));
            assert_eq!(g, p(&[-(m as i64), 1]), "m = {m}");
        }
    }

    #[test]
    fn gcd_with_zero_is_monic_other() {
        assert_eq!(DeltaPoly::gcd(&p(&[2, 4]), &DeltaPoly::zero()), p(&[1, 2]).monic());
        assert_eq!(DeltaPoly::gcd(&DeltaPoly::zero(), &p(&[0, 3])), DeltaPoly::delta());
    }

    #[test]
    fn division_identity() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn display_and_strings() {
        assert_eq!(p(&[-2, -1, 1]).to_string(), "δ^2 - δ - 2");
        assert_eq!(DeltaPoly::zero().to_string(), "0");
        let q = DeltaPoly::from_coeffs(vec![ratio(-1, 2), rat(3)]);
        assert_eq!(q.to_strings(), vec!["-1/2".to_string(), "3".to_string()]);
        assert_eq!(DeltaPoly::from_strings(&q.to_strings()).unwrap(), q);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = DeltaPoly> {
        prop::collection::vec((-5i64..=5, 1i64..=3), 0..5).prop_map(|cs| {
            DeltaPoly::from_coeffs(cs.into_iter().map(|(n, d)| ratio(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_poly(), b in arb_poly(), x in -4i64..=4) {
            let x = rat(x);
            prop_assert_eq!((&a * &b).evaluate(&x), a.evaluate(&x) * b.evaluate(&x));
            prop_assert_eq!((&a + &b).evaluate(&x), a.evaluate(&x) + b.evaluate(&x));
        }
    }
}
