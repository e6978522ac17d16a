//! Exact sparse univariate polynomials with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::{self, MpComplex};
use crate::ntt;

/// Products with fewer term pairs than this are always done by schoolbook.
const NTT_MIN_PAIRS: usize = 1 << 14;

/// A polynomial stored as `(exponent, coefficient)` pairs.
///
/// Exponents are strictly increasing and no stored coefficient is zero, so
/// the zero polynomial is the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: Vec<(u64, BigInt)>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * z^e`.
    pub fn monomial(exp: u64, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        if c.is_zero() {
            Self::zero()
        } else {
            SparsePoly { terms: vec![(exp, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, combines equal
    /// exponents, and drops zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut v: Vec<(u64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|t| t.0);
        Self::from_sorted(v)
    }

    /// Sum of `z^e` over strictly increasing exponents.
    pub fn from_unit_exponents(exps: &[u64]) -> Self {
        debug_assert!(exps.windows(2).all(|w| w[0] < w[1]));
        SparsePoly { terms: exps.iter().map(|&e| (e, BigInt::one())).collect() }
    }

    fn from_sorted(v: Vec<(u64, BigInt)>) -> Self {
        let mut out: Vec<(u64, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((e, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        SparsePoly { terms: out }
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(u64, BigInt)> {
        self.terms
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`is_zero`](Self::is_zero).
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Result<u64> {
        self.terms
            .first()
            .map(|t| t.0)
            .ok_or_else(|| Error::domain("valuation of the zero polynomial"))
    }

    pub fn coeff(&self, exp: u64) -> BigInt {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// True when every stored coefficient equals 1.
    pub fn has_unit_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_one())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }

    /// Substitutes `z -> z^k`.
    pub fn substitute_power(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("substitution power must be at least 1"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                e.checked_mul(k)
                    .map(|e| (e, c.clone()))
                    .ok_or_else(|| Error::overflow(format!("exponent {e} * {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparsePoly { terms })
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: u64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                e.checked_add(k)
                    .map(|e| (e, c.clone()))
                    .ok_or_else(|| Error::overflow(format!("exponent {e} + {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparsePoly { terms })
    }

    pub fn derivative(&self) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e - 1, c * BigInt::from(*e)))
                .collect(),
        }
    }

    /// Keeps the terms of exponent strictly below `order`.
    pub fn truncate(&self, order: u64) -> Self {
        let cut = self.terms.partition_point(|t| t.0 < order);
        SparsePoly { terms: self.terms[..cut].to_vec() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut prev: Option<u64> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc *= num_traits::pow::pow(x.clone(), (p - e) as usize);
            }
            acc += c;
            prev = Some(*e);
        }
        if let Some(p) = prev {
            acc *= num_traits::pow::pow(x.clone(), p as usize);
        }
        acc
    }

    /// Sum of coefficients, i.e. the value at 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|t| &t.1).sum()
    }

    /// Plain double-precision Horner evaluation.
    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        let mut prev: Option<u64> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc *= pow_c64(z, p - e);
            }
            acc += c.to_f64().unwrap_or(f64::NAN);
            prev = Some(*e);
        }
        if let Some(p) = prev {
            acc *= pow_c64(z, p);
        }
        acc
    }

    /// Evaluates at `z` using `precision`-bit arithmetic.
    ///
    /// For 0/1-coefficient polynomials with `|z| <= 1` the absolute error is
    /// at most `len() * 2^(1 - precision)`.
    pub fn eval(&self, z: Complex64, precision: usize) -> Result<MpComplex> {
        if precision < 53 {
            return Err(Error::domain(format!("precision {precision} is below 53 bits")));
        }
        Ok(self.eval_mp(&MpComplex::from_c64(z, precision)))
    }

    pub fn eval_mp(&self, z: &MpComplex) -> MpComplex {
        let prec = z.precision();
        let mut acc = MpComplex::zero(prec);
        let mut prev: Option<u64> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc = acc.mul(&z.powu(p - e));
            }
            acc = acc.add_real(&mp::from_bigint(c, prec));
            prev = Some(*e);
        }
        if let Some(p) = prev {
            if p > 0 {
                acc = acc.mul(&z.powu(p));
            }
        }
        acc
    }

    /// Product by the schoolbook method, independent of the transform path.
    pub fn mul_schoolbook(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.small_terms(), other.small_terms()) {
            let mut pairs: Vec<(u64, i128)> = Vec::with_capacity(a.len() * b.len());
            for &(ea, ca) in &a {
                for &(eb, cb) in &b {
                    pairs.push((ea + eb, ca as i128 * cb as i128));
                }
            }
            pairs.sort_unstable_by_key(|p| p.0);
            let mut out: Vec<(u64, BigInt)> = Vec::new();
            let mut i = 0;
            while i < pairs.len() {
                let e = pairs[i].0;
                let mut acc = BigInt::zero();
                let mut small: i128 = 0;
                while i < pairs.len() && pairs[i].0 == e {
                    match small.checked_add(pairs[i].1) {
                        Some(s) => small = s,
                        None => {
                            acc += small;
                            small = pairs[i].1;
                        }
                    }
                    i += 1;
                }
                acc += small;
                if !acc.is_zero() {
                    out.push((e, acc));
                }
            }
            return SparsePoly { terms: out };
        }
        let mut pairs: Vec<(u64, BigInt)> = Vec::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                pairs.push((ea + eb, ca * cb));
            }
        }
        pairs.sort_by_key(|p| p.0);
        Self::from_sorted(pairs)
    }

    /// Product through the dense number-theoretic transform, when the
    /// coefficient bound and output length allow it.
    pub fn mul_ntt(&self, other: &Self) -> Option<Self> {
        if self.is_zero() || other.is_zero() {
            return Some(Self::zero());
        }
        let a = self.small_terms()?;
        let b = other.small_terms()?;
        let ma = a.iter().map(|t| t.1.unsigned_abs() as u128).max()?;
        let mb = b.iter().map(|t| t.1.unsigned_abs() as u128).max()?;
        let bound = ma.checked_mul(mb)?.checked_mul(a.len().min(b.len()) as u128)?;
        ntt::multiply(&a, &b, bound).map(|terms| SparsePoly { terms })
    }

    fn small_terms(&self) -> Option<Vec<(u64, i64)>> {
        self.terms.iter().map(|(e, c)| c.to_i64().map(|c| (*e, c))).collect()
    }

    /// Renders with the given variable name, e.g. `1 + q + q^3`.
    pub fn to_string_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = match *e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if body.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{mag}*{body}"));
            }
        }
        s
    }

    /// Parses the text form produced by [`SparsePoly::to_string_with`].
    pub fn parse_with(text: &str, var: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut terms: Vec<(u64, BigInt)> = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let tok = &body[..end];
            rest = &body[end..];
            let bad = || Error::Parse(format!("bad term `{tok}` in `{text}`"));
            let (coeff, mono) = match tok.find(var) {
                None => (tok.parse::<BigInt>().map_err(|_| bad())?, None),
                Some(pos) => {
                    let c = match &tok[..pos] {
                        "" => BigInt::one(),
                        pre => pre.strip_suffix('*').ok_or_else(bad)?.parse::<BigInt>().map_err(|_| bad())?,
                    };
                    (c, Some(&tok[pos + var.len()..]))
                }
            };
            let exp = match mono {
                None => 0,
                Some("") => 1,
                Some(m) => m.strip_prefix('^').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?,
            };
            terms.push((exp, if neg { -coeff } else { coeff }));
        }
        Ok(Self::from_terms(terms))
    }
}

pub(crate) fn pow_c64(z: Complex64, mut k: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    acc
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("z"))
    }
}

fn merge(a: &SparsePoly, b: &SparsePoly, negate_b: bool) -> SparsePoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.terms, &b.terms);
    let sign = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, sign(&y[j].1)));
            j += 1;
        } else {
            let c = if negate_b { &x[i].1 - &y[j].1 } else { &x[i].1 + &y[j].1 };
            if !c.is_zero() {
                out.push((x[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    SparsePoly { terms: out }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        merge(self, rhs, false)
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        merge(self, rhs, true)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        if self.len().saturating_mul(rhs.len()) >= NTT_MIN_PAIRS {
            if let Some(p) = self.mul_ntt(rhs) {
                return p;
            }
        }
        self.mul_schoolbook(rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: &SparsePoly) -> SparsePoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

// JSON form: [[exponent, coefficient], ...]; coefficients that do not fit
// an i64 are written as decimal strings.
impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&(e, v))?,
                None => seq.serialize_element(&(e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = SparsePoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<SparsePoly, A::Error> {
                let mut terms: Vec<(u64, BigInt)> = Vec::new();
                while let Some((e, c)) = seq.next_element::<(u64, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Int(v) => BigInt::from(v),
                        CoeffRepr::Text(t) => t.parse().map_err(de::Error::custom)?,
                    };
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient stored"));
                    }
                    if terms.last().is_some_and(|l| l.0 >= e) {
                        return Err(de::Error::custom("exponents must be strictly increasing"));
                    }
                    terms.push((e, c));
                }
                Ok(SparsePoly { terms })
            }
        }
        d.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(exps: &[u64]) -> SparsePoly {
        SparsePoly::from_unit_exponents(exps)
    }

    #[test]
    fn ring_examples() {
        let one_plus_q = p(&[0, 1]);
        assert_eq!(&one_plus_q * &SparsePoly::one(), one_plus_q);
        let prod = &p(&[0, 1, 3]) * &p(&[0, 2, 6]);
        let expected = SparsePoly::from_terms([(0u64, 1), (1, 1), (2, 1), (3, 2), (5, 1), (6, 1), (7, 1), (9, 1)]);
        assert_eq!(prod, expected);
        let x = p(&[0, 4, 9]);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn substitution_and_derivative() {
        assert_eq!(p(&[0, 1]).substitute_power(2).unwrap(), p(&[0, 2]));
        assert_eq!(p(&[0, 1, 2]).substitute_power(4).unwrap(), p(&[0, 4, 8]));
        assert_eq!(p(&[0, 3]).substitute_power(1).unwrap(), p(&[0, 3]));
        assert!(p(&[0, 1]).substitute_power(0).is_err());
        assert!(matches!(p(&[0, u64::MAX / 2]).substitute_power(3), Err(Error::Overflow(_))));
        assert_eq!(p(&[0, 1, 3]).derivative(), SparsePoly::from_terms([(0u64, 1), (2, 3)]));
        assert!(SparsePoly::monomial(0, 7).derivative().is_zero());
        assert_eq!(p(&[0, 2, 4]).derivative(), SparsePoly::from_terms([(1u64, 2), (3, 4)]));
    }

    #[test]
    fn valuation_and_truncation() {
        assert_eq!(p(&[0, 2]).valuation().unwrap(), 0);
        assert_eq!(p(&[3, 7]).valuation().unwrap(), 3);
        assert!(SparsePoly::zero().valuation().is_err());
        assert_eq!(p(&[0, 2, 6]).truncate(4), p(&[0, 2]));
        assert!(p(&[0, 2, 6]).truncate(0).is_zero());
    }

    #[test]
    fn evaluation() {
        let a6 = p(&[0, 2]);
        let v = a6.eval(Complex64::new(0.0, 1.0), 128).unwrap().to_c64();
        assert!(v.norm() < 1e-30);
        let a7 = p(&[0, 1, 3]);
        assert_eq!(a7.eval(Complex64::new(-1.0, 0.0), 128).unwrap().to_c64(), Complex64::new(-1.0, 0.0));
        assert_eq!(a7.eval_int(&BigInt::from(-1)), BigInt::from(-1));
        assert_eq!(a7.eval_int(&BigInt::from(2)), BigInt::from(11));
        assert!(a7.eval(Complex64::new(1.0, 0.0), 40).is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = SparsePoly::from_terms([(0u64, 1), (1, -1), (3, 2), (10, -12)]);
        let s = x.to_string_with("q");
        assert_eq!(s, "1 - q + 2*q^3 - 12*q^10");
        assert_eq!(SparsePoly::parse_with(&s, "q").unwrap(), x);
        assert_eq!(SparsePoly::parse_with("1+z^2+z^4", "z").unwrap(), p(&[0, 2, 4]));
        assert_eq!(SparsePoly::zero().to_string(), "0");
    }

    #[test]
    fn json_form() {
        let x = SparsePoly::from_terms([(0u64, BigInt::from(1)), (5, "-99999999999999999999999".parse().unwrap())]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[[0,1],[5,"-99999999999999999999999"]]"#);
        assert_eq!(serde_json::from_str::<SparsePoly>(&s).unwrap(), x);
        assert!(serde_json::from_str::<SparsePoly>("[[2,1],[1,1]]").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((0u64..40, -5i64..=5), 0..8).prop_map(SparsePoly::from_terms)
    }

    fn arb_wide_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((0u64..3000, -3i64..=3), 100..300).prop_map(SparsePoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly(), k in 1u64..5) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(
                (&a * &b).substitute_power(k).unwrap(),
                &a.substitute_power(k).unwrap() * &b.substitute_power(k).unwrap()
            );
        }

        #[test]
        fn transform_product_matches_schoolbook(a in arb_wide_poly(), b in arb_wide_poly()) {
            prop_assert_eq!(a.mul_ntt(&b).unwrap(), a.mul_schoolbook(&b));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in -4i64..=4) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval_int(&x), a.eval_int(&x) * b.eval_int(&x));
        }
    }
}
