//! Binary sequences {b_k}, the (s_m, t_m) recursion attached to them, and the
//! truncated limit series f_{b_k}.
//!
//! For a sequence b and m >= -1,
//!
//! ```text
//! s_{-1} = 1, t_{-1} = 0
//! s_k = (1 - b_k) s_{k-1} + z^(2^k) [ b_k (s_{k-1} - t_{k-1}) + t_{k-1} ]
//! t_k = b_k s_{k-1} + t_{k-1}
//! ```
//!
//! and a(2^(m+1) n + sum_{j<=m} 2^j b_j ; z) = s_m a(n; z^(2^(m+1))) + t_m a(n+1; z^(2^(m+1))).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::stern::stern_poly;

/// An eventually periodic 0/1 sequence: `preperiod` followed by `period`
/// repeated forever. An empty period means zeros from then on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitSpec {
    preperiod: Vec<bool>,
    period: Vec<bool>,
}

impl BitSpec {
    pub fn new(preperiod: Vec<bool>, period: Vec<bool>) -> Self {
        BitSpec { preperiod, period }
    }

    /// A finite sequence, zero-extended.
    pub fn finite(bits: &[u8]) -> Self {
        BitSpec::new(bits.iter().map(|&b| b != 0).collect(), Vec::new())
    }

    pub fn periodic(preperiod: &[u8], period: &[u8]) -> Self {
        BitSpec::new(
            preperiod.iter().map(|&b| b != 0).collect(),
            period.iter().map(|&b| b != 0).collect(),
        )
    }

    /// {1,0,1,0,...}, whose limit series is F.
    pub fn beta() -> Self {
        Self::periodic(&[], &[1, 0])
    }

    /// {1,1,0,1,0,...}, whose limit series is G.
    pub fn gamma() -> Self {
        Self::periodic(&[1], &[1, 0])
    }

    /// {1,1,1,...}.
    pub fn delta() -> Self {
        Self::periodic(&[], &[1])
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.preperiod
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    /// b_k.
    pub fn bit_at(&self, k: u64) -> bool {
        let pre = self.preperiod.len() as u64;
        if k < pre {
            return self.preperiod[k as usize];
        }
        if self.period.is_empty() {
            return false;
        }
        self.period[((k - pre) % self.period.len() as u64) as usize]
    }

    /// Index of the first 1 among b_0..=b_m.
    pub fn first_one_upto(&self, m: i64) -> Option<u64> {
        (0..=m.max(-1)).map(|k| k as u64).find(|&k| self.bit_at(k))
    }

    /// Every bit b_0..=b_m as a vector.
    pub fn prefix(&self, m: i64) -> Vec<bool> {
        (0..=m).map(|k| self.bit_at(k as u64)).collect()
    }
}

impl fmt::Display for BitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "pre={};per={}", bits(&self.preperiod), bits(&self.period))
    }
}

impl FromStr for BitSpec {
    type Err = Error;

    /// Accepts `pre=0100100;per=`, `per=10`, `pre=1;per=10`, or a bare bit
    /// string such as `0100100` (read as a preperiod). Bits are listed
    /// b_0 b_1 b_2 ...
    fn from_str(s: &str) -> Result<Self> {
        let parse_bits = |t: &str| -> Result<Vec<bool>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Parse(format!("`{c}` is not a bit in `{s}`"))),
                })
                .collect()
        };
        let s_trim = s.trim();
        if !s_trim.contains('=') {
            return Ok(BitSpec::new(parse_bits(s_trim)?, Vec::new()));
        }
        let mut pre: Option<Vec<bool>> = None;
        let mut per: Option<Vec<bool>> = None;
        for part in s_trim.split(';').filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in `{part}`")))?;
            let slot = match key.trim() {
                "pre" => &mut pre,
                "per" => &mut per,
                other => return Err(Error::Parse(format!("unknown key `{other}` in `{s}`"))),
            };
            if slot.is_some() {
                return Err(Error::Parse(format!("duplicate key `{key}` in `{s}`")));
            }
            *slot = Some(parse_bits(val.trim())?);
        }
        Ok(BitSpec::new(pre.unwrap_or_default(), per.unwrap_or_default()))
    }
}

/// 2^(m+1) n + sum_{j=0}^{m} 2^j b_j, with n itself at m = -1.
pub fn subseq_index(m: i64, n: u64, spec: &BitSpec) -> Result<u64> {
    if m < -1 {
        return Err(Error::domain(format!("m = {m} is below -1")));
    }
    let shift = (m + 1) as u32;
    let overflow = || Error::overflow(format!("subsequence index for m = {m}, n = {n}"));
    let head = if shift >= 64 {
        if n == 0 { Some(0) } else { None }
    } else {
        n.checked_mul(1u64 << shift)
    }
    .ok_or_else(overflow)?;
    let tail: u64 = (0..=m).filter(|&j| spec.bit_at(j as u64)).map(|j| 1u64 << j).sum();
    head.checked_add(tail).ok_or_else(overflow)
}

/// The pair (s_m, t_m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STPair {
    pub s: SparsePoly,
    pub t: SparsePoly,
    pub m: i64,
}

impl STPair {
    pub fn initial() -> Self {
        STPair { s: SparsePoly::one(), t: SparsePoly::zero(), m: -1 }
    }

    /// s_m + t_m.
    pub fn sum(&self) -> SparsePoly {
        &self.s + &self.t
    }

    /// Advances from m to m + 1 using bit `b`.
    pub fn step(&self, b: bool) -> Result<Self> {
        let k = self.m + 1;
        if k >= 63 {
            return Err(Error::overflow(format!("z^(2^{k}) in the s/t recursion")));
        }
        let pw = 1u64 << k;
        let (s, t) = if b {
            (self.s.shift(pw)?, &self.s + &self.t)
        } else {
            (&self.s + &self.t.shift(pw)?, self.t.clone())
        };
        Ok(STPair { s, t, m: k })
    }
}

/// Iterator over (s_k, t_k) for k = -1, 0, 1, ...; yields an overflow error
/// once the exponents no longer fit.
pub struct STPairs<'a> {
    spec: &'a BitSpec,
    cur: Option<Result<STPair>>,
}

impl<'a> STPairs<'a> {
    pub fn new(spec: &'a BitSpec) -> Self {
        STPairs { spec, cur: Some(Ok(STPair::initial())) }
    }
}

impl Iterator for STPairs<'_> {
    type Item = Result<STPair>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.cur.take()? {
            Ok(pair) => {
                self.cur = Some(pair.step(self.spec.bit_at((pair.m + 1) as u64)));
                Some(Ok(pair))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

/// (s_m, t_m) for `spec`.
pub fn st_pair(spec: &BitSpec, m: i64) -> Result<STPair> {
    if m < -1 {
        return Err(Error::domain(format!("m = {m} is below -1")));
    }
    let mut pair = STPair::initial();
    for k in 0..=m {
        pair = pair.step(spec.bit_at(k as u64))?;
    }
    Ok(pair)
}

/// Both sides of the (s_m, t_m) decomposition of a(subseq_index(m, n, spec); z).
///
/// The left side is built directly by [`stern_poly`]; the right side is
/// s_m a(n; z^(2^(m+1))) + t_m a(n+1; z^(2^(m+1))).
pub fn decompose(m: i64, n: u64, spec: &BitSpec) -> Result<(SparsePoly, SparsePoly)> {
    let index = subseq_index(m, n, spec)?;
    let lhs = stern_poly(index);
    let pair = st_pair(spec, m)?;
    let k = 1u64 << (m + 1);
    let n1 = n.checked_add(1).ok_or_else(|| Error::overflow("n + 1"))?;
    let rhs = &(&pair.s * &stern_poly(n).substitute_power(k)?) + &(&pair.t * &stern_poly(n1).substitute_power(k)?);
    Ok((lhs, rhs))
}

/// A_{m,n} = s_m [a(n; z^(2^(m+1))) - a(n+1; z^(2^(m+1)))].
pub fn remainder_a(m: i64, n: u64, spec: &BitSpec) -> Result<SparsePoly> {
    if n == 0 {
        return Err(Error::domain("A_{m,n} needs n >= 1"));
    }
    subseq_index(m, n, spec)?;
    let pair = st_pair(spec, m)?;
    let k = 1u64 << (m + 1);
    let n1 = n.checked_add(1).ok_or_else(|| Error::overflow("n + 1"))?;
    let diff = &stern_poly(n).substitute_power(k)? - &stern_poly(n1).substitute_power(k)?;
    Ok(&pair.s * &diff)
}

/// Lower bound 2^(m+1) + sum_{j<=m} 2^j b_j on the valuation of A_{m,n}, n > 1.
pub fn remainder_valuation_bound(m: i64, spec: &BitSpec) -> Result<u64> {
    subseq_index(m, 1, spec)
}

/// Smallest m >= -1 with 2^(m+1) >= order; from there on the head of
/// s_m + t_m below `order` never changes.
pub fn stabilization_index(order: u64) -> i64 {
    if order <= 1 {
        return -1;
    }
    // ceil(log2(order)) - 1
    (64 - (order - 1).leading_zeros()) as i64 - 1
}

/// The power series f_b = lim (s_m + t_m), truncated below `order`.
pub fn limit_series(spec: &BitSpec, order: u64) -> Result<SparsePoly> {
    limit_series_at(spec, order, stabilization_index(order))
}

/// Same as [`limit_series`] but advancing to a caller-chosen `m`; the result
/// is identical for every `m` at or past the stabilization index.
pub fn limit_series_at(spec: &BitSpec, order: u64, m: i64) -> Result<SparsePoly> {
    let needed = stabilization_index(order);
    if m < needed {
        return Err(Error::domain(format!(
            "m = {m} has not stabilized the series below order {order} (needs m >= {needed})"
        )));
    }
    Ok(st_pair(spec, m)?.sum().truncate(order))
}

/// deg(s_m + t_m) = 2^m + sum_{j=k0+1}^{m} 2^(j-1) b_j, k0 the first 1.
pub fn st_degree_closed_form(spec: &BitSpec, m: i64) -> Result<u64> {
    let k0 = spec
        .first_one_upto(m)
        .ok_or_else(|| Error::domain(format!("b_0..b_{m} contains no 1")))?;
    if m >= 64 {
        return Err(Error::overflow(format!("2^{m}")));
    }
    let mut d: u64 = 1u64 << m;
    for j in (k0 + 1)..=(m as u64) {
        if spec.bit_at(j) {
            d = d.checked_add(1u64 << (j - 1)).ok_or_else(|| Error::overflow("degree sum"))?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[u64]) -> SparsePoly {
        SparsePoly::from_unit_exponents(exps)
    }

    #[test]
    fn bits() {
        assert!(BitSpec::beta().bit_at(0));
        assert!(!BitSpec::gamma().bit_at(2));
        assert_eq!(BitSpec::gamma().prefix(4), vec![true, true, false, true, false]);
        assert!(!BitSpec::finite(&[0, 1]).bit_at(5));
    }

    #[test]
    fn parse_and_display() {
        let s: BitSpec = "pre=0100100;per=".parse().unwrap();
        assert_eq!(s, BitSpec::finite(&[0, 1, 0, 0, 1, 0, 0]));
        assert_eq!("per=10".parse::<BitSpec>().unwrap(), BitSpec::beta());
        assert_eq!("pre=1;per=10".parse::<BitSpec>().unwrap(), BitSpec::gamma());
        assert_eq!("0100100".parse::<BitSpec>().unwrap(), s);
        assert_eq!(BitSpec::gamma().to_string(), "pre=1;per=10");
        assert!("pre=012".parse::<BitSpec>().is_err());
        assert!("foo=1".parse::<BitSpec>().is_err());
        assert!("per=1;per=0".parse::<BitSpec>().is_err());
    }

    #[test]
    fn indices() {
        let t1 = BitSpec::finite(&[0, 1, 0]);
        assert_eq!(subseq_index(2, 3, &t1).unwrap(), 26);
        assert_eq!(subseq_index(0, 11, &BitSpec::beta()).unwrap(), 23);
        assert_eq!(subseq_index(-1, 7, &BitSpec::delta()).unwrap(), 7);
        assert!(matches!(subseq_index(63, 2, &BitSpec::delta()), Err(Error::Overflow(_))));
        assert!(subseq_index(-2, 1, &t1).is_err());
    }

    #[test]
    fn first_steps_by_hand() {
        let one = BitSpec::finite(&[1]);
        let p0 = st_pair(&one, 0).unwrap();
        assert_eq!((p0.s.clone(), p0.t.clone()), (p(&[1]), p(&[0])));
        let zero = BitSpec::finite(&[0]);
        let q0 = st_pair(&zero, 0).unwrap();
        assert_eq!((q0.s, q0.t), (p(&[0]), SparsePoly::zero()));
        assert_eq!(st_pair(&BitSpec::beta(), 1).unwrap().sum(), p(&[0, 1, 2]));
        // s_1 for bits {1,1}: s_0 = z, s_1 = z^2 * s_0
        assert_eq!(st_pair(&BitSpec::finite(&[1, 1]), 1).unwrap().s.valuation().unwrap(), 3);
        let init = st_pair(&BitSpec::delta(), -1).unwrap();
        assert_eq!((init.s, init.t), (SparsePoly::one(), SparsePoly::zero()));
    }

    #[test]
    fn decomposition_examples() {
        let (l, r) = decompose(0, 1, &BitSpec::finite(&[1])).unwrap();
        assert_eq!(l, p(&[0, 1]));
        assert_eq!(l, r);
        let (l, r) = decompose(2, 3, &BitSpec::finite(&[0, 1, 0])).unwrap();
        assert_eq!(l, stern_poly(26));
        assert_eq!(l, r);
        let (l, r) = decompose(3, 2, &BitSpec::finite(&[1, 1, 1, 1])).unwrap();
        assert_eq!(l, stern_poly(47));
        assert_eq!(l, r);
    }

    #[test]
    fn remainder_examples() {
        for m in -1..6 {
            assert!(remainder_a(m, 1, &BitSpec::beta()).unwrap().is_zero());
        }
        let a = remainder_a(1, 2, &BitSpec::finite(&[1, 0])).unwrap();
        assert!(a.valuation().unwrap() >= 5);
        let t1 = BitSpec::finite(&[0, 1, 0]);
        let a = remainder_a(2, 3, &t1).unwrap();
        assert_eq!(remainder_valuation_bound(2, &t1).unwrap(), 10);
        assert!(a.valuation().unwrap() >= 10);
        // the tail of a(26;z) beyond the stable head starts at z^10
        assert_eq!(&stern_poly(26) - &a, st_pair(&t1, 2).unwrap().sum());
    }

    #[test]
    fn limit_series_examples() {
        let zero = BitSpec::finite(&[]);
        for k in [1, 5, 64, 1000] {
            assert_eq!(limit_series(&zero, k).unwrap(), SparsePoly::one());
        }
        let t1 = BitSpec::finite(&[0, 1, 0, 0, 1, 0, 0]);
        assert_eq!(limit_series(&t1, 32).unwrap(), p(&[0, 2, 4, 8, 18, 20, 24]));
        assert_eq!(limit_series(&BitSpec::beta(), 8).unwrap(), p(&[0, 1, 2, 5, 6]));
        assert_eq!(limit_series(&BitSpec::beta(), 1).unwrap(), SparsePoly::one());
        assert!(limit_series_at(&BitSpec::beta(), 64, 3).is_err());
    }

    #[test]
    fn stabilization_threshold() {
        assert_eq!(stabilization_index(1), -1);
        assert_eq!(stabilization_index(2), 0);
        assert_eq!(stabilization_index(3), 1);
        assert_eq!(stabilization_index(4), 1);
        assert_eq!(stabilization_index(5), 2);
        assert_eq!(stabilization_index(32), 4);
        for order in 1..300u64 {
            let m = stabilization_index(order);
            assert!((1u64 << (m + 1)) >= order);
            assert!(m == -1 || (1u64 << m) < order);
        }
    }

    #[test]
    fn closed_form_degrees() {
        assert_eq!(st_degree_closed_form(&BitSpec::finite(&[1]), 0).unwrap(), 1);
        assert_eq!(st_degree_closed_form(&BitSpec::beta(), 1).unwrap(), 2);
        let t1 = BitSpec::finite(&[0, 1, 0, 0, 1, 0, 0]);
        // s_6 + t_6 is the n = 1 member (index 146); the n = 3 member
        // (index 402) has degree 200 instead
        assert_eq!(st_degree_closed_form(&t1, 6).unwrap(), 72);
        assert_eq!(crate::stern::stern_degree(subseq_index(6, 3, &t1).unwrap()).unwrap(), 200);
        assert!(matches!(st_degree_closed_form(&BitSpec::finite(&[0, 0]), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn iterator_matches_direct_pairs() {
        let spec = BitSpec::gamma();
        for (k, pair) in STPairs::new(&spec).take(10).enumerate() {
            let pair = pair.unwrap();
            assert_eq!(pair, st_pair(&spec, k as i64 - 1).unwrap());
        }
    }
}
