//! Dense integer polynomials: gcd, squarefree decomposition and Sturm chains.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::SparsePoly;

/// Coefficients from the constant term upwards, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_sparse(p: &SparsePoly) -> Self {
        let Some(deg) = p.degree() else { return IntPoly::default() };
        let mut c = vec![BigInt::zero(); deg as usize + 1];
        for (e, x) in p.terms() {
            c[*e as usize] = x.clone();
        }
        IntPoly(c)
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly::from_terms(self.0.iter().enumerate().map(|(i, c)| (i as u64, c.clone())))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0 as well, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly(self.0.iter().map(|c| c / &g).collect())
    }

    fn scale(&self, k: &BigInt) -> Self {
        IntPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// lc(b)^(deg a - deg b + 1) * a mod b.
    pub fn prem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "pseudo-division by zero");
        if self.is_zero() || self.degree() < b.degree() {
            return self.clone();
        }
        let db = b.degree();
        let lb = b.lc();
        let delta = self.degree() - db;
        let mut r = self.0.clone();
        let mut steps = 0;
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps += 1;
        }
        let mut out = IntPoly::new(r);
        if steps < delta + 1 {
            out = out.scale(&num_traits::pow(lb, delta + 1 - steps));
        }
        out
    }

    /// Exact quotient `self / b` when `b` divides `self` over the integers.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::default());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let db = b.degree();
        let lb = b.lc();
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[k + i] -= &qk * bc;
            }
            q[k] = qk;
        }
        r.iter().all(Zero::is_zero).then(|| IntPoly::new(q))
    }

    /// Sign of the value at a finite `f64` point, computed exactly.
    pub fn sign_at(&self, x: f64) -> Ordering {
        let (m, s) = dyadic(x);
        // D^N p(m / D) = sum c_i m^i D^(N-i), D = 2^s
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.0.iter().rev() {
            acc = acc * &m + c * &dpow;
            dpow <<= s;
        }
        match acc.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// x = m / 2^s with s >= 0.
fn dyadic(x: f64) -> (BigInt, u32) {
    assert!(x.is_finite(), "non-finite evaluation point");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.abs().to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mant, e) = if exp == 0 { (bits & ((1 << 52) - 1), -1074) } else { ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075) };
    // lowest terms, so the powers of the denominator stay small
    let tz = mant.trailing_zeros() as i32;
    let (mant, e) = (mant >> tz, e + tz);
    let mut m = BigInt::from(mant);
    if x < 0.0 {
        m = -m;
    }
    if e >= 0 {
        (m << e as u32, 0)
    } else {
        (m, (-e) as u32)
    }
}

/// Primitive gcd with positive leading coefficient.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = (a.primitive(), b.primitive());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.prem(&b).primitive();
        a = b;
        b = r;
    }
    a.primitive()
}

const P61: u64 = (1 << 61) - 1;

fn mod_p(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(P61)).to_u64().unwrap()
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn gcd_degree_mod_p(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), P61 - 2);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P61 - mulmod(f, bc)) % P61;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when a single modular gcd proves `p` squarefree; false is inconclusive.
pub fn squarefree_mod_p(p: &IntPoly) -> bool {
    if p.degree() == 0 {
        return true;
    }
    let n = p.degree() as u64;
    if mod_p(&p.lc()) == 0 || n.is_multiple_of(P61) {
        return false;
    }
    let a: Vec<u64> = p.0.iter().map(mod_p).collect();
    let b: Vec<u64> = p.derivative().0.iter().map(mod_p).collect();
    gcd_degree_mod_p(a, b) == 0
}

/// Factors `p = c * prod f_i^i` with primitive squarefree, pairwise coprime
/// `f_i`; only factors of positive degree are returned.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let p = p.primitive();
    if squarefree_mod_p(&p) {
        return vec![(p, 1)];
    }
    let mut c = gcd(&p, &p.derivative());
    let mut w = p.div_exact(&c).expect("gcd divides p").primitive();
    let mut out = Vec::new();
    let mut i = 1;
    while w.degree() > 0 {
        let y = gcd(&w, &c);
        let z = w.div_exact(&y).expect("gcd divides w").primitive();
        if z.degree() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides c").primitive();
        w = y;
    }
    out
}

/// p / gcd(p, p').
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    let p = p.primitive();
    if p.degree() == 0 || squarefree_mod_p(&p) {
        return p;
    }
    p.div_exact(&gcd(&p, &p.derivative())).expect("gcd divides p").primitive()
}

/// Sign variations of (1+t)^N p((a + b t) / (1 + t)), an upper bound on the
/// roots in (a, b) counted with multiplicity and of the same parity. A bound
/// of 0 or 1 is therefore the exact count.
pub fn descartes_bound(p: &IntPoly, a: f64, b: f64) -> usize {
    assert!(a < b, "empty interval");
    let ((ma, sa), (mb, sb)) = (dyadic(a), dyadic(b));
    let s = sa.max(sb);
    let (ma, mb) = (ma << (s - sa), mb << (s - sb));
    let w = &mb - &ma;
    // r(y) = D^N p((ma + w y) / D), so r has the roots of p in (a, b) on (0, 1)
    let mut r: Vec<BigInt> = Vec::with_capacity(p.0.len());
    let mut dpow = BigInt::one();
    for c in p.0.iter().rev() {
        r.push(BigInt::zero());
        for i in (1..r.len()).rev() {
            let (lo, hi) = r.split_at_mut(i);
            hi[0] *= &ma;
            hi[0] += &lo[i - 1] * &w;
        }
        r[0] *= &ma;
        r[0] += c * &dpow;
        dpow <<= s;
    }
    // y = 1 / (1 + t): reverse, then shift by 1
    r.reverse();
    let n = r.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let (lo, hi) = r.split_at_mut(j + 1);
            lo[j] += &hi[0];
        }
    }
    let mut last = Sign::NoSign;
    let mut v = 0;
    for c in &r {
        let sg = c.sign();
        if sg == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && sg != last {
            v += 1;
        }
        last = sg;
    }
    v
}

/// Sturm chain p, p', ... with every element a positive multiple of the
/// classical negated-remainder sequence. Coefficient growth is held down by
/// the subresultant scaling factors, taken in absolute value.
pub fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone()];
    if p.degree() == 0 {
        return chain;
    }
    chain.push(p.derivative());
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.degree() == 0 {
            break;
        }
        let delta = a.degree() - b.degree();
        let mut r = a.prem(b);
        if r.is_zero() {
            break;
        }
        if b.lc().is_positive() || (delta + 1) % 2 == 0 {
            r = r.neg();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        let next = IntPoly(r.0.iter().map(|c| c / &divisor).collect());
        g = b.lc().abs();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
        };
        chain.push(next);
    }
    chain
}

/// Sign changes of the chain at `x`, zeros skipped.
pub fn sign_variations(chain: &[IntPoly], x: f64) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in chain.iter().map(|q| q.sign_at(x)) {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
        IntPoly::from_sparse(&(&a.to_sparse() * &b.to_sparse()))
    }

    #[test]
    fn gcd_and_division() {
        let a = ip(&[1, 1]);
        let b = ip(&[1, 0, 1]);
        let c = ip(&[-2, 3]);
        let g = gcd(&mul(&mul(&a, &b), &ip(&[6])), &mul(&a, &c));
        assert_eq!(g, a);
        assert_eq!(mul(&a, &b).div_exact(&b), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(ip(&[0, 0, 4, 6]).content(), BigInt::from(2));
    }

    #[test]
    fn decomposition() {
        let a = ip(&[1, 1]);
        let b = ip(&[1, 0, 1]);
        let c = ip(&[1, 1, 0, 1]);
        let p = mul(&mul(&mul(&a, &a), &mul(&a, &b)), &mul(&b, &c));
        let d = squarefree_decomposition(&p);
        assert_eq!(d, vec![(c.clone(), 1), (b.clone(), 2), (a.clone(), 3)]);
        assert!(!squarefree_mod_p(&p));
        assert!(squarefree_mod_p(&c));
        assert_eq!(squarefree_part(&p), mul(&mul(&a, &b), &c));
    }

    #[test]
    fn exact_signs() {
        let p = ip(&[1, 1, 0, 1]);
        assert_eq!(p.sign_at(-1.0), Ordering::Less);
        assert_eq!(p.sign_at(0.0), Ordering::Greater);
        assert_eq!(p.sign_at(-0.6823278038280193), Ordering::Greater);
        assert_eq!(p.sign_at(-0.68232780382802), Ordering::Less);
        assert_eq!(ip(&[1, 1]).sign_at(-1.0), Ordering::Equal);
        assert_eq!(ip(&[-1, 0, 4]).sign_at(0.5), Ordering::Equal);
        assert_eq!(ip(&[0, 1]).sign_at(5e-324), Ordering::Greater);
    }

    #[test]
    fn sturm_counts() {
        // (x - 1)(x - 2)(x + 3)(x^2 + 1)
        let p = mul(&mul(&ip(&[-1, 1]), &ip(&[-2, 1])), &mul(&ip(&[3, 1]), &ip(&[1, 0, 1])));
        let ch = sturm_chain(&p);
        let count = |a, b| sign_variations(&ch, a) - sign_variations(&ch, b);
        assert_eq!(count(-10.0, 10.0), 3);
        assert_eq!(count(0.0, 1.5), 1);
        assert_eq!(count(-2.5, 0.5), 0);
        assert_eq!(count(-3.5, 2.5), 3);
    }
}
