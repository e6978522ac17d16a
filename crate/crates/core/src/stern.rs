//! The Stern polynomials a(n;z) and the classical Stern numbers a(n).
//!
//! a(0;z) = 0, a(1;z) = 1, a(2n;z) = a(n;z^2), a(2n+1;z) = z a(n;z^2) + a(n+1;z^2).

use crate::error::{Error, Result};
use crate::poly::SparsePoly;

/// An index `n >= 1` together with its 2-adic split `n = d * 2^e`, `d` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SternIndex {
    n: u64,
}

impl SternIndex {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("index 0 has no 2-adic decomposition"));
        }
        Ok(SternIndex { n })
    }

    pub fn n(self) -> u64 {
        self.n
    }

    /// ord_2(n).
    pub fn e(self) -> u32 {
        self.n.trailing_zeros()
    }

    /// Odd part of n.
    pub fn d(self) -> u64 {
        self.n >> self.e()
    }

    pub fn is_power_of_two(self) -> bool {
        self.d() == 1
    }
}

/// Exponents of a(n;z) in increasing order (every coefficient is 1).
///
/// Walks the binary expansion of `n` from the top, carrying the pair
/// (a(k;z), a(k+1;z)) for the prefix `k` of `n`.
pub fn stern_exponents(n: u64) -> Vec<u64> {
    let mut lo: Vec<u64> = Vec::new(); // a(k)
    let mut hi: Vec<u64> = vec![0]; // a(k+1)
    if n == 0 {
        return lo;
    }
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        // odd exponents come from z*a(k;z^2), even ones from a(k+1;z^2)
        let odd = interleave(&lo, &hi);
        if (n >> i) & 1 == 0 {
            hi = odd;
            lo.iter_mut().for_each(|e| *e *= 2);
        } else {
            hi.iter_mut().for_each(|e| *e *= 2);
            lo = odd;
        }
    }
    lo
}

/// Merges `2*a + 1` and `2*b` into one sorted list.
fn interleave(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = a.get(i).map(|e| 2 * e + 1);
        let y = b.get(j).map(|e| 2 * e);
        match (x, y) {
            (Some(x), Some(y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(x), None) => {
                out.push(x);
                i += 1;
            }
            (_, Some(y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// a(n;z). Exponents never exceed `n / 2`, so no index arithmetic can overflow.
pub fn stern_poly(n: u64) -> SparsePoly {
    SparsePoly::from_unit_exponents(&stern_exponents(n))
}

/// deg a(n;z) = (n - 2^e(n)) / 2, from the closed form.
pub fn stern_degree(n: u64) -> Result<u64> {
    let idx = SternIndex::new(n).map_err(|_| Error::domain("degree of a(0;z) = 0 is undefined"))?;
    Ok((n - (1u64 << idx.e())) / 2)
}

/// The classical Stern number a(n) = a(n;1).
pub fn stern_number(n: u64) -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64);
    if n == 0 {
        return 0;
    }
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        if (n >> i) & 1 == 0 {
            hi += lo;
        } else {
            lo += hi;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// a(n;z) straight from the two-branch definition, memoised densely.
    fn oracle(limit: usize) -> Vec<Vec<u8>> {
        let mut a: Vec<Vec<u8>> = vec![vec![], vec![1]];
        for n in 2..=limit {
            let k = n / 2;
            let sq = |p: &Vec<u8>| {
                let mut v = vec![0u8; p.len().max(1) * 2];
                for (i, c) in p.iter().enumerate() {
                    v[2 * i] += c;
                }
                v
            };
            let mut v = sq(&a[k]);
            if n % 2 == 1 {
                let b = sq(&a[k + 1]);
                let mut w = vec![0u8; v.len().max(b.len()) + 1];
                for (i, c) in v.iter().enumerate() {
                    w[i + 1] += c;
                }
                for (i, c) in b.iter().enumerate() {
                    w[i] += c;
                }
                v = w;
            }
            while v.last() == Some(&0) {
                v.pop();
            }
            a.push(v);
        }
        a
    }

    #[test]
    fn matches_definition_up_to_4096() {
        let a = oracle(4096);
        for (n, dense) in a.iter().enumerate() {
            let exps: Vec<u64> = dense.iter().enumerate().filter(|(_, c)| **c > 0).map(|(i, _)| i as u64).collect();
            assert!(dense.iter().all(|c| *c <= 1));
            assert_eq!(stern_exponents(n as u64), exps, "n = {n}");
        }
    }

    #[test]
    fn first_thirty_two() {
        assert!(stern_poly(0).is_zero());
        assert_eq!(stern_poly(11).to_string(), "1 + z + z^3 + z^4 + z^5");
        assert_eq!(stern_poly(23).to_string(), "1 + z + z^3 + z^7 + z^8 + z^9 + z^11");
        assert_eq!(stern_poly(32).to_string(), "1");
    }

    #[test]
    fn degrees_and_numbers() {
        assert_eq!(stern_degree(6).unwrap(), 2);
        assert_eq!(stern_degree(23).unwrap(), 11);
        for k in 0..63 {
            assert_eq!(stern_degree(1 << k).unwrap(), 0);
        }
        assert!(matches!(stern_degree(0), Err(Error::Domain(_))));
        assert_eq!(stern_number(0), 0);
        assert_eq!(stern_number(11), 5);
        assert_eq!(stern_number(23), 7);
    }

    #[test]
    fn index_split() {
        let i = SternIndex::new(96).unwrap();
        assert_eq!((i.e(), i.d()), (5, 3));
        assert!(SternIndex::new(64).unwrap().is_power_of_two());
        assert!(SternIndex::new(0).is_err());
    }

    #[test]
    fn huge_indices_are_cheap() {
        // 2^64 - 1 gives 1 + z + z^3 + ... + z^(2^63 - 1)
        let p = stern_poly(u64::MAX);
        assert_eq!(p.len(), 64);
        assert_eq!(p.degree(), Some((1u64 << 63) - 1));
        assert_eq!(stern_degree(u64::MAX).unwrap(), (1u64 << 63) - 1);
    }

    #[test]
    fn recursion_branches_hold_exactly() {
        for n in 1u64..=2000 {
            let sub = |m: u64| stern_poly(m).substitute_power(2).unwrap();
            assert_eq!(stern_poly(2 * n), sub(n));
            let odd = &sub(n).shift(1).unwrap() + &sub(n + 1);
            assert_eq!(stern_poly(2 * n + 1), odd);
            assert_eq!(stern_poly(n).eval_at_one(), BigInt::from(stern_number(n)));
        }
    }
}
