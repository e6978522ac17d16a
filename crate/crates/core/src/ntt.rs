//! Exact dense multiplication of integer polynomials by number-theoretic
//! transforms over up to three word-sized primes, recombined by CRT.

use num_bigint::BigInt;

const P1: u64 = 2_013_265_921; // 15 * 2^27 + 1
const P2: u64 = 469_762_049; // 7 * 2^26 + 1
const P3: u64 = 167_772_161; // 5 * 2^25 + 1
const G1: u64 = 31;
const G2: u64 = 3;
const G3: u64 = 3;

/// Largest transform length supported by every prime.
pub const MAX_LEN: usize = 1 << 25;

fn pow_mod<const P: u64>(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn transform<const P: u64, const G: u64>(a: &mut [u32], invert: bool) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut twiddles: Vec<u32> = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod::<P>(G, (P - 1) / len as u64);
        if invert {
            w = pow_mod::<P>(w, P - 2);
        }
        let half = len / 2;
        twiddles.clear();
        let mut cur = 1u64;
        for _ in 0..half {
            twiddles.push(cur as u32);
            cur = cur * w % P;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k] as u64;
                let v = hi[k] as u64 * twiddles[k] as u64 % P;
                let s = u + v;
                lo[k] = (if s >= P { s - P } else { s }) as u32;
                hi[k] = (if u >= v { u - v } else { u + P - v }) as u32;
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod::<P>(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = (*x as u64 * inv_n % P) as u32;
        }
    }
}

fn residues<const P: u64>(terms: &[(u64, i64)], len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for &(e, c) in terms {
        v[e as usize] = c.rem_euclid(P as i64) as u32;
    }
    v
}

fn convolve<const P: u64, const G: u64>(a: &[(u64, i64)], b: &[(u64, i64)], len: usize) -> Vec<u32> {
    let mut fa = residues::<P>(a, len);
    let mut fb = residues::<P>(b, len);
    transform::<P, G>(&mut fa, false);
    transform::<P, G>(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = (*x as u64 * *y as u64 % P) as u32;
    }
    drop(fb);
    transform::<P, G>(&mut fa, true);
    fa
}

/// Multiplies two polynomials given as `(exponent, coefficient)` lists.
///
/// `bound` must be an upper bound on the absolute value of every output
/// coefficient. Returns `None` when the bound or the output length exceeds
/// what the transform supports.
pub fn multiply(a: &[(u64, i64)], b: &[(u64, i64)], bound: u128) -> Option<Vec<(u64, BigInt)>> {
    let deg_a = a.last()?.0;
    let deg_b = b.last()?.0;
    let out_len = deg_a.checked_add(deg_b)? as usize + 1;
    let len = out_len.next_power_of_two();
    if len > MAX_LEN {
        return None;
    }
    let twice = bound.checked_mul(2)?;
    let m1 = P1 as u128;
    let m12 = m1 * P2 as u128;
    let m123 = m12 * P3 as u128;
    let primes = if twice < m1 {
        1
    } else if twice < m12 {
        2
    } else if twice < m123 {
        3
    } else {
        return None;
    };

    let r1 = convolve::<P1, G1>(a, b, len);
    let r2 = if primes >= 2 { Some(convolve::<P2, G2>(a, b, len)) } else { None };
    let r3 = if primes >= 3 { Some(convolve::<P3, G3>(a, b, len)) } else { None };

    let inv_p1_mod_p2 = pow_mod::<P2>(P1 % P2, P2 - 2) as u128;
    let p1p2_mod_p3 = (m12 % P3 as u128) as u64;
    let inv_p1p2_mod_p3 = pow_mod::<P3>(p1p2_mod_p3, P3 - 2) as u128;
    let modulus = match primes {
        1 => m1,
        2 => m12,
        _ => m123,
    };

    let mut out = Vec::new();
    for i in 0..out_len {
        let x1 = r1[i] as u128;
        let mut x = x1;
        if let Some(r2) = &r2 {
            let x2 = r2[i] as u128;
            let t = ((x2 + P2 as u128 - x1 % P2 as u128) % P2 as u128) * inv_p1_mod_p2 % P2 as u128;
            x = x1 + m1 * t;
            if let Some(r3) = &r3 {
                let x3 = r3[i] as u128;
                let xm = x % P3 as u128;
                let t3 = ((x3 + P3 as u128 - xm) % P3 as u128) * inv_p1p2_mod_p3 % P3 as u128;
                x += m12 * t3;
            }
        }
        if x == 0 {
            continue;
        }
        let v: i128 = if x > modulus / 2 { x as i128 - modulus as i128 } else { x as i128 };
        out.push((i as u64, BigInt::from(v)));
    }
    Some(out)
}
