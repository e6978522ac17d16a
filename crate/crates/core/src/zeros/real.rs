//! Real zeros through exact Sturm chains.

use std::cmp::Ordering;

use super::dense::{descartes_bound, sign_variations, squarefree_part, sturm_chain, IntPoly};
use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::stern::{stern_number, stern_poly};

/// Distinct real roots of `p` in the open interval (a, b).
///
/// A Descartes bound of 0 or 1 settles the count without building the chain.
pub fn sturm_real_root_count(p: &SparsePoly, a: f64, b: f64) -> Result<u64> {
    let dense = checked_dense(p, a, b)?;
    let v = descartes_bound(&dense, a, b);
    if v <= 1 {
        return Ok(v as u64);
    }
    Ok(chain_count(&dense, a, b))
}

/// Same count, always through the full Sturm chain.
pub fn sturm_real_root_count_full(p: &SparsePoly, a: f64, b: f64) -> Result<u64> {
    let dense = checked_dense(p, a, b)?;
    Ok(chain_count(&dense, a, b))
}

fn chain_count(dense: &IntPoly, a: f64, b: f64) -> u64 {
    let chain = sturm_chain(&squarefree_part(dense));
    (sign_variations(&chain, a) - sign_variations(&chain, b)) as u64
}

fn checked_dense(p: &SparsePoly, a: f64, b: f64) -> Result<IntPoly> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("need finite a < b, got ({a}, {b})")));
    }
    if p.is_zero() {
        return Err(Error::domain("every point is a root of the zero polynomial"));
    }
    let dense = IntPoly::from_sparse(p);
    for x in [a, b] {
        if dense.sign_at(x) == Ordering::Equal {
            return Err(Error::domain(format!("endpoint {x} is a root")));
        }
    }
    Ok(dense)
}

/// The unique real root of a(4n+3;x) in (-1, 0), by bisection on exact signs.
pub fn real_root_4n3(n: u64, tolerance: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n = 0 puts the root of a(3;x) at the endpoint -1"));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let idx = n.checked_mul(4).and_then(|m| m.checked_add(3)).ok_or_else(|| Error::overflow(format!("4*{n}+3")))?;
    let p = stern_poly(idx);
    let count = sturm_real_root_count(&p, -1.0, 0.0)?;
    if count != 1 {
        return Err(Error::InvariantViolation(format!("a({idx};x) has {count} real roots in (-1, 0), expected exactly 1")));
    }
    let dense = IntPoly::from_sparse(&p);
    debug_assert_eq!(stern_number(n) > 0, dense.sign_at(-1.0) == Ordering::Less);
    let (mut lo, mut hi) = (-1.0f64, 0.0f64);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match dense.sign_at(mid) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(mid),
        }
    }
    Ok(0.5 * (lo + hi))
}
