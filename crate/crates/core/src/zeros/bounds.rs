//! The Erdős–Turán functional and the clustering bounds for a(n;z).

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::contour::count_by_argument_principle;
use super::count::{boundary_roots, check_rho, count_region, Region};
use super::roots::{find_roots_with, RootOptions, RootSet};
use crate::error::{Error, Result};
use crate::mp;
use crate::poly::SparsePoly;
use crate::stern::{stern_degree, stern_number, stern_poly, SternIndex};

/// L(P) = ln sum|a_j| - ln|a_0| / 2 - ln|a_N| / 2.
pub fn l_value(p: &SparsePoly) -> Result<f64> {
    let lead = p.leading_coeff().ok_or_else(|| Error::domain("L is undefined for the zero polynomial"))?;
    let a0 = p.constant_term();
    if num_traits::Zero::is_zero(&a0) {
        return Err(Error::domain("L needs a nonzero constant term"));
    }
    let ln = |x: &num_bigint::BigInt| {
        let x = num_traits::Signed::abs(x);
        match num_traits::ToPrimitive::to_f64(&x).filter(|v| v.is_finite()) {
            Some(v) => v.ln(),
            None => mp::ln_f64(&mp::from_bigint(&x, 128)),
        }
    };
    let sum: num_bigint::BigInt = p.terms().iter().map(|(_, c)| num_traits::Signed::abs(c)).sum();
    Ok(ln(&sum) - 0.5 * ln(&a0) - 0.5 * ln(lead))
}

/// The two bounds of the clustering statement for a(n;z), together with the
/// two facts its proof rests on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop1Bounds {
    pub n: u64,
    pub degree: u64,
    /// 16 sqrt((3 ln n - ln 8) / n).
    pub et_bound: f64,
    /// (3 ln n - ln 8) / n; the annulus bound is this times 2 / rho.
    pub hn_bound_factorless: f64,
    pub l_value: f64,
    /// ln n - ln 2.
    pub l_limit: f64,
    /// L(a(n;z)) < ln n - ln 2.
    pub l_ingredient: bool,
    /// deg a(n;z) >= n / 3.
    pub degree_ingredient: bool,
}

impl Prop1Bounds {
    pub fn hn_bound(&self, rho: f64) -> f64 {
        2.0 / rho * self.hn_bound_factorless
    }
}

pub fn prop1_bounds(n: u64) -> Result<Prop1Bounds> {
    let idx = SternIndex::new(n)?;
    if idx.is_power_of_two() {
        return Err(Error::domain(format!("{n} is a power of 2")));
    }
    let nf = n as f64;
    let core = (3.0 * nf.ln() - 8f64.ln()) / nf;
    let degree = stern_degree(n)?;
    // all coefficients are 1 with constant and leading term 1
    let l = (stern_number(n) as f64).ln();
    let l_limit = nf.ln() - 2f64.ln();
    Ok(Prop1Bounds {
        n,
        degree,
        et_bound: 16.0 * core.sqrt(),
        hn_bound_factorless: core,
        l_value: l,
        l_limit,
        l_ingredient: l < l_limit,
        degree_ingredient: 3 * degree >= n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PassFlags {
    pub sector: bool,
    pub annulus: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub rho: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub sector_count: u64,
    pub annulus_count: u64,
    pub degree: u64,
    pub et_bound: f64,
    pub hn_bound: f64,
    pub sector_discrepancy: f64,
    pub annulus_deficit: f64,
    pub pass: PassFlags,
    /// Roots within the boundary tolerance of the sector rays or annulus circles.
    pub boundary_roots: u64,
}

/// Sector pairs (k pi/4, l pi/4) for 0 <= k < l <= 8.
pub fn eight_angle_grid() -> Vec<(f64, f64)> {
    let t = |k: u32| if k == 8 { TAU } else { k as f64 * PI / 4.0 };
    (0..8).flat_map(|k| (k + 1..=8).map(move |l| (t(k), t(l)))).collect()
}

pub const RHO_GRID: [f64; 4] = [0.1, 0.25, 0.5, 0.75];

/// Distance from a boundary within which a root is flagged.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Checks both inequalities on every (rho, sector) pair, after confirming the
/// total count and each annulus count against the argument principle.
pub fn verify_prop1(n: u64, rho_grid: &[f64], angle_grid: &[(f64, f64)], precision: usize) -> Result<Vec<BoundReport>> {
    verify_prop1_with(n, rho_grid, angle_grid, &RootOptions { precision, ..RootOptions::default() })
}

pub fn verify_prop1_with(n: u64, rho_grid: &[f64], angle_grid: &[(f64, f64)], opts: &RootOptions) -> Result<Vec<BoundReport>> {
    let b = prop1_bounds(n)?;
    for &rho in rho_grid {
        check_rho(rho)?;
    }
    for &(t1, t2) in angle_grid {
        Region::new(0.5, 1.0, t1, t2)?;
    }
    let p = stern_poly(n);
    let rs = find_roots_with(&p, opts)?;
    cross_validate(&p, &rs, rho_grid, opts.precision)?;
    let mut out = Vec::with_capacity(rho_grid.len() * angle_grid.len());
    let deg = b.degree as f64;
    for &rho in rho_grid {
        let annulus = Region::annulus(rho)?;
        let annulus_count = count_region(&rs, &annulus);
        let hn = b.hn_bound(rho);
        let deficit = 1.0 - annulus_count as f64 / deg;
        for &(t1, t2) in angle_grid {
            let sector = Region::new(0.0, f64::MAX, t1, t2)?;
            let sector_count = count_region(&rs, &sector);
            let disc = (sector_count as f64 / deg - (t2 - t1) / TAU).abs();
            let on_edge = boundary_roots(&rs, &Region::new(annulus.r1, annulus.r2, t1, t2)?, BOUNDARY_TOLERANCE);
            out.push(BoundReport {
                n,
                rho,
                theta1: t1,
                theta2: t2,
                sector_count,
                annulus_count,
                degree: b.degree,
                et_bound: b.et_bound,
                hn_bound: hn,
                sector_discrepancy: disc,
                annulus_deficit: deficit,
                pass: PassFlags { sector: disc <= b.et_bound, annulus: deficit <= hn },
                boundary_roots: on_edge,
            });
        }
    }
    Ok(out)
}

/// Total and per-annulus counts from the roots must match the contour counts.
fn cross_validate(p: &SparsePoly, rs: &RootSet, rho_grid: &[f64], precision: usize) -> Result<()> {
    let maxc = p.max_abs_coeff();
    let lead = p.leading_coeff().cloned().unwrap_or_default();
    let cauchy = 1.0 + mp::to_f64(&mp::from_bigint(&maxc, 64)) / mp::to_f64(&mp::from_bigint(&num_traits::Signed::abs(&lead), 64));
    let mut regions = vec![Region::disk(cauchy + 1.0)?];
    for &rho in rho_grid {
        regions.push(Region::annulus(rho)?);
    }
    for reg in regions {
        let c = count_by_argument_principle(p, &reg, precision)?;
        let geometric = count_region(rs, &c.region);
        if geometric != c.count {
            return Err(Error::InvariantViolation(format!(
                "roots give {geometric} zeros in {:?} but the argument principle gives {}",
                c.region, c.count
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_values() {
        assert!((l_value(&stern_poly(5)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((l_value(&stern_poly(23)).unwrap() - 7f64.ln()).abs() < 1e-15);
        let p = SparsePoly::from_terms([(0u64, 4i64), (1, -2), (3, 1)]);
        assert!((l_value(&p).unwrap() - (7f64.ln() - 0.5 * 4f64.ln())).abs() < 1e-15);
        assert!(l_value(&SparsePoly::monomial(2, 1)).is_err());
        assert!(l_value(&SparsePoly::zero()).is_err());
    }

    #[test]
    fn bound_values() {
        let b = prop1_bounds(2986).unwrap();
        assert!((b.et_bound - 1.371).abs() < 1e-3);
        let b = prop1_bounds(2000).unwrap();
        assert!((b.hn_bound(0.5) - 0.0414).abs() < 1e-4);
        assert!(matches!(prop1_bounds(8), Err(Error::Domain(_))));
        assert!(prop1_bounds(0).is_err());
        // the L ingredient fails at n = 3 and 5: a(3;z) = 1 + z has L = ln 2 > ln 1.5
        assert!(!prop1_bounds(3).unwrap().l_ingredient);
        assert!(!prop1_bounds(5).unwrap().l_ingredient);
        assert!(prop1_bounds(7).unwrap().l_ingredient);
    }

    #[test]
    fn grid_and_reports() {
        let g = eight_angle_grid();
        assert_eq!(g.len(), 36);
        assert!(g.contains(&(0.0, TAU)));
        let r = verify_prop1(23, &[0.5], &[(0.0, TAU)], 128).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].sector_discrepancy, 0.0);
        assert_eq!(r[0].degree, 11);
        assert!(r[0].pass.sector && r[0].pass.annulus);
        let r = verify_prop1(93, &[0.5], &[(0.0, PI)], 128).unwrap();
        assert!(r[0].sector_discrepancy < r[0].et_bound);
        assert_eq!(r[0].degree, 46);
        assert!(verify_prop1(16, &[0.5], &[(0.0, PI)], 128).is_err());
        assert!(verify_prop1(23, &[1.5], &[(0.0, PI)], 128).is_err());
    }
}
