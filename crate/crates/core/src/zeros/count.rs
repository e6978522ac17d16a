//! Multiplicity-weighted zero counts over sectors, annuli and their intersections.

use std::f64::consts::TAU;

use serde::Serialize;

use super::roots::RootSet;
use crate::error::{Error, Result};

/// The box {r1 <= |z| <= r2, theta1 <= arg z < theta2}. A span of at least
/// 2 pi means every argument; otherwise arguments are read in
/// [theta1, theta1 + 2 pi) so a slightly rotated grid still wraps correctly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub r1: f64,
    pub r2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl Region {
    pub fn new(r1: f64, r2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let ok = r1.is_finite() && r2.is_finite() && 0.0 <= r1 && r1 < r2 && 0.0 <= theta1 && theta1 < theta2 && theta2 - theta1 <= TAU;
        if !ok {
            return Err(Error::domain(format!("invalid region r in [{r1}, {r2}], arg in [{theta1}, {theta2})")));
        }
        Ok(Region { r1, r2, theta1, theta2 })
    }

    /// 1 - rho <= |z| <= 1/(1 - rho), all arguments.
    pub fn annulus(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Region::new(1.0 - rho, 1.0 / (1.0 - rho), 0.0, TAU)
    }

    pub fn disk(r: f64) -> Result<Self> {
        Region::new(0.0, r, 0.0, TAU)
    }

    pub fn is_full_angle(&self) -> bool {
        self.theta2 - self.theta1 >= TAU
    }

    pub fn contains(&self, z: num_complex::Complex64) -> bool {
        let r = z.norm();
        if r < self.r1 || r > self.r2 {
            return false;
        }
        self.is_full_angle() || angle_in(arg0(z.arg()), self.theta1, self.theta2)
    }

    /// Distance from `z` to the boundary curves of the region.
    pub fn boundary_distance(&self, z: num_complex::Complex64) -> f64 {
        let r = z.norm();
        let mut d = (r - self.r2).abs();
        if self.r1 > 0.0 {
            d = d.min((r - self.r1).abs());
        }
        if !self.is_full_angle() {
            for t in [self.theta1, self.theta2] {
                let u = num_complex::Complex64::from_polar(1.0, t);
                // distance to the ray segment {s u : r1 <= s <= r2}
                let s = (z.re * u.re + z.im * u.im).clamp(self.r1, self.r2);
                d = d.min((z - u * s).norm());
            }
        }
        d
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("rho = {rho} is outside (0, 1)")))
    }
}

/// Argument in [0, 2 pi).
pub fn arg0(a: f64) -> f64 {
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

fn angle_in(a: f64, t1: f64, t2: f64) -> bool {
    let a = if a < t1 { a + TAU } else { a };
    a < t2
}

/// Roots with theta1 <= arg z < theta2, arg taken in [0, 2 pi).
pub fn count_sector(rs: &RootSet, theta1: f64, theta2: f64) -> Result<u64> {
    if !(0.0 <= theta1 && theta1 < theta2 && theta2 <= TAU) {
        return Err(Error::domain(format!("need 0 <= theta1 < theta2 <= 2 pi, got [{theta1}, {theta2})")));
    }
    Ok(weighted(rs, |z| {
        let a = arg0(z.arg());
        theta1 <= a && a < theta2
    }))
}

/// Roots with 1 - rho <= |z| <= 1/(1 - rho).
pub fn count_annulus(rs: &RootSet, rho: f64) -> Result<u64> {
    check_rho(rho)?;
    let (lo, hi) = (1.0 - rho, 1.0 / (1.0 - rho));
    Ok(weighted(rs, |z| {
        let r = z.norm();
        lo <= r && r <= hi
    }))
}

pub fn count_region(rs: &RootSet, region: &Region) -> u64 {
    weighted(rs, |z| region.contains(z))
}

/// Roots lying within `tol` of the region boundary, with multiplicity.
pub fn boundary_roots(rs: &RootSet, region: &Region, tol: f64) -> u64 {
    weighted(rs, |z| region.boundary_distance(z) <= tol)
}

fn weighted(rs: &RootSet, keep: impl Fn(num_complex::Complex64) -> bool) -> u64 {
    rs.roots.iter().filter(|r| keep(r.value)).map(|r| r.multiplicity as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stern::stern_poly;
    use crate::zeros::find_roots;
    use std::f64::consts::PI;

    fn roots(n: u64) -> RootSet {
        find_roots(&stern_poly(n), 128, 1e-20).unwrap()
    }

    #[test]
    fn sectors() {
        let r6 = roots(6);
        assert_eq!(count_sector(&r6, 0.0, PI).unwrap(), 1);
        assert_eq!(count_sector(&r6, 0.0, TAU).unwrap(), 2);
        let r7 = roots(7);
        assert_eq!(count_sector(&r7, PI / 2.0, 3.0 * PI / 2.0).unwrap(), 1);
        assert!(count_sector(&r7, 1.0, 1.0).is_err());
        assert!(count_sector(&r7, -0.1, 1.0).is_err());
        // -1 sits at arg pi: in [pi, 2 pi), not in [0, pi)
        let r3 = roots(3);
        assert_eq!(count_sector(&r3, 0.0, PI).unwrap(), 0);
        assert_eq!(count_sector(&r3, PI, TAU).unwrap(), 1);
    }

    #[test]
    fn annuli() {
        assert_eq!(count_annulus(&roots(6), 0.5).unwrap(), 2);
        assert_eq!(count_annulus(&roots(3), 0.1).unwrap(), 1);
        assert_eq!(count_annulus(&roots(7), 0.5).unwrap(), 3);
        assert!(count_annulus(&roots(7), 1.0).is_err());
        assert!(count_annulus(&roots(7), 0.0).is_err());
    }

    #[test]
    fn wrapped_region_and_boundary() {
        let reg = Region::new(0.5, 2.0, 3.0, TAU + 0.5).unwrap();
        assert!(reg.contains(num_complex::Complex64::from_polar(1.0, 0.2)));
        assert!(!reg.contains(num_complex::Complex64::from_polar(1.0, 0.7)));
        assert_eq!(boundary_roots(&roots(3), &Region::new(0.5, 2.0, PI, TAU).unwrap(), 1e-9), 1);
        assert_eq!(boundary_roots(&roots(6), &Region::annulus(0.5).unwrap(), 1e-9), 0);
    }
}
