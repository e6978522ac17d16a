//! Zero counts by the argument principle, with certified contour steps.
//!
//! A step from c of length h is accepted only when
//! |P(c)| > |P'(c)| h + sum |c_i| e_i (e_i - 1)/2 h^2 (|c| + h)^(e_i - 2) + eval error,
//! which keeps P(z) inside the disk around P(c) that excludes 0 on the whole
//! step, so the principal argument of P(end)/P(c) is the true increment.
//! Values are carried scaled by max(1, |c|)^-N so high degrees do not overflow.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::count::Region;
use crate::error::{Error, Result};
use crate::poly::SparsePoly;

#[derive(Debug, Clone, Copy)]
pub struct ContourOptions {
    /// Relative perturbation applied to radii and angles per retry.
    pub epsilon: f64,
    pub max_attempts: u32,
    /// Cap on accepted plus rejected steps for one closed contour.
    pub max_steps: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { epsilon: 1e-6, max_attempts: 8, max_steps: 4_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourCount {
    pub count: u64,
    /// The region whose boundary was actually traversed.
    pub region: Region,
    pub attempts: u32,
}

/// Zeros of `p` inside `region` by the winding number of its boundary. If the
/// boundary passes too close to a zero, radii and angles are nudged by
/// epsilon * k and the nudged region is reported back.
pub fn count_by_argument_principle(p: &SparsePoly, region: &Region, precision: usize) -> Result<ContourCount> {
    count_by_argument_principle_with(p, region, precision, &ContourOptions::default())
}

pub fn count_by_argument_principle_with(
    p: &SparsePoly,
    region: &Region,
    precision: usize,
    opts: &ContourOptions,
) -> Result<ContourCount> {
    if precision < 53 {
        return Err(Error::domain(format!("precision {precision} is below 53 bits")));
    }
    if p.is_zero() {
        return Err(Error::domain("the zero polynomial has no winding number"));
    }
    let f = Scaled::new(p)?;
    let mut last = String::new();
    for k in 0..=opts.max_attempts {
        let e = opts.epsilon * k as f64;
        let reg = if k == 0 {
            *region
        } else {
            let (t1, t2) = if region.is_full_angle() {
                (region.theta1, region.theta2)
            } else {
                (region.theta1 + 0.5 * e, region.theta2 + 0.5 * e)
            };
            Region::new(region.r1 * (1.0 + 0.7 * e), region.r2 * (1.0 + e), t1, t2)?
        };
        match winding(&f, &reg, opts) {
            Ok(count) => return Ok(ContourCount { count, region: reg, attempts: k + 1 }),
            Err(msg) => last = msg,
        }
    }
    Err(Error::Contour(format!("no certified contour after {} attempts: {last}", opts.max_attempts + 1)))
}

struct Scaled {
    /// (exponent, coefficient, |coefficient|)
    terms: Vec<(u64, f64, f64)>,
    n: u64,
    err: f64,
}

impl Scaled {
    fn new(p: &SparsePoly) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            let c = c.to_f64().filter(|c| c.is_finite()).ok_or_else(|| Error::overflow("coefficient beyond f64"))?;
            terms.push((*e, c, c.abs()));
        }
        let n = p.degree().unwrap_or(0);
        Ok(Scaled { terms, n, err: 8.0 * (n as f64 + 2.0) * f64::EPSILON })
    }

    /// log of the scale max(1, |z|)^N.
    fn log_scale(&self, r: f64) -> f64 {
        if r > 1.0 {
            self.n as f64 * r.ln()
        } else {
            0.0
        }
    }

    /// (P(z), P'(z)) divided by exp(log_scale(|z|)).
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let r = z.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        if r <= 1.0 {
            let mut pow = Complex64::new(1.0, 0.0);
            let mut at = 0;
            // z^(e-1), tracked apart from z^e so that z = 0 needs no division
            let mut pm = Complex64::new(1.0, 0.0);
            let mut at_m = 0;
            for &(e, c, _) in &self.terms {
                pow *= z.powu((e - at) as u32);
                at = e;
                p += pow * c;
                if e > 0 {
                    pm *= z.powu((e - 1 - at_m) as u32);
                    at_m = e - 1;
                    dp += pm * (c * e as f64);
                }
            }
            (p, dp)
        } else {
            let w = z.inv();
            let mut pow = Complex64::new(1.0, 0.0);
            let mut at = self.n;
            for &(e, c, _) in self.terms.iter().rev() {
                pow *= w.powu((at - e) as u32);
                at = e;
                p += pow * c;
                dp += pow * (c * e as f64);
            }
            let unit = Complex64::from_polar(1.0, (self.n as f64) * z.arg());
            (unit * p, unit * w * dp)
        }
    }

    /// Scaled Q(x), Q'(x) and the second-order remainder bound for a step h.
    fn majorants(&self, x: f64, h: f64, log_s: f64) -> (f64, f64, f64) {
        let (mut q, mut dq, mut rem) = (0.0, 0.0, 0.0);
        let lx = x.ln();
        let lxh = (x + h).ln();
        let lh = h.ln();
        // k * ln(x) with 0 * ln(0) read as 0
        let pw = |k: u64, l: f64| if k == 0 { 0.0 } else { k as f64 * l };
        for &(e, _, a) in &self.terms {
            let ef = e as f64;
            let la = a.ln();
            q += (la + pw(e, lx) - log_s).exp();
            if e >= 1 {
                dq += (la + ef.ln() + pw(e - 1, lx) - log_s).exp();
            }
            if e >= 2 {
                rem += (la + (ef * (ef - 1.0) / 2.0).ln() + 2.0 * lh + pw(e - 2, lxh) - log_s).exp();
            }
        }
        (q, dq, rem)
    }

    /// Whether a step of length h from c is certified, with the scaled value at c.
    fn certified(&self, c: Complex64, h: f64) -> (bool, Complex64) {
        let x = c.norm();
        let log_s = self.log_scale(x);
        let (p, dp) = self.eval(c);
        let (q, dq, rem) = self.majorants(x, h, log_s);
        let bound = (dp.norm() + self.err * dq) * h + rem + self.err * q;
        (p.norm() > bound * (1.0 + 1e-6), p)
    }
}

enum Piece {
    Arc { r: f64, from: f64, to: f64 },
    Segment { a: Complex64, b: Complex64 },
}

impl Piece {
    fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Arc { r, from, to } => Complex64::from_polar(r, from + (to - from) * t),
            Piece::Segment { a, b } => a + (b - a) * t,
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Piece::Arc { r, from, to } => r * (to - from).abs(),
            Piece::Segment { a, b } => (b - a).norm(),
        }
    }
}

fn boundary(reg: &Region) -> Vec<Vec<Piece>> {
    if reg.is_full_angle() {
        let mut loops = vec![vec![Piece::Arc { r: reg.r2, from: 0.0, to: TAU }]];
        if reg.r1 > 0.0 {
            loops.push(vec![Piece::Arc { r: reg.r1, from: TAU, to: 0.0 }]);
        }
        return loops;
    }
    let (t1, t2) = (reg.theta1, reg.theta2);
    let mut path = vec![
        Piece::Arc { r: reg.r2, from: t1, to: t2 },
        Piece::Segment { a: Complex64::from_polar(reg.r2, t2), b: Complex64::from_polar(reg.r1, t2) },
    ];
    if reg.r1 > 0.0 {
        path.push(Piece::Arc { r: reg.r1, from: t2, to: t1 });
    }
    path.push(Piece::Segment { a: Complex64::from_polar(reg.r1, t1), b: Complex64::from_polar(reg.r2, t1) });
    vec![path]
}

fn winding(f: &Scaled, reg: &Region, opts: &ContourOptions) -> std::result::Result<u64, String> {
    let mut total = 0.0;
    let mut steps = 0usize;
    for path in boundary(reg) {
        for piece in &path {
            total += traverse(f, piece, opts, &mut steps)?;
        }
    }
    let w = total / TAU;
    let k = w.round();
    if (w - k).abs() > 0.25 || k < 0.0 {
        return Err(format!("winding number {w} is not a nonnegative integer"));
    }
    Ok(k as u64)
}

fn traverse(f: &Scaled, piece: &Piece, opts: &ContourOptions, steps: &mut usize) -> std::result::Result<f64, String> {
    let len = piece.length();
    if len == 0.0 {
        return Ok(0.0);
    }
    let h_min = 1e-13 * piece.point(0.0).norm().max(piece.point(1.0).norm()).max(1.0);
    let mut t = 0.0;
    let mut dt: f64 = 1.0 / 64.0;
    let mut arg = 0.0;
    let mut c = piece.point(0.0);
    while t < 1.0 {
        *steps += 1;
        if *steps > opts.max_steps {
            return Err("step budget exhausted".into());
        }
        let dt_try = dt.min(1.0 - t);
        let h = len * dt_try;
        let (ok, pc) = f.certified(c, h);
        if pc.norm() == 0.0 || !pc.is_finite() {
            return Err(format!("polynomial vanishes numerically at {c}"));
        }
        if ok {
            let t_next = if dt_try >= 1.0 - t { 1.0 } else { t + dt_try };
            let next = piece.point(t_next);
            let (pn, _) = f.eval(next);
            arg += (pn / pc).arg();
            t = t_next;
            c = next;
            dt = dt_try * 2.0;
        } else {
            if h < h_min {
                return Err(format!("contour passes within {h:e} of a zero near {c}"));
            }
            dt = dt_try / 2.0;
        }
    }
    Ok(arg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[u64]) -> SparsePoly {
        SparsePoly::from_unit_exponents(exps)
    }

    #[test]
    fn small_counts() {
        let a6 = p(&[0, 2]);
        let c = count_by_argument_principle(&a6, &Region::annulus(0.5).unwrap(), 53).unwrap();
        assert_eq!(c.count, 2);
        let a7 = p(&[0, 1, 3]);
        assert_eq!(count_by_argument_principle(&a7, &Region::disk(0.9).unwrap(), 53).unwrap().count, 1);
        let upper = Region::new(0.5, 2.0, 0.1, 3.0).unwrap();
        assert_eq!(count_by_argument_principle(&a7, &upper, 53).unwrap().count, 1);
    }

    #[test]
    fn scaled_evaluation_branches_agree() {
        let q = p(&[0, 1, 3, 7, 8, 9, 11]);
        let f = Scaled::new(&q).unwrap();
        for z in [Complex64::new(0.3, 0.9), Complex64::new(1.3, -0.4), Complex64::new(-2.0, 0.5)] {
            let (v, d) = f.eval(z);
            let s = f.log_scale(z.norm()).exp();
            assert!((v * s - q.eval_f64(z)).norm() < 1e-9 * s);
            assert!((d * s - q.derivative().eval_f64(z)).norm() < 1e-9 * s);
        }
    }

    #[test]
    fn root_on_contour_is_perturbed_away() {
        // -1 lies on the ray at angle pi
        let a3 = p(&[0, 1]);
        let reg = Region::new(0.5, 2.0, std::f64::consts::PI, TAU).unwrap();
        let c = count_by_argument_principle(&a3, &reg, 53).unwrap();
        assert!(c.attempts > 1);
        assert_eq!(c.count, 0);
        assert!(c.region.theta1 > std::f64::consts::PI);
    }
}
