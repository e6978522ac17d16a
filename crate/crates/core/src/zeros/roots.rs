//! Roots with multiplicities: squarefree split, Aberth sweeps, multiprecision polish.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::aberth::{self, F64Poly};
use super::dense::{squarefree_decomposition, IntPoly};
use crate::error::{Error, Result};
use crate::mp::{self, MpComplex};
use crate::par::{self, Execution};
use crate::poly::SparsePoly;

pub const DEFAULT_PRECISION: usize = 128;
pub const DEFAULT_TOLERANCE: f64 = 1e-20;
pub const MAX_PRECISION: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub source_degree: u64,
    pub precision_bits: usize,
}

impl RootSet {
    /// Number of roots counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity as u64).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// CSV with header `re,im,multiplicity,residual`, one row per distinct root.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,multiplicity,residual\n");
        for r in &self.roots {
            let _ = writeln!(s, "{:e},{:e},{},{:e}", r.value.re, r.value.im, r.multiplicity, r.residual);
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Working precision of the polish, in bits.
    pub precision: usize,
    /// Largest precision the polish may escalate to.
    pub max_precision: usize,
    /// Bound on the relative residual of every returned root.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub execution: Execution,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            precision: DEFAULT_PRECISION,
            max_precision: MAX_PRECISION,
            tolerance: DEFAULT_TOLERANCE,
            max_sweeps: 2000,
            execution: Execution::default(),
        }
    }
}

/// All complex roots of `p` with multiplicity.
pub fn find_roots(p: &SparsePoly, precision: usize, tolerance: f64) -> Result<RootSet> {
    find_roots_with(p, &RootOptions { precision, tolerance, ..RootOptions::default() })
}

pub fn find_roots_with(p: &SparsePoly, opts: &RootOptions) -> Result<RootSet> {
    let deg = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Err(Error::domain("root finding needs a nonconstant polynomial")),
    };
    if opts.precision < 53 || opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(Error::domain("precision must be at least 53 bits and tolerance positive"));
    }
    let v = p.valuation()?;
    let mut roots = Vec::new();
    if v > 0 {
        roots.push(Root { value: Complex64::new(0.0, 0.0), multiplicity: v as u32, residual: 0.0 });
    }
    let core = SparsePoly::from_terms(p.terms().iter().map(|(e, c)| (e - v, c.clone())));
    let scale = Residual::new(p);
    let mut precision_bits = opts.precision;
    for (factor, mult) in squarefree_decomposition(&IntPoly::from_sparse(&core)) {
        let (found, bits) = factor_roots(&factor, p, &scale, opts)?;
        precision_bits = precision_bits.max(bits);
        roots.extend(found.into_iter().map(|(value, residual)| Root { value, multiplicity: mult, residual }));
    }
    roots.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    let set = RootSet { roots, source_degree: deg, precision_bits };
    if set.total_multiplicity() != deg {
        return Err(Error::InvariantViolation(format!(
            "{} roots found for degree {deg}",
            set.total_multiplicity()
        )));
    }
    Ok(set)
}

fn describe(p: &SparsePoly) -> String {
    if p.len() <= 12 {
        p.to_string()
    } else {
        format!("degree-{} polynomial with {} terms", p.degree().unwrap_or(0), p.len())
    }
}

/// |P(r)| / (max|c| * max(1,|r|)^deg) for the source polynomial.
struct Residual<'a> {
    p: &'a SparsePoly,
    ln_maxc: f64,
    deg: f64,
}

impl<'a> Residual<'a> {
    fn new(p: &'a SparsePoly) -> Self {
        let maxc = p.max_abs_coeff();
        Residual { p, ln_maxc: mp::ln_f64(&mp::from_bigint(&maxc, 64)), deg: p.degree().unwrap_or(0) as f64 }
    }

    fn at(&self, z: &MpComplex) -> f64 {
        let val = self.p.eval_mp(z).abs();
        let ln_r = mp::ln_f64(&z.abs()).max(0.0);
        (mp::ln_f64(&val) - self.ln_maxc - self.deg * ln_r).exp()
    }
}

fn factor_roots(f: &IntPoly, source: &SparsePoly, resid: &Residual, opts: &RootOptions) -> Result<(Vec<(Complex64, f64)>, usize)> {
    let d = f.degree();
    let coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonConvergence {
            poly: describe(source),
            detail: "coefficients exceed the double-precision range".into(),
        });
    }
    let sparse = f.to_sparse();
    let deriv = sparse.derivative();
    if d == 1 {
        let start = Complex64::new(-coeffs[0] / coeffs[1], 0.0);
        let (z, r, bits) = polish(&sparse, &deriv, start, Complex64::zero(), resid, opts)
            .map_err(|z| stagnated(source, &[(0, z)], 0))?;
        return Ok((vec![(z, r)], bits));
    }
    let radius = (coeffs[0].abs().ln() - coeffs[d].abs().ln()) / d as f64;
    let fp = F64Poly::new(coeffs);
    let mut last_err = None;
    for attempt in 0..3 {
        let start = aberth::initial_guesses(d, radius.exp() * (1.0 + 0.05 * attempt as f64));
        let outcome = aberth::solve(&fp, start, opts.max_sweeps, opts.execution);
        let unsettled = outcome.converged.iter().filter(|&&c| !c).count();
        let approx = outcome.roots;
        let polished = par::map_range(opts.execution, d, |k| {
            let s: Complex64 = approx.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, zj)| (approx[k] - zj).inv()).sum();
            polish(&sparse, &deriv, approx[k], s, resid, opts)
        });
        let bad: Vec<(usize, Complex64)> = polished
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.as_ref().err().map(|z| (k, *z)))
            .collect();
        if !bad.is_empty() {
            last_err = Some(stagnated(source, &bad, unsettled));
            continue;
        }
        let found: Vec<(Complex64, f64, usize)> = polished.into_iter().map(|r| r.unwrap()).collect();
        if let Some((i, j)) = coincident(&found) {
            last_err = Some(Error::NonConvergence {
                poly: describe(source),
                detail: format!("approximations {i} and {j} converged to the same root {}", found[i].0),
            });
            continue;
        }
        let bits = found.iter().map(|r| r.2).max().unwrap_or(opts.precision);
        return Ok((found.into_iter().map(|(z, r, _)| (z, r)).collect(), bits));
    }
    Err(last_err.expect("at least one attempt"))
}

fn stagnated(source: &SparsePoly, bad: &[(usize, Complex64)], unsettled: usize) -> Error {
    let listed: Vec<String> = bad.iter().take(8).map(|(k, z)| format!("#{k} near {z}")).collect();
    Error::NonConvergence {
        poly: describe(source),
        detail: format!(
            "{} root(s) stagnated: {} ({unsettled} approximation(s) still moving after the sweep cap)",
            bad.len(),
            listed.join(", ")
        ),
    }
}

fn coincident(found: &[(Complex64, f64, usize)]) -> Option<(usize, usize)> {
    for i in 0..found.len() {
        for j in i + 1..found.len() {
            let (a, b) = (found[i].0, found[j].0);
            if (a - b).norm() <= 8.0 * f64::EPSILON * a.norm().max(1.0) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Newton steps with the Aberth repulsion `s` from the other approximations,
/// escalating precision until the residual meets the tolerance. On failure
/// returns the last approximation.
fn polish(
    f: &SparsePoly,
    df: &SparsePoly,
    start: Complex64,
    s: Complex64,
    resid: &Residual,
    opts: &RootOptions,
) -> std::result::Result<(Complex64, f64, usize), Complex64> {
    let mut prec = opts.precision;
    let mut z = MpComplex::from_c64(start, prec);
    loop {
        z = z.with_precision(prec);
        let one = MpComplex::one(prec);
        let rep = MpComplex::from_c64(s, prec);
        let half = -((prec / 2) as f64) * std::f64::consts::LN_2;
        for _ in 0..60 {
            let v = f.eval_mp(&z);
            let dv = df.eval_mp(&z);
            if dv.re.is_zero() && dv.im.is_zero() {
                break;
            }
            let n = v.div(&dv);
            let delta = n.div(&one.sub(&n.mul(&rep)));
            if !delta.is_finite() {
                break;
            }
            z = z.sub(&delta);
            let scale = mp::ln_f64(&z.abs()).max(0.0);
            if mp::ln_f64(&delta.abs()) <= half + scale {
                break;
            }
        }
        let r = resid.at(&z);
        if r < opts.tolerance {
            return Ok((z.to_c64(), r, prec));
        }
        prec *= 2;
        if prec > opts.max_precision {
            return Err(z.to_c64());
        }
    }
}
