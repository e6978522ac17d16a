//! Named subsequences and their identities.
//!
//! * xi_n = (2^n - (-1)^n) / 3 and phi_n(q) = a(xi_n; q); F and G are the
//!   limits of phi_{2n} and phi_{2n+1}, i.e. the limit series of {1,0,1,0,...}
//!   and {1,1,0,1,0,...}.
//! * nu_n = 2^n - 1 and psi_n(q) = a(nu_n; q), from the all-ones sequence.
//!
//! Every `check_*` function returns residual polynomials that vanish exactly
//! when the identity holds. Exponents that the identities write with the
//! all-ones sequence symbol are taken as nu_n (so q^3 = q^{nu_2} in
//! psi_3 - q^3 psi_1(q^4) = psi_2).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binseq::{limit_series, BitSpec};
use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::stern::stern_poly;

/// xi_n = (2^n - (-1)^n) / 3.
pub fn xi(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("xi_n needs n >= 1"));
    }
    let p = 1u128.checked_shl(n).filter(|_| n < 128).ok_or_else(|| Error::overflow(format!("2^{n}")))?;
    let v = if n.is_multiple_of(2) { (p - 1) / 3 } else { (p + 1) / 3 };
    u64::try_from(v).map_err(|_| Error::overflow(format!("xi_{n}")))
}

/// nu_n = 2^n - 1.
pub fn nu(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("nu_n needs n >= 1"));
    }
    if n > 64 {
        return Err(Error::overflow(format!("nu_{n}")));
    }
    Ok(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
}

/// phi_n(q) = a(xi_n; q).
pub fn phi(n: u32) -> Result<SparsePoly> {
    Ok(stern_poly(xi(n)?))
}

/// psi_n(q) = a(nu_n; q).
pub fn psi(n: u32) -> Result<SparsePoly> {
    Ok(stern_poly(nu(n)?))
}

/// n-th Fibonacci number, F_1 = F_2 = 1.
pub fn fibonacci(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFamily {
    pub n: u32,
    pub xi: u64,
    pub poly: SparsePoly,
}

impl PhiFamily {
    pub fn new(n: u32) -> Result<Self> {
        let xi = xi(n)?;
        Ok(PhiFamily { n, xi, poly: stern_poly(xi) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiFamily {
    pub n: u32,
    pub nu: u64,
    pub poly: SparsePoly,
}

impl PsiFamily {
    pub fn new(n: u32) -> Result<Self> {
        let nu = nu(n)?;
        Ok(PsiFamily { n, nu, poly: stern_poly(nu) })
    }
}

/// F(q) = lim phi_{2n}(q), truncated below `order`.
pub fn f_series(order: u64) -> Result<SparsePoly> {
    series_checked(&BitSpec::beta(), order)
}

/// G(q) = lim phi_{2n+1}(q), truncated below `order`.
pub fn g_series(order: u64) -> Result<SparsePoly> {
    series_checked(&BitSpec::gamma(), order)
}

fn series_checked(spec: &BitSpec, order: u64) -> Result<SparsePoly> {
    if order == 0 {
        return Err(Error::domain("truncation order must be at least 1"));
    }
    limit_series(spec, order)
}

fn sub(p: &SparsePoly, k: u64) -> Result<SparsePoly> {
    p.substitute_power(k)
}

fn pow2(k: u32) -> Result<u64> {
    1u64.checked_shl(k).filter(|_| k < 64).ok_or_else(|| Error::overflow(format!("2^{k}")))
}

fn mul_trunc(a: &SparsePoly, b: &SparsePoly, order: u64) -> SparsePoly {
    (&a.truncate(order) * &b.truncate(order)).truncate(order)
}

/// Residuals of phi_{2n} = phi_{2n-1}(q^2) + q phi_{2n-2}(q^4) and
/// phi_{2n+1} = q phi_{2n}(q^2) + phi_{2n-1}(q^4).
pub fn check_phi_recurrences(n: u32) -> Result<(SparsePoly, SparsePoly)> {
    if n < 2 {
        return Err(Error::domain("phi recurrences need n >= 2"));
    }
    let (p2n, p2n1, p2nm1, p2nm2) = (phi(2 * n)?, phi(2 * n + 1)?, phi(2 * n - 1)?, phi(2 * n - 2)?);
    let r1 = &(&p2n - &sub(&p2nm1, 2)?) - &sub(&p2nm2, 4)?.shift(1)?;
    let r2 = &(&p2n1 - &sub(&p2n, 2)?.shift(1)?) - &sub(&p2nm1, 4)?;
    Ok((r1, r2))
}

/// Residuals (LHS - 1) of
/// phi_{2n+1}(q) phi_{2n-1}(q^2) - q phi_{2n}(q) phi_{2n}(q^2) = 1 and
/// phi_{2n+1}(q) phi_{2n+1}(q^2) - q phi_{2n+2}(q) phi_{2n}(q^2) = 1.
pub fn check_phi_quadratic(n: u32) -> Result<(SparsePoly, SparsePoly)> {
    if n < 1 {
        return Err(Error::domain("phi quadratic relations need n >= 1"));
    }
    let p2nm1 = phi(2 * n - 1)?;
    let p2n = phi(2 * n)?;
    let p2n1 = phi(2 * n + 1)?;
    let p2n2 = phi(2 * n + 2)?;
    let one = SparsePoly::one();
    let r1 = &(&(&p2n1 * &sub(&p2nm1, 2)?) - &(&p2n * &sub(&p2n, 2)?).shift(1)?) - &one;
    let r2 = &(&(&p2n1 * &sub(&p2n1, 2)?) - &(&p2n2 * &sub(&p2n, 2)?).shift(1)?) - &one;
    Ok((r1, r2))
}

/// Largest truncation order accepted by [`check_fg_functional`] for `n`.
pub fn fg_max_order(n: u32) -> Result<u64> {
    if n < 1 {
        return Err(Error::domain("F/G relations need n >= 1"));
    }
    pow2(2 * n - 1)
}

/// Residuals mod q^order of
/// F(q) G(q^(2^2n)) - q^(xi_2n) G(q) F(q^(2^2n)) = phi_2n(q) and
/// G(q) G(q^(2^(2n-1))) - q^(xi_(2n-1)) F(q) F(q^(2^(2n-1))) = phi_(2n-1)(q),
/// for 1 <= order <= 2^(2n-1).
pub fn check_fg_functional(n: u32, order: u64) -> Result<(SparsePoly, SparsePoly)> {
    let max = fg_max_order(n)?;
    if order < 1 || order > max {
        return Err(Error::domain(format!("order {order} outside 1..={max} for n = {n}")));
    }
    let f = f_series(order)?;
    let g = g_series(order)?;
    let k_even = pow2(2 * n)?;
    let k_odd = pow2(2 * n - 1)?;
    let even = {
        let a = mul_trunc(&f, &sub(&g, k_even)?, order);
        let b = mul_trunc(&g, &sub(&f, k_even)?, order).shift(xi(2 * n)?)?;
        (&(&a - &b) - &phi(2 * n)?).truncate(order)
    };
    let odd = {
        let a = mul_trunc(&g, &sub(&g, k_odd)?, order);
        let b = mul_trunc(&f, &sub(&f, k_odd)?, order).shift(xi(2 * n - 1)?)?;
        (&(&a - &b) - &phi(2 * n - 1)?).truncate(order)
    };
    Ok((even, odd))
}

/// Residuals of the three psi identities:
/// psi_n(q) = q psi_{n-1}(q^2) + 1,
/// psi_n(q) + q^{nu_n} = psi_{n+1}(q),
/// psi_n(q) psi_n(q^2) - psi_{n+1}(q) psi_{n-1}(q^2) = q^{2 nu_{n-1}}.
pub fn check_psi_identities(n: u32) -> Result<[SparsePoly; 3]> {
    if n < 2 {
        return Err(Error::domain("psi identities need n >= 2"));
    }
    let (pn, pn1, pnm1) = (psi(n)?, psi(n + 1)?, psi(n - 1)?);
    let one = SparsePoly::one();
    let r_rec = &(&pn - &sub(&pnm1, 2)?.shift(1)?) - &one;
    let r_step = &(&pn + &SparsePoly::monomial(nu(n)?, 1)) - &pn1;
    let two_nu = nu(n - 1)?.checked_mul(2).ok_or_else(|| Error::overflow("2 nu_{n-1}"))?;
    let r_cross = &(&(&pn * &sub(&pn, 2)?) - &(&pn1 * &sub(&pnm1, 2)?)) - &SparsePoly::monomial(two_nu, 1);
    Ok([r_rec, r_step, r_cross])
}

/// Residual of psi_n(q) - q^{nu_2m} psi_{n-2m}(q^{4^m}) = psi_{2m}(q), 2 <= 2m < n.
pub fn check_prop6(n: u32, m: u32) -> Result<SparsePoly> {
    if m < 1 || 2 * m >= n {
        return Err(Error::domain(format!("need 2 <= 2m < n, got n = {n}, m = {m}")));
    }
    let k = pow2(2 * m)?;
    let lhs = &psi(n)? - &sub(&psi(n - 2 * m)?, k)?.shift(nu(2 * m)?)?;
    Ok(&lhs - &psi(2 * m)?)
}

/// Residual mod q^order of f(q) - q^{nu_2m} f(q^{4^m}) = psi_{2m}(q), with f the
/// limit series of the all-ones sequence.
pub fn check_corollary(m: u32, order: u64) -> Result<SparsePoly> {
    if m < 1 || order < 1 {
        return Err(Error::domain("corollary needs m >= 1 and order >= 1"));
    }
    let f = limit_series(&BitSpec::delta(), order)?;
    let k = pow2(2 * m)?;
    let scaled = sub(&f, k)?.truncate(order);
    let lhs = &f - &scaled.shift(nu(2 * m)?)?;
    Ok((&lhs - &psi(2 * m)?).truncate(order))
}

/// The identity families exposed to reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityFamily {
    PhiRecurrences,
    PhiQuadratic,
    FgFunctional,
    Psi,
    Prop6,
    Corollary,
}

impl IdentityFamily {
    pub const ALL: [IdentityFamily; 6] = [
        IdentityFamily::PhiRecurrences,
        IdentityFamily::PhiQuadratic,
        IdentityFamily::FgFunctional,
        IdentityFamily::Psi,
        IdentityFamily::Prop6,
        IdentityFamily::Corollary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityFamily::PhiRecurrences => "phi-recurrences",
            IdentityFamily::PhiQuadratic => "phi-quadratic",
            IdentityFamily::FgFunctional => "fg-functional",
            IdentityFamily::Psi => "psi",
            IdentityFamily::Prop6 => "prop6",
            IdentityFamily::Corollary => "corollary",
        }
    }
}

impl fmt::Display for IdentityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity family `{s}`")))
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: BTreeMap<String, u64>,
    pub residuals: Vec<SparsePoly>,
    pub pass: bool,
}

impl IdentityReport {
    fn new(family: IdentityFamily, params: &[(&str, u64)], residuals: Vec<SparsePoly>) -> Self {
        let pass = residuals.iter().all(SparsePoly::is_zero);
        IdentityReport {
            identity: family.name().to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residuals,
            pass,
        }
    }
}

/// Runs one family at the given parameters. `n` is used by every family
/// except the corollary, `m` by prop6 and the corollary, `order` by the
/// truncated F/G and corollary checks (defaulting to the largest sound order,
/// or 2^(2m+4) for the corollary).
pub fn run_identity(family: IdentityFamily, n: Option<u32>, m: Option<u32>, order: Option<u64>) -> Result<IdentityReport> {
    let need = |v: Option<u32>, what: &str| v.ok_or_else(|| Error::domain(format!("{family} needs --{what}")));
    Ok(match family {
        IdentityFamily::PhiRecurrences => {
            let n = need(n, "n")?;
            let (a, b) = check_phi_recurrences(n)?;
            IdentityReport::new(family, &[("n", n as u64)], vec![a, b])
        }
        IdentityFamily::PhiQuadratic => {
            let n = need(n, "n")?;
            let (a, b) = check_phi_quadratic(n)?;
            IdentityReport::new(family, &[("n", n as u64)], vec![a, b])
        }
        IdentityFamily::FgFunctional => {
            let n = need(n, "n")?;
            let order = match order {
                Some(k) => k,
                None => fg_max_order(n)?,
            };
            let (a, b) = check_fg_functional(n, order)?;
            IdentityReport::new(family, &[("n", n as u64), ("order", order)], vec![a, b])
        }
        IdentityFamily::Psi => {
            let n = need(n, "n")?;
            let r = check_psi_identities(n)?;
            IdentityReport::new(family, &[("n", n as u64)], r.to_vec())
        }
        IdentityFamily::Prop6 => {
            let (n, m) = (need(n, "n")?, need(m, "m")?);
            let r = check_prop6(n, m)?;
            IdentityReport::new(family, &[("m", m as u64), ("n", n as u64)], vec![r])
        }
        IdentityFamily::Corollary => {
            let m = need(m, "m")?;
            let order = match order {
                Some(k) => k,
                None => pow2(2 * m + 4)?,
            };
            let r = check_corollary(m, order)?;
            IdentityReport::new(family, &[("m", m as u64), ("order", order)], vec![r])
        }
    })
}
