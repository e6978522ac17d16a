//! Multiprecision complex arithmetic on top of `astro-float`.

use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

const RM: RoundingMode = RoundingMode::ToEven;

/// A complex number with `astro-float` components at a fixed working precision.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: usize,
}

impl MpComplex {
    pub fn zero(prec: usize) -> Self {
        MpComplex { re: BigFloat::from_u8(0, prec), im: BigFloat::from_u8(0, prec), prec }
    }

    pub fn one(prec: usize) -> Self {
        MpComplex { re: BigFloat::from_u8(1, prec), im: BigFloat::from_u8(0, prec), prec }
    }

    pub fn from_c64(z: Complex64, prec: usize) -> Self {
        MpComplex { re: BigFloat::from_f64(z.re, prec), im: BigFloat::from_f64(z.im, prec), prec }
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        MpComplex { re, im: BigFloat::from_u8(0, prec), prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// The same value carried at a different working precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let (mut re, mut im) = (self.re.clone(), self.im.clone());
        // set_precision only reports allocation failures
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        MpComplex { re, im, prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        MpComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        MpComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn add_real(&self, x: &BigFloat) -> Self {
        MpComplex { re: self.re.add(x, self.prec, RM), im: self.im.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        MpComplex { re, im, prec: p }
    }

    pub fn mul_real(&self, x: &BigFloat) -> Self {
        let p = self.prec;
        MpComplex { re: self.re.mul(x, p, RM), im: self.im.mul(x, p, RM), prec: p }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    /// Complex division; division by zero yields NaN components.
    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec;
        let d = o.norm_sqr();
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        MpComplex { re: re.div(&d, p, RM), im: im.div(&d, p, RM), prec: p }
    }

    pub fn powu(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = MpComplex::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }
}

/// Nearest-ish `f64` to a `BigFloat` (truncated to the leading 64 mantissa bits).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let top = *words.last().expect("nonempty mantissa");
    // value = 0.m * 2^exp, where `top` holds the leading 64 bits of m
    let v = ldexp(top as f64, exp as i64 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Natural logarithm of a positive `BigFloat`, in `f64`, valid far outside the `f64` range.
pub fn ln_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (words, _, _, exp, _) = x.as_raw_parts().expect("finite value");
    let top = *words.last().expect("nonempty mantissa");
    (top as f64).ln() + (exp as f64 - 64.0) * std::f64::consts::LN_2
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Exact conversion of an integer, rounded to `prec` bits.
pub fn from_bigint(x: &BigInt, prec: usize) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_u8(0, prec);
    }
    let (sign, digits) = x.to_u64_digits();
    let mut acc = BigFloat::from_u8(0, prec);
    let radix = BigFloat::from_u64(1u64 << 32, prec).mul(&BigFloat::from_u64(1u64 << 32, prec), prec, RM);
    for &d in digits.iter().rev() {
        acc = acc.mul(&radix, prec, RM).add(&BigFloat::from_u64(d, prec), prec, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc.inv_sign();
    }
    acc
}
