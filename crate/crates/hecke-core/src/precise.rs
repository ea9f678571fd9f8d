//! High-precision real arithmetic for the regularized evaluator.
//!
//! Values are fixed-point: an arbitrary-precision integer mantissa scaled by
//! `10^-(digits + guard)`, where `digits` comes from `HECKE_PRECISION_DIGITS`
//! (default 50) and a few guard digits absorb rounding. This is enough for the
//! crate's needs (products of a few hundred factors, `ln`, `exp`, rational
//! powers) without pulling in a multiprecision-float dependency.

use crate::linform::{rat, Rat};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const GUARD_DIGITS: u32 = 12;

/// Requested significant digits (env `HECKE_PRECISION_DIGITS`, default 50).
pub fn precision_digits() -> u32 {
    static DIGITS: Lazy<u32> = Lazy::new(|| {
        std::env::var("HECKE_PRECISION_DIGITS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(50)
    });
    *DIGITS
}

fn scale_digits() -> u32 {
    precision_digits() + GUARD_DIGITS
}

fn unit() -> &'static BigInt {
    static UNIT: Lazy<BigInt> = Lazy::new(|| BigInt::from(10u32).pow(scale_digits()));
    &UNIT
}

/// Round-to-nearest division of big integers.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let (a, b, sign) = if b.is_negative() {
        (-a, -b, ())
    } else {
        (a.clone(), b.clone(), ())
    };
    let _ = sign;
    let two = BigInt::from(2);
    if a.is_negative() {
        -((-&a + &b / &two) / &b)
    } else {
        (&a + &b / &two) / &b
    }
}

/// Fixed-point high-precision real.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(BigInt);

impl Fx {
    pub fn zero() -> Self {
        Fx(BigInt::zero())
    }

    pub fn one() -> Self {
        Fx(unit().clone())
    }

    pub fn from_rat(r: &Rat) -> Self {
        Fx(div_round(&(r.numer() * unit()), r.denom()))
    }

    pub fn from_int(n: i64) -> Self {
        Fx(BigInt::from(n) * unit())
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.0.clone(), unit().clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Fx(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Fx(div_round(&(unit() * unit()), &self.0))
    }

    fn shift2(&self, k: i64) -> Self {
        // Multiply by 2^k with rounding.
        if k >= 0 {
            Fx(&self.0 << (k as usize))
        } else {
            let d = BigInt::one() << ((-k) as usize);
            Fx(div_round(&self.0, &d))
        }
    }

    /// Natural logarithm; panics on non-positive input (callers guard).
    pub fn ln(&self) -> Self {
        assert!(self.0.is_positive(), "ln of non-positive value");
        // Normalize into [1, 2) by powers of two.
        let mut m = self.clone();
        let mut k: i64 = 0;
        let two = Fx::from_int(2);
        while m >= two {
            m = m.shift2(-1);
            k += 1;
        }
        while m < Fx::one() {
            m = m.shift2(1);
            k -= 1;
        }
        let mut res = atanh_series(&(&(&m - &Fx::one()) / &(&m + &Fx::one())));
        res = &res + &res; // ln m = 2 atanh((m-1)/(m+1))
        &res + &ln2().scale_int(k)
    }

    fn scale_int(&self, k: i64) -> Self {
        Fx(&self.0 * BigInt::from(k))
    }

    /// Exponential.
    pub fn exp(&self) -> Self {
        let l2 = ln2();
        // x = k ln2 + r with |r| <= ln2/2; exp(x) = 2^k exp(r).
        let k_big = div_round(&self.0, &l2.0);
        let k = k_big
            .to_i64()
            .expect("exponent overflow in high-precision exp");
        let r = self - &l2.scale_int(k);
        let mut term = Fx::one();
        let mut sum = Fx::one();
        let mut i: i64 = 1;
        loop {
            term = &term * &r;
            term = Fx(div_round(&term.0, &BigInt::from(i)));
            if term.0.is_zero() {
                break;
            }
            sum = &sum + &term;
            i += 1;
        }
        sum.shift2(k)
    }

    /// `base^e` for rational `base > 0` and rational exponent.
    pub fn pow_rat(base: &Rat, e: &Rat) -> Self {
        assert!(base.is_positive(), "pow of non-positive base");
        if e.is_zero() {
            return Fx::one();
        }
        if e.denom().is_one() {
            if let Some(k) = e.numer().to_i64() {
                if k.unsigned_abs() <= 512 {
                    return Fx::from_rat(&rat_int_pow(base, k));
                }
            }
        }
        let ln_b = Fx::from_rat(base).ln();
        (&Fx::from_rat(e) * &ln_b).exp()
    }

    /// Decimal rendering with the requested number of significant digits kept
    /// after the point (guard digits dropped).
    pub fn to_decimal_string(&self) -> String {
        let digits = precision_digits();
        let drop = BigInt::from(10u32).pow(GUARD_DIGITS);
        let scaled = div_round(&self.0, &drop);
        let neg = scaled.is_negative();
        let abs = scaled.abs();
        let unit_out = BigInt::from(10u32).pow(digits);
        let int_part = &abs / &unit_out;
        let frac_part = &abs % &unit_out;
        let frac_str = format!("{:0width$}", frac_part, width = digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rat().to_f64().unwrap_or(f64::NAN)
    }

    /// Relative closeness: `|a-b| <= 10^-tol * max(|a|,|b|)`.
    pub fn rel_close(a: &Fx, b: &Fx, tol: u32) -> bool {
        let diff = (a - b).abs();
        let m = if a.abs() >= b.abs() { a.abs() } else { b.abs() };
        if m.is_zero() {
            return diff.is_zero();
        }
        let lhs = &diff.0 * BigInt::from(10u32).pow(tol);
        lhs <= m.0
    }

    /// `|self| > 10^-k`.
    pub fn abs_exceeds_pow10(&self, k: u32) -> bool {
        &self.0.abs() * BigInt::from(10u32).pow(k) > *unit()
    }
}

/// Exact integer power of a rational.
pub fn rat_int_pow(base: &Rat, k: i64) -> Rat {
    let b = if k >= 0 { base.clone() } else { base.clone().recip() };
    let e = k.unsigned_abs() as u32;
    Rat::new(b.numer().pow(e), b.denom().pow(e))
}

fn atanh_series(z: &Fx) -> Fx {
    // z + z^3/3 + z^5/5 + ...; callers pass |z| <= 1/3.
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut n: i64 = 3;
    loop {
        term = &term * &z2;
        let t = Fx(div_round(&term.0, &BigInt::from(n)));
        if t.0.is_zero() {
            break;
        }
        sum = &sum + &t;
        n += 2;
    }
    sum
}

fn ln2() -> Fx {
    static LN2: Lazy<Fx> = Lazy::new(|| {
        let z = Fx::from_rat(&rat(1, 3));
        let a = atanh_series(&z);
        &a + &a
    });
    LN2.clone()
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, rhs: &Fx) -> Fx {
        Fx(&self.0 + &rhs.0)
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, rhs: &Fx) -> Fx {
        Fx(&self.0 - &rhs.0)
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-&self.0)
    }
}

impl Mul for &Fx {
    type Output = Fx;
    fn mul(self, rhs: &Fx) -> Fx {
        Fx(div_round(&(&self.0 * &rhs.0), unit()))
    }
}

impl Div for &Fx {
    type Output = Fx;
    fn div(self, rhs: &Fx) -> Fx {
        assert!(!rhs.0.is_zero(), "division by zero");
        Fx(div_round(&(&self.0 * unit()), &rhs.0))
    }
}

impl fmt::Debug for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_exp_roundtrip() {
        let x = Fx::from_rat(&rat(7, 3));
        let y = x.ln().exp();
        assert!(Fx::rel_close(&x, &y, 45), "{:?} vs {:?}", x, y);
    }

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458...
        let s = ln2().to_decimal_string();
        assert!(s.starts_with("0.693147180559945309417232121458"), "{s}");
    }

    #[test]
    fn rational_powers() {
        // 2^(3/2) = 2 * sqrt(2)
        let a = Fx::pow_rat(&rat(2, 1), &rat(3, 2));
        let sqrt2_sq = &a * &a;
        assert!(Fx::rel_close(&sqrt2_sq, &Fx::from_int(8), 45));
        // Exact integer power path.
        assert_eq!(Fx::pow_rat(&rat(3, 1), &rat(4, 1)), Fx::from_int(81));
        assert_eq!(Fx::pow_rat(&rat(2, 1), &rat(0, 1)), Fx::one());
        let inv = Fx::pow_rat(&rat(2, 1), &rat(-1, 1));
        assert_eq!(inv, Fx::from_rat(&rat(1, 2)));
    }

    #[test]
    fn closeness_and_magnitude() {
        let a = Fx::from_rat(&rat(1, 3));
        let b = &a + &Fx::from_rat(&Rat::new(1.into(), BigInt::from(10u32).pow(40)));
        assert!(Fx::rel_close(&a, &b, 30));
        assert!(!Fx::rel_close(&a, &b, 45));
        assert!(a.abs_exceeds_pow10(20));
        assert!(!Fx::zero().abs_exceeds_pow10(20));
    }
}
