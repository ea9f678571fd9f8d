//! Affine-linear forms with exact rational coefficients over named parameter
//! symbols. These are the common currency for exponents of `v`, central
//! character coordinates, and singular hyperplanes.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// An assignment of rational values to parameter symbols.
pub type Params = BTreeMap<String, Rat>;

/// Shorthand for a small rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Affine-linear form `constant + sum coeff_s * s` over parameter symbols.
///
/// Zero coefficients are never stored, so structural equality is semantic
/// equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LinForm {
    pub constant: Rat,
    pub coeffs: BTreeMap<String, Rat>,
}

impl LinForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn con(c: Rat) -> Self {
        LinForm { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn con_i(c: i64) -> Self {
        Self::con(rat(c, 1))
    }

    /// The form consisting of a single symbol with coefficient one.
    pub fn sym(s: &str) -> Self {
        Self::term(s, Rat::one())
    }

    pub fn term(s: &str, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(s.to_string(), coeff);
        }
        LinForm { constant: Rat::zero(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, s: &str) -> Rat {
        self.coeffs.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.constant *= c;
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    fn normalize(mut self) -> Self {
        self.coeffs.retain(|_, v| !v.is_zero());
        self
    }

    /// Evaluate at a full assignment. Every symbol appearing in the form must
    /// be assigned.
    pub fn eval(&self, at: &Params) -> crate::Result<Rat> {
        let mut acc = self.constant.clone();
        for (s, c) in &self.coeffs {
            let v = at.get(s).ok_or_else(|| {
                crate::HeckeError::Precondition(format!("parameter symbol {s} is not assigned"))
            })?;
            acc += c * v;
        }
        Ok(acc)
    }

    /// Pairing of the linear part (gradient) with a direction vector; symbols
    /// missing from the direction count as zero.
    pub fn grad_dot(&self, dir: &Params) -> Rat {
        let mut acc = Rat::zero();
        for (s, c) in &self.coeffs {
            if let Some(v) = dir.get(s) {
                acc += c * v;
            }
        }
        acc
    }

    /// Whether `self = c * other` for some nonzero rational `c`. Both forms
    /// must be nonzero.
    pub fn proportional_to(&self, other: &LinForm) -> bool {
        debug_assert!(!self.is_zero() && !other.is_zero());
        let ratio = match self.leading() {
            Some((k, c)) => match other.coeffs.get(k) {
                Some(oc) => c / oc,
                None => return false,
            },
            None => {
                // Constant forms are proportional iff the other is constant too.
                return other.is_constant();
            }
        };
        *self == other.scale(&ratio)
    }

    fn leading(&self) -> Option<(&String, &Rat)> {
        self.coeffs.iter().next().map(|(k, v)| (k, v))
    }

    /// Canonical primitive integer representative of the proportionality class:
    /// integer coefficients with gcd one and positive leading coefficient
    /// (leading = first symbol in order, falling back to the constant).
    pub fn primitive(&self) -> LinForm {
        if self.is_zero() {
            return LinForm::zero();
        }
        let mut denom_lcm = self.constant.denom().clone();
        for c in self.coeffs.values() {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let scaled = self.scale(&Rat::from_integer(denom_lcm));
        let mut g = scaled.constant.numer().abs();
        for c in scaled.coeffs.values() {
            g = num::integer::gcd(g, c.numer().abs());
        }
        let mut out = scaled.scale(&Rat::new(BigInt::one(), g));
        let lead_negative = match out.leading() {
            Some((_, c)) => c.is_negative(),
            None => out.constant.is_negative(),
        };
        if lead_negative {
            out = -&out;
        }
        out
    }
}

impl Add for &LinForm {
    type Output = LinForm;
    fn add(self, rhs: &LinForm) -> LinForm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (s, c) in &rhs.coeffs {
            *out.coeffs.entry(s.clone()).or_insert_with(Rat::zero) += c;
        }
        out.normalize()
    }
}

impl Sub for &LinForm {
    type Output = LinForm;
    fn sub(self, rhs: &LinForm) -> LinForm {
        let mut out = self.clone();
        out.constant -= &rhs.constant;
        for (s, c) in &rhs.coeffs {
            *out.coeffs.entry(s.clone()).or_insert_with(Rat::zero) -= c;
        }
        out.normalize()
    }
}

impl Neg for &LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        self.scale(&-Rat::one())
    }
}

impl Mul<&Rat> for &LinForm {
    type Output = LinForm;
    fn mul(self, rhs: &Rat) -> LinForm {
        self.scale(rhs)
    }
}

/// Render a rational as `p` or `p/q`.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LinForm {
    /// Canonical string, e.g. `k1/2 - k2 + 3`, `-3k1/2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first = std::cell::Cell::new(true);
        let push = |f: &mut fmt::Formatter<'_>, neg: bool, body: String| -> fmt::Result {
            if first.get() {
                first.set(false);
                if neg {
                    write!(f, "-{body}")
                } else {
                    write!(f, "{body}")
                }
            } else if neg {
                write!(f, " - {body}")
            } else {
                write!(f, " + {body}")
            }
        };
        for (s, c) in &self.coeffs {
            let num = c.numer().abs();
            let body = if num.is_one() && c.denom().is_one() {
                s.clone()
            } else if c.denom().is_one() {
                format!("{num}{s}")
            } else if num.is_one() {
                format!("{}/{}", s, c.denom())
            } else {
                format!("{}{}/{}", num, s, c.denom())
            };
            push(f, c.is_negative(), body)?;
        }
        if !self.constant.is_zero() || first.get() {
            let body = if self.constant.denom().is_one() {
                self.constant.numer().abs().to_string()
            } else {
                format!("{}/{}", self.constant.numer().abs(), self.constant.denom())
            };
            push(f, self.constant.is_negative(), body)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> LinForm {
        LinForm::sym("k1")
    }
    fn k2() -> LinForm {
        LinForm::sym("k2")
    }

    #[test]
    fn canonical_form_drops_zero_coefficients() {
        let f = &k1() - &k1();
        assert!(f.is_zero());
        assert!(f.coeffs.is_empty());
    }

    #[test]
    fn display_matches_convention() {
        let f = &(&k1().scale(&rat(1, 2)) - &k2()) + &LinForm::con_i(3);
        assert_eq!(f.to_string(), "k1/2 - k2 + 3");
        assert_eq!(LinForm::zero().to_string(), "0");
        assert_eq!(k1().scale(&rat(-3, 2)).to_string(), "-3k1/2");
        assert_eq!(k2().scale(&rat(2, 1)).to_string(), "2k2");
    }

    #[test]
    fn eval_and_grad() {
        let f = &(&k1() - &k2().scale(&rat(2, 1))) + &LinForm::con_i(1);
        let mut at = Params::new();
        at.insert("k1".into(), rat(3, 1));
        at.insert("k2".into(), rat(1, 2));
        assert_eq!(f.eval(&at).unwrap(), rat(3, 1));
        let mut dir = Params::new();
        dir.insert("k1".into(), rat(1, 1));
        dir.insert("k2".into(), rat(1, 1));
        assert_eq!(f.grad_dot(&dir), rat(-1, 1));
        assert!(f.eval(&Params::new()).is_err());
    }

    #[test]
    fn primitive_representative() {
        let f = &k1().scale(&rat(-1, 2)) + &k2().scale(&rat(3, 4));
        let p = f.primitive();
        assert_eq!(p.to_string(), "2k1 - 3k2");
        assert!(f.proportional_to(&p));
        assert!(!f.proportional_to(&k1()));
    }
}
