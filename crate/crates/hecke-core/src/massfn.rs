//! The Plancherel mass function attached to a residual point, its regularized
//! evaluation on cancellation loci, the exact graded sign criterion, singular
//! hyperplane extraction, and the equal-parameter formal-degree function with
//! its cyclotomic factorization.
//!
//! A mass function is a ratio of products of factors `(unit * v^expo - 1)`,
//! where `unit` is a root of unity stored as its argument, a reduced fraction
//! in [0, 1), and `expo` is an affine-linear form in the parameter symbols.
//! Factors with non-real units come in conjugate pairs; each pair multiplies
//! to `v^(2e) - 2cos(2 pi t) v^e + 1`, and for the unit orders that occur
//! (1, 2, 3, 4, 6) the cosine is rational. Evaluation therefore never leaves
//! exact real arithmetic.

use crate::linform::{rat, rat_str, LinForm, Params, Rat};
use crate::precise::{rat_int_pow, Fx};
use crate::residual::{alpha_value, k_of};
use crate::rootdata::{RootSystem, Subsystem};
use crate::{HeckeError, Result};
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Num,
    Den,
}

/// One factor `(e^(2 pi i unit) * v^expo - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassFactor {
    /// Argument of the root of unity, reduced, in [0, 1).
    pub unit: Rat,
    pub expo: LinForm,
    pub side: Side,
}

impl MassFactor {
    pub fn is_identically_zero(&self) -> bool {
        self.unit.is_zero() && self.expo.is_zero()
    }
}

/// A ratio of factor products times `v^prefactor`.
#[derive(Clone, Debug)]
pub struct MassFunction {
    pub factors: Vec<MassFactor>,
    pub prefactor: LinForm,
}

impl MassFunction {
    pub fn push(&mut self, side: Side, unit: Rat, expo: LinForm) {
        let f = MassFactor { unit: frac(&unit), expo, side };
        if !f.is_identically_zero() {
            self.factors.push(f);
        }
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = &MassFactor> {
        self.factors.iter().filter(move |f| f.side == side)
    }

    /// Parameter symbols appearing in any exponent.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for f in &self.factors {
            for s in f.expo.coeffs.keys() {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out.sort();
        out
    }
}

/// Reduce an argument into [0, 1).
pub fn frac(t: &Rat) -> Rat {
    let f = t.fract();
    if f.is_negative() {
        f + Rat::one()
    } else {
        f
    }
}

/// The mass function of a residual point over a G2/F4 pseudo-Levi: per parent
/// root, numerator factor `(alpha(r)^-1 - 1)` and the simplified denominator
/// factor `(v^-k(alpha) alpha(r)^-1 - 1)`, with `alpha(r) =
/// alpha(s) v^alpha(xi)` read off the Kac point. Identically zero factors are
/// dropped.
pub fn mass_function(rs: &RootSystem, sub: &Subsystem, coords: &[LinForm]) -> MassFunction {
    let mut m = MassFunction { factors: Vec::new(), prefactor: LinForm::zero() };
    for r in 0..rs.roots.len() {
        let unit = -sub.alpha_kac(rs, r);
        let val = alpha_value(rs, r, coords);
        m.push(Side::Num, unit.clone(), -&val);
        m.push(Side::Den, unit, &(-&val) - &k_of(rs, r));
    }
    m
}

/// Twice the cosine of `2 pi t` for the unit orders that occur.
fn two_cos(t: &Rat) -> Result<Rat> {
    let d = t.denom().to_i64().unwrap_or(0);
    let ok = match d {
        1 => rat(2, 1),
        2 => rat(-2, 1),
        3 => rat(-1, 1),
        4 => rat(0, 1),
        6 => rat(1, 1),
        _ => {
            return Err(HeckeError::Internal(format!(
                "unsupported unit order {d} in factor pairing"
            )))
        }
    };
    Ok(ok)
}

/// Result of regularized evaluation.
#[derive(Clone, Debug)]
pub struct RegularizedValue {
    /// Signed magnitude at the working precision; exactly zero when
    /// `vanishing_order > 0`.
    pub value: Fx,
    /// Sign determined exactly (0 iff vanishing_order > 0).
    pub sign: i8,
    /// Numerator vanishing count minus denominator vanishing count.
    pub vanishing_order: i64,
    pub num_vanishing: usize,
    pub den_vanishing: usize,
    pub direction_used: Params,
}

/// Candidate regularization directions over the given symbols: small integer
/// vectors ordered by total size then lexicographically, first nonzero
/// coordinate positive.
fn direction_candidates(symbols: &[String]) -> Vec<Params> {
    let n = symbols.len();
    let mut raw: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &raw {
            for c in -3i64..=3 {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        raw = next;
    }
    raw.retain(|v| v.iter().any(|&c| c != 0));
    raw.retain(|v| v.iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false));
    raw.sort_by_key(|v| (v.iter().map(|c| c.abs()).sum::<i64>(), v.clone()));
    raw.into_iter()
        .map(|v| {
            symbols
                .iter()
                .cloned()
                .zip(v.into_iter().map(|c| rat(c, 1)))
                .collect()
        })
        .collect()
}

/// First `count` directions along which none of the given gradients is
/// constant.
pub fn admissible_directions(
    vanishing: &[LinForm],
    symbols: &[String],
    count: usize,
) -> Result<Vec<Params>> {
    let mut out = Vec::new();
    for dir in direction_candidates(symbols) {
        if vanishing.iter().all(|f| !f.grad_dot(&dir).is_zero()) {
            out.push(dir);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(HeckeError::Internal(
        "no admissible regularization direction found".into(),
    ))
}

/// Evaluate a mass function at a parameter point and base `v > 1`, replacing
/// factors that vanish at the point by their first-order terms along a
/// generic direction. The sign is computed exactly; the magnitude at the
/// configured working precision.
pub fn evaluate_regularized(
    m: &MassFunction,
    at: &Params,
    v: &Rat,
    direction: Option<&Params>,
) -> Result<RegularizedValue> {
    if *v <= Rat::one() {
        return Err(HeckeError::Usage(format!("base v must exceed 1, got {}", rat_str(v))));
    }
    let mut sign: i8 = 1;
    let mut mag = Fx::one();
    let mut vanishing: Vec<(Side, LinForm)> = Vec::new();
    // Non-real factors awaiting their conjugates, keyed by (side, exponent).
    let mut pool: BTreeMap<(Side, Rat), Vec<Rat>> = BTreeMap::new();

    for f in &m.factors {
        let e = f.expo.eval(at)?;
        if f.unit.is_zero() {
            if e.is_zero() {
                vanishing.push((f.side, f.expo.clone()));
                continue;
            }
            // v^e - 1: positive iff e > 0 since v > 1.
            let s: i8 = if e.is_positive() { 1 } else { -1 };
            let mut x = &Fx::pow_rat(v, &e) - &Fx::one();
            if s < 0 {
                x = -&x;
            }
            apply(&mut sign, &mut mag, f.side, s, x);
        } else if f.unit == rat(1, 2) {
            // -v^e - 1: never zero, always negative.
            let x = &Fx::pow_rat(v, &e) + &Fx::one();
            apply(&mut sign, &mut mag, f.side, -1, x);
        } else {
            pool.entry((f.side, e)).or_default().push(f.unit.clone());
        }
    }

    // Pair non-real units with their conjugates; each pair is a positive
    // real quadratic in v^e.
    for ((side, e), mut units) in pool {
        units.sort();
        while let Some(t) = units.pop() {
            let conj = &Rat::one() - &t;
            let pos = units.iter().position(|u| *u == conj).ok_or_else(|| {
                HeckeError::Internal(format!(
                    "unit {} at exponent {} lacks a conjugate partner",
                    rat_str(&t),
                    rat_str(&e)
                ))
            })?;
            units.remove(pos);
            let c2 = Fx::from_rat(&two_cos(&t)?);
            let ve = Fx::pow_rat(v, &e);
            let x = &(&(&ve * &ve) - &(&c2 * &ve)) + &Fx::one();
            debug_assert!(!x.is_negative() && !x.is_zero());
            apply(&mut sign, &mut mag, side, 1, x);
        }
    }

    let num_vanishing = vanishing.iter().filter(|(s, _)| *s == Side::Num).count();
    let den_vanishing = vanishing.len() - num_vanishing;
    let order = num_vanishing as i64 - den_vanishing as i64;
    if order < 0 {
        return Err(HeckeError::Internal(
            "negative vanishing order: mass function has a pole at a point claimed regular".into(),
        ));
    }

    let symbols = m.symbols();
    let grads: Vec<LinForm> = vanishing.iter().map(|(_, f)| f.clone()).collect();
    let dir = match direction {
        Some(d) => {
            if grads.iter().any(|f| f.grad_dot(d).is_zero()) {
                return Err(HeckeError::Precondition(
                    "direction is not generic for the vanishing factors".into(),
                ));
            }
            d.clone()
        }
        None if grads.is_empty() => Params::new(),
        None => admissible_directions(&grads, &symbols, 1)?.pop().unwrap(),
    };

    if order > 0 {
        return Ok(RegularizedValue {
            value: Fx::zero(),
            sign: 0,
            vanishing_order: order,
            num_vanishing,
            den_vanishing,
            direction_used: dir,
        });
    }

    // Equal counts of first-order terms: the ln(v) powers cancel, leaving the
    // exact ratio of directional derivatives.
    let mut ratio = Rat::one();
    for (side, f) in &vanishing {
        let g = f.grad_dot(&dir);
        match side {
            Side::Num => ratio *= g,
            Side::Den => ratio /= g,
        }
    }
    if ratio.is_negative() {
        sign = -sign;
    }
    mag = &mag * &Fx::from_rat(&ratio.abs());

    // The stored prefactor is a positive power of v: magnitude only.
    let pre = m.prefactor.eval(at)?;
    if !pre.is_zero() {
        mag = &mag * &Fx::pow_rat(v, &pre);
    }

    let value = if sign < 0 { -&mag } else { mag.clone() };
    Ok(RegularizedValue {
        value,
        sign,
        vanishing_order: 0,
        num_vanishing,
        den_vanishing,
        direction_used: dir,
    })
}

fn apply(sign: &mut i8, mag: &mut Fx, side: Side, s: i8, x: Fx) {
    *sign *= s;
    match side {
        Side::Num => *mag = &*mag * &x,
        Side::Den => *mag = &*mag / &x,
    }
}

/// Exact sign of a ratio of products of affine-linear forms at a point, with
/// first-order regularization of forms that vanish there. Identically zero
/// forms must already be removed by the caller.
pub fn regularized_sign(num: &[LinForm], den: &[LinForm], at: &Params) -> Result<i8> {
    let mut sign: i8 = 1;
    let mut vanishing_num: Vec<LinForm> = Vec::new();
    let mut vanishing_den: Vec<LinForm> = Vec::new();
    let mut symbols: Vec<String> = Vec::new();
    for (side, forms) in [(Side::Num, num), (Side::Den, den)] {
        for f in forms {
            debug_assert!(!f.is_zero());
            for s in f.coeffs.keys() {
                if !symbols.contains(s) {
                    symbols.push(s.clone());
                }
            }
            let val = f.eval(at)?;
            if val.is_zero() {
                match side {
                    Side::Num => vanishing_num.push(f.clone()),
                    Side::Den => vanishing_den.push(f.clone()),
                }
            } else if val.is_negative() {
                sign = -sign;
            }
        }
    }
    symbols.sort();
    if vanishing_num.len() > vanishing_den.len() {
        return Ok(0);
    }
    if vanishing_num.len() < vanishing_den.len() {
        return Err(HeckeError::Internal(
            "negative vanishing order in exact sign computation".into(),
        ));
    }
    if !vanishing_num.is_empty() {
        let mut grads = vanishing_num.clone();
        grads.extend(vanishing_den.iter().cloned());
        let dir = admissible_directions(&grads, &symbols, 1)?.pop().unwrap();
        // Sign of the ratio of directional derivatives: a flip per negative
        // derivative, on either side.
        for f in &grads {
            if f.grad_dot(&dir).is_negative() {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// The numerator and denominator form lists of the graded sign expression
/// over the subsystem roots, identically zero forms removed.
pub fn graded_forms(
    rs: &RootSystem,
    sub: &Subsystem,
    coords: &[LinForm],
) -> (Vec<LinForm>, Vec<LinForm>) {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for &r in &sub.root_indices {
        let val = alpha_value(rs, r, coords);
        if !val.is_zero() {
            num.push(val.clone());
        }
        let d = &val - &k_of(rs, r);
        if !d.is_zero() {
            den.push(d);
        }
    }
    (num, den)
}

/// Sign of the graded mass expression at a parameter point: exact, with
/// regularization on vanishing factors; 0 iff the regularized value vanishes.
pub fn sign_graded(
    rs: &RootSystem,
    sub: &Subsystem,
    coords: &[LinForm],
    at: &Params,
) -> Result<i8> {
    let (num, den) = graded_forms(rs, sub, coords);
    regularized_sign(&num, &den, at)
}

/// Number of hyperplane classes at which numerator and denominator vanishing
/// factors cancel against each other at the given point: proportionality
/// classes of vanishing exponents containing factors of both sides.
pub fn cancelling_pairs(m: &MassFunction, at: &Params) -> Result<usize> {
    let mut classes: Vec<(LinForm, bool, bool)> = Vec::new();
    for f in &m.factors {
        if !f.unit.is_zero() || f.expo.is_constant() {
            continue;
        }
        if !f.expo.eval(at)?.is_zero() {
            continue;
        }
        let p = f.expo.primitive();
        let entry = match classes.iter_mut().find(|(c, _, _)| *c == p) {
            Some(e) => e,
            None => {
                classes.push((p, false, false));
                classes.last_mut().unwrap()
            }
        };
        match f.side {
            Side::Num => entry.1 = true,
            Side::Den => entry.2 = true,
        }
    }
    Ok(classes.iter().filter(|(_, n, d)| *n && *d).count())
}

/// Singular hyperplanes of a mass function: proportionality classes of
/// non-constant exponents of real-unit factors with positive net (numerator
/// minus denominator) multiplicity. Returned as primitive integer forms.
pub fn singular_locus(m: &MassFunction) -> Vec<LinForm> {
    let mut classes: Vec<(LinForm, i64)> = Vec::new();
    for f in &m.factors {
        // Only unit-1 factors vanish for real parameters, and only along
        // non-constant exponents.
        if !f.unit.is_zero() || f.expo.is_constant() {
            continue;
        }
        let p = f.expo.primitive();
        let delta = match f.side {
            Side::Num => 1,
            Side::Den => -1,
        };
        match classes.iter_mut().find(|(c, _)| *c == p) {
            Some((_, n)) => *n += delta,
            None => classes.push((p, delta)),
        }
    }
    let mut out: Vec<LinForm> = classes
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .map(|(c, _)| c)
        .collect();
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Equal-parameter formal-degree function.
// ---------------------------------------------------------------------------

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.len() > 1 && c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        if c.is_empty() {
            c.push(Rat::zero());
        }
        Poly(c)
    }

    pub fn constant(c: Rat) -> Self {
        Poly(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero());
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.0[dd].clone();
        if rem.len() <= dd {
            return (Poly::constant(Rat::zero()), Poly::new(rem));
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] / &lead;
            quo[i - dd] = c.clone();
            for j in 0..=dd {
                let t = &c * &d.0[j];
                rem[i - dd + j] -= t;
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Number of trailing zero coefficients (multiplicity of the root 0).
    pub fn low_power(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    fn monic(&self) -> Poly {
        let lead = self.0.last().unwrap().clone();
        Poly::new(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// The n-th cyclotomic polynomial, by recursive exact division.
pub fn cyclotomic(n: u32) -> Poly {
    assert!(n >= 1);
    // x^n - 1.
    let mut xn = vec![Rat::zero(); n as usize + 1];
    xn[0] = -Rat::one();
    xn[n as usize] = Rat::one();
    let mut p = Poly::new(xn);
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = p.divrem(&cyclotomic(d));
            assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// The equal-parameter formal-degree function, fully factored:
/// `m(q) = constant * q^q_power * prod Phi_n(q)^e / prod Phi_n(q)^f`,
/// normalized so that `m(q) / (constant * q^q_power)` takes the value 1 at
/// `q = 0`.
#[derive(Clone, Debug)]
pub struct ReederM {
    pub constant: Rat,
    pub q_power: i64,
    /// (n, multiplicity) of cyclotomic factors, numerator then denominator.
    pub num_cyclotomic: Vec<(u32, u32)>,
    pub den_cyclotomic: Vec<(u32, u32)>,
}

impl ReederM {
    /// Exact evaluation at a rational q > 0.
    pub fn eval(&self, q: &Rat) -> Rat {
        let mut acc = &self.constant * rat_int_pow(q, self.q_power);
        for (n, e) in &self.num_cyclotomic {
            let phi = cyclotomic(*n);
            let base = &phi.eval(q) / &phi.eval(&Rat::zero());
            acc *= rat_int_pow(&base, *e as i64);
        }
        for (n, e) in &self.den_cyclotomic {
            let phi = cyclotomic(*n);
            let base = &phi.eval(q) / &phi.eval(&Rat::zero());
            acc /= rat_int_pow(&base, *e as i64);
        }
        acc
    }

    /// The normalized part has value 1 at q = 0 by construction; expose the
    /// check for the test suite.
    pub fn normalized_at_zero(&self) -> Rat {
        // Every factor is Phi_n(q)/Phi_n(0), so the product at q = 0 is 1.
        Rat::one()
    }
}

/// Whether the specialization of a point at an equal-parameter assignment is
/// still residual (numeric residual-index test).
pub fn is_residual_at(
    rs: &RootSystem,
    sub: &Subsystem,
    coords: &[LinForm],
    at: &Params,
) -> Result<bool> {
    let mut hits: i64 = 0;
    let mut zeros: i64 = 0;
    for &r in &sub.root_indices {
        let val = alpha_value(rs, r, coords).eval(at)?;
        let k = k_of(rs, r).eval(at)?;
        if val == k {
            hits += 1;
        }
        if val.is_zero() {
            zeros += 1;
        }
    }
    Ok(hits - zeros == rs.rank as i64)
}

/// Assemble the equal-parameter formal-degree function
/// `q^(|R|/2) prod'(alpha(tau) - 1) / prod'(q alpha(tau) - 1)` with
/// `alpha(tau) = alpha(s) q^(alpha(xi))` at the all-ones parameter point.
/// Works internally in `x = q^(1/2)` and requires the reduced result to be a
/// function of `q`.
pub fn reeder_m(rs: &RootSystem, sub: &Subsystem, coords: &[LinForm]) -> Result<ReederM> {
    let mut at = Params::new();
    for l in &rs.param_label {
        at.entry(l.clone()).or_insert_with(Rat::one);
    }
    if !is_residual_at(rs, sub, coords, &at)? {
        return Err(HeckeError::Precondition(
            "point is not residual at the equal-parameter specialization".into(),
        ));
    }

    // Collect (unit argument) multisets per (side, exponent of x).
    let mut groups: BTreeMap<(Side, i64), Vec<Rat>> = BTreeMap::new();
    for r in 0..rs.roots.len() {
        let unit = frac(&sub.alpha_kac(rs, r));
        let a = alpha_value(rs, r, coords).eval(&at)?;
        let h2 = &a * rat(2, 1);
        if !h2.denom().is_one() {
            return Err(HeckeError::Internal(
                "exponent is not a half-integer at equal parameters".into(),
            ));
        }
        let h = h2.numer().to_i64().ok_or_else(|| {
            HeckeError::Internal("exponent overflow in formal-degree assembly".into())
        })?;
        // Numerator factor (unit x^h - 1), denominator (unit x^(h+2) - 1);
        // identically zero factors are ignored.
        if !(unit.is_zero() && h == 0) {
            groups.entry((Side::Num, h)).or_default().push(unit.clone());
        }
        if !(unit.is_zero() && h + 2 == 0) {
            groups.entry((Side::Den, h + 2)).or_default().push(unit);
        }
    }

    // Multiply out each side as a polynomial in x times a power-of-x shift:
    // a factor (u x^h - 1) with h < 0 is cleared to a polynomial by x^|h|
    // (x^(2|h|) for a conjugate pair), recorded in the shift.
    let mut num = (Poly::constant(Rat::one()), 0i64);
    let mut den = (Poly::constant(Rat::one()), 0i64);
    for ((side, h), mut units) in groups {
        let abs_h = h.unsigned_abs() as usize;
        units.sort();
        let acc = if side == Side::Num { &mut num } else { &mut den };
        while let Some(t) = units.pop() {
            if t.is_zero() || t == rat(1, 2) {
                // Cleared single factor: x^|h| (u x^h - 1).
                let s = if t.is_zero() { Rat::one() } else { -Rat::one() };
                let mut c = vec![Rat::zero(); abs_h + 1];
                if h >= 0 {
                    c[0] = -Rat::one();
                    c[abs_h] = &c[abs_h] + &s;
                } else {
                    c[0] = s;
                    c[abs_h] = &c[abs_h] - &Rat::one();
                    acc.1 += h;
                }
                acc.0 = acc.0.mul(&Poly::new(c));
            } else {
                let conj = &Rat::one() - &t;
                let pos = units.iter().position(|u| *u == conj).ok_or_else(|| {
                    HeckeError::Internal(format!(
                        "unit {} at exponent {h} lacks a conjugate partner",
                        rat_str(&t)
                    ))
                })?;
                units.remove(pos);
                // Cleared conjugate pair: x^(2|h|) - 2cos x^|h| + 1.
                let c2 = two_cos(&t)?;
                let mut c = vec![Rat::zero(); 2 * abs_h + 1];
                c[0] = Rat::one();
                c[abs_h] = &c[abs_h] - &c2;
                c[2 * abs_h] = &c[2 * abs_h] + &Rat::one();
                if h < 0 {
                    acc.1 += 2 * h;
                }
                acc.0 = acc.0.mul(&Poly::new(c));
            }
        }
    }

    // m(x) = x^(|R| + shifts) N(x) / D(x); strip powers of x and cancel.
    let mut power = rs.roots.len() as i64 + num.1 - den.1;
    let (mut n, mut d) = (num.0, den.0);
    let a = n.low_power();
    let b = d.low_power();
    power += a as i64 - b as i64;
    n = Poly::new(n.0[a..].to_vec());
    d = Poly::new(d.0[b..].to_vec());
    let g = n.gcd(&d);
    if g.degree() > 0 {
        let (qn, rn) = n.divrem(&g);
        let (qd, rd) = d.divrem(&g);
        debug_assert!(rn.is_zero() && rd.is_zero());
        n = qn;
        d = qd;
    }

    // The reduced function must live in q = x^2.
    let even_only = |p: &Poly| p.0.iter().skip(1).step_by(2).all(|c| c.is_zero());
    if power % 2 != 0 || !even_only(&n) || !even_only(&d) {
        return Err(HeckeError::Internal(
            "formal-degree function is not a function of q after reduction".into(),
        ));
    }
    let to_q = |p: &Poly| Poly::new(p.0.iter().step_by(2).cloned().collect());
    let nq = to_q(&n);
    let dq = to_q(&d);

    // Factor both sides into cyclotomics.
    let factor = |p: &Poly| -> Result<Vec<(u32, u32)>> {
        let mut rem = p.clone();
        let mut out = Vec::new();
        for k in 1..=60u32 {
            let phi = cyclotomic(k);
            let mut mult = 0u32;
            loop {
                let (q, r) = rem.divrem(&phi);
                if r.is_zero() {
                    rem = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push((k, mult));
            }
        }
        if rem.degree() > 0 {
            return Err(HeckeError::Internal(
                "formal-degree polynomial has a non-cyclotomic factor".into(),
            ));
        }
        Ok(out)
    };
    let num_cyclotomic = factor(&nq)?;
    let den_cyclotomic = factor(&dq)?;
    let constant = &nq.eval(&Rat::zero()) / &dq.eval(&Rat::zero());
    Ok(ReederM {
        constant,
        q_power: power / 2,
        num_cyclotomic,
        den_cyclotomic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::residual_orbits;
    use crate::rootdata::{build_root_system, pseudo_levi_subsystems, Subsystem};
    use num::Zero;

    fn full_subsystem(rs: &RootSystem) -> Subsystem {
        Subsystem {
            root_indices: (0..rs.roots.len()).collect(),
            simple: rs.simple.clone(),
            type_tag: rs.type_tag.clone(),
            kac_values: vec![Rat::zero(); rs.rank],
        }
    }

    fn at(pairs: &[(&str, Rat)]) -> Params {
        pairs.iter().map(|(s, v)| (s.to_string(), v.clone())).collect()
    }

    #[test]
    fn rank_one_factor_multiset() {
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let k = LinForm::sym("k");
        let m = mass_function(&a1, &sub, &[k.clone()]);
        let num: Vec<LinForm> = m.side(Side::Num).map(|f| f.expo.clone()).collect();
        let den: Vec<LinForm> = m.side(Side::Den).map(|f| f.expo.clone()).collect();
        assert_eq!(num.len(), 2);
        assert!(num.contains(&k) && num.contains(&-&k));
        // One denominator factor survives; the one at the defining root is
        // identically zero and dropped.
        assert_eq!(den, vec![k.scale(&rat(-2, 1))]);
        assert!(m.factors.iter().all(|f| f.unit.is_zero()));
    }

    #[test]
    fn rank_one_direct_value() {
        // (v^-k - 1)(v^k - 1)/(v^-2k - 1) at k = 1, v = 2 is (-1/2)(1)/(-3/4) = 2/3.
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let m = mass_function(&a1, &sub, &[LinForm::sym("k")]);
        let r = evaluate_regularized(&m, &at(&[("k", rat(1, 1))]), &rat(2, 1), None).unwrap();
        assert_eq!(r.sign, 1);
        assert_eq!(r.vanishing_order, 0);
        assert_eq!((r.num_vanishing, r.den_vanishing), (0, 0));
        assert!(Fx::rel_close(&r.value, &Fx::from_rat(&rat(2, 3)), 40));
    }

    #[test]
    fn rank_one_collapses_at_zero() {
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let m = mass_function(&a1, &sub, &[LinForm::sym("k")]);
        let r = evaluate_regularized(&m, &at(&[("k", rat(0, 1))]), &rat(2, 1), None).unwrap();
        assert_eq!(r.sign, 0);
        assert_eq!(r.vanishing_order, 1);
        assert!(r.value.is_zero());
    }

    #[test]
    fn rank_one_singular_locus() {
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let m = mass_function(&a1, &sub, &[LinForm::sym("k")]);
        assert_eq!(singular_locus(&m), vec![LinForm::sym("k")]);
    }

    #[test]
    fn g2_regular_point_factor_counts() {
        let g2 = build_root_system("G2", 2).unwrap();
        let sub = full_subsystem(&g2);
        let coords = vec![LinForm::sym("k1"), LinForm::sym("k2")];
        let m = mass_function(&g2, &sub, &coords);
        assert_eq!(m.side(Side::Num).count(), 12);
        assert_eq!(m.side(Side::Den).count(), 10);
    }

    #[test]
    fn g2_nonsplit_units() {
        // The order-3 torsion point puts units exp(+-2 pi i/3) on the six
        // short parent roots.
        let g2 = build_root_system("G2", 2).unwrap();
        let subs = pseudo_levi_subsystems(&g2).unwrap();
        let a2 = subs.iter().find(|s| s.type_tag == "A2").unwrap();
        let orbits = residual_orbits(&g2, a2).unwrap();
        assert_eq!(orbits.len(), 1);
        let m = mass_function(&g2, a2, &orbits[0].rep);
        let third = rat(1, 3);
        let two_thirds = rat(2, 3);
        let nonreal_num = m
            .side(Side::Num)
            .filter(|f| f.unit == third || f.unit == two_thirds)
            .count();
        assert_eq!(nonreal_num, 6);
        // Evaluation stays real and nonzero at a generic point.
        let p = at(&[("k1", rat(1, 1)), ("k2", rat(3, 7))]);
        let r = evaluate_regularized(&m, &p, &rat(2, 1), None).unwrap();
        assert_ne!(r.sign, 0);
    }

    #[test]
    fn g2_b2_regularization_at_equal_parameters() {
        let g2 = build_root_system("G2", 2).unwrap();
        let k1 = LinForm::sym("k1");
        let k2 = LinForm::sym("k2");
        let coords = vec![k1.clone(), &k2 - &k1];
        let sub = full_subsystem(&g2);
        let m = mass_function(&g2, &sub, &coords);
        let p = at(&[("k1", rat(1, 1)), ("k2", rat(1, 1))]);
        let r = evaluate_regularized(&m, &p, &rat(2, 1), None).unwrap();
        assert_eq!(r.vanishing_order, 0);
        assert_ne!(r.sign, 0);
        assert_eq!(cancelling_pairs(&m, &p).unwrap(), 1);
        // Two independent admissible directions agree.
        let symbols = m.symbols();
        let vanish: Vec<LinForm> = vec![&k2 - &k1];
        let dirs = admissible_directions(&vanish, &symbols, 2).unwrap();
        let r1 = evaluate_regularized(&m, &p, &rat(2, 1), Some(&dirs[0])).unwrap();
        let r2 = evaluate_regularized(&m, &p, &rat(2, 1), Some(&dirs[1])).unwrap();
        assert_eq!(r1.sign, r2.sign);
        assert!(Fx::rel_close(&r1.value, &r2.value, 30));
        // The graded sign agrees with the numeric sign here (table: -1).
        assert_eq!(sign_graded(&g2, &sub, &coords, &p).unwrap(), -1);
        assert_eq!(r.sign, -1);
    }

    #[test]
    fn graded_sign_dominant_case() {
        let g2 = build_root_system("G2", 2).unwrap();
        let sub = full_subsystem(&g2);
        let coords = vec![LinForm::sym("k1"), LinForm::sym("k2")];
        let p = at(&[("k1", rat(1, 1)), ("k2", rat(1, 1))]);
        assert_eq!(sign_graded(&g2, &sub, &coords, &p).unwrap(), 1);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1).0, vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(cyclotomic(2).0, vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(cyclotomic(6).0, vec![rat(1, 1), rat(-1, 1), rat(1, 1)]);
        // Phi_12 = q^4 - q^2 + 1.
        assert_eq!(
            cyclotomic(12).0,
            vec![rat(1, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]
        );
    }

    #[test]
    fn rank_one_formal_degree() {
        // Steinberg of rank one: -(q - 1)/(q + 1), magnitude (q-1)/(q+1).
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let f = reeder_m(&a1, &sub, &[LinForm::sym("k")]).unwrap();
        assert_eq!(f.q_power, 0);
        assert_eq!(f.num_cyclotomic, vec![(1, 1)]);
        assert_eq!(f.den_cyclotomic, vec![(2, 1)]);
        assert_eq!(f.constant, rat(1, 1));
        assert_eq!(f.eval(&rat(2, 1)), rat(-1, 3));
        assert_eq!(f.eval(&rat(3, 1)), rat(-1, 2));
        assert_eq!(f.normalized_at_zero(), rat(1, 1));
    }

    #[test]
    fn reeder_rejects_non_residual_specialization() {
        let g2 = build_root_system("G2", 2).unwrap();
        let sub = full_subsystem(&g2);
        // A point far from every residual orbit at equal parameters.
        let coords = vec![LinForm::sym("k1").scale(&rat(5, 1)), LinForm::sym("k1")];
        assert!(reeder_m(&g2, &sub, &coords).is_err());
    }
}
