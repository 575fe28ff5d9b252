//! Exact coefficients: rationals, and a closed class of expressions in one
//! parameter `t` of the form `Σ R(t) · ∏ L(t)^r` where `R` is a rational
//! function, each `L` is a normalized linear polynomial (or a prime
//! constant) and `r` is a fractional exponent in `(0, 1)`.
//!
//! Every scalar has exactly one such representation, so equality and the
//! zero test are structural.

mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

pub use poly::{Poly, RatFn};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => num::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
    }
}

/// `p/q`, with `q` omitted when it is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// A radical base: a prime constant or a linear polynomial `c0 + c1 t`
/// with coprime integer coefficients, `c1 ≠ 0`, and `c0 > 0` (or `c0 = 0`,
/// `c1 = 1`, i.e. the base `t`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Prime(BigInt),
    Linear(BigInt, BigInt),
}

impl Base {
    fn poly(&self) -> Poly {
        match self {
            Base::Prime(p) => Poly::constant(Rational::from_integer(p.clone())),
            Base::Linear(a, b) => Poly::linear(Rational::from_integer(a.clone()), Rational::from_integer(b.clone())),
        }
    }

    fn value(&self, t: &Rational) -> Rational {
        self.poly().eval(t)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Prime(p) => write!(f, "{p}"),
            Base::Linear(a, b) if a.is_zero() => {
                debug_assert!(b.is_one());
                write!(f, "t")
            }
            Base::Linear(a, b) => {
                let sign = if b.is_negative() { '-' } else { '+' };
                let mag = b.abs();
                if mag.is_one() {
                    write!(f, "({a}{sign}t)")
                } else {
                    write!(f, "({a}{sign}{mag}*t)")
                }
            }
        }
    }
}

/// Product of radicals `∏ base^r`, `0 < r < 1`.
pub type RadicalClass = BTreeMap<Base, Rational>;

fn fmt_class(class: &RadicalClass) -> String {
    class
        .iter()
        .map(|(b, r)| format!("{b}^({})", fmt_rational(r)))
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    terms: BTreeMap<RadicalClass, RatFn>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar::from_ratfn(RatFn::constant(q))
    }

    pub fn from_ratfn(r: RatFn) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(RadicalClass::new(), r);
        }
        Scalar { terms }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::from_ratfn(RatFn::from_poly(p))
    }

    /// The parameter `t`.
    pub fn t() -> Self {
        Scalar::from_poly(Poly::t())
    }

    /// `c0 + c1 t`
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Scalar::from_poly(Poly::linear(c0, c1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// True when the scalar does not depend on `t`.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(class, r)| {
            class.keys().all(|b| matches!(b, Base::Prime(_))) && r.den().is_one() && r.num().degree().unwrap_or(0) == 0
        })
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (class, r) = self.terms.iter().next().unwrap();
                if class.is_empty() {
                    r.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Number of radical classes; division is only defined by scalars with
    /// exactly one.
    pub fn class_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(terms: &mut BTreeMap<RadicalClass, RatFn>, class: RadicalClass, r: RatFn) {
        if r.is_zero() {
            return;
        }
        match terms.get_mut(&class) {
            Some(existing) => {
                let sum = existing.add(&r);
                if sum.is_zero() {
                    terms.remove(&class);
                } else {
                    *existing = sum;
                }
            }
            None => {
                terms.insert(class, r);
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(c, r)| (c.clone(), r.scale(q))).collect() }
    }

    fn mul_classes(a: &RadicalClass, b: &RadicalClass) -> (RadicalClass, Poly) {
        let mut out = a.clone();
        let mut carry = Poly::one();
        for (base, r) in b {
            let e = out.get(base).cloned().unwrap_or_else(Rational::zero) + r;
            if e >= Rational::one() {
                carry = carry.mul(&base.poly());
                let rest = e - Rational::one();
                if rest.is_zero() {
                    out.remove(base);
                } else {
                    out.insert(base.clone(), rest);
                }
            } else {
                out.insert(base.clone(), e);
            }
        }
        (out, carry)
    }

    pub fn pow_int(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.recip()?.pow_int(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse; only single-class scalars are invertible in
    /// this class.
    pub fn recip(&self) -> Result<Scalar> {
        if let Some(conj) = self.quadratic_conjugate() {
            // (a + b√x)(a - b√x) has no radical part
            return Ok(&conj * &(self * &conj).recip()?);
        }
        if self.terms.len() != 1 {
            return Err(if self.is_zero() {
                Error::Domain("division by zero".into())
            } else {
                Error::Unsupported(format!("division by a sum of radical terms: {self}"))
            });
        }
        let (class, r) = self.terms.iter().next().unwrap();
        let mut inv = r.recip().expect("nonzero term");
        let mut out_class = RadicalClass::new();
        for (base, e) in class {
            // base^{-e} = base^{1-e} / base
            inv = inv.div_poly(&base.poly());
            out_class.insert(base.clone(), Rational::one() - e);
        }
        let mut terms = BTreeMap::new();
        terms.insert(out_class, inv);
        Ok(Scalar { terms })
    }

    /// For `a + b·√x` (one radical-free term plus one class of square
    /// roots) returns `a - b·√x`.
    fn quadratic_conjugate(&self) -> Option<Scalar> {
        if self.terms.len() != 2 {
            return None;
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut it = self.terms.iter();
        let (c0, _) = it.next()?;
        let (c1, r1) = it.next()?;
        if !c0.is_empty() || !c1.values().all(|e| *e == half) {
            return None;
        }
        let mut terms = self.terms.clone();
        terms.insert(c1.clone(), r1.neg());
        Some(Scalar { terms })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.recip()?)
    }

    /// `self^(p/q)` for a rational exponent. Integer exponents work on any
    /// scalar; fractional ones require a single term whose rational part
    /// factors into linear factors over ℚ.
    pub fn pow(&self, exponent: &Rational) -> Result<Scalar> {
        if exponent.is_integer() {
            let e = exponent.to_integer().to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
            return self.pow_int(e);
        }
        if self.terms.len() != 1 {
            return Err(if self.is_zero() {
                Error::Domain("fractional power of zero".into())
            } else {
                Error::Unsupported(format!("fractional power of a sum of radical terms: {self}"))
            });
        }
        let (class, r) = self.terms.iter().next().unwrap();
        let mut constant = Rational::one();
        let mut exps: BTreeMap<Base, Rational> = BTreeMap::new();
        let add_exp = |b: Base, e: Rational, exps: &mut BTreeMap<Base, Rational>| {
            *exps.entry(b).or_insert_with(Rational::zero) += e;
        };
        for (sign, p) in [(1i64, r.num()), (-1, r.den())] {
            let (c, factors) = p
                .factor_linear()
                .ok_or_else(|| Error::Unsupported(format!("cannot factor `{p}` into linear factors")))?;
            constant = if sign > 0 { constant * c } else { constant / c };
            for ((a, b), m) in factors {
                add_exp(Base::Linear(a, b), int(sign * m as i64), &mut exps);
            }
        }
        for (base, e) in class {
            add_exp(base.clone(), e.clone(), &mut exps);
        }
        // split the rational constant into sign and prime powers
        let negative = constant.is_negative();
        let constant = constant.abs();
        for (sign, n) in [(1i64, constant.numer().clone()), (-1, constant.denom().clone())] {
            for (p, m) in factor_integer(&n) {
                add_exp(Base::Prime(p), int(sign * m as i64), &mut exps);
            }
        }
        let mut result = Scalar::one();
        if negative {
            let den = exponent.denom();
            if den.is_even() {
                return Err(Error::Domain(format!("even root of a negative constant in {self}")));
            }
            if exponent.numer().is_odd() {
                result = -result;
            }
        }
        let mut out_class = RadicalClass::new();
        let mut ratfn = RatFn::constant(Rational::one());
        for (base, e) in exps {
            let total = e * exponent;
            if total.is_zero() {
                continue;
            }
            let whole = total.floor();
            let frac = &total - &whole;
            let k = whole.to_integer().to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
            let bp = base.poly().pow(k.unsigned_abs() as u32);
            ratfn = if k >= 0 { ratfn.mul_poly(&bp) } else { ratfn.div_poly(&bp) };
            if !frac.is_zero() {
                out_class.insert(base, frac);
            }
        }
        let mut terms = BTreeMap::new();
        terms.insert(out_class, ratfn);
        Ok(&result * &Scalar { terms })
    }

    /// Exact `d/dt`.
    pub fn diff(&self) -> Scalar {
        let mut terms = BTreeMap::new();
        for (class, r) in &self.terms {
            let mut d = r.derivative();
            for (base, e) in class {
                if let Base::Linear(_, b) = base {
                    let factor = RatFn::constant(e * Rational::from_integer(b.clone())).div_poly(&base.poly());
                    d = d.add(&r.mul(&factor));
                }
            }
            Scalar::insert_term(&mut terms, class.clone(), d);
        }
        Scalar { terms }
    }

    /// Evaluate at a rational `t0`. Radicals of negative values are taken as
    /// real odd roots; even roots of negatives are a domain error.
    pub fn eval(&self, t0: &Rational) -> Result<f64> {
        let mut total = 0.0;
        for (class, r) in &self.terms {
            let rv = r.eval(t0).ok_or_else(|| Error::Domain(format!("pole of {self} at t = {}", fmt_rational(t0))))?;
            let mut v = rational_to_f64(&rv);
            for (base, e) in class {
                let bv = base.value(t0);
                v *= real_power(&bv, e)?;
            }
            total += v;
        }
        Ok(total)
    }

    /// Substitute a rational value of `t`, keeping radical constants exact.
    pub fn substitute(&self, t0: &Rational) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (class, r) in &self.terms {
            let rv = r.eval(t0).ok_or_else(|| Error::Domain(format!("pole of {self} at t = {}", fmt_rational(t0))))?;
            let mut term = Scalar::from_rational(rv);
            for (base, e) in class {
                let bv = base.value(t0);
                term = &term * &Scalar::from_rational(bv).pow(e)?;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

fn real_power(base: &Rational, e: &Rational) -> Result<f64> {
    let b = rational_to_f64(base);
    let ef = rational_to_f64(e);
    if b >= 0.0 {
        return Ok(b.powf(ef));
    }
    if e.denom().is_even() {
        return Err(Error::Domain(format!("even root of negative value {}", fmt_rational(base))));
    }
    let mag = (-b).powf(ef);
    Ok(if e.numer().is_odd() { -mag } else { mag })
}

fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut m = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            m += 1;
        }
        if m > 0 {
            out.push((p.clone(), m));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (c, r) in &rhs.terms {
            Scalar::insert_term(&mut terms, c.clone(), r.clone());
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(c, r)| (c.clone(), r.neg())).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (ca, ra) in &self.terms {
            for (cb, rb) in &rhs.terms {
                let (class, carry) = Scalar::mul_classes(ca, cb);
                Scalar::insert_term(&mut terms, class, ra.mul(rb).mul_poly(&carry));
            }
        }
        Scalar { terms }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (class, r) in &self.terms {
            let radical = fmt_class(class);
            if r.den().is_one() && r.num().coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                // single monomial q t^k · radical
                let (k, c) = r.num().coeffs().iter().enumerate().find(|(_, c)| !c.is_zero()).unwrap();
                let neg = c.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                let mag = c.abs();
                let mut parts = Vec::new();
                if !mag.is_one() || (k == 0 && radical.is_empty()) {
                    parts.push(fmt_rational(&mag));
                }
                match k {
                    0 => {}
                    1 => parts.push("t".to_string()),
                    _ => parts.push(format!("t^{k}")),
                }
                if !radical.is_empty() {
                    parts.push(radical);
                }
                write!(f, "{}", parts.join("*"))?;
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                let body = if r.den().is_one() {
                    format!("({})", r.num())
                } else {
                    format!("({})/({})", r.num(), r.den())
                };
                if radical.is_empty() {
                    write!(f, "{body}")?;
                } else {
                    write!(f, "{body}*{radical}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}
