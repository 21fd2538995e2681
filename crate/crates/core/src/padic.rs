//! p-adic numbers with explicit precision tracking.
//!
//! A value is a valuation, a window of base-p digits starting at that
//! valuation, and an absolute precision `K` meaning the value is known modulo
//! `p^K`. Values built from rationals additionally keep the rational, so
//! arithmetic between them is exact and only the digit window is truncated.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicContext {
    p: u32,
    precision: u32,
}

impl PadicContext {
    pub fn new(p: u32, precision: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if precision == 0 {
            return Err(Error::BadPrecision);
        }
        Ok(PadicContext { p, precision })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of unit digits kept for exact values.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Order of the series domain `p^d Z_p`: 2 for p = 2, else 1.
    pub fn d(&self) -> i64 {
        if self.p == 2 {
            2
        } else {
            1
        }
    }

    pub fn with_precision(self, precision: u32) -> Result<Self> {
        PadicContext::new(self.p, precision)
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::from_rational(BigRational::zero(), *self)
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber::from_rational(BigRational::one(), *self)
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_rational(BigRational::from_integer(n.into()), *self)
    }

    pub fn ratio(&self, num: i64, den: i64) -> PadicNumber {
        PadicNumber::from_ratio(num.into(), den.into(), *self).expect("nonzero denominator")
    }

    /// `p^e` as an exact value; `e` may be negative.
    pub fn pow_p(&self, e: i64) -> PadicNumber {
        let q = if e >= 0 {
            BigRational::from_integer(ppow(self.p, e as u64))
        } else {
            BigRational::new(BigInt::one(), ppow(self.p, (-e) as u64))
        };
        PadicNumber::from_rational(q, *self)
    }

    pub fn parse(&self, s: &str) -> Result<PadicNumber> {
        crate::literal::parse_literal(s, *self)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub(crate) fn ppow(p: u32, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Splits `n != 0` as `p^v * m` with `p` not dividing `m`.
pub(crate) fn strip_p(n: &BigInt, p: u32) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn rational_valuation(q: &BigRational, p: u32) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(strip_p(q.numer(), p).0 - strip_p(q.denom(), p).0)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one() || g.gcd == -BigInt::one());
    (g.x * g.gcd).mod_floor(m)
}

/// Unit part of a nonzero rational reduced modulo `p^rel`.
fn rational_unit_mod(q: &BigRational, p: u32, rel: i64) -> BigInt {
    let (_, a) = strip_p(q.numer(), p);
    let (_, b) = strip_p(q.denom(), p);
    if rel <= 0 {
        return BigInt::zero();
    }
    let m = ppow(p, rel as u64);
    (a * mod_inverse(&b, &m)).mod_floor(&m)
}

pub(crate) fn to_digits(n: &BigInt, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    let n = n.to_biguint().expect("nonnegative");
    if p <= 256 {
        out.extend(n.to_radix_le(p).into_iter().map(|d| d as u32));
        if n.is_zero() {
            out.clear();
        }
    } else {
        let mut m = n;
        while !m.is_zero() {
            out.push((&m % p).to_u32().unwrap());
            m /= p;
        }
    }
    out.resize(len, 0);
    out
}

pub(crate) fn from_digits(digits: &[u32], p: u32) -> BigInt {
    let mut acc = BigUint::zero();
    for &d in digits.iter().rev() {
        acc = acc * p + d;
    }
    BigInt::from_biguint(Sign::Plus, acc)
}

/// Element of `Q_p` known modulo `p^abs_precision`.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    ctx: PadicContext,
    valuation: Option<i64>,
    digits: Vec<u32>,
    abs_precision: i64,
    exact: Option<BigRational>,
}

impl PadicNumber {
    /// Exact value; the digit window holds `ctx.precision()` unit digits.
    pub fn from_rational(q: BigRational, ctx: PadicContext) -> Self {
        let n = ctx.precision as i64;
        match rational_valuation(&q, ctx.p) {
            None => PadicNumber {
                ctx,
                valuation: None,
                digits: vec![],
                abs_precision: n,
                exact: Some(q),
            },
            Some(v) => {
                let unit = rational_unit_mod(&q, ctx.p, n);
                PadicNumber {
                    ctx,
                    valuation: Some(v),
                    digits: to_digits(&unit, ctx.p, n as usize),
                    abs_precision: v + n,
                    exact: Some(q),
                }
            }
        }
    }

    pub fn from_ratio(num: BigInt, den: BigInt, ctx: PadicContext) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_rational(BigRational::new(num, den), ctx))
    }

    /// Value of `q` modulo `p^abs_precision`, without exact backing.
    pub fn approx_rational(q: &BigRational, ctx: PadicContext, abs_precision: i64) -> Self {
        match rational_valuation(q, ctx.p) {
            None => Self::zero_mod(ctx, abs_precision),
            Some(v) => Self::from_scaled(
                ctx,
                rational_unit_mod(q, ctx.p, abs_precision - v),
                v,
                abs_precision,
            ),
        }
    }

    pub fn zero_mod(ctx: PadicContext, abs_precision: i64) -> Self {
        PadicNumber { ctx, valuation: None, digits: vec![], abs_precision, exact: None }
    }

    /// The value `m * p^shift` known modulo `p^abs_precision`.
    pub fn from_scaled(ctx: PadicContext, m: BigInt, shift: i64, abs_precision: i64) -> Self {
        if abs_precision <= shift {
            return Self::zero_mod(ctx, abs_precision);
        }
        let modulus = ppow(ctx.p, (abs_precision - shift) as u64);
        let m = m.mod_floor(&modulus);
        if m.is_zero() {
            return Self::zero_mod(ctx, abs_precision);
        }
        let (s, u) = strip_p(&m, ctx.p);
        let v = shift + s;
        PadicNumber {
            ctx,
            valuation: Some(v),
            digits: to_digits(&u, ctx.p, (abs_precision - v) as usize),
            abs_precision,
            exact: None,
        }
    }

    /// Builds `sum digits[i] p^(lowest_order + i)` known modulo `p^abs_precision`.
    pub fn from_digits(
        ctx: PadicContext,
        lowest_order: i64,
        digits: &[u32],
        abs_precision: i64,
    ) -> Self {
        Self::from_scaled(ctx, from_digits(digits, ctx.p), lowest_order, abs_precision)
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p
    }

    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn abs_precision(&self) -> i64 {
        self.abs_precision
    }

    /// Absolute precision, `None` for exact values.
    pub fn precision_bound(&self) -> Option<i64> {
        if self.exact.is_some() {
            None
        } else {
            Some(self.abs_precision)
        }
    }

    /// Unit digits in the window, lowest order first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// Zero at the available precision.
    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// `|x|_p = p^-v` as a rational; zero for zero.
    pub fn abs_value(&self) -> BigRational {
        match self.valuation {
            None => BigRational::zero(),
            Some(v) => self.ctx.pow_p(-v).exact.unwrap(),
        }
    }

    /// Valuation with zero mapped to its precision bound (a lower bound on the true order).
    pub(crate) fn order_lower_bound(&self) -> i64 {
        match self.valuation {
            Some(v) => v,
            None => {
                if self.exact.is_some() {
                    i64::MAX / 4
                } else {
                    self.abs_precision
                }
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.order_lower_bound() >= 0
    }

    /// Digit at the given order.
    pub fn digit(&self, order: i64) -> Result<u32> {
        if let Some(q) = &self.exact {
            let v = match self.valuation {
                None => return Ok(0),
                Some(v) => v,
            };
            if order < v {
                return Ok(0);
            }
            if order < self.abs_precision {
                return Ok(self.digits[(order - v) as usize]);
            }
            let u = rational_unit_mod(q, self.ctx.p, order - v + 1);
            let d = u / ppow(self.ctx.p, (order - v) as u64);
            return Ok(d.to_u32().unwrap());
        }
        if order >= self.abs_precision {
            return Err(Error::InsufficientPrecision(format!(
                "digit at order {} of a value known mod p^{}",
                order, self.abs_precision
            )));
        }
        match self.valuation {
            Some(v) if order >= v => Ok(self.digits[(order - v) as usize]),
            _ => Ok(0),
        }
    }

    /// `sum_{i<count} digit(order+i) p^i`.
    pub fn digit_block(&self, order: i64, count: u32) -> Result<u32> {
        let mut acc = 0u64;
        for i in (0..count as i64).rev() {
            acc = acc * self.ctx.p as u64 + self.digit(order + i)? as u64;
        }
        Ok(acc as u32)
    }

    /// Unit part modulo `p^rel`. Requires a nonzero value.
    pub fn unit_mod(&self, rel: i64) -> Result<BigInt> {
        let v = self.valuation.ok_or(Error::DivisionByZero)?;
        if let Some(q) = &self.exact {
            return Ok(rational_unit_mod(q, self.ctx.p, rel));
        }
        let have = self.abs_precision - v;
        if rel > have {
            return Err(Error::InsufficientPrecision(format!(
                "{} unit digits requested, {} known",
                rel, have
            )));
        }
        Ok(from_digits(&self.digits[..rel.max(0) as usize], self.ctx.p))
    }

    /// Truncation to absolute precision at most `k`; drops exactness.
    pub fn with_abs_precision(&self, k: i64) -> Self {
        if let Some(q) = &self.exact {
            return Self::approx_rational(q, self.ctx, k);
        }
        let k = min(k, self.abs_precision);
        match self.valuation {
            None => Self::zero_mod(self.ctx, k),
            Some(v) => {
                Self::from_scaled(self.ctx, self.unit_mod((k - v).max(0)).unwrap(), v, k)
            }
        }
    }

    fn check_prime(&self, other: &Self) {
        if self.ctx.p != other.ctx.p {
            panic!("{}", Error::PrimeMismatch(self.ctx.p, other.ctx.p));
        }
    }

    fn merged_ctx(&self, other: &Self) -> PadicContext {
        self.check_prime(other);
        if self.ctx.precision >= other.ctx.precision {
            self.ctx
        } else {
            other.ctx
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        let ctx = self.merged_ctx(other);
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Self::from_rational(a + b, ctx);
        }
        let k = match (self.precision_bound(), other.precision_bound()) {
            (Some(a), Some(b)) => min(a, b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let s = [self.valuation, other.valuation].into_iter().flatten().min();
        let s = match s {
            Some(s) if s < k => s,
            _ => return Self::zero_mod(ctx, k),
        };
        let mut m = BigInt::zero();
        for x in [self, other] {
            if let Some(v) = x.valuation {
                if v < k {
                    m += x.unit_mod(k - v).unwrap() * ppow(ctx.p, (v - s) as u64);
                }
            }
        }
        Self::from_scaled(ctx, m, s, k)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let ctx = self.merged_ctx(other);
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Self::from_rational(a * b, ctx);
        }
        for (x, y) in [(self, other), (other, self)] {
            if x.exact.as_ref().map_or(false, |q| q.is_zero()) {
                let _ = y;
                return ctx.zero();
            }
        }
        let va = self.order_lower_bound();
        let vb = other.order_lower_bound();
        let mut k = i64::MAX;
        if let Some(kb) = other.precision_bound() {
            k = min(k, va + kb);
        }
        if let Some(ka) = self.precision_bound() {
            k = min(k, vb + ka);
        }
        match (self.valuation, other.valuation) {
            (Some(a), Some(b)) => {
                let rel = k - a - b;
                let m = self.unit_mod(rel).unwrap() * other.unit_mod(rel).unwrap();
                Self::from_scaled(ctx, m, a + b, k)
            }
            _ => Self::zero_mod(ctx, k),
        }
    }

    fn neg_impl(&self) -> Self {
        if let Some(q) = &self.exact {
            return Self::from_rational(-q, self.ctx);
        }
        match self.valuation {
            None => self.clone(),
            Some(v) => {
                let rel = self.abs_precision - v;
                Self::from_scaled(self.ctx, -self.unit_mod(rel).unwrap(), v, self.abs_precision)
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let ctx = self.merged_ctx(other);
        let vb = match other.valuation {
            Some(v) => v,
            None if other.is_exact() => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::InsufficientPrecision(format!(
                    "divisor is zero modulo p^{}",
                    other.abs_precision
                )))
            }
        };
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Ok(Self::from_rational(a / b, ctx));
        }
        if self.exact.as_ref().map_or(false, |q| q.is_zero()) {
            return Ok(ctx.zero());
        }
        let va = match self.valuation {
            Some(v) => v,
            None => return Ok(Self::zero_mod(ctx, self.abs_precision - vb)),
        };
        let rel_a = self.precision_bound().map_or(i64::MAX, |k| k - va);
        let rel_b = other.precision_bound().map_or(i64::MAX, |k| k - vb);
        let rel = min(rel_a, rel_b);
        let modulus = ppow(ctx.p, rel.max(0) as u64);
        let ub = other.unit_mod(rel)?;
        let m = self.unit_mod(rel)? * mod_inverse(&ub, &modulus);
        Ok(Self::from_scaled(ctx, m, va - vb, va - vb + rel))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.ctx.one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.ctx.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Equality modulo `p^min(K1, K2)`.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Exact equality, only defined when both sides are rational-backed.
    pub fn exact_eq(&self, other: &Self) -> Option<bool> {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }

    /// Sum of the digits at orders below `order`; a finite, exact sum.
    pub fn low_part(&self, order: i64) -> Result<Self> {
        if let Some(q) = &self.exact {
            if q.is_zero() {
                return Ok(self.clone());
            }
        } else if self.abs_precision < order {
            return Err(Error::InsufficientPrecision(format!(
                "digits below order {} of a value known mod p^{}",
                order, self.abs_precision
            )));
        }
        let v = match self.valuation {
            None => return Ok(self.ctx.zero()),
            Some(v) => v,
        };
        if v >= order {
            return Ok(self.ctx.zero());
        }
        let digits: Vec<u32> = (v..order).map(|o| self.digit(o)).collect::<Result<_>>()?;
        let n = from_digits(&digits, self.ctx.p);
        Ok(Self::from_rational(exact_scaled(n, v, self.ctx.p), self.ctx))
    }

    /// Part of the value at orders `>= order`.
    pub fn high_part(&self, order: i64) -> Result<Self> {
        Ok(self - &self.low_part(order)?)
    }

    pub fn fractional_part(&self) -> Result<Self> {
        self.low_part(0)
    }

    pub fn integer_part(&self) -> Result<Self> {
        self.high_part(0)
    }

    /// Digits at orders `[from, to)`.
    pub fn digit_range(&self, from: i64, to: i64) -> Result<Vec<u32>> {
        (from..to).map(|o| self.digit(o)).collect()
    }

    pub fn to_literal(&self) -> String {
        crate::literal::format_literal(self)
    }
}

pub(crate) fn exact_scaled(n: BigInt, shift: i64, p: u32) -> BigRational {
    if shift >= 0 {
        BigRational::from_integer(n * ppow(p, shift as u64))
    } else {
        BigRational::new(n, ppow(p, (-shift) as u64))
    }
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.eq_at_precision(other)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                self.$imp(rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$imp(rhs)
            }
        }
        impl $tr<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                self.$imp(&rhs)
            }
        }
    };
}

impl PadicNumber {
    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}
