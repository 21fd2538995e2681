//! The digit-interleaving symplectomorphism that squeezes a ball into a cylinder.
//!
//! On `(x1, y1, x2, y2)` with `x1 = a0 + sum a_i p^-i`, `x2 = c0 + sum c_i p^-i`
//! (and `b`, `d` for the `y` coordinates) it returns
//! `(a0, b0, c0 + sum(a_i p^-(2i-1) + c_i p^-2i), d0 + sum(b_i p^-(2i-1) + d_i p^-2i))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{exact_scaled, PadicContext, PadicNumber};
use crate::shape::Radius;

/// Fractional digits at orders -1, -2, ..., down to the valuation.
pub fn fractional_digits(x: &PadicNumber) -> Result<Vec<u32>> {
    let low = x.valuation().map_or(0, |v| v.min(0));
    if !x.is_exact() && x.abs_precision() < 0 {
        return Err(Error::InsufficientPrecision("fractional digits are not all known".into()));
    }
    (1..=-low).map(|i| x.digit(-i)).collect()
}

/// `sum digits[j] p^-(j+1)` as an exact value.
fn from_fraction_digits(ctx: PadicContext, digits: &[u32]) -> PadicNumber {
    let mut q = BigRational::zero();
    for (j, d) in digits.iter().enumerate() {
        q += exact_scaled(BigInt::from(*d), -(j as i64 + 1), ctx.p());
    }
    PadicNumber::from_rational(q, ctx)
}

fn interleave(odd: &[u32], even: &[u32]) -> Vec<u32> {
    let len = 2 * odd.len().max(even.len());
    let mut out = vec![0u32; len];
    for (i, d) in odd.iter().enumerate() {
        out[2 * i] = *d;
    }
    for (i, d) in even.iter().enumerate() {
        out[2 * i + 1] = *d;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn deinterleave(digits: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let odd = digits.iter().step_by(2).copied().collect();
    let even = digits.iter().skip(1).step_by(2).copied().collect();
    (odd, even)
}

fn phi4(x1: &PadicNumber, y1: &PadicNumber, x2: &PadicNumber, y2: &PadicNumber) -> Result<[PadicNumber; 4]> {
    let ctx = x1.ctx();
    let (a, b, c, d) = (
        fractional_digits(x1)?,
        fractional_digits(y1)?,
        fractional_digits(x2)?,
        fractional_digits(y2)?,
    );
    let a0 = x1.integer_part()?;
    let b0 = y1.integer_part()?;
    let c0 = x2.integer_part()?;
    let d0 = y2.integer_part()?;
    Ok([
        a0,
        b0,
        c0 + from_fraction_digits(ctx, &interleave(&a, &c)),
        d0 + from_fraction_digits(ctx, &interleave(&b, &d)),
    ])
}

fn phi4_inverse(x1: &PadicNumber, y1: &PadicNumber, x2: &PadicNumber, y2: &PadicNumber) -> Result<[PadicNumber; 4]> {
    if !x1.is_integral() || !y1.is_integral() {
        return Err(Error::Domain("the inverse needs integral first coordinates".into()));
    }
    let ctx = x1.ctx();
    let (a, c) = deinterleave(&fractional_digits(x2)?);
    let (b, d) = deinterleave(&fractional_digits(y2)?);
    Ok([
        x1 + &from_fraction_digits(ctx, &a),
        y1 + &from_fraction_digits(ctx, &b),
        x2.integer_part()? + from_fraction_digits(ctx, &c),
        y2.integer_part()? + from_fraction_digits(ctx, &d),
    ])
}

fn apply_at(m: &[PadicNumber], at: usize, inverse: bool) -> Result<Vec<PadicNumber>> {
    if m.len() < at + 4 || m.len() % 2 != 0 {
        return Err(Error::Dimension(format!("point of length {} (need even length >= 4)", m.len())));
    }
    let f = if inverse { phi4_inverse } else { phi4 };
    let out = f(&m[at], &m[at + 1], &m[at + 2], &m[at + 3])?;
    let mut v = m.to_vec();
    for (k, x) in out.into_iter().enumerate() {
        v[at + k] = x;
    }
    Ok(v)
}

/// `Phi` on the first two coordinate pairs; the rest is unchanged.
pub fn phi_forward(m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    apply_at(m, 0, false)
}

/// Inverse of `Phi`, defined on `Cyl(1)`.
pub fn phi_inverse(m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    apply_at(m, 0, true)
}

/// `Phi` applied to pairs (1,2), then (2,3), ..., leaving only the last pair non-integral.
pub fn iterated_squeeze(m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    let n = m.len() / 2;
    let mut v = m.to_vec();
    for j in 0..n.saturating_sub(1) {
        v = apply_at(&v, 2 * j, false)?;
    }
    Ok(v)
}

pub fn iterated_squeeze_inverse(m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    let n = m.len() / 2;
    let mut v = m.to_vec();
    for j in (0..n.saturating_sub(1)).rev() {
        v = apply_at(&v, 2 * j, true)?;
    }
    Ok(v)
}

/// One factor `Ball^dim(radius)` of a product of balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallFactor {
    pub dim: usize,
    pub radius: Radius,
}

/// Images of `Ball^{2n}(r)` under `Phi` or its inverse, as products of balls.
pub fn phi_image_formulas(r: Radius, n: usize, inverse: bool) -> Vec<BallFactor> {
    let e = r.0;
    if e <= 0 {
        return vec![BallFactor { dim: 2 * n, radius: r }];
    }
    let mut out = if !inverse {
        vec![BallFactor { dim: 2, radius: Radius(0) }, BallFactor { dim: 2, radius: Radius(2 * e) }]
    } else {
        let k = e.div_euclid(2);
        let first = if e % 2 == 0 { k } else { k + 1 };
        vec![BallFactor { dim: 2, radius: Radius(first) }, BallFactor { dim: 2, radius: Radius(k) }]
    };
    if n > 2 {
        out.push(BallFactor { dim: 2 * n - 4, radius: r });
    }
    out
}

pub fn in_ball_product(factors: &[BallFactor], m: &[PadicNumber]) -> bool {
    let mut at = 0;
    for f in factors {
        if !m[at..at + f.dim].iter().all(|x| f.radius.admits(x)) {
            return false;
        }
        at += f.dim;
    }
    at == m.len()
}
