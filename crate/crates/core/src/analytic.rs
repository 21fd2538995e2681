//! Square roots and the exponential, cosine and sine series.

use std::cmp::min;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{mod_inverse, ppow, PadicContext, PadicNumber};

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn is_quadratic_residue(a: u64, p: u32) -> bool {
    let a = a % p as u64;
    a != 0 && pow_mod_u64(a, (p as u64 - 1) / 2, p as u64) == 1
}

/// Number of unit digits a square test needs: 1 for odd p, 3 for p = 2.
fn square_digits(p: u32) -> i64 {
    if p == 2 {
        3
    } else {
        1
    }
}

pub fn is_square(x: &PadicNumber) -> Result<bool> {
    let v = match x.valuation() {
        None => return Ok(true),
        Some(v) => v,
    };
    if v.rem_euclid(2) != 0 {
        return Ok(false);
    }
    let p = x.p();
    let u = x.unit_mod(square_digits(p))?;
    let u: u64 = u.try_into().unwrap();
    Ok(if p == 2 { u == 1 } else { is_quadratic_residue(u, p) })
}

/// The square root of `x` whose leading digit (for p = 2: lowest two digits,
/// a value in {1, 3}) is `lead`.
pub fn sqrt_with_leading_digit(x: &PadicNumber, lead: u32) -> Result<PadicNumber> {
    let ctx = x.ctx();
    let p = ctx.p();
    let v = match x.valuation() {
        None => {
            return Ok(if x.is_exact() {
                ctx.zero()
            } else {
                PadicNumber::zero_mod(ctx, x.abs_precision().div_euclid(2))
            })
        }
        Some(v) => v,
    };
    if !is_square(x)? {
        return Err(Error::NotSquare);
    }
    let have = x.precision_bound().map_or(ctx.precision() as i64 + 1, |k| k - v);
    let r = if p == 2 { have - 1 } else { have };
    let half = v / 2;
    let u = x.unit_mod(have)?;
    let w = if p == 2 {
        if lead != 1 && lead != 3 {
            return Err(Error::BadLeadingDigit(lead));
        }
        let mut w = BigInt::from(lead);
        let mut j = 3i64;
        while j < have {
            let m = ppow(2, (j + 1) as u64);
            if !(&w * &w - &u).mod_floor(&m).is_zero() {
                w += ppow(2, (j - 1) as u64);
            }
            j += 1;
        }
        w
    } else {
        let pb = BigInt::from(p);
        if lead == 0 || lead >= p || !((BigInt::from(lead) * lead - &u).mod_floor(&pb)).is_zero() {
            return Err(Error::BadLeadingDigit(lead));
        }
        let mut w = BigInt::from(lead);
        let mut prec = 1i64;
        while prec < r {
            prec = min(2 * prec, r);
            let m = ppow(p, prec as u64);
            let f = (&w * &w - &u).mod_floor(&m);
            let inv = mod_inverse(&(BigInt::from(2) * &w).mod_floor(&m), &m);
            w = (&w - f * inv).mod_floor(&m);
        }
        w
    };
    Ok(PadicNumber::from_scaled(ctx, w, half, half + r))
}

/// Square root of -1 with the smaller residue as leading digit. Needs p = 1 mod 4.
pub fn sqrt_minus_one(ctx: PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    if p % 4 != 1 {
        return Err(Error::NoSqrtMinusOne(p));
    }
    let r = (1..p).find(|&r| (r as u64 * r as u64 + 1) % p as u64 == 0).unwrap();
    sqrt_with_leading_digit(&ctx.int(-1), r)
}

pub fn sqrt_minus_one_residue(p: u32) -> Option<u32> {
    if p % 4 != 1 {
        return None;
    }
    (1..p).find(|&r| (r as u64 * r as u64 + 1) % p as u64 == 0)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Series {
    Exp,
    Cos,
    Sin,
}

fn check_domain(t: &PadicNumber) -> Result<()> {
    let d = t.ctx().d();
    if let Some(v) = t.valuation() {
        if v < d {
            return Err(Error::OutsideDomain { order: v, d });
        }
    }
    Ok(())
}

fn series(t: &PadicNumber, kind: Series) -> Result<PadicNumber> {
    check_domain(t)?;
    let ctx = t.ctx();
    let p = ctx.p() as i64;
    let n = ctx.precision() as i64;
    let v = match t.valuation() {
        Some(v) => v,
        None => {
            if t.is_exact() {
                return Ok(if kind == Series::Sin { ctx.zero() } else { ctx.one() });
            }
            let k = t.abs_precision();
            return Ok(if kind == Series::Sin {
                PadicNumber::zero_mod(ctx, k)
            } else {
                ctx.one().with_abs_precision(min(k, n))
            });
        }
    };
    let target = if kind == Series::Sin { v + n } else { n };
    let k = t.precision_bound().map_or(target, |kt| min(kt, target));
    let modulus = ppow(ctx.p(), k as u64);
    let unit = t.unit_mod(k - v)?;
    let mut acc = BigInt::zero();
    let mut tpow = BigInt::one();
    let mut inv_fact_unit = BigInt::one();
    let mut fact_val = 0i64;
    let mut i = 0i64;
    loop {
        if i > 0 {
            tpow = (&tpow * &unit).mod_floor(&modulus);
            let (e, w) = crate::padic::strip_p(&BigInt::from(i), ctx.p());
            fact_val += e;
            inv_fact_unit = (&inv_fact_unit * mod_inverse(&w, &modulus)).mod_floor(&modulus);
        }
        let e_i = i * v - fact_val;
        let include = match kind {
            Series::Exp => true,
            Series::Cos => i % 2 == 0,
            Series::Sin => i % 2 == 1,
        };
        if include && e_i < k {
            let sign_neg = match kind {
                Series::Exp => false,
                Series::Cos => (i / 2) % 2 == 1,
                Series::Sin => ((i - 1) / 2) % 2 == 1,
            };
            let m = ppow(ctx.p(), (k - e_i) as u64);
            let mut term = (&tpow * &inv_fact_unit).mod_floor(&m);
            term *= ppow(ctx.p(), e_i as u64);
            if sign_neg {
                acc -= term;
            } else {
                acc += term;
            }
        }
        // v_p(i!) <= (i - 1)/(p - 1), so later terms stay below the target
        let bound = (i + 1) * v - i / (p - 1);
        if i > 0 && bound >= k && i * v - (i - 1) / (p - 1) >= k {
            break;
        }
        i += 1;
    }
    Ok(PadicNumber::from_scaled(ctx, acc, 0, k))
}

pub fn exp(t: &PadicNumber) -> Result<PadicNumber> {
    series(t, Series::Exp)
}

pub fn cos(t: &PadicNumber) -> Result<PadicNumber> {
    series(t, Series::Cos)
}

pub fn sin(t: &PadicNumber) -> Result<PadicNumber> {
    series(t, Series::Sin)
}

/// The unique `t` in `p^d Z_p` with `sin t = s`, from the arcsine series
/// `sum (2n)! / (4^n (n!)^2 (2n+1)) s^(2n+1)`.
pub fn angle_from_sin(s: &PadicNumber) -> Result<PadicNumber> {
    check_domain(s)?;
    let ctx = s.ctx();
    let p = ctx.p();
    let v = match s.valuation() {
        None => return Ok(s.clone()),
        Some(v) => v,
    };
    let k = s.precision_bound().map_or(v + ctx.precision() as i64, |ks| min(ks, v + ctx.precision() as i64));
    let modulus = ppow(p, (k - v).max(1) as u64);
    let unit = s.unit_mod(k - v)?;
    let unit_sq = (&unit * &unit).mod_floor(&modulus);
    // coefficient a_n = p^coef_val * coef_unit, a_0 = 1
    let mut coef_val = 0i64;
    let mut coef_unit = BigInt::one();
    let mut spow = unit.clone();
    let mut acc = BigInt::zero();
    let mut n = 0i64;
    loop {
        if n > 0 {
            let (e1, w1) = crate::padic::strip_p(&BigInt::from(2 * n - 1), p);
            let (e2, w2) = crate::padic::strip_p(&BigInt::from(2 * n), p);
            let (e3, w3) = crate::padic::strip_p(&BigInt::from(2 * n + 1), p);
            coef_val += 2 * e1 - e2 - e3;
            let den = (w2 * w3).mod_floor(&modulus);
            coef_unit = (&coef_unit * &w1 * &w1 * mod_inverse(&den, &modulus)).mod_floor(&modulus);
            spow = (&spow * &unit_sq).mod_floor(&modulus);
        }
        let e = (2 * n + 1) * v + coef_val;
        if e < k {
            let m = ppow(p, (k - e) as u64);
            acc += ((&coef_unit * &spow).mod_floor(&m)) * ppow(p, e as u64);
        }
        let lower = |n: i64| (2 * n + 1) * v - if p == 2 { 2 * n } else { 0 } - ilog(p, 2 * n + 1);
        if n > 0 && lower(n + 1) >= k {
            break;
        }
        n += 1;
    }
    Ok(PadicNumber::from_scaled(ctx, acc, 0, k))
}

/// `floor(log_p(m))` for `m >= 1`.
fn ilog(p: u32, m: i64) -> i64 {
    let mut e = 0;
    let mut x = m / p as i64;
    while x > 0 {
        e += 1;
        x /= p as i64;
    }
    e
}
