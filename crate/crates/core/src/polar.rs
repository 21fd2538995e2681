//! Discrete-continuous polar coordinates on `Q_p^2 \ {0}`.
//!
//! A point `(x, y)` is described by `z = x^2 + y^2`, two orders `k'`, `k''`,
//! a residue class `(a, b)` in `D_p(1)` and an angle `t` in `p^d Z_p`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::analytic::{angle_from_sin, cos, sin, sqrt_minus_one, sqrt_minus_one_residue, sqrt_with_leading_digit};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

/// An order that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KOrder {
    Finite(i64),
    Infinite,
}

impl KOrder {
    pub fn of(x: &PadicNumber) -> KOrder {
        x.valuation().map_or(KOrder::Infinite, KOrder::Finite)
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            KOrder::Finite(k) => Some(*k),
            KOrder::Infinite => None,
        }
    }

    pub fn parse(s: &str) -> Result<KOrder> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(KOrder::Infinite);
        }
        s.parse().map(KOrder::Finite).map_err(|_| Error::Parse(s.into(), "expected an integer or inf".into()))
    }
}

impl fmt::Display for KOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KOrder::Finite(k) => write!(f, "{}", k),
            KOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for KOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KOrder::Finite(k) => s.serialize_i64(*k),
            KOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Index of a `D_p` set: `D_p(c)` for a unit class `c`, or `D_p^+(0)`, `D_p^-(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DpClass {
    Unit(u32),
    ZeroPlus,
    ZeroMinus,
}

/// Residues are taken mod p, or mod 4 when p = 2.
pub fn dp_modulus(p: u32) -> u32 {
    if p == 2 {
        4
    } else {
        p
    }
}

pub fn dp_set(p: u32, class: DpClass) -> Result<Vec<(u32, u32)>> {
    let m = dp_modulus(p) as u64;
    match class {
        DpClass::Unit(c) => {
            let valid = if p == 2 { matches!(c, 1 | 2 | 5) } else { c > 0 && c < p };
            if !valid {
                return Err(Error::NotInDp(format!("class {} for p = {}", c, p)));
            }
            let target = if p == 2 { 8 } else { p as u64 };
            let mut out = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    if (a * a + b * b) % target == c as u64 {
                        out.push((a as u32, b as u32));
                    }
                }
            }
            Ok(out)
        }
        DpClass::ZeroPlus | DpClass::ZeroMinus => {
            let i0 = sqrt_minus_one_residue(p).ok_or_else(|| Error::NotInDp(format!("D^(0) needs p = 1 mod 4, got {}", p)))? as u64;
            let sign = if class == DpClass::ZeroPlus { i0 } else { p as u64 - i0 };
            Ok((1..m).map(|a| (a as u32, (a * sign % m) as u32)).collect())
        }
    }
}

/// Lexicographically least element.
pub fn dp_canonical(p: u32, class: DpClass) -> Result<(u32, u32)> {
    Ok(*dp_set(p, class)?.iter().min().unwrap())
}

/// `(a a' - b b', a b' + a' b)`.
pub fn dp_mul(p: u32, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
    let m = dp_modulus(p) as i64;
    let (a, b, c, d) = (x.0 as i64, x.1 as i64, y.0 as i64, y.1 as i64);
    ((a * c - b * d).rem_euclid(m) as u32, (a * d + c * b).rem_euclid(m) as u32)
}

pub fn in_dp_one(p: u32, ab: (u32, u32)) -> bool {
    dp_set(p, DpClass::Unit(1)).unwrap().contains(&ab)
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingData {
    pub k: i64,
    pub x0: u32,
    pub y0: u32,
    pub z0: u32,
    pub class: DpClass,
}

fn lead_digits(p: u32) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

fn z_digits(p: u32) -> u32 {
    if p == 2 {
        3
    } else {
        1
    }
}

fn class_of(p: u32, z0: u32, x0: u32, y0: u32) -> Result<DpClass> {
    if z0 != 0 {
        return Ok(DpClass::Unit(z0));
    }
    let i0 = sqrt_minus_one_residue(p)
        .ok_or_else(|| Error::InsufficientPrecision("z vanishes at its leading order".into()))?;
    Ok(if (i0 as u64 * x0 as u64) % p as u64 == y0 as u64 { DpClass::ZeroPlus } else { DpClass::ZeroMinus })
}

pub fn leading_data(x: &PadicNumber, y: &PadicNumber) -> Result<LeadingData> {
    let p = x.p();
    let k = match (x.valuation(), y.valuation()) {
        (None, None) => return Err(Error::Domain("the origin has no polar coordinates".into())),
        (Some(a), None) => a.min(y.order_lower_bound()),
        (None, Some(b)) => b.min(x.order_lower_bound()),
        (Some(a), Some(b)) => a.min(b),
    };
    let x0 = x.digit_block(k, lead_digits(p))?;
    let y0 = y.digit_block(k, lead_digits(p))?;
    let z = x * x + y * y;
    let z0 = z.digit_block(2 * k, z_digits(p))?;
    let class = class_of(p, z0, x0, y0)?;
    Ok(LeadingData { k, x0, y0, z0, class })
}

/// The point of the circle `x^2 + y^2 = z` with leading digits `(x0, y0)` at order `k`
/// from which angles are measured.
pub fn reference_point(z: &PadicNumber, k: i64, x0: u32, y0: u32) -> Result<(PadicNumber, PadicNumber)> {
    let ctx = z.ctx();
    let p = ctx.p();
    let x_small = if p == 2 { x0 % 2 == 0 } else { x0 == 0 };
    if x_small {
        let xr = &ctx.pow_p(k) * &ctx.int(x0 as i64);
        let yr = sqrt_with_leading_digit(&(z - &(&xr * &xr)), y0)?;
        Ok((xr, yr))
    } else {
        let yr = &ctx.pow_p(k) * &ctx.int(y0 as i64);
        let xr = sqrt_with_leading_digit(&(z - &(&yr * &yr)), x0)?;
        Ok((xr, yr))
    }
}

/// Rotation of `(x, y)` by the angle `t`.
pub fn rotate(x: &PadicNumber, y: &PadicNumber, t: &PadicNumber) -> Result<(PadicNumber, PadicNumber)> {
    let (c, s) = (cos(t)?, sin(t)?);
    Ok((x * &c - y * &s, x * &s + y * &c))
}

/// The angle `t` in `p^d Z_p` with `(x, y) = R(t) (xr, yr)`.
pub fn angle_between(x: &PadicNumber, y: &PadicNumber, xr: &PadicNumber, yr: &PadicNumber) -> Result<PadicNumber> {
    let ctx = x.ctx();
    let z = xr * xr + yr * yr;
    if !z.is_zero() {
        let s = (y * xr - x * yr).checked_div(&z)?;
        return angle_from_sin(&s);
    }
    // isotropic circle: (x, y) is a scalar multiple of (xr, yr)
    let i = sqrt_minus_one(ctx)?;
    let lam = x.checked_div(xr)?;
    let inv = lam.inverse()?;
    let two_i = &ctx.int(2) * &i;
    let s = if (yr - &(&i * xr)).is_zero() {
        (&inv - &lam).checked_div(&two_i)?
    } else {
        (&lam - &inv).checked_div(&two_i)?
    };
    angle_from_sin(&s)
}

#[derive(Clone, Debug)]
pub struct PolarCoords {
    pub z: PadicNumber,
    pub k1: KOrder,
    pub k2: KOrder,
    pub ab: (u32, u32),
    pub t: PadicNumber,
}

impl PolarCoords {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "z": self.z.to_literal(),
            "k1": self.k1,
            "k2": self.k2,
            "a": self.ab.0,
            "b": self.ab.1,
            "t": self.t.to_literal(),
        })
    }

    /// `z;k';k'';a,b;t`.
    pub fn to_text(&self) -> String {
        format!("{};{};{};{},{};{}", self.z.to_literal(), self.k1, self.k2, self.ab.0, self.ab.1, self.t.to_literal())
    }

    pub fn parse(s: &str, ctx: PadicContext) -> Result<PolarCoords> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 5 {
            return Err(Error::Parse(s.into(), "expected z;k1;k2;a,b;t".into()));
        }
        let (a, b) = parts[3].split_once(',').ok_or_else(|| Error::Parse(s.into(), "expected a,b".into()))?;
        let num = |v: &str| v.trim().parse::<u32>().map_err(|_| Error::Parse(s.into(), "bad residue".into()));
        Ok(PolarCoords {
            z: ctx.parse(parts[0])?,
            k1: KOrder::parse(parts[1])?,
            k2: KOrder::parse(parts[2])?,
            ab: (num(a)?, num(b)?),
            t: ctx.parse(parts[4])?,
        })
    }

    /// Equality of the discrete data and of `z`, `t` at precision.
    pub fn same_as(&self, other: &PolarCoords) -> bool {
        self.k1 == other.k1
            && self.k2 == other.k2
            && self.ab == other.ab
            && self.z.eq_at_precision(&other.z)
            && self.t.eq_at_precision(&other.t)
    }
}

pub fn to_polar(x: &PadicNumber, y: &PadicNumber) -> Result<PolarCoords> {
    let ctx = x.ctx();
    let p = ctx.p();
    let ld = leading_data(x, y)?;
    let z = x * x + y * y;
    let (k1, k2) = if p % 4 == 1 {
        let i = sqrt_minus_one(ctx)?;
        (KOrder::of(&(x + &(&i * y))), KOrder::of(&(x - &(&i * y))))
    } else {
        let vz = z.valuation().ok_or_else(|| Error::InsufficientPrecision("x^2 + y^2 vanishes at precision".into()))?;
        (KOrder::Finite(ld.k), KOrder::Finite(vz - ld.k))
    };
    let canon = dp_canonical(p, ld.class)?;
    let ab = dp_set(p, DpClass::Unit(1))?
        .into_iter()
        .find(|&ab| dp_mul(p, canon, ab) == (ld.x0, ld.y0))
        .ok_or_else(|| Error::NotInDp(format!("({}, {})", ld.x0, ld.y0)))?;
    let (xr, yr) = reference_point(&z, ld.k, ld.x0, ld.y0)?;
    let t = angle_between(x, y, &xr, &yr)?;
    Ok(PolarCoords { z, k1, k2, ab, t })
}

pub fn validate_polar(pc: &PolarCoords) -> Result<()> {
    let ctx = pc.z.ctx();
    let p = ctx.p();
    let bad = |m: &str| Err(Error::InvalidPolar(m.to_string()));
    if !in_dp_one(p, pc.ab) {
        return bad(&format!("({}, {}) is not in D_p(1)", pc.ab.0, pc.ab.1));
    }
    if let Some(v) = pc.t.valuation() {
        if v < ctx.d() {
            return bad("angle outside p^d Z_p");
        }
    }
    match (pc.k1, pc.k2) {
        (KOrder::Infinite, KOrder::Infinite) => return bad("both orders infinite"),
        (KOrder::Finite(a), KOrder::Finite(b)) => {
            if pc.z.valuation() != Some(a + b) {
                return bad("ord(z) differs from k' + k''");
            }
        }
        _ => {
            if p % 4 != 1 {
                return bad("infinite order needs p = 1 mod 4");
            }
            if !pc.z.is_zero() {
                return bad("infinite order needs z = 0");
            }
        }
    }
    if p % 4 == 3 && pc.k1 != pc.k2 {
        return bad("p = 3 mod 4 forces k' = k''");
    }
    if p == 2 {
        let (a, b) = (pc.k1.finite().unwrap(), pc.k2.finite().unwrap());
        if b != a && b != a + 1 {
            return bad("p = 2 forces k'' in {k', k' + 1}");
        }
        if pc.z.digit_block(pc.z.valuation().unwrap(), 2)? != 1 {
            return bad("for p = 2 the unit part of z must end in 01");
        }
    }
    Ok(())
}

pub fn from_polar(pc: &PolarCoords) -> Result<(PadicNumber, PadicNumber)> {
    validate_polar(pc)?;
    let p = pc.z.p();
    let k = match (pc.k1, pc.k2) {
        (KOrder::Finite(a), KOrder::Finite(b)) => a.min(b),
        (KOrder::Finite(a), _) | (_, KOrder::Finite(a)) => a,
        _ => unreachable!(),
    };
    let z0 = pc.z.digit_block(2 * k, z_digits(p))?;
    let class = if z0 != 0 {
        DpClass::Unit(z0)
    } else if pc.k1 > KOrder::Finite(k) {
        DpClass::ZeroPlus
    } else {
        DpClass::ZeroMinus
    };
    let canon = dp_canonical(p, class)?;
    let (x0, y0) = dp_mul(p, canon, pc.ab);
    let (xr, yr) = reference_point(&pc.z, k, x0, y0)?;
    rotate(&xr, &yr, &pc.t)
}
