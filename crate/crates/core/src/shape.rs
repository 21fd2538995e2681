//! Radii, balls, cylinders and the other shapes widths are measured on.

use std::fmt;

use serde::Serialize;

use crate::ellipsoid::Ellipsoid;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

/// The radius `p^e`, stored as its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Radius(pub i64);

impl Radius {
    /// Accepts exact values equal to a power of p.
    pub fn from_padic(x: &PadicNumber) -> Result<Radius> {
        let q = x.exact_value().ok_or(Error::NotExact)?;
        let v = x.valuation().ok_or_else(|| Error::NotPowerOfP(x.to_literal()))?;
        let pw = x.ctx().pow_p(v);
        if pw.exact_value() != Some(q) {
            return Err(Error::NotPowerOfP(x.to_literal()));
        }
        Ok(Radius(v))
    }

    /// `p^e` (also written with the prime itself, e.g. `3^-2`) or any literal equal to a power of p.
    pub fn parse(s: &str, ctx: PadicContext) -> Result<Radius> {
        let s = s.trim();
        if let Some((base, e)) = s.split_once('^') {
            let base_ok = base == "p" || base.parse::<u32>().ok() == Some(ctx.p());
            let e = e.trim().parse::<i64>().ok().filter(|_| base_ok);
            return e.map(Radius).ok_or_else(|| Error::Parse(s.into(), "expected p^e".into()));
        }
        Radius::from_padic(&ctx.parse(s)?)
    }

    pub fn value(&self, ctx: PadicContext) -> PadicNumber {
        ctx.pow_p(self.0)
    }

    /// `|x| <= p^e`.
    pub fn admits(&self, x: &PadicNumber) -> bool {
        match x.valuation() {
            None => true,
            Some(v) => v >= -self.0,
        }
    }

    /// Smallest radius containing `x`.
    pub fn of(x: &PadicNumber) -> Option<Radius> {
        x.valuation().map(|v| Radius(-v))
    }
}

/// Width values: zero, `p^e`, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Capacity {
    Zero,
    Power(i64),
    Infinite,
}

impl Capacity {
    pub fn to_value(&self, p: u32) -> String {
        match self {
            Capacity::Zero => "0".into(),
            Capacity::Infinite => "inf".into(),
            Capacity::Power(e) if *e >= 0 => num_traits::pow(num_bigint::BigInt::from(p), *e as usize).to_string(),
            Capacity::Power(e) => format!("1/{}", num_traits::pow(num_bigint::BigInt::from(p), (-e) as usize)),
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Zero => write!(f, "0"),
            Capacity::Infinite => write!(f, "inf"),
            Capacity::Power(e) => write!(f, "p^{}", e),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Ball { r: Radius, dim: usize },
    /// `{ |(x1, y1)| <= R }` in dimension `dim`.
    Cylinder { r: Radius, dim: usize },
    Ellipsoid(Ellipsoid),
    FullSpace { dim: usize },
    /// Points of `Q_p^{2n}` with no coordinate pair equal to `(0, 0)`.
    PuncturedTorus { n: usize },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { dim, .. } | Shape::Cylinder { dim, .. } | Shape::FullSpace { dim } => *dim,
            Shape::Ellipsoid(e) => e.dim(),
            Shape::PuncturedTorus { n } => 2 * n,
        }
    }
}

/// Parses `ball:R[:dim]`, `cyl:R[:dim]`, `T:n`, `full:dim` or `diag:a1,...,an`
/// (the ellipsoid `|diag(a1, a1, ..., an, an) v| <= 1`). Dimensions default to 4.
pub fn parse_shape(s: &str, ctx: PadicContext) -> Result<Shape> {
    let bad = |m: &str| Error::Parse(s.to_string(), m.to_string());
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected kind:value"))?;
    let dim_of = |d: Option<&str>| -> Result<usize> {
        let dim = d.map_or(Ok(4), |d| d.trim().parse::<usize>().map_err(|_| bad("bad dimension")))?;
        if dim == 0 || dim % 2 != 0 {
            return Err(bad("dimension must be even and positive"));
        }
        Ok(dim)
    };
    match kind.trim() {
        "ball" | "cyl" => {
            let mut parts = rest.splitn(2, ':');
            let r = Radius::parse(parts.next().unwrap(), ctx)?;
            let dim = dim_of(parts.next())?;
            Ok(if kind.trim() == "ball" { Shape::Ball { r, dim } } else { Shape::Cylinder { r, dim } })
        }
        "T" => {
            let n = rest.trim().parse::<usize>().map_err(|_| bad("bad pair count"))?;
            if n == 0 {
                return Err(bad("pair count must be positive"));
            }
            Ok(Shape::PuncturedTorus { n })
        }
        "full" => Ok(Shape::FullSpace { dim: dim_of(Some(rest))? }),
        "diag" => {
            let coeffs = rest.split(',').map(|a| ctx.parse(a)).collect::<Result<Vec<_>>>()?;
            let n = 2 * coeffs.len();
            let mut m = crate::linalg::PadicMatrix::zeros(ctx, n, n);
            for (i, a) in coeffs.iter().enumerate() {
                m.set(2 * i, 2 * i, a.clone());
                m.set(2 * i + 1, 2 * i + 1, a.clone());
            }
            Ok(Shape::Ellipsoid(Ellipsoid::centered(m)?))
        }
        _ => Err(bad("unknown shape kind")),
    }
}

pub fn norm_radius(v: &[PadicNumber]) -> Option<Radius> {
    v.iter().filter_map(Radius::of).max()
}

pub fn shape_contains(shape: &Shape, v: &[PadicNumber]) -> Result<bool> {
    if v.len() != shape.dim() {
        return Err(Error::Dimension(format!("point of length {} for a shape of dimension {}", v.len(), shape.dim())));
    }
    Ok(match shape {
        Shape::Ball { r, .. } => v.iter().all(|x| r.admits(x)),
        Shape::Cylinder { r, .. } => v.len() >= 2 && r.admits(&v[0]) && r.admits(&v[1]),
        Shape::Ellipsoid(e) => e.contains(v)?,
        Shape::FullSpace { .. } => true,
        Shape::PuncturedTorus { .. } => v.chunks(2).all(|c| !(c[0].is_zero() && c[1].is_zero())),
    })
}
