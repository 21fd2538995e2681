//! Linear symplectic squeezing: witnesses and the conformal classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{conformal_factor, pairing, symplectic_gram, PadicMatrix, Vector};
use crate::padic::PadicNumber;
use crate::shape::Radius;

/// `true` when `|omega0(A^T u, A^T v)| <= |omega0(u, v)| / p^2`.
pub fn squeezing_witness_check(a: &PadicMatrix, u: &[PadicNumber], v: &[PadicNumber]) -> Result<bool> {
    let base = pairing(u, v)?;
    let vb = match base.valuation() {
        Some(vb) => vb,
        None => return Err(Error::DegeneratePair),
    };
    let lhs = pairing(&a.transpose().mul_vec(u)?, &a.transpose().mul_vec(v)?)?;
    Ok(lhs.is_zero() || lhs.valuation().unwrap() >= vb + 2)
}

#[derive(Clone, Debug)]
pub enum Classification {
    /// Neither `A` nor `A^-1` squeezes; `A Omega0 A^T = c Omega0`.
    BothNonSqueezing(PadicNumber),
    NotBoth,
}

impl Classification {
    pub fn is_both(&self) -> bool {
        matches!(self, Classification::BothNonSqueezing(_))
    }
}

pub fn classify(a: &PadicMatrix) -> Result<Classification> {
    Ok(match conformal_factor(a)? {
        Some(c) if matches!(c.valuation(), Some(-1..=1)) => Classification::BothNonSqueezing(c),
        _ => Classification::NotBoth,
    })
}

/// Conformal factor exists and is a unit.
pub fn is_width_preserving(a: &PadicMatrix) -> Result<bool> {
    Ok(matches!(conformal_factor(a)?.and_then(|c| c.valuation()), Some(0)))
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub u: Vector,
    pub v: Vector,
    /// `ord(omega0(A^T u, A^T v)) - ord(omega0(u, v))`; `None` when the left side vanishes.
    pub gap: Option<i64>,
}

fn witness_gap(m: &PadicMatrix, u: &[PadicNumber], v: &[PadicNumber]) -> Result<Option<i64>> {
    let base = pairing(u, v)?.valuation().ok_or(Error::DegeneratePair)?;
    let lhs: PadicNumber = {
        let mv = m.mul_vec(v)?;
        u.iter().zip(&mv).fold(m.ctx().zero(), |acc, (a, b)| acc + a * b)
    };
    Ok(lhs.valuation().map(|l| l - base))
}

fn unit_vector(a: &PadicMatrix, len: usize, i: usize) -> Vector {
    let ctx = a.ctx();
    (0..len).map(|k| if k == i { ctx.one() } else { ctx.zero() }).collect()
}

/// Searches for `(u, v)` witnessing that `A` squeezes.
///
/// Canonical basis pairs are tried first, then primitive residue vectors `u`
/// modulo `p^depth` in lexicographic order; for each `u` the partner `v` is
/// solved for exactly.
pub fn find_squeezing_witness(a: &PadicMatrix, depth: u32) -> Result<Option<Witness>> {
    if !a.is_square() || a.rows() % 2 != 0 {
        return Err(Error::Dimension("squeezing needs a square matrix of even size".into()));
    }
    let size = a.rows();
    let m = symplectic_gram(a)?;
    for i in 0..size {
        for j in 0..size {
            if i / 2 != j / 2 || i == j {
                continue;
            }
            let (u, v) = (unit_vector(a, size, i), unit_vector(a, size, j));
            if squeezing_witness_check(a, &u, &v)? {
                let gap = witness_gap(&m, &u, &v)?;
                return Ok(Some(Witness { u, v, gap }));
            }
        }
    }
    // a conformal A has constant gap ord(c), already covered above
    if conformal_factor(a)?.is_some() {
        return Ok(None);
    }
    let ctx = a.ctx();
    let p = ctx.p() as u64;
    let modulus = p.pow(depth);
    let mut digits = vec![0u64; size];
    'outer: loop {
        let mut pos = size;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < modulus {
                break;
            }
            digits[pos] = 0;
        }
        if digits.iter().all(|d| d % p == 0) {
            continue;
        }
        let u: Vector = digits.iter().map(|&d| ctx.int(d as i64)).collect();
        // f = u^T M, g = u^T Omega0
        let f: Vector = (0..size)
            .map(|j| (0..size).fold(ctx.zero(), |acc, i| acc + &u[i] * m.get(i, j)))
            .collect();
        let g: Vector = (0..size)
            .map(|j| if j % 2 == 0 { -u[j + 1].clone() } else { u[j - 1].clone() })
            .collect();
        let v = match f.iter().position(|x| !x.is_zero()) {
            None => {
                let j = g.iter().position(|x| !x.is_zero()).unwrap();
                unit_vector(a, size, j)
            }
            Some(j) => {
                let mut found = None;
                for i in 0..size {
                    if i == j {
                        continue;
                    }
                    // w = f_j e_i - f_i e_j lies in ker f
                    let mut w = vec![ctx.zero(); size];
                    w[i] = f[j].clone();
                    w[j] = -f[i].clone();
                    let gw = &g[i] * &w[i] + &g[j] * &w[j];
                    if !gw.is_zero() {
                        found = Some(w);
                        break;
                    }
                }
                match found {
                    Some(w) => w,
                    None => {
                        let jj = g.iter().position(|x| !x.is_zero()).unwrap();
                        unit_vector(a, size, jj)
                    }
                }
            }
        };
        if squeezing_witness_check(a, &u, &v)? {
            let gap = witness_gap(&m, &u, &v)?;
            return Ok(Some(Witness { u, v, gap }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Squeezing(Witness),
    BothNonSqueezing(PadicNumber),
    /// `A` does not squeeze but `A^-1` does, with this witness for `A^-1`.
    InverseSqueezing(Witness),
    Unknown,
}

#[derive(Serialize)]
struct VerdictJson {
    class: &'static str,
    c: Option<String>,
    u: Option<Vec<String>>,
    v: Option<Vec<String>>,
    gap: Option<String>,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        let lits = |xs: &Vector| xs.iter().map(|x| x.to_literal()).collect::<Vec<_>>();
        let gap = |g: &Option<i64>| Some(g.map_or("inf".to_string(), |g| g.to_string()));
        let j = match self {
            Verdict::Squeezing(w) => VerdictJson { class: "squeezing", c: None, u: Some(lits(&w.u)), v: Some(lits(&w.v)), gap: gap(&w.gap) },
            Verdict::InverseSqueezing(w) => VerdictJson { class: "inverse-squeezing", c: None, u: Some(lits(&w.u)), v: Some(lits(&w.v)), gap: gap(&w.gap) },
            Verdict::BothNonSqueezing(c) => VerdictJson { class: "both-non-squeezing", c: Some(c.to_literal()), u: None, v: None, gap: None },
            Verdict::Unknown => VerdictJson { class: "unknown", c: None, u: None, v: None, gap: None },
        };
        serde_json::to_value(j).unwrap()
    }
}

pub fn matrix_verdict(a: &PadicMatrix, depth: u32) -> Result<Verdict> {
    if let Classification::BothNonSqueezing(c) = classify(a)? {
        return Ok(Verdict::BothNonSqueezing(c));
    }
    if let Some(w) = find_squeezing_witness(a, depth)? {
        return Ok(Verdict::Squeezing(w));
    }
    if let Some(w) = find_squeezing_witness(&a.inverse()?, depth)? {
        return Ok(Verdict::InverseSqueezing(w));
    }
    Ok(Verdict::Unknown)
}

/// An affine symplectic map sends `Ball(r)` into `Cyl(R)` iff `r <= R`.
pub fn affine_nonsqueezing(r: Radius, big_r: Radius) -> bool {
    r <= big_r
}
