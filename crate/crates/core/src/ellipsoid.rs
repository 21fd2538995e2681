//! Ellipsoids, the p-adic Farkas lemma, containment and widths.

use crate::error::{Error, Result};
use crate::linalg::{antisymmetric_reduce, symplectic_gram, PadicMatrix, Vector};
use crate::padic::{PadicContext, PadicNumber};
use crate::shape::Capacity;

/// `{ v : |A (v - center)| <= 1 }`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    pub matrix: PadicMatrix,
    pub center: Vector,
}

impl Ellipsoid {
    pub fn new(matrix: PadicMatrix, center: Vector) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != center.len() {
            return Err(Error::Dimension("ellipsoid needs a square matrix matching its center".into()));
        }
        matrix.inverse()?;
        Ok(Ellipsoid { matrix, center })
    }

    pub fn centered(matrix: PadicMatrix) -> Result<Self> {
        let ctx = matrix.ctx();
        let n = matrix.rows();
        Self::new(matrix, vec![ctx.zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn ctx(&self) -> PadicContext {
        self.matrix.ctx()
    }

    pub fn contains(&self, v: &[PadicNumber]) -> Result<bool> {
        let d: Vector = v.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        Ok(self.matrix.mul_vec(&d)?.iter().all(|x| x.is_integral()))
    }

    /// The ellipsoid `c E` (matrix divided by `c`, center scaled by `c`).
    pub fn scaled(&self, c: &PadicNumber) -> Result<Self> {
        let inv = c.inverse()?;
        Ok(Ellipsoid {
            matrix: self.matrix.scale(&inv),
            center: self.center.iter().map(|x| x * c).collect(),
        })
    }
}

/// Either `x` integral with `A x = b`, or `y` with `y^T A` integral and `y^T b` not.
#[derive(Clone, Debug)]
pub enum FarkasCertificate {
    Solution(Vector),
    Obstruction(Vector),
}

fn ell(s: &PadicNumber) -> i64 {
    1 + s.valuation().unwrap_or(0).max(0)
}

fn unit(ctx: PadicContext, len: usize, i: usize, c: PadicNumber) -> Vector {
    (0..len).map(|k| if k == i { c.clone() } else { ctx.zero() }).collect()
}

fn farkas_rec(ctx: PadicContext, a: &[Vector], b: &[PadicNumber], k: usize) -> Result<FarkasCertificate> {
    let m = a.len();
    let row0 = &a[0];
    let row0_zero = row0.iter().all(|x| x.is_zero());
    if m == 1 {
        if row0_zero {
            return Ok(if b[0].is_zero() {
                FarkasCertificate::Solution(vec![ctx.zero(); k])
            } else {
                FarkasCertificate::Obstruction(vec![ctx.pow_p(-ell(&b[0]))])
            });
        }
        let (minval, j) = row0
            .iter()
            .enumerate()
            .filter_map(|(j, x)| x.valuation().map(|v| (v, j)))
            .min()
            .unwrap();
        return Ok(match b[0].valuation() {
            Some(vb) if vb < minval => FarkasCertificate::Obstruction(vec![ctx.pow_p(-minval)]),
            _ => FarkasCertificate::Solution(unit(ctx, k, j, b[0].checked_div(&row0[j])?)),
        });
    }
    if row0_zero {
        if !b[0].is_zero() {
            return Ok(FarkasCertificate::Obstruction(unit(ctx, m, 0, ctx.pow_p(-ell(&b[0])))));
        }
        return Ok(match farkas_rec(ctx, &a[1..], &b[1..], k)? {
            FarkasCertificate::Obstruction(y) => {
                FarkasCertificate::Obstruction(std::iter::once(ctx.zero()).chain(y).collect())
            }
            s => s,
        });
    }
    if k == 1 {
        let alpha = &a[0][0];
        let x = b[0].checked_div(alpha)?;
        if !x.is_integral() {
            return Ok(FarkasCertificate::Obstruction(unit(ctx, m, 0, alpha.inverse()?)));
        }
        for i in 1..m {
            let r = &(&a[i][0] * &x) - &b[i];
            if !r.is_zero() {
                let s = alpha * &r;
                let scale = ctx.pow_p(-ell(&s));
                let mut y = vec![ctx.zero(); m];
                y[0] = &scale * &a[i][0];
                y[i] = -(&scale * alpha);
                return Ok(FarkasCertificate::Obstruction(y));
            }
        }
        return Ok(FarkasCertificate::Solution(vec![x]));
    }
    let (_, j) = row0
        .iter()
        .enumerate()
        .filter_map(|(j, x)| x.valuation().map(|v| (v, j)))
        .min()
        .unwrap();
    let mut a2: Vec<Vector> = a.to_vec();
    let mut c: Vec<Vector> = (0..k).map(|i| unit(ctx, k, i, ctx.one())).collect();
    for row in a2.iter_mut().chain(c.iter_mut()) {
        row.swap(0, j);
    }
    let alpha = a2[0][0].clone();
    for col in 1..k {
        let lam = a2[0][col].checked_div(&alpha)?;
        if lam.is_zero() {
            continue;
        }
        for row in a2.iter_mut().chain(c.iter_mut()) {
            row[col] = &row[col] - &(&lam * &row[0]);
        }
    }
    let x1 = b[0].checked_div(&alpha)?;
    if !x1.is_integral() {
        return Ok(FarkasCertificate::Obstruction(unit(ctx, m, 0, alpha.inverse()?)));
    }
    let col_a: Vector = a2[1..].iter().map(|r| r[0].clone()).collect();
    let sub: Vec<Vector> = a2[1..].iter().map(|r| r[1..].to_vec()).collect();
    let b2: Vector = b[1..].iter().zip(&col_a).map(|(bi, ai)| bi - &(&x1 * ai)).collect();
    Ok(match farkas_rec(ctx, &sub, &b2, k - 1)? {
        FarkasCertificate::Solution(xs) => {
            let full: Vector = std::iter::once(x1).chain(xs).collect();
            let x = c
                .iter()
                .map(|row| row.iter().zip(&full).fold(ctx.zero(), |acc, (p, q)| acc + p * q))
                .collect();
            FarkasCertificate::Solution(x)
        }
        FarkasCertificate::Obstruction(ys) => {
            let dot = ys.iter().zip(&col_a).fold(ctx.zero(), |acc, (p, q)| acc + p * q);
            let first = -dot.checked_div(&alpha)?;
            FarkasCertificate::Obstruction(std::iter::once(first).chain(ys).collect())
        }
    })
}

/// The p-adic Farkas alternative for `A x = b` over `Z_p`. Needs exact input.
pub fn farkas_certificate(a: &PadicMatrix, b: &[PadicNumber]) -> Result<FarkasCertificate> {
    if a.rows() == 0 || a.cols() == 0 || a.rows() != b.len() {
        return Err(Error::Dimension(format!("system {}x{} with right side of length {}", a.rows(), a.cols(), b.len())));
    }
    if !a.is_exact() || !b.iter().all(|x| x.is_exact()) {
        return Err(Error::NotExact);
    }
    farkas_rec(a.ctx(), &a.to_rows(), b, a.cols())
}

/// Independent check of a certificate.
pub fn verify_farkas(a: &PadicMatrix, b: &[PadicNumber], cert: &FarkasCertificate) -> Result<bool> {
    let ctx = a.ctx();
    Ok(match cert {
        FarkasCertificate::Solution(x) => {
            x.len() == a.cols()
                && x.iter().all(|e| e.is_integral())
                && a.mul_vec(x)?.iter().zip(b).all(|(l, r)| l.exact_eq(r) == Some(true))
        }
        FarkasCertificate::Obstruction(y) => {
            let ya = a.transpose().mul_vec(y)?;
            let yb = y.iter().zip(b).fold(ctx.zero(), |acc, (p, q)| acc + p * q);
            y.len() == a.rows() && ya.iter().all(|e| e.is_integral()) && !yb.is_integral()
        }
    })
}

#[derive(Clone, Debug)]
pub struct Containment {
    pub contained: bool,
    pub center_inside: bool,
    /// `A2 A1^-1`.
    pub transform: PadicMatrix,
}

pub fn ellipsoid_containment(e1: &Ellipsoid, e2: &Ellipsoid) -> Result<Containment> {
    if e1.dim() != e2.dim() {
        return Err(Error::Dimension("ellipsoids of different dimension".into()));
    }
    let center_inside = e2.contains(&e1.center)?;
    let transform = e2.matrix.mul(&e1.matrix.inverse()?)?;
    Ok(Containment { contained: center_inside && transform.is_integral(), center_inside, transform })
}

/// A symplectic `S` whose ball `{ |S (v - center)| <= 1 }` lies in `E`, when one exists.
pub fn inner_symplectic_ball(e: &Ellipsoid) -> Result<Option<PadicMatrix>> {
    let g = symplectic_gram(&e.matrix)?;
    if !g.is_integral() {
        return Ok(None);
    }
    let c = antisymmetric_reduce(&g)?;
    Ok(Some(c.inverse()?.mul(&e.matrix)?))
}

/// `p^{2k}` for the largest `k` with `p^{2k}` dividing every entry of `A Omega0 A^T`.
pub fn ellipsoid_width(e: &Ellipsoid) -> Result<Capacity> {
    let g = symplectic_gram(&e.matrix)?;
    let v = g.min_valuation().ok_or(Error::Singular)?;
    Ok(Capacity::Power(2 * v.div_euclid(2)))
}
