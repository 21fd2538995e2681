//! Dense matrices over Q_p and the standard symplectic form.

use std::fmt;

use num_rational::BigRational;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

pub type Vector = Vec<PadicNumber>;

#[derive(Clone, Debug)]
pub struct PadicMatrix {
    ctx: PadicContext,
    rows: usize,
    cols: usize,
    data: Vec<PadicNumber>,
}

impl PadicMatrix {
    pub fn from_rows(ctx: PadicContext, rows: Vec<Vec<PadicNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(PadicMatrix { ctx, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(ctx: PadicContext, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| ctx.int(x)).collect()).collect();
        Self::from_rows(ctx, rows).unwrap()
    }

    pub fn from_rationals(ctx: PadicContext, rows: &[Vec<BigRational>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|q| PadicNumber::from_rational(q.clone(), ctx)).collect())
            .collect();
        Self::from_rows(ctx, rows)
    }

    /// Parses a JSON array of rows; entries are integers or literal strings.
    pub fn from_json(ctx: PadicContext, v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Invalid("matrix must be a JSON array".into()))?;
        let mut out = Vec::new();
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Invalid("matrix rows must be arrays".into()))?;
            out.push(row.iter().map(|e| json_entry(ctx, e)).collect::<Result<Vec<_>>>()?);
        }
        Self::from_rows(ctx, out)
    }

    pub fn zeros(ctx: PadicContext, rows: usize, cols: usize) -> Self {
        PadicMatrix { ctx, rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: PadicContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    /// Block diagonal matrix with blocks `[[0, 1], [-1, 0]]`.
    pub fn omega0(ctx: PadicContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, 2 * n, 2 * n);
        for k in 0..n {
            m.set(2 * k, 2 * k + 1, ctx.one());
            m.set(2 * k + 1, 2 * k, ctx.int(-1));
        }
        m
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicNumber) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &PadicNumber> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ctx.zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[PadicNumber]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!("{}x{} times vector of length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.ctx.zero(), |acc, k| acc + self.get(i, k) * &v[k])
            })
            .collect())
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        PadicMatrix { data: self.data.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        Ok(PadicMatrix {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|x| x.is_exact())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    /// Smallest valuation among the entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.valuation()).min()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entrywise equality modulo the available precision.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.data.iter().zip(&other.data).all(|(a, b)| a.eq_at_precision(b))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| (self.get(i, j) + self.get(j, i)).is_zero())
            })
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter_map(|i| self.get(i, col).valuation().map(|v| (v, i)))
            .min()
            .map(|(_, i)| i)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.ctx, n);
        for c in 0..n {
            let r = a.pivot_row(c, c).ok_or(Error::Singular)?;
            a.swap_rows(c, r);
            inv.swap_rows(c, r);
            let piv = a.get(c, c).clone();
            for j in 0..n {
                a.set(c, j, a.get(c, j).checked_div(&piv)?);
                inv.set(c, j, inv.get(c, j).checked_div(&piv)?);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &(&f * a.get(c, j)));
                    inv.set(i, j, inv.get(i, j) - &(&f * inv.get(c, j)));
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<PadicNumber> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.ctx.one();
        for c in 0..n {
            let r = match a.pivot_row(c, c) {
                Some(r) => r,
                None => {
                    let zero = self.ctx.zero();
                    return Ok(if a.is_exact() { zero } else { &det * &a.get(c, c).clone() });
                }
            };
            if r != c {
                a.swap_rows(c, r);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).checked_div(&piv)?;
                for j in c..n {
                    a.set(i, j, a.get(i, j) - &(&f * a.get(c, j)));
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_literal()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn json_entry(ctx: PadicContext, e: &Value) -> Result<PadicNumber> {
    match e {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| Error::Invalid(format!("non-integer JSON number {}", n)))?;
            Ok(ctx.int(i))
        }
        Value::String(s) => ctx.parse(s),
        _ => Err(Error::Invalid(format!("bad matrix entry {}", e))),
    }
}

pub fn matrix_to_json(m: &PadicMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_literal())).collect()))
            .collect(),
    )
}

fn check_even(m: &PadicMatrix) -> Result<usize> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(Error::Dimension(format!("expected a square matrix of even size, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m.rows() / 2)
}

/// `u^T Omega0 v`.
pub fn pairing(u: &[PadicNumber], v: &[PadicNumber]) -> Result<PadicNumber> {
    if u.len() != v.len() || u.len() % 2 != 0 || u.is_empty() {
        return Err(Error::Dimension("pairing needs vectors of the same even length".into()));
    }
    let ctx = u[0].ctx();
    let mut acc = ctx.zero();
    for k in 0..u.len() / 2 {
        acc = acc + &u[2 * k] * &v[2 * k + 1] - &u[2 * k + 1] * &v[2 * k];
    }
    Ok(acc)
}

/// `A Omega0 A^T`.
pub fn symplectic_gram(a: &PadicMatrix) -> Result<PadicMatrix> {
    let n = check_even(a)?;
    a.mul(&PadicMatrix::omega0(a.ctx(), n))?.mul(&a.transpose())
}

/// `A^T Omega0 A`.
pub fn symplectic_gram_t(a: &PadicMatrix) -> Result<PadicMatrix> {
    let n = check_even(a)?;
    a.transpose().mul(&PadicMatrix::omega0(a.ctx(), n))?.mul(a)
}

/// The factor `c` with `A Omega0 A^T = c Omega0`, if there is one.
pub fn conformal_factor(a: &PadicMatrix) -> Result<Option<PadicNumber>> {
    let n = check_even(a)?;
    let m = symplectic_gram(a)?;
    let c = m.get(0, 1).clone();
    let target = PadicMatrix::omega0(a.ctx(), n).scale(&c);
    Ok(if m.eq_at_precision(&target) { Some(c) } else { None })
}

/// An integral `C` with `C Omega0 C^T = D`, for integral antisymmetric
/// nondegenerate `D`.
pub fn antisymmetric_reduce(d: &PadicMatrix) -> Result<PadicMatrix> {
    let n = check_even(d)?;
    if !d.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    if !d.is_integral() {
        return Err(Error::NotIntegral);
    }
    let ctx = d.ctx();
    let size = 2 * n;
    let mut cur = d.clone();
    // invariant: D = C cur C^T
    let mut c = PadicMatrix::identity(ctx, size);

    // cur <- E cur E^T with E swapping i and j; C <- C E
    let swap = |cur: &mut PadicMatrix, c: &mut PadicMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        cur.swap_rows(i, j);
        for r in 0..size {
            cur.data.swap(r * size + i, r * size + j);
            c.data.swap(r * size + i, r * size + j);
        }
    };
    // row/col i += lam * row/col j; C <- C (I - lam e_i e_j^T)
    let add = |cur: &mut PadicMatrix, c: &mut PadicMatrix, i: usize, j: usize, lam: &PadicNumber| {
        for col in 0..size {
            let x = cur.get(i, col) + &(lam * cur.get(j, col));
            cur.set(i, col, x);
        }
        for row in 0..size {
            let x = cur.get(row, i) + &(lam * cur.get(row, j));
            cur.set(row, i, x);
        }
        for row in 0..size {
            let x = c.get(row, j) - &(lam * c.get(row, i));
            c.set(row, j, x);
        }
    };

    for k in (0..size).step_by(2) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..size {
            for j in i + 1..size {
                if let Some(v) = cur.get(i, j).valuation() {
                    if best.map_or(true, |b| (v, i, j) < b) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (_, i, j) = best.ok_or(Error::Degenerate)?;
        swap(&mut cur, &mut c, k, i);
        let j = if j == k { i } else { j };
        swap(&mut cur, &mut c, k + 1, j);
        // divide row/col k by alpha; C <- C diag(alpha at k)
        let alpha = cur.get(k, k + 1).clone();
        for col in 0..size {
            let x = cur.get(k, col).checked_div(&alpha)?;
            cur.set(k, col, x);
        }
        for row in 0..size {
            let x = cur.get(row, k).checked_div(&alpha)?;
            cur.set(row, k, x);
        }
        for row in 0..size {
            let x = c.get(row, k) * &alpha;
            c.set(row, k, x);
        }
        for m in k + 2..size {
            let lam = -cur.get(m, k + 1).clone();
            if !lam.is_zero() {
                add(&mut cur, &mut c, m, k, &lam);
            }
            let mu = cur.get(m, k).clone();
            if !mu.is_zero() {
                add(&mut cur, &mut c, m, k + 1, &mu);
            }
        }
    }
    Ok(c)
}
