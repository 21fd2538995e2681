//! Circle and torus actions, the group `G_p`, the marker-digit embedding of
//! `T_p^4` into the cylinder of radius 1, its semitoric variant and
//! equivariant widths.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::analytic::{cos, sin, sqrt_minus_one};
use crate::ellipsoid::ellipsoid_width;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::polar::{from_polar, to_polar, KOrder, PolarCoords};
use crate::shape::{Capacity, Radius, Shape};

/// A point `(a, b)` of the circle `a^2 + b^2 = 1`.
#[derive(Clone, Debug)]
pub struct CirclePoint {
    pub a: PadicNumber,
    pub b: PadicNumber,
}

impl CirclePoint {
    pub fn new(a: PadicNumber, b: PadicNumber) -> Result<Self> {
        let one = a.ctx().one();
        if !(&a * &a + &b * &b - one).is_zero() {
            return Err(Error::Domain(format!("({}, {}) is not on the unit circle", a, b)));
        }
        Ok(CirclePoint { a, b })
    }

    pub fn identity(ctx: PadicContext) -> Self {
        CirclePoint { a: ctx.one(), b: ctx.zero() }
    }

    /// `(cos t, sin t)` for `t` in `p^d Z_p`.
    pub fn rotation(t: &PadicNumber) -> Result<Self> {
        Ok(CirclePoint { a: cos(t)?, b: sin(t)? })
    }

    /// The rational point `((1 - s^2) / (1 + s^2), 2s / (1 + s^2))`.
    pub fn from_parameter(s: &PadicNumber) -> Result<Self> {
        let ctx = s.ctx();
        let s2 = s * s;
        let den = &ctx.one() + &s2;
        Ok(CirclePoint { a: (&ctx.one() - &s2).checked_div(&den)?, b: (&ctx.int(2) * s).checked_div(&den)? })
    }

    pub fn compose(&self, other: &CirclePoint) -> CirclePoint {
        CirclePoint {
            a: &self.a * &other.a - &self.b * &other.b,
            b: &self.a * &other.b + &other.a * &self.b,
        }
    }

    /// `(a x - b y, b x + a y)`.
    pub fn act(&self, x: &PadicNumber, y: &PadicNumber) -> (PadicNumber, PadicNumber) {
        (&self.a * x - &self.b * y, &self.b * x + &self.a * y)
    }
}

pub fn circle_act(g: &CirclePoint, x: &PadicNumber, y: &PadicNumber) -> (PadicNumber, PadicNumber) {
    g.act(x, y)
}

/// Componentwise action on the first `gs.len()` pairs; the remaining pairs are fixed.
pub fn torus_act(gs: &[CirclePoint], m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    if m.len() % 2 != 0 || gs.len() > m.len() / 2 {
        return Err(Error::Dimension(format!("{} circle factors on a point of length {}", gs.len(), m.len())));
    }
    let mut out = m.to_vec();
    for (j, g) in gs.iter().enumerate() {
        let (x, y) = g.act(&m[2 * j], &m[2 * j + 1]);
        out[2 * j] = x;
        out[2 * j + 1] = y;
    }
    Ok(out)
}

/// Membership in `G_p`: everything when `p != 1 mod 4`, otherwise `ord(a + ib) = 0`.
pub fn gp_contains(g: &CirclePoint) -> Result<bool> {
    let ctx = g.a.ctx();
    if ctx.p() % 4 != 1 {
        return Ok(true);
    }
    let i = sqrt_minus_one(ctx)?;
    Ok((&g.a + &(&i * &g.b)).valuation() == Some(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    InCylinder,
    Marker,
    /// Semitoric map on a point whose first pair vanishes.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Marker {
    pub order: i64,
    pub digit: u32,
    pub role: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceColumn {
    pub z1: String,
    pub k1: (KOrder, KOrder),
    pub second: String,
    pub k2: Option<(KOrder, KOrder)>,
}

/// Digit record of one application of the embedding.
#[derive(Clone, Debug, Serialize)]
pub struct EmbedTrace {
    pub p: u32,
    pub branch: Branch,
    pub u: Option<String>,
    pub markers: Vec<Marker>,
    pub before: TraceColumn,
    pub after: TraceColumn,
}

impl EmbedTrace {
    /// Aligned `Before` / `After` rows.
    pub fn render(&self) -> String {
        let second = if self.before.k2.is_some() { "z2" } else { "x2" };
        let mut rows: Vec<(String, String, String)> = vec![
            ("z1".into(), self.before.z1.clone(), self.after.z1.clone()),
            ("k1'".into(), self.before.k1.0.to_string(), self.after.k1.0.to_string()),
            ("k1''".into(), self.before.k1.1.to_string(), self.after.k1.1.to_string()),
            (second.into(), self.before.second.clone(), self.after.second.clone()),
        ];
        if let (Some(b), Some(a)) = (self.before.k2, self.after.k2) {
            rows.push(("k2'".into(), b.0.to_string(), a.0.to_string()));
            rows.push(("k2''".into(), b.1.to_string(), a.1.to_string()));
        }
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap();
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap().max(6);
        let mut s = String::new();
        let _ = writeln!(s, "{:w0$}  {:>w1$}  After", "", "Before");
        for (l, b, a) in rows {
            let _ = writeln!(s, "{:w0$}  {:>w1$}  {}", l, b, a);
        }
        if let Some(u) = &self.u {
            let _ = writeln!(s, "u = {}", u);
        }
        for m in &self.markers {
            let _ = writeln!(s, "marker {} at order {} ({})", m.digit, m.order, m.role);
        }
        s
    }
}

/// Nonzero digits at orders below 2, keyed by order.
fn low_digits(x: &PadicNumber) -> Result<BTreeMap<i64, u32>> {
    let low = x.low_part(2)?;
    let mut out = BTreeMap::new();
    if let Some(v) = low.valuation() {
        for o in v..2 {
            let d = low.digit(o)?;
            if d != 0 {
                out.insert(o, d);
            }
        }
    }
    Ok(out)
}

fn assemble(ctx: PadicContext, digits: &BTreeMap<i64, u32>) -> PadicNumber {
    let mut acc = ctx.zero();
    for (&o, &d) in digits {
        acc = acc + &ctx.pow_p(o) * &ctx.int(d as i64);
    }
    acc
}

fn shifted(ctx: PadicContext, digits: &BTreeMap<i64, u32>, by: i64) -> PadicNumber {
    let m: BTreeMap<i64, u32> = digits.iter().map(|(&o, &d)| (o + by, d)).collect();
    assemble(ctx, &m)
}

/// Largest even order strictly below `l - 1`.
fn base_marker_order(l: i64) -> i64 {
    let e = l - 2;
    e - e.rem_euclid(2)
}

fn k_marker(k: KOrder) -> (u32, i64) {
    match k {
        KOrder::Finite(k) if k >= 0 => (1, k + 1),
        KOrder::Finite(k) => (2, -k),
        KOrder::Infinite => (3, 1),
    }
}

fn decode_k_marker(digit: u32, dist: i64) -> Result<KOrder> {
    match digit {
        1 => Ok(KOrder::Finite(dist - 1)),
        2 => Ok(KOrder::Finite(-dist)),
        3 if dist == 1 => Ok(KOrder::Infinite),
        _ => Err(Error::NotInImage(format!("marker digit {} at distance {}", digit, dist))),
    }
}

struct Shuffled {
    z1: PadicNumber,
    w: PadicNumber,
    u: Option<PadicNumber>,
    markers: Vec<Marker>,
}

/// Digit rearrangement on the carriers `z1` and `w`.
fn shuffle(z1: &PadicNumber, w: &PadicNumber, in_cyl: bool, k1: Option<(KOrder, KOrder)>, k2_inf: bool) -> Result<Shuffled> {
    let ctx = z1.ctx();
    let dw = low_digits(w)?;
    let d_high = w.high_part(2)?;
    if in_cyl {
        return Ok(Shuffled { z1: z1.clone(), w: &d_high + &shifted(ctx, &dw, -2), u: None, markers: vec![] });
    }
    let dz = low_digits(z1)?;
    let mut ud: BTreeMap<i64, u32> = BTreeMap::new();
    ud.insert(1, 1);
    for (&o, &d) in &dz {
        ud.insert(2 * o - 2, d);
    }
    for (&o, &d) in &dw {
        ud.insert(2 * o - 3, d);
    }
    let l = *ud.keys().next().unwrap();
    let mut markers = vec![];
    let mut cur = base_marker_order(l);
    markers.push(Marker { order: cur, digit: if k2_inf { 2 } else { 1 }, role: "base" });
    if let Some((a, b)) = k1 {
        for (k, role) in [(a, "k1'"), (b, "k1''")] {
            let (digit, dist) = k_marker(k);
            cur -= dist;
            markers.push(Marker { order: cur, digit, role });
        }
    }
    let u = &d_high + &assemble(ctx, &ud);
    let mut all = ud;
    for m in &markers {
        all.insert(m.order, m.digit);
    }
    Ok(Shuffled {
        z1: &z1.high_part(2)? + &ctx.one(),
        w: &d_high + &assemble(ctx, &all),
        u: Some(u),
        markers,
    })
}

struct Unshuffled {
    z1: PadicNumber,
    w: PadicNumber,
    branch: Branch,
    k1: Option<(KOrder, KOrder)>,
    k2_inf: bool,
}

fn unshuffle(z1: &PadicNumber, w: &PadicNumber, k1_markers: bool, allow_k2_inf: bool) -> Result<Unshuffled> {
    let ctx = z1.ctx();
    let mut dw = low_digits(w)?;
    let d_high = w.high_part(2)?;
    match dw.get(&1).copied().unwrap_or(0) {
        0 => {
            if dw.contains_key(&0) {
                return Err(Error::NotInImage("in-cylinder image has a nonzero order-0 digit".into()));
            }
            return Ok(Unshuffled {
                z1: z1.clone(),
                w: &d_high + &shifted(ctx, &dw, 2),
                branch: Branch::InCylinder,
                k1: None,
                k2_inf: false,
            });
        }
        1 => {}
        d => return Err(Error::NotInImage(format!("order-1 digit {} is neither 0 nor 1", d))),
    }
    let dz1 = low_digits(z1)?;
    if dz1.len() != 1 || dz1.get(&0) != Some(&1) {
        return Err(Error::NotInImage("first carrier is not C + 1 with C in p^2 Z_p".into()));
    }
    let pop_lowest = |dw: &mut BTreeMap<i64, u32>| -> Result<(i64, u32, i64)> {
        let (o, d) = dw.pop_first().ok_or_else(|| Error::NotInImage("marker chain too short".into()))?;
        let next = *dw.keys().next().ok_or_else(|| Error::NotInImage("marker chain too short".into()))?;
        Ok((o, d, next - o))
    };
    let mut k1 = None;
    if k1_markers {
        let (_, d2, dist2) = pop_lowest(&mut dw)?;
        let (_, d1, dist1) = pop_lowest(&mut dw)?;
        k1 = Some((decode_k_marker(d1, dist1)?, decode_k_marker(d2, dist2)?));
    }
    let (base, bd, _) = pop_lowest(&mut dw)?;
    let l = *dw.keys().next().unwrap();
    if base != base_marker_order(l) {
        return Err(Error::NotInImage(format!("base marker at order {} for lowest digit at {}", base, l)));
    }
    let k2_inf = match bd {
        1 => false,
        2 if allow_k2_inf => true,
        _ => return Err(Error::NotInImage(format!("base marker digit {}", bd))),
    };
    dw.remove(&1);
    let mut c = BTreeMap::new();
    let mut d = BTreeMap::new();
    for (&o, &v) in &dw {
        if o.rem_euclid(2) == 0 {
            c.insert((o + 2) / 2, v);
        } else {
            d.insert((o + 3) / 2, v);
        }
    }
    Ok(Unshuffled {
        z1: &(z1 - &ctx.one()) + &assemble(ctx, &c),
        w: &d_high + &assemble(ctx, &d),
        branch: Branch::Marker,
        k1,
        k2_inf,
    })
}

/// `(floor(ord z / 2), ord z - floor(ord z / 2))` for primes where `z` fixes the orders.
fn k_from_z(z: &PadicNumber) -> Result<(KOrder, KOrder)> {
    let v = z.valuation().ok_or_else(|| Error::NotInImage("z = 0 outside p = 1 mod 4".into()))?;
    let a = v.div_euclid(2);
    Ok((KOrder::Finite(a), KOrder::Finite(v - a)))
}

fn ord_diff(new: &PadicNumber, old: &PadicNumber) -> Option<i64> {
    Some(new.valuation()? - old.valuation()?)
}

fn sub_ord(z: &PadicNumber, k: KOrder) -> KOrder {
    match (z.valuation(), k) {
        (Some(v), KOrder::Finite(k)) => KOrder::Finite(v - k),
        _ => KOrder::Infinite,
    }
}

fn in_cylinder(k: (KOrder, KOrder)) -> bool {
    k.0 >= KOrder::Finite(0) && k.1 >= KOrder::Finite(0)
}

fn column(z1: &PadicNumber, k1: (KOrder, KOrder), second: &PadicNumber, k2: Option<(KOrder, KOrder)>) -> TraceColumn {
    TraceColumn { z1: z1.to_literal(), k1, second: second.to_literal(), k2 }
}

/// The embedding on the polar coordinates of two pairs.
pub fn embed_polar(c1: &PolarCoords, c2: &PolarCoords) -> Result<(PolarCoords, PolarCoords, EmbedTrace)> {
    let p = c1.z.p();
    let split = p % 4 == 1;
    let k1 = (c1.k1, c1.k2);
    let k2 = (c2.k1, c2.k2);
    let in_cyl = in_cylinder(k1);
    let s = shuffle(&c1.z, &c2.z, in_cyl, if split { Some(k1) } else { None }, c2.k1 == KOrder::Infinite)?;
    let (nk1, nk2) = if !split {
        (k_from_z(&s.z1)?, k_from_z(&s.w)?)
    } else if in_cyl {
        match (k2, ord_diff(&s.w, &c2.z)) {
            ((KOrder::Finite(a), b), Some(shift)) => (k1, (KOrder::Finite(a + shift), b)),
            _ => (k1, k2),
        }
    } else if c2.k1 == KOrder::Infinite {
        ((KOrder::Finite(0), KOrder::Finite(0)), (sub_ord(&s.w, c2.k2), c2.k2))
    } else {
        ((KOrder::Finite(0), KOrder::Finite(0)), (c2.k1, sub_ord(&s.w, c2.k1)))
    };
    let out1 = PolarCoords { z: s.z1.clone(), k1: nk1.0, k2: nk1.1, ab: c1.ab, t: c1.t.clone() };
    let out2 = PolarCoords { z: s.w.clone(), k1: nk2.0, k2: nk2.1, ab: c2.ab, t: c2.t.clone() };
    let trace = EmbedTrace {
        p,
        branch: if in_cyl { Branch::InCylinder } else { Branch::Marker },
        u: s.u.as_ref().map(|u| u.to_literal()),
        markers: s.markers,
        before: column(&c1.z, k1, &c2.z, Some(k2)),
        after: column(&s.z1, nk1, &s.w, Some(nk2)),
    };
    Ok((out1, out2, trace))
}

pub fn embed_polar_inverse(c1: &PolarCoords, c2: &PolarCoords) -> Result<(PolarCoords, PolarCoords)> {
    let p = c1.z.p();
    let split = p % 4 == 1;
    if !in_cylinder((c1.k1, c1.k2)) {
        return Err(Error::NotInImage("first pair outside the cylinder".into()));
    }
    let u = unshuffle(&c1.z, &c2.z, split, split)?;
    let (k1, k2) = match (split, u.branch) {
        (false, _) => (k_from_z(&u.z1)?, k_from_z(&u.w)?),
        (true, Branch::InCylinder) => {
            let k2 = match (c2.k1, ord_diff(&u.w, &c2.z)) {
                (KOrder::Finite(a), Some(shift)) => (KOrder::Finite(a + shift), c2.k2),
                _ => (c2.k1, c2.k2),
            };
            ((c1.k1, c1.k2), k2)
        }
        (true, _) => {
            let k1 = u.k1.unwrap();
            let k2 = if u.k2_inf { (KOrder::Infinite, c2.k2) } else { (c2.k1, sub_ord(&u.w, c2.k1)) };
            (k1, k2)
        }
    };
    if u.branch == Branch::InCylinder && split && !in_cylinder(k1) {
        return Err(Error::NotInImage("in-cylinder branch with first pair outside".into()));
    }
    let out1 = PolarCoords { z: u.z1, k1: k1.0, k2: k1.1, ab: c1.ab, t: c1.t.clone() };
    let out2 = PolarCoords { z: u.w, k1: k2.0, k2: k2.1, ab: c2.ab, t: c2.t.clone() };
    if u.branch == Branch::Marker && in_cylinder((out1.k1, out1.k2)) {
        return Err(Error::NotInImage("marker branch decodes to a point inside the cylinder".into()));
    }
    Ok((out1, out2))
}

fn check_point(m: &[PadicNumber]) -> Result<usize> {
    if m.len() < 4 || m.len() % 2 != 0 {
        return Err(Error::Dimension(format!("point of length {} (need even length >= 4)", m.len())));
    }
    Ok(m.len() / 2)
}

fn check_torus(m: &[PadicNumber]) -> Result<()> {
    for (j, c) in m.chunks(2).enumerate() {
        if c[0].is_zero() && c[1].is_zero() {
            return Err(Error::Domain(format!("pair {} vanishes; the point is not in T", j + 1)));
        }
    }
    Ok(())
}

/// The embedding on a cartesian point of `T_p^{2n}`, acting on pairs 1 and 2.
pub fn equivariant_embed(m: &[PadicNumber]) -> Result<(Vec<PadicNumber>, EmbedTrace)> {
    check_point(m)?;
    check_torus(m)?;
    let c1 = to_polar(&m[0], &m[1])?;
    let c2 = to_polar(&m[2], &m[3])?;
    let (o1, o2, trace) = embed_polar(&c1, &c2)?;
    let (x1, y1) = from_polar(&o1)?;
    let (x2, y2) = from_polar(&o2)?;
    let mut out = m.to_vec();
    out[..4].clone_from_slice(&[x1, y1, x2, y2]);
    Ok((out, trace))
}

pub fn equivariant_inverse(m: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    check_point(m)?;
    check_torus(m)?;
    let c1 = to_polar(&m[0], &m[1])?;
    let c2 = to_polar(&m[2], &m[3])?;
    let (o1, o2) = embed_polar_inverse(&c1, &c2)?;
    let (x1, y1) = from_polar(&o1)?;
    let (x2, y2) = from_polar(&o2)?;
    let mut out = m.to_vec();
    out[..4].clone_from_slice(&[x1, y1, x2, y2]);
    Ok(out)
}

/// The same digit scheme with the first pair in polar form and `x_{s+1}` as second carrier.
pub fn semitoric_embed(m: &[PadicNumber], s: usize) -> Result<(Vec<PadicNumber>, EmbedTrace)> {
    let n = check_point(m)?;
    if s < 1 || s >= n {
        return Err(Error::Domain(format!("s = {} outside 1..{}", s, n - 1)));
    }
    let w = &m[2 * s];
    let ctx = m[0].ctx();
    if m[0].is_zero() && m[1].is_zero() {
        let col = column(&ctx.zero(), (KOrder::Infinite, KOrder::Infinite), w, None);
        let trace = EmbedTrace { p: ctx.p(), branch: Branch::Fixed, u: None, markers: vec![], before: col.clone(), after: col };
        return Ok((m.to_vec(), trace));
    }
    let (out, trace) = semitoric_polar(&to_polar(&m[0], &m[1])?, w)?;
    let (x1, y1) = from_polar(&out.0)?;
    let mut v = m.to_vec();
    v[0] = x1;
    v[1] = y1;
    v[2 * s] = out.1;
    Ok((v, trace))
}

/// Semitoric map on `(polar coordinates of pair 1, x_{s+1})`.
pub fn semitoric_polar(c1: &PolarCoords, w: &PadicNumber) -> Result<((PolarCoords, PadicNumber), EmbedTrace)> {
    let p = c1.z.p();
    let split = p % 4 == 1;
    let k1 = (c1.k1, c1.k2);
    let in_cyl = in_cylinder(k1);
    let s = shuffle(&c1.z, w, in_cyl, if split { Some(k1) } else { None }, false)?;
    let nk1 = if in_cyl {
        k1
    } else if split {
        (KOrder::Finite(0), KOrder::Finite(0))
    } else {
        k_from_z(&s.z1)?
    };
    let out = PolarCoords { z: s.z1.clone(), k1: nk1.0, k2: nk1.1, ab: c1.ab, t: c1.t.clone() };
    let trace = EmbedTrace {
        p,
        branch: if in_cyl { Branch::InCylinder } else { Branch::Marker },
        u: s.u.as_ref().map(|u| u.to_literal()),
        markers: s.markers,
        before: column(&c1.z, k1, w, None),
        after: column(&s.z1, nk1, &s.w, None),
    };
    Ok(((out, s.w), trace))
}

pub fn semitoric_polar_inverse(c1: &PolarCoords, w: &PadicNumber) -> Result<(PolarCoords, PadicNumber)> {
    let p = c1.z.p();
    let split = p % 4 == 1;
    if !in_cylinder((c1.k1, c1.k2)) {
        return Err(Error::NotInImage("first pair outside the cylinder".into()));
    }
    let u = unshuffle(&c1.z, w, split, false)?;
    let k1 = match (u.branch, u.k1) {
        (Branch::InCylinder, _) => (c1.k1, c1.k2),
        (_, Some(k)) => k,
        _ => k_from_z(&u.z1)?,
    };
    if u.branch == Branch::Marker && in_cylinder(k1) {
        return Err(Error::NotInImage("marker branch decodes to a point inside the cylinder".into()));
    }
    Ok((PolarCoords { z: u.z1, k1: k1.0, k2: k1.1, ab: c1.ab, t: c1.t.clone() }, u.w))
}

pub fn semitoric_inverse(m: &[PadicNumber], s: usize) -> Result<Vec<PadicNumber>> {
    let n = check_point(m)?;
    if s < 1 || s >= n {
        return Err(Error::Domain(format!("s = {} outside 1..{}", s, n - 1)));
    }
    if m[0].is_zero() && m[1].is_zero() {
        return Ok(m.to_vec());
    }
    let (c1, w) = semitoric_polar_inverse(&to_polar(&m[0], &m[1])?, &m[2 * s])?;
    let (x1, y1) = from_polar(&c1)?;
    let mut v = m.to_vec();
    v[0] = x1;
    v[1] = y1;
    v[2 * s] = w;
    Ok(v)
}

/// Discrete data the embedding depends on: digits of each `z_i` at orders `<= 1`,
/// the first pair's orders and whether the second pair has `k' = inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassKey {
    pub z_low: Vec<String>,
    pub k1: (KOrder, KOrder),
    pub k2_infinite: bool,
}

pub fn class_key(m: &[PadicNumber]) -> Result<ClassKey> {
    check_point(m)?;
    check_torus(m)?;
    let mut z_low = vec![];
    let mut k1 = (KOrder::Infinite, KOrder::Infinite);
    let mut k2_infinite = false;
    for (j, c) in m.chunks(2).enumerate() {
        let pc = to_polar(&c[0], &c[1])?;
        z_low.push(pc.z.low_part(2)?.to_literal());
        match j {
            0 => k1 = (pc.k1, pc.k2),
            1 => k2_infinite = pc.k1 == KOrder::Infinite,
            _ => {}
        }
    }
    Ok(ClassKey { z_low, k1, k2_infinite })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthMode {
    Equivariant,
    Linear,
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthReport {
    pub value: Capacity,
    pub note: Option<String>,
}

/// Exponent `min ord(a_i)` for a centered ellipsoid `diag(a1, a1, ..., an, an)`.
fn paired_diagonal_order(e: &crate::ellipsoid::Ellipsoid) -> Result<i64> {
    let a = &e.matrix;
    let n = a.rows();
    if e.center.iter().any(|c| !c.is_zero()) {
        return Err(Error::Domain("equivariant width needs a centered ellipsoid".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !a.get(i, j).is_zero() {
                return Err(Error::Domain("equivariant width needs a diagonal ellipsoid".into()));
            }
        }
    }
    let mut best = i64::MAX;
    for i in (0..n).step_by(2) {
        if !a.get(i, i).eq_at_precision(a.get(i + 1, i + 1)) {
            return Err(Error::Domain("diagonal coefficients must come in equal pairs".into()));
        }
        best = best.min(a.get(i, i).valuation().ok_or(Error::Singular)?);
    }
    Ok(best)
}

pub fn gromov_width(shape: &Shape, mode: WidthMode) -> Result<WidthReport> {
    let plain = |value| Ok(WidthReport { value, note: None });
    match (shape, mode) {
        (Shape::Ball { r, .. }, _) | (Shape::Cylinder { r, .. }, _) => plain(Capacity::Power(2 * r.0)),
        (Shape::PuncturedTorus { .. }, WidthMode::Equivariant) => plain(Capacity::Zero),
        (Shape::PuncturedTorus { .. }, WidthMode::Linear) => {
            Err(Error::Domain("T is not an ellipsoid; its linear width is not computed".into()))
        }
        (Shape::FullSpace { .. }, WidthMode::Equivariant) => plain(Capacity::Infinite),
        (Shape::FullSpace { dim }, WidthMode::Linear) => Ok(WidthReport {
            value: Capacity::Infinite,
            note: Some(if *dim == 2 {
                "a capacity with this value exists (n = 1)".into()
            } else {
                "no non-equivariant capacity exists for n >= 2; value is the formal supremum".into()
            }),
        }),
        (Shape::Ellipsoid(e), WidthMode::Equivariant) => plain(Capacity::Power(2 * paired_diagonal_order(e)?)),
        (Shape::Ellipsoid(e), WidthMode::Linear) => plain(ellipsoid_width(e)?),
    }
}

/// Whether a `(G_p)^n`-equivariant symplectic embedding `Ball(r) -> Cyl(R)` exists.
pub fn equivariant_embedding_exists(r: Radius, big_r: Radius) -> bool {
    r <= big_r
}
