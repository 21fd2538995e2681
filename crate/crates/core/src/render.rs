//! Ball diagrams: a ball of radius `p^e` drawn as a disc holding its `p`
//! sub-balls of radius `p^(e-1)`, recursively.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::padic::PadicContext;
use crate::shape::{Radius, Shape};

const MAX_NODES: usize = 20_000;
const PALETTE: [&str; 6] = ["#1f4e79", "#c0504d", "#4f8a3c", "#8064a2", "#d08a1c", "#2a8c8c"];

fn top_radius(shape: &Shape) -> Result<(Radius, &'static str)> {
    match shape {
        Shape::Ball { r, .. } => Ok((*r, "ball")),
        Shape::Cylinder { r, .. } => Ok((*r, "cylinder (first pair)")),
        _ => Err(Error::Domain("render draws balls and cylinders only".into())),
    }
}

fn check_size(p: u32, depth: u32) -> Result<()> {
    let mut total = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level = level.saturating_mul(p as usize);
        total = total.saturating_add(level);
    }
    if total > MAX_NODES {
        return Err(Error::Domain(format!("{} balls at depth {}; limit is {}", total, depth, MAX_NODES)));
    }
    Ok(())
}

/// Indented tree of the sub-balls, one per line, labelled by center and radius.
pub fn render_ascii(shape: &Shape, ctx: PadicContext, depth: u32) -> Result<String> {
    let (r, kind) = top_radius(shape)?;
    let p = ctx.p();
    check_size(p, depth)?;
    let mut out = String::new();
    let _ = writeln!(out, "{} of radius {}^{} in Q_{}", kind, p, r.0, p);
    fn walk(out: &mut String, ctx: PadicContext, center: &crate::PadicNumber, e: i64, level: u32, depth: u32) {
        let _ = writeln!(out, "{}B({}, {}^{})", "  ".repeat(level as usize), center.to_literal(), ctx.p(), e);
        if level == depth {
            return;
        }
        for j in 0..ctx.p() {
            let c = center + &(&ctx.pow_p(-e) * &ctx.int(j as i64));
            walk(out, ctx, &c, e - 1, level + 1, depth);
        }
    }
    walk(&mut out, ctx, &ctx.zero(), r.0, 0, depth);
    Ok(out)
}

/// Standalone SVG 1.1 document.
pub fn render_svg(shape: &Shape, ctx: PadicContext, depth: u32) -> Result<String> {
    let (r, kind) = top_radius(shape)?;
    let p = ctx.p();
    check_size(p, depth)?;
    let size = 480.0;
    let big = size / 2.0 - 12.0;
    let mut body = String::new();
    let s = (PI / p as f64).sin();
    let shrink = 0.92 * s / (1.0 + s);
    #[allow(clippy::too_many_arguments)]
    fn disc(body: &mut String, p: u32, cx: f64, cy: f64, rad: f64, level: u32, depth: u32, shrink: f64, label: Option<u32>) {
        let color = PALETTE[level as usize % PALETTE.len()];
        let _ = writeln!(
            body,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"{}\" fill-opacity=\"0.12\" stroke=\"{}\" stroke-width=\"1\"/>",
            cx, cy, rad, color, color
        );
        if let Some(d) = label {
            let fs = (rad * 0.5).clamp(6.0, 28.0);
            let _ = writeln!(
                body,
                "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"{:.1}\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"monospace\">{}</text>",
                cx, cy, fs, d
            );
        }
        if level == depth {
            return;
        }
        let rc = rad * shrink;
        let dist = if p == 1 { 0.0 } else { rad - rc / 0.92 };
        for j in 0..p {
            let ang = -PI / 2.0 + 2.0 * PI * j as f64 / p as f64;
            let lab = if level == 0 && rc >= 8.0 { Some(j) } else { None };
            disc(body, p, cx + dist * ang.cos(), cy + dist * ang.sin(), rc, level + 1, depth, shrink, lab);
        }
    }
    disc(&mut body, p, size / 2.0, size / 2.0 + 14.0, big, 0, depth, shrink, None);
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        size,
        size + 28.0,
        size,
        size + 28.0
    );
    let _ = writeln!(out, "  <title>{} of radius {}^{} in Q_{}, depth {}</title>", kind, p, r.0, p, depth);
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"16\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">{} of radius {}^{} in Q_{}</text>",
        size / 2.0,
        kind,
        p,
        r.0,
        p
    );
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}
