//! Text form of p-adic values.
//!
//! Grammar: `[-]digits[.digits]` in base p (highest order first, digits above
//! 9 written `A`..`Z`, or `(n)` for larger bases), or a decimal `num/den`,
//! either optionally followed by `+O(p^K)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{ppow, strip_p, PadicContext, PadicNumber};

fn perr(s: &str, why: &str) -> Error {
    Error::Parse(s.to_string(), why.to_string())
}

pub fn digit_char(d: u32) -> String {
    match d {
        0..=9 => char::from(b'0' + d as u8).to_string(),
        10..=35 => char::from(b'A' + (d - 10) as u8).to_string(),
        _ => format!("({})", d),
    }
}

fn parse_digits(s: &str, p: u32, whole: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        let d = match c {
            '0'..='9' => c as u32 - '0' as u32,
            'A'..='Z' => c as u32 - 'A' as u32 + 10,
            'a'..='z' => c as u32 - 'a' as u32 + 10,
            '(' => {
                let mut n = String::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(ch) if ch.is_ascii_digit() => n.push(ch),
                        _ => return Err(perr(whole, "unterminated digit group")),
                    }
                }
                n.parse().map_err(|_| perr(whole, "bad digit group"))?
            }
            ' ' | '_' => continue,
            _ => return Err(perr(whole, &format!("unexpected character {:?}", c))),
        };
        if d >= p {
            return Err(perr(whole, &format!("digit {} is not below p = {}", d, p)));
        }
        out.push(d);
    }
    Ok(out)
}

/// Parses a literal; values without `+O(..)` are exact.
pub fn parse_literal(s: &str, ctx: PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let t = s.trim();
    if t.is_empty() {
        return Err(perr(s, "empty literal"));
    }
    let (body, prec) = match t.find("+O(") {
        Some(i) => {
            let tail = &t[i + 3..];
            let tail = tail.strip_suffix(')').ok_or_else(|| perr(s, "missing ')'"))?;
            let (base, k) = tail.split_once('^').ok_or_else(|| perr(s, "expected O(p^K)"))?;
            if base.trim().parse::<u32>().ok() != Some(p) {
                return Err(perr(s, "precision suffix names a different prime"));
            }
            let k: i64 = k.trim().parse().map_err(|_| perr(s, "bad exponent"))?;
            (t[..i].trim(), Some(k))
        }
        None => (t, None),
    };
    let q = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| perr(s, "bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| perr(s, "bad denominator"))?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        BigRational::new(n, d)
    } else {
        let (neg, rest) = match body.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, body),
        };
        let (int, frac) = match rest.split_once('.') {
            Some((a, b)) => (a, b),
            None => (rest, ""),
        };
        let id = parse_digits(int, p, s)?;
        let fd = parse_digits(frac, p, s)?;
        if id.is_empty() && fd.is_empty() {
            return Err(perr(s, "no digits"));
        }
        let mut n = BigInt::zero();
        for d in id.iter().chain(fd.iter()) {
            n = n * p + *d;
        }
        let q = BigRational::new(n, ppow(p, fd.len() as u64));
        if neg {
            -q
        } else {
            q
        }
    };
    Ok(match prec {
        None => PadicNumber::from_rational(q, ctx),
        Some(k) => PadicNumber::approx_rational(&q, ctx, k),
    })
}

fn digits_with_point(n: &BigInt, p: u32, frac: usize) -> String {
    let mut ds: Vec<u32> = Vec::new();
    let mut m = n.clone();
    let pb = BigInt::from(p);
    while !m.is_zero() {
        let (q, r) = m.div_rem(&pb);
        ds.push(r.try_into().unwrap());
        m = q;
    }
    while ds.len() <= frac {
        ds.push(0);
    }
    let mut out = String::new();
    for (i, d) in ds.iter().enumerate().rev() {
        out.push_str(&digit_char(*d));
        if i == frac && frac > 0 {
            out.push('.');
        }
    }
    out
}

/// Formats a value so that `parse_literal` recovers it exactly (exact values)
/// or recovers the same digits and precision (approximate values).
pub fn format_literal(x: &PadicNumber) -> String {
    let p = x.p();
    if let Some(q) = x.exact_value() {
        if q.is_zero() {
            return "0".to_string();
        }
        let (e, rest) = strip_p(q.denom(), p);
        if rest.is_one() {
            let body = digits_with_point(&q.numer().abs(), p, e as usize);
            return if q.is_negative() { format!("-{}", body) } else { body };
        }
        return format!("{}/{}", q.numer(), q.denom());
    }
    let k = x.abs_precision();
    let lo = x.valuation().map_or(0, |v| v.min(0)).min(k.min(0));
    let hi = (k - 1).max(0);
    let mut out = String::new();
    for o in (lo..=hi).rev() {
        let d = if o < k { x.digit(o).unwrap() } else { 0 };
        out.push_str(&digit_char(d));
        if o == 0 && lo < 0 {
            out.push('.');
        }
    }
    if lo == 0 && hi == 0 && k <= 0 {
        out = "0".to_string();
    }
    format!("{}+O({}^{})", out, p, k)
}
