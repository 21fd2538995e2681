//! Test-side rational arithmetic, independent of the library's digit code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padiq::{PadicContext, PadicNumber};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pp(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub fn p_pow_q(p: u32, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pp(p, e as u32))
    } else {
        BigRational::new(BigInt::one(), pp(p, (-e) as u32))
    }
}

fn strip(n: &BigInt, p: u32) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        k += 1;
    }
    (k, n)
}

/// `ord_p(q)`, `None` for zero.
pub fn ord(q: &BigRational, p: u32) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(strip(q.numer(), p).0 - strip(q.denom(), p).0)
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Fractional digits: entry `j - 1` is the digit at order `-j`.
pub fn frac_digits(q: &BigRational, p: u32) -> Vec<u32> {
    let k = match ord(q, p) {
        Some(v) if v < 0 => (-v) as u32,
        _ => return vec![],
    };
    let m = pp(p, k);
    let scaled = q * BigRational::from_integer(m.clone());
    let r = (scaled.numer() * inv_mod(scaled.denom(), &m)).mod_floor(&m);
    let mut low_first = Vec::new();
    let mut r = r;
    for _ in 0..k {
        let (q2, d) = r.div_mod_floor(&BigInt::from(p));
        low_first.push(d.try_into().unwrap());
        r = q2;
    }
    low_first.reverse();
    low_first
}

pub fn frac_part(q: &BigRational, p: u32) -> BigRational {
    frac_digits(q, p)
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, &d)| acc + p_pow_q(p, -(j as i64 + 1)) * BigRational::from_integer(d.into()))
}

pub fn int_part(q: &BigRational, p: u32) -> BigRational {
    q - frac_part(q, p)
}

/// Digit at a non-negative order of a p-adic integer.
pub fn int_digit(q: &BigRational, p: u32, order: u32) -> u32 {
    let m = pp(p, order + 1);
    let r = (q.numer() * inv_mod(q.denom(), &m)).mod_floor(&m);
    ((r / pp(p, order)) % BigInt::from(p)).try_into().unwrap()
}

pub fn is_integral(q: &BigRational, p: u32) -> bool {
    ord(q, p).map_or(true, |v| v >= 0)
}

/// Rational of order `>= min_ord`: `n / (p^j u)` with `u` prime to `p`.
pub fn random_q(r: &mut Rng8, p: u32, min_ord: i64, max_den_pow: u32) -> BigRational {
    loop {
        let n = BigInt::from(r.gen_range(-5000i64..5000));
        let u = loop {
            let u = r.gen_range(1i64..40);
            if u % p as i64 != 0 {
                break u;
            }
        };
        let j = r.gen_range(0..=max_den_pow) as i64;
        let q = BigRational::new(n, BigInt::from(u)) * p_pow_q(p, -j);
        if ord(&q, p).map_or(true, |v| v >= min_ord) {
            return q;
        }
    }
}

pub fn random_nonzero_q(r: &mut Rng8, p: u32, min_ord: i64, max_den_pow: u32) -> BigRational {
    loop {
        let q = random_q(r, p, min_ord, max_den_pow);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn num(ctx: PadicContext, q: &BigRational) -> PadicNumber {
    PadicNumber::from_rational(q.clone(), ctx)
}

pub fn exact(x: &PadicNumber) -> BigRational {
    x.exact_value().expect("exact value").clone()
}
