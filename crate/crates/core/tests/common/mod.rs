//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's root finders or criteria: the
//! searches walk residues digit by digit with plain big-integer arithmetic
//! and certify with Hensel's lemma.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use padic_potts::ExactRational;

/// `v_p(n)` for a nonzero integer, `None` for zero.
pub fn vint(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    Some(v)
}

/// `v_p` of a rational, `None` for zero.
pub fn vrat(r: &ExactRational, p: u64) -> Option<i64> {
    let n = vint(r.numer(), p)? as i64;
    let d = vint(r.denom(), p).expect("denominator nonzero") as i64;
    Some(n - d)
}

/// `r ∈ E_p`: a unit with `v_p(r - 1) >= 1` (`>= 2` for `p = 2`).
pub fn in_ep(r: &ExactRational, p: u64) -> bool {
    if vrat(r, p) != Some(0) {
        return false;
    }
    let need = if p == 2 { 2 } else { 1 };
    vrat(&(r - &ExactRational::one()), p).is_none_or(|v| v >= need)
}

fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

const MAX_DEPTH: u32 = 60;

/// Number of roots of the integer polynomial `coeffs` (lowest degree first)
/// in the class `start + p^depth Z_p`.
///
/// Classes are refined one digit at a time. A class `r + p^j Z_p` is
/// dropped when `p^j` does not divide `f(r)`; it is settled when
/// `v(f(r)) > 2 v(f'(r))` and `j > v(f'(r))`, in which case it holds
/// exactly one root if `v(f(r)) - v(f'(r)) >= j` and none otherwise.
/// Panics if a class is still open at depth 60.
pub fn count_roots_in_class(coeffs: &[BigInt], p: u64, start: u64, depth: u32) -> usize {
    // the content does not move roots but inflates every valuation
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    assert!(!content.is_zero(), "zero polynomial");
    let coeffs: Vec<BigInt> = coeffs.iter().map(|c| c / &content).collect();
    let coeffs = &coeffs[..];
    let df = derivative(coeffs);
    let pb = BigInt::from(p);
    let mut count = 0;
    let mut stack = vec![(BigInt::from(start), depth)];
    while let Some((r, j)) = stack.pop() {
        let fr = vint(&eval(coeffs, &r), p);
        if fr.is_some_and(|v| v < j as u64) {
            continue;
        }
        if let Some(d) = vint(&eval(&df, &r), p) {
            let settled = fr.is_none_or(|v| v > 2 * d) && j as u64 > d;
            if settled {
                if fr.is_none_or(|v| v - d >= j as u64) {
                    count += 1;
                }
                continue;
            }
        }
        assert!(j < MAX_DEPTH, "class {r} mod p^{j} left open");
        let step = pb.pow(j);
        for digit in 0..p {
            stack.push((&r + &step * BigInt::from(digit), j + 1));
        }
    }
    count
}

/// Roots in `E_p`: the class `1 + p Z_p` (or `1 + 4 Z_2`).
pub fn count_ep_roots(coeffs: &[BigInt], p: u64) -> usize {
    count_roots_in_class(coeffs, p, 1, if p == 2 { 2 } else { 1 })
}

/// Existence of `x^k = a` in `Q_p` by a digit search on the unit part.
pub fn kth_root_exists(a: &ExactRational, k: u64, p: u64) -> bool {
    let Some(v) = vrat(a, p) else { return true };
    if v.rem_euclid(k as i64) != 0 {
        return false;
    }
    // unit part as an integer modulo a large power of p
    let pk = BigInt::from(p).pow(80);
    let scale = if v >= 0 {
        ExactRational::from_integer(BigInt::one())
            / ExactRational::from_integer(BigInt::from(p).pow(v as u32))
    } else {
        ExactRational::from_integer(BigInt::from(p).pow((-v) as u32))
    };
    let u = &scale * a;
    let inv = u.denom().extended_gcd(&pk).x.mod_floor(&pk);
    let u_int = (u.numer() * inv).mod_floor(&pk);
    let mut coeffs = vec![BigInt::zero(); k as usize + 1];
    coeffs[0] = -u_int;
    coeffs[k as usize] = BigInt::one();
    // roots of y^k = u are units; search every unit class mod p
    (1..p).any(|y0| count_roots_in_class(&coeffs, p, y0, 1) > 0)
}

/// Integer coefficients of `8m^3 z^2 - (16m^3 - 24m^2 q + 6m q^2 + q^3) z - 8(q-m)^3`.
pub fn half_q_quadratic(q: i64, m: i64) -> Vec<BigInt> {
    let (q, m) = (BigInt::from(q), BigInt::from(m));
    let c2 = BigInt::from(8) * m.pow(3);
    let c1 = -(BigInt::from(16) * m.pow(3) - BigInt::from(24) * m.pow(2) * &q
        + BigInt::from(6) * &m * q.pow(2)
        + q.pow(3));
    let c0 = -(BigInt::from(8) * (&q - &m).pow(3));
    vec![c0, c1, c2]
}
