//! Solvability of `x^k = a` in `Q_p` and computation of the roots.
//!
//! Existence is decided from the canonical digits of `a`:
//!
//! * `k | γ(a)` is always necessary;
//! * `k = 2`, `p` odd: `a_0` is a quadratic residue mod `p`;
//! * `k = 2`, `p = 2` (and every even `k = 2m`, `m` odd): `a_1 = a_2 = 0`;
//! * `(k, p) = 1`: `a_0` is a `k`-residue mod `p`;
//! * `k = mp`, `(m, p) = 1`, `p` odd: `a_0` is an `m`-residue and
//!   `a_0^p ≡ a_0 + a_1 p (mod p^2)`.
//!
//! Roots are then built from a residue search modulo `p^(2 v_p(k) + 1)`
//! followed by Hensel lifting.

mod hensel;
pub mod poly;

pub use hensel::hensel_lift;
pub use poly::{isolate_roots, IntPoly, IsolatedRoot, Isolation};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::rational::small_valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    ValuationDivisibility,
    QuadraticResidue,
    KResidue,
    PDivisibleExponentCongruence,
    P2DigitCondition,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Criterion::ValuationDivisibility => "valuation-divisibility",
            Criterion::QuadraticResidue => "quadratic-residue",
            Criterion::KResidue => "k-residue",
            Criterion::PDivisibleExponentCongruence => "p-divisible-exponent-congruence",
            Criterion::P2DigitCondition => "p2-digit-condition",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootReport {
    pub exists: bool,
    /// The condition that settled the decision.
    pub criterion: Criterion,
    pub roots: Vec<PadicNumber>,
}

impl RootReport {
    fn absent(criterion: Criterion) -> Self {
        RootReport {
            exists: false,
            criterion,
            roots: Vec::new(),
        }
    }
}

fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    let mut result = 1u128;
    let mut b = base as u128 % m as u128;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    result as u64
}

/// `a0` is a `k`-th power mod `p`: `a0^((p-1)/gcd(k, p-1)) ≡ 1 (mod p)`.
pub fn is_residue(a0: u64, k: u64, p: u64) -> bool {
    let g = k.gcd(&(p - 1));
    pow_mod(a0, (p - 1) / g, p) == 1
}

/// `x^2 = a`.
pub fn sqrt_decide(a: &PadicNumber, ctx: &PadicContext) -> Result<RootReport> {
    decide_power(a, 2, ctx)
}

/// `x^k = a` for `k > 2` with `v_p(k) <= 1`.
pub fn kth_root_decide(a: &PadicNumber, k: u64, ctx: &PadicContext) -> Result<RootReport> {
    if k <= 2 {
        return Err(Error::InvalidParameters(format!(
            "kth_root_decide needs k > 2, got {k}"
        )));
    }
    decide_power(a, k, ctx)
}

fn decide_power(a: &PadicNumber, k: u64, ctx: &PadicContext) -> Result<RootReport> {
    let p = ctx.p();
    if a.is_zero() {
        return Err(Error::ZeroOperand);
    }
    let vk = small_valuation(k, p);
    if vk >= 2 {
        return Err(Error::UnsupportedExponent { k, p, vk });
    }
    let gamma = a.valuation()?;
    if gamma.rem_euclid(k as i64) != 0 {
        return Ok(RootReport::absent(Criterion::ValuationDivisibility));
    }
    let a0 = a.digit(0);
    let (exists, criterion) = if k.is_multiple_of(2) && p == 2 {
        // every unit is an m-th power for odd m, so x^(2m) = a reduces to a square root
        if a.relative_precision() < 3 {
            return Err(Error::InsufficientPrecision {
                needed: 3,
                available: a.relative_precision() as i64,
            });
        }
        (
            a.digit(1) == 0 && a.digit(2) == 0,
            Criterion::P2DigitCondition,
        )
    } else if k == 2 {
        (is_residue(a0, 2, p), Criterion::QuadraticResidue)
    } else if vk == 0 {
        (is_residue(a0, k, p), Criterion::KResidue)
    } else {
        if a.relative_precision() < 2 {
            return Err(Error::InsufficientPrecision {
                needed: 2,
                available: a.relative_precision() as i64,
            });
        }
        let m = k / p;
        let p2 = p * p;
        let lhs = pow_mod(a0, p, p2);
        let rhs = (a0 + a.digit(1) * p) % p2;
        (
            is_residue(a0, m, p) && lhs == rhs,
            Criterion::PDivisibleExponentCongruence,
        )
    };
    if !exists {
        return Ok(RootReport::absent(criterion));
    }
    let roots = power_roots(a, k, ctx)?;
    Ok(RootReport {
        exists: true,
        criterion,
        roots,
    })
}

/// Initial-search exponent for `y^k = u`: `2 v_p(k) + 1`, raised to
/// `v_2(k) + 3` for even `k` over `Q_2`.
pub fn search_exponent(k: u64, p: u64) -> u32 {
    let vk = small_valuation(k, p);
    let base = 2 * vk + 1;
    if p == 2 && k.is_multiple_of(2) {
        base.max(vk + 3)
    } else {
        base
    }
}

/// All roots of `x^k = a` in `Q_p`, found by residue search on the unit
/// part and lifted with `i = v_p(k)`.
///
/// Roots carry `min(ctx.prec, prec(a) - v_p(k))` relative digits, the
/// precision to which `a` determines them.
pub fn power_roots(a: &PadicNumber, k: u64, ctx: &PadicContext) -> Result<Vec<PadicNumber>> {
    let p = ctx.p();
    let gamma = a.valuation()?;
    let vk = small_valuation(k, p);
    let e = search_exponent(k, p);
    let modulus = BigInt::from(p).pow(e);
    let u = a.unit().clone();
    let target = u.mod_floor(&modulus);
    let f = IntPoly::new({
        let mut c = vec![BigInt::from(0); k as usize + 1];
        c[0] = -u.clone();
        c[k as usize] = BigInt::from(1);
        c
    });
    let keep = (a.relative_precision() as i64 - vk as i64).clamp(1, ctx.prec() as i64) as u32;
    let lift_ctx = ctx.with_prec(a.relative_precision().max(ctx.prec()) + 2 * vk + 2);

    let mut roots: Vec<PadicNumber> = Vec::new();
    let pb = BigInt::from(p);
    let mut y = BigInt::from(1);
    while y < modulus {
        if !(&y % &pb == BigInt::from(0)) && y.modpow(&BigInt::from(k), &modulus) == target {
            let start = PadicNumber::from_parts(p, 0, y.clone(), e as i64);
            let lifted = hensel_lift(&f, &start, vk, &lift_ctx)?.truncated(keep);
            if !roots.iter().any(|r| r.agreement(&lifted) >= keep as i64) {
                roots.push(lifted);
            }
        }
        y += 1;
    }
    let shift = gamma / k as i64;
    let mut out: Vec<PadicNumber> = roots
        .into_iter()
        .map(|r| PadicNumber::from_parts(p, shift, r.unit().clone(), r.relative_precision() as i64))
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("total order"));
    Ok(out)
}

/// Roots of `a z^2 + b z + c` via `(-b ± sqrt(D)) / 2a`, `D = b^2 - 4ac`.
pub fn solve_quadratic(
    a: &PadicNumber,
    b: &PadicNumber,
    c: &PadicNumber,
    ctx: &PadicContext,
) -> Result<Vec<PadicNumber>> {
    if a.is_zero() {
        return Err(Error::InvalidParameters(
            "leading coefficient is zero to precision".into(),
        ));
    }
    let disc = &(b * b) - &(a * c).mul_int(4);
    if disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let report = sqrt_decide(&disc, ctx)?;
    if !report.exists {
        return Ok(Vec::new());
    }
    let two_a = a.mul_int(2);
    let root = &report.roots[0];
    let plus = (&(-b) + root).checked_div(&two_a)?;
    let minus = (&(-b) - root).checked_div(&two_a)?;
    let mut out = vec![plus, minus];
    out.sort_by(|x, y| x.partial_cmp(y).expect("total order"));
    Ok(out)
}
