//! Power-series `exp_p` and `log_p` on their convergence domains.

use num_bigint::BigInt;

use super::{ep_threshold, PadicContext, PadicNumber};
use crate::error::{Error, Result};
use crate::rational::small_valuation;

/// `n` as a p-adic number carrying `prec` relative digits (exact for `n < p^prec`).
fn exact_int(p: u64, n: u64, prec: u32) -> PadicNumber {
    PadicNumber::from_parts(p, 0, BigInt::from(n), prec as i64 + 64)
}

fn floor_log(p: u64, n: u64) -> i64 {
    let mut e = 0;
    let mut acc = p;
    while acc <= n {
        acc = acc.saturating_mul(p);
        e += 1;
    }
    e
}

/// `exp_p(x) = sum x^n / n!` for `v_p(x) >= 1` (`>= 2` when `p = 2`).
///
/// The result is a unit in `E_p` known to `min(ctx.prec, abs(x))` digits.
/// Summation stops once `n v - (n-1)/(p-1)`, a lower bound for
/// `v_p(x^n / n!)` that increases with `n`, reaches the target.
pub fn exp_p(x: &PadicNumber, ctx: &PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    assert_eq!(x.prime(), p);
    let need = ep_threshold(p);
    let target = (ctx.prec() as i64).min(x.absolute_precision());
    if target < need {
        return Err(Error::Convergence {
            function: "exp_p",
            condition: format!("argument known to at least p^{need}"),
        });
    }
    let one = exact_int(p, 1, target as u32).truncated_abs(target);
    if x.is_zero() {
        return Ok(one);
    }
    let v = x.valuation()?;
    if v < need {
        return Err(Error::Convergence {
            function: "exp_p",
            condition: format!("v_{p}(x) >= {need}, got {v}"),
        });
    }
    let pm1 = p as i64 - 1;
    let mut sum = one.clone();
    let mut term = one;
    let mut n: u64 = 1;
    loop {
        let ni = n as i64;
        if ni * v * pm1 - (ni - 1) >= target * pm1 {
            break;
        }
        term = (&term * x)
            .checked_div(&exact_int(p, n, x.relative_precision()))
            .expect("n is nonzero");
        sum = &sum + &term;
        n += 1;
    }
    Ok(sum.truncated_abs(target))
}

/// `log_p(x) = sum (-1)^(n+1) (x-1)^n / n` for `x` in `E_p`.
///
/// Known to absolute precision `abs(x)` (capped at `ctx.prec` relative digits).
pub fn log_p(x: &PadicNumber, ctx: &PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    assert_eq!(x.prime(), p);
    if !x.in_ep() {
        return Err(Error::Convergence {
            function: "log_p",
            condition: "argument in E_p (|x - 1|_p < p^(-1/(p-1)))".into(),
        });
    }
    let u = x - &exact_int(p, 1, x.relative_precision());
    if u.is_zero() {
        return Ok(PadicNumber::zero_to(p, u.absolute_precision()));
    }
    let v = u.valuation()?;
    let target = u.absolute_precision().min(v + ctx.prec() as i64);
    let mut sum = PadicNumber::exact_zero(p);
    let mut power = PadicNumber::from_parts(p, 0, BigInt::from(1), u.relative_precision() as i64);
    let mut n: u64 = 1;
    loop {
        let ni = n as i64;
        if ni * v - floor_log(p, n) >= target {
            break;
        }
        power = &power * &u;
        let vn = small_valuation(n, p);
        let mut term = power
            .checked_div(&exact_int(p, n, u.relative_precision() + vn))
            .expect("n is nonzero");
        if n.is_multiple_of(2) {
            term = -term;
        }
        sum = &sum + &term;
        n += 1;
    }
    Ok(sum.truncated_abs(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ExactRational;

    #[test]
    fn trivial_values() {
        let c = PadicContext::new(3, 10).unwrap();
        let e = exp_p(&PadicNumber::zero_to(3, 10), &c).unwrap();
        assert_eq!(e, c.one());
        let l = log_p(&c.one(), &c).unwrap();
        assert!(l.is_zero());
    }

    #[test]
    fn domain_errors() {
        let c = PadicContext::new(3, 10).unwrap();
        assert!(matches!(
            exp_p(&c.embed_int(2), &c),
            Err(Error::Convergence { .. })
        ));
        let c2 = PadicContext::new(2, 10).unwrap();
        assert!(exp_p(&c2.embed_int(2), &c2).is_err());
        assert!(exp_p(&c2.embed_int(4), &c2).is_ok());
        assert!(log_p(&c.embed_int(2), &c).is_err());
        assert!(log_p(&c2.embed_int(3), &c2).is_err());
    }

    #[test]
    fn exp_leading_terms() {
        // exp(p) = 1 + p + p^2/2 + ... so exp(p) = 1 + p mod p^2
        for p in [3u64, 5, 7] {
            let c = PadicContext::new(p, 12).unwrap();
            let e = exp_p(&c.embed_int(p as i64), &c).unwrap();
            assert_eq!(e.digit(0), 1);
            assert_eq!(e.digit(1), 1);
            assert!(e.in_ep());
        }
    }

    #[test]
    fn exp_matches_truncated_rational_series() {
        // independent: exact rational partial sum with many terms
        let p = 5u64;
        let c = PadicContext::new(p, 12).unwrap();
        let x = ExactRational::from(10);
        let mut sum = ExactRational::zero();
        let mut term = ExactRational::one();
        for n in 1..60i64 {
            sum = &sum + &term;
            term = &(&term * &x) / &ExactRational::from(n);
        }
        let expected = c.embed(&sum);
        let got = exp_p(&c.embed(&x), &c).unwrap();
        assert!(got.agreement(&expected) >= 12);
    }

    #[test]
    fn log_of_four_roundtrip() {
        let c = PadicContext::new(3, 12).unwrap();
        let z = c.embed_int(4);
        let h = log_p(&z, &c).unwrap();
        assert_eq!(h.valuation().unwrap(), 1);
        let back = exp_p(&h, &c).unwrap();
        assert!(back.agreement(&z) >= 10);
    }

    #[test]
    fn log_is_additive() {
        let c = PadicContext::new(2, 16).unwrap();
        let a = c.embed_int(5);
        let b = c.embed_int(-3);
        let lhs = log_p(&(&a * &b), &c).unwrap();
        let rhs = &log_p(&a, &c).unwrap() + &log_p(&b, &c).unwrap();
        assert!(lhs.agreement(&rhs) >= 14);
    }
}
