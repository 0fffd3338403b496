use num_bigint::BigInt;
use num_integer::Integer;

use super::poly::{val, IntPoly};
use crate::error::{Error, Result};
use crate::padic::{integer_approximant, PadicContext, PadicNumber};
use crate::rational::mod_inverse;

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// Lifts `a0` to the root of `f` congruent to it, given
/// `v_p(f(a0)) >= 2i + 1` and `v_p(f'(a0)) = i`.
///
/// Newton steps `a <- a - f(a)/f'(a)` keep `v_p(f'(a)) = i` and double the
/// number of correct digits. The returned root carries `ctx.prec` relative
/// digits and satisfies `v_p(f(root)) >= ctx.prec`.
pub fn hensel_lift(
    f: &IntPoly,
    a0: &PadicNumber,
    i: u32,
    ctx: &PadicContext,
) -> Result<PadicNumber> {
    let p = ctx.p();
    let start = integer_approximant(a0).ok_or_else(|| {
        Error::InvalidParameters("Hensel lifting needs a p-adic integer start".into())
    })?;
    let df = f.derivative();
    let v_f = val(&f.eval(&start), p);
    let v_df = val(&df.eval(&start), p);
    let ok = v_df == Some(i as u64) && v_f.is_none_or(|v| v > 2 * i as u64);
    if !ok {
        return Err(Error::HenselPrecondition {
            fa0: show(v_f),
            dfa0: show(v_df),
            i,
        });
    }

    let lift_to = |mut a: BigInt, target: u64| -> BigInt {
        // working modulus leaves room for the p^i lost in each division
        let modulus = BigInt::from(p).pow((target + i as u64 + 1) as u32);
        loop {
            let fa = f.eval(&a);
            let Some(vf) = val(&fa, p) else { return a };
            if vf >= target + i as u64 {
                return a;
            }
            let dfa = df.eval(&a);
            let pi = BigInt::from(p).pow(i);
            let unit = &dfa / &pi;
            let inv = mod_inverse(&unit, &modulus).expect("f'(a)/p^i is a unit");
            let step = (&fa / &pi) * inv;
            a = (a - step).mod_floor(&modulus);
        }
    };

    let n = ctx.prec() as u64;
    let rough = lift_to(start, n + 1);
    // a root of positive valuation needs more absolute digits
    let w = val(&rough, p).unwrap_or(n).min(n);
    let root = lift_to(rough, n + w + 1);
    let lifted = PadicNumber::from_parts(p, 0, root, (n + w + 1) as i64);
    Ok(lifted.truncated(ctx.prec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_mod_seven() {
        let ctx = PadicContext::new(7, 12).unwrap();
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let r = hensel_lift(&f, &ctx.embed_int(3), 0, &ctx).unwrap();
        assert_eq!(&r.digits()[..2], &[3, 1]);
        let residual = f.eval_rational(&r.to_rational());
        assert!(residual.valuation(7).unwrap() >= 12);
    }

    #[test]
    fn linear_returns_constant() {
        let ctx = PadicContext::new(5, 8).unwrap();
        let f = IntPoly::from_i64(&[-17, 1]);
        let r = hensel_lift(&f, &ctx.embed_int(17), 0, &ctx).unwrap();
        assert_eq!(r, ctx.embed_int(17));
    }

    #[test]
    fn cube_root_of_one() {
        let ctx = PadicContext::new(5, 8).unwrap();
        let f = IntPoly::from_i64(&[-1, 0, 0, 1]);
        let r = hensel_lift(&f, &ctx.one(), 0, &ctx).unwrap();
        assert_eq!(r, ctx.one());
    }

    #[test]
    fn generalized_lemma_with_i_one() {
        // x^2 = 17 in Q_2 from a0 = 1: f(1) = -16, f'(1) = 2
        let ctx = PadicContext::new(2, 16).unwrap();
        let f = IntPoly::from_i64(&[-17, 0, 1]);
        let r = hensel_lift(&f, &ctx.one(), 1, &ctx).unwrap();
        let residual = f.eval_rational(&r.to_rational());
        assert!(residual.valuation(2).unwrap() >= 16);
    }

    #[test]
    fn precondition_failure_reports_valuations() {
        let ctx = PadicContext::new(5, 8).unwrap();
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        match hensel_lift(&f, &ctx.embed_int(1), 0, &ctx) {
            Err(Error::HenselPrecondition { fa0, dfa0, i }) => {
                assert_eq!((fa0.as_str(), dfa0.as_str(), i), ("0", "0", 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
