//! Closed-form classification of the `k = 3` fixed points.

use num_bigint::BigInt;
use serde::Serialize;

use super::{cubic_for_m, rational_in_ep, PottsParameters, ThetaCase};
use crate::error::{Error, Result};
use crate::padic::{ep_threshold, PadicContext, PadicNumber};
use crate::rational::ExactRational;
use crate::roots::{hensel_lift, isolate_roots, solve_quadratic, IntPoly};

fn v(n: i64, p: u64) -> i64 {
    ExactRational::from(n).valuation(p).unwrap_or(i64::MAX)
}

/// Which sufficient condition put `z_3 = ((m-q)/m)^3` in `E_p` at `θ = 1 - q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theta1mqCase {
    /// `p = 2`, `|q|_2 < |2m|_2`.
    A1,
    /// `p ≠ 2`, `|q|_p < |m|_p`.
    A2,
    /// `p ≠ 2`, `|q|_p = |m|_p`, `x^2 + x + 1 ≡ 0 (mod p)` for `x = 1 - q/m`.
    A3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theta1mqVerdict {
    pub member: bool,
    pub case: Option<Theta1mqCase>,
    pub z3: ExactRational,
}

/// Decides `z_3 = ((m-q)/m)^3 ∈ E_p` from valuations of `q` and `m` alone.
pub fn classify_theta_1mq(p: u64, q: u64, m: u64) -> Theta1mqVerdict {
    let (qi, mi) = (q as i64, m as i64);
    let z3 = ExactRational::new(mi - qi, mi)
        .expect("m is nonzero")
        .pow(3);
    let (vq, vm) = (v(qi, p), v(mi, p));
    let case = if p == 2 {
        (vq > vm + 1).then_some(Theta1mqCase::A1)
    } else if vq > vm {
        Some(Theta1mqCase::A2)
    } else if vq == vm {
        let x = &ExactRational::one() - &ExactRational::new(qi, mi).expect("m is nonzero");
        let poly = &(&x.pow(2) + &x) + &ExactRational::one();
        poly.valuation(p)
            .is_none_or(|e| e >= 1)
            .then_some(Theta1mqCase::A3)
    } else {
        None
    };
    Theta1mqVerdict {
        member: case.is_some(),
        case,
        z3,
    }
}

/// Branches of the `θ = 1 + q/2` analysis, with the number of `E_p`
/// solutions of `8m^3 z^2 - (16m^3 - 24m^2 q + 6m q^2 + q^3) z - 8(q-m)^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theta1pq2Case {
    /// `q = 2m`: the roots are `1` and `-1`, neither counted.
    QEqualsTwoM,
    /// `|m|_p > |q|_p` and `sqrt(-3) ∈ Q_p`: two solutions.
    A,
    /// `p = 2`, `|q/(2m) - 1|_2 < 1/4`: one solution.
    B1,
    /// `p = 3`, `|m|_3 <= |q|_3`: one solution.
    B2,
    /// `p > 3`, `|m|_p = |q|_p`, `|q - 2m|_p < |q|_p`: one solution.
    B3,
    None,
}

impl Theta1pq2Case {
    pub fn count(self) -> usize {
        match self {
            Theta1pq2Case::A => 2,
            Theta1pq2Case::B1 | Theta1pq2Case::B2 | Theta1pq2Case::B3 => 1,
            Theta1pq2Case::QEqualsTwoM | Theta1pq2Case::None => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theta1pq2Outcome {
    pub case: Theta1pq2Case,
    pub solutions: Vec<PadicNumber>,
}

/// Coefficients `[c0, c1, c2]` of the `θ = 1 + q/2` quadratic.
pub fn theta_1pq2_quadratic(q: u64, m: u64) -> [BigInt; 3] {
    let (q, m) = (BigInt::from(q), BigInt::from(m));
    let m2 = &m * &m;
    let m3 = &m2 * &m;
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    let qm = &q - &m;
    [
        -(BigInt::from(8) * &qm * &qm * &qm),
        -(BigInt::from(16) * &m3 - BigInt::from(24) * &m2 * &q + BigInt::from(6) * &m * &q2 + q3),
        BigInt::from(8) * m3,
    ]
}

fn sqrt_minus_three_exists(p: u64) -> bool {
    match p {
        2 | 3 => false,
        _ => p % 3 == 1,
    }
}

pub fn theta_1pq2_case(p: u64, q: u64, m: u64) -> Theta1pq2Case {
    if q == 2 * m {
        return Theta1pq2Case::QEqualsTwoM;
    }
    let (qi, mi) = (q as i64, m as i64);
    let (vq, vm) = (v(qi, p), v(mi, p));
    if vm < vq && sqrt_minus_three_exists(p) {
        return Theta1pq2Case::A;
    }
    if p == 2 {
        let alpha = &ExactRational::new(qi, 2 * mi).expect("m is nonzero") - &ExactRational::one();
        if alpha.valuation(2).is_none_or(|e| e >= 3) {
            return Theta1pq2Case::B1;
        }
        return Theta1pq2Case::None;
    }
    if p == 3 && vm >= vq {
        return Theta1pq2Case::B2;
    }
    if p > 3 && vm == vq && v(qi - 2 * mi, p) > vq {
        return Theta1pq2Case::B3;
    }
    Theta1pq2Case::None
}

/// Working precision used before results are settled to `ctx.prec` digits.
pub(crate) fn working(ctx: &PadicContext) -> PadicContext {
    ctx.widened(ctx.prec() + 8)
}

/// Every root of `f` in `start + p^depth Z_p`, lifted to the precision of `ctx`.
pub(crate) fn roots_in_class(
    f: &IntPoly,
    start: i64,
    depth: u32,
    ctx: &PadicContext,
) -> Result<(Vec<PadicNumber>, usize)> {
    let p = ctx.p();
    let iso = isolate_roots(f, p, &BigInt::from(start), depth, ctx.prec() + depth + 8);
    let mut out = Vec::with_capacity(iso.roots.len());
    for r in &iso.roots {
        let a0 =
            PadicNumber::from_parts(p, 0, r.center.clone(), ctx.prec() as i64 + r.depth as i64);
        out.push(hensel_lift(f, &a0, r.deriv_val, ctx)?);
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("total order"));
    Ok((out, iso.unresolved))
}

/// `E_p` solutions of the `θ = 1 + q/2` quadratic, chosen by the case analysis.
///
/// Two-root and `p = 2` branches use the quadratic formula; the one-root
/// odd-`p` branches lift from `z = 1`.
pub fn classify_theta_1pq2(p: u64, q: u64, m: u64, ctx: &PadicContext) -> Result<Theta1pq2Outcome> {
    if ctx.p() != p {
        return Err(Error::InvalidParameters(
            "context prime differs from p".into(),
        ));
    }
    if m == 0 || m >= q {
        return Err(Error::InvalidParameters(format!("m = {m} outside 1..q-1")));
    }
    let case = theta_1pq2_case(p, q, m);
    let wctx = working(ctx);
    let coeffs = theta_1pq2_quadratic(q, m);
    let poly = IntPoly::new(coeffs.to_vec()).primitive();
    let solutions = match case {
        Theta1pq2Case::QEqualsTwoM | Theta1pq2Case::None => Vec::new(),
        Theta1pq2Case::A | Theta1pq2Case::B1 => {
            let emb = |c: &BigInt| wctx.embed(&ExactRational::from_integer(c.clone()));
            let pc = poly.coeffs();
            solve_quadratic(&emb(&pc[2]), &emb(&pc[1]), &emb(&pc[0]), &wctx)?
                .into_iter()
                .filter(PadicNumber::in_ep)
                .collect()
        }
        Theta1pq2Case::B2 | Theta1pq2Case::B3 => {
            let one = BigInt::from(1);
            let dv = crate::roots::poly::val(&poly.derivative().eval(&one), p);
            let lifted = match dv {
                Some(i) => hensel_lift(&poly, &wctx.one(), i as u32, &wctx).ok(),
                None => None,
            };
            match lifted {
                Some(z) => vec![z],
                None => roots_in_class(&poly, 1, ep_threshold(p) as u32, &wctx)?.0,
            }
            .into_iter()
            .filter(PadicNumber::in_ep)
            .collect()
        }
    };
    Ok(Theta1pq2Outcome { case, solutions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenericRegime {
    /// `|m|_p <= max{|θ-1|_p, |q|_p}`: the reduction to `x ∈ pZ_p` does not apply.
    NotApplicable,
    /// `max{|(θ-1)/m|_p, |q/m|_p} <= p^-3`.
    ThreeRoot,
    /// `|m|_p > max{...}` without the `p^-3` margin.
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericCubicOutcome {
    pub regime: GenericRegime,
    /// Roots of `x^3 + α x + β` in `pZ_p`.
    pub roots_x: Vec<PadicNumber>,
    /// The corresponding `z = x + A/3`, each in `E_p`.
    pub roots_z: Vec<PadicNumber>,
    /// Residue classes the isolator could not decide (clustered roots).
    pub unresolved: usize,
}

/// Roots of the depressed cubic in `pZ_p` and the fixed points they give.
///
/// Requires `p > 3` and a coupling other than `1 - q` and `1 + q/2`.
pub fn generic_cubic_solutions(
    p: u64,
    q: u64,
    m: u64,
    theta: &ExactRational,
    ctx: &PadicContext,
) -> Result<GenericCubicOutcome> {
    if p <= 3 {
        return Err(Error::InvalidParameters(format!("p = {p} must exceed 3")));
    }
    if ctx.p() != p {
        return Err(Error::InvalidParameters(
            "context prime differs from p".into(),
        ));
    }
    let params = PottsParameters::new(p, q, 3, theta.clone())?;
    if params.theta_case() != ThetaCase::Generic {
        return Err(Error::InvalidParameters(
            "theta = 1 - q and theta = 1 + q/2 have closed forms".into(),
        ));
    }
    let vm = v(m as i64, p);
    let vt = (theta - &ExactRational::one())
        .valuation(p)
        .unwrap_or(i64::MAX);
    let vq = v(q as i64, p);
    if vm >= vt.min(vq) {
        return Ok(GenericCubicOutcome {
            regime: GenericRegime::NotApplicable,
            roots_x: Vec::new(),
            roots_z: Vec::new(),
            unresolved: 0,
        });
    }
    let regime = if vt.min(vq) - vm >= 3 {
        GenericRegime::ThreeRoot
    } else {
        GenericRegime::Other
    };
    let cd = cubic_for_m(m, &params)?;
    let wctx = working(ctx);
    let (roots_x, unresolved) = roots_in_class(&cd.depressed_poly(), 0, 1, &wctx)?;
    let shift = wctx.embed(&(&cd.a / &ExactRational::from(3)));
    let roots_z: Vec<PadicNumber> = roots_x.iter().map(|x| x + &shift).collect();
    debug_assert!(roots_z.iter().all(PadicNumber::in_ep));
    debug_assert!(rational_in_ep(theta, p));
    Ok(GenericCubicOutcome {
        regime,
        roots_x,
        roots_z,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p, 12).unwrap()
    }

    #[test]
    fn theta_1mq_examples() {
        let v = classify_theta_1mq(2, 4, 1);
        assert!(v.member);
        assert_eq!(v.case, Some(Theta1mqCase::A1));
        assert_eq!(v.z3, ExactRational::from(-27));

        let v = classify_theta_1mq(3, 3, 1);
        assert_eq!((v.member, v.case), (true, Some(Theta1mqCase::A2)));
        assert_eq!(v.z3, ExactRational::from(-8));

        let v = classify_theta_1mq(7, 42, 7);
        assert_eq!((v.member, v.case), (true, Some(Theta1mqCase::A3)));
        assert_eq!(v.z3, ExactRational::from(-125));

        assert!(!classify_theta_1mq(2, 4, 2).member);
        assert!(!classify_theta_1mq(3, 6, 3).member);
    }

    #[test]
    fn theta_1mq_agrees_with_direct_membership() {
        for p in [2u64, 3, 5, 7] {
            for q in 2..=42u64 {
                if !rational_in_ep(&(&ExactRational::one() - &ExactRational::from(q as i64)), p) {
                    continue;
                }
                for m in 1..=q / 2 {
                    let verdict = classify_theta_1mq(p, q, m);
                    assert_eq!(
                        verdict.member,
                        rational_in_ep(&verdict.z3, p),
                        "p={p} q={q} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn theta_1pq2_examples() {
        let out = classify_theta_1pq2(3, 12, 3, &ctx(3)).unwrap();
        assert_eq!(out.case, Theta1pq2Case::B2);
        assert_eq!(out.solutions.len(), 1);
        assert!(out.solutions[0].in_ep());

        let out = classify_theta_1pq2(3, 3, 1, &ctx(3)).unwrap();
        assert!(out.solutions.is_empty());

        let out = classify_theta_1pq2(3, 6, 3, &ctx(3)).unwrap();
        assert_eq!(out.case, Theta1pq2Case::QEqualsTwoM);
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn theta_1pq2_two_root_branch() {
        // p = 7 has sqrt(-3); |m|_7 > |q|_7
        let out = classify_theta_1pq2(7, 14, 1, &ctx(7)).unwrap();
        assert_eq!(out.case, Theta1pq2Case::A);
        assert_eq!(out.solutions.len(), 2);
        let [c0, c1, c2] = theta_1pq2_quadratic(14, 1);
        let f = IntPoly::new(vec![c0, c1, c2]);
        for z in &out.solutions {
            assert!(z.in_ep());
            let r = f.eval_rational(&z.to_rational());
            assert!(r.valuation(7).unwrap() >= 12);
        }
    }

    #[test]
    fn theta_1pq2_quadratic_at_one() {
        // f(1) = 9 q^2 (2m - q)
        for (q, m) in [(12u64, 3u64), (10, 1), (7, 2)] {
            let [c0, c1, c2] = theta_1pq2_quadratic(q, m);
            let f1 = c0 + c1 + c2;
            let (q, m) = (q as i64, m as i64);
            assert_eq!(f1, BigInt::from(9 * q * q * (2 * m - q)));
        }
    }

    #[test]
    fn generic_preconditions() {
        let c = ctx(5);
        let t = ExactRational::from(1 + 625);
        assert!(generic_cubic_solutions(3, 6, 1, &ExactRational::from(4), &ctx(3)).is_err());
        assert!(generic_cubic_solutions(5, 10, 1, &ExactRational::from(-9), &c).is_err());
        let out = generic_cubic_solutions(5, 125, 5, &ExactRational::from(6), &c).unwrap();
        assert_eq!(out.regime, GenericRegime::NotApplicable);
        let out = generic_cubic_solutions(5, 125, 1, &t, &c).unwrap();
        assert_eq!(out.regime, GenericRegime::ThreeRoot);
        assert_eq!(out.unresolved, 0);
        for z in &out.roots_z {
            assert!(z.in_ep());
        }
    }

    #[test]
    fn generic_three_roots_when_cube_roots_of_unity_exist() {
        // p = 7 ≡ 1 mod 3: the clustered roots split into three
        let t = ExactRational::from(1 + 7i64.pow(4));
        let out = generic_cubic_solutions(7, 343, 1, &t, &ctx(7)).unwrap();
        assert_eq!(out.regime, GenericRegime::ThreeRoot);
        assert_eq!(out.roots_x.len(), 3);
        assert_eq!(out.unresolved, 0);
    }

    #[test]
    fn generic_vieta_relations() {
        let t = ExactRational::from(1 + 7i64.pow(4));
        let c = ctx(7);
        let out = generic_cubic_solutions(7, 343, 1, &t, &c).unwrap();
        let params = PottsParameters::new(7, 343, 3, t).unwrap();
        let cd = cubic_for_m(1, &params).unwrap();
        let w = working(&c);
        let sum = out
            .roots_z
            .iter()
            .fold(PadicNumber::exact_zero(7), |acc, z| &acc + z);
        let prod = out.roots_z.iter().fold(w.one(), |acc, z| &acc * z);
        assert!(sum.agreement(&w.embed(&cd.a)) >= 12);
        assert!(prod.agreement(&w.embed(&-&cd.c)) >= 12);
    }

    #[test]
    fn factored_depressed_cubic() {
        // x^3 + αx with -α a unit square: roots 0, ±sqrt(-α); only 0 lies in pZ_p
        let f = IntPoly::from_i64(&[0, -4, 0, 1]);
        let (roots, unresolved) = roots_in_class(&f, 0, 1, &ctx(5)).unwrap();
        assert_eq!(unresolved, 0);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].is_zero());
        let (all, _) = roots_in_class(&f, 0, 0, &ctx(5)).unwrap();
        assert_eq!(all.len(), 3);
    }
}
