//! Translation-invariant fixed points of the Potts recursion.
//!
//! With `z_i = exp_p(h_i)` the translation-invariant compatibility
//! condition becomes the system
//!
//! ```text
//! z_i = ( ((θ-1) z_i + Σ_j z_j + 1) / (θ + Σ_j z_j) )^k,   i = 1..q-1,
//! ```
//!
//! and setting `z_i = z` on a subset `M` of size `m` (and `1` elsewhere)
//! reduces it to the scalar equation `z = f_m(z)`. This module evaluates
//! `f_m`, builds the cubic it reduces to for `k = 3`, classifies its
//! solutions in `E_p` for the special couplings `θ = 1 - q` and
//! `θ = 1 + q/2` and in the generic three-root regime, and enumerates the
//! resulting measures.

mod brute;
mod classify;
mod enumerate;

pub use brute::{brute_force_system, has_form, BruteForceResult};
pub use classify::{
    classify_theta_1mq, classify_theta_1pq2, generic_cubic_solutions, theta_1pq2_case,
    theta_1pq2_quadratic, GenericCubicOutcome, GenericRegime, Theta1mqCase, Theta1mqVerdict,
    Theta1pq2Case, Theta1pq2Outcome,
};
pub use enumerate::{
    conjugate_solution, enumerate_for_m, enumerate_tipgm, ep_fixed_points, Enumeration,
    MeasureDescriptor, SingularBranch, Source,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{ep_threshold, exp_p, PadicContext, PadicNumber};
use crate::rational::{is_prime, ExactRational};
use crate::roots::IntPoly;

/// `(p, q, k, θ)` with `θ` an exact rational lying in `E_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PottsParameters {
    pub p: u64,
    pub q: u64,
    pub k: u64,
    pub theta: ExactRational,
}

/// Which closed-form branch of the `k = 3` analysis a coupling falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaCase {
    OneMinusQ,
    OnePlusHalfQ,
    Generic,
}

/// `θ ∈ E_p` tested on the exact rational.
pub fn rational_in_ep(theta: &ExactRational, p: u64) -> bool {
    if theta.valuation(p) != Some(0) {
        return false;
    }
    let d = theta - &ExactRational::one();
    d.valuation(p).is_none_or(|v| v >= ep_threshold(p))
}

impl PottsParameters {
    pub fn new(p: u64, q: u64, k: u64, theta: ExactRational) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if q < 2 {
            return Err(Error::InvalidParameters(format!(
                "q = {q} must be at least 2"
            )));
        }
        if k < 2 {
            return Err(Error::InvalidParameters(format!(
                "k = {k} must be at least 2"
            )));
        }
        if !rational_in_ep(&theta, p) {
            return Err(Error::InvalidParameters(format!(
                "theta = {theta} is not in E_{p}"
            )));
        }
        Ok(PottsParameters { p, q, k, theta })
    }

    /// `q ∈ pN`.
    pub fn q_divisible(&self) -> bool {
        self.q.is_multiple_of(self.p)
    }

    pub fn theta_case(&self) -> ThetaCase {
        let q = ExactRational::from(self.q as i64);
        let one = ExactRational::one();
        if self.theta == &one - &q {
            ThetaCase::OneMinusQ
        } else if self.theta == &one + &(&q / &ExactRational::from(2)) {
            ThetaCase::OnePlusHalfQ
        } else {
            ThetaCase::Generic
        }
    }

    fn q_rat(&self) -> ExactRational {
        ExactRational::from(self.q as i64)
    }
}

/// `θ = exp_p(J)`.
pub fn theta_from_coupling(coupling: &PadicNumber, ctx: &PadicContext) -> Result<PadicNumber> {
    exp_p(coupling, ctx)
}

/// `f_m(z) = ( ((θ+m-1) z + q - m) / (m z + q - m - 1 + θ) )^k`.
pub fn f_m_eval(z: &PadicNumber, m: u64, params: &PottsParameters) -> Result<PadicNumber> {
    if m == 0 || m >= params.q {
        return Err(Error::InvalidParameters(format!(
            "m = {m} outside 1..={}",
            params.q - 1
        )));
    }
    let ctx = PadicContext::new(
        params.p,
        z.relative_precision().max(PadicContext::MIN_PRECISION),
    )?
    .widened(8);
    let theta = ctx.embed(&params.theta);
    let m_i = m as i64;
    let q_i = params.q as i64;
    let num = &(&(&theta + &ctx.embed_int(m_i - 1)) * z) + &ctx.embed_int(q_i - m_i);
    let den = &(&ctx.embed_int(m_i) * z) + &(&theta + &ctx.embed_int(q_i - m_i - 1));
    if den.is_zero() {
        return Err(Error::Singular(format!(
            "m z + q - m - 1 + theta vanishes at z = {z}"
        )));
    }
    Ok(num.checked_div(&den)?.pow(params.k as u32))
}

/// Exact rational form of `f_m(z) - z`, used for residual checks.
pub fn fixed_point_residual(
    z: &ExactRational,
    m: u64,
    params: &PottsParameters,
) -> Result<ExactRational> {
    let theta = &params.theta;
    let m_r = ExactRational::from(m as i64);
    let q = params.q_rat();
    let one = ExactRational::one();
    let num = &(&(&(theta + &m_r) - &one) * z) + &(&q - &m_r);
    let den = &(&(&m_r * z) + &(&q - &m_r)) + &(theta - &one);
    if den.is_zero() {
        return Err(Error::Singular("denominator of f_m vanishes".into()));
    }
    Ok(&(&num / &den).pow(params.k as i32) - z)
}

/// Coefficients of `z^3 - A z^2 - B z + C` and of its depressed form
/// `x^3 + α x + β` under `z = x + A/3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicData {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: ExactRational,
    pub alpha: ExactRational,
    pub beta: ExactRational,
}

impl CubicData {
    /// `z^3 - A z^2 - B z + C` as a primitive integer polynomial.
    pub fn poly(&self) -> IntPoly {
        IntPoly::from_rationals(&[self.c.clone(), -&self.b, -&self.a, ExactRational::one()])
    }

    /// `x^3 + α x + β` as a primitive integer polynomial.
    pub fn depressed_poly(&self) -> IntPoly {
        IntPoly::from_rationals(&[
            self.beta.clone(),
            self.alpha.clone(),
            ExactRational::zero(),
            ExactRational::one(),
        ])
    }
}

/// `(f_m(z) - z)/(z - 1) = 0` for `k = 3`, normalised to a monic cubic.
pub fn cubic_for_m(m: u64, params: &PottsParameters) -> Result<CubicData> {
    if params.k != 3 {
        return Err(Error::UnsupportedOrder(params.k));
    }
    if m == 0 || m >= params.q {
        return Err(Error::InvalidParameters(format!("m = {m} outside 1..q-1")));
    }
    let r = |n: i64| ExactRational::from(n);
    let m_r = r(m as i64);
    let qm = &params.q_rat() - &m_r;
    let t1 = &params.theta - &r(1);
    let m3 = m_r.pow(3);
    let t1sq = t1.pow(2);
    let t1cu = t1.pow(3);
    let a = &(&(&(&r(-3) * &m_r.pow(2)) * &qm) + &(&(&r(3) * &m_r) * &t1sq)) + &t1cu;
    let a = &a / &m3;
    let b = &(&(&(&r(-3) * &m_r) * &qm.pow(2)) + &(&(&r(3) * &qm) * &t1sq)) + &t1cu;
    let b = &b / &m3;
    let c = &qm.pow(3) / &m3;
    let alpha = -(&b + &(&a.pow(2) / &r(3)));
    let beta = &(&(&(&r(-2) / &r(27)) * &a.pow(3)) - &(&(&a * &b) / &r(3))) + &c;
    Ok(CubicData {
        a,
        b,
        c,
        alpha,
        beta,
    })
}

/// `((θ+m-1) z + q-m)^k - z (m z + q-m-1+θ)^k` with every factor `(z - 1)`
/// removed, as a primitive integer polynomial. Its roots other than 1 are
/// the nontrivial solutions of `z = f_m(z)`.
pub fn fixed_point_poly(m: u64, params: &PottsParameters) -> IntPoly {
    let r = |n: i64| ExactRational::from(n);
    let theta = &params.theta;
    let k = params.k as usize;
    let m_r = r(m as i64);
    let qm = &params.q_rat() - &m_r;
    // linear factors as [constant, slope]
    let lhs = [qm.clone(), &(theta + &m_r) - &r(1)];
    let rhs = [&(&qm - &r(1)) + theta, m_r];
    let pow_lin = |lin: &[ExactRational; 2]| -> Vec<ExactRational> {
        let mut acc = vec![r(1)];
        for _ in 0..k {
            let mut next = vec![r(0); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] = &next[i] + &(c * &lin[0]);
                next[i + 1] = &next[i + 1] + &(c * &lin[1]);
            }
            acc = next;
        }
        acc
    };
    let left = pow_lin(&lhs);
    let right = pow_lin(&rhs);
    let mut coeffs = vec![r(0); k + 2];
    for (i, c) in left.iter().enumerate() {
        coeffs[i] = &coeffs[i] + c;
    }
    for (i, c) in right.iter().enumerate() {
        coeffs[i + 1] = &coeffs[i + 1] - c;
    }
    let mut poly = IntPoly::from_rationals(&coeffs);
    let one = num_bigint::BigInt::from(1);
    while poly.degree() > 0 && num_traits::Zero::is_zero(&poly.eval(&one)) {
        poly = poly.deflate(&one).primitive();
    }
    if poly
        .coeffs()
        .last()
        .is_some_and(num_traits::Signed::is_negative)
    {
        poly = IntPoly::new(poly.coeffs().iter().map(|c| -c).collect());
    }
    poly
}

/// `(k^2 - k)/2` not divisible by `p`: every `E_p` solution of the system
/// then has the one-subset form, so enumerating by `m` is complete.
pub fn reduction_hypothesis(k: u64, p: u64) -> bool {
    !((k * k - k) / 2).is_multiple_of(p)
}
