//! Norm trajectories of the partition function and the verdicts built on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::potts::{enumerate_tipgm, MeasureDescriptor, PottsParameters};
use crate::rational::{p_power, ExactRational};

/// `|V_{n-1}| = 1 + k + ... + k^(n-1)`.
fn inner_volume(k: u64, n: u32) -> Result<i64> {
    let mut total: i64 = 0;
    let mut width: i64 = 1;
    let overflow = || Error::InvalidParameters("volume exponent overflows".into());
    for _ in 0..n {
        total = total.checked_add(width).ok_or_else(overflow)?;
        width = width.checked_mul(k as i64).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Exponent `e` with `|m(z-1) + q + θ - 1|_p^(k |V_{n-1}|) = p^-e`.
fn norm_exponent(m: u64, z: &PadicNumber, params: &PottsParameters, n: u32) -> Result<i64> {
    let ctx = PadicContext::new(
        params.p,
        z.relative_precision().max(PadicContext::MIN_PRECISION),
    )?;
    let a = &(&(z - &ctx.one()).mul_int(m as i64) + &ctx.embed_int(params.q as i64))
        + &(&ctx.embed(&params.theta) - &ctx.one());
    if a.is_zero() {
        return Err(Error::Singular(
            "m(z-1) + q + theta - 1 is zero to precision".into(),
        ));
    }
    let v = a.valuation()?;
    let vol = inner_volume(params.k, n)?;
    v.checked_mul(params.k as i64)
        .and_then(|e| e.checked_mul(vol))
        .ok_or_else(|| Error::InvalidParameters("norm exponent overflows".into()))
}

/// `|m(z-1) + q + θ - 1|_p^(k |V_{n-1}|)`, the norm of `Z_{n,h(m)}` up to
/// the level-0 factor `|Z_0|_p = |m(z-1) + q|_p`.
pub fn partition_norm(
    m: u64,
    z: &PadicNumber,
    params: &PottsParameters,
    n: u32,
) -> Result<ExactRational> {
    let e = norm_exponent(m, z, params, n)?;
    Ok(p_power(params.p, -e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundednessReport {
    pub bounded: bool,
    #[serde(rename = "Z_norms")]
    pub z_norms: Vec<String>,
    /// The norm trajectory for `n = 1..=3` is constant 1 exactly when `bounded`.
    pub norms_agree: bool,
}

/// A measure is bounded iff `q ∉ pN`; the decay of `|Z_n|_p` for
/// `n = 1, 2, 3` is reported alongside as a check.
pub fn boundedness_verdict(
    params: &PottsParameters,
    d: &MeasureDescriptor,
) -> Result<BoundednessReport> {
    let bounded = !params.q_divisible();
    let mut z_norms = Vec::with_capacity(3);
    let mut all_one = true;
    for n in 1..=3 {
        let e = norm_exponent(d.m, &d.z, params, n)?;
        all_one &= e == 0;
        z_norms.push(format!("{}^-{e}", params.p));
    }
    Ok(BoundednessReport {
        bounded,
        z_norms,
        norms_agree: all_one == bounded,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseTransitionReport {
    pub transition: bool,
    pub measures: usize,
    pub bounded: usize,
    pub unbounded: usize,
    /// Subset sizes `(m_bounded, m_unbounded)` of a witnessing pair.
    pub witness: Option<(u64, u64)>,
    pub note: String,
}

/// A phase transition needs a bounded and an unbounded measure at once.
pub fn phase_transition_verdict(
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<PhaseTransitionReport> {
    let e = enumerate_tipgm(params, ctx)?;
    let bounded: Vec<u64> = e
        .measures
        .iter()
        .filter(|d| d.bounded)
        .map(|d| d.m)
        .collect();
    let unbounded: Vec<u64> = e
        .measures
        .iter()
        .filter(|d| !d.bounded)
        .map(|d| d.m)
        .collect();
    let witness = bounded.first().copied().zip(unbounded.first().copied());
    let note = match (e.measures.len(), bounded.len(), unbounded.len()) {
        (_, b, u) if b > 0 && u > 0 => "bounded and unbounded measures coexist",
        (0 | 1, _, _) => "unique measure",
        (_, 0, _) => "multiple measures, no bounded one",
        _ => "multiple measures, all bounded",
    };
    Ok(PhaseTransitionReport {
        transition: witness.is_some(),
        measures: e.measures.len(),
        bounded: bounded.len(),
        unbounded: unbounded.len(),
        witness,
        note: note.into(),
    })
}
