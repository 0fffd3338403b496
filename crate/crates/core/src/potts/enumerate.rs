//! Enumeration of translation-invariant measures by subset size.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::classify::{roots_in_class, working};
use super::{
    classify_theta_1mq, classify_theta_1pq2, fixed_point_poly, fixed_point_residual,
    generic_cubic_solutions, reduction_hypothesis, GenericRegime, PottsParameters, ThetaCase,
};
use crate::error::{Error, Result};
use crate::padic::{ep_threshold, log_p, PadicContext, PadicNumber};
use crate::rational::{binomial, ExactRational};
use crate::roots::solve_quadratic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "theta-1mq")]
    Theta1mq,
    #[serde(rename = "theta-1pq2")]
    Theta1pq2,
    #[serde(rename = "generic-cubic")]
    GenericCubic,
    #[serde(rename = "brute-force")]
    BruteForce,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Trivial => "trivial",
            Source::Theta1mq => "theta-1mq",
            Source::Theta1pq2 => "theta-1pq2",
            Source::GenericCubic => "generic-cubic",
            Source::BruteForce => "brute-force",
        })
    }
}

/// One measure: the field `h 1_M` with `|M| = m` and `z = exp_p(h)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureDescriptor {
    pub m: u64,
    pub z: PadicNumber,
    pub h: PadicNumber,
    /// `C(q, m)` subsets share this solution.
    pub multiplicity: u128,
    pub bounded: bool,
    pub source: Source,
}

/// A branch where `f_m` or the recursion has a vanishing denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularBranch {
    pub m: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enumeration {
    pub params: PottsParameters,
    pub measures: Vec<MeasureDescriptor>,
    pub singular: Vec<SingularBranch>,
    /// `1 + Σ_m #solutions(m) C(q, m)`; the trivial measure is counted even
    /// when its branch is singular.
    pub count_lower_bound: u128,
    /// Sum of multiplicities over `measures` only.
    pub count_nonsingular: u128,
    /// Every solution has the one-subset form and every branch was decided.
    pub exact: bool,
    /// Residue classes the root isolator left undecided.
    pub unresolved: usize,
}

fn sort(v: &mut [PadicNumber]) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("total order"));
}

/// Roots of `(f_m(z) - z)/(z - 1)` in `E_p` by residue-class isolation,
/// at the working precision of `ctx`.
pub fn ep_fixed_points(
    m: u64,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<(Vec<PadicNumber>, usize)> {
    let poly = fixed_point_poly(m, params);
    if poly.degree() == 0 {
        return Ok((Vec::new(), 0));
    }
    roots_in_class(&poly, 1, ep_threshold(params.p) as u32, &working(ctx))
}

fn quadratic_fixed_points(
    m: u64,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<(Vec<PadicNumber>, usize)> {
    let poly = fixed_point_poly(m, params);
    let wctx = working(ctx);
    let c: Vec<ExactRational> = poly
        .coeffs()
        .iter()
        .map(|x| ExactRational::from_integer(x.clone()))
        .collect();
    let mut out = match poly.degree() {
        0 => Vec::new(),
        1 => vec![wctx.embed(&-&(&c[0] / &c[1]))],
        2 => {
            let e = |r: &ExactRational| wctx.embed(r);
            match solve_quadratic(&e(&c[2]), &e(&c[1]), &e(&c[0]), &wctx) {
                Ok(roots) => roots,
                Err(Error::ZeroDiscriminant) => {
                    let double = -&(&c[1] / &(&ExactRational::from(2) * &c[2]));
                    vec![wctx.embed(&double)]
                }
                Err(e) => return Err(e),
            }
        }
        _ => return ep_fixed_points(m, params, ctx),
    };
    out.retain(PadicNumber::in_ep);
    sort(&mut out);
    Ok((out, 0))
}

/// Keeps `z` at its working precision and checks that the fixed-point
/// residual has valuation at least `n - 2`. Truncating to `n` digits would
/// be enough for the fixed-point equation, but downstream compatibility
/// checks lose `v_p(m(z-1) + q)` more digits to cancellation.
fn settle(z: &PadicNumber, m: u64, params: &PottsParameters, n: u32) -> Result<PadicNumber> {
    let r = fixed_point_residual(&z.to_rational(), m, params)?;
    if r.valuation(params.p).is_some_and(|v| v < n as i64 - 2) {
        return Err(Error::InsufficientPrecision {
            needed: n as i64,
            available: z.relative_precision() as i64,
        });
    }
    Ok(z.clone())
}

fn descriptor(
    m: u64,
    z: PadicNumber,
    params: &PottsParameters,
    ctx: &PadicContext,
    source: Source,
) -> Result<MeasureDescriptor> {
    let multiplicity = binomial(params.q, m)
        .ok_or_else(|| Error::InvalidParameters(format!("C({}, {m}) overflows", params.q)))?;
    let h = log_p(&z, &ctx.with_prec(z.relative_precision().max(ctx.prec())))?;
    Ok(MeasureDescriptor {
        m,
        z,
        h,
        multiplicity,
        bounded: !params.q_divisible(),
        source,
    })
}

/// Fixed points for one subset size `m`, before settling.
fn branch(
    m: u64,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<(Vec<PadicNumber>, usize, Source)> {
    let p = params.p;
    match (params.k, params.theta_case()) {
        (3, ThetaCase::OneMinusQ) => {
            let verdict = classify_theta_1mq(p, params.q, m);
            let zs = if verdict.member {
                vec![working(ctx).embed(&verdict.z3)]
            } else {
                Vec::new()
            };
            Ok((zs, 0, Source::Theta1mq))
        }
        (3, ThetaCase::OnePlusHalfQ) => {
            let out = classify_theta_1pq2(p, params.q, m, ctx)?;
            Ok((out.solutions, 0, Source::Theta1pq2))
        }
        (3, ThetaCase::Generic) => {
            if p > 3 {
                let out = generic_cubic_solutions(p, params.q, m, &params.theta, ctx)?;
                if out.regime != GenericRegime::NotApplicable {
                    return Ok((out.roots_z, out.unresolved, Source::GenericCubic));
                }
            }
            let (zs, unresolved) = ep_fixed_points(m, params, ctx)?;
            Ok((zs, unresolved, Source::GenericCubic))
        }
        (2, _) => {
            let (zs, unresolved) = quadratic_fixed_points(m, params, ctx)?;
            Ok((zs, unresolved, Source::GenericCubic))
        }
        (k, _) => Err(Error::UnsupportedOrder(k)),
    }
}

/// Descriptors for a single subset size `1 <= m <= q - 1`, plus singular
/// solutions and the number of undecided residue classes.
pub fn enumerate_for_m(
    m: u64,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<(Vec<MeasureDescriptor>, Vec<SingularBranch>, usize)> {
    if m == 0 || m >= params.q {
        return Err(Error::InvalidParameters(format!(
            "m = {m} outside 1..={}",
            params.q - 1
        )));
    }
    let (zs, unresolved, source) = branch(m, params, ctx)?;
    let mut measures = Vec::new();
    let mut singular = Vec::new();
    for z in zs {
        match settle(&z, m, params, ctx.prec()) {
            Ok(z) => measures.push(descriptor(m, z, params, ctx, source)?),
            Err(Error::Singular(reason)) => singular.push(SingularBranch { m, reason }),
            Err(e) => return Err(e),
        }
    }
    Ok((measures, singular, unresolved))
}

/// All translation-invariant measures reachable through the one-subset
/// reduction, for `m = 1..=q/2` (the conjugate `q - m` branches give the
/// same measures).
pub fn enumerate_tipgm(params: &PottsParameters, ctx: &PadicContext) -> Result<Enumeration> {
    if ctx.p() != params.p {
        return Err(Error::InvalidParameters(
            "context prime differs from p".into(),
        ));
    }
    let mut measures = Vec::new();
    let mut singular = Vec::new();
    let trivial_den =
        &(&params.theta + &ExactRational::from(params.q as i64)) - &ExactRational::one();
    if trivial_den.is_zero() {
        singular.push(SingularBranch {
            m: 0,
            reason: "theta + q - 1 = 0: the recursion is undefined at z = 1".into(),
        });
    } else {
        measures.push(descriptor(0, ctx.one(), params, ctx, Source::Trivial)?);
    }
    let mut unresolved = 0;
    let mut count: u128 = 1;
    let overflow = || Error::InvalidParameters("measure count overflows u128".into());
    if params.q_divisible() {
        if !matches!(params.k, 2 | 3) {
            return Err(Error::UnsupportedOrder(params.k));
        }
        for m in 1..=params.q / 2 {
            let (found, sing, unres) = enumerate_for_m(m, params, ctx)?;
            unresolved += unres;
            for d in &found {
                count = count.checked_add(d.multiplicity).ok_or_else(overflow)?;
            }
            measures.extend(found);
            singular.extend(sing);
        }
    }
    let count_nonsingular = measures
        .iter()
        .try_fold(0u128, |acc, d| acc.checked_add(d.multiplicity))
        .ok_or_else(overflow)?;
    let exact =
        !params.q_divisible() || (reduction_hypothesis(params.k, params.p) && unresolved == 0);
    Ok(Enumeration {
        params: params.clone(),
        measures,
        singular,
        count_lower_bound: count,
        count_nonsingular,
        exact,
        unresolved,
    })
}

/// The same measure described through the complement `M^c`:
/// `m' = q - m`, `z' = 1/z`, `h' = -h`.
pub fn conjugate_solution(d: &MeasureDescriptor, q: u64) -> Result<MeasureDescriptor> {
    if d.m == 0 || d.m >= q {
        return Err(Error::InvalidParameters(format!(
            "conjugation needs 1 <= m < q, got m = {}",
            d.m
        )));
    }
    Ok(MeasureDescriptor {
        m: q - d.m,
        z: d.z.inverse()?,
        h: -&d.h,
        multiplicity: d.multiplicity,
        bounded: d.bounded,
        source: d.source,
    })
}
