//! Finite-volume distributions, partition functions and compatibility.
//!
//! Weights are `θ^{#equal edges} Π_{x ∈ W_n} z̃_{σ(x)}`, which equals
//! `exp_p(H(σ) + Σ_{x ∈ W_n} h̃_{σ(x)})` for `θ = exp_p(J)`, `z̃ = exp_p(h̃)`.
//! Everything is evaluated in exact rational arithmetic, so normalisation
//! and compatibility residuals are exact valuations.

use serde::Serialize;

use super::{BoundaryField, Configuration, TreeVolume};
use crate::error::{Error, Result};
use crate::padic::{exp_p, log_p, PadicContext, PadicNumber};
use crate::potts::PottsParameters;
use crate::rational::ExactRational;

/// Largest number of configurations a table may enumerate.
pub const VOLUME_CAP: u64 = 1_000_000;

fn table_size(q: u64, vertices: usize) -> Result<u64> {
    let size = u32::try_from(vertices)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .filter(|&s| s <= VOLUME_CAP);
    size.ok_or_else(|| Error::VolumeTooLarge {
        configs: format!("{q}^{vertices}"),
        cap: VOLUME_CAP,
    })
}

fn check_field(field: &BoundaryField, params: &PottsParameters) -> Result<()> {
    if field.q() != params.q || field.prime() != params.p {
        return Err(Error::InvalidParameters(format!(
            "field has q = {} over p = {}, parameters have q = {} over p = {}",
            field.q(),
            field.prime(),
            params.q,
            params.p
        )));
    }
    Ok(())
}

/// `μ^(n)(σ)` for every `σ ∈ Ω_{V_n}`, indexed by [`Configuration::index`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureTable {
    q: u64,
    values: Vec<ExactRational>,
    partition: ExactRational,
}

impl MeasureTable {
    pub fn get(&self, sigma: &Configuration) -> &ExactRational {
        &self.values[sigma.index(self.q) as usize]
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    /// `Z_{n,h̃}`.
    pub fn partition(&self) -> &ExactRational {
        &self.partition
    }

    pub fn total(&self) -> ExactRational {
        self.values
            .iter()
            .fold(ExactRational::zero(), |acc, v| &acc + v)
    }

    /// The table embedded in `Q_p`.
    pub fn padic(&self, ctx: &PadicContext) -> Vec<PadicNumber> {
        self.values.iter().map(|v| ctx.embed(v)).collect()
    }
}

fn weights(
    vol: &TreeVolume,
    field: &BoundaryField,
    theta: &ExactRational,
) -> Result<Vec<ExactRational>> {
    let q = field.q();
    let size = table_size(q, vol.num_vertices())?;
    let theta_pow: Vec<ExactRational> =
        (0..=vol.num_edges() as i32).map(|e| theta.pow(e)).collect();
    let leaves = vol.level_range(vol.radius());
    let mut out = Vec::with_capacity(size as usize);
    for idx in 0..size {
        let sigma = Configuration::from_index(idx, vol.num_vertices(), q);
        let mut w = theta_pow[sigma.equal_edges(vol) as usize].clone();
        for x in leaves.clone() {
            w = &w * &field.z()[sigma.0[x] as usize - 1];
        }
        out.push(w);
    }
    Ok(out)
}

/// The finite-dimensional distribution on `V_n` (at most [`VOLUME_CAP`] configurations).
pub fn measure_table(
    vol: &TreeVolume,
    field: &BoundaryField,
    params: &PottsParameters,
) -> Result<MeasureTable> {
    check_field(field, params)?;
    let w = weights(vol, field, &params.theta)?;
    let partition = w.iter().fold(ExactRational::zero(), |acc, v| &acc + v);
    if partition.is_zero() {
        return Err(Error::Singular("the normalising factor vanishes".into()));
    }
    let values = w.iter().map(|v| v / &partition).collect();
    Ok(MeasureTable {
        q: field.q(),
        values,
        partition,
    })
}

/// `Z_{n,h̃}` by summing level by level from the leaves:
/// `g_n(s) = z̃_s`, `g_l(s) = (Σ_t θ^{δ(s,t)} g_{l+1}(t))^k`, `Z = Σ_s g_0(s)`.
pub fn partition_function(
    k: u64,
    n: u32,
    field: &BoundaryField,
    theta: &ExactRational,
) -> ExactRational {
    let mut g: Vec<ExactRational> = field.z().to_vec();
    for _ in 0..n {
        let total = g.iter().fold(ExactRational::zero(), |acc, v| &acc + v);
        g = g
            .iter()
            .map(|gs| (&total + &(&(theta - &ExactRational::one()) * gs)).pow(k as i32))
            .collect();
    }
    g.iter().fold(ExactRational::zero(), |acc, v| &acc + v)
}

/// `Z_{n,h̃}` by summing every configuration weight.
pub fn partition_function_direct(
    vol: &TreeVolume,
    field: &BoundaryField,
    theta: &ExactRational,
) -> Result<ExactRational> {
    Ok(weights(vol, field, theta)?
        .iter()
        .fold(ExactRational::zero(), |acc, v| &acc + v))
}

/// `exp_p(H(σ) + Σ_{x ∈ W_n} h̃_{σ(x)})` evaluated through the exponential series.
pub fn configuration_weight_exp(
    vol: &TreeVolume,
    sigma: &Configuration,
    h: &[PadicNumber],
    coupling: &PadicNumber,
    ctx: &PadicContext,
) -> Result<PadicNumber> {
    let mut exponent = super::hamiltonian(vol, sigma, coupling);
    for x in vol.level_range(vol.radius()) {
        exponent = &exponent + &h[sigma.0[x] as usize - 1];
    }
    exp_p(&exponent, ctx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub n: u32,
    pub holds: bool,
    /// Smallest `v_p` of `(Σ_ω μ^(n)(σ ∨ ω) - μ^(n-1)(σ)) / μ^(n-1)(σ)` over
    /// `σ ∈ Ω_{V_{n-1}}`; `None` when every discrepancy vanishes.
    pub max_residual_valuation: Option<i64>,
}

fn report(n: u32, worst: Option<i64>, ctx: &PadicContext) -> CompatibilityReport {
    let need = ctx.prec() as i64 - 2;
    CompatibilityReport {
        n,
        holds: worst.is_none_or(|v| v >= need),
        max_residual_valuation: worst,
    }
}

fn fold_worst(
    worst: Option<i64>,
    residual: &ExactRational,
    scale: &ExactRational,
    p: u64,
) -> Option<i64> {
    match residual.valuation(p) {
        None => worst,
        Some(v) => {
            let rel = v - scale.valuation(p).expect("nonzero scale");
            Some(worst.map_or(rel, |w| w.min(rel)))
        }
    }
}

/// Every way to place `total` leaves among `q` spins.
fn histograms(q: usize, total: usize) -> Vec<Vec<usize>> {
    if q == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in histograms(q - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compatibility of `μ^(n-1)` and `μ^(n)` without enumerating `Ω_{V_n}`.
///
/// Summing over the boundary `ω ∈ Ω_{W_n}` factorises over the vertices of
/// `W_{n-1}`: `Σ_ω μ^(n)(σ ∨ ω) = θ^{eq(σ)} Π_{x ∈ W_{n-1}} a_{σ(x)}^k / Z_n`
/// with `a_s = Σ_t θ^{δ(s,t)} z̃_t`, so the discrepancy depends on `σ` only
/// through the spin counts on `W_{n-1}` and the unit `θ^{eq(σ)}` cancels.
pub fn check_compatibility(
    vol: &TreeVolume,
    field: &BoundaryField,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<CompatibilityReport> {
    check_field(field, params)?;
    let n = vol.radius();
    if n == 0 {
        return Err(Error::InvalidParameters(
            "compatibility needs n >= 1".into(),
        ));
    }
    let k = vol.k();
    let theta = &params.theta;
    let z = field.z();
    let total = z.iter().fold(ExactRational::zero(), |acc, v| &acc + v);
    let a: Vec<ExactRational> = z
        .iter()
        .map(|zs| &total + &(&(theta - &ExactRational::one()) * zs))
        .collect();
    let z_n = partition_function(k, n, field, theta);
    let z_prev = partition_function(k, n - 1, field, theta);
    if z_n.is_zero() || z_prev.is_zero() {
        return Err(Error::Singular("a normalising factor vanishes".into()));
    }
    let leaves = vol.level_size(n - 1);
    let mut worst = None;
    for counts in histograms(z.len(), leaves) {
        let mut lhs = z_prev.clone();
        let mut rhs = z_n.clone();
        for (s, &c) in counts.iter().enumerate() {
            lhs = &lhs * &a[s].pow((k as usize * c) as i32);
            rhs = &rhs * &z[s].pow(c as i32);
        }
        worst = fold_worst(worst, &(&lhs - &rhs), &rhs, params.p);
    }
    Ok(report(n, worst, ctx))
}

/// Compatibility by summing the `V_n` table over each boundary extension.
pub fn check_compatibility_direct(
    vol: &TreeVolume,
    field: &BoundaryField,
    params: &PottsParameters,
    ctx: &PadicContext,
) -> Result<CompatibilityReport> {
    let n = vol.radius();
    if n == 0 {
        return Err(Error::InvalidParameters(
            "compatibility needs n >= 1".into(),
        ));
    }
    let prev_vol = super::build_volume(vol.k(), n - 1)?;
    let big = measure_table(vol, field, params)?;
    let small = measure_table(&prev_vol, field, params)?;
    let q = params.q;
    let inner = small.values().len() as u64;
    let outer = big.values().len() as u64 / inner;
    let mut worst = None;
    for (idx, mu_prev) in small.values().iter().enumerate() {
        let marginal = (0..outer).fold(ExactRational::zero(), |acc, w| {
            &acc + &big.values()[(idx as u64 + inner * w) as usize]
        });
        worst = fold_worst(worst, &(&marginal - mu_prev), mu_prev, params.p);
    }
    debug_assert_eq!(inner, q.pow(prev_vol.num_vertices() as u32));
    Ok(report(n, worst, ctx))
}

/// `F_i(h, θ) = log_p( ((θ-1) e^{h_i} + Σ_j e^{h_j} + 1) / (θ + Σ_j e^{h_j}) )`
/// for the reduced field `h ∈ Q_p^{q-1}`.
pub fn recursion_map_f(
    h: &[PadicNumber],
    theta: &PadicNumber,
    ctx: &PadicContext,
) -> Result<Vec<PadicNumber>> {
    let z = h
        .iter()
        .map(|x| exp_p(x, ctx))
        .collect::<Result<Vec<_>>>()?;
    let sum = z
        .iter()
        .fold(PadicNumber::exact_zero(ctx.p()), |acc, v| &acc + v);
    let one = ctx.one();
    let den = theta + &sum;
    if den.is_zero() {
        return Err(Error::Singular("theta + sum of exp_p(h_j) vanishes".into()));
    }
    z.iter()
        .map(|zi| {
            let num = &(&(&(theta - &one) * zi) + &sum) + &one;
            log_p(&num.checked_div(&den)?, ctx)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_volume;

    fn rat(n: i64) -> ExactRational {
        ExactRational::from(n)
    }

    fn params(p: u64, q: u64, k: u64, theta: i64) -> PottsParameters {
        PottsParameters::new(p, q, k, rat(theta)).unwrap()
    }

    #[test]
    fn uniform_table_without_interaction() {
        let pr = params(3, 3, 2, 1);
        let v = build_volume(2, 1).unwrap();
        let t = measure_table(&v, &BoundaryField::trivial(3, 3), &pr).unwrap();
        let u = ExactRational::new(1, 27).unwrap();
        assert!(t.values().iter().all(|x| *x == u));
        assert_eq!(t.total(), ExactRational::one());
    }

    #[test]
    fn table_normalised() {
        let pr = params(2, 4, 3, -3);
        let v = build_volume(3, 1).unwrap();
        let f = BoundaryField::from_z(2, vec![rat(-27), rat(1), rat(1), rat(1)]).unwrap();
        let t = measure_table(&v, &f, &pr).unwrap();
        assert_eq!(t.total(), ExactRational::one());
        assert_eq!(t.values().len(), 256);
    }

    #[test]
    fn volume_cap_enforced() {
        let pr = params(2, 4, 3, -3);
        let v = build_volume(3, 2).unwrap();
        let r = measure_table(&v, &BoundaryField::trivial(2, 4), &pr);
        assert!(matches!(r, Err(Error::VolumeTooLarge { .. })));
    }

    #[test]
    fn partition_recursion_matches_direct_sum() {
        let pr = params(5, 3, 2, 6);
        let f = BoundaryField::from_z(5, vec![rat(11), rat(-4), rat(1)]).unwrap();
        for n in 0..=2 {
            let v = build_volume(2, n).unwrap();
            assert_eq!(
                partition_function(2, n, &f, &pr.theta),
                partition_function_direct(&v, &f, &pr.theta).unwrap()
            );
        }
    }

    #[test]
    fn exact_fixed_point_is_compatible() {
        let pr = params(2, 4, 3, -3);
        let f = BoundaryField::from_z(2, vec![rat(-27), rat(1), rat(1), rat(1)]).unwrap();
        let ctx = PadicContext::new(2, 12).unwrap();
        for n in 1..=2 {
            let v = build_volume(3, n).unwrap();
            let r = check_compatibility(&v, &f, &pr, &ctx).unwrap();
            assert!(r.holds);
            assert_eq!(r.max_residual_valuation, None);
        }
        let v = build_volume(3, 1).unwrap();
        assert_eq!(
            check_compatibility_direct(&v, &f, &pr, &ctx)
                .unwrap()
                .max_residual_valuation,
            None
        );
    }

    #[test]
    fn non_solution_is_incompatible() {
        let pr = params(3, 3, 2, 4);
        let f = BoundaryField::from_z(3, vec![rat(7), rat(1), rat(1)]).unwrap();
        let ctx = PadicContext::new(3, 12).unwrap();
        let v = build_volume(2, 1).unwrap();
        let fact = check_compatibility(&v, &f, &pr, &ctx).unwrap();
        let direct = check_compatibility_direct(&v, &f, &pr, &ctx).unwrap();
        assert!(!fact.holds);
        assert_eq!(fact, direct);
    }

    #[test]
    fn exp_weights_agree_with_products() {
        let p = 3;
        let ctx = PadicContext::new(p, 12).unwrap();
        let pr = params(p, 2, 2, 4);
        let f = BoundaryField::from_z(p, vec![rat(7), rat(1)]).unwrap();
        let h = f.h(&ctx).unwrap();
        let j = log_p(&ctx.embed(&pr.theta), &ctx).unwrap();
        let v = build_volume(2, 1).unwrap();
        for idx in 0..8 {
            let sigma = Configuration::from_index(idx, 3, 2);
            let w = configuration_weight_exp(&v, &sigma, &h, &j, &ctx).unwrap();
            let mut direct = pr.theta.pow(sigma.equal_edges(&v) as i32);
            for x in v.level_range(1) {
                direct = &direct * &f.z()[sigma.0[x] as usize - 1];
            }
            assert!(w.agreement(&ctx.embed(&direct)) >= 10);
        }
    }

    #[test]
    fn recursion_map_zero_field() {
        let ctx = PadicContext::new(5, 10).unwrap();
        let theta = ctx.embed_int(6);
        let f = recursion_map_f(&[ctx.zero(), ctx.zero()], &theta, &ctx).unwrap();
        assert!(f.iter().all(PadicNumber::is_zero));
    }

    #[test]
    fn histogram_count() {
        assert_eq!(histograms(4, 9).len(), 220);
        assert!(histograms(3, 2)
            .iter()
            .all(|h| h.iter().sum::<usize>() == 2));
    }
}
