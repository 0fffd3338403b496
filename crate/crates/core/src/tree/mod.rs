//! Finite volumes of the Cayley tree and the Potts measures on them.
//!
//! Vertices are numbered breadth-first from the root `0`; every vertex at
//! level `< n` has exactly `k` direct successors (the root included), so
//! `|W_l| = k^l` and the partition function obeys `Z_{n+1} = A_n Z_n` with
//! `A_n = a^(k |W_n|)`.

mod bounded;
mod measure;

pub use bounded::{
    boundedness_verdict, partition_norm, phase_transition_verdict, BoundednessReport,
    PhaseTransitionReport,
};
pub use measure::{
    check_compatibility, check_compatibility_direct, configuration_weight_exp, measure_table,
    partition_function, partition_function_direct, recursion_map_f, CompatibilityReport,
    MeasureTable, VOLUME_CAP,
};

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{exp_p, log_p, PadicContext, PadicNumber};
use crate::potts::MeasureDescriptor;
use crate::rational::ExactRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeVolume {
    k: u64,
    n: u32,
    /// `level_start[l]` is the first vertex of `W_l`; one extra entry closes `W_n`.
    level_start: Vec<usize>,
}

/// The ball `V_n` of radius `n` around the root.
pub fn build_volume(k: u64, n: u32) -> Result<TreeVolume> {
    if k == 0 {
        return Err(Error::InvalidParameters(
            "tree order k must be at least 1".into(),
        ));
    }
    let mut level_start = Vec::with_capacity(n as usize + 2);
    let mut start: usize = 0;
    let mut width: usize = 1;
    for _ in 0..=n {
        level_start.push(start);
        start = start
            .checked_add(width)
            .ok_or_else(|| Error::InvalidParameters("volume too large to index".into()))?;
        width = width
            .checked_mul(k as usize)
            .ok_or_else(|| Error::InvalidParameters("volume too large to index".into()))?;
    }
    level_start.push(start);
    Ok(TreeVolume { k, n, level_start })
}

impl TreeVolume {
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn radius(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.level_start[self.n as usize + 1]
    }

    /// Vertex indices of `W_l`.
    pub fn level_range(&self, l: u32) -> Range<usize> {
        assert!(l <= self.n, "level {l} outside V_{}", self.n);
        self.level_start[l as usize]..self.level_start[l as usize + 1]
    }

    pub fn level_size(&self, l: u32) -> usize {
        self.level_range(l).len()
    }

    pub fn level(&self, x: usize) -> u32 {
        assert!(x < self.num_vertices());
        (self.level_start.partition_point(|&s| s <= x) - 1) as u32
    }

    /// `S(x)`; empty for leaves.
    pub fn successors(&self, x: usize) -> Range<usize> {
        if self.level(x) == self.n {
            return 0..0;
        }
        let k = self.k as usize;
        x * k + 1..x * k + k + 1
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        (x > 0).then(|| (x - 1) / self.k as usize)
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.num_vertices()).map(|y| (self.parent(y).expect("non-root"), y))
    }

    pub fn num_edges(&self) -> usize {
        self.num_vertices() - 1
    }
}

/// Spins in `1..=q`, one per vertex of a volume (or of a level).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration(pub Vec<u32>);

impl Configuration {
    pub fn constant(len: usize, spin: u32) -> Self {
        Configuration(vec![spin; len])
    }

    /// Mixed-radix decoding with vertex 0 as the least significant place.
    pub fn from_index(mut index: u64, len: usize, q: u64) -> Self {
        let mut spins = Vec::with_capacity(len);
        for _ in 0..len {
            spins.push((index % q) as u32 + 1);
            index /= q;
        }
        Configuration(spins)
    }

    pub fn index(&self, q: u64) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &s| acc * q + (s as u64 - 1))
    }

    /// Number of edges whose endpoints carry equal spins.
    pub fn equal_edges(&self, vol: &TreeVolume) -> u64 {
        assert_eq!(self.0.len(), vol.num_vertices());
        vol.edges().filter(|&(x, y)| self.0[x] == self.0[y]).count() as u64
    }
}

/// `H(σ) = J · #{equal-spin edges}`.
pub fn hamiltonian(vol: &TreeVolume, sigma: &Configuration, coupling: &PadicNumber) -> PadicNumber {
    coupling.mul_int(sigma.equal_edges(vol) as i64)
}

/// A translation-invariant boundary field `h̃ ∈ Q_p^q`, held in the
/// multiplicative form `z̃_i = exp_p(h̃_i)` by exact rational
/// representatives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryField {
    p: u64,
    z: Vec<ExactRational>,
}

impl BoundaryField {
    /// Field with `z̃ = z`; the values must be p-adic units.
    pub fn from_z(p: u64, z: Vec<ExactRational>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidParameters(
                "a field needs q >= 2 entries".into(),
            ));
        }
        if z.iter().any(|v| v.valuation(p) != Some(0)) {
            return Err(Error::InvalidParameters(
                "field entries must be p-adic units".into(),
            ));
        }
        Ok(BoundaryField { p, z })
    }

    /// `h̃ = 0`.
    pub fn trivial(p: u64, q: u64) -> Self {
        BoundaryField {
            p,
            z: vec![ExactRational::one(); q as usize],
        }
    }

    /// Field given additively; each `exp_p(h̃_i)` is taken at `ctx` precision.
    pub fn from_h(h: &[PadicNumber], ctx: &PadicContext) -> Result<Self> {
        let z = h
            .iter()
            .map(|x| exp_p(x, ctx).map(|e| e.to_rational()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_z(ctx.p(), z)
    }

    /// `h̃_i = h` for `i ∈ M` and `0` elsewhere, with `exp_p(h) = z`.
    /// Spins in `subset` are numbered from 1.
    pub fn from_subset(q: u64, subset: &[u32], z: &PadicNumber) -> Result<Self> {
        let mut values = vec![ExactRational::one(); q as usize];
        for &i in subset {
            if i == 0 || i as u64 > q {
                return Err(Error::InvalidParameters(format!(
                    "spin {i} outside 1..={q}"
                )));
            }
            values[i as usize - 1] = z.to_rational();
        }
        Self::from_z(z.prime(), values)
    }

    /// Field of a descriptor with `M = {1, ..., m}` and `h̃_q = 0`.
    pub fn from_descriptor(d: &MeasureDescriptor, q: u64) -> Result<Self> {
        let subset: Vec<u32> = (1..=d.m as u32).collect();
        Self::from_subset(q, &subset, &d.z)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.z.len() as u64
    }

    pub fn z(&self) -> &[ExactRational] {
        &self.z
    }

    /// `h̃_i = log_p(z̃_i)`.
    pub fn h(&self, ctx: &PadicContext) -> Result<Vec<PadicNumber>> {
        self.z.iter().map(|z| log_p(&ctx.embed(z), ctx)).collect()
    }

    /// Adds `delta` to `h̃_i` (spins numbered from 1).
    pub fn perturbed(&self, i: u32, delta: &PadicNumber, ctx: &PadicContext) -> Result<Self> {
        if i == 0 || i as u64 > self.q() {
            return Err(Error::InvalidParameters(format!(
                "spin {i} outside 1..={}",
                self.q()
            )));
        }
        let factor = exp_p(delta, ctx)?.to_rational();
        let mut z = self.z.clone();
        z[i as usize - 1] = &z[i as usize - 1] * &factor;
        Self::from_z(self.p, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_sizes() {
        assert_eq!(build_volume(3, 0).unwrap().num_vertices(), 1);
        let v = build_volume(3, 2).unwrap();
        assert_eq!(v.num_vertices(), 13);
        assert_eq!(v.level_size(2), 9);
        assert_eq!(build_volume(2, 3).unwrap().level_size(3), 8);
        assert_eq!(build_volume(1, 4).unwrap().num_vertices(), 5);
        assert!(build_volume(0, 2).is_err());
    }

    #[test]
    fn successor_structure() {
        let v = build_volume(3, 2).unwrap();
        assert_eq!(v.successors(0), 1..4);
        assert_eq!(v.successors(2), 7..10);
        assert!(v.successors(5).is_empty());
        for x in 0..v.num_vertices() {
            for y in v.successors(x) {
                assert_eq!(v.parent(y), Some(x));
                assert_eq!(v.level(y), v.level(x) + 1);
            }
            if v.level(x) < 2 {
                assert_eq!(v.successors(x).len(), 3);
            }
        }
        assert_eq!(v.edges().count(), 12);
    }

    #[test]
    fn configuration_indexing() {
        for idx in [0u64, 1, 17, 255] {
            let c = Configuration::from_index(idx, 4, 4);
            assert_eq!(c.index(4), idx);
        }
        assert_eq!(Configuration::from_index(1, 3, 2).0, vec![2, 1, 1]);
    }

    #[test]
    fn hamiltonian_examples() {
        let v = build_volume(3, 1).unwrap();
        let ctx = PadicContext::new(3, 10).unwrap();
        let j = ctx.embed_int(3);
        let h = hamiltonian(&v, &Configuration::constant(4, 2), &j);
        assert_eq!(h, ctx.embed_int(9));
        let proper = Configuration(vec![1, 2, 3, 2]);
        assert!(hamiltonian(&v, &proper, &j).is_zero());
    }

    #[test]
    fn field_constructors() {
        let ctx = PadicContext::new(2, 12).unwrap();
        let f = BoundaryField::from_subset(4, &[1], &ctx.embed_int(-27)).unwrap();
        assert_eq!(f.z()[1], ExactRational::one());
        assert!(
            BoundaryField::from_z(2, vec![ExactRational::from(2), ExactRational::one()]).is_err()
        );
        let h = f.h(&ctx).unwrap();
        assert!(h[3].is_zero());
        let back = BoundaryField::from_h(&h, &ctx).unwrap();
        let d = &back.z()[0] - &f.z()[0];
        assert!(d.valuation(2).is_none_or(|v| v >= 10));
    }
}
