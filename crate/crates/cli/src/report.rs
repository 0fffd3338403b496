//! Report documents. Every field is plain data so a report re-parses into
//! the value it was written from.

use serde::{Deserialize, Serialize};

use padic_potts::potts::{MeasureDescriptor, Source};
use padic_potts::roots::Criterion;
use padic_potts::PadicRepr;

use crate::RunRequest;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOutput {
    pub request: RunRequest,
    pub exists: bool,
    pub criterion: Criterion,
    pub roots: Vec<PadicRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub request: RunRequest,
    pub theta_case: String,
    /// Sub-case label of the dedicated classifier, when one applies.
    pub subcase: Option<String>,
    pub count: usize,
    pub solutions: Vec<PadicRepr>,
    pub singular: Vec<SingularOutput>,
    pub unresolved: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureOutput {
    pub m: u64,
    pub z: PadicRepr,
    pub h: PadicRepr,
    pub multiplicity: u64,
    pub bounded: bool,
    pub source: Source,
}

impl MeasureOutput {
    /// Values are shown to `prec` relative digits; the library keeps guard
    /// digits beyond that.
    pub(crate) fn new(d: &MeasureDescriptor, prec: u32) -> Result<Self, String> {
        Ok(MeasureOutput {
            m: d.m,
            z: d.z.truncated(prec).to_repr(),
            h: d.h.truncated(prec).to_repr(),
            multiplicity: u64::try_from(d.multiplicity)
                .map_err(|_| format!("multiplicity C(q, {}) exceeds 64 bits", d.m))?,
            bounded: d.bounded,
            source: d.source,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularOutput {
    pub m: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOutput {
    pub request: RunRequest,
    pub count_lower_bound: u64,
    pub count_nonsingular: u64,
    pub exact: bool,
    pub unresolved: usize,
    pub measures: Vec<MeasureOutput>,
    pub singular: Vec<SingularOutput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteSystemOutput {
    pub request: RunRequest,
    pub modulus: u64,
    pub digits: u32,
    pub tuples: Vec<Vec<u64>>,
    pub all_have_form: bool,
    pub only_all_ones: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatEntry {
    pub m: u64,
    pub z: PadicRepr,
    pub n: u32,
    pub holds: bool,
    /// `null` when the discrepancy vanishes exactly.
    pub max_residual_valuation: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatOutput {
    pub request: RunRequest,
    pub results: Vec<CompatEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessEntry {
    pub m: u64,
    pub z: PadicRepr,
    pub bounded: bool,
    #[serde(rename = "Z_norms")]
    pub z_norms: Vec<String>,
    pub norms_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTransitionOutput {
    pub transition: bool,
    pub measures: usize,
    pub bounded: usize,
    pub unbounded: usize,
    pub witness: Option<(u64, u64)>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessOutput {
    pub request: RunRequest,
    pub measures: Vec<BoundednessEntry>,
    pub phase_transition: PhaseTransitionOutput,
}

/// One report per subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Root(RootOutput),
    Classify(ClassifyOutput),
    Enumerate(EnumerateOutput),
    BruteSystem(BruteSystemOutput),
    Compat(CompatOutput),
    Boundedness(BoundednessOutput),
}

impl Report {
    /// Parses a JSON document produced for `subcommand`.
    pub fn from_json(subcommand: crate::Subcommand, json: &str) -> serde_json::Result<Self> {
        use crate::Subcommand as S;
        Ok(match subcommand {
            S::Root => Report::Root(serde_json::from_str(json)?),
            S::Classify => Report::Classify(serde_json::from_str(json)?),
            S::Enumerate => Report::Enumerate(serde_json::from_str(json)?),
            S::BruteSystem => Report::BruteSystem(serde_json::from_str(json)?),
            S::Compat => Report::Compat(serde_json::from_str(json)?),
            S::Boundedness => Report::Boundedness(serde_json::from_str(json)?),
        })
    }
}
