//! Report envelopes and the per-command result records.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use torex_core::cohomology::{CohomologyTable, ForbiddenCone};
use torex_core::collections::{ClosureTrace, ExceptionalCollection, VerificationReport};
use torex_core::complex::RaySet;
use torex_core::exactlin::Rat;
use torex_core::fan::Diagnostic;
use torex_core::windows::{GenericShift, WindowKind, WindowP};
use torex_core::{bigjson, FanClass, PicClass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub torex_version: String,
    pub command: String,
    pub fan_name: String,
    pub result: Value,
    pub witnesses: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateResult {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub class: FanClass,
    /// Only for Fano and nef-Fano fans.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat")]
    pub normalized_volume: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardSummary {
    pub n: usize,
    pub d: usize,
    pub rank: usize,
    #[serde(with = "bigjson::vec")]
    pub torsion: Vec<num_bigint::BigInt>,
    /// Class of each `E_i`.
    pub ray_classes: Vec<PicClass>,
    pub canonical_class: PicClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomResult {
    pub class: PicClass,
    pub table: CohomologyTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicResult {
    pub class: PicClass,
    pub acyclic: bool,
    pub strongly_acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenResult {
    /// All non-acyclic subsets, the full set included when present.
    pub non_acyclic: Vec<RaySet>,
    pub cones: Vec<ForbiddenCone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowResult {
    pub kind: WindowKind,
    pub window: WindowP,
    pub shift: GenericShift,
    pub classes: Vec<PicClass>,
}

pub type CollectionResult = ExceptionalCollection;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionWitnesses {
    pub count_check: bool,
    pub verification: VerificationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub classes: Vec<PicClass>,
    pub report: VerificationReport,
}

pub type ClosureResult = ClosureTrace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureWitnesses {
    /// Re-deriving the trace step by step reproduces every class.
    pub replay_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay_error: Option<String>,
    pub known: usize,
    pub target_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unsupported {
    pub error: String,
}

mod opt_rat {
    use serde::{Deserialize, Deserializer, Serializer};
    use torex_core::bigjson;
    use torex_core::exactlin::Rat;

    pub fn serialize<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(r) => s.serialize_some(&bigjson::rat_to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| bigjson::rat_from_str(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .transpose()
    }
}
