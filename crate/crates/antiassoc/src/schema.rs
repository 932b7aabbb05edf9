//! Serde model of the corpus file. Field names match the JSON keys one to one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    pub format_version: u32,
    pub algebras: Vec<AlgebraRecord>,
    #[serde(default)]
    pub h2_tables: Vec<H2Record>,
    #[serde(default)]
    pub ts_empty: Vec<TsEmptyRecord>,
    #[serde(default)]
    pub extensions: Vec<ExtensionRecord>,
    #[serde(default)]
    pub alpha_formula_sets: Vec<AlphaSetRecord>,
    #[serde(default)]
    pub reductions: Vec<ReductionRecord>,
    #[serde(default)]
    pub degenerations: Vec<DegenerationRecord>,
    #[serde(default)]
    pub orbit_dims: Vec<OrbitDimRecord>,
    #[serde(default)]
    pub components: Vec<ComponentRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProvenanceKind {
    Quoted,
    Reconstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    pub location: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraClass {
    TwoStep,
    NonTwoStep,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitOf {
    pub base: String,
    pub extra: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraRecord {
    pub id: String,
    pub name: String,
    pub dim: usize,
    pub class: AlgebraClass,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamRecord>,
    /// `[i, j, "linear form in e1..en"]`, one-based.
    pub products: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_of: Option<SplitOf>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Record {
    pub algebra: String,
    /// Linear forms in the symbols `Dij`.
    pub generators: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TsEmptyRecord {
    pub algebra: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionRecord {
    pub id: String,
    pub base: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub base_params: BTreeMap<String, String>,
    pub cocycles: Vec<String>,
    pub result: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSetRecord {
    pub id: String,
    pub algebra: String,
    pub generators: Vec<String>,
    /// Rows of the automorphism matrix; column `i` is the image of `eᵢ`.
    pub phi: Vec<Vec<String>>,
    /// `α*₁ … α*ₛ` in the symbols `a1 … as`, the entries of `phi` and the
    /// family parameters.
    pub formulas: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionRecord {
    pub id: String,
    pub alpha_set: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    pub alphas: Vec<String>,
    /// Entries of `phi` not listed are zero.
    pub phi: BTreeMap<String, String>,
    pub expected: Vec<Vec<String>>,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerationTable {
    FourDimensional,
    Long,
    Short,
}

impl DegenerationTable {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegenerationTable::FourDimensional => "four-dimensional",
            DegenerationTable::Long => "long",
            DegenerationTable::Short => "short",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolRecord {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sampled: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fixed: BTreeMap<String, String>,
}

impl SymbolRecord {
    fn is_empty(&self) -> bool {
        self.free.is_empty() && self.sampled.is_empty() && self.fixed.is_empty()
    }
}

/// A basis vector, either as a linear form in `e1..en` or as coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisRow {
    Form(String),
    Coords(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationRecord {
    pub id: String,
    pub table: DegenerationTable,
    pub source: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub source_index: BTreeMap<String, String>,
    pub target: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub target_params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "SymbolRecord::is_empty")]
    pub symbols: SymbolRecord,
    pub basis: Vec<BasisRow>,
    /// The basis as printed, when it differs from the verified one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub as_printed: Option<Vec<BasisRow>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub der_samples: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitDimKind {
    Orbit,
    FamilyClosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDimRecord {
    pub algebra: String,
    pub kind: OrbitDimKind,
    pub value: usize,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub dim: usize,
    pub variety_dim: usize,
    pub sources: Vec<String>,
    pub provenance: Provenance,
}
