//! JSON instance files and report documents.
//!
//! Instance files use the field names below verbatim. Optional extensions:
//! a parameter block may carry `dual` (the id of its twisted dual), and a
//! `jordan` entry may carry `dim`/`selfdual`/`b` when its `ρ` does not
//! occur among the blocks. A label without a `dual` entry is self-dual and a
//! label without a `reducible` entry is irreducible.

use std::collections::BTreeMap;

use gspin_core::inertia::{InertiaDatum, Label};
use gspin_core::instance::{Instance, ParamData};
use gspin_core::lparam::{CuspParam, ReducibilityPoint, SegmentParam, SelfDualType, TauParam};
use gspin_core::{Family, GroupSpec, LeviSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "gspin-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyTag {
    B,
    D,
}

impl From<FamilyTag> for Family {
    fn from(f: FamilyTag) -> Self {
        match f {
            FamilyTag::B => Family::B,
            FamilyTag::D => Family::D,
        }
    }
}

impl From<Family> for FamilyTag {
    fn from(f: Family) -> Self {
        match f {
            Family::B => FamilyTag::B,
            Family::D => FamilyTag::D,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDto {
    pub family: FamilyTag,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeviDto {
    pub blocks: Vec<usize>,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaDto {
    pub labels: Vec<String>,
    pub assign: Vec<String>,
    #[serde(default)]
    pub dual: BTreeMap<String, String>,
    #[serde(default)]
    pub reducible: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cn_fixes_tau: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfDualTag {
    Orth,
    Symp,
    None,
}

impl From<SelfDualTag> for SelfDualType {
    fn from(t: SelfDualTag) -> Self {
        match t {
            SelfDualTag::Orth => SelfDualType::Orthogonal,
            SelfDualTag::Symp => SelfDualType::Symplectic,
            SelfDualTag::None => SelfDualType::None,
        }
    }
}

impl From<SelfDualType> for SelfDualTag {
    fn from(t: SelfDualType) -> Self {
        match t {
            SelfDualType::Orthogonal => SelfDualTag::Orth,
            SelfDualType::Symplectic => SelfDualTag::Symp,
            SelfDualType::None => SelfDualTag::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BTag {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "1")]
    One,
}

impl From<BTag> for ReducibilityPoint {
    fn from(b: BTag) -> Self {
        match b {
            BTag::Zero => ReducibilityPoint::Zero,
            BTag::Half => ReducibilityPoint::Half,
            BTag::One => ReducibilityPoint::One,
        }
    }
}

impl From<ReducibilityPoint> for BTag {
    fn from(b: ReducibilityPoint) -> Self {
        match b {
            ReducibilityPoint::Zero => BTag::Zero,
            ReducibilityPoint::Half => BTag::Half,
            ReducibilityPoint::One => BTag::One,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDto {
    pub rho: String,
    pub dim: usize,
    pub selfdual: SelfDualTag,
    pub b: Option<BTag>,
    pub a: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanDto {
    pub rho: String,
    pub a: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selfdual: Option<SelfDualTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<BTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDto {
    pub blocks: Vec<BlockDto>,
    #[serde(default)]
    pub jordan: Vec<JordanDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub group: GroupDto,
    pub levi: LeviDto,
    pub sigma: SigmaDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDto>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(vec![msg.into()])
}

fn cusp_from_block(b: &BlockDto) -> CuspParam {
    CuspParam {
        id: b.rho.clone(),
        dim: b.dim,
        selfdual: b.selfdual.into(),
        b: b.b.map(Into::into),
        dual: b.dual.clone(),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(format!("cannot parse instance: {e}")))
    }

    /// Builds the core instance. Structural problems the core types cannot
    /// represent (unknown labels, a Levi that does not fit the group) are
    /// reported here; everything else is left to `validate`.
    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let family: Family = self.group.family.into();
        let group = GroupSpec::new(family, self.group.n).map_err(|e| invalid(e.to_string()))?;
        let levi = LeviSpec::new(group, self.levi.blocks.clone(), self.levi.m).map_err(|e| invalid(e.to_string()))?;

        let s = &self.sigma;
        let index = |name: &str| -> Result<Label, CliError> {
            s.labels
                .iter()
                .position(|l| l == name)
                .map(Label)
                .ok_or_else(|| invalid(format!("unknown label `{name}`")))
        };
        for (k, l) in s.labels.iter().enumerate() {
            if s.labels[..k].contains(l) {
                return Err(invalid(format!("label `{l}` is declared twice")));
            }
        }
        let assign = s.assign.iter().map(|a| index(a)).collect::<Result<Vec<_>, _>>()?;
        let mut dual: Vec<Label> = (0..s.labels.len()).map(Label).collect();
        for (from, to) in &s.dual {
            dual[index(from)?.0] = index(to)?;
        }
        let mut reducible = vec![false; s.labels.len()];
        for (l, &v) in &s.reducible {
            reducible[index(l)?.0] = v;
        }
        let sigma = InertiaDatum::new(s.labels.clone(), assign, dual, reducible, s.cn_fixes_tau.unwrap_or(false));

        let params = match &self.params {
            None => None,
            Some(p) => {
                let blocks: Vec<SegmentParam> =
                    p.blocks.iter().map(|b| SegmentParam::new(cusp_from_block(b), b.a)).collect();
                let mut jordan = Vec::with_capacity(p.jordan.len());
                for j in &p.jordan {
                    let rho = match p.blocks.iter().find(|b| b.rho == j.rho) {
                        Some(b) => cusp_from_block(b),
                        None => {
                            let (Some(dim), Some(selfdual)) = (j.dim, j.selfdual) else {
                                return Err(invalid(format!(
                                    "Jord(τ) entry `{}` does not occur among the blocks and needs dim and selfdual",
                                    j.rho
                                )));
                            };
                            CuspParam { id: j.rho.clone(), dim, selfdual: selfdual.into(), b: j.b.map(Into::into), dual: None }
                        }
                    };
                    jordan.push(SegmentParam::new(rho, j.a));
                }
                Some(ParamData { blocks, tau: TauParam { jordan } })
            }
        };
        Ok(Instance { levi, sigma, params })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let levi = &inst.levi;
        let s = &inst.sigma;
        let name = |l: Label| s.labels[l.0].clone();
        let sigma = SigmaDto {
            labels: s.labels.clone(),
            assign: s.assign.iter().map(|&l| name(l)).collect(),
            dual: (0..s.labels.len())
                .filter(|&k| s.dual[k].0 != k)
                .map(|k| (s.labels[k].clone(), name(s.dual[k])))
                .collect(),
            reducible: (0..s.labels.len()).filter(|&k| s.reducible[k]).map(|k| (s.labels[k].clone(), true)).collect(),
            cn_fixes_tau: (levi.family() == Family::D).then_some(s.cn_fixes_tau),
        };
        let params = inst.params.as_ref().map(|p| {
            let block_dto = |seg: &SegmentParam| BlockDto {
                rho: seg.rho.id.clone(),
                dim: seg.rho.dim,
                selfdual: seg.rho.selfdual.into(),
                b: seg.rho.b.map(Into::into),
                a: seg.a,
                dual: seg.rho.dual.clone(),
            };
            let jordan = p
                .tau
                .jordan
                .iter()
                .map(|j| {
                    let known = p.blocks.iter().any(|b| b.rho.id == j.rho.id);
                    JordanDto {
                        rho: j.rho.id.clone(),
                        a: j.a,
                        dim: (!known).then_some(j.rho.dim),
                        selfdual: (!known).then_some(j.rho.selfdual.into()),
                        b: if known { None } else { j.rho.b.map(Into::into) },
                    }
                })
                .collect();
            ParamsDto { blocks: p.blocks.iter().map(block_dto).collect(), jordan }
        });
        InstanceFile {
            group: GroupDto { family: levi.family().into(), n: levi.n() },
            levi: LeviDto { blocks: levi.blocks().to_vec(), m: levi.m() },
            sigma,
            params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationDto {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub schema_version: String,
    pub valid: bool,
    pub violations: Vec<ViolationDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDto {
    pub agrees: bool,
    pub bruteforce_elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGroupReport {
    pub schema_version: String,
    pub group: String,
    pub levi: String,
    pub regime: String,
    pub weyl_order: usize,
    pub stabilizer_order: usize,
    pub delta_prime: Vec<String>,
    pub omega: OmegaDto,
    pub generators: Vec<String>,
    pub elements: Vec<String>,
    pub rank: usize,
    pub isomorphism_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormDto {
    pub d: usize,
    pub d1: usize,
    pub d2: usize,
    pub has_elliptic: bool,
    pub irreducibly_induced: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDto {
    pub values: Vec<i8>,
    pub epsilon: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignTableDto {
    pub c0: String,
    pub generators: Vec<String>,
    pub c0_coefficients: Vec<u8>,
    pub characters: Vec<CharacterDto>,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticReportDto {
    pub schema_version: String,
    pub group: String,
    pub levi: String,
    pub r_group_generators: Vec<String>,
    pub has_elliptic: bool,
    pub all_components_elliptic: bool,
    pub elliptic_witness: Option<String>,
    pub a_r_basis: Vec<Vec<String>>,
    pub irreducibly_induced_from_elliptic: bool,
    pub inducing_witness: Option<String>,
    pub closed_form: ClosedFormDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_table: Option<SignTableDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiegelDto {
    pub centralizer: String,
    pub centralizer_component_group: String,
    pub r_phi: String,
    pub reducible: bool,
    pub pole: String,
    pub tables_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockArthurDto {
    pub segment: String,
    pub factor_type: Option<String>,
    pub in_jordan: bool,
    pub reducible: bool,
    pub centralizer: Option<String>,
    pub maximal_r_phi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArthurReportDto {
    pub schema_version: String,
    pub group: String,
    pub levi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub siegel: Option<SiegelDto>,
    pub blocks: Vec<BlockArthurDto>,
    pub w_phi_order: usize,
    pub delta_phi: Vec<String>,
    pub w_circ_generators: Vec<String>,
    pub representatives: Vec<String>,
    pub r_phi_sigma: String,
    pub knapp_stein_generators: Vec<String>,
    pub matches: bool,
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureDto {
    pub index: usize,
    pub instance: Option<InstanceFile>,
    pub check: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReportDto {
    pub schema_version: String,
    pub families: Vec<FamilyTag>,
    pub checks: Vec<String>,
    pub seed: Option<u64>,
    pub total: usize,
    pub rejected: usize,
    pub failures: Vec<FailureDto>,
    pub elapsed_ms: u64,
}
