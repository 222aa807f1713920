//! Parameter side: L-parameters as formal sums of tagged blocks `φ_ρ ⊗ S_a`,
//! centralizer types, Arthur R-groups and the matching with `R(σ)`.
//!
//! Self-duality types are input tags relative to the similitude twist. The
//! component groups of the classical complex groups involved are recorded as
//! data: `GO(k)` is disconnected exactly for even `k` (for odd `k` the
//! element `-I` is a scalar similitude), `GO_{1,1}` is disconnected, and
//! `GL`, `GSp` and tori are connected.
//!
//! Results assume the generic L-packet conjecture for the reducibility
//! dictionary; see [`MODEL_ASSUMPTIONS`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::inertia::{r_group_closed_form, stabilizer, InertiaDatum, Label, RGroup};
use crate::instance::{Violation, ViolationKind};
use crate::roots::{all_reduced_roots, rank_one_element, ReducedRoot};
use crate::weyl::{Family, LeviSpec, WeylElement, WeylGroup};

pub const MODEL_ASSUMPTIONS: &[&str] = &[
    "discrete series are generic",
    "Shahidi's generic L-packet conjecture (reducibility of rank-one induction is read off the parameter)",
];

/// Type of the form `J` preserved by `φ_ρ` up to the similitude character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SelfDualType {
    Orthogonal,
    Symplectic,
    None,
}

/// Cuspidal reducibility point `b` of `ν^b ρ ⋊ τ_cusp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducibilityPoint {
    Zero,
    Half,
    One,
}

impl ReducibilityPoint {
    /// Parity of `2b + 1`: `true` when odd.
    pub fn two_b_plus_one_is_odd(self) -> bool {
        !matches!(self, ReducibilityPoint::Half)
    }
}

impl fmt::Display for ReducibilityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReducibilityPoint::Zero => "0",
            ReducibilityPoint::Half => "1/2",
            ReducibilityPoint::One => "1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspParam {
    pub id: String,
    pub dim: usize,
    pub selfdual: SelfDualType,
    pub b: Option<ReducibilityPoint>,
    /// Id of the twisted dual `ρ̃ ⊗ ω_τ` when it differs from `ρ` and occurs
    /// in the data.
    pub dual: Option<String>,
}

impl CuspParam {
    pub fn is_self_dual(&self) -> bool {
        self.selfdual != SelfDualType::None
    }

    pub fn violations(&self, family: Family) -> Vec<String> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(format!("ρ `{}` has dimension 0", self.id));
        }
        if self.dim % 2 == 1 && self.selfdual == SelfDualType::Symplectic {
            out.push(format!(
                "ρ `{}` has odd dimension {} and cannot preserve a symplectic form",
                self.id, self.dim
            ));
        }
        if self.is_self_dual() != self.b.is_some() {
            out.push(format!(
                "ρ `{}`: a reducibility point b is given exactly for twisted self-dual ρ",
                self.id
            ));
        }
        if self.is_self_dual() && self.dual.as_ref().is_some_and(|d| *d != self.id) {
            out.push(format!("ρ `{}` is twisted self-dual but names a different dual", self.id));
        }
        if family == Family::B {
            if let Some(b) = self.b {
                let expect_orth = b == ReducibilityPoint::Half;
                if expect_orth != (self.selfdual == SelfDualType::Orthogonal) {
                    out.push(format!(
                        "ρ `{}`: b = {} is inconsistent with {:?} type (b = 1/2 exactly for orthogonal φ_ρ)",
                        self.id, b, self.selfdual
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SegmentParam {
    pub rho: CuspParam,
    /// Size of the Steinberg factor `S_a`.
    pub a: usize,
}

impl SegmentParam {
    pub fn new(rho: CuspParam, a: usize) -> Self {
        SegmentParam { rho, a }
    }

    pub fn dim(&self) -> usize {
        self.rho.dim * self.a
    }

    /// Same `(ρ, a)`.
    pub fn same_as(&self, other: &SegmentParam) -> bool {
        self.rho.id == other.rho.id && self.a == other.a
    }

    /// `other` is the twisted dual of `self`.
    pub fn is_twisted_dual_of(&self, other: &SegmentParam) -> bool {
        if self.a != other.a {
            return false;
        }
        if self.rho.is_self_dual() {
            self.rho.id == other.rho.id
        } else {
            self.rho.dual.as_deref() == Some(other.rho.id.as_str())
        }
    }

    pub fn name(&self) -> String {
        format!("{}⊗S{}", self.rho.id, self.a)
    }
}

/// `Jord(τ)`, the blocks of `φ_τ`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TauParam {
    pub jordan: Vec<SegmentParam>,
}

impl TauParam {
    pub fn contains(&self, seg: &SegmentParam) -> bool {
        self.jordan.iter().any(|j| j.same_as(seg))
    }

    /// `dim φ_τ`.
    pub fn dim(&self) -> usize {
        self.jordan.iter().map(SegmentParam::dim).sum()
    }

    pub fn violations(&self, family: Family) -> Vec<String> {
        let mut out = Vec::new();
        for (k, seg) in self.jordan.iter().enumerate() {
            out.extend(seg.rho.violations(family));
            if self.jordan[..k].iter().any(|s| s.same_as(seg)) {
                out.push(format!("({}, {}) occurs twice in Jord(τ)", seg.rho.id, seg.a));
            }
            match seg.rho.b {
                None => out.push(format!(
                    "({}, {}) ∈ Jord(τ) requires a twisted self-dual ρ",
                    seg.rho.id, seg.a
                )),
                Some(b) if (seg.a % 2 == 1) != b.two_b_plus_one_is_odd() => out.push(format!(
                    "({}, {}) ∈ Jord(τ) needs a of the parity of 2b + 1 (b = {})",
                    seg.rho.id, seg.a, b
                )),
                Some(_) => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormType {
    GSp,
    GO,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilinearForm {
    Symmetric,
    Symplectic,
}

impl From<FormType> for BilinearForm {
    fn from(t: FormType) -> Self {
        match t {
            FormType::GSp => BilinearForm::Symplectic,
            FormType::GO => BilinearForm::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentGroup {
    Trivial,
    Z2,
}

impl ComponentGroup {
    pub fn rank(self) -> usize {
        match self {
            ComponentGroup::Trivial => 0,
            ComponentGroup::Z2 => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentralizerKind {
    GL(usize),
    GSp(usize),
    GO(usize),
    GO11,
    /// `(C^×)^k`.
    Torus(usize),
}

impl fmt::Display for CentralizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CentralizerKind::GL(k) => write!(f, "GL({k})"),
            CentralizerKind::GSp(k) => write!(f, "GSp({k})"),
            CentralizerKind::GO(k) => write!(f, "GO({k})"),
            CentralizerKind::GO11 => f.write_str("GO_{1,1}"),
            CentralizerKind::Torus(k) => write!(f, "(C^×)^{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CentralizerType {
    pub kind: CentralizerKind,
    pub component_group: ComponentGroup,
}

impl CentralizerType {
    pub fn of(kind: CentralizerKind) -> Self {
        let component_group = match kind {
            CentralizerKind::GO(k) if k % 2 == 0 => ComponentGroup::Z2,
            CentralizerKind::GO11 => ComponentGroup::Z2,
            _ => ComponentGroup::Trivial,
        };
        CentralizerType { kind, component_group }
    }
}

fn require_self_dual(rho: &CuspParam) -> Result<()> {
    if rho.is_self_dual() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ρ `{}` is not twisted self-dual, so φ_ρ has no form type", rho.id)))
    }
}

/// Form preserved by `φ_ρ ⊗ S_a`: `S_a` is orthogonal for odd `a` and
/// symplectic for even `a`.
pub fn segment_factor_type(seg: &SegmentParam) -> Result<FormType> {
    require_self_dual(&seg.rho)?;
    let orth = seg.rho.selfdual == SelfDualType::Orthogonal;
    let even = seg.a % 2 == 0;
    Ok(if orth == even { FormType::GSp } else { FormType::GO })
}

/// Centralizer of `m` copies of an irreducible parameter preserving `sub`
/// inside the similitude group of `ambient`.
pub fn multiplicity_centralizer(ambient: BilinearForm, sub: BilinearForm, mult: usize) -> Result<CentralizerType> {
    if mult == 0 {
        return Err(Error::InvalidParameter("multiplicity 0".into()));
    }
    if ambient == sub {
        Ok(CentralizerType::of(CentralizerKind::GO(mult)))
    } else if mult % 2 == 1 {
        Err(Error::InvalidParameter(format!(
            "multiplicity {mult} with mismatched forms needs a symplectic form in odd dimension"
        )))
    } else {
        Ok(CentralizerType::of(CentralizerKind::GSp(mult)))
    }
}

fn check_siegel_dim(phi0: &CuspParam, n: usize) -> Result<()> {
    if phi0.dim != n {
        return Err(Error::DimensionMismatch { expected: n, got: phi0.dim });
    }
    Ok(())
}

/// `S_φ` for `φ = φ_0 ⊗ ψ̂` on the Siegel Levi `GL_n × GL_1`, via the sign
/// `μc` of the form on the 2×2 block matrix: `μ = -1` for `GSp_{2n}` and
/// `+1` for `GSO_{2n}`, `c = +1` for orthogonal `J` and `-1` for symplectic.
pub fn siegel_centralizer(phi0: &CuspParam, family: Family, n: usize) -> Result<CentralizerType> {
    check_siegel_dim(phi0, n)?;
    let c: i8 = match phi0.selfdual {
        SelfDualType::None => return Ok(CentralizerType::of(CentralizerKind::Torus(2))),
        SelfDualType::Orthogonal => 1,
        SelfDualType::Symplectic => -1,
    };
    let kind = match family {
        Family::B => {
            let mu: i8 = -1;
            if mu * c == -1 {
                CentralizerKind::GL(2)
            } else {
                CentralizerKind::GO11
            }
        }
        // the off-diagonal part of GO_{1,1} has similitude norm (-1)^n
        Family::D if c == -1 => CentralizerKind::GL(2),
        Family::D if n % 2 == 0 => CentralizerKind::GO11,
        Family::D => CentralizerKind::Torus(1),
    };
    Ok(CentralizerType::of(kind))
}

/// `R_{φ,σ}` for the Siegel Levi, read from the factorization of `φ_0`.
pub fn siegel_r_group(phi0: &CuspParam, family: Family, n: usize) -> Result<ComponentGroup> {
    check_siegel_dim(phi0, n)?;
    Ok(match (family, phi0.selfdual) {
        (_, SelfDualType::None) => ComponentGroup::Trivial,
        (Family::B, SelfDualType::Symplectic) => ComponentGroup::Z2,
        (Family::B, SelfDualType::Orthogonal) => ComponentGroup::Trivial,
        (Family::D, SelfDualType::Symplectic) => ComponentGroup::Trivial,
        (Family::D, SelfDualType::Orthogonal) if n % 2 == 0 => ComponentGroup::Z2,
        (Family::D, SelfDualType::Orthogonal) => ComponentGroup::Trivial,
    })
}

/// Which of `L(s, ∧²φ_0 ⊗ ψ̂^{-1})`, `L(s, Sym²φ_0 ⊗ ψ̂^{-1})` has the pole at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pole {
    Exterior,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiegelVerdict {
    pub pole: Pole,
    pub reducible: bool,
}

/// Reducibility of `Ind_M^G(σ_0 ⊗ ψ)` for the Siegel Levi. `GSpin_{2n}`
/// reduces iff the exterior-square L-function is regular at 0 (for
/// `GSpin_{2n+1}` the roles swap) and odd `n` never reduces.
pub fn siegel_reducibility(phi0: &CuspParam, family: Family) -> Result<SiegelVerdict> {
    require_self_dual(phi0)?;
    let n = phi0.dim;
    if n % 2 == 1 && phi0.selfdual != SelfDualType::Orthogonal {
        return Err(Error::InvalidParameter(format!("odd-dimensional ρ `{}` must be orthogonal", phi0.id)));
    }
    let pole = match phi0.selfdual {
        SelfDualType::Symplectic => Pole::Exterior,
        _ => Pole::Symmetric,
    };
    let reducible = n % 2 == 0
        && match family {
            Family::B => pole == Pole::Exterior,
            Family::D => pole == Pole::Symmetric,
        };
    Ok(SiegelVerdict { pole, reducible })
}

/// Whether `δ(ρ, a) ⋊ τ` reduces.
pub fn rank_one_reducibility(seg: &SegmentParam, tau: &TauParam) -> Result<bool> {
    let Some(b) = seg.rho.b else {
        if seg.rho.is_self_dual() {
            return Err(Error::InvalidParameter(format!("ρ `{}` is twisted self-dual but has no b", seg.rho.id)));
        }
        return Ok(false);
    };
    Ok(!tau.contains(seg) && (seg.a % 2 == 1) == b.two_b_plus_one_is_odd())
}

/// `R_φ` for `M = GL_k × GSpin_{2ℓ+1}` and `φ = φ_σ ⊕ φ_τ ⊕ φ̃_σ ⊗ ψ̂`:
/// the component group of the centralizer of the `φ_σ`-isotypic part in
/// `GSp(φ)`, which has multiplicity 3 when `(ρ, a) ∈ Jord(τ)` and 2 otherwise.
pub fn arthur_r_group_maximal(seg: &SegmentParam, tau: &TauParam) -> Result<ComponentGroup> {
    if !seg.rho.is_self_dual() {
        return Ok(ComponentGroup::Trivial);
    }
    let mult = if tau.contains(seg) { 3 } else { 2 };
    let sub = segment_factor_type(seg)?.into();
    Ok(multiplicity_centralizer(BilinearForm::Symplectic, sub, mult)?.component_group)
}

fn check_alignment(levi: &LeviSpec, blocks: &[SegmentParam]) -> Result<()> {
    if blocks.len() != levi.r() {
        return Err(Error::LeviMismatch { expected: levi.r(), got: blocks.len() });
    }
    for (i, seg) in blocks.iter().enumerate() {
        if seg.dim() != levi.block(i) {
            return Err(Error::DimensionMismatch { expected: levi.block(i), got: seg.dim() });
        }
    }
    Ok(())
}

/// Family D parameter data is handled for the Siegel Levi with cuspidal
/// blocks only.
pub fn check_scope(levi: &LeviSpec, blocks: &[SegmentParam]) -> Result<()> {
    if levi.family() == Family::D && !(levi.r() == 1 && levi.m() == 0 && blocks.iter().all(|s| s.a == 1)) {
        return Err(Error::Unsupported(
            "parameter-side data for GSpin_{2n} is only supported for the Siegel Levi GL_n × GL_1 with a = 1".into(),
        ));
    }
    Ok(())
}

/// Knapp–Stein data of the representation with parameter
/// `⊕ φ_{ρ_i} ⊗ S_{a_i} ⊕ φ_τ`: one label per distinct `(ρ, a)`, plus fresh
/// labels for twisted duals that occur nowhere.
pub fn derive_inertia(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Result<InertiaDatum> {
    check_scope(levi, blocks)?;
    check_alignment(levi, blocks)?;
    for seg in blocks {
        if let Some(d) = &seg.rho.dual {
            let partner = blocks.iter().find(|s| s.rho.id == *d);
            if let Some(p) = partner {
                if p.rho.dual.as_deref() != Some(seg.rho.id.as_str()) || p.rho.dim != seg.rho.dim {
                    return Err(Error::ExplicitPairingRequired(format!(
                        "`{}` names `{}` as its twisted dual but the pairing is not symmetric",
                        seg.rho.id, d
                    )));
                }
            }
        } else if !seg.rho.is_self_dual() {
            if let Some(other) = blocks.iter().find(|s| s.rho.dual.as_deref() == Some(seg.rho.id.as_str())) {
                return Err(Error::ExplicitPairingRequired(format!(
                    "`{}` is named as the twisted dual of `{}` but names no dual itself",
                    seg.rho.id, other.rho.id
                )));
            }
        }
    }

    let mut labels: Vec<String> = Vec::new();
    let mut reps: Vec<Option<&SegmentParam>> = Vec::new();
    fn intern<'a>(
        name: String,
        rep: Option<&'a SegmentParam>,
        labels: &mut Vec<String>,
        reps: &mut Vec<Option<&'a SegmentParam>>,
    ) -> Label {
        match labels.iter().position(|l| *l == name) {
            Some(k) => {
                if reps[k].is_none() {
                    reps[k] = rep;
                }
                Label(k)
            }
            None => {
                labels.push(name);
                reps.push(rep);
                Label(labels.len() - 1)
            }
        }
    }
    let mut assign = Vec::with_capacity(blocks.len());
    for seg in blocks {
        assign.push(intern(seg.name(), Some(seg), &mut labels, &mut reps));
    }
    let mut dual: Vec<Option<Label>> = alloc::vec![None; labels.len()];
    for seg in blocks {
        let l = intern(seg.name(), Some(seg), &mut labels, &mut reps);
        let d = if seg.rho.is_self_dual() {
            l
        } else {
            let partner = match &seg.rho.dual {
                Some(p) => format!("{}⊗S{}", p, seg.a),
                None => format!("({})~", seg.name()),
            };
            intern(partner, None, &mut labels, &mut reps)
        };
        dual.resize(labels.len(), None);
        dual[l.0] = Some(d);
        dual[d.0] = Some(l);
    }
    let dual: Vec<Label> = dual.into_iter().enumerate().map(|(k, d)| d.unwrap_or(Label(k))).collect();
    let mut reducible = Vec::with_capacity(labels.len());
    for rep in &reps {
        reducible.push(match rep {
            None => false,
            Some(seg) if levi.family() == Family::D => {
                seg.rho.is_self_dual() && siegel_reducibility(&seg.rho, Family::D)?.reducible
            }
            Some(seg) => rank_one_reducibility(seg, tau)?,
        });
    }
    Ok(InertiaDatum::new(labels, assign, dual, reducible, false))
}

/// `R_{φ,σ} = W_{φ,σ} / W°_{φ,σ}` realized inside `W_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArthurRGroup {
    /// `W_{φ,σ}`, identified with `W(σ)`.
    pub w_phi: Vec<WeylElement>,
    /// Roots whose reflections generate `W°_{φ,σ}`.
    pub delta_phi: BTreeSet<ReducedRoot>,
    pub w_circ_generators: Vec<WeylElement>,
    pub w_circ: Vec<WeylElement>,
    /// Cosets of `W°` in `W_{φ,σ}`, each sorted; ordered by representative.
    pub cosets: Vec<Vec<WeylElement>>,
    /// Smallest sign change in each coset, when there is one.
    pub representatives: Vec<Option<WeylElement>>,
    pub w_circ_normal: bool,
    pub quotient_elementary_abelian: bool,
}

impl ArthurRGroup {
    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_of(&self, w: &WeylElement) -> Option<usize> {
        self.cosets.iter().position(|c| c.binary_search(w).is_ok())
    }

    /// `d` with `|R_{φ,σ}| = 2^d`, when the order is a power of two.
    pub fn rank(&self) -> Option<usize> {
        let n = self.order();
        n.is_power_of_two().then(|| n.trailing_zeros() as usize)
    }
}

/// Roots `α` whose reflection lies in `W°_{φ,σ}`: equal blocks, twisted
/// dual blocks, and self-dual blocks whose maximal `R_φ` is trivial.
pub fn arthur_delta(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Result<BTreeSet<ReducedRoot>> {
    let mut out = BTreeSet::new();
    for root in all_reduced_roots(levi) {
        let zero = match root {
            ReducedRoot::Alpha(i, j) => blocks[i].same_as(&blocks[j]),
            ReducedRoot::Beta(i, j) => blocks[i].is_twisted_dual_of(&blocks[j]),
            ReducedRoot::Gamma(i) => {
                blocks[i].rho.is_self_dual() && arthur_r_group_maximal(&blocks[i], tau)? == ComponentGroup::Trivial
            }
        };
        if zero {
            out.insert(root);
        }
    }
    Ok(out)
}

/// `R_{φ,σ}` for an arbitrary Levi of `GSpin_{2n+1}`.
pub fn arthur_r_group_general(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Result<ArthurRGroup> {
    if levi.family() != Family::B {
        return Err(Error::Unsupported("Arthur R-groups for general Levis are implemented for GSpin_{2n+1}".into()));
    }
    check_alignment(levi, blocks)?;
    let weyl = WeylGroup::new(levi.clone());
    let sigma = derive_inertia(levi, blocks, tau)?;
    let w_phi = stabilizer(&weyl, &sigma)?;
    let delta_phi = arthur_delta(levi, blocks, tau)?;
    let mut w_circ_generators = Vec::new();
    for root in &delta_phi {
        if let Some(s) = rank_one_element(&weyl, *root)? {
            if !w_circ_generators.contains(&s) {
                w_circ_generators.push(s);
            }
        }
    }
    let w_circ = weyl.subgroup(&w_circ_generators)?;
    if let Some(x) = w_circ.iter().find(|x| w_phi.binary_search(x).is_err()) {
        return Err(Error::Precondition(format!("W° element {x} is not in W_φ")));
    }

    let mut cosets: Vec<Vec<WeylElement>> = Vec::new();
    let mut seen: BTreeSet<WeylElement> = BTreeSet::new();
    for g in &w_phi {
        if seen.contains(g) {
            continue;
        }
        let mut coset = Vec::with_capacity(w_circ.len());
        for x in &w_circ {
            coset.push(weyl.multiply(g, x)?);
        }
        coset.sort();
        seen.extend(coset.iter().cloned());
        cosets.push(coset);
    }
    let representatives: Vec<Option<WeylElement>> = cosets
        .iter()
        .map(|c| c.iter().filter(|w| w.has_trivial_perm()).min_by_key(|w| w.flips().bits()).cloned())
        .collect();
    let mut order: Vec<usize> = (0..cosets.len()).collect();
    order.sort_by_key(|&k| (representatives[k].as_ref().map(|w| w.flips().bits()), cosets[k][0].clone()));
    let cosets: Vec<_> = order.iter().map(|&k| cosets[k].clone()).collect();
    let representatives: Vec<_> = order.iter().map(|&k| representatives[k].clone()).collect();

    let in_circ = |w: &WeylElement| w_circ.binary_search(w).is_ok();
    let mut w_circ_normal = true;
    for g in &w_phi {
        let gi = weyl.inverse(g)?;
        for x in &w_circ_generators {
            let conj = weyl.multiply(&weyl.multiply(g, x)?, &gi)?;
            if !in_circ(&conj) {
                w_circ_normal = false;
            }
        }
    }
    let mut quotient_elementary_abelian = w_circ_normal;
    if w_circ_normal {
        let firsts: Vec<&WeylElement> = cosets.iter().map(|c| &c[0]).collect();
        for a in &firsts {
            if !in_circ(&weyl.multiply(a, a)?) {
                quotient_elementary_abelian = false;
            }
            for b in &firsts {
                let ab = weyl.multiply(a, b)?;
                let ba_inv = weyl.inverse(&weyl.multiply(b, a)?)?;
                if !in_circ(&weyl.multiply(&ab, &ba_inv)?) {
                    quotient_elementary_abelian = false;
                }
            }
        }
    }
    Ok(ArthurRGroup {
        w_phi,
        delta_phi,
        w_circ_generators,
        w_circ,
        cosets,
        representatives,
        w_circ_normal,
        quotient_elementary_abelian,
    })
}

/// `R(σ) → W_{φ,σ}/W°_{φ,σ}` is a bijection: every element of `R(σ)` lies
/// in a different coset and every coset is hit.
pub fn rgroups_match(knapp_stein: &RGroup, arthur: &ArthurRGroup) -> bool {
    if !arthur.w_circ_normal || !arthur.quotient_elementary_abelian {
        return false;
    }
    if knapp_stein.elements.len() != arthur.order() {
        return false;
    }
    let mut hit = BTreeSet::new();
    for w in &knapp_stein.elements {
        match arthur.coset_of(w) {
            Some(k) if hit.insert(k) => {}
            _ => return false,
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub sigma: InertiaDatum,
    pub knapp_stein: RGroup,
    pub arthur: ArthurRGroup,
    pub matches: bool,
}

pub fn match_report(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Result<MatchReport> {
    let sigma = derive_inertia(levi, blocks, tau)?;
    let weyl = WeylGroup::new(levi.clone());
    let knapp_stein = r_group_closed_form(&weyl, &sigma)?;
    let arthur = arthur_r_group_general(levi, blocks, tau)?;
    let matches = rgroups_match(&knapp_stein, &arthur);
    Ok(MatchReport { sigma, knapp_stein, arthur, matches })
}

pub fn match_check(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Result<bool> {
    Ok(match_report(levi, blocks, tau)?.matches)
}

/// Structural problems of parameter data against a Levi, as data.
pub fn param_violations(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> Vec<Violation> {
    let family = levi.family();
    let mut out = Vec::new();
    let mut push = |kind, msg: String| out.push(Violation::new(kind, msg));
    if let Err(e) = check_scope(levi, blocks) {
        push(ViolationKind::Unsupported, format!("{e}"));
    }
    if blocks.len() != levi.r() {
        push(
            ViolationKind::ParamsMismatch,
            format!("{} parameter blocks for {} GL blocks", blocks.len(), levi.r()),
        );
    }
    let mut seen_rho: Vec<&CuspParam> = Vec::new();
    for (i, seg) in blocks.iter().enumerate() {
        if seg.a == 0 {
            push(ViolationKind::InvalidParameter, format!("block {} has a = 0", i + 1));
        }
        if i < levi.r() && seg.dim() != levi.block(i) {
            push(
                ViolationKind::ParamsMismatch,
                format!("block {}: dim ρ · a = {} but n_{} = {}", i + 1, seg.dim(), i + 1, levi.block(i)),
            );
        }
        match seen_rho.iter().find(|r| r.id == seg.rho.id) {
            Some(r) if **r != seg.rho => push(
                ViolationKind::InvalidParameter,
                format!("ρ `{}` is described inconsistently", seg.rho.id),
            ),
            Some(_) => {}
            None => {
                for v in seg.rho.violations(family) {
                    push(ViolationKind::InvalidParameter, v);
                }
                seen_rho.push(&seg.rho);
            }
        }
    }
    for v in tau.violations(family) {
        push(ViolationKind::InvalidParameter, v);
    }
    for j in &tau.jordan {
        if let Some(r) = seen_rho.iter().find(|r| r.id == j.rho.id) {
            if **r != j.rho {
                push(
                    ViolationKind::InvalidParameter,
                    format!("ρ `{}` in Jord(τ) disagrees with the block data", j.rho.id),
                );
            }
        }
    }
    if family == Family::B && tau.dim() != 2 * levi.m() {
        push(
            ViolationKind::ParamsMismatch,
            format!("φ_τ has dimension {} but GSpin_{{2m+1}} with m = {} needs {}", tau.dim(), levi.m(), 2 * levi.m()),
        );
    }
    out
}
