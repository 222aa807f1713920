//! Problem instances, validation, canonical forms and exhaustive
//! enumeration.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::inertia::{InertiaDatum, Label};
use crate::lparam::{
    derive_inertia, param_violations, CuspParam, ReducibilityPoint, SegmentParam, SelfDualType, TauParam,
};
use crate::weyl::{Family, LeviSpec};

/// Largest `r` the exhaustive enumerators accept.
pub const MAX_ENUM_R: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Malformed,
    DualNotInvolution,
    ReducibleNotSelfDual,
    SizeMismatch,
    InvalidParameter,
    ParamsMismatch,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, message: String) -> Self {
        Violation { kind, message }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamData {
    pub blocks: Vec<SegmentParam>,
    pub tau: TauParam,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub levi: LeviSpec,
    pub sigma: InertiaDatum,
    pub params: Option<ParamData>,
}

/// All invariant violations; empty iff the instance is consistent.
pub fn validate(instance: &Instance) -> Vec<Violation> {
    let mut out = instance.sigma.violations(&instance.levi);
    let Some(params) = &instance.params else {
        return out;
    };
    let pv = param_violations(&instance.levi, &params.blocks, &params.tau);
    if !pv.is_empty() {
        out.extend(pv);
        return out;
    }
    match derive_inertia(&instance.levi, &params.blocks, &params.tau) {
        Err(e) => out.push(Violation::new(ViolationKind::ParamsMismatch, format!("{e}"))),
        Ok(derived) => {
            if !equivalent(&instance.levi, &derived, &instance.sigma) {
                out.push(Violation::new(
                    ViolationKind::ParamsMismatch,
                    "the parameter data does not describe sigma (labels, duals or reducibility differ)".into(),
                ));
            }
        }
    }
    out
}

fn letter_name(k: usize) -> String {
    if k < 26 {
        String::from((b'a' + k as u8) as char)
    } else {
        format!("l{}", k + 1)
    }
}

/// Relabels by first occurrence (`a, b, …`), names an unassigned twisted
/// dual after its partner (`a*`), and drops labels that occur nowhere.
/// `c_n τ ≅ τ` is kept only when it can matter (`m > 0` in type D).
pub fn canonical_form(levi: &LeviSpec, sigma: &InertiaDatum) -> InertiaDatum {
    let mut order: Vec<Label> = Vec::new();
    for &l in &sigma.assign {
        if !order.contains(&l) {
            order.push(l);
        }
    }
    let assigned = order.len();
    let mut names: Vec<String> = (0..assigned).map(letter_name).collect();
    for k in 0..assigned {
        let d = sigma.dual_of(order[k]);
        if !order.contains(&d) {
            order.push(d);
            names.push(format!("{}*", names[k]));
        }
    }
    let new_index = |l: Label| Label(order.iter().position(|&x| x == l).expect("label kept"));
    InertiaDatum {
        labels: names,
        assign: sigma.assign.iter().map(|&l| new_index(l)).collect(),
        dual: order.iter().map(|&l| new_index(sigma.dual_of(l))).collect(),
        reducible: order.iter().map(|&l| sigma.is_reducible(l)).collect(),
        cn_fixes_tau: sigma.cn_fixes_tau && levi.family() == Family::D && levi.m() > 0,
        tau_twisted: false,
    }
}

/// Equal up to a label bijection commuting with the dual involution.
pub fn equivalent(levi: &LeviSpec, a: &InertiaDatum, b: &InertiaDatum) -> bool {
    canonical_form(levi, a) == canonical_form(levi, b)
}

/// Sequences of block sizes in `1..=max_block` of length `r`, lexicographic.
fn compositions(r: usize, max_block: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=max_block).map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

/// Restricted growth strings of length `len` with at most `max` values and
/// `allowed(position, value, prefix)` respected.
fn restricted_growth(len: usize, max: usize, allowed: &dyn Fn(usize, usize, &[usize]) -> bool) -> Vec<Vec<usize>> {
    fn go(
        prefix: &mut Vec<usize>,
        next: usize,
        len: usize,
        max: usize,
        allowed: &dyn Fn(usize, usize, &[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=next.min(max.saturating_sub(1)) {
            if v < next && !allowed(prefix.len(), v, prefix) {
                continue;
            }
            prefix.push(v);
            go(prefix, next.max(v + 1), len, max, allowed, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if max > 0 || len == 0 {
        go(&mut Vec::new(), 0, len, max, allowed, &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LabelKind {
    Reducible,
    Irreducible,
    NotSelfDual,
}

const LABEL_KINDS: [LabelKind; 3] = [LabelKind::Reducible, LabelKind::Irreducible, LabelKind::NotSelfDual];

fn product<T: Copy>(choices: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Partial involutions on `items` pairing only elements with `compatible`.
/// Unpaired elements map to `None`.
fn pairings(items: &[usize], compatible: &dyn Fn(usize, usize) -> bool) -> Vec<BTreeMap<usize, Option<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![BTreeMap::new()];
    };
    let mut out = Vec::new();
    for mut p in pairings(rest, compatible) {
        p.insert(first, None);
        out.push(p);
    }
    for (k, &other) in rest.iter().enumerate() {
        if !compatible(first, other) {
            continue;
        }
        let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
        for mut p in pairings(&remaining, compatible) {
            p.insert(first, Some(other));
            p.insert(other, Some(first));
            out.push(p);
        }
    }
    out
}

/// Every canonical datum on one Levi with at most `alphabet` labels.
fn data_for_levi(levi: &LeviSpec, alphabet: usize, cn_values: &[bool]) -> Vec<InertiaDatum> {
    let sizes = levi.blocks();
    let r = sizes.len();
    let rgs = restricted_growth(r, alphabet, &|pos, v, prefix| {
        let first = prefix.iter().position(|&x| x == v).expect("value used before");
        sizes[first] == sizes[pos]
    });
    let mut out = Vec::new();
    for assign in rgs {
        let k = assign.iter().max().map_or(0, |&x| x + 1);
        let label_size: Vec<usize> = (0..k).map(|l| sizes[assign.iter().position(|&x| x == l).unwrap()]).collect();
        for kinds in product(&LABEL_KINDS, k) {
            let nsd: Vec<usize> = (0..k).filter(|&l| kinds[l] == LabelKind::NotSelfDual).collect();
            for pairing in pairings(&nsd, &|x, y| label_size[x] == label_size[y]) {
                let fresh: Vec<usize> = nsd.iter().copied().filter(|l| pairing[l].is_none()).collect();
                if k + fresh.len() > alphabet {
                    continue;
                }
                let mut labels: Vec<String> = (0..k).map(letter_name).collect();
                let mut dual: Vec<Label> = (0..k).map(Label).collect();
                let mut reducible: Vec<bool> = kinds.iter().map(|&t| t == LabelKind::Reducible).collect();
                for (&l, p) in &pairing {
                    if let Some(q) = p {
                        dual[l] = Label(*q);
                    }
                }
                for &l in &fresh {
                    labels.push(format!("{}*", letter_name(l)));
                    dual.push(Label(l));
                    dual[l] = Label(labels.len() - 1);
                    reducible.push(false);
                }
                for &cn in cn_values {
                    out.push(InertiaDatum::new(
                        labels.clone(),
                        assign.iter().map(|&x| Label(x)).collect(),
                        dual.clone(),
                        reducible.clone(),
                        cn,
                    ));
                }
            }
        }
    }
    out
}

/// The Levis swept for a family: every sequence of block sizes with
/// `r ≤ max_r`; `m = 0` in type B (where `m` does not affect `W_M` or the
/// roots) and `m ∈ {0, 1}` in type D.
pub fn enumerate_levis(family: Family, max_r: usize, max_block: usize) -> Result<Vec<LeviSpec>> {
    if max_r > MAX_ENUM_R {
        return Err(Error::Precondition(format!("max_r = {max_r} exceeds the enumeration bound {MAX_ENUM_R}")));
    }
    if max_block == 0 {
        return Err(Error::Precondition("max_block must be positive".into()));
    }
    let ms: &[usize] = match family {
        Family::B => &[0],
        Family::D => &[0, 1],
    };
    let mut out = Vec::new();
    for r in 1..=max_r {
        for sizes in compositions(r, max_block) {
            for &m in ms {
                out.push(LeviSpec::from_partition(family, sizes.clone(), m)?);
            }
        }
    }
    Ok(out)
}

/// All consistent instances up to label renaming, in a fixed order.
pub fn enumerate_instances(family: Family, max_r: usize, max_block: usize, alphabet_size: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for levi in enumerate_levis(family, max_r, max_block)? {
        let cn_values: &[bool] = if family == Family::D && levi.m() > 0 { &[false, true] } else { &[false] };
        for sigma in data_for_levi(&levi, alphabet_size, cn_values) {
            out.push(Instance { levi: levi.clone(), sigma, params: None });
        }
    }
    Ok(out)
}

/// Cuspidal block shapes swept on the parameter side: `dim ≤ 2`, every
/// consistent `(type, b)` tag for `GSpin_{2n+1}`.
pub const RHO_KINDS: [(usize, SelfDualType, Option<ReducibilityPoint>); 6] = [
    (1, SelfDualType::Orthogonal, Some(ReducibilityPoint::Half)),
    (1, SelfDualType::None, None),
    (2, SelfDualType::Orthogonal, Some(ReducibilityPoint::Half)),
    (2, SelfDualType::Symplectic, Some(ReducibilityPoint::Zero)),
    (2, SelfDualType::Symplectic, Some(ReducibilityPoint::One)),
    (2, SelfDualType::None, None),
];

fn jordan_subsets(candidates: &[SegmentParam], max_size: usize) -> Vec<Vec<SegmentParam>> {
    let mut out = vec![Vec::new()];
    if max_size >= 1 {
        out.extend(candidates.iter().map(|c| vec![c.clone()]));
    }
    if max_size >= 2 {
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                out.push(vec![candidates[i].clone(), candidates[j].clone()]);
            }
        }
    }
    out
}

pub fn instance_from_params(family: Family, blocks: Vec<SegmentParam>, tau: TauParam) -> Result<Instance> {
    let sizes: Vec<usize> = blocks.iter().map(SegmentParam::dim).collect();
    let jd = tau.dim();
    if jd % 2 == 1 {
        return Err(Error::InvalidParameter(format!("φ_τ has odd dimension {jd}")));
    }
    let levi = LeviSpec::from_partition(family, sizes, jd / 2)?;
    let sigma = derive_inertia(&levi, &blocks, &tau)?;
    Ok(Instance { levi, sigma, params: Some(ParamData { blocks, tau }) })
}

/// Type B parameter instances: `r ≤ max_r` blocks `ρ ⊗ S_a` with
/// `a ≤ max_a` over at most `max_rho` distinct `ρ` of the shapes in
/// [`RHO_KINDS`], every symmetric pairing of non-self-dual `ρ` of equal
/// dimension, and `Jord(τ)` any set of at most `max_jordan` valid pairs
/// built from the block `ρ`.
pub fn enumerate_param_instances(max_r: usize, max_a: usize, max_rho: usize, max_jordan: usize) -> Result<Vec<Instance>> {
    if max_r > MAX_ENUM_R {
        return Err(Error::Precondition(format!("max_r = {max_r} exceeds the enumeration bound {MAX_ENUM_R}")));
    }
    let mut out = Vec::new();
    for r in 1..=max_r {
        for rho_of_block in restricted_growth(r, max_rho, &|_, _, _| true) {
            let k = rho_of_block.iter().max().map_or(0, |&x| x + 1);
            for kinds in product(&[0, 1, 2, 3, 4, 5], k) {
                let non_self_dual: Vec<usize> = (0..k).filter(|&i| RHO_KINDS[kinds[i]].1 == SelfDualType::None).collect();
                let same_dim = |x: usize, y: usize| RHO_KINDS[kinds[x]].0 == RHO_KINDS[kinds[y]].0;
                for pairing in pairings(&non_self_dual, &same_dim) {
                    let rhos: Vec<CuspParam> = (0..k)
                        .map(|i| {
                            let (dim, selfdual, b) = RHO_KINDS[kinds[i]];
                            CuspParam {
                                id: format!("rho{}", i + 1),
                                dim,
                                selfdual,
                                b,
                                dual: pairing.get(&i).copied().flatten().map(|j| format!("rho{}", j + 1)),
                            }
                        })
                        .collect();
                    let mut jord_candidates = Vec::new();
                    for rho in rhos.iter().filter(|r| r.is_self_dual()) {
                        for a in 1..=max_a {
                            let odd_ok = rho.b.is_some_and(|b| b.two_b_plus_one_is_odd());
                            if (a % 2 == 1) == odd_ok {
                                jord_candidates.push(SegmentParam::new(rho.clone(), a));
                            }
                        }
                    }
                    let jords = jordan_subsets(&jord_candidates, max_jordan);
                    for a_vec in product(&(1..=max_a).collect::<Vec<_>>(), r) {
                        let blocks: Vec<SegmentParam> = rho_of_block
                            .iter()
                            .zip(&a_vec)
                            .map(|(&i, &a)| SegmentParam::new(rhos[i].clone(), a))
                            .collect();
                        for jordan in &jords {
                            let tau = TauParam { jordan: jordan.clone() };
                            out.push(instance_from_params(Family::B, blocks.clone(), tau)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutationKind {
    /// Toggle `(ρ_i, a_i) ∈ Jord(τ)`.
    JordToggle,
    /// `a_i ↦ a_i ± 1`.
    AParity,
    /// Orthogonal ↔ symplectic, with `b` moved to the matching value.
    SelfDualType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub kind: MutationKind,
    pub block: usize,
    pub blocks: Vec<SegmentParam>,
    pub tau: TauParam,
}

/// Single-bit mutations of the reducibility-relevant data of block `i`,
/// for every block. Mutants may be inconsistent.
pub fn param_mutations(params: &ParamData, max_a: usize) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (i, seg) in params.blocks.iter().enumerate() {
        if seg.rho.is_self_dual() {
            let mut tau = params.tau.clone();
            if tau.contains(seg) {
                tau.jordan.retain(|j| !j.same_as(seg));
            } else {
                tau.jordan.push(seg.clone());
            }
            out.push(Mutation { kind: MutationKind::JordToggle, block: i, blocks: params.blocks.clone(), tau });
        }

        let mut blocks = params.blocks.clone();
        blocks[i].a = if seg.a < max_a { seg.a + 1 } else { seg.a - 1 };
        if blocks[i].a > 0 {
            out.push(Mutation { kind: MutationKind::AParity, block: i, blocks, tau: params.tau.clone() });
        }

        let flipped = match (seg.rho.selfdual, seg.rho.dim % 2) {
            (SelfDualType::Orthogonal, 0) => Some((SelfDualType::Symplectic, ReducibilityPoint::One)),
            (SelfDualType::Symplectic, _) => Some((SelfDualType::Orthogonal, ReducibilityPoint::Half)),
            _ => None,
        };
        if let Some((selfdual, b)) = flipped {
            let id = seg.rho.id.clone();
            let retag = |s: &SegmentParam| {
                let mut s = s.clone();
                if s.rho.id == id {
                    s.rho.selfdual = selfdual;
                    s.rho.b = Some(b);
                }
                s
            };
            let blocks = params.blocks.iter().map(retag).collect();
            let tau = TauParam { jordan: params.tau.jordan.iter().map(retag).collect() };
            out.push(Mutation { kind: MutationKind::SelfDualType, block: i, blocks, tau });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::{r_group_bruteforce, r_group_closed_form};
    use crate::weyl::WeylGroup;

    fn count(family: Family, blocks: &[usize], m: usize, alphabet: usize) -> usize {
        let levi = LeviSpec::from_partition(family, blocks.to_vec(), m).unwrap();
        let cn: &[bool] = if family == Family::D && m > 0 { &[false, true] } else { &[false] };
        data_for_levi(&levi, alphabet, cn).len()
    }

    /// Counts by hand: a single label is reducible, irreducible, or not
    /// self-dual with a fresh dual (2 labels).
    fn one_block_count(alphabet: usize) -> usize {
        2 + usize::from(alphabet >= 2)
    }

    /// Two blocks of equal size: one shared label (`one_block_count`) or two
    /// labels, each self-dual (2 kinds) or not; two non-self-dual labels are
    /// paired with each other or each get a fresh dual. Unequal sizes forbid
    /// the shared label and the pairing.
    fn two_block_count(equal: bool, alphabet: usize) -> usize {
        let shared = if equal { one_block_count(alphabet) } else { 0 };
        let both_sd = if alphabet >= 2 { 4 } else { 0 };
        let one_sd = if alphabet >= 3 { 2 * 2 } else { 0 };
        let paired = usize::from(equal && alphabet >= 2);
        let both_fresh = usize::from(alphabet >= 4);
        shared + both_sd + one_sd + paired + both_fresh
    }

    #[test]
    fn counting_matches_hand_formula() {
        assert_eq!(count(Family::B, &[1], 0, 1), 2);
        for k in 1..=5 {
            assert_eq!(count(Family::B, &[1], 0, k), one_block_count(k));
            assert_eq!(count(Family::B, &[2, 2], 0, k), two_block_count(true, k));
            assert_eq!(count(Family::B, &[1, 2], 0, k), two_block_count(false, k));
            assert_eq!(count(Family::D, &[1, 1], 1, k), 2 * two_block_count(true, k));
        }
        let total = enumerate_instances(Family::B, 2, 2, 4).unwrap().len();
        let expected = 2 * one_block_count(4) + 2 * two_block_count(true, 4) + 2 * two_block_count(false, 4);
        assert_eq!(total, expected);
    }

    #[test]
    fn enumeration_is_canonical_and_consistent() {
        let all = enumerate_instances(Family::D, 3, 2, 3).unwrap();
        for (k, inst) in all.iter().enumerate() {
            assert!(validate(inst).is_empty(), "{:?}", validate(inst));
            assert_eq!(canonical_form(&inst.levi, &inst.sigma), inst.sigma);
            if let Some(prev) = all[..k].iter().rev().take(40).find(|p| p.levi == inst.levi) {
                assert!(!equivalent(&inst.levi, &prev.sigma, &inst.sigma));
            }
        }
    }

    #[test]
    fn canonical_form_relabels() {
        let levi = LeviSpec::from_partition(Family::B, vec![1, 1], 0).unwrap();
        let s = InertiaDatum::new(
            vec!["x".into(), "y".into(), "z".into(), "unused".into()],
            vec![Label(2), Label(0)],
            vec![Label(1), Label(0), Label(2), Label(3)],
            vec![false, false, true, false],
            false,
        );
        let c = canonical_form(&levi, &s);
        assert_eq!(c.labels, vec!["a", "b", "b*"]);
        assert_eq!(c.assign, vec![Label(0), Label(1)]);
        assert_eq!(c.dual, vec![Label(0), Label(2), Label(1)]);
        assert_eq!(c.reducible, vec![true, false, false]);
    }

    #[test]
    fn type_d_odd_single_block_without_tau_has_trivial_r() {
        for inst in enumerate_instances(Family::D, 1, 3, 3).unwrap() {
            if inst.levi.m() == 0 && inst.levi.block(0) % 2 == 1 {
                let w = WeylGroup::new(inst.levi.clone());
                let st = crate::inertia::stabilizer(&w, &inst.sigma).unwrap();
                assert!(st.iter().all(|x| x.is_identity()));
                assert_eq!(r_group_bruteforce(&w, &inst.sigma).unwrap().rank(), 0);
            }
        }
    }

    #[test]
    fn small_sweep_closed_form_agrees() {
        for family in [Family::B, Family::D] {
            for inst in enumerate_instances(family, 2, 2, 3).unwrap() {
                let w = WeylGroup::new(inst.levi.clone());
                let bf = r_group_bruteforce(&w, &inst.sigma).unwrap();
                let cf = r_group_closed_form(&w, &inst.sigma).unwrap();
                assert_eq!(bf.elements, cf.elements, "{:?}", inst);
            }
        }
    }

    #[test]
    fn validate_rejects_corrupt_data() {
        let levi = LeviSpec::from_partition(Family::B, vec![1], 0).unwrap();
        let bad = InertiaDatum::new(
            vec!["a".into(), "a*".into()],
            vec![Label(0)],
            vec![Label(1), Label(0)],
            vec![true, false],
            false,
        );
        let v = validate(&Instance { levi: levi.clone(), sigma: bad, params: None });
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::ReducibleNotSelfDual);

        let inst = enumerate_param_instances(1, 2, 1, 1).unwrap().into_iter().next().unwrap();
        let mut wrong = inst.clone();
        wrong.sigma.reducible[0] = !wrong.sigma.reducible[0];
        assert!(validate(&inst).is_empty());
        assert!(validate(&wrong).iter().any(|v| v.kind == ViolationKind::ParamsMismatch));
    }

    #[test]
    fn param_enumeration_is_consistent() {
        let all = enumerate_param_instances(2, 3, 2, 2).unwrap();
        assert!(!all.is_empty());
        for inst in &all {
            assert!(validate(inst).is_empty(), "{:?}", validate(inst));
        }
    }

    #[test]
    fn mutations_cover_each_bit() {
        let inst = enumerate_param_instances(1, 3, 1, 0)
            .unwrap()
            .into_iter()
            .find(|i| i.params.as_ref().unwrap().blocks[0].rho.selfdual == SelfDualType::Symplectic)
            .unwrap();
        let kinds: Vec<MutationKind> =
            param_mutations(inst.params.as_ref().unwrap(), 3).into_iter().map(|m| m.kind).collect();
        assert_eq!(kinds, vec![MutationKind::JordToggle, MutationKind::AParity, MutationKind::SelfDualType]);
    }
}
