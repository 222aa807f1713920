//! Symbolic discrete-series data `σ = σ_1 ⊗ … ⊗ σ_r ⊗ τ` and its
//! Knapp–Stein R-group.
//!
//! A label names the equivalence class of a `σ_i`; `dual` is the involution
//! `ℓ ↦ [σ̃ ⊗ ω_τ]` and `reducible` records whether the rank-one induction
//! `Ind_{Q_i}^{G_{n_i+m}}(σ_i ⊗ τ)` reduces. The R-group is computed twice:
//! from its definition (`r_group_bruteforce`) and from the closed forms
//! (`r_group_closed_form`).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Violation, ViolationKind};
use crate::roots::{all_reduced_roots, negative_set, ReducedRoot};
use crate::weyl::{BlockSet, Family, LeviSpec, WeylElement, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertiaDatum {
    pub labels: Vec<String>,
    /// Class of `σ_i` for each block.
    pub assign: Vec<Label>,
    /// `dual[ℓ]` is the class of `σ̃ ⊗ ω_τ` for `σ` in class `ℓ`.
    pub dual: Vec<Label>,
    pub reducible: Vec<bool>,
    /// Type D only: whether `c_n τ ≅ τ`. Ignored when `m = 0`.
    pub cn_fixes_tau: bool,
    /// Set on the result of [`apply`] when `τ` was replaced by `c_n τ`.
    pub tau_twisted: bool,
}

impl InertiaDatum {
    pub fn new(
        labels: Vec<String>,
        assign: Vec<Label>,
        dual: Vec<Label>,
        reducible: Vec<bool>,
        cn_fixes_tau: bool,
    ) -> Self {
        InertiaDatum { labels, assign, dual, reducible, cn_fixes_tau, tau_twisted: false }
    }

    pub fn dual_of(&self, l: Label) -> Label {
        self.dual[l.0]
    }

    pub fn is_self_dual(&self, l: Label) -> bool {
        self.dual[l.0] == l
    }

    pub fn is_reducible(&self, l: Label) -> bool {
        self.reducible[l.0]
    }

    pub fn name(&self, l: Label) -> &str {
        &self.labels[l.0]
    }

    pub fn label_named(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|s| s == name).map(Label)
    }

    /// Blocks whose class is fixed by the duality twist (`i ∈ B(σ)`).
    pub fn self_dual_blocks(&self) -> BlockSet {
        BlockSet::from_iter((0..self.assign.len()).filter(|&i| self.is_self_dual(self.assign[i])))
    }

    /// `true` when no block after `i` carries the class of block `i`.
    pub fn is_last_occurrence(&self, i: usize) -> bool {
        self.assign[i + 1..].iter().all(|&l| l != self.assign[i])
    }

    /// Structural problems, as data. Empty iff the datum is consistent with
    /// `levi`.
    pub fn violations(&self, levi: &LeviSpec) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.labels.len();
        if self.dual.len() != k || self.reducible.len() != k {
            out.push(Violation::new(
                ViolationKind::Malformed,
                format!(
                    "{} labels but {} dual entries and {} reducibility flags",
                    k,
                    self.dual.len(),
                    self.reducible.len()
                ),
            ));
            return out;
        }
        if self.assign.len() != levi.r() {
            out.push(Violation::new(
                ViolationKind::Malformed,
                format!("{} GL blocks but {} assigned classes", levi.r(), self.assign.len()),
            ));
            return out;
        }
        if let Some(l) = self.assign.iter().chain(&self.dual).find(|l| l.0 >= k) {
            out.push(Violation::new(ViolationKind::Malformed, format!("label index {} out of range", l.0)));
            return out;
        }
        for l in (0..k).map(Label) {
            if self.dual_of(self.dual_of(l)) != l {
                out.push(Violation::new(
                    ViolationKind::DualNotInvolution,
                    format!("dual is not an involution at `{}`", self.name(l)),
                ));
            }
            if self.is_reducible(l) && !self.is_self_dual(l) {
                out.push(Violation::new(
                    ViolationKind::ReducibleNotSelfDual,
                    format!(
                        "label `{}` is marked reducible but is not self-dual; reducibility of \
                         the rank-one induction forces C_i into the stabilizer, so σ_i ≅ σ̃_i ⊗ ω_τ",
                        self.name(l)
                    ),
                ));
            }
        }
        let mut size_of: Vec<Option<usize>> = alloc::vec![None; k];
        for (i, &l) in self.assign.iter().enumerate() {
            let n_i = levi.block(i);
            let d = self.dual_of(l);
            for cls in if d == l { vec![l] } else { vec![l, d] } {
                match size_of[cls.0] {
                    None => size_of[cls.0] = Some(n_i),
                    Some(s) if s != n_i => out.push(Violation::new(
                        ViolationKind::SizeMismatch,
                        format!(
                            "class `{}` occurs (directly or as a twisted dual) on GL blocks of sizes {} and {}",
                            self.name(cls),
                            s,
                            n_i
                        ),
                    )),
                    Some(_) => {}
                }
            }
        }
        out
    }
}

/// Which closed form governs `R(σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `GSpin_{2n+1}`.
    TypeB,
    /// `GSpin_{2n}` with `m = 0` or `c_n τ ≇ τ`.
    TypeDSplit,
    /// `GSpin_{2n}` with `m > 0` and `c_n τ ≅ τ`.
    TypeDFixed,
}

pub fn regime(levi: &LeviSpec, sigma: &InertiaDatum) -> Regime {
    match levi.family() {
        Family::B => Regime::TypeB,
        Family::D if levi.m() > 0 && sigma.cn_fixes_tau => Regime::TypeDFixed,
        Family::D => Regime::TypeDSplit,
    }
}

fn check_blocks(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<()> {
    if sigma.assign.len() != weyl.r() {
        return Err(Error::LeviMismatch { expected: weyl.r(), got: sigma.assign.len() });
    }
    Ok(())
}

/// `w·σ`: the class at block `i` moves to position `s(i)`, dualized when
/// that position is flipped; `τ` picks up `c_n` with the element.
pub fn apply(weyl: &WeylGroup, w: &WeylElement, sigma: &InertiaDatum) -> Result<InertiaDatum> {
    check_blocks(weyl, sigma)?;
    if w.rank() != weyl.r() {
        return Err(Error::LeviMismatch { expected: weyl.r(), got: w.rank() });
    }
    let mut assign = sigma.assign.clone();
    for (i, &l) in sigma.assign.iter().enumerate() {
        let target = w.perm()[i];
        assign[target] = if w.flips().contains(target) { sigma.dual_of(l) } else { l };
    }
    Ok(InertiaDatum {
        assign,
        tau_twisted: sigma.tau_twisted ^ w.cn_flag(),
        ..sigma.clone()
    })
}

/// `w·σ ≅ σ`.
pub fn fixes(weyl: &WeylGroup, w: &WeylElement, sigma: &InertiaDatum) -> Result<bool> {
    let image = apply(weyl, w, sigma)?;
    let tau_ok = image.tau_twisted == sigma.tau_twisted || sigma.cn_fixes_tau;
    Ok(image.assign == sigma.assign && tau_ok)
}

/// `W(σ) = {w ∈ W_M : wσ ≅ σ}`.
pub fn stabilizer(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<Vec<WeylElement>> {
    let mut out = Vec::new();
    for w in weyl.elements() {
        if fixes(weyl, &w, sigma)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// The zero set `Δ' = {α : μ_α(σ) = 0}` of the rank-one Plancherel measures.
pub fn delta_prime(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<BTreeSet<ReducedRoot>> {
    check_blocks(weyl, sigma)?;
    let levi = weyl.levi();
    let mut out = BTreeSet::new();
    for root in all_reduced_roots(levi) {
        let zero = match root {
            ReducedRoot::Alpha(i, j) => {
                levi.block(i) == levi.block(j) && sigma.assign[i] == sigma.assign[j]
            }
            ReducedRoot::Beta(i, j) => {
                levi.block(i) == levi.block(j) && sigma.assign[i] == sigma.dual_of(sigma.assign[j])
            }
            ReducedRoot::Gamma(i) => {
                let l = sigma.assign[i];
                gamma_element_stabilizes(levi, sigma, i) && !sigma.is_reducible(l)
            }
        };
        if zero {
            out.insert(root);
        }
    }
    Ok(out)
}

/// Whether `W_{γ_i} ∩ W(σ) ≠ {1}`.
fn gamma_element_stabilizes(levi: &LeviSpec, sigma: &InertiaDatum, i: usize) -> bool {
    let self_dual = sigma.is_self_dual(sigma.assign[i]);
    let odd = levi.block(i) % 2 == 1;
    match levi.family() {
        Family::B => self_dual,
        Family::D if !odd => self_dual,
        Family::D if levi.m() == 0 => false,
        // W_{γ_i} = {1, C_i c_n}
        Family::D => self_dual && sigma.cn_fixes_tau,
    }
}

/// Index sets of the closed forms (0-based blocks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaSets {
    /// `Ω(σ)`: type B, or type D with `m > 0` and `c_n τ ≅ τ`.
    Single(Vec<usize>),
    /// `Ω_1(σ)` (even blocks) and `Ω_2(σ)` (odd blocks) in the split type D case.
    Split { omega1: Vec<usize>, omega2: Vec<usize> },
}

pub fn omega_sets(levi: &LeviSpec, sigma: &InertiaDatum) -> OmegaSets {
    let r = levi.r();
    let last = |i: usize| sigma.is_last_occurrence(i);
    let red = |i: usize| sigma.is_reducible(sigma.assign[i]);
    match regime(levi, sigma) {
        Regime::TypeB | Regime::TypeDFixed => {
            OmegaSets::Single((0..r).filter(|&i| red(i) && last(i)).collect())
        }
        Regime::TypeDSplit => {
            let even = |i: usize| levi.block(i) % 2 == 0;
            let omega1 = (0..r).filter(|&i| even(i) && red(i) && last(i)).collect();
            let omega2 = (0..r)
                .filter(|&i| !even(i) && sigma.is_self_dual(sigma.assign[i]) && last(i))
                .collect();
            OmegaSets::Split { omega1, omega2 }
        }
    }
}

/// Knapp–Stein R-group, an elementary abelian 2-group of sign changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RGroup {
    /// A basis over `F_2`.
    pub generators: Vec<WeylElement>,
    /// All elements, sorted.
    pub elements: Vec<WeylElement>,
    pub omega: Option<OmegaSets>,
}

impl RGroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.elements.binary_search(w).is_ok()
    }

    pub fn generated_by(weyl: &WeylGroup, generators: Vec<WeylElement>, omega: Option<OmegaSets>) -> Result<Self> {
        let elements = weyl.subgroup(&generators)?;
        let group = RGroup { generators, elements, omega };
        group.verify(weyl)?;
        Ok(group)
    }

    /// Packages a set claimed to be an elementary abelian 2-subgroup,
    /// choosing a greedy basis in sorted order.
    pub fn from_elements(weyl: &WeylGroup, mut elements: Vec<WeylElement>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let mut generators = Vec::new();
        let mut span = alloc::vec![weyl.identity()];
        for w in &elements {
            if span.contains(w) {
                continue;
            }
            let mut extended = span.clone();
            for x in &span {
                extended.push(weyl.multiply(x, w)?);
            }
            span = extended;
            generators.push(w.clone());
        }
        let group = RGroup { generators, elements, omega: None };
        group.verify(weyl)?;
        Ok(group)
    }

    fn verify(&self, weyl: &WeylGroup) -> Result<()> {
        let n = self.elements.len();
        if n != 1 << self.generators.len() {
            return Err(Error::NotElementaryAbelian(format!(
                "{} elements but {} independent generators",
                n,
                self.generators.len()
            )));
        }
        let id = weyl.identity();
        for a in &self.elements {
            if weyl.multiply(a, a)? != id {
                return Err(Error::NotElementaryAbelian(format!("{a} is not an involution")));
            }
            for b in &self.elements {
                let ab = weyl.multiply(a, b)?;
                if !self.contains(&ab) {
                    return Err(Error::NotElementaryAbelian(format!("{a}·{b} escapes the set")));
                }
                if ab != weyl.multiply(b, a)? {
                    return Err(Error::NotElementaryAbelian(format!("{a} and {b} do not commute")));
                }
            }
        }
        Ok(())
    }
}

/// `R(σ) = {w ∈ W(σ) : R(w) ∩ Δ' = ∅}` from the definition.
pub fn r_group_bruteforce(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<RGroup> {
    let delta = delta_prime(weyl, sigma)?;
    let mut elements = Vec::new();
    for w in stabilizer(weyl, sigma)? {
        if negative_set(weyl, &w)?.is_disjoint(&delta) {
            elements.push(w);
        }
    }
    RGroup::from_elements(weyl, elements)
}

/// `R(σ)` from the closed forms: `⟨C_i⟩_{i∈Ω(σ)}` in type B,
/// `⟨C_i | Ω_1⟩ × ⟨C_iC_j | Ω_2⟩` in split type D and `⟨C̄_i⟩_{i∈Ω(σ)}`
/// when `c_n τ ≅ τ` with `m > 0`.
pub fn r_group_closed_form(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<RGroup> {
    check_blocks(weyl, sigma)?;
    let omega = omega_sets(weyl.levi(), sigma);
    let mut generators = Vec::new();
    match &omega {
        OmegaSets::Single(ix) => {
            // sign_change attaches c_n to odd blocks in type D
            for &i in ix {
                generators.push(weyl.sign_change(BlockSet::singleton(i))?);
            }
        }
        OmegaSets::Split { omega1, omega2 } => {
            for &i in omega1 {
                generators.push(weyl.sign_change(BlockSet::singleton(i))?);
            }
            if let Some((&last, rest)) = omega2.split_last() {
                for &i in rest {
                    generators.push(weyl.sign_change(BlockSet::from_iter([i, last]))?);
                }
            }
        }
    }
    RGroup::generated_by(weyl, generators, Some(omega))
}
