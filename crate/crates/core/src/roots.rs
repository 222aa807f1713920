//! Reduced restricted roots `Φ(P, A)` and the sign of `wα`.
//!
//! Roots are evaluated on block symbols `f_1, …, f_r` (`f_i` the restriction
//! class of `e_{k_i}`): `α_ij = f_i - f_j`, `β_ij = f_i + f_j`, `γ_i = f_i`.
//! A block permutation permutes the symbols and a flip negates one. The
//! `c_n` twist does not change any root sign at this level.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::weyl::{BlockSet, Family, LeviSpec, WeylElement, WeylGroup};

/// Indices are 0-based; `Alpha`/`Beta` require `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducedRoot {
    Alpha(usize, usize),
    Beta(usize, usize),
    Gamma(usize),
}

/// Renders as `a[i,j]`, `b[i,j]`, `g[i]` with 1-based indices.
impl fmt::Display for ReducedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ReducedRoot::Alpha(i, j) => write!(f, "a[{},{}]", i + 1, j + 1),
            ReducedRoot::Beta(i, j) => write!(f, "b[{},{}]", i + 1, j + 1),
            ReducedRoot::Gamma(i) => write!(f, "g[{}]", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedRoot {
    pub root: ReducedRoot,
    pub sign: i8,
}

impl ReducedRoot {
    fn admissible(self, r: usize) -> bool {
        match self {
            ReducedRoot::Alpha(i, j) | ReducedRoot::Beta(i, j) => i < j && j < r,
            ReducedRoot::Gamma(i) => i < r,
        }
    }

    /// Blocks the root involves.
    pub fn support(self) -> BlockSet {
        match self {
            ReducedRoot::Alpha(i, j) | ReducedRoot::Beta(i, j) => {
                BlockSet::from_iter([i, j])
            }
            ReducedRoot::Gamma(i) => BlockSet::singleton(i),
        }
    }

    /// `(block, ±1)` coefficients on the block symbols.
    fn terms(self) -> Vec<(usize, i8)> {
        match self {
            ReducedRoot::Alpha(i, j) => alloc::vec![(i, 1), (j, -1)],
            ReducedRoot::Beta(i, j) => alloc::vec![(i, 1), (j, 1)],
            ReducedRoot::Gamma(i) => alloc::vec![(i, 1)],
        }
    }

    fn normalize(mut terms: Vec<(usize, i8)>) -> SignedRoot {
        terms.sort_unstable();
        match terms.as_slice() {
            [(i, c)] => SignedRoot { root: ReducedRoot::Gamma(*i), sign: *c },
            [(i, ci), (j, cj)] => {
                let root = if ci == cj {
                    ReducedRoot::Beta(*i, *j)
                } else {
                    ReducedRoot::Alpha(*i, *j)
                };
                SignedRoot { root, sign: *ci }
            }
            _ => unreachable!("reduced roots have one or two block terms"),
        }
    }
}

/// Alphas, then betas, then gammas, each lexicographic.
///
/// Every `γ_i` is present, including `γ_r` in type D with `m = 0`: the
/// direction `f_r` still carries the rank-one Levi `GL_{n_r} × G_0` and the
/// closed forms for `R(σ)` require it.
pub fn all_reduced_roots(levi: &LeviSpec) -> Vec<ReducedRoot> {
    let r = levi.r();
    let mut out = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in i + 1..r {
            out.push(ReducedRoot::Alpha(i, j));
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            out.push(ReducedRoot::Beta(i, j));
        }
    }
    out.extend((0..r).map(ReducedRoot::Gamma));
    out
}

pub fn act_on_root(weyl: &WeylGroup, w: &WeylElement, root: ReducedRoot) -> Result<SignedRoot> {
    if w.rank() != weyl.r() {
        return Err(Error::LeviMismatch { expected: weyl.r(), got: w.rank() });
    }
    if !root.admissible(weyl.r()) {
        return Err(Error::Precondition(alloc::format!("{root} is not a root for r = {}", weyl.r())));
    }
    let terms = root
        .terms()
        .into_iter()
        .map(|(i, c)| {
            let target = w.perm()[i];
            let c = if w.flips().contains(target) { -c } else { c };
            (target, c)
        })
        .collect();
    Ok(ReducedRoot::normalize(terms))
}

/// `R(w) = {α ∈ Φ(P, A) : wα < 0}`.
pub fn negative_set(weyl: &WeylGroup, w: &WeylElement) -> Result<BTreeSet<ReducedRoot>> {
    let mut out = BTreeSet::new();
    for root in all_reduced_roots(weyl.levi()) {
        if act_on_root(weyl, w, root)?.sign < 0 {
            out.insert(root);
        }
    }
    Ok(out)
}

/// The nontrivial element `w_α` of the rank-one group `W_α`, if any.
pub fn rank_one_element(weyl: &WeylGroup, root: ReducedRoot) -> Result<Option<WeylElement>> {
    let levi = weyl.levi();
    match root {
        ReducedRoot::Alpha(i, j) | ReducedRoot::Beta(i, j) => {
            if levi.block(i) != levi.block(j) {
                return Ok(None);
            }
            let t = weyl.transposition(i, j)?;
            if matches!(root, ReducedRoot::Alpha(..)) {
                Ok(Some(t))
            } else {
                let c = weyl.sign_change(BlockSet::from_iter([i, j]))?;
                Ok(Some(weyl.multiply(&c, &t)?))
            }
        }
        ReducedRoot::Gamma(i) => {
            let odd = levi.block(i) % 2 == 1;
            if levi.family() == Family::D && odd && levi.m() == 0 {
                Ok(None)
            } else {
                // C_i, or C_i c_n in type D with n_i odd and m > 0
                weyl.sign_change(BlockSet::singleton(i)).map(Some)
            }
        }
    }
}
