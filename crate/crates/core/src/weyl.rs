//! The relative Weyl group `W_M = N_G(A_M)/M` of a GSpin Levi subgroup
//! `GL_{n_1} × … × GL_{n_r} × G_m`, realized as signed block permutations.
//!
//! An element is stored as `(s, F, c)`: a permutation `s` of the blocks, a
//! set `F` of block sign changes and the derived `c_n` flag. It acts as
//! `C_F ∘ s`: blocks are moved first, then the blocks at the positions in
//! `F` are flipped. With this convention
//!
//! ```text
//! (C_F s)(C_F' s') = C_{F Δ s(F')} (s s')
//! ```
//!
//! and every action in the crate satisfies `(w·w')·x = w·(w'·x)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Blocks are indexed `0..r` internally and rendered `1..=r`.
pub const MAX_BLOCKS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `GSpin_{2n+1}`, dual group `GSp_{2n}`.
    B,
    /// `GSpin_{2n}`, dual group `GSO_{2n}`.
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::B => f.write_str("B"),
            Family::D => f.write_str("D"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLevi("rank n must be at least 1".into()));
        }
        Ok(GroupSpec { family, n })
    }
}

/// A standard Levi `GL_{n_1} × … × GL_{n_r} × G_m` with `Σ n_i + m = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeviSpec {
    group: GroupSpec,
    blocks: Vec<usize>,
    m: usize,
}

impl LeviSpec {
    pub fn new(group: GroupSpec, blocks: Vec<usize>, m: usize) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidLevi("at least one GL block is required".into()));
        }
        if blocks.len() > MAX_BLOCKS {
            return Err(Error::InvalidLevi(format!("at most {MAX_BLOCKS} blocks supported")));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidLevi("block sizes must be positive".into()));
        }
        let total: usize = blocks.iter().sum::<usize>() + m;
        if total != group.n {
            return Err(Error::InvalidLevi(format!(
                "block sizes {blocks:?} and m = {m} sum to {total}, not n = {}",
                group.n
            )));
        }
        Ok(LeviSpec { group, blocks, m })
    }

    /// Convenience constructor deriving `n` from the partition.
    pub fn from_partition(family: Family, blocks: Vec<usize>, m: usize) -> Result<Self> {
        let n = blocks.iter().sum::<usize>() + m;
        LeviSpec::new(GroupSpec::new(family, n)?, blocks, m)
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn family(&self) -> Family {
        self.group.family
    }

    pub fn n(&self) -> usize {
        self.group.n
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> usize {
        self.blocks[i]
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Blocks of odd size.
    pub fn odd_blocks(&self) -> BlockSet {
        BlockSet::from_iter((0..self.r()).filter(|&i| self.blocks[i] % 2 == 1))
    }

    pub fn all_blocks(&self) -> BlockSet {
        BlockSet::full(self.r())
    }

    /// `c_n` flag carried by the sign change `C_F`, or `None` when `C_F` is
    /// not in `W_M` (type D, `m = 0`, odd number of odd blocks flipped).
    pub fn cn_flag_for(&self, flips: BlockSet) -> Option<bool> {
        let odd = flips.intersection(self.odd_blocks()).len() % 2 == 1;
        match (self.family(), self.m) {
            (Family::B, _) => Some(false),
            (Family::D, 0) => (!odd).then_some(false),
            (Family::D, _) => Some(odd),
        }
    }
}

/// A subset of `{0, …, r-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BlockSet(u64);

impl BlockSet {
    pub const EMPTY: BlockSet = BlockSet(0);

    pub fn from_bits(bits: u64) -> Self {
        BlockSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(r: usize) -> Self {
        if r >= 64 {
            BlockSet(u64::MAX)
        } else {
            BlockSet((1u64 << r) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        BlockSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn symmetric_difference(self, other: BlockSet) -> BlockSet {
        BlockSet(self.0 ^ other.0)
    }

    pub fn intersection(self, other: BlockSet) -> BlockSet {
        BlockSet(self.0 & other.0)
    }

    pub fn union(self, other: BlockSet) -> BlockSet {
        BlockSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: BlockSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Image under a block permutation.
    pub fn permuted(self, perm: &[usize]) -> BlockSet {
        BlockSet::from_iter(self.iter().map(|i| perm[i]))
    }
}

impl FromIterator<usize> for BlockSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BlockSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Signed block permutation `C_F ∘ s`, possibly carrying `c_n`.
///
/// Fields are private so that `cn` is always the value derived from the
/// Levi; construct through [`WeylGroup`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    flips: BlockSet,
    cn: bool,
}

impl WeylElement {
    /// `perm[i]` is the position block `i` is moved to.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flips(&self) -> BlockSet {
        self.flips
    }

    pub fn cn_flag(&self) -> bool {
        self.cn
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.has_trivial_perm() && self.flips.is_empty() && !self.cn
    }

    pub fn has_trivial_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.perm[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.perm[j];
            }
            out.push(cycle);
        }
        out
    }
}

/// Renders as e.g. `C_1C_3·c_n`, `C_2·(1 2)` or `1`.
impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts: Vec<alloc::string::String> = Vec::new();
        if !self.flips.is_empty() {
            let mut s = alloc::string::String::new();
            for i in self.flips.iter() {
                s.push_str(&format!("C_{}", i + 1));
            }
            parts.push(s);
        }
        if self.cn {
            parts.push("c_n".into());
        }
        for cycle in self.cycles() {
            let inner: Vec<alloc::string::String> =
                cycle.iter().map(|i| format!("{}", i + 1)).collect();
            parts.push(format!("({})", inner.join(" ")));
        }
        f.write_str(&parts.join("·"))
    }
}

/// `W_M` for a fixed Levi: constructors, the group law and the actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylGroup {
    levi: LeviSpec,
}

impl WeylGroup {
    pub fn new(levi: LeviSpec) -> Self {
        WeylGroup { levi }
    }

    pub fn levi(&self) -> &LeviSpec {
        &self.levi
    }

    pub fn r(&self) -> usize {
        self.levi.r()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            perm: (0..self.r()).collect(),
            flips: BlockSet::EMPTY,
            cn: false,
        }
    }

    /// Builds `C_F ∘ s`, checking that `s` only exchanges blocks of equal
    /// size and that `C_F` lies in the sign-change subgroup.
    pub fn element(&self, perm: Vec<usize>, flips: BlockSet) -> Result<WeylElement> {
        let r = self.r();
        if perm.len() != r {
            return Err(Error::LeviMismatch { expected: r, got: perm.len() });
        }
        let mut seen = vec![false; r];
        for (i, &p) in perm.iter().enumerate() {
            if p >= r || seen[p] {
                return Err(Error::NotInWeylGroup(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
            if self.levi.block(i) != self.levi.block(p) {
                return Err(Error::NotInWeylGroup(format!(
                    "block {} (size {}) cannot move to block {} (size {})",
                    i + 1,
                    self.levi.block(i),
                    p + 1,
                    self.levi.block(p)
                )));
            }
        }
        if !flips.is_subset(BlockSet::full(r)) {
            return Err(Error::NotInWeylGroup(format!("flip set {flips:?} out of range")));
        }
        let cn = self.levi.cn_flag_for(flips).ok_or_else(|| {
            Error::NotInWeylGroup(format!(
                "sign change {} flips an odd number of odd blocks with m = 0",
                WeylElement { perm: (0..r).collect(), flips, cn: false }
            ))
        })?;
        Ok(WeylElement { perm, flips, cn })
    }

    /// Pure sign change `C_F` (with its derived `c_n` twist).
    pub fn sign_change(&self, flips: BlockSet) -> Result<WeylElement> {
        self.element((0..self.r()).collect(), flips)
    }

    /// Block transposition `(i j)`, 0-based.
    pub fn transposition(&self, i: usize, j: usize) -> Result<WeylElement> {
        let r = self.r();
        if i >= r || j >= r {
            return Err(Error::NotInWeylGroup(format!("transposition ({i} {j}) out of range")));
        }
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(i, j);
        self.element(perm, BlockSet::EMPTY)
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.element(w.perm.clone(), w.flips).map(|v| v == *w).unwrap_or(false)
    }

    fn check(&self, w: &WeylElement) -> Result<()> {
        if w.rank() != self.r() {
            return Err(Error::LeviMismatch { expected: self.r(), got: w.rank() });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.check(a)?;
        self.check(b)?;
        let perm: Vec<usize> = b.perm.iter().map(|&j| a.perm[j]).collect();
        let flips = a.flips.symmetric_difference(b.flips.permuted(&a.perm));
        // s preserves block sizes, so the odd-flip parity is additive
        Ok(WeylElement { perm, flips, cn: a.cn ^ b.cn })
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement> {
        self.check(w)?;
        let mut inv = vec![0; w.rank()];
        for (i, &p) in w.perm.iter().enumerate() {
            inv[p] = i;
        }
        let flips = w.flips.permuted(&inv);
        Ok(WeylElement { perm: inv, flips, cn: w.cn })
    }

    /// Smallest `k ≥ 1` with `w^k = 1`.
    pub fn order(&self, w: &WeylElement) -> Result<usize> {
        let id = self.identity();
        let mut acc = w.clone();
        let mut k = 1;
        while acc != id {
            acc = self.multiply(&acc, w)?;
            k += 1;
        }
        Ok(k)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[WeylElement]) -> Result<Vec<WeylElement>> {
        let mut seen = alloc::collections::BTreeSet::new();
        seen.insert(self.identity());
        let mut frontier = alloc::vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.multiply(&x, g)?;
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Block permutations preserving block sizes, in lexicographic order.
    pub fn block_permutations(&self) -> Vec<Vec<usize>> {
        let r = self.r();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(r);
        let mut used = vec![false; r];
        self.extend_perms(&mut current, &mut used, &mut out);
        out
    }

    fn extend_perms(&self, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = current.len();
        if i == self.r() {
            out.push(current.clone());
            return;
        }
        for p in 0..self.r() {
            if !used[p] && self.levi.block(p) == self.levi.block(i) {
                used[p] = true;
                current.push(p);
                self.extend_perms(current, used, out);
                current.pop();
                used[p] = false;
            }
        }
    }

    /// Sign changes of `W_M`, ordered by flip bitmask.
    pub fn sign_changes(&self) -> Vec<WeylElement> {
        (0..1u64 << self.r())
            .filter_map(|bits| self.sign_change(BlockSet::from_bits(bits)).ok())
            .collect()
    }

    /// Every element of `W_M` exactly once.
    pub fn elements(&self) -> Vec<WeylElement> {
        let signs = self.sign_changes();
        let mut out = Vec::new();
        for perm in self.block_permutations() {
            for c in &signs {
                out.push(WeylElement { perm: perm.clone(), flips: c.flips, cn: c.cn });
            }
        }
        out
    }

    /// Action on `a_M ≅ {(x_1, …, x_r, y)}`: blocks move, then each flipped
    /// coordinate `x_i` becomes `y - x_i`.
    pub fn act_on_a(&self, w: &WeylElement, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check(w)?;
        let r = self.r();
        if v.len() != r + 1 {
            return Err(Error::DimensionMismatch { expected: r + 1, got: v.len() });
        }
        let y = v[r];
        let mut out = v.to_vec();
        for i in 0..r {
            out[w.perm[i]] = v[i];
        }
        for i in w.flips.iter() {
            out[i] = y - out[i];
        }
        Ok(out)
    }

    /// Matrix of `act_on_a` (column `j` is the image of the `j`-th unit vector).
    pub fn matrix(&self, w: &WeylElement) -> Result<Vec<Vec<Rational>>> {
        let dim = self.r() + 1;
        let mut m = vec![vec![Rational::from_integer(0); dim]; dim];
        for j in 0..dim {
            let mut e = vec![Rational::from_integer(0); dim];
            e[j] = Rational::from_integer(1);
            let col = self.act_on_a(w, &e)?;
            for (i, x) in col.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn weyl(family: Family, blocks: &[usize], m: usize) -> WeylGroup {
        WeylGroup::new(LeviSpec::from_partition(family, blocks.to_vec(), m).unwrap())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn set(ix: &[usize]) -> BlockSet {
        BlockSet::from_iter(ix.iter().copied())
    }

    #[test]
    fn levi_rejects_bad_partitions() {
        let g = GroupSpec::new(Family::B, 3).unwrap();
        assert!(LeviSpec::new(g, vec![1, 1], 0).is_err());
        assert!(LeviSpec::new(g, vec![], 3).is_err());
        assert!(LeviSpec::new(g, vec![0, 3], 0).is_err());
        assert!(LeviSpec::new(g, vec![2, 1], 0).is_ok());
        assert!(GroupSpec::new(Family::D, 0).is_err());
    }

    #[test]
    fn identity_is_trivial() {
        for w in [weyl(Family::B, &[1, 1], 1), weyl(Family::D, &[2], 0)] {
            let e = w.identity();
            assert!(e.has_trivial_perm());
            assert!(e.flips().is_empty());
            assert!(!e.cn_flag());
            assert_eq!(e.to_string(), "1");
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl(Family::B, &[1, 1], 1).elements().len(), 8);
        assert_eq!(weyl(Family::D, &[1, 1], 0).elements().len(), 4);
        assert_eq!(weyl(Family::B, &[2, 1], 0).elements().len(), 4);
        // all blocks even: full Z_2^r sign part
        assert_eq!(weyl(Family::D, &[2, 2], 0).elements().len(), 8);
        assert_eq!(weyl(Family::D, &[1, 2], 0).elements().len(), 2);
        assert_eq!(weyl(Family::D, &[1, 1], 1).elements().len(), 8);
    }

    #[test]
    fn d_sign_part_for_two_odd_blocks() {
        let w = weyl(Family::D, &[1, 1], 0);
        let signs: Vec<BlockSet> = w.sign_changes().iter().map(|c| c.flips()).collect();
        assert_eq!(signs, vec![BlockSet::EMPTY, set(&[0, 1])]);
        assert!(w.sign_change(set(&[0])).is_err());
    }

    #[test]
    fn cn_flag_tracks_odd_flips() {
        let w = weyl(Family::D, &[1, 2, 3], 1);
        assert!(w.sign_change(set(&[0])).unwrap().cn_flag());
        assert!(!w.sign_change(set(&[1])).unwrap().cn_flag());
        assert!(!w.sign_change(set(&[0, 2])).unwrap().cn_flag());
        assert_eq!(w.sign_change(set(&[0])).unwrap().to_string(), "C_1·c_n");
        let b = weyl(Family::B, &[1, 3], 1);
        assert!(!b.sign_change(set(&[0])).unwrap().cn_flag());
    }

    #[test]
    fn multiplication_examples() {
        let w = weyl(Family::B, &[1, 1, 1], 0);
        let c1 = w.sign_change(set(&[0])).unwrap();
        assert_eq!(w.multiply(&c1, &c1).unwrap(), w.identity());
        let c12 = w.sign_change(set(&[0, 1])).unwrap();
        let c23 = w.sign_change(set(&[1, 2])).unwrap();
        assert_eq!(w.multiply(&c12, &c23).unwrap(), w.sign_change(set(&[0, 2])).unwrap());
        let t12 = w.transposition(0, 1).unwrap();
        let prod = w.multiply(&t12, &c1).unwrap();
        assert_eq!(prod.perm(), &[1, 0, 2]);
        assert_eq!(prod.flips(), set(&[1]));
    }

    #[test]
    fn transposition_requires_equal_sizes() {
        assert!(weyl(Family::B, &[2, 1], 0).transposition(0, 1).is_err());
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let a = weyl(Family::B, &[1, 1], 0);
        let b = weyl(Family::B, &[1, 1, 1], 0);
        assert!(a.multiply(&a.identity(), &b.identity()).is_err());
    }

    #[test]
    fn act_on_a_examples() {
        let w = weyl(Family::B, &[1, 1], 1);
        let c1 = w.sign_change(set(&[0])).unwrap();
        let v = [q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(w.act_on_a(&c1, &v).unwrap(), vec![q(1, 1), q(0, 1), q(1, 1)]);
        let c12 = w.sign_change(set(&[0, 1])).unwrap();
        let z = [q(1, 2), q(1, 2), q(1, 1)];
        assert_eq!(w.act_on_a(&c12, &z).unwrap(), z.to_vec());
        let u = [q(3, 7), q(-2, 5), q(9, 4)];
        assert_eq!(w.act_on_a(&w.identity(), &u).unwrap(), u.to_vec());
        assert!(w.act_on_a(&c1, &u[..2]).is_err());
    }

    #[test]
    fn display_mixed_element() {
        let w = weyl(Family::B, &[1, 1, 1], 0);
        let e = w.element(vec![1, 0, 2], set(&[1])).unwrap();
        assert_eq!(e.to_string(), "C_2·(1 2)");
    }
}
