//! Fixed subspaces on `a_M`, the elliptic classification, the splitting of
//! the normalized intertwining operators and the elliptic sign characters.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inertia::{omega_sets, regime, InertiaDatum, OmegaSets, RGroup, Regime};
use crate::linalg::Subspace;
use crate::weyl::{BlockSet, Family, Rational, WeylElement, WeylGroup};

/// `a_w = {H ∈ a_M : w·H = H}` as the exact kernel of `M_w - I`.
pub fn fixed_space(weyl: &WeylGroup, w: &WeylElement) -> Result<Subspace> {
    let mut rows = weyl.matrix(w)?;
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] -= Rational::from_integer(1);
    }
    Ok(Subspace::kernel_of(rows, weyl.r() + 1))
}

/// `z = {(y/2, …, y/2, y)}`, the Lie algebra of the split centre.
pub fn centre(r: usize) -> Subspace {
    let mut v = vec![Rational::from_integer(1); r + 1];
    v[r] = Rational::from_integer(2);
    Subspace::span(vec![v], r + 1)
}

/// `a_R = ⋂_{w ∈ R} a_w`.
pub fn common_fixed_space(weyl: &WeylGroup, group: &RGroup) -> Result<Subspace> {
    let mut rows = Vec::new();
    for w in &group.elements {
        let mut m = weyl.matrix(w)?;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= Rational::from_integer(1);
        }
        rows.extend(m);
    }
    Ok(Subspace::kernel_of(rows, weyl.r() + 1))
}

/// The counting data the closed forms are phrased in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaCounts {
    pub regime: Regime,
    /// `|Ω(σ)|`, or `|Ω_1(σ)| + |Ω_2(σ)|` in the split type D case.
    pub d: usize,
    pub d1: usize,
    /// Odd blocks among the indices.
    pub d2: usize,
}

pub fn omega_counts(weyl: &WeylGroup, sigma: &InertiaDatum) -> OmegaCounts {
    let levi = weyl.levi();
    let regime = regime(levi, sigma);
    match omega_sets(levi, sigma) {
        OmegaSets::Single(ix) => {
            let d2 = ix.iter().filter(|&&i| levi.block(i) % 2 == 1).count();
            OmegaCounts { regime, d: ix.len(), d1: ix.len() - d2, d2 }
        }
        OmegaSets::Split { omega1, omega2 } => OmegaCounts {
            regime,
            d: omega1.len() + omega2.len(),
            d1: omega1.len(),
            d2: omega2.len(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticReport {
    pub has_elliptic: bool,
    /// When elliptic components exist, every component is elliptic.
    pub all_components_elliptic: bool,
    pub irreducibly_induced_from_elliptic: bool,
    /// First `w ∈ R(σ)` with `a_w = z`.
    pub elliptic_witness: Option<WeylElement>,
    /// First `w ∈ R(σ)` with `a_w = a_R`.
    pub inducing_witness: Option<WeylElement>,
    pub a_r: Subspace,
    pub counts: OmegaCounts,
    pub closed_form_has_elliptic: bool,
    pub closed_form_irreducibly_induced: bool,
}

impl EllipticReport {
    pub fn agrees_with_closed_form(&self) -> bool {
        self.has_elliptic == self.closed_form_has_elliptic
            && self.irreducibly_induced_from_elliptic == self.closed_form_irreducibly_induced
    }
}

/// Decides ellipticity by searching `R(σ)` for fixed spaces, then records
/// the closed-form verdicts next to it.
pub fn classify_elliptic(weyl: &WeylGroup, sigma: &InertiaDatum, group: &RGroup) -> Result<EllipticReport> {
    let r = weyl.r();
    let z = centre(r);
    let a_r = common_fixed_space(weyl, group)?;
    let mut elliptic_witness = None;
    let mut inducing_witness = None;
    for w in &group.elements {
        let a_w = fixed_space(weyl, w)?;
        if elliptic_witness.is_none() && a_w == z {
            elliptic_witness = Some(w.clone());
        }
        if inducing_witness.is_none() && a_w == a_r {
            inducing_witness = Some(w.clone());
        }
    }
    let counts = omega_counts(weyl, sigma);
    let (closed_form_has_elliptic, closed_form_irreducibly_induced) = match counts.regime {
        Regime::TypeB | Regime::TypeDFixed => (counts.d == r, true),
        Regime::TypeDSplit => (
            counts.d == r && counts.d2 % 2 == 0,
            counts.d2 % 2 == 0 || counts.d2 <= 1,
        ),
    };
    let has_elliptic = elliptic_witness.is_some();
    Ok(EllipticReport {
        has_elliptic,
        all_components_elliptic: has_elliptic,
        irreducibly_induced_from_elliptic: inducing_witness.is_some(),
        elliptic_witness,
        inducing_witness,
        a_r,
        counts,
        closed_form_has_elliptic,
        closed_form_irreducibly_induced,
    })
}

/// `T_w = ∏_{i∈B} T_i` (times `T_τ` when `tau_flag`), with `T_i² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormalOperator {
    pub subset: BlockSet,
    pub tau_flag: bool,
}

impl FormalOperator {
    pub const IDENTITY: FormalOperator = FormalOperator { subset: BlockSet::EMPTY, tau_flag: false };

    pub fn compose(self, other: FormalOperator) -> FormalOperator {
        FormalOperator {
            subset: self.subset.symmetric_difference(other.subset),
            tau_flag: self.tau_flag ^ other.tau_flag,
        }
    }
}

/// The section `w ↦ T_w` on `R(σ)`. Each `T_i` needs `σ_i ≅ σ̃_i ⊗ ω_τ`
/// and `T_τ` needs `c_n τ ≅ τ`.
pub fn splitting_section(sigma: &InertiaDatum, group: &RGroup) -> Result<Vec<(WeylElement, FormalOperator)>> {
    let self_dual = sigma.self_dual_blocks();
    let mut out = Vec::with_capacity(group.elements.len());
    for w in &group.elements {
        if !w.has_trivial_perm() {
            return Err(Error::Precondition(format!("{w} is not a sign change")));
        }
        if !w.flips().is_subset(self_dual) {
            return Err(Error::Precondition(format!("{w} flips a block that is not self-dual")));
        }
        if w.cn_flag() && !sigma.cn_fixes_tau {
            return Err(Error::Precondition(format!("{w} carries c_n but c_n τ ≇ τ")));
        }
        out.push((w.clone(), FormalOperator { subset: w.flips(), tau_flag: w.cn_flag() }));
    }
    Ok(out)
}

/// `T_{w_1 w_2} = T_{w_1} T_{w_2}` on all pairs, i.e. the cocycle is trivial.
pub fn is_homomorphism(weyl: &WeylGroup, section: &[(WeylElement, FormalOperator)]) -> Result<bool> {
    let lookup = |w: &WeylElement| section.iter().find(|(x, _)| x == w).map(|(_, t)| *t);
    for (a, ta) in section {
        for (b, tb) in section {
            let ab = weyl.multiply(a, b)?;
            match lookup(&ab) {
                Some(t) if t == ta.compose(*tb) => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(lookup(&weyl.identity()) == Some(FormalOperator::IDENTITY))
}

/// A character `κ` of `R(σ) ≅ Z_2^d`, given by its values on the
/// generators, with `ε(κ) = κ(C_0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignChar {
    pub values: Vec<i8>,
    pub epsilon: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    pub c0: WeylElement,
    pub generators: Vec<WeylElement>,
    /// `C_0 = ∏ g_k^{coefficients[k]}`.
    pub coefficients: Vec<bool>,
    /// All `2^d` characters, the trivial one first.
    pub characters: Vec<SignChar>,
}

impl SignTable {
    pub fn positive_count(&self) -> usize {
        self.characters.iter().filter(|c| c.epsilon == 1).count()
    }
}

/// `C_0 = C_1⋯C_r c_n` for `GSpin_{2n}` with `d_2` odd and `c_n τ ≅ τ`,
/// and `C_1⋯C_r` otherwise.
pub fn c0(weyl: &WeylGroup, sigma: &InertiaDatum) -> Result<WeylElement> {
    let levi = weyl.levi();
    let counts = omega_counts(weyl, sigma);
    let with_cn = levi.family() == Family::D && counts.d2 % 2 == 1 && sigma.cn_fixes_tau;
    let w = weyl.sign_change(BlockSet::full(levi.r()))?;
    if w.cn_flag() != with_cn {
        return Err(Error::Precondition(format!(
            "C_1⋯C_r{} is not in W_M",
            if with_cn { "·c_n" } else { "" }
        )));
    }
    Ok(w)
}

/// Coordinates of a sign change over `F_2`: flips, then the `c_n` bit.
fn f2_vector(w: &WeylElement) -> u128 {
    u128::from(w.flips().bits()) | (u128::from(w.cn_flag()) << 64)
}

/// Solves `target = Σ c_k basis_k` over `F_2`.
fn f2_solve(basis: &[u128], target: u128) -> Option<Vec<bool>> {
    // rows carry (vector, combination of original basis indices)
    let mut rows: Vec<(u128, u64)> = basis.iter().enumerate().map(|(k, &v)| (v, 1u64 << k)).collect();
    let mut pivots: Vec<(u128, u128, u64)> = Vec::new();
    for (mut v, mut combo) in rows.drain(..) {
        for &(bit, pv, pc) in &pivots {
            if v & bit != 0 {
                v ^= pv;
                combo ^= pc;
            }
        }
        if v != 0 {
            let bit = 1u128 << (127 - v.leading_zeros());
            for p in pivots.iter_mut() {
                if p.1 & bit != 0 {
                    p.1 ^= v;
                    p.2 ^= combo;
                }
            }
            pivots.push((bit, v, combo));
        }
    }
    let (mut t, mut combo) = (target, 0u64);
    for &(bit, pv, pc) in &pivots {
        if t & bit != 0 {
            t ^= pv;
            combo ^= pc;
        }
    }
    (t == 0).then(|| (0..basis.len()).map(|k| combo >> k & 1 == 1).collect())
}

/// All characters of `R(σ)` with their signs `ε(κ)`.
pub fn sign_characters(weyl: &WeylGroup, sigma: &InertiaDatum, group: &RGroup) -> Result<SignTable> {
    let report = classify_elliptic(weyl, sigma, group)?;
    if !report.has_elliptic {
        return Err(Error::Precondition("the induced representation has no elliptic components".into()));
    }
    let c0 = c0(weyl, sigma)?;
    if !group.contains(&c0) {
        return Err(Error::Precondition(format!("C_0 = {c0} is not in R(σ)")));
    }
    let basis: Vec<u128> = group.generators.iter().map(f2_vector).collect();
    let coefficients = f2_solve(&basis, f2_vector(&c0))
        .ok_or_else(|| Error::NotElementaryAbelian(format!("{c0} is not in the span of the generators")))?;
    let d = group.rank();
    let characters = (0..1u64 << d)
        .map(|mask| {
            let values: Vec<i8> = (0..d).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let epsilon = values.iter().zip(&coefficients).filter(|(_, &c)| c).map(|(&v, _)| v).product();
            SignChar { values, epsilon }
        })
        .collect();
    Ok(SignTable { c0, generators: group.generators.clone(), coefficients, characters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::{r_group_bruteforce, r_group_closed_form, Label};
    use crate::weyl::LeviSpec;
    use alloc::string::ToString;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn weyl(family: Family, blocks: &[usize], m: usize) -> WeylGroup {
        WeylGroup::new(LeviSpec::from_partition(family, blocks.to_vec(), m).unwrap())
    }

    /// Distinct self-dual labels per block, reducible where requested.
    fn distinct(r: usize, reducible: &[bool], cn: bool) -> InertiaDatum {
        InertiaDatum::new(
            (0..r).map(|i| i.to_string()).collect(),
            (0..r).map(Label).collect(),
            (0..r).map(Label).collect(),
            reducible.to_vec(),
            cn,
        )
    }

    #[test]
    fn fixed_space_examples() {
        let w = weyl(Family::B, &[1, 1], 0);
        let c1 = w.sign_change(BlockSet::singleton(0)).unwrap();
        let a = fixed_space(&w, &c1).unwrap();
        assert_eq!(a.basis(), vec![vec![q(1), q(0), q(2)], vec![q(0), q(1), q(0)]]);
        assert_eq!(a, Subspace::span(vec![vec![q(0), q(1), q(0)], vec![q(1), q(0), q(2)]], 3));
        assert_eq!(fixed_space(&w, &w.identity()).unwrap().dim(), 3);
        let c12 = w.sign_change(BlockSet::full(2)).unwrap();
        assert_eq!(fixed_space(&w, &c12).unwrap(), centre(2));
    }

    #[test]
    fn fixed_space_dimension_of_sign_changes() {
        for r in 1..=5 {
            let w = weyl(Family::B, &vec![1; r], 0);
            for c in w.sign_changes() {
                assert_eq!(fixed_space(&w, &c).unwrap().dim(), r + 1 - c.flips().len());
            }
        }
    }

    #[test]
    fn classify_examples() {
        let w = weyl(Family::B, &[1, 1], 0);
        let s = distinct(2, &[true, true], false);
        let g = r_group_closed_form(&w, &s).unwrap();
        let rep = classify_elliptic(&w, &s, &g).unwrap();
        assert!(rep.has_elliptic && rep.all_components_elliptic);
        assert_eq!(rep.elliptic_witness.as_ref().unwrap().to_string(), "C_1C_2");
        assert!(rep.agrees_with_closed_form());

        let same = InertiaDatum::new(vec!["a".into()], vec![Label(0), Label(0)], vec![Label(0)], vec![true], false);
        let g = r_group_bruteforce(&w, &same).unwrap();
        let rep = classify_elliptic(&w, &same, &g).unwrap();
        assert!(!rep.has_elliptic);
        assert!(rep.irreducibly_induced_from_elliptic);
        assert_eq!(rep.inducing_witness.unwrap().to_string(), "C_2");

        let d = weyl(Family::D, &[1, 1, 1], 0);
        let s = distinct(3, &[false; 3], false);
        let g = r_group_bruteforce(&d, &s).unwrap();
        assert_eq!(g.rank(), 2);
        let rep = classify_elliptic(&d, &s, &g).unwrap();
        assert!(!rep.has_elliptic);
        assert!(rep.inducing_witness.is_none());
        assert_eq!(rep.a_r, centre(3));
        assert!(rep.agrees_with_closed_form());

        let w1 = weyl(Family::B, &[2], 0);
        let s = distinct(1, &[false], false);
        let g = r_group_bruteforce(&w1, &s).unwrap();
        let rep = classify_elliptic(&w1, &s, &g).unwrap();
        assert!(!rep.has_elliptic);
        assert_eq!(rep.inducing_witness, Some(w1.identity()));
    }

    #[test]
    fn splitting_section_composes() {
        let w = weyl(Family::B, &[1, 1, 1], 0);
        let s = distinct(3, &[true; 3], false);
        let g = r_group_closed_form(&w, &s).unwrap();
        let sec = splitting_section(&s, &g).unwrap();
        assert!(is_homomorphism(&w, &sec).unwrap());
        let t = |ix: &[usize]| FormalOperator { subset: BlockSet::from_iter(ix.iter().copied()), tau_flag: false };
        assert_eq!(t(&[0, 1]).compose(t(&[1, 2])), t(&[0, 2]));
        let id = sec.iter().find(|(x, _)| x.is_identity()).unwrap().1;
        assert_eq!(id, FormalOperator::IDENTITY);

        let d = weyl(Family::D, &[1, 1], 1);
        let s = distinct(2, &[true, true], true);
        let g = r_group_closed_form(&d, &s).unwrap();
        let sec = splitting_section(&s, &g).unwrap();
        assert!(is_homomorphism(&d, &sec).unwrap());
        let c1 = sec.iter().find(|(x, _)| x.flips() == BlockSet::singleton(0)).unwrap().1;
        let c2 = sec.iter().find(|(x, _)| x.flips() == BlockSet::singleton(1)).unwrap().1;
        assert!(c1.tau_flag && c2.tau_flag);
        assert!(!c1.compose(c2).tau_flag);
    }

    #[test]
    fn sign_table_counts() {
        let w = weyl(Family::B, &[1, 1, 1], 0);
        let s = distinct(3, &[true; 3], false);
        let g = r_group_closed_form(&w, &s).unwrap();
        let t = sign_characters(&w, &s, &g).unwrap();
        assert_eq!(t.characters.len(), 8);
        assert_eq!(t.positive_count(), 4);
        assert_eq!(t.characters[0].epsilon, 1);
        let k = t.characters.iter().find(|c| c.values == vec![-1, -1, 1]).unwrap();
        assert_eq!(k.epsilon, 1);

        let w1 = weyl(Family::B, &[1], 0);
        let s1 = distinct(1, &[true], false);
        let t = sign_characters(&w1, &s1, &r_group_closed_form(&w1, &s1).unwrap()).unwrap();
        let eps: Vec<i8> = t.characters.iter().map(|c| c.epsilon).collect();
        assert_eq!(eps, vec![1, -1]);

        let irr = distinct(1, &[false], false);
        assert!(sign_characters(&w1, &irr, &r_group_closed_form(&w1, &irr).unwrap()).is_err());
    }

    #[test]
    fn c0_takes_cn_for_odd_d2_with_fixed_tau() {
        let d = weyl(Family::D, &[1, 2], 1);
        let s = distinct(2, &[true, true], true);
        let g = r_group_closed_form(&d, &s).unwrap();
        let t = sign_characters(&d, &s, &g).unwrap();
        assert!(t.c0.cn_flag());
        assert_eq!(t.c0.to_string(), "C_1C_2·c_n");
        assert_eq!(t.positive_count(), 2);
    }

    #[test]
    fn f2_solve_decomposes() {
        assert_eq!(f2_solve(&[0b011, 0b110], 0b101), Some(vec![true, true]));
        assert_eq!(f2_solve(&[0b011, 0b110], 0b001), None);
        assert_eq!(f2_solve(&[], 0), Some(vec![]));
    }
}
