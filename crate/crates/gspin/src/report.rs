//! Builds the report documents for one instance.

use gspin_core::elliptic::{classify_elliptic, sign_characters};
use gspin_core::inertia::{delta_prime, r_group_bruteforce, r_group_closed_form, stabilizer, OmegaSets, Regime, RGroup};
use gspin_core::instance::{validate, Instance, ViolationKind};
use gspin_core::lparam::{
    arthur_r_group_general, arthur_r_group_maximal, check_scope, multiplicity_centralizer, rgroups_match,
    segment_factor_type, siegel_centralizer, siegel_r_group, siegel_reducibility, BilinearForm, ComponentGroup,
    FormType, Pole, SegmentParam, TauParam, MODEL_ASSUMPTIONS,
};
use gspin_core::roots::{rank_one_element, ReducedRoot};
use gspin_core::{Family, LeviSpec, Rational, WeylElement, WeylGroup};

use crate::schema::*;
use crate::CliError;

pub fn group_name(levi: &LeviSpec) -> String {
    match levi.family() {
        Family::B => format!("GSpin_{}", 2 * levi.n() + 1),
        Family::D => format!("GSpin_{}", 2 * levi.n()),
    }
}

/// `GL_{n_1} × ⋯ × GL_{n_r} × GSpin_{2m+1}` (or `GSpin_{2m}`).
pub fn levi_name(levi: &LeviSpec) -> String {
    let mut parts: Vec<String> = levi.blocks().iter().map(|k| format!("GL_{k}")).collect();
    parts.push(match levi.family() {
        Family::B => format!("GSpin_{}", 2 * levi.m() + 1),
        Family::D => format!("GSpin_{}", 2 * levi.m()),
    });
    parts.join(" × ")
}

pub fn z2_power(d: usize) -> String {
    format!("Z_2^{d}")
}

fn names<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn one_based(ix: &[usize]) -> Vec<usize> {
    ix.iter().map(|i| i + 1).collect()
}

/// Parses and validates an instance file. Scope violations alone map to
/// the unsupported exit code, everything else to invalid input.
pub fn load(text: &str) -> Result<Instance, CliError> {
    let inst = InstanceFile::parse(text)?.to_instance()?;
    let violations = validate(&inst);
    if violations.is_empty() {
        return Ok(inst);
    }
    if violations.iter().all(|v| v.kind == ViolationKind::Unsupported) {
        return Err(CliError::Unsupported(names(&violations).join("; ")));
    }
    Err(CliError::Invalid(names(&violations)))
}

pub fn validate_report(text: &str) -> Result<ValidateReport, CliError> {
    let inst = InstanceFile::parse(text)?.to_instance()?;
    let violations: Vec<ViolationDto> = validate(&inst)
        .into_iter()
        .map(|v| ViolationDto { kind: format!("{:?}", v.kind), message: v.message })
        .collect();
    Ok(ValidateReport { schema_version: SCHEMA_VERSION.into(), valid: violations.is_empty(), violations })
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::TypeB => "B",
        Regime::TypeDSplit => "D, c_n τ ≇ τ or m = 0",
        Regime::TypeDFixed => "D, c_n τ ≅ τ",
    }
}

fn omega_dto(omega: &OmegaSets) -> OmegaDto {
    match omega {
        OmegaSets::Single(ix) => OmegaDto { omega: Some(one_based(ix)), omega1: None, omega2: None },
        OmegaSets::Split { omega1, omega2 } => {
            OmegaDto { omega: None, omega1: Some(one_based(omega1)), omega2: Some(one_based(omega2)) }
        }
    }
}

pub fn rgroup_report(inst: &Instance, oracle: bool) -> Result<RGroupReport, CliError> {
    let weyl = WeylGroup::new(inst.levi.clone());
    let sigma = &inst.sigma;
    let stab = stabilizer(&weyl, sigma)?;
    let delta = delta_prime(&weyl, sigma)?;
    let group = r_group_closed_form(&weyl, sigma)?;
    let omega = group.omega.clone().unwrap_or_else(|| gspin_core::inertia::omega_sets(&inst.levi, sigma));
    let oracle = if oracle {
        let bf = r_group_bruteforce(&weyl, sigma)?;
        Some(OracleDto { agrees: bf.elements == group.elements, bruteforce_elements: names(&bf.elements) })
    } else {
        None
    };
    Ok(RGroupReport {
        schema_version: SCHEMA_VERSION.into(),
        group: group_name(&inst.levi),
        levi: levi_name(&inst.levi),
        regime: regime_name(gspin_core::inertia::regime(&inst.levi, sigma)).into(),
        weyl_order: weyl.elements().len(),
        stabilizer_order: stab.len(),
        delta_prime: names(&delta),
        omega: omega_dto(&omega),
        generators: names(&group.generators),
        elements: names(&group.elements),
        rank: group.rank(),
        isomorphism_type: z2_power(group.rank()),
        oracle,
    })
}

fn rational_vec(v: &[Rational]) -> Vec<String> {
    names(v)
}

pub const SIGN_RELATION: &str = "Θ^e(π_κ) = ε(κ)·Θ^e(π_1)";

pub fn elliptic_report(inst: &Instance) -> Result<EllipticReportDto, CliError> {
    let weyl = WeylGroup::new(inst.levi.clone());
    let group = r_group_closed_form(&weyl, &inst.sigma)?;
    let rep = classify_elliptic(&weyl, &inst.sigma, &group)?;
    let sign_table = if rep.has_elliptic {
        let t = sign_characters(&weyl, &inst.sigma, &group)?;
        Some(SignTableDto {
            c0: t.c0.to_string(),
            generators: names(&t.generators),
            c0_coefficients: t.coefficients.iter().map(|&b| b as u8).collect(),
            characters: t
                .characters
                .iter()
                .map(|c| CharacterDto { values: c.values.clone(), epsilon: c.epsilon })
                .collect(),
            relation: SIGN_RELATION.into(),
        })
    } else {
        None
    };
    Ok(EllipticReportDto {
        schema_version: SCHEMA_VERSION.into(),
        group: group_name(&inst.levi),
        levi: levi_name(&inst.levi),
        r_group_generators: names(&group.generators),
        has_elliptic: rep.has_elliptic,
        all_components_elliptic: rep.all_components_elliptic,
        elliptic_witness: rep.elliptic_witness.as_ref().map(ToString::to_string),
        a_r_basis: rep.a_r.basis().iter().map(|v| rational_vec(v)).collect(),
        irreducibly_induced_from_elliptic: rep.irreducibly_induced_from_elliptic,
        inducing_witness: rep.inducing_witness.as_ref().map(ToString::to_string),
        closed_form: ClosedFormDto {
            d: rep.counts.d,
            d1: rep.counts.d1,
            d2: rep.counts.d2,
            has_elliptic: rep.closed_form_has_elliptic,
            irreducibly_induced: rep.closed_form_irreducibly_induced,
            agrees: rep.agrees_with_closed_form(),
        },
        sign_table,
    })
}

fn component_name(c: ComponentGroup) -> String {
    match c {
        ComponentGroup::Trivial => "1".into(),
        ComponentGroup::Z2 => "Z_2".into(),
    }
}

/// `R ≅ Z_2^d` rendered the way the tables print it.
pub fn r_name(d: usize) -> String {
    match d {
        0 => "1".into(),
        1 => "Z_2".into(),
        d => z2_power(d),
    }
}

fn is_siegel(levi: &LeviSpec, blocks: &[SegmentParam], tau: &TauParam) -> bool {
    levi.r() == 1 && levi.m() == 0 && blocks[0].a == 1 && tau.jordan.is_empty()
}

fn block_dto(family: Family, seg: &SegmentParam, tau: &TauParam, reducible: bool) -> Result<BlockArthurDto, CliError> {
    let self_dual = seg.rho.is_self_dual();
    let factor = if self_dual { Some(segment_factor_type(seg)?) } else { None };
    let (centralizer, maximal) = match (family, factor) {
        (_, None) => (None, ComponentGroup::Trivial),
        (Family::B, Some(f)) => {
            let mult = if tau.contains(seg) { 3 } else { 2 };
            let c = multiplicity_centralizer(BilinearForm::Symplectic, f.into(), mult)?;
            (Some(c.kind.to_string()), arthur_r_group_maximal(seg, tau)?)
        }
        (Family::D, Some(_)) => {
            let c = siegel_centralizer(&seg.rho, family, seg.rho.dim)?;
            (Some(c.kind.to_string()), siegel_r_group(&seg.rho, family, seg.rho.dim)?)
        }
    };
    Ok(BlockArthurDto {
        segment: seg.name(),
        factor_type: factor.map(|f| match f {
            FormType::GSp => "GSp".into(),
            FormType::GO => "GO".into(),
        }),
        in_jordan: tau.contains(seg),
        reducible,
        centralizer,
        maximal_r_phi: component_name(maximal),
    })
}

fn siegel_dto(seg: &SegmentParam, family: Family) -> Result<SiegelDto, CliError> {
    let n = seg.rho.dim;
    let c = siegel_centralizer(&seg.rho, family, n)?;
    let table = siegel_r_group(&seg.rho, family, n)?;
    let (pole, reducible) = if seg.rho.is_self_dual() {
        let v = siegel_reducibility(&seg.rho, family)?;
        let pole = match v.pole {
            Pole::Exterior => "L(s, ∧²φ_0 ⊗ ψ^-1)",
            Pole::Symmetric => "L(s, Sym²φ_0 ⊗ ψ^-1)",
        };
        (pole.to_string(), v.reducible)
    } else {
        ("none".to_string(), false)
    };
    Ok(SiegelDto {
        centralizer: c.kind.to_string(),
        centralizer_component_group: component_name(c.component_group),
        r_phi: component_name(table),
        reducible,
        pole,
        tables_agree: c.component_group == table,
    })
}

pub fn arthur_report(inst: &Instance) -> Result<ArthurReportDto, CliError> {
    let Some(params) = &inst.params else {
        return Err(CliError::Invalid(vec!["the arthur command needs parameter data (`params`)".into()]));
    };
    let (levi, blocks, tau) = (&inst.levi, &params.blocks, &params.tau);
    let family = levi.family();
    check_scope(levi, blocks)?;
    let weyl = WeylGroup::new(levi.clone());
    let ks: RGroup = r_group_closed_form(&weyl, &inst.sigma)?;
    let mut block_dtos = Vec::with_capacity(blocks.len());
    for (i, seg) in blocks.iter().enumerate() {
        let reducible = inst.sigma.is_reducible(inst.sigma.assign[i]);
        block_dtos.push(block_dto(family, seg, tau, reducible)?);
    }
    let siegel = if is_siegel(levi, blocks, tau) { Some(siegel_dto(&blocks[0], family)?) } else { None };

    let (w_phi_order, delta_phi, w_circ_generators, representatives, rank, matches) = match family {
        Family::B => {
            let a = arthur_r_group_general(levi, blocks, tau)?;
            let reps = a.representatives.iter().map(|w| w.as_ref().map_or("?".into(), ToString::to_string)).collect();
            let matches = rgroups_match(&ks, &a);
            let Some(rank) = a.rank() else {
                return Err(CliError::Failure(format!("|R_φ,σ| = {} is not a power of two", a.order())));
            };
            (a.w_phi.len(), names(&a.delta_phi), names(&a.w_circ_generators), reps, rank, matches)
        }
        Family::D => {
            // Siegel only: W_{φ,σ} has order at most 2 and R_{φ,σ} is read off the table.
            let w_phi = stabilizer(&weyl, &inst.sigma)?;
            let table = siegel_r_group(&blocks[0].rho, family, levi.n())?;
            let (delta, gens, reps): (Vec<ReducedRoot>, Vec<WeylElement>, Vec<WeylElement>) =
                if table == ComponentGroup::Trivial && w_phi.len() > 1 {
                    let root = ReducedRoot::Gamma(0);
                    let gens = rank_one_element(&weyl, root)?.into_iter().collect();
                    (vec![root], gens, vec![weyl.identity()])
                } else {
                    (Vec::new(), Vec::new(), w_phi.clone())
                };
            let rank = table.rank();
            let matches = ks.elements == reps && ks.rank() == rank;
            (w_phi.len(), names(&delta), names(&gens), names(&reps), rank, matches)
        }
    };
    Ok(ArthurReportDto {
        schema_version: SCHEMA_VERSION.into(),
        group: group_name(levi),
        levi: levi_name(levi),
        siegel,
        blocks: block_dtos,
        w_phi_order,
        delta_phi,
        w_circ_generators,
        representatives,
        r_phi_sigma: r_name(rank),
        knapp_stein_generators: names(&ks.generators),
        matches,
        assumptions: names(MODEL_ASSUMPTIONS),
    })
}
