//! Property sweeps over enumerated instances.
//!
//! Work is split over instance indices and merged by index, so a report
//! depends only on the configuration and never on the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use gspin_core::elliptic::{c0, classify_elliptic, fixed_space, is_homomorphism, sign_characters, splitting_section};
use gspin_core::inertia::{r_group_bruteforce, r_group_closed_form, RGroup};
use gspin_core::instance::{
    enumerate_instances, enumerate_param_instances, instance_from_params, param_mutations, validate, Instance,
    MutationKind, MAX_ENUM_R, RHO_KINDS,
};
use gspin_core::lparam::{
    arthur_r_group_general, match_check, rgroups_match, siegel_r_group, ArthurRGroup, CuspParam, SegmentParam,
    TauParam,
};
use gspin_core::{BlockSet, Family, WeylGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::schema::{FailureDto, InstanceFile, SweepReportDto, SCHEMA_VERSION};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// Closed form equals the brute-force stabilizer computation.
    RGroupEquivalence,
    /// Brute-force elements are sign changes forming `Z_2^d`.
    SignChanges,
    /// The normalized operators form a homomorphism on `R(σ)`.
    Splitting,
    /// Fixed-space ellipticity agrees with the closed form.
    Elliptic,
    /// Sign characters of elliptic instances.
    SignTable,
    /// Both R-groups of a parameter instance agree.
    Match,
    /// Single-bit mutations of parameter instances.
    Mutation,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::RGroupEquivalence,
        Check::SignChanges,
        Check::Splitting,
        Check::Elliptic,
        Check::SignTable,
        Check::Match,
        Check::Mutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::RGroupEquivalence => "rgroup-equivalence",
            Check::SignChanges => "sign-changes",
            Check::Splitting => "splitting",
            Check::Elliptic => "elliptic",
            Check::SignTable => "sign-table",
            Check::Match => "match",
            Check::Mutation => "mutation",
        }
    }

    fn on_params(self) -> bool {
        matches!(self, Check::Match | Check::Mutation)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let known: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check `{s}` (known: {})", known.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub max_r: usize,
    pub max_block: usize,
    pub alphabet: usize,
    pub checks: Vec<Check>,
    /// With `count`, draws `count` instances with this seed instead of
    /// taking the first `count`.
    pub seed: Option<u64>,
    pub count: Option<usize>,
    /// 0 uses the rayon default.
    pub threads: usize,
    pub max_a: usize,
    pub max_rho: usize,
    pub max_jordan: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            families: vec![Family::B, Family::D],
            max_r: 3,
            max_block: 2,
            alphabet: 4,
            checks: Check::ALL.iter().copied().filter(|c| !c.on_params()).collect(),
            seed: None,
            count: None,
            threads: 0,
            max_a: 3,
            max_rho: 2,
            max_jordan: 2,
        }
    }
}

/// One failed property on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: Check,
    pub expected: String,
    pub got: String,
}

fn fail(check: Check, expected: impl ToString, got: impl ToString) -> Failure {
    Failure { check, expected: expected.to_string(), got: got.to_string() }
}

fn names<T: ToString>(xs: &[T]) -> String {
    let v: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", v.join(", "))
}

/// Runs the instance-level checks on one consistent instance.
pub fn check_instance(inst: &Instance, checks: &[Check]) -> Vec<Failure> {
    let mut out = Vec::new();
    let weyl = WeylGroup::new(inst.levi.clone());
    let sigma = &inst.sigma;
    let wants = |c: Check| checks.contains(&c);
    let cf = match r_group_closed_form(&weyl, sigma) {
        Ok(g) => g,
        Err(e) => return vec![fail(Check::RGroupEquivalence, "closed form", e)],
    };
    if wants(Check::RGroupEquivalence) || wants(Check::SignChanges) {
        match r_group_bruteforce(&weyl, sigma) {
            Err(e) => out.push(fail(Check::RGroupEquivalence, "brute force", e)),
            Ok(bf) => {
                if wants(Check::RGroupEquivalence) && bf.elements != cf.elements {
                    out.push(fail(Check::RGroupEquivalence, names(&bf.elements), names(&cf.elements)));
                }
                if wants(Check::SignChanges) {
                    out.extend(sign_change_failures(&weyl, &bf));
                }
            }
        }
    }
    if wants(Check::Splitting) {
        match splitting_section(sigma, &cf).and_then(|s| is_homomorphism(&weyl, &s)) {
            Ok(true) => {}
            Ok(false) => out.push(fail(Check::Splitting, "homomorphism", "cocycle")),
            Err(e) => out.push(fail(Check::Splitting, "section", e)),
        }
    }
    if wants(Check::Elliptic) || wants(Check::SignTable) {
        match classify_elliptic(&weyl, sigma, &cf) {
            Err(e) => out.push(fail(Check::Elliptic, "report", e)),
            Ok(rep) => {
                if wants(Check::Elliptic) {
                    if rep.has_elliptic != rep.closed_form_has_elliptic {
                        out.push(fail(Check::Elliptic, rep.closed_form_has_elliptic, rep.has_elliptic));
                    }
                    if rep.irreducibly_induced_from_elliptic != rep.closed_form_irreducibly_induced {
                        out.push(fail(
                            Check::Elliptic,
                            format!("irreducibly induced {}", rep.closed_form_irreducibly_induced),
                            rep.irreducibly_induced_from_elliptic,
                        ));
                    }
                    let w0 = weyl.sign_change(BlockSet::full(weyl.r())).ok().filter(|w| cf.contains(w));
                    if let Some(w0) = w0 {
                        match fixed_space(&weyl, &w0) {
                            Ok(a) if a == rep.a_r => {}
                            Ok(a) => out.push(fail(Check::Elliptic, format!("a_R = a_{w0}"), format!("dim {}", a.dim()))),
                            Err(e) => out.push(fail(Check::Elliptic, "fixed space", e)),
                        }
                    }
                }
                if wants(Check::SignTable) && rep.has_elliptic {
                    out.extend(sign_table_failures(&weyl, inst, &cf));
                }
            }
        }
    }
    out
}

fn sign_change_failures(weyl: &WeylGroup, bf: &RGroup) -> Vec<Failure> {
    let mut out = Vec::new();
    if let Some(w) = bf.elements.iter().find(|w| !w.has_trivial_perm()) {
        out.push(fail(Check::SignChanges, "trivial permutation part", w));
    }
    let d = bf.rank();
    if bf.elements.len() != 1 << d {
        out.push(fail(Check::SignChanges, format!("order 2^{d}"), bf.elements.len()));
    }
    for a in &bf.elements {
        for b in &bf.elements {
            let (Ok(ab), Ok(ba)) = (weyl.multiply(a, b), weyl.multiply(b, a)) else {
                out.push(fail(Check::SignChanges, "product", "error"));
                return out;
            };
            if ab != ba || !bf.contains(&ab) {
                out.push(fail(Check::SignChanges, "closed and commutative", format!("{a}·{b} = {ab}")));
                return out;
            }
        }
        if !weyl.multiply(a, a).is_ok_and(|x| x.is_identity()) {
            out.push(fail(Check::SignChanges, "involution", a));
            return out;
        }
    }
    out
}

fn sign_table_failures(weyl: &WeylGroup, inst: &Instance, cf: &RGroup) -> Vec<Failure> {
    let mut out = Vec::new();
    let table = match sign_characters(weyl, &inst.sigma, cf) {
        Ok(t) => t,
        Err(e) => return vec![fail(Check::SignTable, "table", e)],
    };
    let d = cf.rank();
    if table.characters.len() != 1 << d {
        out.push(fail(Check::SignTable, format!("{} characters", 1 << d), table.characters.len()));
    }
    let positive = if d == 0 { 1 } else { 1 << (d - 1) };
    if table.positive_count() != positive {
        out.push(fail(Check::SignTable, format!("{positive} with ε = +1"), table.positive_count()));
    }
    match table.characters.first() {
        Some(t) if t.epsilon == 1 && t.values.iter().all(|&v| v == 1) => {}
        _ => out.push(fail(Check::SignTable, "ε(1) = +1", "trivial character missing or negative")),
    }
    let counts = gspin_core::elliptic::omega_counts(weyl, &inst.sigma);
    let with_cn = inst.levi.family() == Family::D && counts.d2 % 2 == 1 && inst.sigma.cn_fixes_tau;
    if table.c0.cn_flag() != with_cn || table.c0.flips() != BlockSet::full(weyl.r()) {
        out.push(fail(Check::SignTable, format!("C_0 with c_n: {with_cn}"), &table.c0));
    }
    if c0(weyl, &inst.sigma).ok().as_ref() != Some(&table.c0) {
        out.push(fail(Check::SignTable, "C_0 as computed directly", &table.c0));
    }
    if !cf.contains(&table.c0) {
        out.push(fail(Check::SignTable, "C_0 ∈ R(σ)", &table.c0));
    }
    out
}

/// Siegel parameter instances of `GSpin_{2n}`: every cuspidal shape, `a = 1`.
pub fn siegel_param_instances() -> Vec<Instance> {
    RHO_KINDS
        .iter()
        .enumerate()
        .filter_map(|(k, &(dim, selfdual, b))| {
            let rho = CuspParam { id: format!("rho{}", k + 1), dim, selfdual, b, dual: None };
            instance_from_params(Family::D, vec![SegmentParam::new(rho, 1)], TauParam::default()).ok()
        })
        .filter(|inst| validate(inst).is_empty())
        .collect()
}

/// Knapp–Stein against Arthur for a consistent parameter instance.
pub fn check_match(inst: &Instance) -> Vec<Failure> {
    let Some(p) = &inst.params else {
        return vec![fail(Check::Match, "parameter data", "none")];
    };
    match inst.levi.family() {
        Family::B => match match_check(&inst.levi, &p.blocks, &p.tau) {
            Ok(true) => Vec::new(),
            Ok(false) => vec![fail(Check::Match, "match", "mismatch")],
            Err(e) => vec![fail(Check::Match, "match", e)],
        },
        Family::D => {
            let weyl = WeylGroup::new(inst.levi.clone());
            let ks = r_group_closed_form(&weyl, &inst.sigma);
            let table = siegel_r_group(&p.blocks[0].rho, Family::D, inst.levi.n());
            match (ks, table) {
                (Ok(ks), Ok(t)) if ks.rank() == t.rank() => Vec::new(),
                (Ok(ks), Ok(t)) => vec![fail(Check::Match, format!("Z_2^{}", t.rank()), format!("Z_2^{}", ks.rank()))],
                (Err(e), _) | (_, Err(e)) => vec![fail(Check::Match, "match", e)],
            }
        }
    }
}

/// Per-kind mutation statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KindStats {
    pub total: usize,
    /// Mutants that `validate` rejects.
    pub rejected: usize,
    pub consistent: usize,
    /// Consistent mutants whose two sides still match.
    pub still_matching: usize,
    pub knapp_stein_changed: usize,
    pub arthur_changed: usize,
    /// Consistent mutants where neither side moved.
    pub unchanged: usize,
    /// Consistent mutants that flip the rank-one reducibility of the block.
    pub reducibility_flipped: usize,
    /// Flips hidden by a later block carrying the same class.
    pub masked: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MutationSummary {
    pub bases: usize,
    pub by_kind: BTreeMap<String, KindStats>,
    pub failures: Vec<String>,
}

impl MutationSummary {
    fn merge(&mut self, other: MutationSummary) {
        self.bases += other.bases;
        for (k, s) in other.by_kind {
            let e = self.by_kind.entry(k).or_default();
            e.total += s.total;
            e.rejected += s.rejected;
            e.consistent += s.consistent;
            e.still_matching += s.still_matching;
            e.knapp_stein_changed += s.knapp_stein_changed;
            e.arthur_changed += s.arthur_changed;
            e.unchanged += s.unchanged;
            e.reducibility_flipped += s.reducibility_flipped;
            e.masked += s.masked;
        }
        self.failures.extend(other.failures);
    }
}

fn kind_name(k: MutationKind) -> &'static str {
    match k {
        MutationKind::JordToggle => "jord-membership",
        MutationKind::AParity => "a-parity",
        MutationKind::SelfDualType => "selfdual-type",
    }
}

fn arthur_signature(a: &ArthurRGroup) -> (usize, Vec<Option<gspin_core::WeylElement>>) {
    (a.order(), a.representatives.clone())
}

/// Mutates every reducibility-relevant bit of a type B parameter instance.
/// Consistent mutants must still match; a mutant that flips the rank-one
/// reducibility of a block that carries the last occurrence of its class
/// must move at least one side, and a Jord toggle
/// must move the Knapp–Stein side; pairing the original R(σ) with the mutated Arthur
/// group must be detected as a mismatch exactly when R(σ) changed order
/// and accepted when R(σ) is unchanged.
pub fn mutation_outcome(inst: &Instance, max_a: usize) -> MutationSummary {
    let mut out = MutationSummary { bases: 1, ..Default::default() };
    let Some(params) = &inst.params else {
        out.failures.push("base instance without parameters".into());
        return out;
    };
    let weyl = WeylGroup::new(inst.levi.clone());
    let base = (|| {
        let ks = r_group_closed_form(&weyl, &inst.sigma)?;
        let a = arthur_r_group_general(&inst.levi, &params.blocks, &params.tau)?;
        Ok::<_, gspin_core::Error>((ks, a))
    })();
    let (ks0, a0) = match base {
        Ok(x) => x,
        Err(e) => {
            out.failures.push(format!("base instance: {e}"));
            return out;
        }
    };
    for m in param_mutations(params, max_a) {
        let stats = out.by_kind.entry(kind_name(m.kind).into()).or_default();
        stats.total += 1;
        let mutant = match instance_from_params(Family::B, m.blocks.clone(), m.tau.clone()) {
            Ok(i) if validate(&i).is_empty() => i,
            _ => {
                stats.rejected += 1;
                continue;
            }
        };
        stats.consistent += 1;
        let mw = WeylGroup::new(mutant.levi.clone());
        let sides = (|| {
            let ks = r_group_closed_form(&mw, &mutant.sigma)?;
            let a = arthur_r_group_general(&mutant.levi, &m.blocks, &m.tau)?;
            Ok::<_, gspin_core::Error>((ks, a))
        })();
        let (ks1, a1) = match sides {
            Ok(x) => x,
            Err(e) => {
                out.failures.push(format!("{} on block {}: {e}", kind_name(m.kind), m.block + 1));
                continue;
            }
        };
        if rgroups_match(&ks1, &a1) {
            stats.still_matching += 1;
        } else {
            out.failures.push(format!("{} on block {}: mutant does not match", kind_name(m.kind), m.block + 1));
        }
        let red = |i: &Instance| i.sigma.is_reducible(i.sigma.assign[m.block]);
        let flipped = red(inst) != red(&mutant);
        let visible = inst.sigma.is_last_occurrence(m.block) && mutant.sigma.is_last_occurrence(m.block);
        stats.reducibility_flipped += flipped as usize;
        stats.masked += (flipped && !visible) as usize;
        let ks_changed = ks1.elements != ks0.elements;
        let a_changed = arthur_signature(&a1) != arthur_signature(&a0);
        stats.knapp_stein_changed += ks_changed as usize;
        stats.arthur_changed += a_changed as usize;
        stats.unchanged += (!ks_changed && !a_changed) as usize;
        if flipped && visible && !ks_changed && !a_changed {
            out.failures.push(format!("{} on block {}: reducibility flipped but neither side moved", kind_name(m.kind), m.block + 1));
        }
        if m.kind == MutationKind::JordToggle && !ks_changed {
            out.failures.push(format!("Jord toggle on block {} left R(σ) unchanged", m.block + 1));
        }
        let cross = rgroups_match(&ks0, &a1);
        if ks0.elements.len() != a1.order() && cross {
            out.failures.push(format!("{} on block {}: order change not detected", kind_name(m.kind), m.block + 1));
        }
        if !ks_changed && !cross {
            out.failures.push(format!("{} on block {}: unchanged R(σ) rejected", kind_name(m.kind), m.block + 1));
        }
    }
    out
}

/// Mutation sweep over every type B parameter instance within the bounds.
pub fn mutation_sweep(instances: &[Instance], max_a: usize) -> MutationSummary {
    let parts: Vec<MutationSummary> = instances.par_iter().map(|i| mutation_outcome(i, max_a)).collect();
    let mut total = MutationSummary::default();
    for p in parts {
        total.merge(p);
    }
    total
}

enum Item {
    Plain(Instance),
    Params(Instance),
}

impl Item {
    fn instance(&self) -> &Instance {
        match self {
            Item::Plain(i) | Item::Params(i) => i,
        }
    }
}

fn collect_items(cfg: &SweepConfig) -> Result<Vec<Item>, CliError> {
    let mut items = Vec::new();
    let plain = cfg.checks.iter().any(|c| !c.on_params());
    let params = cfg.checks.iter().any(|c| c.on_params());
    for &family in &cfg.families {
        if plain {
            items.extend(enumerate_instances(family, cfg.max_r, cfg.max_block, cfg.alphabet)?.into_iter().map(Item::Plain));
        }
        if params {
            let stream = match family {
                Family::B => enumerate_param_instances(cfg.max_r, cfg.max_a, cfg.max_rho, cfg.max_jordan)?,
                Family::D => siegel_param_instances(),
            };
            items.extend(stream.into_iter().map(Item::Params));
        }
    }
    Ok(items)
}

fn select(items: Vec<Item>, cfg: &SweepConfig) -> Vec<Item> {
    let Some(count) = cfg.count else {
        return items;
    };
    match cfg.seed {
        None => items.into_iter().take(count).collect(),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = rand::seq::index::sample(&mut rng, items.len(), count.min(items.len())).into_vec();
            picked.sort_unstable();
            let mut slots: Vec<Option<Item>> = items.into_iter().map(Some).collect();
            picked.into_iter().filter_map(|k| slots[k].take()).collect()
        }
    }
}

fn check_bounds(cfg: &SweepConfig) -> Result<(), CliError> {
    let mut errs = Vec::new();
    if cfg.max_r == 0 || cfg.max_r > MAX_ENUM_R {
        errs.push(format!("--max-r must lie in 1..={MAX_ENUM_R}"));
    }
    if cfg.max_block == 0 {
        errs.push("--max-block must be at least 1".into());
    }
    if cfg.alphabet == 0 {
        errs.push("--alphabet must be at least 1".into());
    }
    if cfg.max_a == 0 {
        errs.push("--max-a must be at least 1".into());
    }
    if cfg.families.is_empty() {
        errs.push("no family selected".into());
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invalid(errs))
    }
}

/// Outcome for one instance: rejected by `validate`, or the failures.
fn run_item(item: &Item, cfg: &SweepConfig) -> Option<Vec<Failure>> {
    let inst = item.instance();
    if !validate(inst).is_empty() {
        return None;
    }
    Some(match item {
        Item::Plain(i) => check_instance(i, &cfg.checks),
        Item::Params(i) => {
            let mut f = Vec::new();
            if cfg.checks.contains(&Check::Match) {
                f.extend(check_match(i));
            }
            if cfg.checks.contains(&Check::Mutation) && i.levi.family() == Family::B {
                f.extend(mutation_outcome(i, cfg.max_a).failures.into_iter().map(|m| fail(Check::Mutation, "pass", m)));
            }
            f
        }
    })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReportDto, CliError> {
    check_bounds(cfg)?;
    let start = Instant::now();
    let items = if cfg.count == Some(0) { Vec::new() } else { select(collect_items(cfg)?, cfg) };
    let work = || items.par_iter().map(|it| run_item(it, cfg)).collect::<Vec<_>>();
    let results = if cfg.threads == 0 {
        work()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| CliError::Invalid(vec![format!("thread pool: {e}")]))?;
        pool.install(work)
    };
    let mut rejected = 0;
    let mut failures = Vec::new();
    for (index, (item, res)) in items.iter().zip(results).enumerate() {
        match res {
            None => rejected += 1,
            Some(fs) => failures.extend(fs.into_iter().map(|f| FailureDto {
                index,
                instance: Some(InstanceFile::from_instance(item.instance())),
                check: f.check.name().into(),
                expected: f.expected,
                got: f.got,
            })),
        }
    }
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    Ok(SweepReportDto {
        schema_version: SCHEMA_VERSION.into(),
        families: cfg.families.iter().map(|&f| f.into()).collect(),
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        seed: cfg.seed,
        total: items.len(),
        rejected,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
