//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from oracles written here, not from the
//! code under test.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gspin::report::{arthur_report, elliptic_report, load, rgroup_report};
use gspin::schema::{ArthurReportDto, EllipticReportDto, RGroupReport};
use gspin::sweep::{check_instance, check_match, mutation_sweep, siegel_param_instances, Check};
use gspin_core::elliptic::{fixed_space, sign_characters};
use gspin_core::inertia::{r_group_bruteforce, r_group_closed_form, regime, Regime};
use gspin_core::instance::{enumerate_instances, enumerate_levis, enumerate_param_instances, validate, Instance};
use gspin_core::lparam::{
    derive_inertia, siegel_centralizer, siegel_r_group, siegel_reducibility, ComponentGroup, CuspParam,
    ReducibilityPoint, SegmentParam, SelfDualType, TauParam,
};
use gspin_core::{BlockSet, Family, LeviSpec, Rational, WeylElement, WeylGroup};

/// Budget for criterion 1 (single-threaded sweep).
const SWEEP_BUDGET: Duration = Duration::from_secs(120);
/// Budget for criterion 7 (parameter sweep plus mutations).
const MATCH_BUDGET: Duration = Duration::from_secs(300);
/// Sweep bounds of criteria 1 to 5.
const MAX_R: usize = 4;
const MAX_BLOCK: usize = 2;
const ALPHABET: usize = 4;
/// Bound of the a_{C_B} dimension check.
const DIM_MAX_R: usize = 5;
/// Parameter sweep bounds of criterion 7.
const P_MAX_R: usize = 3;
const P_MAX_A: usize = 3;
const P_MAX_RHO: usize = 3;
const P_MAX_JORDAN: usize = 2;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tail(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!(": {}", bad.join("; "))
    }
}

fn sweep_instances() -> Vec<Instance> {
    let mut all = enumerate_instances(Family::B, MAX_R, MAX_BLOCK, ALPHABET).expect("B sweep");
    all.extend(enumerate_instances(Family::D, MAX_R, MAX_BLOCK, ALPHABET).expect("D sweep"));
    all
}

/// Runs one check over the sweep sequentially; returns the number of
/// failing instances and the first failure.
fn sweep_check(instances: &[Instance], check: Check) -> (usize, Option<String>) {
    let mut bad = 0;
    let mut first = None;
    for inst in instances {
        let f = check_instance(inst, &[check]);
        if !f.is_empty() {
            bad += 1;
            first.get_or_insert_with(|| format!("{inst:?}: {:?}", f[0]));
        }
    }
    (bad, first)
}

fn criterion_1(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let mut regimes: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bad = 0;
    for inst in instances {
        let w = WeylGroup::new(inst.levi.clone());
        let key = match regime(&inst.levi, &inst.sigma) {
            Regime::TypeB => "B",
            Regime::TypeDSplit => "D split",
            Regime::TypeDFixed => "D fixed",
        };
        *regimes.entry(key).or_default() += 1;
        let ok = match (r_group_bruteforce(&w, &inst.sigma), r_group_closed_form(&w, &inst.sigma)) {
            (Ok(bf), Ok(cf)) => bf.elements == cf.elements,
            _ => false,
        };
        bad += !ok as usize;
    }
    let elapsed = start.elapsed();
    let pass = bad == 0 && regimes.len() == 3 && elapsed < SWEEP_BUDGET && !instances.iter().any(|i| !validate(i).is_empty());
    outcome(
        pass,
        format!("{} instances {:?}, {bad} mismatches, {:.1}s single-threaded", instances.len(), regimes, elapsed.as_secs_f64()),
    )
}

fn criterion_2(instances: &[Instance]) -> Outcome {
    let (bad, first) = sweep_check(instances, Check::SignChanges);
    outcome(bad == 0, format!("{bad} failing instances{}", first.map(|f| format!(", first {f}")).unwrap_or_default()))
}

fn criterion_3(instances: &[Instance]) -> Outcome {
    let (bad, first) = sweep_check(instances, Check::Splitting);
    outcome(bad == 0, format!("{bad} failing instances{}", first.map(|f| format!(", first {f}")).unwrap_or_default()))
}

/// Rank over Q by elimination, independent of the library kernel code.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != Rational::from_integer(0)) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != Rational::from_integer(0) {
                let f = rows[r][c] / rows[rank][c];
                for k in 0..ncols {
                    let v = rows[rank][k];
                    rows[r][k] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_4(instances: &[Instance]) -> Outcome {
    let (bad, first) = sweep_check(instances, Check::Elliptic);
    let mut dims_checked = 0;
    let mut dim_bad = Vec::new();
    for family in [Family::B, Family::D] {
        for levi in enumerate_levis(family, DIM_MAX_R, 2).expect("levis") {
            let w = WeylGroup::new(levi.clone());
            let r = levi.r();
            for bits in 0..(1u64 << r) {
                let set = BlockSet::from_bits(bits);
                // in GSpin_{2n} with m = 0 only an even number of odd blocks can flip
                let Ok(c) = w.sign_change(set) else { continue };
                let m = w.matrix(&c).expect("matrix");
                let shifted: Vec<Vec<Rational>> = m
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, &x)| if i == j { x - Rational::from_integer(1) } else { x })
                            .collect()
                    })
                    .collect();
                let oracle = r + 1 - rank(shifted);
                let got = fixed_space(&w, &c).expect("fixed space").dim();
                let expected = r + 1 - set.len();
                dims_checked += 1;
                if got != expected || oracle != expected {
                    dim_bad.push(format!("{levi:?} B = {bits:b}: expected {expected}, oracle {oracle}, got {got}"));
                }
            }
        }
    }
    let elliptic = instances
        .iter()
        .filter(|i| {
            let w = WeylGroup::new(i.levi.clone());
            let g = r_group_closed_form(&w, &i.sigma).unwrap();
            gspin_core::elliptic::classify_elliptic(&w, &i.sigma, &g).unwrap().has_elliptic
        })
        .count();
    outcome(
        bad == 0 && dim_bad.is_empty() && elliptic > 0,
        format!(
            "{bad} verdict mismatches, {elliptic} elliptic instances, {dims_checked} sign changes with dim a_(C_B) = r+1-|B| checked, {} wrong{}",
            dim_bad.len(),
            first.or(dim_bad.first().cloned()).map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

/// Coordinates of every element of `<gens>` by brute-force products.
fn coordinates(w: &WeylGroup, gens: &[WeylElement]) -> BTreeMap<WeylElement, Vec<bool>> {
    let mut out = BTreeMap::new();
    for mask in 0..(1usize << gens.len()) {
        let mut x = w.identity();
        let mut coeffs = vec![false; gens.len()];
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                x = w.multiply(&x, g).unwrap();
                coeffs[k] = true;
            }
        }
        out.insert(x, coeffs);
    }
    out
}

fn criterion_5(instances: &[Instance]) -> Outcome {
    let mut checked = 0;
    let mut with_cn = 0;
    let mut bad = Vec::new();
    for inst in instances {
        let w = WeylGroup::new(inst.levi.clone());
        let g = r_group_closed_form(&w, &inst.sigma).unwrap();
        let rep = gspin_core::elliptic::classify_elliptic(&w, &inst.sigma, &g).unwrap();
        if !rep.has_elliptic {
            continue;
        }
        checked += 1;
        let t = match sign_characters(&w, &inst.sigma, &g) {
            Ok(t) => t,
            Err(e) => {
                bad.push(format!("{inst:?}: {e}"));
                continue;
            }
        };
        let d = g.rank();
        let odd_blocks = inst.levi.blocks().iter().filter(|&&k| k % 2 == 1).count();
        let expect_cn = inst.levi.family() == Family::D && odd_blocks % 2 == 1 && inst.sigma.cn_fixes_tau;
        with_cn += expect_cn as usize;
        let coords = coordinates(&w, &t.generators);
        let c0_coords = coords.get(&t.c0).cloned();
        // κ_S(C_0) = (-1)^{|S ∩ coords(C_0)|}: exactly half the characters are positive unless C_0 = 1.
        let positive = match &c0_coords {
            Some(c) if c.iter().any(|&b| b) => 1usize << (d - 1),
            Some(_) => 1usize << d,
            None => 0,
        };
        let trivial_ok = t.characters.first().is_some_and(|c| c.epsilon == 1 && c.values.iter().all(|&v| v == 1));
        let ok = t.characters.len() == 1 << d
            && t.positive_count() == positive
            && positive == 1 << (d - 1)
            && trivial_ok
            && c0_coords.as_ref() == Some(&t.coefficients)
            && t.c0.flips() == BlockSet::full(inst.levi.r())
            && t.c0.cn_flag() == expect_cn;
        if !ok {
            bad.push(format!("{inst:?}: C_0 = {}, {} positive", t.c0, t.positive_count()));
        }
    }
    outcome(
        bad.is_empty() && checked > 0 && with_cn > 0,
        format!(
            "{checked} elliptic instances, {with_cn} with C_0 carrying c_n, {} wrong{}",
            bad.len(),
            bad.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

fn cusp(id: &str, dim: usize, selfdual: SelfDualType, b: Option<ReducibilityPoint>) -> CuspParam {
    CuspParam { id: id.into(), dim, selfdual, b, dual: None }
}

fn criterion_6() -> Outcome {
    use ComponentGroup::{Trivial, Z2};
    let symp = cusp("s", 2, SelfDualType::Symplectic, Some(ReducibilityPoint::One));
    let orth_even = cusp("o", 2, SelfDualType::Orthogonal, Some(ReducibilityPoint::Half));
    let orth_odd = cusp("o3", 3, SelfDualType::Orthogonal, Some(ReducibilityPoint::Half));
    let none = cusp("p", 2, SelfDualType::None, None);
    // (family, φ_0, expected R_{φ,σ})
    let cells = [
        ("B/GSp", Family::B, &symp, Z2),
        ("B/GO-even", Family::B, &orth_even, Trivial),
        ("B/GO-odd", Family::B, &orth_odd, Trivial),
        ("D/GSp", Family::D, &symp, Trivial),
        ("D/GO-even", Family::D, &orth_even, Z2),
        ("D/GO-odd", Family::D, &orth_odd, Trivial),
        ("B/none", Family::B, &none, Trivial),
        ("D/none", Family::D, &none, Trivial),
    ];
    let mut bad = Vec::new();
    for (name, family, rho, expected) in cells {
        let n = rho.dim;
        let table = siegel_r_group(rho, family, n).ok();
        let mu_c = siegel_centralizer(rho, family, n).ok().map(|c| c.component_group);
        // the Knapp–Stein side of the same Siegel datum
        let levi = LeviSpec::from_partition(family, vec![n], 0).unwrap();
        let ks = derive_inertia(&levi, &[SegmentParam::new(rho.clone(), 1)], &TauParam::default())
            .ok()
            .and_then(|s| r_group_closed_form(&WeylGroup::new(levi), &s).ok())
            .map(|g| g.rank());
        if table != Some(expected) || mu_c != Some(expected) || ks != Some(expected.rank()) {
            bad.push(format!("{name}: table {table:?}, µc {mu_c:?}, Knapp–Stein rank {ks:?}"));
        }
    }
    outcome(bad.is_empty(), format!("{} cells, {} wrong{}", cells.len(), bad.len(), tail(&bad)))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let base = enumerate_param_instances(P_MAX_R, P_MAX_A, P_MAX_RHO, P_MAX_JORDAN).expect("parameter sweep");
    let inconsistent = base.iter().filter(|i| !validate(i).is_empty()).count();
    let mismatched: Vec<&Instance> = base.iter().filter(|i| !check_match(i).is_empty()).collect();
    let siegel_d = siegel_param_instances();
    let siegel_bad = siegel_d.iter().filter(|i| !check_match(i).is_empty()).count();
    let summary = mutation_sweep(&base, P_MAX_A);
    let elapsed = start.elapsed();
    let kinds: Vec<String> = summary
        .by_kind
        .iter()
        .map(|(k, s)| {
            format!(
                "{k}: {} mutants, {} rejected, {} consistent ({} still match, {} flip reducibility, {} of them masked by a later equal block, {} moved R(σ), {} moved R_φ,σ, {} moved neither)",
                s.total,
                s.rejected,
                s.consistent,
                s.still_matching,
                s.reducibility_flipped,
                s.masked,
                s.knapp_stein_changed,
                s.arthur_changed,
                s.unchanged
            )
        })
        .collect();
    let jord_moved = summary.by_kind.get("jord-membership").is_some_and(|s| s.consistent > 0 && s.knapp_stein_changed == s.consistent);
    let pass = inconsistent == 0
        && mismatched.is_empty()
        && siegel_bad == 0
        && summary.failures.is_empty()
        && jord_moved
        && summary.by_kind.len() == 3
        && elapsed < MATCH_BUDGET;
    outcome(
        pass,
        format!(
            "{} parameter instances, {} mismatches, {} Siegel D instances ({siegel_bad} mismatches), {} mutation failures; {}; {:.1}s{}",
            base.len(),
            mismatched.len(),
            siegel_d.len(),
            summary.failures.len(),
            kinds.join("; "),
            elapsed.as_secs_f64(),
            summary.failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=12 {
        for (selfdual, b) in
            [(SelfDualType::Orthogonal, ReducibilityPoint::Half), (SelfDualType::Symplectic, ReducibilityPoint::One)]
        {
            let rho = cusp("r", n, selfdual, Some(b));
            let vb = siegel_reducibility(&rho, Family::B);
            let vd = siegel_reducibility(&rho, Family::D);
            checked += 1;
            let ok = if n % 2 == 0 {
                matches!((&vb, &vd), (Ok(x), Ok(y)) if x.reducible != y.reducible)
            } else if selfdual == SelfDualType::Orthogonal {
                matches!((&vb, &vd), (Ok(x), Ok(y)) if !x.reducible && !y.reducible)
            } else {
                // an odd-dimensional self-dual ρ is orthogonal, so this datum is rejected
                vb.is_err() && vd.is_err()
            };
            if !ok {
                bad.push(format!("n = {n}, {selfdual:?}: B {vb:?}, D {vd:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} cuspidal data, {} wrong{}", bad.len(), tail(&bad)))
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap_or_default()
}

fn run(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gspin")).args(args).output().expect("binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let examples = [
        ("rgroup", "rgroup_rank_one", "R(σ) ≅ Z_2^1, generators: C_1"),
        ("elliptic", "elliptic_b_rank_two", "witness      C_1C_2"),
        ("arthur", "arthur_siegel_b", "S_φ = GO_{1,1}, R_{φ,σ} ≅ Z_2, match: yes"),
    ];
    for (cmd, stem, line) in examples {
        let file = data(&format!("{stem}.json"));
        let (code, table) = run(&[cmd, &file]);
        if code != Some(0) || table != golden(&format!("{stem}.txt")) || !table.contains(line) {
            bad.push(format!("{cmd} {stem}: table output differs from golden"));
        }
        let (code, json) = run(&[cmd, &file, "--format", "json"]);
        if code != Some(0) || json != golden(&format!("{stem}.json")) {
            bad.push(format!("{cmd} {stem}: json output differs from golden"));
        }
        let inst = load(&std::fs::read_to_string(&file).unwrap()).unwrap();
        let round_trips = match cmd {
            "rgroup" => serde_json::from_str::<RGroupReport>(&json).ok() == rgroup_report(&inst, false).ok(),
            "elliptic" => serde_json::from_str::<EllipticReportDto>(&json).ok() == elliptic_report(&inst).ok(),
            _ => serde_json::from_str::<ArthurReportDto>(&json).ok() == arthur_report(&inst).ok(),
        };
        if !round_trips {
            bad.push(format!("{cmd} {stem}: json does not round-trip"));
        }
    }
    let matrix: [(&[&str], i32); 7] = [
        (&["rgroup", &data("rgroup_rank_one.json"), "--oracle"], 0),
        (&["rgroup", &data("corrupt.json")], 2),
        (&["validate", &data("corrupt.json")], 2),
        (&["arthur", &data("rgroup_rank_one.json")], 2),
        (&["arthur", &data("arthur_d_rank_two.json")], 4),
        (&["sweep", "--count", "0"], 0),
        (&["sweep", "--max-r", "6"], 2),
    ];
    for (args, code) in matrix {
        if run(args).0 != Some(code) {
            bad.push(format!("{args:?} did not exit with {code}"));
        }
    }
    outcome(bad.is_empty(), format!("3 goldens, {} exit codes, {} problems{}", matrix.len(), bad.len(), tail(&bad)))
}

fn main() {
    let instances = sweep_instances();
    let criteria: [Criterion; 9] = [
        ("R-group closed form equals the stabilizer definition", Box::new(|| criterion_1(&instances))),
        ("R(σ) consists of sign changes and is elementary abelian", Box::new(|| criterion_2(&instances))),
        ("normalized operators split the cocycle", Box::new(|| criterion_3(&instances))),
        ("fixed-space ellipticity equals the closed form", Box::new(|| criterion_4(&instances))),
        ("sign characters", Box::new(|| criterion_5(&instances))),
        ("Siegel table", Box::new(criterion_6)),
        ("parameter-side matching and mutations", Box::new(criterion_7)),
        ("Siegel reducibility duality", Box::new(criterion_8)),
        ("CLI contract", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += !o.pass as usize;
        println!("criterion {} {}: {} ({})", k + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
