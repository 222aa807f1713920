//! Human-readable tables. Every list is printed in report order so the
//! output is stable.

use std::fmt::Write;

use crate::report::r_name;
use crate::schema::*;

fn list(xs: &[String]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.join(", ")
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn index_set(ix: &[usize]) -> String {
    let inner: Vec<String> = ix.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn sign(v: i8) -> &'static str {
    if v > 0 {
        "+1"
    } else {
        "-1"
    }
}

fn vector(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

pub fn validate_table(r: &ValidateReport) -> String {
    let mut out = String::new();
    if r.valid {
        out.push_str("valid\n");
    } else {
        out.push_str("invalid\n");
        for v in &r.violations {
            let _ = writeln!(out, "  {}: {}", v.kind, v.message);
        }
    }
    out
}

pub fn rgroup_table(r: &RGroupReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group        {}", r.group);
    let _ = writeln!(out, "Levi         {}", r.levi);
    let _ = writeln!(out, "regime       {}", r.regime);
    let _ = writeln!(out, "|W_M|        {}", r.weyl_order);
    let _ = writeln!(out, "|W(σ)|       {}", r.stabilizer_order);
    let _ = writeln!(out, "Δ′           {}", list(&r.delta_prime));
    if let Some(o) = &r.omega.omega {
        let _ = writeln!(out, "Ω(σ)         {}", index_set(o));
    }
    if let (Some(o1), Some(o2)) = (&r.omega.omega1, &r.omega.omega2) {
        let _ = writeln!(out, "Ω_1(σ)       {}", index_set(o1));
        let _ = writeln!(out, "Ω_2(σ)       {}", index_set(o2));
    }
    let _ = writeln!(out, "elements     {}", r.elements.join(", "));
    let _ = writeln!(out, "R(σ) ≅ {}, generators: {}", r.isomorphism_type, list(&r.generators));
    if let Some(o) = &r.oracle {
        let verdict = if o.agrees { "agrees" } else { "DISAGREES" };
        let _ = writeln!(out, "oracle       {verdict} (brute force: {})", o.bruteforce_elements.join(", "));
    }
    out
}

pub fn elliptic_table(r: &EllipticReportDto) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group        {}", r.group);
    let _ = writeln!(out, "Levi         {}", r.levi);
    let _ = writeln!(out, "R(σ) ≅ Z_2^{}, generators: {}", r.r_group_generators.len(), list(&r.r_group_generators));
    let _ = writeln!(out, "elliptic     {}", yes(r.has_elliptic));
    let witness = r.elliptic_witness.as_deref().unwrap_or("none");
    let _ = writeln!(out, "witness      {witness}");
    let basis: Vec<String> = r.a_r_basis.iter().map(|v| vector(v)).collect();
    let _ = writeln!(out, "a_R basis    {}", list(&basis));
    let _ = writeln!(out, "irreducibly induced from elliptic: {}", yes(r.irreducibly_induced_from_elliptic));
    let inducing = r.inducing_witness.as_deref().unwrap_or("none");
    let _ = writeln!(out, "inducing witness (a_w = a_R): {inducing}");
    let c = &r.closed_form;
    let _ = writeln!(
        out,
        "closed form  d = {}, d_1 = {}, d_2 = {}: elliptic {}, irreducibly induced {}, {}",
        c.d,
        c.d1,
        c.d2,
        yes(c.has_elliptic),
        yes(c.irreducibly_induced),
        if c.agrees { "agrees" } else { "DISAGREES" }
    );
    if let Some(t) = &r.sign_table {
        let _ = writeln!(out, "C_0 = {}", t.c0);
        let _ = writeln!(out, "{}", t.relation);
        let widths: Vec<usize> = t.generators.iter().map(|g| g.chars().count() + 3).collect();
        let mut header = format!("{:<5}", "κ");
        for (g, w) in t.generators.iter().zip(&widths) {
            header.push_str(&format!("{:<w$}  ", format!("κ({g})")));
        }
        header.push_str("ε(κ)");
        let _ = writeln!(out, "{header}");
        for (k, ch) in t.characters.iter().enumerate() {
            let mut row = format!("{:<5}", format!("κ_{k}"));
            for (&v, w) in ch.values.iter().zip(&widths) {
                row.push_str(&format!("{:<w$}  ", sign(v)));
            }
            row.push_str(sign(ch.epsilon));
            let _ = writeln!(out, "{row}");
        }
    }
    out
}

pub fn arthur_table(r: &ArthurReportDto) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group        {}", r.group);
    let _ = writeln!(out, "Levi         {}", r.levi);
    for b in &r.blocks {
        let _ = writeln!(
            out,
            "block {}  type {}  Jord(τ) {}  reducible {}  centralizer {}  R_φ {}",
            b.segment,
            b.factor_type.as_deref().unwrap_or("-"),
            yes(b.in_jordan),
            yes(b.reducible),
            b.centralizer.as_deref().unwrap_or("-"),
            b.maximal_r_phi
        );
    }
    let _ = writeln!(out, "|W_φ,σ|      {}", r.w_phi_order);
    let _ = writeln!(out, "Δ_φ          {}", list(&r.delta_phi));
    let _ = writeln!(out, "W° generators {}", list(&r.w_circ_generators));
    let _ = writeln!(out, "R_φ,σ representatives {}", list(&r.representatives));
    let _ = writeln!(out, "R(σ) generators {}", list(&r.knapp_stein_generators));
    let r_phi = if r.r_phi_sigma == r_name(0) {
        "R_{φ,σ} = 1".to_string()
    } else {
        format!("R_{{φ,σ}} ≅ {}", r.r_phi_sigma)
    };
    match &r.siegel {
        Some(s) => {
            let _ = writeln!(out, "reducible    {} (pole of {})", yes(s.reducible), s.pole);
            let _ = writeln!(out, "S_φ = {}, {}, match: {}", s.centralizer, r_phi, yes(r.matches));
            let _ = writeln!(out, "µc and table {}", if s.tables_agree { "agree" } else { "DISAGREE" });
        }
        None => {
            let _ = writeln!(out, "{}, match: {}", r_phi, yes(r.matches));
        }
    }
    let _ = writeln!(out, "assumes      {}", r.assumptions.join("; "));
    out
}

pub fn sweep_table(r: &SweepReportDto) -> String {
    let mut out = String::new();
    let fams: Vec<String> = r.families.iter().map(|f| format!("{f:?}")).collect();
    let _ = writeln!(out, "families     {}", fams.join(", "));
    let _ = writeln!(out, "checks       {}", list(&r.checks));
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "seed         {seed}");
    }
    let _ = writeln!(out, "instances    {}", r.total);
    let _ = writeln!(out, "rejected     {}", r.rejected);
    let _ = writeln!(out, "failures     {}", r.failures.len());
    for f in &r.failures {
        let _ = writeln!(out, "  #{} {}: expected {}, got {}", f.index, f.check, f.expected, f.got);
    }
    let _ = writeln!(out, "elapsed      {} ms", r.elapsed_ms);
    let _ = writeln!(out, "{}", if r.failures.is_empty() { "pass" } else { "FAIL" });
    out
}
