use std::fs;
use std::path::Path;

use galois_scaffold::hopf::{
    hopf_from_params, hopf_from_tower, hopf_report, validate_m, HopfError, HopfParams,
};
use galois_scaffold::io::{HopfParamsFile, ProfileFile, TowerReport, TowerSpecFile};
use galois_scaffold::numeric::{
    abrashkin_verdict, biquadratic_verdict, check_assumptions, different_and_trace, martel_verdict,
    tolerance, weak_ideal_verdict, AbsRamification, RamProfile, ToleranceFamily, Verdict,
};
use galois_scaffold::scaffold::{Scaffold, ScaffoldError, Tolerance};
use galois_scaffold::tower::{Tower, TowerError};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{sweep, Cli, Command, Failure, Family, Mode};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze { input } => analyze(cli, input),
        Command::Build { input } => build(cli, input),
        Command::Scaffold {
            input,
            mode,
            tolerance,
        } => scaffold(cli, input, *mode, *tolerance),
        Command::Freeness {
            family,
            p,
            n,
            b1,
            b2,
            h,
            u,
            v0p,
        } => freeness(cli, *family, *p, *n, *b1, *b2, *h, *u, v0p),
        Command::Hopf { input, strict } => hopf(cli, input, *strict),
        Command::Sweep { .. } => sweep::run(cli),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn emit_text(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes `{"criteria": [...], "report": ...}` and prints the summary line.
fn emit(
    cli: &Cli,
    criteria: &[&str],
    report: &impl Serialize,
    summary: &str,
) -> Result<(), Failure> {
    let doc = json!({ "criteria": criteria, "report": report });
    let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    text.push('\n');
    emit_text(cli, &text)?;
    if cli.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn check(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(what.to_string()))
    }
}

fn parse_v0p(s: &str) -> Result<AbsRamification, Failure> {
    match s {
        "inf" | "infinity" => Ok(AbsRamification::Infinite),
        _ => match s.parse::<i64>() {
            Ok(v) if v > 0 => Ok(AbsRamification::Finite(v)),
            _ => Err(Failure::Input(format!(
                "v0p must be a positive integer or inf, got {s}"
            ))),
        },
    }
}

fn tower_error(e: TowerError) -> Failure {
    match e {
        TowerError::PrecisionInsufficient(m) => {
            Failure::Check(format!("precision insufficient: {m}"))
        }
        other => Failure::Input(other.to_string()),
    }
}

fn scaffold_error(e: ScaffoldError) -> Failure {
    match e {
        ScaffoldError::PrecisionInsufficient(m) => {
            Failure::Check(format!("precision insufficient: {m}"))
        }
        ScaffoldError::Tower(t) => tower_error(t),
        other => Failure::Input(other.to_string()),
    }
}

fn load_tower(path: &Path) -> Result<Tower, Failure> {
    let spec = TowerSpecFile::parse(&read(path)?)?.to_spec()?;
    Tower::build(spec).map_err(tower_error)
}

fn applicable_tolerances(profile: &RamProfile) -> Vec<ToleranceFamily> {
    let (p, n, v0p) = (profile.p, profile.n, profile.v0p);
    let b = &profile.lower;
    let mut out = vec![ToleranceFamily::ElementaryAbelian {
        profile: profile.clone(),
    }];
    if n == 1 {
        out.push(ToleranceFamily::DegreeP { p, v0p, u: b[0] });
    }
    if p == 2 && n == 2 {
        out.push(ToleranceFamily::Biquadratic {
            b1: b[0],
            b2: b[1],
            v0p,
        });
    }
    if b.iter().all(|&x| x == 1) {
        out.push(ToleranceFamily::WeaklyRamified { p, n, v0p });
    }
    if b.iter().all(|&x| x == b[0]) {
        out.push(ToleranceFamily::Abrashkin { p, n, u: b[0], v0p });
    }
    out
}

fn analyze(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let file = ProfileFile::parse(&read(input)?)?;
    let profile = file.to_profile()?;
    let mut criteria = vec!["break-conversion", "assumption-table"];
    let mut tolerances = Vec::new();
    for fam in applicable_tolerances(&profile) {
        // a family whose preconditions fail is simply not listed
        if let Ok(r) = tolerance(&fam) {
            criteria.push(fam.id());
            tolerances.push(r);
        }
    }
    let tol = match (file.tolerance, profile.v0p) {
        (Some(t), _) => Tolerance::Finite(t),
        (None, AbsRamification::Infinite) => Tolerance::Infinite,
        (None, AbsRamification::Finite(_)) => {
            tolerances[0].tolerance.unwrap_or(Tolerance::Finite(1))
        }
    };
    let assumptions = check_assumptions(&profile, file.eps_valuations.as_deref(), tol);

    let (p, n, v0p, b) = (profile.p, profile.n, profile.v0p, &profile.lower);
    let h = file.h.unwrap_or(0);
    let mut verdicts: Vec<Verdict> = Vec::new();
    if p == 2 && n == 2 {
        verdicts.extend(martel_verdict(b[0], b[1], v0p).ok());
        verdicts.extend(biquadratic_verdict(b[0], b[1], h, v0p).ok());
    }
    if b.iter().all(|&x| x == 1) {
        verdicts.extend(weak_ideal_verdict(p, n, h, v0p).ok());
    }
    if b.iter().all(|&x| x == b[0]) {
        verdicts.extend(abrashkin_verdict(p, n, b[0], v0p).ok());
    }
    for v in &verdicts {
        criteria.push(v.reason.split(':').next().unwrap_or_default());
    }
    criteria.push("hilbert-different");
    let different = (0..n)
        .map(|j| different_and_trace(p, b, j, 0))
        .collect::<Result<Vec<_>, _>>()?;
    let report = json!({
        "profile": profile,
        "tolerance_used": tol,
        "assumptions": assumptions,
        "tolerances": tolerances,
        "verdicts": verdicts,
        "different": different,
    });
    let ok = assumptions.a1 && assumptions.a2 && assumptions.a4 && assumptions.a6;
    let summary = format!(
        "analyze: lower {:?} upper {:?} tolerance {} assumptions {}",
        profile.lower,
        profile.upper,
        tol,
        if ok { "hold" } else { "fail" }
    );
    emit(cli, &criteria, &report, &summary)?;
    check(ok, "assumptions A1, A2, A4 or A6")
}

fn build(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let tower = load_tower(input)?;
    let report = TowerReport::from_tower(&tower).map_err(tower_error)?;
    let ok = report.passed();
    let summary = format!(
        "build: lower {:?} upper {:?} bruteforce {:?} checks {}",
        report.breaks_lower,
        report.breaks_upper,
        report.bruteforce_breaks,
        if ok { "pass" } else { "fail" }
    );
    emit(
        cli,
        &[
            "artin-schreier-breaks",
            "omega-valuations",
            "bruteforce-ramification",
        ],
        &report,
        &summary,
    )?;
    check(ok, "tower checks")
}

fn scaffold(cli: &Cli, input: &Path, mode: Mode, tol: Option<i64>) -> Result<(), Failure> {
    let tower = load_tower(input)?;
    let s = Scaffold::build(&tower).map_err(scaffold_error)?;
    let (report, id) = match mode {
        Mode::Exact => (
            s.verify_exact().map_err(scaffold_error)?,
            "scaffold-exact-identity",
        ),
        Mode::Tolerance => {
            let t = tol.map_or(Tolerance::Infinite, Tolerance::Finite);
            (
                s.verify_tolerance(t).map_err(scaffold_error)?,
                "scaffold-tolerance-congruence",
            )
        }
    };
    let summary = format!(
        "scaffold: {} of {} cases failed, certified margin {}",
        report.cases_failed, report.cases_total, report.certified_margin
    );
    emit(cli, &[id], &report, &summary)?;
    check(report.passed(), "scaffold identities")
}

#[allow(clippy::too_many_arguments)]
fn freeness(
    cli: &Cli,
    family: Family,
    p: u64,
    n: usize,
    b1: Option<i64>,
    b2: Option<i64>,
    h: i64,
    u: Option<i64>,
    v0p: &str,
) -> Result<(), Failure> {
    let v0p = parse_v0p(v0p)?;
    let need = |x: Option<i64>, name: &str| {
        x.ok_or_else(|| Failure::Input(format!("--{name} is required")))
    };
    let verdict = match family {
        Family::Martel => martel_verdict(need(b1, "b1")?, need(b2, "b2")?, v0p)?,
        Family::Biquadratic => biquadratic_verdict(need(b1, "b1")?, need(b2, "b2")?, h, v0p)?,
        Family::WeakIdeal => weak_ideal_verdict(p, n, h, v0p)?,
        Family::Abrashkin => abrashkin_verdict(p, n, need(u, "u")?, v0p)?,
    };
    let id = verdict
        .reason
        .split(':')
        .next()
        .unwrap_or_default()
        .to_string();
    let summary = format!("freeness: {:?} ({})", verdict.status, verdict.reason);
    emit(cli, &[id.as_str()], &verdict, &summary)
}

#[derive(Serialize)]
struct HopfCliReport {
    #[serde(rename = "M")]
    m: Vec<i64>,
    derived_b: Vec<i64>,
    constraints: Value,
    generators: Vec<String>,
    mu: Value,
    intertwining: Option<bool>,
    verification: Option<Value>,
}

fn hopf(cli: &Cli, input: &Path, strict: Option<bool>) -> Result<(), Failure> {
    let text = read(input)?;
    let raw: Value = serde_json::from_str(&text)?;
    let criteria = ["hopf-parameter-constraints", "hopf-associated-order"];
    if raw.get("M").is_some() {
        let mut params = HopfParamsFile::parse(&text)?.to_params();
        params.strict = strict.unwrap_or(params.strict);
        let validation = validate_m(&params);
        let generators = match hopf_from_params(&params) {
            Ok(d) => d.generators.into_iter().map(|g| g.symbolic).collect(),
            Err(_) => Vec::new(),
        };
        let report = HopfCliReport {
            m: params.m.clone(),
            derived_b: validation.derived_b.clone(),
            constraints: serde_json::to_value(&validation)?,
            generators,
            mu: serde_json::to_value(&validation.mu_valuations)?,
            intertwining: None,
            verification: None,
        };
        let summary = format!(
            "hopf: M {:?} constraints {}",
            params.m,
            if validation.valid { "hold" } else { "fail" }
        );
        emit(cli, &criteria, &report, &summary)?;
        return check(validation.valid, "Hopf parameter constraints");
    }

    let strict = strict.unwrap_or(true);
    let tower = load_tower(input)?;
    let p = tower.p() as i64;
    let pn = p.pow(tower.n() as u32);
    let m: Vec<i64> = (1..=tower.n())
        .map(|i| (tower.lower_breaks()[i - 1] + 1) / p.pow(i as u32))
        .collect();
    let mut params = HopfParams::new(p as u64, AbsRamification::Infinite, m.clone());
    params.strict = strict;
    let validation = validate_m(&params);
    let desc = match hopf_from_tower(&tower, strict) {
        Ok(d) => d,
        Err(HopfError::NotMinusOneResidue { index, b }) => {
            return Err(Failure::Input(format!(
                "b_{index} = {b} is not -1 mod {pn}"
            )))
        }
        Err(HopfError::ValidationFailed(_)) => {
            let report = HopfCliReport {
                m,
                derived_b: validation.derived_b.clone(),
                constraints: serde_json::to_value(&validation)?,
                generators: Vec::new(),
                mu: Value::Null,
                intertwining: None,
                verification: None,
            };
            emit(cli, &criteria, &report, "hopf: constraints fail")?;
            return Err(Failure::Check("Hopf parameter constraints".into()));
        }
        Err(e) => return Err(Failure::Input(e.to_string())),
    };
    let module = match hopf_report(&tower, &desc) {
        Ok(r) => r,
        Err(HopfError::Scaffold(e)) => return Err(scaffold_error(e)),
        Err(HopfError::Tower(e)) => return Err(tower_error(e)),
        Err(e) => return Err(Failure::Input(e.to_string())),
    };
    let mu_ok = desc.mu.iter().all(|c| c.holds());
    let ok = module.passed() && mu_ok && desc.intertwining.unwrap_or(true);
    let report = HopfCliReport {
        m: desc.params.m.clone(),
        derived_b: desc.validation.derived_b.clone(),
        constraints: serde_json::to_value(&desc.validation)?,
        generators: desc.generators.iter().map(|g| g.symbolic.clone()).collect(),
        mu: serde_json::to_value(&desc.mu)?,
        intertwining: desc.intertwining,
        verification: Some(json!({
            "stabilization": module.stabilization,
            "freeness": module.freeness,
            "witnesses": module.stabilization_witnesses,
            "products": module.products,
        })),
    };
    let summary = format!(
        "hopf: M {:?} stabilization {} freeness {}",
        desc.params.m, module.stabilization, module.freeness
    );
    emit(cli, &criteria, &report, &summary)?;
    check(ok, "Hopf order verification")
}
