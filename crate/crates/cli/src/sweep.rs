use std::fmt::Write as _;

use galois_scaffold::numeric::{
    biquadratic_table, biquadratic_verdict, martel_agreement, AbsRamification,
};
use galois_scaffold::scaffold::Scaffold;
use galois_scaffold::tower::random::{random_tower_spec, RandomTowerParams};
use galois_scaffold::tower::Tower;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::emit_text;
use crate::{Cli, Command, Failure, SweepFamily};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let Command::Sweep {
        family,
        v_max,
        p,
        n,
        count,
        seed,
        jobs,
    } = &cli.command
    else {
        unreachable!("dispatched on Sweep");
    };
    if *v_max < 1 {
        return Err(Failure::Input("--v-max must be positive".into()));
    }
    match family {
        SweepFamily::Biquadratic => table(cli),
        SweepFamily::BiquadraticGrid => grid(cli, *v_max),
        SweepFamily::MartelAgreement => agreement(cli, *v_max),
        SweepFamily::RandomTowers => random_towers(cli, *p, *n, *count, *seed, *jobs),
    }
}

fn table(cli: &Cli) -> Result<(), Failure> {
    let mut out = String::from("b,h,L1,L2,free\n");
    for r in biquadratic_table() {
        writeln!(out, "{},{},{},{},{}", r.b, r.h, r.l1, r.l2, r.free).expect("string write");
    }
    emit_text(cli, &out)
}

fn grid(cli: &Cli, v_max: i64) -> Result<(), Failure> {
    let mut out = String::from("b1,b2,h,v0p,verdict\n");
    let b_max = 4 * v_max + 3;
    for v in 1..=v_max {
        for b1 in (1..=b_max).step_by(2) {
            for b2 in (b1..=b_max).step_by(2) {
                for h in -3..=3 {
                    if let Ok(verdict) = biquadratic_verdict(b1, b2, h, AbsRamification::Finite(v))
                    {
                        writeln!(out, "{b1},{b2},{h},{v},{:?}", verdict.status)
                            .expect("string write");
                    }
                }
            }
        }
    }
    emit_text(cli, &out)
}

fn agreement(cli: &Cli, v_max: i64) -> Result<(), Failure> {
    let rows = martel_agreement(v_max);
    let mut out = String::from("b1,b2,v0p,martel,table,boundary_case,conflict\n");
    let mut conflicts = 0;
    for r in &rows {
        conflicts += usize::from(r.conflicts());
        writeln!(
            out,
            "{},{},{},{:?},{:?},{},{}",
            r.b1,
            r.b2,
            r.v0p,
            r.martel,
            r.table,
            r.boundary_case,
            r.conflicts()
        )
        .expect("string write");
    }
    emit_text(cli, &out)?;
    if conflicts > 0 {
        return Err(Failure::Check(format!("{conflicts} disagreements")));
    }
    Ok(())
}

struct TowerRow {
    index: u64,
    breaks: Vec<i64>,
    bruteforce_ok: bool,
    cases: usize,
    failures: usize,
    margin: String,
    error: Option<String>,
}

fn one_tower(p: u64, n: usize, seed: u64, index: u64) -> TowerRow {
    let mut row = TowerRow {
        index,
        breaks: Vec::new(),
        bruteforce_ok: false,
        cases: 0,
        failures: 0,
        margin: String::new(),
        error: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index));
    let result = (|| -> Result<(), String> {
        let spec = random_tower_spec(&mut rng, &RandomTowerParams::new(p, n))
            .map_err(|e| e.to_string())?;
        let tower = Tower::build(spec).map_err(|e| e.to_string())?;
        row.breaks = tower.lower_breaks().to_vec();
        let brute = tower
            .ramification_bruteforce(&tower.uniformizer())
            .map_err(|e| e.to_string())?;
        row.bruteforce_ok = brute == row.breaks;
        let report = Scaffold::build(&tower)
            .and_then(|s| s.verify_exact())
            .map_err(|e| e.to_string())?;
        row.cases = report.cases_total;
        row.failures = report.cases_failed;
        row.margin = report.certified_margin.to_string();
        Ok(())
    })();
    row.error = result.err();
    row
}

fn random_towers(
    cli: &Cli,
    p: u64,
    n: usize,
    count: u64,
    seed: u64,
    jobs: usize,
) -> Result<(), Failure> {
    if ![2, 3, 5, 7].contains(&p) || !(1..=4).contains(&n) {
        return Err(Failure::Input(
            "random towers need a prime p ≤ 7 and 1 ≤ n ≤ 4".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let rows: Vec<TowerRow> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|k| one_tower(p, n, seed, k))
            .collect()
    });
    let mut out = String::from("index,breaks,bruteforce_ok,cases,failures,margin,error\n");
    let mut bad = 0;
    for r in &rows {
        let breaks: Vec<String> = r.breaks.iter().map(i64::to_string).collect();
        bad += usize::from(r.error.is_some() || !r.bruteforce_ok || r.failures > 0);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.index,
            breaks.join(" "),
            r.bruteforce_ok,
            r.cases,
            r.failures,
            r.margin,
            r.error.as_deref().unwrap_or("")
        )
        .expect("string write");
    }
    emit_text(cli, &out)?;
    if bad > 0 {
        return Err(Failure::Check(format!("{bad} of {count} towers failed")));
    }
    Ok(())
}
