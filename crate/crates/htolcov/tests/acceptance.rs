//! Acceptance gate. Each test checks one pinned criterion and prints a
//! single `acceptance: <name>: PASS|FAIL` line; run with `--nocapture`
//! to see all of them. Tolerances live next to each check.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::{Mutex, MutexGuard, PoisonError};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use htolcov::bench::run_bench;
use htolcov::coverage::{check_hyperlabel, oracle_covers, Verdict};
use htolcov::criteria::{annotate, CriterionId, Objective};
use htolcov::dnf::{normalize_dnf, to_hyperlabel, DEFAULT_DISJUNCT_CAP};
use htolcov::htl::parse_htl;
use htolcov::minilang::ast::{BinOp, Block, Expr, Program, Stmt, UnOp};
use htolcov::minilang::parse_program;
use htolcov::pipeline::{measure, MeasureConfig, MeasureItem};
use htolcov::trace::{execute_suite, parse_suite, TestDatum};

use common::{gen_hyperlabel, gen_names, gen_program, gen_suite};

const STEP_LIMIT: usize = 10_000;
const BUDGET: u64 = 500_000;

/// The timed criteria need the machine to themselves, so the acceptance
/// tests run one at a time even when the harness uses multiple threads.
static GATE: Mutex<()> = Mutex::new(());

fn exclusive() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(PoisonError::into_inner)
}

fn report(name: &str, failures: &[String]) {
    let pass = failures.is_empty();
    println!("acceptance: {name}: {}", if pass { "PASS" } else { "FAIL" });
    for f in failures {
        println!("  {f}");
    }
    assert!(pass, "acceptance criterion `{name}` failed ({} issues)", failures.len());
}

fn pipeline_covers(p: &Program, h: &htolcov::htl::Hyperlabel, tests: &[TestDatum]) -> Option<bool> {
    match check_hyperlabel(p, h, tests, STEP_LIMIT, BUDGET).unwrap() {
        Verdict::Covered { .. } => Some(true),
        Verdict::Uncovered => Some(false),
        Verdict::UnknownBudget => None,
    }
}

/// Criterion 1: on 1000 random instances small enough for the
/// brute-force oracle, the pipeline and the oracle agree exactly.
#[test]
fn oracle_equivalence_on_random_instances() {
    let _lock = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut failures = Vec::new();
    let start = Instant::now();
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 1000 && attempts < 5000 {
        attempts += 1;
        let p = gen_program(&mut rng);
        let names = gen_names(&mut rng);
        let h = gen_hyperlabel(&mut rng, &p, &names, 3);
        let suite = gen_suite(&mut rng, 4);
        let runs = execute_suite(&p, &suite, STEP_LIMIT).unwrap();
        let oracle = match oracle_covers(&p, &h, &runs, &BTreeMap::new()) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let Some(covered) = pipeline_covers(&p, &h, &suite) else {
            continue;
        };
        if covered != oracle {
            failures.push(format!(
                "instance {attempts}: pipeline says {covered}, oracle says {oracle}\nprogram:\n{}\nhyperlabel: {}",
                htolcov::minilang::print_program(&p),
                htolcov::htl::print_hyperlabel(&h),
            ));
            if failures.len() >= 3 {
                break;
            }
        }
        checked += 1;
    }
    if checked < 1000 {
        failures.push(format!("only {checked} decidable instances out of {attempts} attempts"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 300.0 {
        failures.push(format!("took {elapsed:.0}s, tolerance is 300s"));
    }
    report("oracle equivalence, 1000 random instances", &failures);
}

/// Criterion 2: normalization preserves coverage; the oracle agrees on
/// the original and the normal form for 1000 random instances.
#[test]
fn dnf_preserves_oracle_verdicts() {
    let _lock = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 1000 && attempts < 5000 {
        attempts += 1;
        let p = gen_program(&mut rng);
        let names = gen_names(&mut rng);
        let h = gen_hyperlabel(&mut rng, &p, &names, 3);
        let suite = gen_suite(&mut rng, 4);
        let runs = execute_suite(&p, &suite, STEP_LIMIT).unwrap();
        let flat = to_hyperlabel(&normalize_dnf(&h, DEFAULT_DISJUNCT_CAP).unwrap());
        let a = oracle_covers(&p, &h, &runs, &BTreeMap::new());
        let b = oracle_covers(&p, &flat, &runs, &BTreeMap::new());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    failures.push(format!(
                        "instance {attempts}: original {a}, normal form {b}: {}",
                        htolcov::htl::print_hyperlabel(&h)
                    ));
                    if failures.len() >= 3 {
                        break;
                    }
                }
                checked += 1;
            }
            _ => continue,
        }
    }
    if checked < 1000 {
        failures.push(format!("only {checked} decidable instances out of {attempts} attempts"));
    }
    report("normalization preserves oracle verdicts, 1000 instances", &failures);
}

/// Criterion 3: the bundled example objectives keep their hand-derived
/// verdicts, in under 10 seconds.
#[test]
fn bundled_examples_match_golden_verdicts_quickly() {
    let _lock = exclusive();
    let start = Instant::now();
    let mut failures = Vec::new();
    let golden: [(&str, &[(&str, bool)]); 2] = [
        (
            "lowres",
            &[
                ("then_taken", true),
                ("upper_out_of_range", true),
                ("then_taken_low", true),
                ("both_branches", true),
                ("any_branch", true),
                ("same_low_diff_res", false),
                ("loop_twice", true),
                ("then_skips_loop", true),
            ],
        ),
        (
            "cells",
            &[("first_write_read", false), ("second_write_read", true)],
        ),
    ];
    for (stem, expected) in golden {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs/examples");
        let read = |ext: &str| std::fs::read_to_string(dir.join(format!("{stem}.{ext}"))).unwrap();
        let p = parse_program(&read("imp")).unwrap();
        let tests = parse_suite(&read("suite")).unwrap().tests;
        let defs = parse_htl(&read("htl"), &p).unwrap();
        for d in defs {
            let Some(&(_, want)) = expected.iter().find(|(n, _)| *n == d.name) else {
                failures.push(format!("{stem}:{} has no golden verdict", d.name));
                continue;
            };
            match pipeline_covers(&p, &d.hl, &tests) {
                Some(got) if got == want => {}
                other => failures.push(format!(
                    "{stem}:{}: expected covered={want}, got {other:?}",
                    d.name
                )),
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 10.0 {
        failures.push(format!("took {elapsed:.1}s, tolerance is 10s"));
    }
    report("bundled examples match golden verdicts", &failures);
}

/// Independent recount of decision shapes, used by the count laws.
fn decision_cond_counts(p: &Program) -> Vec<usize> {
    fn conds(e: &Expr) -> usize {
        match e {
            Expr::Bin(BinOp::And | BinOp::Or, l, r) => conds(l) + conds(r),
            Expr::Un(UnOp::Not, inner) => conds(inner),
            _ => 1,
        }
    }
    fn walk(b: &Block, out: &mut Vec<usize>) {
        for s in &b.stmts {
            match s {
                Stmt::If {
                    cond,
                    then_blk,
                    else_blk,
                    ..
                } => {
                    out.push(conds(cond));
                    walk(then_blk, out);
                    walk(else_blk, out);
                }
                Stmt::While { cond, body, .. } => {
                    out.push(conds(cond));
                    walk(body, out);
                }
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    for f in &p.functions {
        walk(&f.body, &mut out);
    }
    out
}

/// Criterion 4: objective counts follow the criterion definitions on 100
/// random programs.
#[test]
fn objective_counts_follow_the_laws() {
    let _lock = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let mut failures = Vec::new();
    for i in 0..100 {
        let p = gen_program(&mut rng);
        let ns = decision_cond_counts(&p);
        let d: usize = ns.len();
        let n_sum: usize = ns.iter().sum();
        let pow_sum: usize = ns.iter().map(|n| 1usize << n).sum();
        let count = |c: CriterionId| annotate(&p, c).unwrap().len();
        let laws = [
            (CriterionId::Mcc, pow_sum),
            (CriterionId::Cc, 2 * n_sum),
            (CriterionId::Gacc, 2 * n_sum),
            (CriterionId::Dc, 2 * d),
            (CriterionId::Dcc, 2 * n_sum + 2 * d),
            (CriterionId::Cacc, n_sum),
            (CriterionId::Racc, n_sum),
        ];
        for (c, want) in laws {
            let got = count(c);
            if got != want {
                failures.push(format!("program {i}: {c} produced {got} objectives, law says {want}"));
            }
        }
    }
    report("objective counts follow the count laws", &failures);
}

fn covered_ids(p: &Program, objs: &[Objective], tests: &[TestDatum]) -> BTreeSet<String> {
    let items: Vec<MeasureItem> = objs.iter().cloned().map(Into::into).collect();
    let cfg = MeasureConfig {
        step_limit: STEP_LIMIT,
        budget: BUDGET,
        ..MeasureConfig::default()
    };
    let rep = measure(p, &items, tests, &cfg).unwrap();
    assert_eq!(rep.unknown(), 0, "budget exhausted during subsumption check");
    rep.rows
        .iter()
        .filter(|r| r.verdict.is_covered())
        .map(|r| r.id.clone())
        .collect()
}

/// Criterion 5: on 200 random program/suite pairs, covering the
/// restricted active-clause objective of a condition implies covering its
/// correlated active-clause objective and both of its general
/// active-clause objectives; full multiple-condition coverage of a
/// decision implies full condition coverage of it.
#[test]
fn active_clause_and_mcc_subsumption() {
    let _lock = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
    let mut failures = Vec::new();
    for i in 0..200 {
        let p = gen_program(&mut rng);
        let suite = gen_suite(&mut rng, 5);
        let racc = annotate(&p, CriterionId::Racc).unwrap();
        let cacc = annotate(&p, CriterionId::Cacc).unwrap();
        let gacc = annotate(&p, CriterionId::Gacc).unwrap();
        let mcc = annotate(&p, CriterionId::Mcc).unwrap();
        let cc = annotate(&p, CriterionId::Cc).unwrap();
        let all: Vec<Objective> = [&racc[..], &cacc[..], &gacc[..], &mcc[..], &cc[..]].concat();
        let ok = covered_ids(&p, &all, &suite);
        for r in &racc {
            if !ok.contains(&r.id) {
                continue;
            }
            let key = (r.decision_loc, r.condition_idx);
            for c in cacc.iter().filter(|o| (o.decision_loc, o.condition_idx) == key) {
                if !ok.contains(&c.id) {
                    failures.push(format!("program {i}: {} covered but {} is not", r.id, c.id));
                }
            }
            for g in gacc.iter().filter(|o| (o.decision_loc, o.condition_idx) == key) {
                if !ok.contains(&g.id) {
                    failures.push(format!("program {i}: {} covered but {} is not", r.id, g.id));
                }
            }
        }
        let mcc_locs: BTreeSet<_> = mcc.iter().map(|o| o.decision_loc).collect();
        for loc in mcc_locs {
            if mcc
                .iter()
                .filter(|o| o.decision_loc == loc)
                .all(|o| ok.contains(&o.id))
            {
                for c in cc.iter().filter(|o| o.decision_loc == loc) {
                    if !ok.contains(&c.id) {
                        failures.push(format!(
                            "program {i}: all combinations at {loc:?} covered but {} is not",
                            c.id
                        ));
                    }
                }
            }
        }
        if failures.len() >= 5 {
            break;
        }
    }
    report("active-clause and combination subsumption, 200 programs", &failures);
}

/// Criterion 6: on the five bundled programs, measurement time grows
/// linearly in suite size (r2 at least 0.95) and stays within a constant
/// factor of serially executing the suite at every size: 4x for the
/// sequence-heavy dataflow criterion, 2.5x for decision coverage.
#[test]
fn measurement_scales_linearly_with_bounded_overhead() {
    let _lock = exclusive();
    let start = Instant::now();
    let mut failures = Vec::new();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs/bench");
    // sizes start past the parallel ramp-up so the fit sees the
    // steady-state per-test cost
    let sizes = [2000, 4000, 6000, 8000, 10000];
    let cfg = MeasureConfig {
        step_limit: STEP_LIMIT,
        ..MeasureConfig::default()
    };
    for stem in ["triangle", "gcd", "bubble", "power", "clamp"] {
        let src = std::fs::read_to_string(dir.join(format!("{stem}.imp"))).unwrap();
        let p = parse_program(&src).unwrap();
        for (c, max_overhead) in [(CriterionId::AllDefs, 4.0), (CriterionId::Dc, 2.5)] {
            let items: Vec<MeasureItem> = annotate(&p, c)
                .unwrap()
                .into_iter()
                .map(Into::into)
                .collect();
            // one re-measurement absorbs background load spikes; a real
            // nonlinearity or overhead blowup fails both attempts
            let mut pair = Vec::new();
            for attempt in 0..2 {
                pair.clear();
                let series = run_bench(&p, c.name(), &items, &sizes, 7, 7, &cfg).unwrap();
                let fit = series.fit();
                if fit.r2 < 0.95 {
                    pair.push(format!("{stem}/{c}: r2 {:.3} below 0.95", fit.r2));
                }
                for pt in &series.points {
                    if pt.overhead() > max_overhead {
                        pair.push(format!(
                            "{stem}/{c}: overhead {:.2}x at {} tests, tolerance {max_overhead}x",
                            pt.overhead(),
                            pt.size
                        ));
                    }
                }
                if pair.is_empty() {
                    break;
                }
                if attempt == 0 {
                    println!("  retrying {stem}/{c}: {}", pair.join("; "));
                }
            }
            failures.append(&mut pair);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 900.0 {
        failures.push(format!("took {elapsed:.0}s, tolerance is 900s"));
    }
    report("linear scaling with bounded overhead, 5 programs", &failures);
}

/// Criterion 7: growing a suite never uncovers an objective, checked on
/// 500 random trials.
#[test]
fn coverage_is_monotone_in_the_suite() {
    let _lock = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB1E);
    let mut failures = Vec::new();
    let mut trials = 0;
    let mut attempts = 0;
    while trials < 500 && attempts < 2000 {
        attempts += 1;
        let p = gen_program(&mut rng);
        let names = gen_names(&mut rng);
        let h = gen_hyperlabel(&mut rng, &p, &names, 2);
        let suite = gen_suite(&mut rng, 6);
        let (Some(small), Some(large)) = (
            pipeline_covers(&p, &h, &suite[..3]),
            pipeline_covers(&p, &h, &suite),
        ) else {
            continue;
        };
        if small && !large {
            failures.push(format!(
                "trial {attempts}: covered by 3 tests but not by a superset of 6: {}",
                htolcov::htl::print_hyperlabel(&h)
            ));
            if failures.len() >= 3 {
                break;
            }
        }
        trials += 1;
    }
    if trials < 500 {
        failures.push(format!("only {trials} decidable trials out of {attempts} attempts"));
    }
    report("coverage monotone under suite growth, 500 trials", &failures);
}
