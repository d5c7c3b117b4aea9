//! Coverage measurement: normalize objectives, harvest occurrences from
//! the suite's runs, consolidate occurrences into verdicts. A separate
//! brute-force oracle double-checks the pipeline on small instances.

mod consolidate;
mod harvest;
mod oracle;

pub use consolidate::{consolidate, Verdict, DEFAULT_COMBINATION_BUDGET};
pub use harvest::{
    harvest_run, harvest_run_reusing, harvest_suite, match_label, match_sequence, AtomIndex,
    HarvestPlan, HarvestScratch, Occurrence, OccurrenceLog,
};
pub use oracle::{oracle_covers, OracleError};

use crate::dnf::{normalize_dnf, DnfError, DEFAULT_DISJUNCT_CAP};
use crate::htl::Hyperlabel;
use crate::minilang::ast::Program;
use crate::trace::{InputError, TestDatum, DEFAULT_STEP_LIMIT};

#[derive(Debug, thiserror::Error)]
pub enum CoverageError {
    #[error(transparent)]
    Dnf(#[from] DnfError),
    #[error(transparent)]
    Input(#[from] InputError),
}

/// Runs the three measurement phases for a single objective.
pub fn check_hyperlabel(
    p: &Program,
    h: &Hyperlabel,
    tests: &[TestDatum],
    step_limit: usize,
    budget: u64,
) -> Result<Verdict, CoverageError> {
    let dnf = normalize_dnf(h, DEFAULT_DISJUNCT_CAP)?;
    let mut atoms = AtomIndex::new();
    let atom_ids = atoms.intern_dnf(&dnf);
    let log = harvest_suite(p, &atoms, tests, step_limit, true)?;
    Ok(consolidate(p, &dnf, &atom_ids, &log, budget))
}

/// [`check_hyperlabel`] with default limits.
pub fn covers(
    p: &Program,
    h: &Hyperlabel,
    tests: &[TestDatum],
) -> Result<bool, CoverageError> {
    Ok(
        check_hyperlabel(p, h, tests, DEFAULT_STEP_LIMIT, DEFAULT_COMBINATION_BUDGET)?
            .is_covered(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::dnf::{normalize_dnf, DEFAULT_DISJUNCT_CAP};
    use crate::htl::parse_hyperlabel;
    use crate::minilang::parser::parse_program;
    use crate::trace::{execute_suite, TestDatum};
    use crate::value::Value;

    fn ints(id: &str, pairs: &[(&str, i64)]) -> TestDatum {
        TestDatum::new(
            id,
            pairs.iter().map(|&(k, v)| (k, Value::Int(v))).collect(),
        )
    }

    fn oracle(p: &crate::minilang::ast::Program, h: &crate::htl::Hyperlabel, tests: &[TestDatum]) -> bool {
        let runs = execute_suite(p, tests, DEFAULT_STEP_LIMIT).unwrap();
        oracle_covers(p, h, &runs, &BTreeMap::new()).unwrap()
    }

    const BRANCHY: &str = "int f(int x, int y, int a, int b) {
        if (x == y && a < b) { x := 1; } else { x := 0; }
        return x;
    }";

    #[test]
    fn conjunction_needs_both_branches_possibly_from_different_tests() {
        let p = parse_program(BRANCHY).unwrap();
        // locs: 1 cond, 2 then, 3 else, 4 return
        let (h, _) = parse_hyperlabel("l(loc2, true) . l(loc3, true)", &p).unwrap();
        let both = vec![
            ints("t1", &[("x", 1), ("y", 1), ("a", 0), ("b", 1)]),
            ints("t2", &[("x", 2), ("y", 1), ("a", 0), ("b", 1)]),
        ];
        let then_only = vec![both[0].clone()];
        assert!(covers(&p, &h, &both).unwrap());
        assert!(!covers(&p, &h, &then_only).unwrap());
        assert!(oracle(&p, &h, &both));
        assert!(!oracle(&p, &h, &then_only));
        let (disj, _) = parse_hyperlabel("l(loc2, true) + l(loc3, true)", &p).unwrap();
        assert!(covers(&p, &disj, &then_only).unwrap());
        assert!(oracle(&p, &disj, &then_only));
    }

    #[test]
    fn guard_relates_bindings_across_tests() {
        // covered exactly when two tests share `low` but differ in `res`
        let p = parse_program(
            "int f(int low, int up){ int res := low + up; return res; }",
        )
        .unwrap();
        let (h, _) = parse_hyperlabel(
            "guard( l(loc1, true){lo <- low; r <- res}
                  . l(loc1, true){lo' <- low; r' <- res} )
             with (lo == lo' && r != r')",
            &p,
        )
        .unwrap();
        let good = vec![
            ints("t1", &[("low", 2), ("up", 1)]),
            ints("t2", &[("low", 2), ("up", 5)]),
        ];
        let same_res = vec![
            ints("t1", &[("low", 2), ("up", 1)]),
            ints("t2", &[("low", 2), ("up", 1)]),
        ];
        let diff_low = vec![
            ints("t1", &[("low", 2), ("up", 1)]),
            ints("t2", &[("low", 3), ("up", 5)]),
        ];
        assert!(covers(&p, &h, &good).unwrap());
        assert!(!covers(&p, &h, &same_res).unwrap());
        assert!(!covers(&p, &h, &diff_low).unwrap());
        assert!(oracle(&p, &h, &good));
        assert!(!oracle(&p, &h, &same_res));
        assert!(!oracle(&p, &h, &diff_low));
    }

    #[test]
    fn sequence_with_interference_predicate_on_array_cells() {
        // def of a[i] reaches the use a[k] unless a[j] redefines the cell
        let p = parse_program(
            "int foo(int i, int j, int k) {
                int[3] a;
                a[i] := 7;
                a[j] := 8;
                return a[k];
            }",
        )
        .unwrap();
        // locs: 1 decl, 2 def a[i], 3 def a[j], 4 use a[k]
        let (h, _) = parse_hyperlabel(
            "guard([ l(loc2, true){v1 <- i} ->(pc == loc3 => j != v1) l(loc4, true){v2 <- k} ])
             with (v1 == v2)",
            &p,
        )
        .unwrap();
        let clean = vec![ints("t1", &[("i", 2), ("j", 1), ("k", 2)])];
        let clobbered = vec![ints("t1", &[("i", 2), ("j", 2), ("k", 2)])];
        assert!(covers(&p, &h, &clean).unwrap());
        assert!(!covers(&p, &h, &clobbered).unwrap());
        assert!(oracle(&p, &h, &clean));
        assert!(!oracle(&p, &h, &clobbered));
    }

    #[test]
    fn sequences_match_within_a_single_run_only() {
        let p = parse_program(BRANCHY).unwrap();
        let (h, _) = parse_hyperlabel("[ l(loc2, true) -> l(loc3, true) ]", &p).unwrap();
        // each branch taken once, but never both in one run
        let suite = vec![
            ints("t1", &[("x", 1), ("y", 1), ("a", 0), ("b", 1)]),
            ints("t2", &[("x", 2), ("y", 1), ("a", 0), ("b", 1)]),
        ];
        assert!(!covers(&p, &h, &suite).unwrap());
        assert!(!oracle(&p, &h, &suite));
    }

    #[test]
    fn deduplication_does_not_change_verdicts() {
        let p = parse_program(
            "int f(int n){ int i := 0; while (i < n) { i := i + 1; } return i % 3; }",
        )
        .unwrap();
        let (h, _) = parse_hyperlabel(
            "guard( l(loc3, true){v <- i % 3} . l(loc3, true){w <- i % 3} ) with (v != w)",
            &p,
        )
        .unwrap();
        let suite = vec![ints("t1", &[("n", 20)])];
        let dnf = normalize_dnf(&h, DEFAULT_DISJUNCT_CAP).unwrap();
        let mut verdicts = Vec::new();
        for dedup in [true, false] {
            let mut atoms = AtomIndex::new();
            let ids = atoms.intern_dnf(&dnf);
            let log = harvest_suite(&p, &atoms, &suite, DEFAULT_STEP_LIMIT, dedup).unwrap();
            verdicts.push(consolidate(&p, &dnf, &ids, &log, DEFAULT_COMBINATION_BUDGET));
        }
        assert!(verdicts[0].is_covered());
        assert_eq!(verdicts[0].is_covered(), verdicts[1].is_covered());
        // the deduplicated log is also the smaller one
        let mut atoms = AtomIndex::new();
        let ids = atoms.intern_dnf(&dnf);
        let small = harvest_suite(&p, &atoms, &suite, DEFAULT_STEP_LIMIT, true).unwrap();
        let large = harvest_suite(&p, &atoms, &suite, DEFAULT_STEP_LIMIT, false).unwrap();
        let _ = ids;
        assert!(small.total() < large.total());
    }

    #[test]
    fn exhausted_budget_reports_unknown() {
        let p = parse_program(
            "int f(int n){ int i := 0; while (i < n) { i := i + 1; } return i; }",
        )
        .unwrap();
        let (h, _) = parse_hyperlabel(
            "guard( l(loc3, true){v <- i} . l(loc3, true){w <- i} ) with (v + w == 0 - 1)",
            &p,
        )
        .unwrap();
        let suite = vec![ints("t1", &[("n", 50)])];
        let v = check_hyperlabel(&p, &h, &suite, DEFAULT_STEP_LIMIT, 10).unwrap();
        assert_eq!(v, Verdict::UnknownBudget);
        let full = check_hyperlabel(&p, &h, &suite, DEFAULT_STEP_LIMIT, 1_000_000).unwrap();
        assert_eq!(full, Verdict::Uncovered);
    }

    #[test]
    fn covered_verdicts_carry_witness_tests() {
        let p = parse_program(BRANCHY).unwrap();
        let (h, _) = parse_hyperlabel("l(loc2, true) . l(loc3, true)", &p).unwrap();
        let suite = vec![
            ints("t1", &[("x", 2), ("y", 1), ("a", 0), ("b", 1)]),
            ints("t2", &[("x", 1), ("y", 1), ("a", 0), ("b", 1)]),
        ];
        match check_hyperlabel(&p, &h, &suite, DEFAULT_STEP_LIMIT, 1_000).unwrap() {
            Verdict::Covered { witnesses } => assert_eq!(witnesses, vec!["t1", "t2"]),
            other => panic!("expected covered, got {other:?}"),
        }
    }

    #[test]
    fn oracle_refuses_oversized_instances() {
        let p = parse_program("int f(int n){ int i := 0; while (i < n) { i := i + 1; } return i; }")
            .unwrap();
        let (h, _) = parse_hyperlabel("l(loc1, true)", &p).unwrap();
        let runs = execute_suite(&p, &[ints("t", &[("n", 200)])], DEFAULT_STEP_LIMIT).unwrap();
        assert!(matches!(
            oracle_covers(&p, &h, &runs, &BTreeMap::new()),
            Err(OracleError::RunTooLong(_))
        ));
        let (wide, _) = parse_hyperlabel(
            "l(loc1, true){m1 <- i; m2 <- i + 1; m3 <- i + 2; m4 <- i + 3; m5 <- i + 4; m6 <- i + 5; m7 <- i + 6}",
            &p,
        )
        .unwrap();
        let small = execute_suite(&p, &[ints("t", &[("n", 1)])], DEFAULT_STEP_LIMIT).unwrap();
        assert!(matches!(
            oracle_covers(&p, &wide, &small, &BTreeMap::new()),
            Err(OracleError::TooManyMetavars(7))
        ));
    }
}
