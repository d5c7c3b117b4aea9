//! Consolidation: decide for each objective whether some combination of
//! harvested occurrences satisfies one of its disjuncts.

use std::collections::BTreeSet;

use crate::coverage::harvest::OccurrenceLog;
use crate::dnf::Dnf;
use crate::minilang::ast::{Expr, Program};
use crate::trace::{holds, Env, EvalCtx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Covered {
        /// Ids of the tests whose occurrences satisfied the disjunct.
        witnesses: Vec<String>,
    },
    Uncovered,
    /// The combination budget ran out before a satisfying combination was
    /// found or ruled out.
    UnknownBudget,
}

impl Verdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, Verdict::Covered { .. })
    }
}

pub const DEFAULT_COMBINATION_BUDGET: u64 = 1_000_000;

/// Checks one objective. `atom_ids[d]` maps the atoms of `dnf.disjuncts[d]`
/// into the occurrence log. Combinations are enumerated lazily per
/// disjunct; each guard evaluation spends one unit of `budget`.
pub fn consolidate(
    p: &Program,
    dnf: &Dnf,
    atom_ids: &[Vec<usize>],
    log: &OccurrenceLog,
    budget: u64,
) -> Verdict {
    let mut left = budget;
    let mut exhausted = false;
    for (d, ids) in dnf.disjuncts.iter().zip(atom_ids) {
        match check_disjunct(p, &d.guard, ids, log, &mut left) {
            DisjunctOutcome::Satisfied(witnesses) => return Verdict::Covered { witnesses },
            DisjunctOutcome::Unsatisfied => {}
            DisjunctOutcome::BudgetExhausted => exhausted = true,
        }
    }
    if exhausted {
        Verdict::UnknownBudget
    } else {
        Verdict::Uncovered
    }
}

enum DisjunctOutcome {
    Satisfied(Vec<String>),
    Unsatisfied,
    BudgetExhausted,
}

fn check_disjunct(
    p: &Program,
    guard: &Expr,
    atom_ids: &[usize],
    log: &OccurrenceLog,
    budget: &mut u64,
) -> DisjunctOutcome {
    if atom_ids.iter().any(|&i| log.occurrences(i).is_empty()) {
        return DisjunctOutcome::Unsatisfied;
    }
    // lazy cartesian product in lexicographic order; the atoms of one
    // disjunct bind disjoint names, so environments merge by union
    let lists: Vec<_> = atom_ids.iter().map(|&i| log.occurrences(i)).collect();
    let mut idx = vec![0usize; lists.len()];
    loop {
        if *budget == 0 {
            return DisjunctOutcome::BudgetExhausted;
        }
        *budget -= 1;
        let combo: Vec<_> = lists.iter().zip(&idx).map(|(l, &i)| &l[i]).collect();
        let mut env = Env::new();
        for occ in &combo {
            env.extend(occ.env.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        let ctx = EvalCtx {
            state: None,
            env: Some(&env),
            pc: None,
        };
        if holds(p, guard, &ctx) {
            let witnesses: BTreeSet<String> =
                combo.iter().map(|occ| occ.test_id.clone()).collect();
            return DisjunctOutcome::Satisfied(witnesses.into_iter().collect());
        }
        // advance the rightmost counter
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return DisjunctOutcome::Unsatisfied;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
