//! Brute-force coverage oracle. Works directly on the hyperlabel
//! structure, without normalization or occurrence logs: enumerate total
//! metavariable environments and check the satisfaction rules
//! recursively. Deliberately slow and simple; it exists to cross-check
//! the measurement pipeline on small instances.

use std::collections::{BTreeMap, HashSet};

use crate::coverage::harvest::match_label;
use crate::htl::{visible_names, Hyperlabel, Sequence};
use crate::minilang::ast::Program;
use crate::trace::{holds, Env, EvalCtx, Run};
use crate::value::Value;

const MAX_METAVARS: usize = 6;
const MAX_RUN_STEPS: usize = 200;
const MAX_ENVIRONMENTS: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle refuses {0} metavariables (limit {MAX_METAVARS})")]
    TooManyMetavars(usize),
    #[error("oracle refuses runs of {0} steps (limit {MAX_RUN_STEPS})")]
    RunTooLong(usize),
    #[error("oracle refuses {0} candidate environments (limit {MAX_ENVIRONMENTS})")]
    TooManyEnvironments(u64),
}

/// True when the runs cover `h`: some total environment over the visible
/// names satisfies `h` under the recursive rules. Candidate values per
/// name are the values its bindings take at matching steps, extended by
/// the caller-provided `domains`.
pub fn oracle_covers(
    p: &Program,
    h: &Hyperlabel,
    runs: &[Run],
    domains: &BTreeMap<String, Vec<Value>>,
) -> Result<bool, OracleError> {
    for r in runs {
        if r.steps.len() > MAX_RUN_STEPS {
            return Err(OracleError::RunTooLong(r.steps.len()));
        }
    }
    let names: Vec<String> = visible_names(h).into_iter().collect();
    if names.len() > MAX_METAVARS {
        return Err(OracleError::TooManyMetavars(names.len()));
    }

    let mut candidates: Vec<Vec<Value>> = Vec::with_capacity(names.len());
    for name in &names {
        let mut vals = observed_values(p, h, name, runs);
        if let Some(extra) = domains.get(name) {
            vals.extend(extra.iter().cloned());
        }
        let vals: Vec<Value> = dedup_values(vals);
        if vals.is_empty() {
            // every branch binds this name, so nothing can match anywhere
            return Ok(false);
        }
        candidates.push(vals);
    }

    let total: u64 = candidates
        .iter()
        .map(|c| c.len() as u64)
        .product();
    if total > MAX_ENVIRONMENTS {
        return Err(OracleError::TooManyEnvironments(total));
    }

    let mut idx = vec![0usize; names.len()];
    loop {
        let env: Env = names
            .iter()
            .enumerate()
            .map(|(j, n)| (n.clone(), candidates[j][idx[j]].clone()))
            .collect();
        if satisfies(p, h, runs, &env) {
            return Ok(true);
        }
        let mut pos = names.len();
        loop {
            if pos == 0 {
                return Ok(false);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Values bound to `name` at any matching step of any run.
fn observed_values(p: &Program, h: &Hyperlabel, name: &str, runs: &[Run]) -> Vec<Value> {
    let mut out = Vec::new();
    for label in h.labels() {
        if !label.bindings.iter().any(|b| b.name == name) {
            continue;
        }
        for run in runs {
            for step in &run.steps {
                if step.loc != label.loc {
                    continue;
                }
                if let Some(env) = match_label(p, label, &step.state) {
                    out.push(env[name].clone());
                }
            }
        }
    }
    out
}

fn dedup_values(vals: Vec<Value>) -> Vec<Value> {
    let mut seen = HashSet::new();
    vals.into_iter().filter(|v| seen.insert(v.clone())).collect()
}

/// The satisfaction rules, with `env` total over the visible names.
fn satisfies(p: &Program, h: &Hyperlabel, runs: &[Run], env: &Env) -> bool {
    match h {
        Hyperlabel::Atom(label) => runs.iter().any(|run| {
            run.steps.iter().any(|step| {
                step.loc == label.loc
                    && match_label(p, label, &step.state)
                        .is_some_and(|bound| bound.iter().all(|(n, v)| env.get(n) == Some(v)))
            })
        }),
        Hyperlabel::Seq(s) => runs.iter().any(|run| seq_matches(p, s, run, env)),
        Hyperlabel::Guard(inner, psi) => {
            let ctx = EvalCtx {
                state: None,
                env: Some(env),
                pc: None,
            };
            holds(p, psi, &ctx) && satisfies(p, inner, runs, env)
        }
        Hyperlabel::Conj(a, b) => satisfies(p, a, runs, env) && satisfies(p, b, runs, env),
        Hyperlabel::Disj(a, b) => satisfies(p, a, runs, env) || satisfies(p, b, runs, env),
    }
}

/// Backtracking search for steps `k1 < ... < kn` matching the sequence
/// under `env`, with the path predicates holding strictly in between.
fn seq_matches(p: &Program, s: &Sequence, run: &Run, env: &Env) -> bool {
    fn go(p: &Program, s: &Sequence, run: &Run, env: &Env, elem: usize, from: usize) -> bool {
        if elem == s.labels.len() {
            return true;
        }
        let label = &s.labels[elem];
        for k in from..run.steps.len() {
            let step = &run.steps[k];
            if step.loc == label.loc {
                if let Some(bound) = match_label(p, label, &step.state) {
                    if bound.iter().all(|(n, v)| env.get(n) == Some(v))
                        && go(p, s, run, env, elem + 1, k + 1)
                    {
                        return true;
                    }
                }
            }
            // a later match would make step k intermediate, so the path
            // predicate must hold here for the scan to continue
            if elem > 0 {
                let ctx = EvalCtx {
                    state: Some(&step.state),
                    env: Some(env),
                    pc: Some(step.loc),
                };
                if !holds(p, &s.path_preds[elem - 1], &ctx) {
                    return false;
                }
            }
        }
        false
    }
    go(p, s, run, env, 0, 0)
}
