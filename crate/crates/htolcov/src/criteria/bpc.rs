//! Basis-path annotator using the baseline method: start from a shortest
//! entry-to-exit path, then derive new paths by flipping one decision of
//! an existing path and continuing with a shortest suffix, up to the
//! function's cyclomatic complexity. A path objective is the sequence of
//! branch targets the path takes, in order, within one run.

use std::collections::{BTreeSet, VecDeque};

use crate::criteria::{CriterionId, Objective};
use crate::htl::{Hyperlabel, Label};
use crate::minilang::ast::{Expr, LocationId, Program};
use crate::minilang::cfg::{build_cfg, FunctionCfg};

pub fn annotate_bpc(p: &Program) -> Vec<Objective> {
    let cfg = build_cfg(p);
    let mut out = Vec::new();
    for f in &cfg.per_function {
        let fname = &p.functions[f.func].name;
        for (k, path) in basis_paths(f).into_iter().enumerate() {
            out.push(Objective::new(
                format!("BPC:{fname}:{}", k + 1),
                CriterionId::Bpc,
                path_hyperlabel(f, &path),
            ));
        }
    }
    out
}

/// A node can branch when it has several successors or can both continue
/// and leave the function.
fn is_decision(f: &FunctionCfg, loc: LocationId) -> bool {
    let n = f.successors(loc).len();
    n > 1 || (n == 1 && f.exits.contains(&loc))
}

fn basis_paths(f: &FunctionCfg) -> Vec<Vec<LocationId>> {
    let cap = f.cyclomatic_complexity();
    // back edges only arise from loops, whose condition precedes the body
    // in location order
    let back_edges = f.edges.iter().filter(|(from, to, _)| to <= from).count();
    let max_len = f.nodes.len() + 2 * back_edges;
    let exits: BTreeSet<LocationId> = f.exits.iter().copied().collect();
    let baseline = match shortest_to_exit(f, f.entry, &exits) {
        Some(p) => p,
        None => vec![f.entry],
    };
    let mut paths = vec![baseline];
    let mut seen: BTreeSet<Vec<LocationId>> = paths.iter().cloned().collect();
    let mut i = 0;
    while i < paths.len() && paths.len() < cap {
        let path = paths[i].clone();
        for (pos, &node) in path.iter().enumerate() {
            if !is_decision(f, node) {
                continue;
            }
            let taken = path.get(pos + 1).copied();
            for &(succ, _) in f.successors(node) {
                if Some(succ) == taken {
                    continue;
                }
                let mut candidate = path[..=pos].to_vec();
                candidate.push(succ);
                if !exits.contains(&succ) || !f.successors(succ).is_empty() {
                    match shortest_to_exit(f, succ, &exits) {
                        Some(suffix) => candidate.extend(&suffix[1..]),
                        None => continue,
                    }
                }
                if candidate.len() > max_len || !seen.insert(candidate.clone()) {
                    continue;
                }
                paths.push(candidate);
                if paths.len() == cap {
                    break;
                }
            }
            if paths.len() == cap {
                break;
            }
        }
        i += 1;
    }
    paths
}

/// Shortest node list `from .. exit`, including both ends.
fn shortest_to_exit(
    f: &FunctionCfg,
    from: LocationId,
    exits: &BTreeSet<LocationId>,
) -> Option<Vec<LocationId>> {
    let mut pred: std::collections::BTreeMap<LocationId, LocationId> = Default::default();
    let mut queue = VecDeque::from([from]);
    let mut goal = None;
    if exits.contains(&from) {
        goal = Some(from);
    }
    while goal.is_none() {
        let n = queue.pop_front()?;
        for &(succ, _) in f.successors(n) {
            if succ != from && !pred.contains_key(&succ) {
                pred.insert(succ, n);
                if exits.contains(&succ) {
                    goal = Some(succ);
                    break;
                }
                queue.push_back(succ);
            }
        }
    }
    let mut path = vec![goal?];
    while path.last() != Some(&from) {
        path.push(pred[path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}

/// The path as "these branch targets, in this order, in one run".
fn path_hyperlabel(f: &FunctionCfg, path: &[LocationId]) -> Hyperlabel {
    let mut targets = Vec::new();
    for w in path.windows(2) {
        if is_decision(f, w[0]) {
            targets.push(Label::at(w[1], Expr::BoolLit(true)));
        }
    }
    match targets.len() {
        0 => Hyperlabel::atom(Label::at(f.entry, Expr::BoolLit(true))),
        1 => Hyperlabel::atom(targets.pop().unwrap()),
        n => Hyperlabel::seq(targets, vec![Expr::BoolLit(true); n - 1]),
    }
}
