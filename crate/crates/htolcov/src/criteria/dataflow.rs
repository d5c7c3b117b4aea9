//! Dataflow annotators: all-uses and all-defs over def-use pairs.
//!
//! Scalar variables use the statically computed pairs: the objective is a
//! run that goes from the definition to the use without passing another
//! definition of the variable, expressed with a `pc`-based path
//! predicate. Array variables either behave like scalars (every write
//! defines the whole array) or, in cell mode, get the dynamic encoding:
//! bind the written index, require the read index to equal it, and let
//! the path predicate rule out intermediate writes to that same cell.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::criteria::{CriterionId, Objective};
use crate::htl::{Hyperlabel, Label};
use crate::minilang::ast::*;
use crate::minilang::cfg::{build_cfg, Cfg};
use crate::minilang::defuse::{compute_def_use, DuPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayMode {
    /// Arrays are single variables; any write defines them.
    Whole,
    /// Cell-precise pairs between indexed writes and indexed reads.
    Cells,
}

pub fn annotate_all_uses(p: &Program, arrays: ArrayMode) -> Vec<Objective> {
    collect(p, arrays)
        .into_iter()
        .map(|(id, _group, hl)| Objective::new(id, CriterionId::AllUses, hl))
        .collect()
}

/// All-defs: per definition, a disjunction over that definition's pairs;
/// covering any one use of the definition suffices.
pub fn annotate_all_defs(p: &Program, arrays: ArrayMode) -> Vec<Objective> {
    let mut groups: BTreeMap<String, Vec<Hyperlabel>> = BTreeMap::new();
    for (_, group, hl) in collect(p, arrays) {
        groups.entry(group).or_default().push(hl);
    }
    groups
        .into_iter()
        .map(|(group, hls)| {
            Objective::new(
                format!("ALL_DEFS:{group}"),
                CriterionId::AllDefs,
                Hyperlabel::disj_all(hls),
            )
        })
        .collect()
}

/// Every pair objective as (use id, def group key, hyperlabel).
fn collect(p: &Program, arrays: ArrayMode) -> Vec<(String, String, Hyperlabel)> {
    let cfg = build_cfg(p);
    let info = compute_def_use(p, &cfg);
    let mut out = Vec::new();
    for pair in &info.du_pairs {
        let f = &p.functions[pair.func];
        let slot = f.slot_of(&pair.var).unwrap() as usize;
        let is_array = matches!(f.vars[slot].ty, Ty::Array(_));
        if is_array && arrays == ArrayMode::Cells {
            continue;
        }
        let kill: Vec<LocationId> = info
            .defs_of(pair.func, &pair.var)
            .iter()
            .filter(|d| !d.is_param && d.loc != pair.def.loc)
            .map(|d| d.loc)
            .collect();
        let hl = pair_hyperlabel(pair, &kill);
        let def_tag = if pair.def.is_param {
            format!("p{}", pair.def.loc)
        } else {
            pair.def.loc.to_string()
        };
        out.push((
            format!("ALL_USES:{}:{}:{}-{}", f.name, pair.var, def_tag, pair.use_loc),
            format!("{}:{}:{}", f.name, pair.var, def_tag),
            hl,
        ));
    }
    if arrays == ArrayMode::Cells {
        out.extend(cell_pairs(p, &cfg));
    }
    out
}

fn pair_hyperlabel(pair: &DuPair, kill: &[LocationId]) -> Hyperlabel {
    if pair.def.loc == pair.use_loc && pair.def.is_param {
        // the parameter value is live at the entry statement itself; a
        // single visit is the whole pair
        return Hyperlabel::atom(Label::at(pair.use_loc, Expr::BoolLit(true)));
    }
    let path = def_clear_pred(kill);
    Hyperlabel::seq(
        vec![
            Label::at(pair.def.loc, Expr::BoolLit(true)),
            Label::at(pair.use_loc, Expr::BoolLit(true)),
        ],
        vec![path],
    )
}

/// `pc` avoids every other definition of the variable.
fn def_clear_pred(kill: &[LocationId]) -> Expr {
    if kill.is_empty() {
        return Expr::BoolLit(true);
    }
    Expr::and_all(
        kill.iter()
            .map(|&loc| Expr::bin(BinOp::Ne, Expr::Pc, Expr::LocLit(loc)))
            .collect(),
    )
}

/// Cell-precise pairs for array variables: indexed writes to indexed
/// reads with a CFG path in between. Whole-array definitions
/// (declarations, parameters) and whole-array uses (call arguments) are
/// out of scope here.
fn cell_pairs(p: &Program, cfg: &Cfg) -> Vec<(String, String, Hyperlabel)> {
    let mut out = Vec::new();
    for (fi, f) in p.functions.iter().enumerate() {
        let mut defs: BTreeMap<String, Vec<(LocationId, Expr)>> = BTreeMap::new();
        let mut uses: BTreeMap<String, Vec<(LocationId, Expr)>> = BTreeMap::new();
        collect_cells(&f.body, &mut defs, &mut uses);
        for (var, dlist) in &defs {
            for (di, (dloc, didx)) in dlist.iter().enumerate() {
                // intermediate writes to the array must miss the bound cell
                let others: Vec<&(LocationId, Expr)> =
                    dlist.iter().filter(|(l, _)| l != dloc).collect();
                let path = if others.is_empty() {
                    Expr::BoolLit(true)
                } else {
                    Expr::and_all(
                        others
                            .iter()
                            .map(|(l, idx)| {
                                Expr::bin(
                                    BinOp::Imp,
                                    Expr::bin(BinOp::Eq, Expr::Pc, Expr::LocLit(*l)),
                                    Expr::bin(BinOp::Ne, idx.clone(), Expr::Meta("v1".into())),
                                )
                            })
                            .collect(),
                    )
                };
                for (ui, (uloc, uidx)) in uses.get(var).into_iter().flatten().enumerate() {
                    if !reaches(cfg.for_function(fi), *dloc, *uloc) {
                        continue;
                    }
                    let hl = Hyperlabel::guard(
                        Hyperlabel::seq(
                            vec![
                                Label::at(*dloc, Expr::BoolLit(true)).bind("v1", didx.clone()),
                                Label::at(*uloc, Expr::BoolLit(true)).bind("v2", uidx.clone()),
                            ],
                            vec![path.clone()],
                        ),
                        Expr::bin(BinOp::Eq, Expr::Meta("v1".into()), Expr::Meta("v2".into())),
                    );
                    out.push((
                        format!("ALL_USES:{}:{var}[]:{dloc}-{uloc}#{ui}", f.name),
                        format!("{}:{var}[]:{dloc}#{di}", f.name),
                        hl,
                    ));
                }
            }
        }
    }
    out
}

/// CFG path from `from` to `to` with at least one edge.
fn reaches(f: &crate::minilang::cfg::FunctionCfg, from: LocationId, to: LocationId) -> bool {
    let mut queue: VecDeque<LocationId> = VecDeque::new();
    let mut seen: BTreeSet<LocationId> = BTreeSet::new();
    for (succ, _) in f.successors(from) {
        if seen.insert(*succ) {
            queue.push_back(*succ);
        }
    }
    while let Some(n) = queue.pop_front() {
        if n == to {
            return true;
        }
        for (succ, _) in f.successors(n) {
            if seen.insert(*succ) {
                queue.push_back(*succ);
            }
        }
    }
    false
}

fn collect_cells(
    blk: &Block,
    defs: &mut BTreeMap<String, Vec<(LocationId, Expr)>>,
    uses: &mut BTreeMap<String, Vec<(LocationId, Expr)>>,
) {
    let visit_target = |t: &LValue, loc: LocationId, defs: &mut BTreeMap<String, Vec<(LocationId, Expr)>>| {
        if let LValue::Cell(v, idx) = t {
            defs.entry(v.name.clone()).or_default().push((loc, (**idx).clone()));
        }
    };
    for s in &blk.stmts {
        let loc = s.loc();
        match s {
            Stmt::Decl { init, .. } => {
                if let Some(e) = init {
                    uses_in(e, loc, uses);
                }
            }
            Stmt::Assign { target, value, .. } => {
                visit_target(target, loc, defs);
                if let LValue::Cell(_, idx) = target {
                    uses_in(idx, loc, uses);
                }
                uses_in(value, loc, uses);
            }
            Stmt::Call { target, args, .. } => {
                if let Some(t) = target {
                    visit_target(t, loc, defs);
                    if let LValue::Cell(_, idx) = t {
                        uses_in(idx, loc, uses);
                    }
                }
                for a in args {
                    uses_in(a, loc, uses);
                }
            }
            Stmt::If {
                cond,
                then_blk,
                else_blk,
                ..
            } => {
                uses_in(cond, loc, uses);
                collect_cells(then_blk, defs, uses);
                collect_cells(else_blk, defs, uses);
            }
            Stmt::While { cond, body, .. } => {
                uses_in(cond, loc, uses);
                collect_cells(body, defs, uses);
            }
            Stmt::Return { value, .. } => uses_in(value, loc, uses),
        }
    }
}

/// Indexed reads within an expression.
fn uses_in(e: &Expr, loc: LocationId, uses: &mut BTreeMap<String, Vec<(LocationId, Expr)>>) {
    match e {
        Expr::Index(v, idx) => {
            uses.entry(v.name.clone()).or_default().push((loc, (**idx).clone()));
            uses_in(idx, loc, uses);
        }
        Expr::Un(_, inner) => uses_in(inner, loc, uses),
        Expr::Bin(_, l, r) => {
            uses_in(l, loc, uses);
            uses_in(r, loc, uses);
        }
        _ => {}
    }
}
