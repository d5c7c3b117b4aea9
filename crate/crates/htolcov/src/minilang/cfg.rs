//! Per-function control-flow graphs over statement locations.

use std::collections::HashMap;

use crate::minilang::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Fallthrough,
    BranchTrue,
    BranchFalse,
}

#[derive(Debug, Clone)]
pub struct FunctionCfg {
    pub func: usize,
    pub nodes: Vec<LocationId>,
    pub edges: Vec<(LocationId, LocationId, EdgeKind)>,
    pub entry: LocationId,
    /// Locations from which control leaves the function: every `return`
    /// plus the last statement when execution can fall off the end.
    pub exits: Vec<LocationId>,
    succs: HashMap<LocationId, Vec<(LocationId, EdgeKind)>>,
}

impl FunctionCfg {
    pub fn successors(&self, loc: LocationId) -> &[(LocationId, EdgeKind)] {
        self.succs.get(&loc).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of decision nodes (two outgoing branch edges).
    pub fn decision_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|&&n| {
                self.successors(n)
                    .iter()
                    .any(|(_, k)| *k != EdgeKind::Fallthrough)
            })
            .count()
    }

    /// Cyclomatic complexity `e - n + 2`, computed with a virtual exit
    /// node collecting all exit locations.
    pub fn cyclomatic_complexity(&self) -> usize {
        let n = self.nodes.len() + 1;
        let e = self.edges.len() + self.exits.len();
        e + 2 - n
    }
}

#[derive(Debug, Clone)]
pub struct Cfg {
    pub per_function: Vec<FunctionCfg>,
}

impl Cfg {
    pub fn for_function(&self, func: usize) -> &FunctionCfg {
        &self.per_function[func]
    }

    pub fn for_loc(&self, p: &Program, loc: LocationId) -> &FunctionCfg {
        &self.per_function[p.loc_info(loc).func]
    }
}

pub fn build_cfg(p: &Program) -> Cfg {
    let per_function = p
        .functions
        .iter()
        .enumerate()
        .map(|(idx, f)| build_function_cfg(idx, f))
        .collect();
    Cfg { per_function }
}

fn build_function_cfg(func: usize, f: &FunctionDef) -> FunctionCfg {
    let mut edges = Vec::new();
    let mut exits = Vec::new();
    let tails = wire_block(&f.body, &mut edges, &[]);
    for (loc, _) in tails {
        exits.push(loc);
    }
    for s in all_stmts(&f.body) {
        if let Stmt::Return { loc, .. } = s {
            exits.push(*loc);
        }
    }
    exits.sort_unstable();
    exits.dedup();
    let mut succs: HashMap<LocationId, Vec<(LocationId, EdgeKind)>> = HashMap::new();
    for (from, to, kind) in &edges {
        succs.entry(*from).or_default().push((*to, *kind));
    }
    FunctionCfg {
        func,
        nodes: f.locs.clone(),
        edges,
        entry: f.entry_loc,
        exits,
        succs,
    }
}

fn all_stmts(blk: &Block) -> Vec<&Stmt> {
    let mut out = Vec::new();
    fn go<'a>(blk: &'a Block, out: &mut Vec<&'a Stmt>) {
        for s in &blk.stmts {
            out.push(s);
            match s {
                Stmt::If {
                    then_blk, else_blk, ..
                } => {
                    go(then_blk, out);
                    go(else_blk, out);
                }
                Stmt::While { body, .. } => go(body, out),
                _ => {}
            }
        }
    }
    go(blk, &mut out);
    out
}

/// Wires `blk` given the dangling edges entering it; returns the dangling
/// edges leaving it.
fn wire_block(
    blk: &Block,
    edges: &mut Vec<(LocationId, LocationId, EdgeKind)>,
    incoming: &[(LocationId, EdgeKind)],
) -> Vec<(LocationId, EdgeKind)> {
    let mut dangling: Vec<(LocationId, EdgeKind)> = incoming.to_vec();
    for s in &blk.stmts {
        let loc = s.loc();
        for (from, kind) in &dangling {
            edges.push((*from, loc, *kind));
        }
        dangling = match s {
            Stmt::Decl { .. } | Stmt::Assign { .. } | Stmt::Call { .. } => {
                vec![(loc, EdgeKind::Fallthrough)]
            }
            Stmt::Return { .. } => Vec::new(),
            Stmt::If {
                then_blk, else_blk, ..
            } => {
                let mut out = wire_block(then_blk, edges, &[(loc, EdgeKind::BranchTrue)]);
                let out_else = wire_block(else_blk, edges, &[(loc, EdgeKind::BranchFalse)]);
                out.extend(out_else);
                out
            }
            Stmt::While { body, .. } => {
                let out = wire_block(body, edges, &[(loc, EdgeKind::BranchTrue)]);
                // back edge from the body tail to the condition
                for (from, kind) in &out {
                    edges.push((*from, loc, *kind));
                }
                vec![(loc, EdgeKind::BranchFalse)]
            }
        };
    }
    dangling
}
