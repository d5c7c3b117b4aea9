//! Call graph over function names with per-edge call-site locations.

use std::collections::BTreeMap;

use crate::minilang::ast::*;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CallGraph {
    pub nodes: Vec<String>,
    /// (caller, callee) -> call-site locations, in source order.
    pub edges: BTreeMap<(String, String), Vec<LocationId>>,
}

impl CallGraph {
    pub fn call_sites(&self, caller: &str, callee: &str) -> &[LocationId] {
        self.edges
            .get(&(caller.to_string(), callee.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Edge `(f, g)` exists iff `f` syntactically contains a call to `g`.
/// Undefined callees are rejected by the parser, so this is total.
pub fn build_callgraph(p: &Program) -> CallGraph {
    let mut cg = CallGraph {
        nodes: p.functions.iter().map(|f| f.name.clone()).collect(),
        edges: BTreeMap::new(),
    };
    for f in &p.functions {
        let mut sites: Vec<(LocationId, String)> = Vec::new();
        collect_calls(&f.body, &mut sites);
        sites.sort_by_key(|(loc, _)| *loc);
        for (loc, callee) in sites {
            cg.edges
                .entry((f.name.clone(), callee))
                .or_default()
                .push(loc);
        }
    }
    cg
}

fn collect_calls(blk: &Block, out: &mut Vec<(LocationId, String)>) {
    for s in &blk.stmts {
        match s {
            Stmt::Call { loc, callee, .. } => out.push((*loc, callee.clone())),
            Stmt::If {
                then_blk, else_blk, ..
            } => {
                collect_calls(then_blk, out);
                collect_calls(else_blk, out);
            }
            Stmt::While { body, .. } => collect_calls(body, out),
            _ => {}
        }
    }
}
