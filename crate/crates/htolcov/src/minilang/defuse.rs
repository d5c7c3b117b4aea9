//! Static def-use information. Arrays are treated as whole variables
//! here; cell-precise relations are handled dynamically by the dataflow
//! annotators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::minilang::ast::*;
use crate::minilang::cfg::Cfg;

/// A definition site. Parameters are defined at the function's entry
/// location, before the entry statement itself executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DefSite {
    pub loc: LocationId,
    pub is_param: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DuPair {
    pub func: usize,
    pub var: String,
    pub def: DefSite,
    pub use_loc: LocationId,
}

#[derive(Debug, Clone, Default)]
pub struct DefUseInfo {
    /// Per function: variable name -> definition sites.
    pub defs: BTreeMap<(usize, String), BTreeSet<DefSite>>,
    /// Per function: variable name -> use locations.
    pub uses: BTreeMap<(usize, String), BTreeSet<LocationId>>,
    /// Pairs with a def-clear CFG path from def to use.
    pub du_pairs: Vec<DuPair>,
}

impl DefUseInfo {
    pub fn defs_of(&self, func: usize, var: &str) -> BTreeSet<DefSite> {
        self.defs
            .get(&(func, var.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn uses_of(&self, func: usize, var: &str) -> BTreeSet<LocationId> {
        self.uses
            .get(&(func, var.to_string()))
            .cloned()
            .unwrap_or_default()
    }
}

pub fn compute_def_use(p: &Program, cfg: &Cfg) -> DefUseInfo {
    let mut info = DefUseInfo::default();
    for (fi, f) in p.functions.iter().enumerate() {
        collect_function(p, fi, f, &mut info);
    }
    // keep only pairs with a def-clear path
    let mut pairs = Vec::new();
    for ((fi, var), defs) in &info.defs {
        let uses = match info.uses.get(&(*fi, var.clone())) {
            Some(u) => u,
            None => continue,
        };
        let def_locs: BTreeSet<LocationId> = defs.iter().map(|d| d.loc).collect();
        for def in defs {
            for &use_loc in uses {
                // A use at the def's own location reads the previous value,
                // so `def == use` pairs only arise for parameter defs
                // (which precede the entry statement) or through a cycle.
                // A parameter def is killed on the spot when the entry
                // statement redefines it.
                let killed_at_entry = def.is_param
                    && defs.iter().any(|d| d.loc == def.loc && !d.is_param);
                let reachable = if def.loc == use_loc && def.is_param {
                    true
                } else if killed_at_entry {
                    false
                } else {
                    def_clear_path(cfg, p, def.loc, use_loc, &def_locs)
                };
                if reachable {
                    pairs.push(DuPair {
                        func: *fi,
                        var: var.clone(),
                        def: *def,
                        use_loc,
                    });
                }
            }
        }
    }
    pairs.sort();
    info.du_pairs = pairs;
    info
}

/// True when a CFG path `def -> use_loc` exists whose strictly-intermediate
/// nodes avoid every definition of the variable.
fn def_clear_path(
    cfg: &Cfg,
    p: &Program,
    def: LocationId,
    use_loc: LocationId,
    def_locs: &BTreeSet<LocationId>,
) -> bool {
    let f = cfg.for_loc(p, def);
    let mut queue: VecDeque<LocationId> = VecDeque::new();
    let mut seen: BTreeSet<LocationId> = BTreeSet::new();
    for (succ, _) in f.successors(def) {
        if seen.insert(*succ) {
            queue.push_back(*succ);
        }
    }
    while let Some(n) = queue.pop_front() {
        if n == use_loc {
            return true;
        }
        if def_locs.contains(&n) {
            continue;
        }
        for (succ, _) in f.successors(n) {
            if seen.insert(*succ) {
                queue.push_back(*succ);
            }
        }
    }
    false
}

fn collect_function(p: &Program, fi: usize, f: &FunctionDef, info: &mut DefUseInfo) {
    for param in f.param_decls() {
        info.defs
            .entry((fi, param.name.clone()))
            .or_default()
            .insert(DefSite {
                loc: f.entry_loc,
                is_param: true,
            });
    }
    let _ = p;
    visit_block(fi, f, &f.body, info);
}

fn visit_block(fi: usize, f: &FunctionDef, blk: &Block, info: &mut DefUseInfo) {
    for s in &blk.stmts {
        match s {
            Stmt::Decl { loc, slot, init } => {
                def(info, fi, &f.vars[*slot as usize].name, *loc);
                if let Some(e) = init {
                    uses_in_expr(info, fi, e, *loc);
                }
            }
            Stmt::Assign { loc, target, value } => {
                visit_target(info, fi, target, *loc);
                uses_in_expr(info, fi, value, *loc);
            }
            Stmt::Call {
                loc, target, args, ..
            } => {
                if let Some(t) = target {
                    visit_target(info, fi, t, *loc);
                }
                for a in args {
                    uses_in_expr(info, fi, a, *loc);
                }
            }
            Stmt::If {
                loc,
                cond,
                then_blk,
                else_blk,
            } => {
                uses_in_expr(info, fi, cond, *loc);
                visit_block(fi, f, then_blk, info);
                visit_block(fi, f, else_blk, info);
            }
            Stmt::While { loc, cond, body } => {
                uses_in_expr(info, fi, cond, *loc);
                visit_block(fi, f, body, info);
            }
            Stmt::Return { loc, value } => {
                uses_in_expr(info, fi, value, *loc);
            }
        }
    }
}

fn visit_target(info: &mut DefUseInfo, fi: usize, target: &LValue, loc: LocationId) {
    match target {
        LValue::Var(v) => def(info, fi, &v.name, loc),
        LValue::Cell(v, idx) => {
            // writing one cell defines the array and uses the index
            def(info, fi, &v.name, loc);
            uses_in_expr(info, fi, idx, loc);
        }
    }
}

fn def(info: &mut DefUseInfo, fi: usize, var: &str, loc: LocationId) {
    info.defs
        .entry((fi, var.to_string()))
        .or_default()
        .insert(DefSite {
            loc,
            is_param: false,
        });
}

fn uses_in_expr(info: &mut DefUseInfo, fi: usize, e: &Expr, loc: LocationId) {
    match e {
        Expr::Var(v) => {
            info.uses
                .entry((fi, v.name.clone()))
                .or_default()
                .insert(loc);
        }
        Expr::Index(v, idx) => {
            info.uses
                .entry((fi, v.name.clone()))
                .or_default()
                .insert(loc);
            uses_in_expr(info, fi, idx, loc);
        }
        Expr::Un(_, inner) => uses_in_expr(info, fi, inner, loc),
        Expr::Bin(_, l, r) => {
            uses_in_expr(info, fi, l, loc);
            uses_in_expr(info, fi, r, loc);
        }
        Expr::IntLit(_) | Expr::BoolLit(_) | Expr::Meta(_) | Expr::Pc | Expr::LocLit(_) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::cfg::build_cfg;
    use crate::minilang::parser::parse_program;

    fn pairs_for(src: &str, var: &str) -> Vec<(LocationId, LocationId)> {
        let p = parse_program(src).unwrap();
        let cfg = build_cfg(&p);
        let info = compute_def_use(&p, &cfg);
        info.du_pairs
            .iter()
            .filter(|d| d.var == var)
            .map(|d| (d.def.loc, d.use_loc))
            .collect()
    }

    #[test]
    fn parameter_def_reaches_all_branch_uses() {
        // a := x; if (...) res := x+1 else res := x-1
        let src = "int f(int x){
            int a := x;
            int res := 0;
            if (a > 0) { res := x + 1; } else { res := x - 1; }
            return res;
        }";
        // locs: 1 decl a, 2 decl res, 3 cond, 4 then, 5 else, 6 return
        assert_eq!(pairs_for(src, "x"), vec![(1, 1), (1, 4), (1, 5)]);
        // `a` is defined once and used in the decision
        assert_eq!(pairs_for(src, "a"), vec![(1, 3)]);
    }

    #[test]
    fn killed_definition_has_no_pairs() {
        let src = "int f(int x){
            int y := 1;
            y := 2;
            return y;
        }";
        // def of y at loc 1 is immediately redefined at loc 2
        assert_eq!(pairs_for(src, "y"), vec![(2, 3)]);
    }

    #[test]
    fn defs_in_disjoint_branches_do_not_pair() {
        let src = "int f(int x){
            int y := 0;
            if (x > 0) { y := x; } else { y := 7; x := y + 1; }
            return y;
        }";
        // locs: 1 decl, 2 cond, 3 then-assign y, 4 else-assign y,
        // 5 else-assign x, 6 return
        let x_pairs = pairs_for(src, "x");
        // def of x at loc 5 has no path to the use at loc 2 or loc 3
        assert!(!x_pairs.contains(&(5, 2)));
        assert!(!x_pairs.contains(&(5, 3)));
        let y_pairs = pairs_for(src, "y");
        assert!(y_pairs.contains(&(3, 6)));
        assert!(y_pairs.contains(&(4, 6)));
        assert!(y_pairs.contains(&(4, 5)));
        assert!(!y_pairs.contains(&(1, 6)), "loc1 def killed on both paths");
    }

    #[test]
    fn pairs_are_subset_of_defs_and_uses() {
        let src = "int f(int x){
            int i := 0;
            while (i < x) { i := i + 1; }
            return i;
        }";
        let p = parse_program(src).unwrap();
        let cfg = build_cfg(&p);
        let info = compute_def_use(&p, &cfg);
        for pair in &info.du_pairs {
            assert!(info.defs_of(pair.func, &pair.var).contains(&pair.def));
            assert!(info.uses_of(pair.func, &pair.var).contains(&pair.use_loc));
        }
        // loop: def at loc 3 reaches the condition use at loc 2 and itself
        let i_pairs: Vec<_> = info
            .du_pairs
            .iter()
            .filter(|d| d.var == "i")
            .map(|d| (d.def.loc, d.use_loc))
            .collect();
        assert!(i_pairs.contains(&(3, 2)));
        assert!(i_pairs.contains(&(3, 3)));
        assert!(i_pairs.contains(&(1, 2)));
        assert!(i_pairs.contains(&(3, 4)));
    }
}
