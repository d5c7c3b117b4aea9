//! Structural annotators: function entry, basic blocks, call relations.

use std::collections::{BTreeMap, HashMap};

use crate::criteria::{CriterionId, Objective};
use crate::htl::{Hyperlabel, Label};
use crate::minilang::ast::{Expr, LocationId, Program};
use crate::minilang::callgraph::build_callgraph;
use crate::minilang::cfg::build_cfg;

/// Function coverage: one label at the first location of each body.
pub fn annotate_fc(p: &Program) -> Vec<Objective> {
    p.functions
        .iter()
        .map(|f| {
            Objective::new(
                format!("FC:{}", f.name),
                CriterionId::Fc,
                Hyperlabel::atom(Label::at(f.entry_loc, Expr::BoolLit(true))),
            )
        })
        .collect()
}

/// Basic-block coverage: one label per block head. A location heads a
/// block when it is the function entry, has other than exactly one
/// incoming edge, or follows a decision.
pub fn annotate_bbc(p: &Program) -> Vec<Objective> {
    let cfg = build_cfg(p);
    let mut out = Vec::new();
    for f in &cfg.per_function {
        let mut in_deg: HashMap<LocationId, usize> = HashMap::new();
        let mut branch_target: HashMap<LocationId, bool> = HashMap::new();
        for &(from, to, _) in &f.edges {
            *in_deg.entry(to).or_default() += 1;
            if f.successors(from).len() > 1 {
                branch_target.insert(to, true);
            }
        }
        let fname = &p.functions[f.func].name;
        for &loc in &f.nodes {
            let heads = loc == f.entry
                || in_deg.get(&loc).copied().unwrap_or(0) != 1
                || branch_target.contains_key(&loc);
            if heads {
                out.push(Objective::new(
                    format!("BBC:{fname}:loc{loc}"),
                    CriterionId::Bbc,
                    Hyperlabel::atom(Label::at(loc, Expr::BoolLit(true))),
                ));
            }
        }
    }
    out
}

/// Function call coverage: for each called function, one objective
/// saying "some call site of it executed"; a disjunction when it has
/// several call sites.
pub fn annotate_fcc(p: &Program) -> Vec<Objective> {
    let cg = build_callgraph(p);
    let mut sites: BTreeMap<&str, Vec<LocationId>> = BTreeMap::new();
    for ((_, callee), locs) in &cg.edges {
        sites.entry(callee).or_default().extend(locs.iter().copied());
    }
    sites
        .into_iter()
        .map(|(callee, mut locs)| {
            locs.sort_unstable();
            let labels: Vec<Hyperlabel> = locs
                .into_iter()
                .map(|loc| Hyperlabel::atom(Label::at(loc, Expr::BoolLit(true))))
                .collect();
            Objective::new(
                format!("FCC:{callee}"),
                CriterionId::Fcc,
                Hyperlabel::disj_all(labels),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parser::parse_program;

    #[test]
    fn fc_labels_every_entry_location() {
        let p = parse_program(
            "int f(int x){ int r := 0; r := g(); return r; } int g(){ return 1; }",
        )
        .unwrap();
        let objs = annotate_fc(&p);
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[0].id, "FC:f");
    }

    #[test]
    fn bbc_heads_blocks_at_joins_and_branch_targets() {
        let p = parse_program(
            "int f(int x){
                int r := 0;
                if (x > 0) { r := 1; } else { r := 2; }
                return r;
            }",
        )
        .unwrap();
        // locs: 1 decl, 2 cond, 3 then, 4 else, 5 return
        // blocks: {1, 2}, {3}, {4}, {5}
        let heads: Vec<String> = annotate_bbc(&p).into_iter().map(|o| o.id).collect();
        assert_eq!(
            heads,
            vec!["BBC:f:loc1", "BBC:f:loc3", "BBC:f:loc4", "BBC:f:loc5"]
        );
    }

    #[test]
    fn fcc_joins_call_sites_of_one_callee() {
        let p = parse_program(
            "int f(int c){
                if (c > 0) { g(); } else { g(); }
                h();
                return 0;
            }
            int g(){ return 1; }
            int h(){ return 2; }",
        )
        .unwrap();
        let objs = annotate_fcc(&p);
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[0].id, "FCC:g");
        assert!(matches!(objs[0].hl, Hyperlabel::Disj(_, _)));
        assert!(matches!(objs[1].hl, Hyperlabel::Atom(_)));
    }
}
