//! Visible metavariable names of a hyperlabel. These are the names a
//! surrounding guard may constrain: everything a match is certain to
//! bind, which is why disjunction intersects.

use std::collections::BTreeSet;

use crate::htl::ast::*;
use crate::minilang::ast::Expr;

pub fn visible_names(h: &Hyperlabel) -> BTreeSet<String> {
    match h {
        Hyperlabel::Atom(l) => label_names(l),
        Hyperlabel::Seq(s) => s.labels.iter().flat_map(label_names).collect(),
        Hyperlabel::Guard(inner, _) => visible_names(inner),
        Hyperlabel::Conj(a, b) => visible_names(a).union(&visible_names(b)).cloned().collect(),
        Hyperlabel::Disj(a, b) => visible_names(a)
            .intersection(&visible_names(b))
            .cloned()
            .collect(),
    }
}

fn label_names(l: &Label) -> BTreeSet<String> {
    l.bindings.iter().map(|b| b.name.clone()).collect()
}

/// Metavariables mentioned by an expression.
pub fn metas_in_expr(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Meta(name) => {
            out.insert(name.clone());
        }
        Expr::Index(_, idx) => metas_in_expr(idx, out),
        Expr::Un(_, inner) => metas_in_expr(inner, out),
        Expr::Bin(_, l, r) => {
            metas_in_expr(l, out);
            metas_in_expr(r, out);
        }
        Expr::IntLit(_) | Expr::BoolLit(_) | Expr::Var(_) | Expr::Pc | Expr::LocLit(_) => {}
    }
}
