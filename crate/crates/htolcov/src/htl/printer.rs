//! Rendering of hyperlabels in the same syntax the parser reads.

use crate::htl::ast::*;
use crate::htl::parser::NamedHyperlabel;
use crate::minilang::ast::Expr;
use crate::minilang::printer::print_expr;

pub fn print_htl(defs: &[NamedHyperlabel]) -> String {
    let mut out = String::new();
    for d in defs {
        out.push_str(&format!("{} = {};\n", d.name, print_hyperlabel(&d.hl)));
    }
    out
}

pub fn print_hyperlabel(h: &Hyperlabel) -> String {
    match h {
        Hyperlabel::Atom(l) => print_label(l),
        Hyperlabel::Seq(s) => {
            let mut out = String::from("[ ");
            out.push_str(&print_label(&s.labels[0]));
            for (pred, label) in s.path_preds.iter().zip(&s.labels[1..]) {
                if *pred == Expr::BoolLit(true) {
                    out.push_str(" -> ");
                } else {
                    out.push_str(&format!(" ->({}) ", print_expr(pred)));
                }
                out.push_str(&print_label(label));
            }
            out.push_str(" ]");
            out
        }
        Hyperlabel::Guard(inner, psi) => format!(
            "guard({}) with ({})",
            print_hyperlabel(inner),
            print_expr(psi)
        ),
        Hyperlabel::Conj(a, b) => format!("{} . {}", conj_side(a), conj_side(b)),
        Hyperlabel::Disj(a, b) => format!("{} + {}", print_hyperlabel(a), print_hyperlabel(b)),
    }
}

/// Disjunctions under `.` need parentheses; everything else is tighter.
fn conj_side(h: &Hyperlabel) -> String {
    match h {
        Hyperlabel::Disj(_, _) => format!("({})", print_hyperlabel(h)),
        _ => print_hyperlabel(h),
    }
}

fn print_label(l: &Label) -> String {
    let mut out = format!("l(loc{}, {})", l.loc, print_expr(&l.pred));
    if !l.bindings.is_empty() {
        out.push('{');
        for (i, b) in l.bindings.iter().enumerate() {
            if i > 0 {
                out.push_str("; ");
            }
            out.push_str(&format!("{} <- {}", b.name, print_expr(&b.expr)));
        }
        out.push('}');
    }
    out
}
