//! Well-formedness of hyperlabels. Violations are reported as data so
//! callers can print all of them instead of stopping at the first.

use std::collections::BTreeSet;

use crate::htl::ast::*;
use crate::htl::names::{metas_in_expr, visible_names};
use crate::minilang::ast::LocationId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WfViolation {
    /// Two bindings of one label use the same name.
    DuplicateBindingName { loc: LocationId, name: String },
    /// Two elements of one sequence bind the same name.
    SequenceSharedName { name: String },
    /// Both sides of a conjunction bind the same name.
    ConjSharedName { name: String },
    /// The sides of a disjunction do not bind the same names.
    DisjNameMismatch {
        only_left: Vec<String>,
        only_right: Vec<String>,
    },
    /// A guard constrains a name its operand does not certainly bind.
    UnboundGuardName { name: String },
    /// A path predicate mentions a name its sequence does not bind.
    UnboundPathName { name: String },
    /// A label predicate mentions a metavariable; state predicates range
    /// over program variables only.
    MetaInLabelPred { loc: LocationId, name: String },
}

impl std::fmt::Display for WfViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WfViolation::DuplicateBindingName { loc, name } => {
                write!(f, "label at loc{loc} binds `{name}` twice")
            }
            WfViolation::SequenceSharedName { name } => {
                write!(f, "sequence elements bind `{name}` more than once")
            }
            WfViolation::ConjSharedName { name } => {
                write!(f, "both conjuncts bind `{name}`")
            }
            WfViolation::DisjNameMismatch {
                only_left,
                only_right,
            } => write!(
                f,
                "disjuncts bind different names (left only: {only_left:?}, right only: {only_right:?})"
            ),
            WfViolation::UnboundGuardName { name } => {
                write!(f, "guard mentions `{name}`, which its operand does not bind")
            }
            WfViolation::UnboundPathName { name } => {
                write!(f, "path predicate mentions unbound name `{name}`")
            }
            WfViolation::MetaInLabelPred { loc, name } => {
                write!(f, "label predicate at loc{loc} mentions metavariable `{name}`")
            }
        }
    }
}

/// Collects every violation in `h`. An empty result means `h` is
/// well-formed.
pub fn check_well_formed(h: &Hyperlabel) -> Vec<WfViolation> {
    let mut out = Vec::new();
    go(h, &mut out);
    out
}

fn go(h: &Hyperlabel, out: &mut Vec<WfViolation>) {
    match h {
        Hyperlabel::Atom(l) => check_label(l, out),
        Hyperlabel::Seq(s) => {
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for l in &s.labels {
                check_label(l, out);
                for b in &l.bindings {
                    if !seen.insert(&b.name) {
                        out.push(WfViolation::SequenceSharedName {
                            name: b.name.clone(),
                        });
                    }
                }
            }
            // path predicate i sits between elements i and i + 1 and is
            // evaluated before any later element has matched, so it may
            // only mention names bound up to element i
            let mut bound: BTreeSet<String> = BTreeSet::new();
            for (i, pred) in s.path_preds.iter().enumerate() {
                bound.extend(s.labels[i].bindings.iter().map(|b| b.name.clone()));
                let mut metas = BTreeSet::new();
                metas_in_expr(pred, &mut metas);
                for name in metas.difference(&bound) {
                    out.push(WfViolation::UnboundPathName { name: name.clone() });
                }
            }
        }
        Hyperlabel::Guard(inner, psi) => {
            go(inner, out);
            let nm = visible_names(inner);
            let mut metas = BTreeSet::new();
            metas_in_expr(psi, &mut metas);
            for name in metas.difference(&nm) {
                out.push(WfViolation::UnboundGuardName { name: name.clone() });
            }
        }
        Hyperlabel::Conj(a, b) => {
            go(a, out);
            go(b, out);
            for name in visible_names(a).intersection(&visible_names(b)) {
                out.push(WfViolation::ConjSharedName { name: name.clone() });
            }
        }
        Hyperlabel::Disj(a, b) => {
            go(a, out);
            go(b, out);
            let na = visible_names(a);
            let nb = visible_names(b);
            if na != nb {
                out.push(WfViolation::DisjNameMismatch {
                    only_left: na.difference(&nb).cloned().collect(),
                    only_right: nb.difference(&na).cloned().collect(),
                });
            }
        }
    }
}

fn check_label(l: &Label, out: &mut Vec<WfViolation>) {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for b in &l.bindings {
        if !seen.insert(&b.name) {
            out.push(WfViolation::DuplicateBindingName {
                loc: l.loc,
                name: b.name.clone(),
            });
        }
    }
    let mut metas = BTreeSet::new();
    metas_in_expr(&l.pred, &mut metas);
    for name in metas {
        out.push(WfViolation::MetaInLabelPred { loc: l.loc, name });
    }
}
