//! Logic-coverage annotators over the decisions of a program. All of
//! them attach labels to the decision's own location, where the trace has
//! a step with the state the condition was evaluated in.

use crate::criteria::{
    conditions, decisions, substitute, AnnotateError, CriterionId, Objective,
};
use crate::htl::{Hyperlabel, Label};
use crate::minilang::ast::{BinOp, Expr};

/// Largest condition count a decision may have before the exponential
/// expansion is refused.
pub const MAX_MCC_CONDITIONS: usize = 16;

fn label_obj(
    criterion: CriterionId,
    id: String,
    loc: u32,
    pred: Expr,
    cond: Option<usize>,
) -> Objective {
    Objective::new(id, criterion, Hyperlabel::atom(Label::at(loc, pred))).at_decision(loc, cond)
}

/// Decision coverage: each decision true once and false once.
pub fn annotate_dc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    let mut out = Vec::new();
    for d in decisions(p) {
        out.push(label_obj(
            CriterionId::Dc,
            format!("DC:loc{}:t", d.loc),
            d.loc,
            d.cond.clone(),
            None,
        ));
        out.push(label_obj(
            CriterionId::Dc,
            format!("DC:loc{}:f", d.loc),
            d.loc,
            Expr::not(d.cond.clone()),
            None,
        ));
    }
    out
}

/// Condition coverage: each condition true once and false once. Two
/// labels per condition, `2n` per decision.
pub fn annotate_cc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    cc_like(p, CriterionId::Cc)
}

fn cc_like(p: &crate::minilang::ast::Program, criterion: CriterionId) -> Vec<Objective> {
    let mut out = Vec::new();
    for d in decisions(p) {
        for (i, c) in conditions(d.cond).iter().enumerate() {
            out.push(label_obj(
                criterion,
                format!("{criterion}:loc{}:c{}:t", d.loc, i + 1),
                d.loc,
                (*c).clone(),
                Some(i),
            ));
            out.push(label_obj(
                criterion,
                format!("{criterion}:loc{}:c{}:f", d.loc, i + 1),
                d.loc,
                Expr::not((*c).clone()),
                Some(i),
            ));
        }
    }
    out
}

/// Decision-condition coverage: condition coverage plus both decision
/// outcomes.
pub fn annotate_dcc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    let mut out = cc_like(p, CriterionId::Dcc);
    for d in decisions(p) {
        out.push(label_obj(
            CriterionId::Dcc,
            format!("DCC:loc{}:t", d.loc),
            d.loc,
            d.cond.clone(),
            None,
        ));
        out.push(label_obj(
            CriterionId::Dcc,
            format!("DCC:loc{}:f", d.loc),
            d.loc,
            Expr::not(d.cond.clone()),
            None,
        ));
    }
    out
}

/// Multiple-condition coverage: every boolean combination of the
/// conditions, `2^n` labels per decision. Combination `m` negates
/// condition `i` iff bit `i` of `m` is set, so the first condition
/// toggles fastest and the all-true combination comes first.
pub fn annotate_mcc(
    p: &crate::minilang::ast::Program,
) -> Result<Vec<Objective>, AnnotateError> {
    let mut out = Vec::new();
    for d in decisions(p) {
        let cs = conditions(d.cond);
        if cs.len() > MAX_MCC_CONDITIONS {
            return Err(AnnotateError::TooManyConditions {
                loc: d.loc,
                n: cs.len(),
                max: MAX_MCC_CONDITIONS,
            });
        }
        for m in 0u32..(1 << cs.len()) {
            let literals: Vec<Expr> = cs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if m & (1 << i) == 0 {
                        (*c).clone()
                    } else {
                        Expr::not((*c).clone())
                    }
                })
                .collect();
            out.push(label_obj(
                CriterionId::Mcc,
                format!("MCC:loc{}:{}", d.loc, m + 1),
                d.loc,
                Expr::and_all(literals),
                None,
            ));
        }
    }
    Ok(out)
}

/// `d` with condition `i` fixed to true, respectively false, differ:
/// condition `i` currently determines the decision.
fn determines(d: &Expr, i: usize) -> Expr {
    Expr::bin(
        BinOp::Ne,
        substitute(d, i, true),
        substitute(d, i, false),
    )
}

/// General active clause coverage: each condition seen true and false
/// while determining its decision.
pub fn annotate_gacc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    let mut out = Vec::new();
    for d in decisions(p) {
        for (i, c) in conditions(d.cond).iter().enumerate() {
            let det = determines(d.cond, i);
            out.push(label_obj(
                CriterionId::Gacc,
                format!("GACC:loc{}:c{}:t", d.loc, i + 1),
                d.loc,
                Expr::bin(BinOp::And, (*c).clone(), det.clone()),
                Some(i),
            ));
            out.push(label_obj(
                CriterionId::Gacc,
                format!("GACC:loc{}:c{}:f", d.loc, i + 1),
                d.loc,
                Expr::bin(BinOp::And, Expr::not((*c).clone()), det),
                Some(i),
            ));
        }
    }
    out
}

/// Correlated active clause coverage: two visits flipping condition `i`
/// must flip the recorded decision outcome.
pub fn annotate_cacc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    let mut out = Vec::new();
    for d in decisions(p) {
        for (i, c) in conditions(d.cond).iter().enumerate() {
            let pos = Label::at(d.loc, (*c).clone()).bind("r", d.cond.clone());
            let neg = Label::at(d.loc, Expr::not((*c).clone())).bind("r'", d.cond.clone());
            let hl = Hyperlabel::guard(
                Hyperlabel::conj(Hyperlabel::atom(pos), Hyperlabel::atom(neg)),
                Expr::bin(BinOp::Ne, Expr::Meta("r".into()), Expr::Meta("r'".into())),
            );
            out.push(
                Objective::new(format!("CACC:loc{}:c{}", d.loc, i + 1), CriterionId::Cacc, hl)
                    .at_decision(d.loc, Some(i)),
            );
        }
    }
    out
}

/// Restricted active clause coverage: like CACC, but the two visits must
/// also agree on every other condition.
pub fn annotate_racc(p: &crate::minilang::ast::Program) -> Vec<Objective> {
    let mut out = Vec::new();
    for d in decisions(p) {
        let cs = conditions(d.cond);
        for i in 0..cs.len() {
            let mut pos = Label::at(d.loc, d.cond.clone());
            let mut neg = Label::at(d.loc, Expr::not(d.cond.clone()));
            for (j, c) in cs.iter().enumerate() {
                pos = pos.bind(&format!("c{}", j + 1), (*c).clone());
                neg = neg.bind(&format!("c{}'", j + 1), (*c).clone());
            }
            let mut guard = vec![Expr::bin(
                BinOp::Ne,
                Expr::Meta(format!("c{}", i + 1)),
                Expr::Meta(format!("c{}'", i + 1)),
            )];
            for j in 0..cs.len() {
                if j != i {
                    guard.push(Expr::bin(
                        BinOp::Eq,
                        Expr::Meta(format!("c{}", j + 1)),
                        Expr::Meta(format!("c{}'", j + 1)),
                    ));
                }
            }
            let hl = Hyperlabel::guard(
                Hyperlabel::conj(Hyperlabel::atom(pos), Hyperlabel::atom(neg)),
                Expr::and_all(guard),
            );
            out.push(
                Objective::new(format!("RACC:loc{}:c{}", d.loc, i + 1), CriterionId::Racc, hl)
                    .at_decision(d.loc, Some(i)),
            );
        }
    }
    out
}
