//! Criterion annotators: turn a program into the hyperlabel objectives a
//! coverage criterion demands.

mod bpc;
mod dataflow;
mod logic;
mod structural;
mod wm;

pub use bpc::annotate_bpc;
pub use dataflow::{annotate_all_defs, annotate_all_uses, ArrayMode};
pub use logic::{
    annotate_cacc, annotate_cc, annotate_dc, annotate_dcc, annotate_gacc, annotate_mcc,
    annotate_racc,
};
pub use structural::{annotate_bbc, annotate_fc, annotate_fcc};
pub use wm::annotate_wm_prime;

use crate::htl::Hyperlabel;
use crate::minilang::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionId {
    /// Function coverage: every function entered.
    Fc,
    /// Basic-block coverage.
    Bbc,
    /// Decision coverage.
    Dc,
    /// Condition coverage.
    Cc,
    /// Decision-condition coverage.
    Dcc,
    /// Multiple-condition coverage.
    Mcc,
    /// General active clause coverage.
    Gacc,
    /// Weak mutation.
    WmPrime,
    /// Correlated active clause coverage.
    Cacc,
    /// Restricted active clause coverage.
    Racc,
    /// Function call coverage: every call relation exercised.
    Fcc,
    /// Basis path coverage.
    Bpc,
    AllDefs,
    AllUses,
}

pub const ALL_CRITERIA: [CriterionId; 14] = [
    CriterionId::Fc,
    CriterionId::Bbc,
    CriterionId::Dc,
    CriterionId::Cc,
    CriterionId::Dcc,
    CriterionId::Mcc,
    CriterionId::Gacc,
    CriterionId::WmPrime,
    CriterionId::Cacc,
    CriterionId::Racc,
    CriterionId::Fcc,
    CriterionId::Bpc,
    CriterionId::AllDefs,
    CriterionId::AllUses,
];

impl CriterionId {
    pub fn name(self) -> &'static str {
        match self {
            CriterionId::Fc => "FC",
            CriterionId::Bbc => "BBC",
            CriterionId::Dc => "DC",
            CriterionId::Cc => "CC",
            CriterionId::Dcc => "DCC",
            CriterionId::Mcc => "MCC",
            CriterionId::Gacc => "GACC",
            CriterionId::WmPrime => "WM'",
            CriterionId::Cacc => "CACC",
            CriterionId::Racc => "RACC",
            CriterionId::Fcc => "FCC",
            CriterionId::Bpc => "BPC",
            CriterionId::AllDefs => "ALL_DEFS",
            CriterionId::AllUses => "ALL_USES",
        }
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CriterionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_CRITERIA
            .iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown criterion `{s}`"))
    }
}

/// One test objective, with enough provenance to relate objectives of
/// different criteria that target the same decision or condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub id: String,
    pub criterion: CriterionId,
    pub hl: Hyperlabel,
    /// Decision location, for logic criteria.
    pub decision_loc: Option<LocationId>,
    /// Condition index within the decision, for condition criteria.
    pub condition_idx: Option<usize>,
}

impl Objective {
    pub fn new(id: String, criterion: CriterionId, hl: Hyperlabel) -> Objective {
        Objective {
            id,
            criterion,
            hl,
            decision_loc: None,
            condition_idx: None,
        }
    }

    pub fn at_decision(mut self, loc: LocationId, cond: Option<usize>) -> Objective {
        self.decision_loc = Some(loc);
        self.condition_idx = cond;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnnotateError {
    #[error("decision at loc{loc} has {n} conditions; refusing to expand more than {max}")]
    TooManyConditions {
        loc: LocationId,
        n: usize,
        max: usize,
    },
}

/// Produces the objectives of one criterion for the whole program.
pub fn annotate(p: &Program, criterion: CriterionId) -> Result<Vec<Objective>, AnnotateError> {
    Ok(match criterion {
        CriterionId::Fc => annotate_fc(p),
        CriterionId::Bbc => annotate_bbc(p),
        CriterionId::Dc => annotate_dc(p),
        CriterionId::Cc => annotate_cc(p),
        CriterionId::Dcc => annotate_dcc(p),
        CriterionId::Mcc => annotate_mcc(p)?,
        CriterionId::Gacc => annotate_gacc(p),
        CriterionId::WmPrime => annotate_wm_prime(p),
        CriterionId::Cacc => annotate_cacc(p),
        CriterionId::Racc => annotate_racc(p),
        CriterionId::Fcc => annotate_fcc(p),
        CriterionId::Bpc => annotate_bpc(p),
        CriterionId::AllDefs => annotate_all_defs(p, ArrayMode::Whole),
        CriterionId::AllUses => annotate_all_uses(p, ArrayMode::Whole),
    })
}

/// A decision: the condition expression of an `if` or `while`.
pub(crate) struct Decision<'a> {
    pub loc: LocationId,
    pub cond: &'a Expr,
}

pub(crate) fn decisions(p: &Program) -> Vec<Decision<'_>> {
    let mut out = Vec::new();
    for f in &p.functions {
        collect_decisions(&f.body, &mut out);
    }
    out.sort_by_key(|d| d.loc);
    out
}

fn collect_decisions<'a>(blk: &'a Block, out: &mut Vec<Decision<'a>>) {
    for s in &blk.stmts {
        match s {
            Stmt::If {
                loc,
                cond,
                then_blk,
                else_blk,
            } => {
                out.push(Decision { loc: *loc, cond });
                collect_decisions(then_blk, out);
                collect_decisions(else_blk, out);
            }
            Stmt::While { loc, cond, body } => {
                out.push(Decision { loc: *loc, cond });
                collect_decisions(body, out);
            }
            _ => {}
        }
    }
}

/// The conditions of a decision: maximal subexpressions containing no
/// boolean connective, in source order. Each syntactic occurrence counts.
pub(crate) fn conditions(d: &Expr) -> Vec<&Expr> {
    let mut out = Vec::new();
    fn go<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
        match e {
            Expr::Bin(BinOp::And | BinOp::Or, l, r) => {
                go(l, out);
                go(r, out);
            }
            Expr::Un(UnOp::Not, inner) => go(inner, out),
            other => out.push(other),
        }
    }
    go(d, &mut out);
    out
}

/// The decision with its `idx`-th condition occurrence replaced by a
/// constant.
pub(crate) fn substitute(d: &Expr, idx: usize, value: bool) -> Expr {
    fn go(e: &Expr, idx: usize, value: bool, count: &mut usize) -> Expr {
        match e {
            Expr::Bin(op @ (BinOp::And | BinOp::Or), l, r) => {
                let l = go(l, idx, value, count);
                let r = go(r, idx, value, count);
                Expr::bin(*op, l, r)
            }
            Expr::Un(UnOp::Not, inner) => Expr::not(go(inner, idx, value, count)),
            other => {
                let here = *count;
                *count += 1;
                if here == idx {
                    Expr::BoolLit(value)
                } else {
                    other.clone()
                }
            }
        }
    }
    let mut count = 0;
    go(d, idx, value, &mut count)
}
