//! Weak-mutation annotator. Each objective asserts that right before a
//! statement executes, the original expression and a single-point mutant
//! of it disagree, so the suite is able to distinguish the mutant at the
//! infection point. Divergence that only shows up later in the state is
//! out of scope of this encoding.
//!
//! Operators: arithmetic swap (`+`/`-`, `*`/`/`), relational swap (each
//! comparison against its five peers, restricted to `==`/`!=` when the
//! operands are not integers), connective swap (`&&`/`||`), and negation
//! insertion on integer subexpressions.

use crate::criteria::{CriterionId, Objective};
use crate::htl::{Hyperlabel, Label};
use crate::minilang::ast::*;

pub fn annotate_wm_prime(p: &Program) -> Vec<Objective> {
    let mut out = Vec::new();
    for f in &p.functions {
        annotate_block(f, &f.body, &mut out);
    }
    out
}

fn annotate_block(f: &FunctionDef, blk: &Block, out: &mut Vec<Objective>) {
    for s in &blk.stmts {
        let loc = s.loc();
        let mut exprs: Vec<&Expr> = Vec::new();
        match s {
            Stmt::Decl { init, .. } => exprs.extend(init.as_ref()),
            Stmt::Assign { target, value, .. } => {
                if let LValue::Cell(_, idx) = target {
                    exprs.push(idx);
                }
                exprs.push(value);
            }
            Stmt::Call { target, args, .. } => {
                if let Some(LValue::Cell(_, idx)) = target {
                    exprs.push(idx);
                }
                exprs.extend(args.iter());
            }
            Stmt::If { cond, .. } | Stmt::While { cond, .. } => exprs.push(cond),
            Stmt::Return { value, .. } => exprs.push(value),
        }
        let mut k = 0;
        for e in exprs {
            for m in mutants(f, e) {
                k += 1;
                out.push(Objective::new(
                    format!("WM':loc{loc}:{k}"),
                    CriterionId::WmPrime,
                    Hyperlabel::atom(Label::at(
                        loc,
                        Expr::bin(BinOp::Ne, e.clone(), m),
                    )),
                ));
            }
        }
        match s {
            Stmt::If {
                then_blk, else_blk, ..
            } => {
                annotate_block(f, then_blk, out);
                annotate_block(f, else_blk, out);
            }
            Stmt::While { body, .. } => annotate_block(f, body, out),
            _ => {}
        }
    }
}

/// All single-point mutants of `e`, skipping ones structurally identical
/// to the original.
fn mutants(f: &FunctionDef, e: &Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    collect_mutants(f, e, &mut |m| out.push(m));
    out.retain(|m| m != e);
    out
}

fn collect_mutants(f: &FunctionDef, e: &Expr, emit: &mut dyn FnMut(Expr)) {
    for op in point_ops(f, e) {
        emit(op);
    }
    match e {
        Expr::Un(op, inner) => {
            collect_mutants(f, inner, &mut |m| emit(Expr::Un(*op, Box::new(m))));
        }
        Expr::Bin(op, l, r) => {
            collect_mutants(f, l, &mut |m| {
                emit(Expr::Bin(*op, Box::new(m), r.clone()))
            });
            collect_mutants(f, r, &mut |m| {
                emit(Expr::Bin(*op, l.clone(), Box::new(m)))
            });
        }
        Expr::Index(v, idx) => {
            collect_mutants(f, idx, &mut |m| {
                emit(Expr::Index(v.clone(), Box::new(m)))
            });
        }
        _ => {}
    }
}

/// Mutations applying at the root of `e`.
fn point_ops(f: &FunctionDef, e: &Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    if let Expr::Bin(op, l, r) = e {
        for swapped in op_swaps(f, *op, l) {
            out.push(Expr::Bin(swapped, l.clone(), r.clone()));
        }
    }
    // negation insertion on integer expressions; negating the literal 0
    // cannot infect anything
    if ty_of(f, e) == Some(Ty::Int) && *e != Expr::IntLit(0) {
        out.push(Expr::Un(UnOp::Neg, Box::new(e.clone())));
    }
    out
}

fn op_swaps(f: &FunctionDef, op: BinOp, left: &Expr) -> Vec<BinOp> {
    use BinOp::*;
    match op {
        Add => vec![Sub],
        Sub => vec![Add],
        Mul => vec![Div],
        Div => vec![Mul],
        And => vec![Or],
        Or => vec![And],
        Lt | Le | Gt | Ge => [Lt, Le, Gt, Ge, Eq, Ne]
            .into_iter()
            .filter(|o| *o != op)
            .collect(),
        Eq | Ne => {
            if ty_of(f, left) == Some(Ty::Int) {
                [Lt, Le, Gt, Ge, Eq, Ne]
                    .into_iter()
                    .filter(|o| *o != op)
                    .collect()
            } else {
                // only the opposite equality keeps non-integer operands
                // well typed
                vec![if op == Eq { Ne } else { Eq }]
            }
        }
        Mod | Imp => Vec::new(),
    }
}

/// Type of a program expression; relies on resolved slots.
fn ty_of(f: &FunctionDef, e: &Expr) -> Option<Ty> {
    match e {
        Expr::IntLit(_) => Some(Ty::Int),
        Expr::BoolLit(_) => Some(Ty::Bool),
        Expr::Var(v) => v.slot.map(|s| f.vars[s as usize].ty),
        Expr::Index(_, _) => Some(Ty::Int),
        Expr::Un(UnOp::Not, _) => Some(Ty::Bool),
        Expr::Un(UnOp::Neg, _) => Some(Ty::Int),
        Expr::Bin(op, _, _) => match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod => Some(Ty::Int),
            _ => Some(Ty::Bool),
        },
        Expr::Meta(_) | Expr::Pc | Expr::LocLit(_) => None,
    }
}
