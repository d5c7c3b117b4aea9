//! Expression evaluation shared by the interpreter and the hyperlabel
//! machinery. One evaluator handles plain program expressions, binding
//! expressions and predicates over states, environments and `pc`.

use std::collections::BTreeMap;

use crate::minilang::ast::*;
use crate::trace::State;
use crate::value::Value;

/// Metavariable environment: name -> value.
pub type Env = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivByZero,
    #[error("array index out of bounds")]
    IndexOutOfBounds,
    /// A variable or metavariable without a value in this context.
    #[error("unresolved name")]
    Unresolved,
}

/// Everything an expression may refer to. Absent parts make the
/// corresponding atoms unresolved rather than being errors up front, so
/// the same predicate can be probed in partial contexts.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalCtx<'a> {
    pub state: Option<&'a State>,
    pub env: Option<&'a Env>,
    pub pc: Option<LocationId>,
}

impl<'a> EvalCtx<'a> {
    pub fn of_state(state: &'a State) -> Self {
        EvalCtx {
            state: Some(state),
            env: None,
            pc: None,
        }
    }
}

pub fn eval_expr(p: &Program, e: &Expr, ctx: &EvalCtx) -> Result<Value, EvalError> {
    match e {
        Expr::IntLit(n) => Ok(Value::Int(*n)),
        Expr::BoolLit(b) => Ok(Value::Bool(*b)),
        Expr::Var(v) => lookup_var(p, v, ctx).cloned(),
        Expr::Index(v, idx) => {
            let arr = lookup_var(p, v, ctx)?.clone();
            let i = eval_expr(p, idx, ctx)?.as_int().ok_or(EvalError::Unresolved)?;
            match arr {
                Value::Array(cells) => cells
                    .get(usize::try_from(i).map_err(|_| EvalError::IndexOutOfBounds)?)
                    .map(|&n| Value::Int(n))
                    .ok_or(EvalError::IndexOutOfBounds),
                _ => Err(EvalError::Unresolved),
            }
        }
        Expr::Un(UnOp::Not, inner) => {
            let b = eval_expr(p, inner, ctx)?.as_bool().ok_or(EvalError::Unresolved)?;
            Ok(Value::Bool(!b))
        }
        Expr::Un(UnOp::Neg, inner) => {
            let n = eval_expr(p, inner, ctx)?.as_int().ok_or(EvalError::Unresolved)?;
            Ok(Value::Int(n.wrapping_neg()))
        }
        Expr::Bin(BinOp::Imp, lhs, rhs) => {
            // implication short-circuits on a false antecedent
            let a = eval_expr(p, lhs, ctx)?.as_bool().ok_or(EvalError::Unresolved)?;
            if !a {
                return Ok(Value::Bool(true));
            }
            let b = eval_expr(p, rhs, ctx)?.as_bool().ok_or(EvalError::Unresolved)?;
            Ok(Value::Bool(b))
        }
        Expr::Bin(op, lhs, rhs) => {
            let a = eval_expr(p, lhs, ctx)?;
            let b = eval_expr(p, rhs, ctx)?;
            eval_bin(*op, a, b)
        }
        Expr::Meta(name) => ctx
            .env
            .and_then(|env| env.get(name))
            .cloned()
            .ok_or(EvalError::Unresolved),
        Expr::Pc => ctx
            .pc
            .map(|loc| Value::Int(loc as i64))
            .ok_or(EvalError::Unresolved),
        Expr::LocLit(loc) => Ok(Value::Int(*loc as i64)),
    }
}

fn lookup_var<'a>(p: &Program, v: &VarRef, ctx: &EvalCtx<'a>) -> Result<&'a Value, EvalError> {
    let state = ctx.state.ok_or(EvalError::Unresolved)?;
    let slot = match v.slot {
        Some(s) => Some(s),
        None => p.functions[state.func].slot_of(&v.name),
    };
    slot.and_then(|s| state.slots.get(s as usize))
        .and_then(Option::as_ref)
        .ok_or(EvalError::Unresolved)
}

fn eval_bin(op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
    use BinOp::*;
    match op {
        Eq => return Ok(Value::Bool(a == b)),
        Ne => return Ok(Value::Bool(a != b)),
        And | Or => {
            // both operands evaluate; `&&`/`||` are not short-circuiting
            let (x, y) = (
                a.as_bool().ok_or(EvalError::Unresolved)?,
                b.as_bool().ok_or(EvalError::Unresolved)?,
            );
            return Ok(Value::Bool(if op == And { x && y } else { x || y }));
        }
        _ => {}
    }
    let (x, y) = (
        a.as_int().ok_or(EvalError::Unresolved)?,
        b.as_int().ok_or(EvalError::Unresolved)?,
    );
    Ok(match op {
        Add => Value::Int(x.wrapping_add(y)),
        Sub => Value::Int(x.wrapping_sub(y)),
        Mul => Value::Int(x.wrapping_mul(y)),
        Div => {
            if y == 0 {
                return Err(EvalError::DivByZero);
            }
            Value::Int(x.wrapping_div(y))
        }
        Mod => {
            if y == 0 {
                return Err(EvalError::DivByZero);
            }
            Value::Int(x.wrapping_rem(y))
        }
        Lt => Value::Bool(x < y),
        Le => Value::Bool(x <= y),
        Gt => Value::Bool(x > y),
        Ge => Value::Bool(x >= y),
        Eq | Ne | And | Or | Imp => unreachable!("handled above"),
    })
}

/// Evaluates a predicate, mapping every evaluation failure to `false`.
/// Predicates over states never abort a run; an expression that divides by
/// zero or mentions an out-of-scope variable simply does not hold there.
pub fn holds(p: &Program, pred: &Expr, ctx: &EvalCtx) -> bool {
    matches!(eval_expr(p, pred, ctx), Ok(Value::Bool(true)))
}
