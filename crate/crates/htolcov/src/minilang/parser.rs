//! Recursive-descent parser and type checker for MiniImp. Locations are
//! assigned densely in source order while parsing, so the same text always
//! yields the same `LocationId`s.

use std::collections::HashMap;

use thiserror::Error;

use crate::lexer::{LexError, Lexer, Pos, Tok};
use crate::minilang::ast::*;

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: undeclared variable `{name}`")]
    UndeclaredVariable { pos: Pos, name: String },
    #[error("{pos}: type mismatch: {msg}")]
    TypeMismatch { pos: Pos, msg: String },
    #[error("{pos}: duplicate function name `{name}`")]
    DuplicateFunction { pos: Pos, name: String },
    #[error("{pos}: duplicate variable `{name}`")]
    DuplicateVariable { pos: Pos, name: String },
    #[error("{pos}: call to undefined function `{name}`")]
    UndefinedFunction { pos: Pos, name: String },
}

impl ParseError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub fn ty(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::TypeMismatch {
            pos,
            msg: msg.into(),
        }
    }
}

/// Typing context for [`type_of_expr`]; implemented by the MiniImp parser
/// (program variables only) and by the HTL parser (variables in scope at a
/// label location plus metavariables).
pub trait TypeCtx {
    fn var_ty(&self, name: &str) -> Option<Ty>;
    fn meta_ty(&self, name: &str) -> Option<Ty>;
    fn pos(&self) -> Pos;
}

/// Computes the type of an expression, rejecting ill-typed operator uses.
pub fn type_of_expr(e: &Expr, ctx: &dyn TypeCtx) -> Result<Ty, ParseError> {
    let pos = ctx.pos();
    match e {
        Expr::IntLit(_) => Ok(Ty::Int),
        Expr::BoolLit(_) => Ok(Ty::Bool),
        Expr::Pc | Expr::LocLit(_) => Ok(Ty::Loc),
        Expr::Var(v) => ctx.var_ty(&v.name).ok_or_else(|| ParseError::UndeclaredVariable {
            pos,
            name: v.name.clone(),
        }),
        Expr::Meta(name) => ctx.meta_ty(name).ok_or_else(|| {
            ParseError::ty(pos, format!("unknown metavariable `{name}`"))
        }),
        Expr::Index(v, idx) => {
            let base = ctx.var_ty(&v.name).ok_or_else(|| ParseError::UndeclaredVariable {
                pos,
                name: v.name.clone(),
            })?;
            if !matches!(base, Ty::Array(_)) {
                return Err(ParseError::ty(pos, format!("`{}` is not an array", v.name)));
            }
            expect_ty(idx, Ty::Int, ctx, "array index")?;
            Ok(Ty::Int)
        }
        Expr::Un(UnOp::Not, e) => {
            expect_ty(e, Ty::Bool, ctx, "operand of `!`")?;
            Ok(Ty::Bool)
        }
        Expr::Un(UnOp::Neg, e) => {
            expect_ty(e, Ty::Int, ctx, "operand of unary `-`")?;
            Ok(Ty::Int)
        }
        Expr::Bin(op, lhs, rhs) => {
            let lt = type_of_expr(lhs, ctx)?;
            let rt = type_of_expr(rhs, ctx)?;
            use BinOp::*;
            match op {
                Add | Sub | Mul | Div | Mod => {
                    if lt == Ty::Int && rt == Ty::Int {
                        Ok(Ty::Int)
                    } else {
                        Err(ParseError::ty(pos, format!("arithmetic on {lt} and {rt}")))
                    }
                }
                Lt | Le | Gt | Ge => {
                    if lt == Ty::Int && rt == Ty::Int {
                        Ok(Ty::Bool)
                    } else {
                        Err(ParseError::ty(pos, format!("comparison of {lt} and {rt}")))
                    }
                }
                Eq | Ne => {
                    if lt == rt && matches!(lt, Ty::Int | Ty::Bool | Ty::Loc) {
                        Ok(Ty::Bool)
                    } else {
                        Err(ParseError::ty(pos, format!("equality of {lt} and {rt}")))
                    }
                }
                And | Or | Imp => {
                    if lt == Ty::Bool && rt == Ty::Bool {
                        Ok(Ty::Bool)
                    } else {
                        Err(ParseError::ty(pos, format!("boolean operator on {lt} and {rt}")))
                    }
                }
            }
        }
    }
}

fn expect_ty(e: &Expr, want: Ty, ctx: &dyn TypeCtx, what: &str) -> Result<(), ParseError> {
    let got = type_of_expr(e, ctx)?;
    if got != want {
        return Err(ParseError::ty(
            ctx.pos(),
            format!("{what} has type {got}, expected {want}"),
        ));
    }
    Ok(())
}

/// How identifiers in expression atoms are resolved.
pub trait AtomResolver {
    fn resolve(&mut self, name: &str, pos: Pos) -> Result<Expr, ParseError>;
    /// Whether `=>` is allowed (hyperlabel predicates only).
    fn allow_implies(&self) -> bool {
        false
    }
}

/// Precedence-climbing expression parser shared between MiniImp and HTL.
///// Precedence, loosest first: `=>`, `||`, `&&`, `==`/`!=`, relational,
/// additive, multiplicative, unary.
pub fn parse_expr(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    if res.allow_implies() {
        parse_implies(lx, res)
    } else {
        parse_or(lx, res)
    }
}

fn parse_implies(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let lhs = parse_or(lx, res)?;
    if lx.eat(&Tok::Implies) {
        // right-associative
        let rhs = parse_implies(lx, res)?;
        Ok(Expr::bin(BinOp::Imp, lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_or(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_and(lx, res)?;
    while lx.eat(&Tok::OrOr) {
        let rhs = parse_and(lx, res)?;
        e = Expr::bin(BinOp::Or, e, rhs);
    }
    Ok(e)
}

fn parse_and(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_eq(lx, res)?;
    while lx.eat(&Tok::AndAnd) {
        let rhs = parse_eq(lx, res)?;
        e = Expr::bin(BinOp::And, e, rhs);
    }
    Ok(e)
}

fn parse_eq(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_rel(lx, res)?;
    loop {
        let op = match lx.peek() {
            Tok::EqEq => BinOp::Eq,
            Tok::NotEq => BinOp::Ne,
            _ => break,
        };
        lx.next();
        let rhs = parse_rel(lx, res)?;
        e = Expr::bin(op, e, rhs);
    }
    Ok(e)
}

fn parse_rel(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_add(lx, res)?;
    loop {
        let op = match lx.peek() {
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => break,
        };
        lx.next();
        let rhs = parse_add(lx, res)?;
        e = Expr::bin(op, e, rhs);
    }
    Ok(e)
}

fn parse_add(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_mul(lx, res)?;
    loop {
        let op = match lx.peek() {
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            _ => break,
        };
        lx.next();
        let rhs = parse_mul(lx, res)?;
        e = Expr::bin(op, e, rhs);
    }
    Ok(e)
}

fn parse_mul(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let mut e = parse_unary(lx, res)?;
    loop {
        let op = match lx.peek() {
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Mod,
            _ => break,
        };
        lx.next();
        let rhs = parse_unary(lx, res)?;
        e = Expr::bin(op, e, rhs);
    }
    Ok(e)
}

fn parse_unary(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    match lx.peek() {
        Tok::Bang => {
            lx.next();
            Ok(Expr::not(parse_unary(lx, res)?))
        }
        Tok::Minus => {
            lx.next();
            Ok(Expr::Un(UnOp::Neg, Box::new(parse_unary(lx, res)?)))
        }
        _ => parse_atom(lx, res),
    }
}

fn parse_atom(lx: &mut Lexer, res: &mut dyn AtomResolver) -> Result<Expr, ParseError> {
    let pos = lx.pos();
    match lx.next() {
        Tok::Int(n) => Ok(Expr::IntLit(n)),
        Tok::KwTrue => Ok(Expr::BoolLit(true)),
        Tok::KwFalse => Ok(Expr::BoolLit(false)),
        Tok::LParen => {
            let e = parse_expr(lx, res)?;
            expect(lx, &Tok::RParen)?;
            Ok(e)
        }
        Tok::Ident(name) => {
            let base = res.resolve(&name, pos)?;
            if lx.eat(&Tok::LBracket) {
                let idx = parse_expr(lx, res)?;
                expect(lx, &Tok::RBracket)?;
                match base {
                    Expr::Var(v) => Ok(Expr::Index(v, Box::new(idx))),
                    _ => Err(ParseError::syntax(pos, format!("`{name}` cannot be indexed"))),
                }
            } else {
                Ok(base)
            }
        }
        t => Err(ParseError::syntax(pos, format!("expected expression, found {t}"))),
    }
}

pub(crate) fn expect(lx: &mut Lexer, want: &Tok) -> Result<(), ParseError> {
    if lx.eat(want) {
        Ok(())
    } else {
        Err(ParseError::syntax(
            lx.pos(),
            format!("expected {want}, found {}", lx.peek()),
        ))
    }
}

/// Parses and type-checks a MiniImp program.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let mut lx = Lexer::new(source)?;
    let mut functions: Vec<FunctionDef> = Vec::new();
    let mut location_table: Vec<LocInfo> = Vec::new();
    let mut pending_calls: Vec<PendingCall> = Vec::new();
    while !lx.eat(&Tok::Eof) {
        let func_idx = functions.len();
        let f = parse_function(
            &mut lx,
            func_idx,
            &mut location_table,
            &mut pending_calls,
        )?;
        if functions.iter().any(|g| g.name == f.name) {
            return Err(ParseError::DuplicateFunction {
                pos: f_pos(&location_table, &f),
                name: f.name,
            });
        }
        functions.push(f);
    }
    if functions.is_empty() {
        return Err(ParseError::syntax(lx.pos(), "program has no functions"));
    }
    check_calls(&functions, &pending_calls)?;
    Ok(Program {
        functions,
        entry: 0,
        location_table,
    })
}

fn f_pos(table: &[LocInfo], f: &FunctionDef) -> Pos {
    table[f.entry_loc as usize - 1].pos
}

struct PendingCall {
    pos: Pos,
    callee: String,
    arg_tys: Vec<Ty>,
    target_ty: Option<Ty>,
}

fn check_calls(functions: &[FunctionDef], calls: &[PendingCall]) -> Result<(), ParseError> {
    for call in calls {
        let callee = functions
            .iter()
            .find(|f| f.name == call.callee)
            .ok_or_else(|| ParseError::UndefinedFunction {
                pos: call.pos,
                name: call.callee.clone(),
            })?;
        let params: Vec<Ty> = callee.param_decls().iter().map(|p| p.ty).collect();
        if params.len() != call.arg_tys.len() {
            return Err(ParseError::ty(
                call.pos,
                format!(
                    "`{}` takes {} argument(s), got {}",
                    call.callee,
                    params.len(),
                    call.arg_tys.len()
                ),
            ));
        }
        for (i, (want, got)) in params.iter().zip(&call.arg_tys).enumerate() {
            if want != got {
                return Err(ParseError::ty(
                    call.pos,
                    format!("argument {} of `{}` has type {got}, expected {want}", i + 1, call.callee),
                ));
            }
        }
        if let Some(t) = call.target_ty {
            if t != callee.ret_ty {
                return Err(ParseError::ty(
                    call.pos,
                    format!("`{}` returns {}, assigned to {t}", call.callee, callee.ret_ty),
                ));
            }
        }
    }
    Ok(())
}

struct FuncParser<'a> {
    func_idx: usize,
    vars: Vec<VarDecl>,
    name_to_slot: HashMap<String, Slot>,
    /// Slots currently in scope, in declaration order.
    scope: Vec<Slot>,
    table: &'a mut Vec<LocInfo>,
    ret_ty: Ty,
    cur_pos: Pos,
}

impl TypeCtx for FuncParser<'_> {
    fn var_ty(&self, name: &str) -> Option<Ty> {
        let slot = *self.name_to_slot.get(name)?;
        if self.scope.contains(&slot) {
            Some(self.vars[slot as usize].ty)
        } else {
            None
        }
    }

    fn meta_ty(&self, _name: &str) -> Option<Ty> {
        None
    }

    fn pos(&self) -> Pos {
        self.cur_pos
    }
}

impl AtomResolver for FuncParser<'_> {
    fn resolve(&mut self, name: &str, pos: Pos) -> Result<Expr, ParseError> {
        match self.name_to_slot.get(name) {
            Some(&slot) if self.scope.contains(&slot) => Ok(Expr::var(name, slot)),
            _ => Err(ParseError::UndeclaredVariable {
                pos,
                name: name.to_string(),
            }),
        }
    }
}

impl FuncParser<'_> {
    fn declare(&mut self, name: &str, ty: Ty, pos: Pos) -> Result<Slot, ParseError> {
        if self.name_to_slot.contains_key(name) {
            return Err(ParseError::DuplicateVariable {
                pos,
                name: name.to_string(),
            });
        }
        let slot = self.vars.len() as Slot;
        self.vars.push(VarDecl {
            name: name.to_string(),
            ty,
            slot,
        });
        self.name_to_slot.insert(name.to_string(), slot);
        self.scope.push(slot);
        Ok(slot)
    }

    fn new_loc(&mut self, kind: LocKind, pos: Pos) -> LocationId {
        let mut scope = self.scope.clone();
        scope.sort_unstable();
        self.table.push(LocInfo {
            func: self.func_idx,
            kind,
            pos,
            scope,
        });
        self.table.len() as LocationId
    }

    fn check(&mut self, e: &Expr, want: Ty, what: &str, pos: Pos) -> Result<(), ParseError> {
        self.cur_pos = pos;
        expect_ty(e, want, self, what)
    }
}

fn parse_function(
    lx: &mut Lexer,
    func_idx: usize,
    table: &mut Vec<LocInfo>,
    pending_calls: &mut Vec<PendingCall>,
) -> Result<FunctionDef, ParseError> {
    let pos = lx.pos();
    let ret_ty = match lx.next() {
        Tok::KwInt => Ty::Int,
        Tok::KwBool => Ty::Bool,
        t => return Err(ParseError::syntax(pos, format!("expected return type, found {t}"))),
    };
    let name = parse_ident(lx)?;
    expect(lx, &Tok::LParen)?;
    let mut fp = FuncParser {
        func_idx,
        vars: Vec::new(),
        name_to_slot: HashMap::new(),
        scope: Vec::new(),
        table,
        ret_ty,
        cur_pos: pos,
    };
    if !lx.eat(&Tok::RParen) {
        loop {
            let pos = lx.pos();
            let ty = parse_type(lx)?;
            let pname = parse_ident(lx)?;
            fp.declare(&pname, ty, pos)?;
            if !lx.eat(&Tok::Comma) {
                expect(lx, &Tok::RParen)?;
                break;
            }
        }
    }
    let params = fp.vars.len();
    let body = parse_block(lx, &mut fp, pending_calls)?;
    let entry_loc = match body.stmts.first() {
        Some(s) => s.loc(),
        None => return Err(ParseError::syntax(pos, format!("function `{name}` has an empty body"))),
    };
    let locs: Vec<LocationId> = (entry_loc..=fp.table.len() as LocationId).collect();
    let name_to_slot = fp.name_to_slot;
    Ok(FunctionDef {
        name,
        ret_ty,
        params,
        vars: fp.vars,
        body,
        entry_loc,
        locs,
        name_to_slot,
    })
}

fn parse_ident(lx: &mut Lexer) -> Result<String, ParseError> {
    let pos = lx.pos();
    match lx.next() {
        Tok::Ident(s) => Ok(s),
        t => Err(ParseError::syntax(pos, format!("expected identifier, found {t}"))),
    }
}

/// `int`, `bool` or `int[N]`.
fn parse_type(lx: &mut Lexer) -> Result<Ty, ParseError> {
    let pos = lx.pos();
    match lx.next() {
        Tok::KwBool => Ok(Ty::Bool),
        Tok::KwInt => {
            if lx.eat(&Tok::LBracket) {
                let npos = lx.pos();
                let n = match lx.next() {
                    Tok::Int(n) if n > 0 => n as usize,
                    t => {
                        return Err(ParseError::syntax(
                            npos,
                            format!("expected array length, found {t}"),
                        ))
                    }
                };
                expect(lx, &Tok::RBracket)?;
                Ok(Ty::Array(n))
            } else {
                Ok(Ty::Int)
            }
        }
        t => Err(ParseError::syntax(pos, format!("expected type, found {t}"))),
    }
}

fn parse_block(
    lx: &mut Lexer,
    fp: &mut FuncParser<'_>,
    pending_calls: &mut Vec<PendingCall>,
) -> Result<Block, ParseError> {
    expect(lx, &Tok::LBrace)?;
    let scope_mark = fp.scope.len();
    let mut stmts = Vec::new();
    while !lx.eat(&Tok::RBrace) {
        stmts.push(parse_stmt(lx, fp, pending_calls)?);
    }
    // block-local variables go out of scope
    fp.scope.truncate(scope_mark);
    Ok(Block { stmts })
}

fn parse_stmt(
    lx: &mut Lexer,
    fp: &mut FuncParser<'_>,
    pending_calls: &mut Vec<PendingCall>,
) -> Result<Stmt, ParseError> {
    let pos = lx.pos();
    match lx.peek().clone() {
        Tok::KwInt | Tok::KwBool => {
            let ty = parse_type(lx)?;
            let name = parse_ident(lx)?;
            match ty {
                Ty::Array(_) => {
                    expect(lx, &Tok::Semi)?;
                    let slot = fp.declare(&name, ty, pos)?;
                    let loc = fp.new_loc(LocKind::Decl, pos);
                    Ok(Stmt::Decl {
                        loc,
                        slot,
                        init: None,
                    })
                }
                _ => {
                    expect(lx, &Tok::Assign)?;
                    let value = parse_expr(lx, fp)?;
                    expect(lx, &Tok::Semi)?;
                    fp.check(&value, ty, "initialiser", pos)?;
                    // the declared variable enters scope after its initialiser
                    let slot = fp.declare(&name, ty, pos)?;
                    let loc = fp.new_loc(LocKind::Decl, pos);
                    Ok(Stmt::Decl {
                        loc,
                        slot,
                        init: Some(value),
                    })
                }
            }
        }
        Tok::KwIf => {
            lx.next();
            expect(lx, &Tok::LParen)?;
            let cond = parse_expr(lx, fp)?;
            expect(lx, &Tok::RParen)?;
            fp.check(&cond, Ty::Bool, "if condition", pos)?;
            let loc = fp.new_loc(LocKind::IfCond, pos);
            let then_blk = parse_block(lx, fp, pending_calls)?;
            let else_blk = if lx.eat(&Tok::KwElse) {
                parse_block(lx, fp, pending_calls)?
            } else {
                Block::default()
            };
            Ok(Stmt::If {
                loc,
                cond,
                then_blk,
                else_blk,
            })
        }
        Tok::KwWhile => {
            lx.next();
            expect(lx, &Tok::LParen)?;
            let cond = parse_expr(lx, fp)?;
            expect(lx, &Tok::RParen)?;
            fp.check(&cond, Ty::Bool, "while condition", pos)?;
            let loc = fp.new_loc(LocKind::WhileCond, pos);
            let body = parse_block(lx, fp, pending_calls)?;
            Ok(Stmt::While { loc, cond, body })
        }
        Tok::KwReturn => {
            lx.next();
            let value = parse_expr(lx, fp)?;
            expect(lx, &Tok::Semi)?;
            let ret_ty = fp.ret_ty;
            fp.check(&value, ret_ty, "return value", pos)?;
            let loc = fp.new_loc(LocKind::Return, pos);
            Ok(Stmt::Return { loc, value })
        }
        Tok::Ident(name) => {
            if *lx.peek2() == Tok::LParen {
                // call statement: f(args);
                lx.next();
                let (args, arg_tys) = parse_args(lx, fp, pos)?;
                expect(lx, &Tok::Semi)?;
                pending_calls.push(PendingCall {
                    pos,
                    callee: name.clone(),
                    arg_tys,
                    target_ty: None,
                });
                let loc = fp.new_loc(LocKind::Call, pos);
                Ok(Stmt::Call {
                    loc,
                    target: None,
                    callee: name,
                    args,
                })
            } else {
                // lvalue := expr;   or   lvalue := f(args);
                let target = parse_lvalue(lx, fp, pos)?;
                expect(lx, &Tok::Assign)?;
                let target_ty = lvalue_ty(&target, fp, pos)?;
                if let (Tok::Ident(callee), Tok::LParen) = (lx.peek().clone(), lx.peek2().clone()) {
                    lx.next();
                    let (args, arg_tys) = parse_args(lx, fp, pos)?;
                    expect(lx, &Tok::Semi)?;
                    pending_calls.push(PendingCall {
                        pos,
                        callee: callee.clone(),
                        arg_tys,
                        target_ty: Some(target_ty),
                    });
                    let loc = fp.new_loc(LocKind::Call, pos);
                    Ok(Stmt::Call {
                        loc,
                        target: Some(target),
                        callee,
                        args,
                    })
                } else {
                    let value = parse_expr(lx, fp)?;
                    expect(lx, &Tok::Semi)?;
                    fp.check(&value, target_ty, "assigned value", pos)?;
                    let loc = fp.new_loc(LocKind::Assign, pos);
                    Ok(Stmt::Assign { loc, target, value })
                }
            }
        }
        t => Err(ParseError::syntax(pos, format!("expected statement, found {t}"))),
    }
}

fn parse_args(
    lx: &mut Lexer,
    fp: &mut FuncParser<'_>,
    pos: Pos,
) -> Result<(Vec<Expr>, Vec<Ty>), ParseError> {
    expect(lx, &Tok::LParen)?;
    let mut args = Vec::new();
    let mut tys = Vec::new();
    if !lx.eat(&Tok::RParen) {
        loop {
            let a = parse_expr(lx, fp)?;
            fp.cur_pos = pos;
            tys.push(type_of_expr(&a, fp)?);
            args.push(a);
            if !lx.eat(&Tok::Comma) {
                expect(lx, &Tok::RParen)?;
                break;
            }
        }
    }
    Ok((args, tys))
}

fn parse_lvalue(lx: &mut Lexer, fp: &mut FuncParser<'_>, pos: Pos) -> Result<LValue, ParseError> {
    let name = parse_ident(lx)?;
    let base = fp.resolve(&name, pos)?;
    let vref = match base {
        Expr::Var(v) => v,
        _ => unreachable!("resolver returns Var"),
    };
    if lx.eat(&Tok::LBracket) {
        let idx = parse_expr(lx, fp)?;
        expect(lx, &Tok::RBracket)?;
        fp.check(&idx, Ty::Int, "array index", pos)?;
        Ok(LValue::Cell(vref, Box::new(idx)))
    } else {
        Ok(LValue::Var(vref))
    }
}

fn lvalue_ty(lv: &LValue, fp: &FuncParser<'_>, pos: Pos) -> Result<Ty, ParseError> {
    match lv {
        LValue::Var(v) => {
            let ty = fp.vars[v.slot.unwrap() as usize].ty;
            if matches!(ty, Ty::Array(_)) {
                Err(ParseError::ty(pos, format!("cannot assign whole array `{}`", v.name)))
            } else {
                Ok(ty)
            }
        }
        LValue::Cell(v, _) => {
            let ty = fp.vars[v.slot.unwrap() as usize].ty;
            if matches!(ty, Ty::Array(_)) {
                Ok(Ty::Int)
            } else {
                Err(ParseError::ty(pos, format!("`{}` is not an array", v.name)))
            }
        }
    }
}
