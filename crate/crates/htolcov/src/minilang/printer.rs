//! Pretty-printer for MiniImp programs and expressions. `parse(print(p))`
//! yields a structurally identical program.

use crate::minilang::ast::*;

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for f in &p.functions {
        print_function(&mut out, f);
        out.push('\n');
    }
    out
}

fn print_function(out: &mut String, f: &FunctionDef) {
    out.push_str(&format!("{} {}(", f.ret_ty, f.name));
    for (i, p) in f.param_decls().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("{} {}", p.ty, p.name));
    }
    out.push_str(") {\n");
    print_block(out, f, &f.body, 1);
    out.push_str("}\n");
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn print_block(out: &mut String, f: &FunctionDef, blk: &Block, depth: usize) {
    for s in &blk.stmts {
        print_stmt(out, f, s, depth);
    }
}

fn print_stmt(out: &mut String, f: &FunctionDef, s: &Stmt, depth: usize) {
    indent(out, depth);
    match s {
        Stmt::Decl { slot, init, .. } => {
            let v = &f.vars[*slot as usize];
            match init {
                Some(e) => out.push_str(&format!("{} {} := {};\n", v.ty, v.name, print_expr(e))),
                None => out.push_str(&format!("{} {};\n", v.ty, v.name)),
            }
        }
        Stmt::Assign { target, value, .. } => {
            out.push_str(&format!("{} := {};\n", print_lvalue(target), print_expr(value)));
        }
        Stmt::Call {
            target,
            callee,
            args,
            ..
        } => {
            if let Some(t) = target {
                out.push_str(&format!("{} := ", print_lvalue(t)));
            }
            out.push_str(callee);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&print_expr(a));
            }
            out.push_str(");\n");
        }
        Stmt::If {
            cond,
            then_blk,
            else_blk,
            ..
        } => {
            out.push_str(&format!("if ({}) {{\n", print_expr(cond)));
            print_block(out, f, then_blk, depth + 1);
            indent(out, depth);
            if else_blk.stmts.is_empty() {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                print_block(out, f, else_blk, depth + 1);
                indent(out, depth);
                out.push_str("}\n");
            }
        }
        Stmt::While { cond, body, .. } => {
            out.push_str(&format!("while ({}) {{\n", print_expr(cond)));
            print_block(out, f, body, depth + 1);
            indent(out, depth);
            out.push_str("}\n");
        }
        Stmt::Return { value, .. } => {
            out.push_str(&format!("return {};\n", print_expr(value)));
        }
    }
}

fn print_lvalue(lv: &LValue) -> String {
    match lv {
        LValue::Var(v) => v.name.clone(),
        LValue::Cell(v, idx) => format!("{}[{}]", v.name, print_expr(idx)),
    }
}

fn bin_op_str(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
        BinOp::Mod => "%",
        BinOp::Eq => "==",
        BinOp::Ne => "!=",
        BinOp::Lt => "<",
        BinOp::Le => "<=",
        BinOp::Gt => ">",
        BinOp::Ge => ">=",
        BinOp::And => "&&",
        BinOp::Or => "||",
        BinOp::Imp => "=>",
    }
}

/// Fully parenthesised rendering; re-parsing yields the same tree without
/// precedence bookkeeping.
pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::IntLit(n) => {
            if *n < 0 {
                format!("({n})")
            } else {
                n.to_string()
            }
        }
        Expr::BoolLit(b) => b.to_string(),
        Expr::Var(v) => v.name.clone(),
        Expr::Index(v, idx) => format!("{}[{}]", v.name, print_expr(idx)),
        Expr::Un(UnOp::Not, e) => format!("(!{})", print_expr(e)),
        Expr::Un(UnOp::Neg, e) => format!("(-{})", print_expr(e)),
        Expr::Bin(op, l, r) => format!("({} {} {})", print_expr(l), bin_op_str(*op), print_expr(r)),
        Expr::Meta(name) => name.clone(),
        Expr::Pc => "pc".to_string(),
        Expr::LocLit(loc) => format!("loc{loc}"),
    }
}
