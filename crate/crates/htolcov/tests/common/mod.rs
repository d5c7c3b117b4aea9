//! Shared randomized generators for the integration tests. Programs are
//! generated as source text and then parsed, so everything the tests see
//! went through the real frontend. Loops are bounded by construction to
//! keep runs short enough for the brute-force oracle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use htolcov::htl::{Hyperlabel, Label};
use htolcov::minilang::ast::{BinOp, Expr, Program};
use htolcov::minilang::parser::parse_program;
use htolcov::trace::TestDatum;
use htolcov::value::Value;

pub fn gen_program(rng: &mut ChaCha8Rng) -> Program {
    let mut src = String::from("int f(int x, int y) {\n");
    let mut scope = vec!["x".to_string(), "y".to_string()];
    let mut fresh = 0;
    let mut loops = 0;
    let n = rng.gen_range(2..=5);
    for _ in 0..n {
        gen_stmt(rng, &mut src, &mut scope, &mut fresh, &mut loops, 1);
    }
    src.push_str(&format!("    return {};\n}}\n", int_expr(rng, &scope, 2)));
    parse_program(&src).unwrap_or_else(|e| panic!("generated program failed to parse: {e}\n{src}"))
}

fn gen_stmt(
    rng: &mut ChaCha8Rng,
    src: &mut String,
    scope: &mut Vec<String>,
    fresh: &mut usize,
    loops: &mut usize,
    depth: usize,
) {
    let pad = "    ".repeat(depth);
    match rng.gen_range(0..6) {
        0 | 1 => {
            let v = scope[rng.gen_range(0..scope.len())].clone();
            src.push_str(&format!("{pad}{v} := {};\n", int_expr(rng, scope, 2)));
        }
        2 => {
            let name = format!("t{}", *fresh);
            *fresh += 1;
            src.push_str(&format!("{pad}int {name} := {};\n", int_expr(rng, scope, 2)));
            scope.push(name);
        }
        3 | 4 if depth < 3 => {
            src.push_str(&format!("{pad}if ({}) {{\n", bool_expr(rng, scope)));
            gen_block(rng, src, scope, fresh, loops, depth);
            if rng.gen_bool(0.6) {
                src.push_str(&format!("{pad}}} else {{\n"));
                gen_block(rng, src, scope, fresh, loops, depth);
            }
            src.push_str(&format!("{pad}}}\n"));
        }
        5 if depth < 3 && *loops < 2 => {
            *loops += 1;
            // counts up to a small constant, so every run terminates fast
            let c = format!("c{}", *fresh);
            *fresh += 1;
            let bound = rng.gen_range(1..=3);
            src.push_str(&format!("{pad}int {c} := 0;\n"));
            src.push_str(&format!("{pad}while ({c} < {bound}) {{\n"));
            let mark = scope.len();
            scope.push(c.clone());
            let body = rng.gen_range(0..=2);
            for _ in 0..body {
                gen_stmt(rng, src, scope, fresh, loops, depth + 1);
            }
            src.push_str(&format!("{pad}    {c} := {c} + 1;\n{pad}}}\n"));
            scope.truncate(mark);
            scope.push(c);
        }
        _ => {
            let v = scope[rng.gen_range(0..scope.len())].clone();
            src.push_str(&format!("{pad}{v} := {};\n", int_expr(rng, scope, 1)));
        }
    }
}

fn gen_block(
    rng: &mut ChaCha8Rng,
    src: &mut String,
    scope: &mut Vec<String>,
    fresh: &mut usize,
    loops: &mut usize,
    depth: usize,
) {
    let mark = scope.len();
    let n = rng.gen_range(1..=2);
    for _ in 0..n {
        gen_stmt(rng, src, scope, fresh, loops, depth + 1);
    }
    scope.truncate(mark);
}

fn int_expr(rng: &mut ChaCha8Rng, scope: &[String], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.4) {
        if rng.gen_bool(0.5) {
            scope[rng.gen_range(0..scope.len())].clone()
        } else {
            rng.gen_range(-5..=5).to_string()
        }
    } else {
        let op = ["+", "-", "*"][rng.gen_range(0..3)];
        format!(
            "({} {op} {})",
            int_expr(rng, scope, depth - 1),
            int_expr(rng, scope, depth - 1)
        )
    }
}

fn bool_expr(rng: &mut ChaCha8Rng, scope: &[String]) -> String {
    let cmp = |rng: &mut ChaCha8Rng| {
        let op = ["<", "<=", ">", ">=", "==", "!="][rng.gen_range(0..6)];
        format!(
            "{} {op} {}",
            scope[rng.gen_range(0..scope.len())],
            int_expr(rng, scope, 1)
        )
    };
    match rng.gen_range(0..3) {
        0 => cmp(rng),
        1 => format!("{} && {}", cmp(rng), cmp(rng)),
        _ => format!("{} || {}", cmp(rng), cmp(rng)),
    }
}

/// Small input values make value collisions across tests likely, which
/// keeps guards over shared bindings satisfiable.
pub fn gen_suite(rng: &mut ChaCha8Rng, size: usize) -> Vec<TestDatum> {
    (0..size)
        .map(|i| {
            TestDatum::new(
                &format!("t{i}"),
                vec![
                    ("x", Value::Int(rng.gen_range(-5..=5))),
                    ("y", Value::Int(rng.gen_range(-5..=5))),
                ],
            )
        })
        .collect()
}

/// A random hyperlabel over `p` that is well formed by construction:
/// every recursive call receives the exact set of names it must bind.
pub fn gen_hyperlabel(rng: &mut ChaCha8Rng, p: &Program, names: &[String], depth: usize) -> Hyperlabel {
    let kind = if depth == 0 { 0 } else { rng.gen_range(0..8) };
    match kind {
        1 | 2 => {
            // sequence: distribute the names over 2..3 labels, one path
            // predicate between each pair
            let n = rng.gen_range(2..=3);
            let mut parts = split_names(rng, names, n);
            let labels: Vec<Label> = (0..n)
                .map(|i| bind_all(gen_label(rng, p), std::mem::take(&mut parts[i])))
                .collect();
            let preds = (1..n).map(|_| path_pred(rng, p)).collect();
            Hyperlabel::seq(labels, preds)
        }
        3 | 4 => {
            let inner = gen_hyperlabel(rng, p, names, depth - 1);
            Hyperlabel::guard(inner, guard_pred(rng, names))
        }
        5 | 6 => {
            let mut parts = split_names(rng, names, 2);
            Hyperlabel::conj(
                gen_hyperlabel(rng, p, &std::mem::take(&mut parts[0]), depth - 1),
                gen_hyperlabel(rng, p, &std::mem::take(&mut parts[1]), depth - 1),
            )
        }
        7 => Hyperlabel::disj(
            gen_hyperlabel(rng, p, names, depth - 1),
            gen_hyperlabel(rng, p, names, depth - 1),
        ),
        _ => Hyperlabel::atom(bind_all(gen_label(rng, p), names.to_vec())),
    }
}

fn split_names(rng: &mut ChaCha8Rng, names: &[String], parts: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new(); parts];
    for n in names {
        out[rng.gen_range(0..parts)].push(n.clone());
    }
    out
}

fn gen_label(rng: &mut ChaCha8Rng, p: &Program) -> Label {
    let loc = rng.gen_range(1..=p.num_locations() as u32);
    // predicates stick to the parameters, which are in scope everywhere
    let pred = match rng.gen_range(0..4) {
        0 => Expr::bin(BinOp::Lt, var("x"), Expr::IntLit(rng.gen_range(-3..=3))),
        1 => Expr::bin(BinOp::Ne, var("x"), var("y")),
        _ => Expr::BoolLit(true),
    };
    Label::at(loc, pred)
}

fn bind_all(mut label: Label, names: Vec<String>) -> Label {
    for n in names {
        label = label.bind(&n, binding_expr(&n));
    }
    label
}

fn binding_expr(name: &str) -> Expr {
    // different names bind different expressions, all over parameters
    if name.ends_with('1') {
        var("x")
    } else {
        Expr::bin(BinOp::Add, var("x"), var("y"))
    }
}

fn path_pred(rng: &mut ChaCha8Rng, p: &Program) -> Expr {
    match rng.gen_range(0..3) {
        0 => Expr::bin(
            BinOp::Ne,
            Expr::Pc,
            Expr::LocLit(rng.gen_range(1..=p.num_locations() as u32)),
        ),
        _ => Expr::BoolLit(true),
    }
}

fn guard_pred(rng: &mut ChaCha8Rng, names: &[String]) -> Expr {
    match names {
        [] => Expr::BoolLit(true),
        [a] => Expr::bin(
            if rng.gen_bool(0.5) { BinOp::Ne } else { BinOp::Lt },
            Expr::Meta(a.clone()),
            Expr::IntLit(rng.gen_range(-3..=3)),
        ),
        [a, b, ..] => Expr::bin(
            [BinOp::Eq, BinOp::Ne, BinOp::Lt][rng.gen_range(0..3)],
            Expr::Meta(a.clone()),
            Expr::Meta(b.clone()),
        ),
    }
}

fn var(name: &str) -> Expr {
    Expr::Var(htolcov::minilang::ast::VarRef {
        name: name.to_string(),
        slot: None,
    })
}

/// 0 to 2 metavariable names for the top-level call.
pub fn gen_names(rng: &mut ChaCha8Rng) -> Vec<String> {
    (1..=rng.gen_range(0..=2)).map(|i| format!("m{i}")).collect()
}
