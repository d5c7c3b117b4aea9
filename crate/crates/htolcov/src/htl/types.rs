//! Metavariable typing for hyperlabels. Binding expressions fix each
//! metavariable's type; every predicate must then be boolean in its own
//! context (state at a location, run steps, or pure environment).

use std::collections::BTreeMap;

use crate::htl::ast::*;
use crate::lexer::Pos;
use crate::minilang::ast::*;
use crate::minilang::parser::{type_of_expr, ParseError, TypeCtx};

/// Infers the type of every metavariable and type-checks all predicates.
/// `pos` is used for error reporting; programmatic callers pass a dummy.
pub fn check_types(
    p: &Program,
    h: &Hyperlabel,
    pos: Pos,
) -> Result<BTreeMap<String, Ty>, ParseError> {
    let mut metas = BTreeMap::new();
    collect_binding_tys(p, h, pos, &mut metas)?;
    check_preds(p, h, pos, &metas)?;
    Ok(metas)
}

fn check_loc(p: &Program, loc: LocationId, pos: Pos) -> Result<(), ParseError> {
    if loc == 0 || loc as usize > p.num_locations() {
        return Err(ParseError::syntax(
            pos,
            format!("loc{loc} does not exist (program has {} locations)", p.num_locations()),
        ));
    }
    Ok(())
}

fn collect_binding_tys(
    p: &Program,
    h: &Hyperlabel,
    pos: Pos,
    metas: &mut BTreeMap<String, Ty>,
) -> Result<(), ParseError> {
    for l in h.labels() {
        check_loc(p, l.loc, pos)?;
        for b in &l.bindings {
            let ctx = AtLoc {
                p,
                loc: l.loc,
                metas: &BTreeMap::new(),
                pos,
            };
            let ty = type_of_expr(&b.expr, &ctx)?;
            if ty == Ty::Loc {
                return Err(ParseError::ty(
                    pos,
                    format!("`{}` cannot bind a location", b.name),
                ));
            }
            match metas.get(&b.name) {
                None => {
                    metas.insert(b.name.clone(), ty);
                }
                Some(&prev) if prev == ty => {}
                Some(&prev) => {
                    return Err(ParseError::ty(
                        pos,
                        format!("`{}` is bound both as {prev} and as {ty}", b.name),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_preds(
    p: &Program,
    h: &Hyperlabel,
    pos: Pos,
    metas: &BTreeMap<String, Ty>,
) -> Result<(), ParseError> {
    match h {
        Hyperlabel::Atom(l) => check_label(p, l, pos),
        Hyperlabel::Seq(s) => {
            for l in &s.labels {
                check_label(p, l, pos)?;
            }
            for pred in &s.path_preds {
                expect_bool(pred, &Dynamic { p, metas, pos }, "path predicate")?;
            }
            Ok(())
        }
        Hyperlabel::Guard(inner, psi) => {
            check_preds(p, inner, pos, metas)?;
            expect_bool(psi, &Pure { metas, pos }, "guard")
        }
        Hyperlabel::Conj(a, b) | Hyperlabel::Disj(a, b) => {
            check_preds(p, a, pos, metas)?;
            check_preds(p, b, pos, metas)
        }
    }
}

fn check_label(p: &Program, l: &Label, pos: Pos) -> Result<(), ParseError> {
    let none = BTreeMap::new();
    let ctx = AtLoc {
        p,
        loc: l.loc,
        metas: &none,
        pos,
    };
    expect_bool(&l.pred, &ctx, "label predicate")
}

fn expect_bool(e: &Expr, ctx: &dyn TypeCtx, what: &str) -> Result<(), ParseError> {
    let ty = type_of_expr(e, ctx)?;
    if ty != Ty::Bool {
        return Err(ParseError::ty(
            ctx.pos(),
            format!("{what} has type {ty}, expected bool"),
        ));
    }
    Ok(())
}

/// Variables in scope at a fixed location; used for label predicates and
/// binding expressions.
struct AtLoc<'a> {
    p: &'a Program,
    loc: LocationId,
    metas: &'a BTreeMap<String, Ty>,
    pos: Pos,
}

impl TypeCtx for AtLoc<'_> {
    fn var_ty(&self, name: &str) -> Option<Ty> {
        let f = self.p.function_of_loc(self.loc);
        let slot = f.slot_of(name)?;
        if self.p.in_scope(self.loc, slot) {
            Some(f.vars[slot as usize].ty)
        } else {
            None
        }
    }

    fn meta_ty(&self, name: &str) -> Option<Ty> {
        self.metas.get(name).copied()
    }

    fn pos(&self) -> Pos {
        self.pos
    }
}

/// Path-predicate context: program variables resolve dynamically at run
/// time, so typing uses the first declaration of the name anywhere.
struct Dynamic<'a> {
    p: &'a Program,
    metas: &'a BTreeMap<String, Ty>,
    pos: Pos,
}

impl TypeCtx for Dynamic<'_> {
    fn var_ty(&self, name: &str) -> Option<Ty> {
        self.p
            .functions
            .iter()
            .find_map(|f| f.slot_of(name).map(|s| f.vars[s as usize].ty))
    }

    fn meta_ty(&self, name: &str) -> Option<Ty> {
        self.metas.get(name).copied()
    }

    fn pos(&self) -> Pos {
        self.pos
    }
}

/// Guard context: metavariables only.
struct Pure<'a> {
    metas: &'a BTreeMap<String, Ty>,
    pos: Pos,
}

impl TypeCtx for Pure<'_> {
    fn var_ty(&self, _name: &str) -> Option<Ty> {
        None
    }

    fn meta_ty(&self, name: &str) -> Option<Ty> {
        self.metas.get(name).copied()
    }

    fn pos(&self) -> Pos {
        self.pos
    }
}
