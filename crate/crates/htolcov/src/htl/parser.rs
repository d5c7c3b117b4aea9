//! Parser for hyperlabel files. A file holds named definitions:
//!
//! ```text
//! # objectives for prog.mimp
//! h1 = l(loc3, x == y && a < b);
//! h6 = guard( l(loc1, true){lo <- low; r <- res}
//!           . l(loc1, true){lo' <- low; r' <- res} )
//!      with (lo == lo' && r != r');
//! ```
//!
//! Operators on hyperlabels: `.` (conjunction) binds tighter than `+`
//! (disjunction); `[ l1 ->(phi) l2 ]` is a sequence, the arrow predicate
//! defaulting to `true`.
//!
//! Identifier resolution in predicates: `pc` and `locN` are reserved; in
//! label predicates and bindings, names resolve to program variables in
//! scope at the label's location; in path predicates, names that exist in
//! some function resolve to program variables (looked up dynamically at
//! evaluation time) and shadow metavariables; in guards every name is a
//! metavariable.

use std::collections::BTreeMap;

use crate::htl::ast::*;
use crate::htl::types::check_types;
use crate::lexer::{Lexer, Pos, Tok};
use crate::minilang::ast::*;
use crate::minilang::parser::{expect, parse_expr, AtomResolver, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedHyperlabel {
    pub name: String,
    pub hl: Hyperlabel,
    pub meta_tys: BTreeMap<String, Ty>,
}

pub fn parse_htl(src: &str, p: &Program) -> Result<Vec<NamedHyperlabel>, ParseError> {
    let mut lx = Lexer::new(src)?;
    let mut out: Vec<NamedHyperlabel> = Vec::new();
    while !lx.eat(&Tok::Eof) {
        let pos = lx.pos();
        let name = match lx.next() {
            Tok::Ident(n) => n,
            t => return Err(ParseError::syntax(pos, format!("expected a definition name, found {t}"))),
        };
        if out.iter().any(|d| d.name == name) {
            return Err(ParseError::syntax(pos, format!("duplicate definition `{name}`")));
        }
        expect(&mut lx, &Tok::Equals)?;
        let hl = parse_hl(&mut lx, p)?;
        expect(&mut lx, &Tok::Semi)?;
        let meta_tys = check_types(p, &hl, pos)?;
        out.push(NamedHyperlabel { name, hl, meta_tys });
    }
    Ok(out)
}

/// Parses a single hyperlabel expression; test and tooling convenience.
pub fn parse_hyperlabel(
    src: &str,
    p: &Program,
) -> Result<(Hyperlabel, BTreeMap<String, Ty>), ParseError> {
    let mut lx = Lexer::new(src)?;
    let pos = lx.pos();
    let hl = parse_hl(&mut lx, p)?;
    expect(&mut lx, &Tok::Eof)?;
    let meta_tys = check_types(p, &hl, pos)?;
    Ok((hl, meta_tys))
}

fn parse_hl(lx: &mut Lexer, p: &Program) -> Result<Hyperlabel, ParseError> {
    let mut h = parse_conj(lx, p)?;
    while lx.eat(&Tok::Plus) {
        let rhs = parse_conj(lx, p)?;
        h = Hyperlabel::disj(h, rhs);
    }
    Ok(h)
}

fn parse_conj(lx: &mut Lexer, p: &Program) -> Result<Hyperlabel, ParseError> {
    let mut h = parse_unit(lx, p)?;
    while lx.eat(&Tok::Dot) {
        let rhs = parse_unit(lx, p)?;
        h = Hyperlabel::conj(h, rhs);
    }
    Ok(h)
}

fn parse_unit(lx: &mut Lexer, p: &Program) -> Result<Hyperlabel, ParseError> {
    let pos = lx.pos();
    match lx.peek() {
        Tok::LParen => {
            lx.next();
            let h = parse_hl(lx, p)?;
            expect(lx, &Tok::RParen)?;
            Ok(h)
        }
        Tok::LBracket => parse_sequence(lx, p),
        Tok::KwGuard => {
            lx.next();
            expect(lx, &Tok::LParen)?;
            let inner = parse_hl(lx, p)?;
            expect(lx, &Tok::RParen)?;
            expect(lx, &Tok::KwWith)?;
            expect(lx, &Tok::LParen)?;
            let psi = parse_expr(lx, &mut HtlResolver::new(p, Mode::Pure))?;
            expect(lx, &Tok::RParen)?;
            Ok(Hyperlabel::guard(inner, psi))
        }
        Tok::Ident(name) if name == "l" => Ok(Hyperlabel::Atom(parse_label(lx, p)?)),
        t => Err(ParseError::syntax(
            pos,
            format!("expected a hyperlabel, found {t}"),
        )),
    }
}

fn parse_sequence(lx: &mut Lexer, p: &Program) -> Result<Hyperlabel, ParseError> {
    expect(lx, &Tok::LBracket)?;
    let mut labels = vec![parse_label(lx, p)?];
    let mut path_preds = Vec::new();
    while !lx.eat(&Tok::RBracket) {
        expect(lx, &Tok::SeqArrow)?;
        let pred = if lx.eat(&Tok::LParen) {
            let e = parse_expr(lx, &mut HtlResolver::new(p, Mode::Dynamic))?;
            expect(lx, &Tok::RParen)?;
            e
        } else {
            Expr::BoolLit(true)
        };
        path_preds.push(pred);
        labels.push(parse_label(lx, p)?);
    }
    Ok(Hyperlabel::seq(labels, path_preds))
}

fn parse_label(lx: &mut Lexer, p: &Program) -> Result<Label, ParseError> {
    let pos = lx.pos();
    match lx.next() {
        Tok::Ident(kw) if kw == "l" => {}
        t => return Err(ParseError::syntax(pos, format!("expected `l(...)`, found {t}"))),
    }
    expect(lx, &Tok::LParen)?;
    let loc_pos = lx.pos();
    let loc = match lx.next() {
        Tok::Ident(name) => loc_literal(&name).ok_or_else(|| {
            ParseError::syntax(loc_pos, format!("expected a location `locN`, found `{name}`"))
        })?,
        t => return Err(ParseError::syntax(loc_pos, format!("expected a location, found {t}"))),
    };
    if loc == 0 || loc as usize > p.num_locations() {
        return Err(ParseError::syntax(
            loc_pos,
            format!("loc{loc} does not exist (program has {} locations)", p.num_locations()),
        ));
    }
    expect(lx, &Tok::Comma)?;
    let pred = parse_expr(lx, &mut HtlResolver::new(p, Mode::AtLoc(loc)))?;
    expect(lx, &Tok::RParen)?;
    let mut label = Label::at(loc, pred);
    if lx.eat(&Tok::LBrace) {
        loop {
            let pos = lx.pos();
            let name = match lx.next() {
                Tok::Ident(n) => n,
                t => return Err(ParseError::syntax(pos, format!("expected a binding name, found {t}"))),
            };
            if name == "pc" || loc_literal(&name).is_some() {
                return Err(ParseError::syntax(pos, format!("`{name}` is reserved")));
            }
            expect(lx, &Tok::BindArrow)?;
            let expr = parse_expr(lx, &mut HtlResolver::new(p, Mode::AtLoc(loc)))?;
            label.bindings.push(Binding { name, expr });
            if !lx.eat(&Tok::Semi) {
                break;
            }
            if lx.peek() == &Tok::RBrace {
                break;
            }
        }
        expect(lx, &Tok::RBrace)?;
    }
    Ok(label)
}

/// `locN` with a numeric suffix; other `loc...` identifiers stay names.
fn loc_literal(name: &str) -> Option<LocationId> {
    let rest = name.strip_prefix("loc")?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

enum Mode {
    /// Label predicate or binding expression at a fixed location.
    AtLoc(LocationId),
    /// Path predicate, evaluated at arbitrary steps.
    Dynamic,
    /// Guard, over metavariables only.
    Pure,
}

struct HtlResolver<'a> {
    p: &'a Program,
    mode: Mode,
}

impl<'a> HtlResolver<'a> {
    fn new(p: &'a Program, mode: Mode) -> Self {
        HtlResolver { p, mode }
    }
}

impl AtomResolver for HtlResolver<'_> {
    fn allow_implies(&self) -> bool {
        true
    }

    fn resolve(&mut self, name: &str, pos: Pos) -> Result<Expr, ParseError> {
        if name == "pc" {
            return Ok(Expr::Pc);
        }
        if let Some(n) = loc_literal(name) {
            return Ok(Expr::LocLit(n));
        }
        Ok(match self.mode {
            Mode::AtLoc(loc) => {
                let f = self.p.function_of_loc(loc);
                match f.slot_of(name) {
                    Some(slot) if self.p.in_scope(loc, slot) => Expr::var(name, slot),
                    Some(_) => {
                        return Err(ParseError::syntax(
                            pos,
                            format!("`{name}` is not in scope at loc{loc}"),
                        ))
                    }
                    None => Expr::Meta(name.to_string()),
                }
            }
            Mode::Dynamic => {
                if self.p.functions.iter().any(|f| f.slot_of(name).is_some()) {
                    Expr::Var(VarRef {
                        name: name.to_string(),
                        slot: None,
                    })
                } else {
                    Expr::Meta(name.to_string())
                }
            }
            Mode::Pure => Expr::Meta(name.to_string()),
        })
    }
}
