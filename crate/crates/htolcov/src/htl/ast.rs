//! Hyperlabel AST. A hyperlabel combines located, binding labels with
//! sequencing, guards, conjunction and disjunction into one test
//! objective.

use crate::minilang::ast::{Expr, LocationId};

/// `name <- expr`: capture the value of `expr` at the matched step under
/// the metavariable `name`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
}

/// An atomic label: location, state predicate, bindings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub loc: LocationId,
    pub pred: Expr,
    pub bindings: Vec<Binding>,
}

impl Label {
    pub fn at(loc: LocationId, pred: Expr) -> Label {
        Label {
            loc,
            pred,
            bindings: Vec::new(),
        }
    }

    pub fn bind(mut self, name: &str, expr: Expr) -> Label {
        self.bindings.push(Binding {
            name: name.to_string(),
            expr,
        });
        self
    }
}

/// `[ l1 ->(phi1) l2 ->(phi2) ... ln ]`: the labels must match at
/// strictly increasing steps of one run, and `phi_i` must hold at every
/// step strictly between the matches of `l_i` and `l_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub labels: Vec<Label>,
    /// `path_preds[i]` constrains the gap between `labels[i]` and
    /// `labels[i + 1]`; always one shorter than `labels`.
    pub path_preds: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hyperlabel {
    Atom(Label),
    Seq(Sequence),
    /// `guard(h) with (psi)`: `psi` constrains the metavariables bound by
    /// `h`.
    Guard(Box<Hyperlabel>, Expr),
    Conj(Box<Hyperlabel>, Box<Hyperlabel>),
    Disj(Box<Hyperlabel>, Box<Hyperlabel>),
}

impl Hyperlabel {
    pub fn atom(label: Label) -> Hyperlabel {
        Hyperlabel::Atom(label)
    }

    pub fn seq(labels: Vec<Label>, path_preds: Vec<Expr>) -> Hyperlabel {
        assert_eq!(path_preds.len() + 1, labels.len());
        Hyperlabel::Seq(Sequence { labels, path_preds })
    }

    pub fn guard(h: Hyperlabel, psi: Expr) -> Hyperlabel {
        Hyperlabel::Guard(Box::new(h), psi)
    }

    pub fn conj(a: Hyperlabel, b: Hyperlabel) -> Hyperlabel {
        Hyperlabel::Conj(Box::new(a), Box::new(b))
    }

    pub fn disj(a: Hyperlabel, b: Hyperlabel) -> Hyperlabel {
        Hyperlabel::Disj(Box::new(a), Box::new(b))
    }

    /// Left-associated disjunction of a non-empty list.
    pub fn disj_all(mut hs: Vec<Hyperlabel>) -> Hyperlabel {
        let first = hs.remove(0);
        hs.into_iter().fold(first, Hyperlabel::disj)
    }

    /// Left-associated conjunction of a non-empty list.
    pub fn conj_all(mut hs: Vec<Hyperlabel>) -> Hyperlabel {
        let first = hs.remove(0);
        hs.into_iter().fold(first, Hyperlabel::conj)
    }

    /// All atomic labels of the hyperlabel, in syntactic order.
    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.visit_labels(&mut |l| out.push(l));
        out
    }

    fn visit_labels<'a>(&'a self, f: &mut impl FnMut(&'a Label)) {
        match self {
            Hyperlabel::Atom(l) => f(l),
            Hyperlabel::Seq(s) => s.labels.iter().for_each(&mut *f),
            Hyperlabel::Guard(h, _) => h.visit_labels(f),
            Hyperlabel::Conj(a, b) | Hyperlabel::Disj(a, b) => {
                a.visit_labels(f);
                b.visit_labels(f);
            }
        }
    }
}
