//! Disjunctive normal form of hyperlabels: a sum of guarded
//! conjunctions of atoms, where an atom is a single label or a sequence.
//! Measurement works disjunct by disjunct; a disjunct is satisfied when
//! each of its atoms matched and some combination of the matches'
//! bindings passes the guard.

use crate::htl::{Hyperlabel, Label, Sequence};
use crate::minilang::ast::{BinOp, Expr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DnfAtom {
    Label(Label),
    Seq(Sequence),
}

impl DnfAtom {
    pub fn labels(&self) -> &[Label] {
        match self {
            DnfAtom::Label(l) => std::slice::from_ref(l),
            DnfAtom::Seq(s) => &s.labels,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedConjunction {
    pub atoms: Vec<DnfAtom>,
    /// Conjunction of all guards that applied to these atoms; `true` when
    /// there were none.
    pub guard: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    pub disjuncts: Vec<GuardedConjunction>,
}

pub const DEFAULT_DISJUNCT_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("normal form exceeds {cap} disjuncts")]
pub struct DnfError {
    pub cap: usize,
}

/// `a && b` with `true` operands dropped. No other simplification is
/// performed; guards stay recognisably close to what was written.
fn and_true(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::BoolLit(true), b) => b,
        (a, Expr::BoolLit(true)) => a,
        (a, b) => Expr::bin(BinOp::And, a, b),
    }
}

/// Rewrites `h` into DNF. Disjunction concatenates, conjunction takes the
/// pairwise product, and a guard lands on every disjunct of its operand.
pub fn normalize_dnf(h: &Hyperlabel, cap: usize) -> Result<Dnf, DnfError> {
    let disjuncts = go(h, cap)?;
    Ok(Dnf { disjuncts })
}

fn go(h: &Hyperlabel, cap: usize) -> Result<Vec<GuardedConjunction>, DnfError> {
    let out = match h {
        Hyperlabel::Atom(l) => vec![GuardedConjunction {
            atoms: vec![DnfAtom::Label(l.clone())],
            guard: Expr::BoolLit(true),
        }],
        Hyperlabel::Seq(s) => vec![GuardedConjunction {
            atoms: vec![DnfAtom::Seq(s.clone())],
            guard: Expr::BoolLit(true),
        }],
        Hyperlabel::Guard(inner, psi) => {
            let mut ds = go(inner, cap)?;
            for d in &mut ds {
                d.guard = and_true(std::mem::replace(&mut d.guard, Expr::BoolLit(true)), psi.clone());
            }
            ds
        }
        Hyperlabel::Disj(a, b) => {
            let mut ds = go(a, cap)?;
            ds.extend(go(b, cap)?);
            ds
        }
        Hyperlabel::Conj(a, b) => {
            let das = go(a, cap)?;
            let dbs = go(b, cap)?;
            let mut ds = Vec::with_capacity(das.len() * dbs.len());
            for da in &das {
                for db in &dbs {
                    let mut atoms = da.atoms.clone();
                    atoms.extend(db.atoms.iter().cloned());
                    ds.push(GuardedConjunction {
                        atoms,
                        guard: and_true(da.guard.clone(), db.guard.clone()),
                    });
                }
            }
            ds
        }
    };
    if out.len() > cap {
        return Err(DnfError { cap });
    }
    Ok(out)
}

/// Reads the normal form back as a hyperlabel; `normalize_dnf` of the
/// result reproduces the same normal form.
pub fn to_hyperlabel(dnf: &Dnf) -> Hyperlabel {
    let ds = dnf
        .disjuncts
        .iter()
        .map(|d| {
            let atoms = d
                .atoms
                .iter()
                .map(|a| match a {
                    DnfAtom::Label(l) => Hyperlabel::Atom(l.clone()),
                    DnfAtom::Seq(s) => Hyperlabel::Seq(s.clone()),
                })
                .collect();
            let conj = Hyperlabel::conj_all(atoms);
            if d.guard == Expr::BoolLit(true) {
                conj
            } else {
                Hyperlabel::guard(conj, d.guard.clone())
            }
        })
        .collect();
    Hyperlabel::disj_all(ds)
}
