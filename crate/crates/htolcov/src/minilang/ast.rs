//! AST for located MiniImp programs and the expression language shared
//! with hyperlabel predicates.

use std::collections::HashMap;

use crate::lexer::Pos;

/// Dense statement/decision identifier, starting at 1 in source order.
pub type LocationId = u32;

/// Slot index of a variable inside its function frame.
pub type Slot = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ty {
    Int,
    Bool,
    Array(usize),
    /// Location literals and `pc` in path predicates.
    Loc,
}

impl std::fmt::Display for Ty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ty::Int => write!(f, "int"),
            Ty::Bool => write!(f, "bool"),
            Ty::Array(n) => write!(f, "int[{n}]"),
            Ty::Loc => write!(f, "loc"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    /// `a => b`, only available in hyperlabel predicates. Evaluation
    /// short-circuits on a false antecedent, which is what makes the
    /// `pc == locN => ...` idiom in path predicates work.
    Imp,
}

/// Program variable reference. `slot` is filled in whenever the expression
/// was resolved against a known function frame; name-based lookup remains
/// available for predicates evaluated at arbitrary trace steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarRef {
    pub name: String,
    pub slot: Option<Slot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    IntLit(i64),
    BoolLit(bool),
    Var(VarRef),
    /// `arr[idx]`
    Index(VarRef, Box<Expr>),
    Un(UnOp, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Hyperlabel metavariable, e.g. `c1'`.
    Meta(String),
    /// Current location, in path predicates.
    Pc,
    /// `locN` literal.
    LocLit(LocationId),
}

impl Expr {
    pub fn var(name: &str, slot: Slot) -> Expr {
        Expr::Var(VarRef {
            name: name.to_string(),
            slot: Some(slot),
        })
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Un(UnOp::Not, Box::new(e))
    }

    /// Conjunction of a non-empty list of operands, left-associated.
    pub fn and_all(mut ops: Vec<Expr>) -> Expr {
        let first = ops.remove(0);
        ops.into_iter()
            .fold(first, |acc, e| Expr::bin(BinOp::And, acc, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub ty: Ty,
    pub slot: Slot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LValue {
    Var(VarRef),
    Cell(VarRef, Box<Expr>),
}

impl LValue {
    pub fn var_ref(&self) -> &VarRef {
        match self {
            LValue::Var(v) | LValue::Cell(v, _) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    /// `int x := e;` / `bool b := e;` / `int[3] a;` (zero-initialised)
    Decl {
        loc: LocationId,
        slot: Slot,
        init: Option<Expr>,
    },
    Assign {
        loc: LocationId,
        target: LValue,
        value: Expr,
    },
    /// `f(args);` or `x := f(args);` — calls only appear in statement
    /// position so that every expression stays pure.
    Call {
        loc: LocationId,
        target: Option<LValue>,
        callee: String,
        args: Vec<Expr>,
    },
    If {
        /// Location of the branching condition itself.
        loc: LocationId,
        cond: Expr,
        then_blk: Block,
        else_blk: Block,
    },
    While {
        loc: LocationId,
        cond: Expr,
        body: Block,
    },
    Return {
        loc: LocationId,
        value: Expr,
    },
}

impl Stmt {
    pub fn loc(&self) -> LocationId {
        match self {
            Stmt::Decl { loc, .. }
            | Stmt::Assign { loc, .. }
            | Stmt::Call { loc, .. }
            | Stmt::If { loc, .. }
            | Stmt::While { loc, .. }
            | Stmt::Return { loc, .. } => *loc,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub ret_ty: Ty,
    /// Slots `0..params` of `vars` are the parameters, in order.
    pub params: usize,
    /// Every variable of the function, indexed by slot. Names are unique
    /// within a function.
    pub vars: Vec<VarDecl>,
    pub body: Block,
    /// First location of the body; functions have non-empty bodies.
    pub entry_loc: LocationId,
    /// All locations belonging to this function, in source order.
    pub locs: Vec<LocationId>,
    pub name_to_slot: HashMap<String, Slot>,
}

impl FunctionDef {
    pub fn param_decls(&self) -> &[VarDecl] {
        &self.vars[..self.params]
    }

    pub fn slot_of(&self, name: &str) -> Option<Slot> {
        self.name_to_slot.get(name).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocKind {
    Decl,
    Assign,
    Call,
    /// `if` condition evaluation point.
    IfCond,
    /// `while` condition evaluation point.
    WhileCond,
    Return,
}

impl LocKind {
    pub fn is_decision(self) -> bool {
        matches!(self, LocKind::IfCond | LocKind::WhileCond)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocInfo {
    pub func: usize,
    pub kind: LocKind,
    pub pos: Pos,
    /// Slots in scope at this location (sorted).
    pub scope: Vec<Slot>,
}

/// A parsed, type-checked MiniImp program with unique statement locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub functions: Vec<FunctionDef>,
    /// Index of the entry function, defaults to the first one.
    pub entry: usize,
    /// `location_table[loc - 1]` describes location `loc`.
    pub location_table: Vec<LocInfo>,
}

impl Program {
    pub fn num_locations(&self) -> usize {
        self.location_table.len()
    }

    pub fn loc_info(&self, loc: LocationId) -> &LocInfo {
        &self.location_table[loc as usize - 1]
    }

    pub fn function_of_loc(&self, loc: LocationId) -> &FunctionDef {
        &self.functions[self.loc_info(loc).func]
    }

    pub fn function_named(&self, name: &str) -> Option<(usize, &FunctionDef)> {
        self.functions
            .iter()
            .enumerate()
            .find(|(_, f)| f.name == name)
    }

    pub fn entry_function(&self) -> &FunctionDef {
        &self.functions[self.entry]
    }

    /// Sets the entry function by name, as selected on the CLI.
    pub fn set_entry(&mut self, name: &str) -> bool {
        if let Some((idx, _)) = self.function_named(name) {
            self.entry = idx;
            true
        } else {
            false
        }
    }

    /// True when `slot` is in scope at `loc`.
    pub fn in_scope(&self, loc: LocationId, slot: Slot) -> bool {
        self.loc_info(loc).scope.binary_search(&slot).is_ok()
    }
}
