//! Concrete execution of MiniImp programs: states, steps, runs and the
//! tracing interpreter.

mod eval;
mod interp;
mod suite;

pub use eval::{eval_expr, holds, Env, EvalCtx, EvalError};
pub use interp::{execute, execute_suite, InputError, DEFAULT_STEP_LIMIT};
pub use suite::{parse_suite, SuiteError, TestDatum, TestSuite};

use crate::minilang::ast::*;
use crate::value::Value;

/// Variable valuation at one point of one function activation. Slots of
/// variables that are not yet declared, or whose block has been left, hold
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    /// Index of the function this state belongs to.
    pub func: usize,
    pub slots: Vec<Option<Value>>,
}

impl State {
    pub fn get<'a>(&'a self, p: &Program, name: &str) -> Option<&'a Value> {
        let slot = p.functions[self.func].slot_of(name)?;
        self.slots[slot as usize].as_ref()
    }
}

/// One trace step: a location was executed and left the program in
/// `state`. Condition evaluations are steps of their own with the state
/// unchanged; a call statement's step appears after all callee steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub loc: LocationId,
    pub state: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuntimeErrorKind {
    DivByZero,
    IndexOutOfBounds,
    /// Control fell off the end of a function body.
    MissingReturn,
    /// Call nesting exceeded the fixed recursion bound.
    RecursionLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Returned(Value),
    Error(RuntimeErrorKind),
    /// Truncated after `step_limit` steps.
    StepLimit,
}

/// The trace of one test: every step in execution order, plus how the
/// execution ended. Runs that error out or hit the step limit keep the
/// steps produced up to that point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub test_id: String,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

impl Run {
    /// All step indices at which `loc` was executed, with their states.
    pub fn reaches(&self, loc: LocationId) -> Vec<(usize, &State)> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.loc == loc)
            .map(|(k, s)| (k, &s.state))
            .collect()
    }

    pub fn completed(&self) -> bool {
        matches!(self.outcome, Outcome::Returned(_))
    }
}
