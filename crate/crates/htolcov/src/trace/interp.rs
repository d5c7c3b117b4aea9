//! Tracing interpreter. Executes the entry function on one test datum and
//! records a step per statement and per condition evaluation, with the
//! state as it stands after that location.

use crate::minilang::ast::*;
use crate::trace::eval::{eval_expr, EvalCtx, EvalError};
use crate::trace::suite::TestDatum;
use crate::trace::{Outcome, Run, RuntimeErrorKind, State, Step};
use crate::value::Value;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// Call nesting bound; recursion deeper than this is a runtime error.
/// The step limit alone cannot stop runaway recursion before the native
/// stack does.
const RECURSION_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("test `{test}`: no value for parameter `{param}`")]
    MissingParam { test: String, param: String },
    #[error("test `{test}`: value for `{param}` does not have type {expected}")]
    TypeMismatch {
        test: String,
        param: String,
        expected: Ty,
    },
    #[error("test `{test}`: `{name}` is not a parameter of the entry function")]
    UnknownName { test: String, name: String },
}

/// Runs `test` against the entry function of `p`. The inputs must cover
/// exactly the entry parameters with matching types; runtime failures are
/// part of the returned [`Run`], not errors of this call.
pub fn execute(p: &Program, test: &TestDatum, step_limit: usize) -> Result<Run, InputError> {
    let entry = p.entry_function();
    let mut args = Vec::with_capacity(entry.params);
    for param in entry.param_decls() {
        let v = test
            .inputs
            .get(&param.name)
            .ok_or_else(|| InputError::MissingParam {
                test: test.id.clone(),
                param: param.name.clone(),
            })?;
        let ok = match (param.ty, v) {
            (Ty::Int, Value::Int(_)) => true,
            (Ty::Bool, Value::Bool(_)) => true,
            (Ty::Array(n), Value::Array(cells)) => cells.len() == n,
            _ => false,
        };
        if !ok {
            return Err(InputError::TypeMismatch {
                test: test.id.clone(),
                param: param.name.clone(),
                expected: param.ty,
            });
        }
        args.push(v.clone());
    }
    for name in test.inputs.keys() {
        if entry.slot_of(name).map_or(true, |s| s as usize >= entry.params) {
            return Err(InputError::UnknownName {
                test: test.id.clone(),
                name: name.clone(),
            });
        }
    }

    let mut interp = Interp {
        p,
        limit: step_limit,
        steps: Vec::new(),
    };
    let outcome = match interp.exec_function(p.entry, args, 0) {
        Flow::Return(v) => Outcome::Returned(v),
        Flow::Abort(kind) => Outcome::Error(kind),
        Flow::Limit => Outcome::StepLimit,
        Flow::Normal => unreachable!("exec_function never flows off normally"),
    };
    Ok(Run {
        test_id: test.id.clone(),
        steps: interp.steps,
        outcome,
    })
}

/// Executes every test of the suite in order. Input errors abort the whole
/// suite; a suite is either usable or not.
pub fn execute_suite(
    p: &Program,
    tests: &[TestDatum],
    step_limit: usize,
) -> Result<Vec<Run>, InputError> {
    tests.iter().map(|t| execute(p, t, step_limit)).collect()
}

enum Flow {
    Normal,
    Return(Value),
    Abort(RuntimeErrorKind),
    Limit,
}

struct Interp<'a> {
    p: &'a Program,
    limit: usize,
    steps: Vec<Step>,
}

impl<'a> Interp<'a> {
    fn exec_function(&mut self, func: usize, args: Vec<Value>, depth: usize) -> Flow {
        if depth > RECURSION_LIMIT {
            return Flow::Abort(RuntimeErrorKind::RecursionLimit);
        }
        let f = &self.p.functions[func];
        let mut frame = State {
            func,
            slots: vec![None; f.vars.len()],
        };
        for (slot, v) in args.into_iter().enumerate() {
            frame.slots[slot] = Some(v);
        }
        match self.exec_block(func, &mut frame, &f.body, depth) {
            Flow::Normal => Flow::Abort(RuntimeErrorKind::MissingReturn),
            other => other,
        }
    }

    fn exec_block(&mut self, func: usize, frame: &mut State, blk: &Block, depth: usize) -> Flow {
        let mut declared: Vec<Slot> = Vec::new();
        for s in &blk.stmts {
            match self.exec_stmt(func, frame, s, depth, &mut declared) {
                Flow::Normal => {}
                other => return other,
            }
        }
        // leaving the block ends the scope of its declarations
        for slot in declared {
            frame.slots[slot as usize] = None;
        }
        Flow::Normal
    }

    fn exec_stmt(
        &mut self,
        func: usize,
        frame: &mut State,
        s: &Stmt,
        depth: usize,
        declared: &mut Vec<Slot>,
    ) -> Flow {
        if self.steps.len() >= self.limit {
            return Flow::Limit;
        }
        let f = &self.p.functions[func];
        match s {
            Stmt::Decl { loc, slot, init } => {
                let v = match init {
                    Some(e) => match self.eval(frame, e) {
                        Ok(v) => v,
                        Err(k) => return Flow::Abort(k),
                    },
                    // arrays without an initialiser are zero-filled
                    None => match f.vars[*slot as usize].ty {
                        Ty::Array(n) => Value::Array(std::sync::Arc::new(vec![0; n])),
                        _ => unreachable!("scalar declarations carry initialisers"),
                    },
                };
                frame.slots[*slot as usize] = Some(v);
                declared.push(*slot);
                self.emit(*loc, frame)
            }
            Stmt::Assign { loc, target, value } => {
                let v = match self.eval(frame, value) {
                    Ok(v) => v,
                    Err(k) => return Flow::Abort(k),
                };
                if let Err(k) = self.store(frame, target, v) {
                    return Flow::Abort(k);
                }
                self.emit(*loc, frame)
            }
            Stmt::Call {
                loc,
                target,
                callee,
                args,
            } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval(frame, a) {
                        Ok(v) => vals.push(v),
                        Err(k) => return Flow::Abort(k),
                    }
                }
                let (ci, _) = self.p.function_named(callee).expect("callee exists");
                // callee steps precede the call-site step
                let ret = match self.exec_function(ci, vals, depth + 1) {
                    Flow::Return(v) => v,
                    other => return other,
                };
                if let Some(t) = target {
                    if let Err(k) = self.store(frame, t, ret) {
                        return Flow::Abort(k);
                    }
                }
                self.emit(*loc, frame)
            }
            Stmt::If {
                loc,
                cond,
                then_blk,
                else_blk,
            } => {
                let b = match self.eval_cond(frame, cond) {
                    Ok(b) => b,
                    Err(k) => return Flow::Abort(k),
                };
                match self.emit(*loc, frame) {
                    Flow::Normal => {}
                    other => return other,
                }
                let blk = if b { then_blk } else { else_blk };
                self.exec_block(func, frame, blk, depth)
            }
            Stmt::While { loc, cond, body } => loop {
                if self.steps.len() >= self.limit {
                    return Flow::Limit;
                }
                let b = match self.eval_cond(frame, cond) {
                    Ok(b) => b,
                    Err(k) => return Flow::Abort(k),
                };
                match self.emit(*loc, frame) {
                    Flow::Normal => {}
                    other => return other,
                }
                if !b {
                    return Flow::Normal;
                }
                match self.exec_block(func, frame, body, depth) {
                    Flow::Normal => {}
                    other => return other,
                }
            },
            Stmt::Return { loc, value } => {
                let v = match self.eval(frame, value) {
                    Ok(v) => v,
                    Err(k) => return Flow::Abort(k),
                };
                match self.emit(*loc, frame) {
                    Flow::Normal => Flow::Return(v),
                    other => other,
                }
            }
        }
    }

    fn emit(&mut self, loc: LocationId, frame: &State) -> Flow {
        if self.steps.len() >= self.limit {
            return Flow::Limit;
        }
        self.steps.push(Step {
            loc,
            state: frame.clone(),
        });
        Flow::Normal
    }

    fn eval(&self, frame: &State, e: &Expr) -> Result<Value, RuntimeErrorKind> {
        eval_expr(self.p, e, &EvalCtx::of_state(frame)).map_err(|err| match err {
            EvalError::DivByZero => RuntimeErrorKind::DivByZero,
            EvalError::IndexOutOfBounds => RuntimeErrorKind::IndexOutOfBounds,
            EvalError::Unresolved => unreachable!("program expressions are fully resolved"),
        })
    }

    fn eval_cond(&self, frame: &State, e: &Expr) -> Result<bool, RuntimeErrorKind> {
        Ok(self.eval(frame, e)?.as_bool().expect("condition is boolean"))
    }

    fn store(
        &self,
        frame: &mut State,
        target: &LValue,
        v: Value,
    ) -> Result<(), RuntimeErrorKind> {
        match target {
            LValue::Var(var) => {
                let slot = var.slot.expect("resolved lvalue");
                frame.slots[slot as usize] = Some(v);
                Ok(())
            }
            LValue::Cell(var, idx) => {
                let i = self.eval(frame, idx)?.as_int().expect("index is int");
                let slot = var.slot.expect("resolved lvalue");
                let arr = frame.slots[slot as usize]
                    .as_mut()
                    .and_then(Value::array_mut)
                    .expect("array variable");
                let i = usize::try_from(i).map_err(|_| RuntimeErrorKind::IndexOutOfBounds)?;
                match arr.get_mut(i) {
                    Some(cell) => {
                        *cell = v.as_int().expect("cell value is int");
                        Ok(())
                    }
                    None => Err(RuntimeErrorKind::IndexOutOfBounds),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parser::parse_program;

    fn datum(pairs: &[(&str, Value)]) -> TestDatum {
        TestDatum {
            id: "t".into(),
            inputs: pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    fn ints(pairs: &[(&str, i64)]) -> TestDatum {
        datum(
            &pairs
                .iter()
                .map(|&(k, v)| (k, Value::Int(v)))
                .collect::<Vec<_>>(),
        )
    }

    const BRANCHY: &str = "int f(int x, int y, int a, int b) {
        if (x == y && a < b) { x := 1; } else { x := 0; }
        return x;
    }";

    #[test]
    fn condition_steps_record_the_unchanged_state() {
        let p = parse_program(BRANCHY).unwrap();
        let t = ints(&[("x", 1), ("y", 1), ("a", 0), ("b", 1)]);
        let run = execute(&p, &t, DEFAULT_STEP_LIMIT).unwrap();
        // locs: 1 cond, 2 then, 3 else, 4 return
        let locs: Vec<_> = run.steps.iter().map(|s| s.loc).collect();
        assert_eq!(locs, vec![1, 2, 4]);
        // at the decision, x still holds its input value
        let at_cond = run.reaches(1);
        assert_eq!(at_cond.len(), 1);
        assert_eq!(at_cond[0].1.get(&p, "x"), Some(&Value::Int(1)));
        // the then-branch step shows its own effect
        assert_eq!(run.steps[1].state.get(&p, "x"), Some(&Value::Int(1)));
        assert_eq!(run.outcome, Outcome::Returned(Value::Int(1)));
        assert!(run.reaches(3).is_empty());
    }

    #[test]
    fn loop_visits_appear_once_per_iteration() {
        let src = "int f(int n) {
            int i := 0;
            while (i < n) { i := i + 1; }
            return i;
        }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("n", 3)]), DEFAULT_STEP_LIMIT).unwrap();
        // cond at loc 2 evaluates n+1 times, body at loc 3 n times
        assert_eq!(run.reaches(2).len(), 4);
        assert_eq!(run.reaches(3).len(), 3);
        let bodies: Vec<_> = run
            .reaches(3)
            .iter()
            .map(|(_, s)| s.get(&p, "i").unwrap().clone())
            .collect();
        assert_eq!(bodies, vec![Value::Int(1), Value::Int(2), Value::Int(3)]);
    }

    #[test]
    fn callee_steps_precede_the_call_site_step() {
        let src = "int f(int x) {
            int r := 0;
            r := g(x);
            return r;
        }
        int g(int y) { return y + 1; }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("x", 5)]), DEFAULT_STEP_LIMIT).unwrap();
        // locs: 1 decl r, 2 call, 3 return f, 4 return g
        let locs: Vec<_> = run.steps.iter().map(|s| s.loc).collect();
        assert_eq!(locs, vec![1, 4, 2, 3]);
        // the call-site step already sees the assigned result
        assert_eq!(run.steps[2].state.get(&p, "r"), Some(&Value::Int(6)));
        assert_eq!(run.outcome, Outcome::Returned(Value::Int(6)));
    }

    #[test]
    fn runtime_error_keeps_the_partial_trace() {
        let src = "int f(int x) {
            int a := x + 1;
            int b := a / x;
            return b;
        }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("x", 0)]), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(run.steps.len(), 1);
        assert_eq!(run.outcome, Outcome::Error(RuntimeErrorKind::DivByZero));
    }

    #[test]
    fn index_out_of_bounds_is_a_runtime_error() {
        let src = "int f(int i) {
            int[2] a;
            a[i] := 9;
            return a[0];
        }";
        let p = parse_program(src).unwrap();
        let ok = execute(&p, &ints(&[("i", 1)]), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(ok.outcome, Outcome::Returned(Value::Int(0)));
        let bad = execute(&p, &ints(&[("i", 2)]), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(
            bad.outcome,
            Outcome::Error(RuntimeErrorKind::IndexOutOfBounds)
        );
        assert_eq!(bad.steps.len(), 1);
    }

    #[test]
    fn step_limit_yields_a_prefix() {
        let src = "int f(int n) {
            int i := 0;
            while (i < n) { i := i + 1; }
            return i;
        }";
        let p = parse_program(src).unwrap();
        let t = ints(&[("n", 1000)]);
        let full = execute(&p, &t, DEFAULT_STEP_LIMIT).unwrap();
        for limit in [1, 7, 50] {
            let cut = execute(&p, &t, limit).unwrap();
            assert_eq!(cut.outcome, Outcome::StepLimit);
            assert_eq!(cut.steps.len(), limit);
            assert_eq!(cut.steps[..], full.steps[..limit]);
        }
    }

    #[test]
    fn execution_is_deterministic() {
        let p = parse_program(BRANCHY).unwrap();
        let t = ints(&[("x", 2), ("y", 1), ("a", 5), ("b", 1)]);
        let a = execute(&p, &t, DEFAULT_STEP_LIMIT).unwrap();
        let b = execute(&p, &t, DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn block_locals_go_out_of_scope() {
        let src = "int f(int x) {
            if (x > 0) { int tmp := x * 2; x := tmp; }
            return x;
        }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("x", 3)]), DEFAULT_STEP_LIMIT).unwrap();
        // locs: 1 cond, 2 decl tmp, 3 assign, 4 return
        assert_eq!(run.steps[2].state.get(&p, "tmp"), Some(&Value::Int(6)));
        assert_eq!(run.steps[3].loc, 4);
        assert_eq!(run.steps[3].state.get(&p, "tmp"), None);
    }

    #[test]
    fn unbounded_recursion_is_cut_off() {
        let src = "int f(int x) {
            int r := 0;
            r := f(x);
            return r;
        }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("x", 1)]), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(run.outcome, Outcome::Error(RuntimeErrorKind::RecursionLimit));
    }

    #[test]
    fn missing_return_is_a_runtime_error() {
        let src = "int f(int x) {
            if (x > 0) { return x; }
            x := 0;
        }";
        let p = parse_program(src).unwrap();
        let run = execute(&p, &ints(&[("x", -1)]), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(run.outcome, Outcome::Error(RuntimeErrorKind::MissingReturn));
    }

    #[test]
    fn inputs_are_validated() {
        let p = parse_program("int f(int x) { return x; }").unwrap();
        assert!(matches!(
            execute(&p, &ints(&[]), 10),
            Err(InputError::MissingParam { .. })
        ));
        assert!(matches!(
            execute(&p, &datum(&[("x", Value::Bool(true))]), 10),
            Err(InputError::TypeMismatch { .. })
        ));
        assert!(matches!(
            execute(&p, &ints(&[("x", 1), ("y", 2)]), 10),
            Err(InputError::UnknownName { .. })
        ));
    }
}
