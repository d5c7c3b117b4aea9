//! Runtime values shared by the interpreter, the hyperlabel evaluator and
//! metavariable environments.

use std::fmt;
use std::sync::Arc;

/// A MiniImp value. Arrays are reference-counted so that per-step state
/// snapshots stay cheap; writes go through [`Value::array_mut`] which
/// clones on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Array(Arc<Vec<i64>>),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn array_mut(&mut self) -> Option<&mut Vec<i64>> {
        match self {
            Value::Array(cells) => Some(Arc::make_mut(cells)),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Array(cells) => {
                write!(f, "{{")?;
                for (i, c) in cells.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
