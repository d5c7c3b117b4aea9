//! Test-suite files. One test per line:
//!
//! ```text
//! # comment
//! t1 | x=3, b=true, a={1,2,3}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestDatum {
    pub id: String,
    /// Entry-function parameter values by name.
    pub inputs: BTreeMap<String, Value>,
}

impl TestDatum {
    pub fn new(id: &str, inputs: Vec<(&str, Value)>) -> TestDatum {
        TestDatum {
            id: id.to_string(),
            inputs: inputs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    pub tests: Vec<TestDatum>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("suite line {line}: {msg}")]
pub struct SuiteError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> SuiteError {
    SuiteError {
        line,
        msg: msg.into(),
    }
}

pub fn parse_suite(text: &str) -> Result<TestSuite, SuiteError> {
    let mut tests: Vec<TestDatum> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line
            .split_once('|')
            .ok_or_else(|| err(line_no, "expected `id | var=value, ...`"))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(err(line_no, "empty test id"));
        }
        if tests.iter().any(|t| t.id == id) {
            return Err(err(line_no, format!("duplicate test id `{id}`")));
        }
        let mut inputs = BTreeMap::new();
        for part in split_assignments(rest) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, val) = part
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `var=value` in `{part}`")))?;
            let name = name.trim();
            let v = parse_value(val.trim()).ok_or_else(|| {
                err(line_no, format!("cannot parse value `{}`", val.trim()))
            })?;
            if inputs.insert(name.to_string(), v).is_some() {
                return Err(err(line_no, format!("`{name}` assigned twice")));
            }
        }
        tests.push(TestDatum {
            id: id.to_string(),
            inputs,
        });
    }
    Ok(TestSuite { tests })
}

/// Splits on commas outside `{...}`; array literals contain commas.
fn split_assignments(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_value(s: &str) -> Option<Value> {
    match s {
        "true" => return Some(Value::Bool(true)),
        "false" => return Some(Value::Bool(false)),
        _ => {}
    }
    if let Some(body) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let body = body.trim();
        let cells = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|c| c.trim().parse::<i64>().ok())
                .collect::<Option<Vec<_>>>()?
        };
        return Some(Value::Array(Arc::new(cells)));
    }
    s.parse::<i64>().ok().map(Value::Int)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ids_values_and_comments() {
        let text = "# suite for f
            t1 | x=3, b=true
            t2 | x=-4, b=false, a={1, 2, 3}  # trailing note

            t3 | x=0, b=true, a={}
        ";
        let suite = parse_suite(text).unwrap();
        assert_eq!(suite.tests.len(), 3);
        assert_eq!(suite.tests[0].id, "t1");
        assert_eq!(suite.tests[0].inputs["x"], Value::Int(3));
        assert_eq!(suite.tests[1].inputs["x"], Value::Int(-4));
        assert_eq!(
            suite.tests[1].inputs["a"],
            Value::Array(Arc::new(vec![1, 2, 3]))
        );
        assert_eq!(suite.tests[2].inputs["a"], Value::Array(Arc::new(vec![])));
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse_suite("t1 | x=1\nt1 | x=2").is_err());
        assert!(parse_suite("just some words").is_err());
        assert!(parse_suite("t1 | x=maybe").is_err());
        assert!(parse_suite("t1 | x=1, x=2").is_err());
        assert!(parse_suite(" | x=1").is_err());
    }

    #[test]
    fn tests_without_inputs_are_fine() {
        let suite = parse_suite("t9 |").unwrap();
        assert_eq!(suite.tests[0].id, "t9");
        assert!(suite.tests[0].inputs.is_empty());
    }
}
