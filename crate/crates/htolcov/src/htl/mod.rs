//! Hyperlabels: test objectives combining located labels with bindings,
//! sequencing, guards, conjunction and disjunction.

mod ast;
mod names;
mod parser;
mod printer;
mod types;
mod wf;

pub use ast::{Binding, Hyperlabel, Label, Sequence};
pub use names::{metas_in_expr, visible_names};
pub use parser::{parse_htl, parse_hyperlabel, NamedHyperlabel};
pub use printer::{print_htl, print_hyperlabel};
pub use types::check_types;
pub use wf::{check_well_formed, WfViolation};
