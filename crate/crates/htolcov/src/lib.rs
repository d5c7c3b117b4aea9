//! Coverage measurement over hyperlabel test objectives.
//!
//! The crate is organised as a pipeline: MiniImp programs are parsed and
//! located ([`minilang`]), executed into finite traces ([`trace`]),
//! annotated with hyperlabel test objectives ([`criteria`] or hand-written
//! HTL files parsed by [`htl`]), normalised into disjunctive normal form
//! ([`dnf`]) and finally measured against a test suite ([`coverage`]).
//! [`pipeline`] wires the stages together behind the CLI, and [`bench`]
//! reproduces the scaling measurements on bundled programs.

pub mod bench;
pub mod coverage;
pub mod criteria;
pub mod dnf;
pub mod htl;
pub mod lexer;
pub mod minilang;
pub mod pipeline;
pub mod trace;
pub mod value;
