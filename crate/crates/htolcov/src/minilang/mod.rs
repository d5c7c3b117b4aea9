//! MiniImp frontend: parsing, statement locations, control-flow graphs,
//! def-use information and the call graph.

pub mod ast;
pub mod callgraph;
pub mod cfg;
pub mod defuse;
pub mod parser;
pub mod printer;

pub use ast::*;
pub use callgraph::{build_callgraph, CallGraph};
pub use cfg::{build_cfg, Cfg, EdgeKind, FunctionCfg};
pub use defuse::{compute_def_use, DefUseInfo, DuPair};
pub use parser::{parse_program, ParseError};
pub use printer::print_program;
