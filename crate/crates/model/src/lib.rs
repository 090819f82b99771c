//! Linear process specifications over finite data sorts, first-order modal
//! mu-calculus formulas, a text format for both, and generators for the
//! benchmark models (bounded buffer, Tic Tac Toe, Connect Four).

pub mod explore;
pub mod expr;
pub mod formula;
pub mod generate;
pub mod lps;
pub mod parse;
pub mod print;
pub mod sort;

pub use expr::{BinOp, DataExpr, Env, Quant, UnOp, Undefined};
pub use formula::{ActionArg, ActionFormula, FixParam, Fixpoint, MuFormula};
pub use lps::{LinearProcess, Param, Spec, Summand};
pub use parse::parse_spec;
pub use sort::{Sort, SortKind, Ty, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: sort error: {msg}")]
    Sort { line: usize, col: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("variable `{0}` occurs negatively")]
    Positivity(String),
    #[error("action `{action}` has {actual} arguments, pattern expects {expected}")]
    Arity { action: String, expected: usize, actual: usize },
    #[error("invalid generator parameters: {0}")]
    Generator(String),
}
