//! Algebra definitions as data: the `.alg` DSL, a compiled-in catalog and
//! structural checks.

mod catalog;
mod checks;
mod def;
mod eval;
mod lexer;
mod parser;

pub use catalog::{catalog_get, catalog_names, catalog_source, CATALOG};
pub use checks::{
    check_all, check_cartan, check_casimirs, check_central, check_contraction, check_involution, check_jacobi,
    CheckReport, Failure,
};
pub use def::{AlgebraDef, CartanSplit, Casimir, Involution, Pattern, SpaceRecord};
pub use eval::evaluate;
pub use lexer::canonical_ident;
pub(crate) use parser::Expr;

use crate::field::FieldError;
use crate::pbw::PbwError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
    #[error("{line}:{col}: {msg}")]
    Type { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: bracket [{x},{y}] declared twice")]
    DuplicateBracket { line: usize, col: usize, x: String, y: String },
    #[error("{line}:{col}: bracket [{x},{y}] contradicts antisymmetry")]
    InconsistentBracket { line: usize, col: usize, x: String, y: String },
    #[error("empty generator list")]
    NoGenerators,
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("catalog entry `{0}` fails its {1} check")]
    CheckFailed(String, String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

impl AlgebraError {
    pub(crate) fn syntax(line: usize, col: usize, msg: &str) -> AlgebraError {
        AlgebraError::Syntax { line, col, msg: msg.to_string() }
    }

    pub(crate) fn at(pos: parser::Pos, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Type { line: pos.line, col: pos.col, msg: msg.into() }
    }
}

/// Parses `.alg` source text.
pub fn parse_algebra(text: &str) -> Result<AlgebraDef, AlgebraError> {
    let ast = parser::parse(text)?;
    eval::build(&ast)
}

#[cfg(test)]
mod tests;
