//! Exact coefficient field: rational functions in named parameters over ℚ(i).

mod gauss;
mod params;
mod poly;
mod scalar;
mod solve;
mod symbol;

pub use gauss::GaussRat;
pub use params::{ParamContext, ParamKind};
pub use poly::{mono_cmp, mono_degree, EvalRing, PMono, Poly};
pub use scalar::{render_poly, Scalar};
pub use solve::{positive_root, solve_binomial, Relation, Solved};
pub use symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameter `{0}` is defined by a formula and cannot be bound")]
    BindDefined(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("parameter `{0}` declared twice")]
    DuplicateParam(String),
}
