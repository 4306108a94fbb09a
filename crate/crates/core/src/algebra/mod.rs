//! Noncommutative single-coordinate operator algebra.

pub mod ast;
pub mod expr;
pub mod factor;
pub mod render;
pub mod state;

pub use ast::{normal_order, normal_order_bounded, Budget, OpAst, OverBudget};
pub use expr::{coord_pow, fn_derivative, OpExpr, Term, TermKey};
pub use factor::FunctionFactor;
pub use render::Format;
pub use state::{apply_to_state, FnState};
