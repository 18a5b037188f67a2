//! Command-line front end for `theta-forge`.

pub mod app;
pub mod expr;

pub use app::{run, Cli, Command};
pub use expr::{eval_expr, parse_expr, Expr, ParseError};
