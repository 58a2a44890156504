//! Command-line front end for the exterior-calculus library: an expression
//! language over forms and multivector fields, classification and solver
//! commands, and the verification suite.

pub mod commands;
pub mod expr;
pub mod value;

use std::fmt;

use g2calc::CalcError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse { message: String, pos: usize },
    Elab { message: String, pos: usize },
    Usage(String),
    Calc(CalcError),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { message, pos } => write!(f, "parse error at {pos}: {message}"),
            CliError::Elab { message, pos } => write!(f, "error at {pos}: {message}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Calc(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<CalcError> for CliError {
    fn from(e: CalcError) -> Self {
        CliError::Calc(e)
    }
}

/// Multi-line diagnostic with a caret under the offending position.
pub fn render_diagnostic(source: &str, err: &CliError) -> String {
    match err {
        CliError::Parse { message, pos } | CliError::Elab { message, pos } => {
            let caret = " ".repeat(*pos);
            format!("error: {message}\n  | {source}\n  | {caret}^")
        }
        other => format!("error: {other}"),
    }
}
