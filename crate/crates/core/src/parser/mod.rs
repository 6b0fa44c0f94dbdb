//! Text input and output: expression parsing, canonical printing and run reports.

mod expr;
mod format;
mod lexer;
mod report;

use std::fmt;

pub use expr::{
    parse_arrangement, parse_arrangement_with, parse_expression, parse_polynomial,
    parse_polynomial_with, Expr, ExprKind, ParseOptions, MAX_DEPTH, MAX_EXPONENT, MAX_TERMS,
};
pub use format::format_canonical;
pub use lexer::MAX_VARIABLE;
pub use report::{CertificateRecord, FieldTag, ReportDocument, ScanMode, VerdictSummary};

use crate::poly::PolyError;

/// 1-based line and column of a character in the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("variable name must be 'x' followed by an index")]
    BadVariable,
    #[error("variable index exceeds x{MAX_VARIABLE}")]
    VariableTooLarge,
    #[error("exponent overflow (limit {MAX_EXPONENT})")]
    ExponentOverflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable x{missing} is skipped; indices must be contiguous from x0")]
    VariableGap { missing: usize },
    #[error("variable x{index} out of range for {n_vars} variables")]
    VariableOutOfRange { index: usize, n_vars: usize },
    #[error("nesting deeper than {MAX_DEPTH}")]
    TooDeep,
    #[error("expansion exceeds {MAX_TERMS} terms")]
    TooLarge,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("factor is not a linear form")]
    NonLinearFactor,
    #[error("factor is identically zero")]
    ZeroFactor,
    #[error("no linear factors")]
    EmptyArrangement,
    #[error(transparent)]
    Poly(PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: Position,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, position: Position) -> Self {
        ParseError { kind, position }
    }
}
