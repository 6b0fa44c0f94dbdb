//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' uint)?
//! atom   := uint ('/' uint)? | 'x' uint | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x0^2` is `-(x0^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Token};
use super::{ParseError, ParseErrorKind, Position};
use crate::poly::{Coefficient, Field, LinearFormProduct, Polynomial};

/// Largest literal exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1000;
/// Nesting bound for parentheses and unary minus.
pub const MAX_DEPTH: usize = 256;
/// Bound on the number of terms of any intermediate expansion.
pub const MAX_TERMS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Rational(BigRational),
    Var(usize),
    Neg(Box<Expr>),
    /// At least two terms; the flag marks subtracted terms and is false on
    /// the first. Flat so that long sums do not nest.
    Sum(Vec<(bool, Expr)>),
    /// At least two factors.
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Group(Box<Expr>),
}

/// Expression tree node with the position of its first token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub position: Position,
}

impl Expr {
    fn new(kind: ExprKind, position: Position) -> Self {
        Expr { kind, position }
    }

    /// Largest variable index mentioned, if any.
    pub fn max_variable(&self) -> Option<usize> {
        let mut used = Vec::new();
        self.collect_variables(&mut used);
        used.into_iter().max()
    }

    fn collect_variables(&self, out: &mut Vec<usize>) {
        match &self.kind {
            ExprKind::Int(_) | ExprKind::Rational(_) => {}
            ExprKind::Var(i) => out.push(*i),
            ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Group(a) => a.collect_variables(out),
            ExprKind::Sum(terms) => terms.iter().for_each(|(_, t)| t.collect_variables(out)),
            ExprKind::Product(factors) => factors.iter().for_each(|f| f.collect_variables(out)),
        }
    }

    /// First position at which each variable index appears.
    fn variable_positions(&self, out: &mut Vec<Option<Position>>) {
        match &self.kind {
            ExprKind::Var(i) => {
                if out.len() <= *i {
                    out.resize(*i + 1, None);
                }
                out[*i].get_or_insert(self.position);
            }
            ExprKind::Int(_) | ExprKind::Rational(_) => {}
            ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Group(a) => {
                a.variable_positions(out)
            }
            ExprKind::Sum(terms) => terms.iter().for_each(|(_, t)| t.variable_positions(out)),
            ExprKind::Product(factors) => factors.iter().for_each(|f| f.variable_positions(out)),
        }
    }
}

struct Parser {
    tokens: Vec<(Token, Position)>,
    cursor: usize,
    end: Position,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(t, _)| t)
    }

    fn position(&self) -> Position {
        self.tokens
            .get(self.cursor)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Token, Position)> {
        let t = self.tokens.get(self.cursor).cloned();
        self.cursor += 1;
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(
                ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
                self.position(),
            ),
            None => ParseError::new(ParseErrorKind::UnexpectedEnd { expected }, self.position()),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(ParseErrorKind::TooDeep, self.position()));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let first = self.term()?;
        let pos = first.position;
        let mut terms = vec![(false, first)];
        loop {
            let negated = match self.peek() {
                Some(Token::Plus) => false,
                Some(Token::Minus) => true,
                _ => break,
            };
            self.bump();
            terms.push((negated, self.term()?));
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Expr::new(ExprKind::Sum(terms), pos))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.unary()?;
        let pos = first.position;
        let mut factors = vec![first];
        while let Some(Token::Star) = self.peek() {
            self.bump();
            factors.push(self.unary()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Expr::new(ExprKind::Product(factors), pos))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Token::Minus) = self.peek() {
            let pos = self.position();
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let pos = self.position();
            let exp = match self.bump() {
                Some((Token::Int(v), _)) => v,
                _ => {
                    self.cursor -= 1;
                    return Err(self.unexpected("non-negative integer exponent"));
                }
            };
            let exp = exp
                .to_u32()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| ParseError::new(ParseErrorKind::ExponentOverflow, pos))?;
            let bpos = base.position;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), exp), bpos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.position();
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.bump();
                if let Some(Token::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.position();
                    let den = match self.bump() {
                        Some((Token::Int(d), _)) => d,
                        _ => {
                            self.cursor -= 1;
                            return Err(self.unexpected("integer denominator"));
                        }
                    };
                    if den.is_zero() {
                        return Err(ParseError::new(ParseErrorKind::ZeroDenominator, dpos));
                    }
                    return Ok(Expr::new(ExprKind::Rational(BigRational::new(v, den)), pos));
                }
                Ok(Expr::new(ExprKind::Int(v), pos))
            }
            Some(Token::Var(i)) => {
                self.bump();
                Ok(Expr::new(ExprKind::Var(i), pos))
            }
            Some(Token::LParen) => {
                self.bump();
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.bump();
                        Ok(Expr::new(ExprKind::Group(Box::new(inner)), pos))
                    }
                    _ => Err(self.unexpected("')'")),
                }
            }
            _ => Err(self.unexpected("integer, variable or '('")),
        }
    }
}

/// Parses text into an expression tree without expanding it.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let end = end_position(text);
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end,
        depth: 0,
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected("operator or end of input"));
    }
    Ok(expr)
}

fn end_position(text: &str) -> Position {
    let line = text.matches('\n').count() + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Position {
        line,
        column: last.chars().count() + 1,
    }
}

/// How to interpret parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub field: Field,
    /// Fixed number of variables. When `None` the count is inferred from the
    /// largest index and the indices in use must be contiguous from `x0`.
    pub n_vars: Option<usize>,
    pub require_homogeneous: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            field: Field::Rational,
            n_vars: None,
            require_homogeneous: false,
        }
    }
}

impl ParseOptions {
    pub fn with_vars(n_vars: usize) -> Self {
        ParseOptions {
            n_vars: Some(n_vars),
            ..Self::default()
        }
    }
}

fn resolve_vars(expr: &Expr, opts: &ParseOptions) -> Result<usize, ParseError> {
    let mut seen = Vec::new();
    expr.variable_positions(&mut seen);
    match opts.n_vars {
        Some(n) => {
            if let Some(i) = seen.len().checked_sub(1).filter(|&i| i >= n) {
                let pos = seen[i].expect("last entry is set");
                return Err(ParseError::new(
                    ParseErrorKind::VariableOutOfRange {
                        index: i,
                        n_vars: n,
                    },
                    pos,
                ));
            }
            Ok(n)
        }
        None => {
            if let Some(missing) = seen.iter().position(Option::is_none) {
                let pos = seen
                    .iter()
                    .flatten()
                    .next()
                    .copied()
                    .unwrap_or(expr.position);
                return Err(ParseError::new(
                    ParseErrorKind::VariableGap { missing },
                    pos,
                ));
            }
            Ok(seen.len().max(1))
        }
    }
}

fn checked(p: Polynomial, pos: Position) -> Result<Polynomial, ParseError> {
    if p.num_terms() > MAX_TERMS {
        return Err(ParseError::new(ParseErrorKind::TooLarge, pos));
    }
    Ok(p)
}

/// Upper bound on the number of terms of `base^e`: multisets of `e` terms,
/// and monomials of total degree at most `e * deg` in the variables used.
fn power_term_bound(base: &Polynomial, e: u32) -> u128 {
    let t = base.num_terms() as u128;
    if t <= 1 {
        return t;
    }
    let used = (0..base.n_vars()).filter(|&i| base.involves(i)).count() as u128;
    let degree = base.total_degree().unwrap_or(0) as u128 * e as u128;
    binomial_capped(t - 1 + e as u128, t - 1).min(binomial_capped(used + degree, used))
}

/// `C(n, k)`, saturating well above any bound it is compared with.
fn binomial_capped(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
        if acc > 1 << 64 {
            return u128::MAX;
        }
    }
    acc
}

fn expand(expr: &Expr, n_vars: usize, field: Field) -> Result<Polynomial, ParseError> {
    let pos = expr.position;
    let poly_err = |e| ParseError::new(ParseErrorKind::Poly(e), pos);
    let p = match &expr.kind {
        ExprKind::Int(v) => Polynomial::constant(n_vars, Coefficient::from_bigint(field, v)),
        ExprKind::Rational(q) => Polynomial::constant(
            n_vars,
            Coefficient::from_rational(field, q).map_err(poly_err)?,
        ),
        ExprKind::Var(i) => Polynomial::var(n_vars, field, *i),
        ExprKind::Neg(a) => expand(a, n_vars, field)?.neg(),
        ExprKind::Group(a) => expand(a, n_vars, field)?,
        ExprKind::Sum(terms) => {
            let mut acc = Polynomial::zero(n_vars, field);
            for (negated, t) in terms {
                let t = expand(t, n_vars, field)?;
                acc = if *negated { acc.sub(&t) } else { acc.add(&t) }.map_err(poly_err)?;
                acc = checked(acc, pos)?;
            }
            acc
        }
        ExprKind::Product(factors) => {
            let mut acc = Polynomial::one(n_vars, field);
            for f in factors {
                let y = expand(f, n_vars, field)?;
                if acc.num_terms().saturating_mul(y.num_terms()) > MAX_TERMS * 8 {
                    return Err(ParseError::new(ParseErrorKind::TooLarge, pos));
                }
                acc = checked(acc.multiply(&y).map_err(poly_err)?, pos)?;
            }
            acc
        }
        ExprKind::Pow(a, e) => {
            let base = expand(a, n_vars, field)?;
            if power_term_bound(&base, *e) > MAX_TERMS as u128 {
                return Err(ParseError::new(ParseErrorKind::TooLarge, pos));
            }
            if base.num_terms() <= 1 {
                base.pow(*e)
            } else {
                let mut acc = Polynomial::one(n_vars, field);
                for _ in 0..*e {
                    if acc.num_terms().saturating_mul(base.num_terms()) > MAX_TERMS * 8 {
                        return Err(ParseError::new(ParseErrorKind::TooLarge, pos));
                    }
                    acc = checked(acc.multiply(&base).map_err(poly_err)?, pos)?;
                }
                acc
            }
        }
    };
    checked(p, pos)
}

/// Parses and expands a polynomial over `Q` with inferred variable count.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    parse_polynomial_with(text, &ParseOptions::default())
}

pub fn parse_polynomial_with(text: &str, opts: &ParseOptions) -> Result<Polynomial, ParseError> {
    let expr = parse_expression(text)?;
    let n_vars = resolve_vars(&expr, opts)?;
    let p = expand(&expr, n_vars, opts.field)?;
    if opts.require_homogeneous && !p.is_homogeneous() {
        return Err(ParseError::new(
            ParseErrorKind::NotHomogeneous,
            expr.position,
        ));
    }
    Ok(p)
}

/// Parses a `*`-separated product of powers of linear forms without expanding
/// it. Nonzero constant factors are dropped; projectively equal forms merge.
pub fn parse_arrangement(text: &str) -> Result<LinearFormProduct, ParseError> {
    parse_arrangement_with(text, None)
}

pub fn parse_arrangement_with(
    text: &str,
    n_vars: Option<usize>,
) -> Result<LinearFormProduct, ParseError> {
    let expr = parse_expression(text)?;
    let opts = ParseOptions {
        n_vars,
        ..ParseOptions::default()
    };
    let n_vars = resolve_vars(&expr, &opts)?;
    let mut factors = Vec::new();
    collect_factors(&expr, 1, n_vars, &mut factors)?;
    if factors.is_empty() {
        return Err(ParseError::new(
            ParseErrorKind::EmptyArrangement,
            expr.position,
        ));
    }
    let (rows, mults): (Vec<_>, Vec<_>) = factors.into_iter().unzip();
    LinearFormProduct::new(rows, mults)
        .map_err(|e| ParseError::new(ParseErrorKind::Poly(e), expr.position))
}

fn collect_factors(
    expr: &Expr,
    exponent: u32,
    n_vars: usize,
    out: &mut Vec<(Vec<BigRational>, u32)>,
) -> Result<(), ParseError> {
    match &expr.kind {
        ExprKind::Product(factors) => factors
            .iter()
            .try_for_each(|f| collect_factors(f, exponent, n_vars, out)),
        ExprKind::Neg(a) | ExprKind::Group(a) => collect_factors(a, exponent, n_vars, out),
        ExprKind::Pow(a, e) => {
            let total = exponent
                .checked_mul(*e)
                .filter(|&t| t <= MAX_EXPONENT)
                .ok_or_else(|| ParseError::new(ParseErrorKind::ExponentOverflow, expr.position))?;
            if total == 0 {
                return Ok(());
            }
            collect_factors(a, total, n_vars, out)
        }
        _ => {
            let p = expand(expr, n_vars, Field::Rational)?;
            if p.is_zero() {
                return Err(ParseError::new(ParseErrorKind::ZeroFactor, expr.position));
            }
            if p.is_constant() {
                return Ok(());
            }
            let coeffs = p
                .linear_coefficients()
                .map_err(|_| ParseError::new(ParseErrorKind::NonLinearFactor, expr.position))?;
            let row = coeffs
                .iter()
                .map(|c| c.as_rational().expect("rational field").clone())
                .collect();
            out.push((row, exponent));
            Ok(())
        }
    }
}
