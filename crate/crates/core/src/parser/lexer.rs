use num_bigint::BigInt;

use super::{ParseError, ParseErrorKind, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Int(v) => format!("integer {v}"),
            Token::Var(i) => format!("variable x{i}"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::Slash => "'/'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

/// Largest accepted variable index.
pub const MAX_VARIABLE: usize = 63;

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Token, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut line = 1;
    let mut line_start = 0;
    while let Some(&(offset, ch)) = chars.peek() {
        let pos = Position {
            line,
            column: text[line_start..offset].chars().count() + 1,
        };
        if ch == '\n' {
            chars.next();
            line += 1;
            line_start = offset + 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let simple = match ch {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '^' => Some(Token::Caret),
            '/' => Some(Token::Slash),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            out.push((tok, pos));
            continue;
        }
        if ch.is_ascii_digit() {
            let digits = take_digits(&mut chars);
            out.push((Token::Int(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        if ch == 'x' {
            chars.next();
            let digits = take_digits(&mut chars);
            if digits.is_empty() {
                return Err(ParseError::new(ParseErrorKind::BadVariable, pos));
            }
            let index = digits
                .parse::<usize>()
                .ok()
                .filter(|&i| i <= MAX_VARIABLE)
                .ok_or_else(|| ParseError::new(ParseErrorKind::VariableTooLarge, pos))?;
            out.push((Token::Var(index), pos));
            continue;
        }
        return Err(ParseError::new(ParseErrorKind::UnexpectedChar(ch), pos));
    }
    Ok(out)
}

fn take_digits(chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>) -> String {
    let mut s = String::new();
    while let Some(&(_, c)) = chars.peek() {
        if !c.is_ascii_digit() {
            break;
        }
        s.push(c);
        chars.next();
    }
    s
}
