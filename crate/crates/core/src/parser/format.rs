use std::fmt::Write;

use crate::poly::{Coefficient, Monomial, Polynomial};

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        write!(out, "x{i}").unwrap();
        if e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

/// Canonical text: terms in descending graded-lex order, unit coefficients
/// omitted, subtraction instead of negative coefficients. Parsing the output
/// (with the same variable count and field) gives back the same polynomial.
pub fn format_canonical(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let magnitude = if negative { c.neg() } else { c.clone() };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        write_term(&mut out, m, &magnitude);
    }
    out
}

fn write_term(out: &mut String, m: &Monomial, magnitude: &Coefficient) {
    if m.is_one() {
        write!(out, "{magnitude}").unwrap();
        return;
    }
    if !magnitude.is_one() {
        write!(out, "{magnitude}*").unwrap();
    }
    write_monomial(out, m);
}
