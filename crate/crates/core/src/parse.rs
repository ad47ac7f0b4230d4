//! Text grammars shared by the CLI and file formats.
//!
//! A field is declared as a monic integer polynomial in the symbol `t`
//! (e.g. `t^2+3`); an element is a polynomial in `t` with rational
//! coefficients (e.g. `(-1+t)/2`). Numeric parameters accept decimal
//! complex literals `a+bi`.

use std::sync::Arc;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::poly::{IntPolynomial, RatPoly};
use crate::Precision;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(Integer),
    T,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: Integer = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {digits:?}")))?;
                out.push(Tok::Int(n));
            }
            't' => {
                chars.next();
                out.push(Tok::T);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            other => {
                return Err(Error::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<RatPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.next();
            }
            Some(Tok::Minus) => {
                self.next();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (factor | '*' factor | '/' factor)*, implicit adjacency
    // multiplies; division requires a constant divisor
    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let f = self.factor()?;
                    if f.degree() != 0 || f.is_zero() {
                        return Err(Error::Parse(
                            "division only by a nonzero constant".into(),
                        ));
                    }
                    let c = f.coeff(0);
                    acc = acc.scale(&(Rational::from(1) / c));
                }
                Some(Tok::Int(_)) | Some(Tok::T) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '(' expr ')' | INT | tpow;  tpow := 't' ('^' INT)?
    fn factor(&mut self) -> Result<RatPoly> {
        match self.next() {
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            Some(Tok::Int(n)) => Ok(RatPoly::new(vec![Rational::from(n)])),
            Some(Tok::T) => {
                if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    match self.next() {
                        Some(Tok::Int(e)) => {
                            let e = e.to_usize().ok_or_else(|| {
                                Error::Parse("exponent out of range".into())
                            })?;
                            Ok(RatPoly::monomial(e))
                        }
                        _ => Err(Error::Parse("expected integer exponent after ^".into())),
                    }
                } else {
                    Ok(RatPoly::monomial(1))
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a polynomial in `t` with rational coefficients.
pub fn parse_poly(text: &str) -> Result<RatPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(e)
}

/// Parse a field declaration: a monic integer polynomial in `t`.
pub fn parse_field(text: &str, precision: &Precision) -> Result<Arc<NumberField>> {
    let p = parse_poly(text)?;
    let mut int_coeffs = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        if *c.denom() != 1u32 {
            return Err(Error::Parse(format!(
                "field polynomial must have integer coefficients, got {c}"
            )));
        }
        int_coeffs.push(c.numer().clone());
    }
    let ip = IntPolynomial::new(int_coeffs);
    if !ip.is_monic() {
        return Err(Error::Parse("field polynomial must be monic".into()));
    }
    NumberField::new(ip, precision)
}

/// Parse an element of a declared field: a rational polynomial in `t`,
/// reduced modulo the defining polynomial.
pub fn parse_element(text: &str, field: &Arc<NumberField>) -> Result<FieldElement> {
    let p = parse_poly(text)?;
    let (_, rem) = p.divrem(&field.min_poly().to_rat());
    let mut coords: Vec<Rational> = rem.coeffs().to_vec();
    coords.resize(field.degree(), Rational::new());
    Ok(field.element(coords))
}

/// Parse a decimal complex literal `a+bi` into exact rational parts.
/// Accepted forms: `3`, `-1.5`, `2i`, `-i`, `0.5+0.866i`, `1-2i`.
pub fn parse_complex(text: &str) -> Result<(Rational, Rational)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    // split into at most two signed parts
    let mut parts = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut start = 0;
    for (i, &c) in bytes.iter().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            parts.push(bytes[start..i].iter().collect::<String>());
            start = i;
        }
    }
    parts.push(bytes[start..].iter().collect::<String>());
    if parts.len() > 2 {
        return Err(Error::Parse(format!("bad complex literal {text:?}")));
    }
    let mut re = Rational::new();
    let mut im = Rational::new();
    let mut seen_re = false;
    let mut seen_im = false;
    for part in parts {
        if let Some(body) = part.strip_suffix('i') {
            if seen_im {
                return Err(Error::Parse("two imaginary parts".into()));
            }
            seen_im = true;
            im = match body {
                "" | "+" => Rational::from(1),
                "-" => Rational::from(-1),
                other => parse_decimal(other)?,
            };
        } else {
            if seen_re {
                return Err(Error::Parse("two real parts".into()));
            }
            seen_re = true;
            re = parse_decimal(&part)?;
        }
    }
    Ok((re, im))
}

/// Exact rational value of a signed decimal such as `-1.25`.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let (sign, body) = match text.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("bad decimal {text:?}")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("bad decimal {text:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: Integer = if digits.is_empty() {
        Integer::new()
    } else {
        digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {text:?}")))?
    };
    let denom = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
    Ok(Rational::from((numer * sign, denom)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_declarations() {
        let prec = Precision::default();
        let f = parse_field("t^2+3", &prec).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.min_poly().coeffs(), &[3, 0, 1].map(Integer::from));
        let f = parse_field("t^2 - t + 1", &prec).unwrap();
        assert_eq!(f.degree(), 2);
        assert!(parse_field("2t^2+3", &prec).is_err()); // not monic
        assert!(parse_field("t^2 + t/2", &prec).is_err()); // not integral
        assert!(parse_field("u^2+3", &prec).is_err());
    }

    #[test]
    fn element_grammar() {
        let prec = Precision::default();
        let f = parse_field("t^2+3", &prec).unwrap();
        // (-1 + t)/2 = -1/2 + sqrt(-3)/2
        let e = parse_element("(-1+t)/2", &f).unwrap();
        assert_eq!(
            e.coords(),
            &[Rational::from((-1, 2)), Rational::from((1, 2))]
        );
        // reduction: t^2 = -3
        let e = parse_element("t^2 + t + 1", &f).unwrap();
        assert_eq!(e.coords(), &[Rational::from(-2), Rational::from(1)]);
        let e = parse_element("2 * t - 1/2", &f).unwrap();
        assert_eq!(
            e.coords(),
            &[Rational::from((-1, 2)), Rational::from(2)]
        );
        // implicit multiplication
        let e = parse_element("2t", &f).unwrap();
        assert_eq!(e.coords(), &[Rational::new(), Rational::from(2)]);
    }

    #[test]
    fn rational_division_forms() {
        let p = parse_poly("1/2").unwrap();
        assert_eq!(p.coeff(0), Rational::from((1, 2)));
        let p = parse_poly("(1+t)/(2)").unwrap();
        assert_eq!(p.coeff(0), Rational::from((1, 2)));
        assert!(parse_poly("1/t").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(
            parse_complex("3").unwrap(),
            (Rational::from(3), Rational::new())
        );
        assert_eq!(
            parse_complex("-1.5+0.5i").unwrap(),
            (Rational::from((-3, 2)), Rational::from((1, 2)))
        );
        assert_eq!(
            parse_complex("2i").unwrap(),
            (Rational::new(), Rational::from(2))
        );
        assert_eq!(
            parse_complex("-i").unwrap(),
            (Rational::new(), Rational::from(-1))
        );
        assert_eq!(
            parse_complex("1-2i").unwrap(),
            (Rational::from(1), Rational::from(-2))
        );
        assert_eq!(
            parse_complex("0.25").unwrap(),
            (Rational::from((1, 4)), Rational::new())
        );
        assert!(parse_complex("1+2i+3").is_err());
        assert!(parse_complex("abc").is_err());
    }
}
