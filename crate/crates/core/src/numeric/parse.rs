//! Lossless text syntax for exact inputs: `p`, `p/q`, `(p+q sqrt d)/r`,
//! `sqrt d`, and sums, products and quotients of these.

use super::alg::Alg;
use super::surd::QuadraticSurd;
use super::NumericError;
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, NumericError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            '√' => {
                out.push(Tok::Sqrt);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Tok::Int(lit.parse().expect("digits")));
            }
            _ if s[s.char_indices().nth(i).map(|(b, _)| b).unwrap_or(0)..].starts_with("sqrt") => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            _ => return Err(NumericError::Parse(format!("unexpected character '{c}' in \"{s}\""))),
        }
    }
    Ok(out)
}

fn compatible(a: Alg, b: &Alg) -> Result<Alg, NumericError> {
    match (a.field(), b.field()) {
        (Some(x), Some(y)) if !x.same_as(y) => {
            let rad = |f: &std::sync::Arc<super::NumberField>| f.radicand().cloned().unwrap_or_default();
            Err(NumericError::IncomparableFields(rad(x), rad(y)))
        }
        _ => Ok(a),
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Alg, NumericError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.product()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                let rhs = self.product()?;
                acc = compatible(acc, &rhs)? + rhs;
            } else if self.eat('-') {
                let rhs = self.product()?;
                acc = compatible(acc, &rhs)? - rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Alg, NumericError> {
        let mut acc = self.atom()?;
        loop {
            if self.eat('*') {
                let rhs = self.atom()?;
                acc = compatible(acc, &rhs)? * rhs;
            } else if self.eat('/') {
                let d = self.atom()?;
                acc = compatible(acc, &d)?;
                if d.is_zero() {
                    return Err(NumericError::DivisionByZero);
                }
                acc = acc / d;
            } else if matches!(self.peek(), Some(Tok::Sqrt) | Some(Tok::Op('('))) {
                // Juxtaposition such as `3 sqrt 5` or `2(1+sqrt 5)`.
                let rhs = self.atom()?;
                acc = compatible(acc, &rhs)? * rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom(&mut self) -> Result<Alg, NumericError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Alg::from_bigint(n))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                let paren = self.eat('(');
                let Some(Tok::Int(d)) = self.toks.get(self.pos).cloned() else {
                    return Err(NumericError::Parse("sqrt expects an integer radicand".into()));
                };
                self.pos += 1;
                if paren && !self.eat(')') {
                    return Err(NumericError::Parse("unclosed sqrt(".into()));
                }
                let s = QuadraticSurd::new(BigInt::from(0), BigInt::from(1), BigInt::from(1), d)?;
                Ok(s.to_alg())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(NumericError::Parse("unbalanced parenthesis".into()));
                }
                Ok(v)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            other => Err(NumericError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_alg(s: &str) -> Result<Alg, NumericError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(NumericError::Parse("empty value".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(NumericError::Parse(format!("trailing input in \"{s}\"")));
    }
    Ok(v)
}

pub fn parse_surd(s: &str) -> Result<QuadraticSurd, NumericError> {
    let v = parse_alg(s)?;
    QuadraticSurd::from_alg(&v).ok_or_else(|| NumericError::Parse(format!("\"{s}\" is not a quadratic surd")))
}

pub fn parse_rational(s: &str) -> Result<BigRational, NumericError> {
    parse_alg(s)?.as_rational().ok_or_else(|| NumericError::Parse(format!("\"{s}\" is not rational")))
}

/// Any supported exact real: a rational or a quadratic surd.
pub fn parse_real(s: &str) -> Result<Alg, NumericError> {
    parse_alg(s)
}
