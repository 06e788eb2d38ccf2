//! Parser for the textual form of rational functions.
//!
//! Accepts everything the `Display` impls print, plus ordinary arithmetic:
//! `+ - * /`, integer exponents `^n` (possibly negative), parentheses, integer
//! literals and the symbols `s`, `q` (= `s^2`), `Q` and `i`.

use super::ratfunc::RatFunc;
use super::FieldError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Sym(char),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, FieldError> {
    let err = |msg: String| FieldError::Parse(msg);
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        match c {
            ' ' | '\t' | '\n' => k += 1,
            '0'..='9' => {
                let start = k;
                while k < cs.len() && cs[k].is_ascii_digit() {
                    k += 1;
                }
                let text: String = cs[start..k].iter().collect();
                let n = text.parse::<i64>().map_err(|e| err(format!("bad integer {text}: {e}")))?;
                out.push(Tok::Num(n));
            }
            's' | 'q' | 'Q' | 'i' => {
                out.push(Tok::Sym(c));
                k += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                k += 1;
            }
            _ => return Err(err(format!("unexpected character '{c}' at offset {k}"))),
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

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, FieldError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, FieldError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Num(n)) => *n,
                other => return Err(FieldError::Parse(format!("expected exponent, found {other:?}"))),
            };
            self.pos += 1;
            let e = i32::try_from(if neg { -e } else { e })
                .map_err(|_| FieldError::Parse("exponent out of range".into()))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, FieldError> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(RatFunc::from_int(n)),
            Some(Tok::Sym('s')) => Ok(RatFunc::s_pow(1)),
            Some(Tok::Sym('q')) => Ok(RatFunc::q_pow(1)),
            Some(Tok::Sym('Q')) => Ok(RatFunc::big_q_pow(1)),
            Some(Tok::Sym('i')) => Ok(RatFunc::i()),
            Some(Tok::Op('(')) => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(FieldError::Parse("missing ')'".into()));
                }
                Ok(v)
            }
            other => Err(FieldError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a rational-function expression such as `i*s^-4` or `(s^2 + 1)/(Q - 1)`.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc, FieldError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(FieldError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FieldError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

impl std::str::FromStr for RatFunc {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfunc(s)
    }
}
