//! Text syntax for divisor classes.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor | '/' factor)*
//! factor := number | atom | '(' expr ')'
//! atom   := alpha | beta | alpha_S | beta_S | x_S | S_k
//! ```
//!
//! Sets are written `{1,2}`, optionally after `_`; without commas and with
//! at most nine elements every digit is one element (`x{12}` = `x{1,2}`).
//! `alpha_E` and `beta_E` name the whole ground set. `α`, `β` and `−` are
//! accepted as well.

use num::{BigInt, One, Zero};

use crate::chow::DivisorClass;
use crate::error::{Error, Result};
use crate::matroid::{Mask, Matroid};
use crate::rational::{self, Q};

#[derive(Debug, Clone)]
enum Value {
    Scalar(Q),
    Div(DivisorClass),
}

struct Parser<'a> {
    m: &'a Matroid,
    chars: Vec<char>,
    pos: usize,
}

pub fn parse_divisor(m: &Matroid, text: &str) -> Result<DivisorClass> {
    let mut p = Parser {
        m,
        chars: text.chars().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(Error::parse(p.pos, format!("unexpected '{}'", p.chars[p.pos])));
    }
    match v {
        Value::Div(d) => Ok(d),
        Value::Scalar(c) if c.is_zero() => Ok(DivisorClass::zero(m)),
        Value::Scalar(_) => Err(Error::parse(0, "a divisor cannot have a nonzero constant term")),
    }
}

/// `c*x{..}` terms in flat order; parses back to the same coefficients.
pub fn render_divisor(m: &Matroid, d: &DivisorClass) -> String {
    let mut out = String::new();
    for (f, c) in m.flats().proper().iter().zip(&d.coeffs) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Q::zero();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            if abs.is_integer() {
                out.push_str(&abs.numer().to_string());
            } else {
                out.push_str(&rational::render(&abs));
            }
            out.push('*');
        }
        out.push('x');
        out.push_str(&f.to_string());
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '−'
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(Error::parse(self.pos, format!("expected '{c}', found '{x}'"))),
            None => Err(Error::parse(self.pos, format!("expected '{c}', found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut sign = Q::one();
        match self.peek() {
            Some('+') => self.pos += 1,
            Some(c) if is_minus(c) => {
                self.pos += 1;
                sign = -sign;
            }
            _ => {}
        }
        let start = self.pos;
        let mut acc = scale(self.term()?, &sign);
        loop {
            let s = match self.peek() {
                Some('+') => Q::one(),
                Some(c) if is_minus(c) => -Q::one(),
                _ => break,
            };
            self.pos += 1;
            let at = self.pos;
            let t = scale(self.term()?, &s);
            acc = add(acc, t).map_err(|_| Error::parse(at.max(start), "cannot add a constant to a divisor"))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul(acc, f, at)?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    match self.factor()? {
                        Value::Scalar(c) if !c.is_zero() => acc = scale(acc, &(Q::one() / c)),
                        Value::Scalar(_) => return Err(Error::parse(at, "division by zero")),
                        Value::Div(_) => return Err(Error::parse(at, "cannot divide by a divisor")),
                    }
                }
                Some(c) if c == '(' || c.is_ascii_digit() || c.is_alphabetic() => {
                    let f = self.factor()?;
                    acc = mul(acc, f, at)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Value::Scalar(Q::from_integer(self.integer()?))),
            Some('α') => {
                self.pos += 1;
                self.set_suffix_or(start, DivisorClass::alpha_s, DivisorClass::alpha)
            }
            Some('β') => {
                self.pos += 1;
                self.set_suffix_or(start, DivisorClass::beta_s, DivisorClass::beta)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let word = self.word();
                match word.as_str() {
                    "alpha" => self.set_suffix_or(start, DivisorClass::alpha_s, DivisorClass::alpha),
                    "beta" => self.set_suffix_or(start, DivisorClass::beta_s, DivisorClass::beta),
                    "x" => {
                        let s = self.set()?.ok_or_else(|| Error::parse(start, "x needs a set"))?;
                        Ok(Value::Div(DivisorClass::x(self.m, s)?))
                    }
                    "S" => {
                        let k = self.index()?;
                        Ok(Value::Div(DivisorClass::s_k(self.m, k)?))
                    }
                    _ => Err(Error::parse(start, format!("unknown token '{word}'"))),
                }
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{c}'"))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphabetic() {
                w.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        w
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s.parse().map_err(|_| Error::parse(start, "expected an integer"))
    }

    /// `_k`, `_{k}` or `{k}`.
    fn index(&mut self) -> Result<usize> {
        if self.chars.get(self.pos) == Some(&'_') {
            self.pos += 1;
        }
        let braced = self.chars.get(self.pos) == Some(&'{');
        if braced {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        let k = self.integer()?;
        if braced {
            self.expect('}')?;
        }
        usize::try_from(k).map_err(|_| Error::parse(start, "index out of range"))
    }

    fn set_suffix_or(
        &mut self,
        start: usize,
        with_set: impl Fn(&Matroid, Mask) -> Result<DivisorClass>,
        plain: impl Fn(&Matroid) -> DivisorClass,
    ) -> Result<Value> {
        match self.set()? {
            Some(s) => with_set(self.m, s).map(Value::Div).map_err(|e| match e {
                Error::InvalidArgument(msg) => Error::parse(start, msg),
                e => e,
            }),
            None => Ok(Value::Div(plain(self.m))),
        }
    }

    /// An optional set directly attached to the preceding token.
    fn set(&mut self) -> Result<Option<Mask>> {
        let underscore = self.chars.get(self.pos) == Some(&'_');
        let after = self.pos + usize::from(underscore);
        match self.chars.get(after) {
            Some('{') => {
                self.pos = after + 1;
                self.set_body().map(Some)
            }
            Some('E') if underscore => {
                self.pos = after + 1;
                Ok(Some(self.m.ground_mask()))
            }
            _ if underscore => Err(Error::parse(after, "expected a set after '_'")),
            _ => Ok(None),
        }
    }

    fn set_body(&mut self) -> Result<Mask> {
        let open = self.pos - 1;
        let close = self.chars[self.pos..]
            .iter()
            .position(|&c| c == '}')
            .map(|i| self.pos + i)
            .ok_or_else(|| Error::parse(open, "unclosed '{'"))?;
        let body: String = self.chars[self.pos..close].iter().collect();
        let n = self.m.n();
        let mut elems: Vec<(usize, usize)> = Vec::new();
        if body.trim() == "E" {
            self.pos = close + 1;
            return Ok(self.m.ground_mask());
        }
        if body.contains(',') || n > 9 {
            let mut off = self.pos;
            for part in body.split(',') {
                let t = part.trim();
                let v = t.parse::<usize>().map_err(|_| Error::parse(off, format!("bad element '{t}'")))?;
                elems.push((v, off));
                off += part.chars().count() + 1;
            }
        } else {
            for (i, c) in body.chars().enumerate() {
                if c.is_whitespace() {
                    continue;
                }
                let v = c.to_digit(10).ok_or_else(|| Error::parse(self.pos + i, format!("bad element '{c}'")))?;
                elems.push((v as usize, self.pos + i));
            }
        }
        let mut mask: Mask = 0;
        for (e, at) in elems {
            if e == 0 || e > n {
                return Err(Error::parse(at, format!("element {e} outside ground set 1..={n}")));
            }
            mask |= 1 << (e - 1);
        }
        if mask == 0 {
            return Err(Error::parse(open, "empty set"));
        }
        self.pos = close + 1;
        Ok(mask)
    }
}

fn scale(v: Value, c: &Q) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(x * c),
        Value::Div(d) => Value::Div(d.scale(c)),
    }
}

fn add(a: Value, b: Value) -> std::result::Result<Value, ()> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x + y)),
        (Value::Div(d), Value::Div(e)) => Ok(Value::Div(d.add(&e))),
        // a literal zero is harmless on either side
        (Value::Div(d), Value::Scalar(c)) | (Value::Scalar(c), Value::Div(d)) if c.is_zero() => Ok(Value::Div(d)),
        _ => Err(()),
    }
}

fn mul(a: Value, b: Value, at: usize) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), v) | (v, Value::Scalar(x)) => Ok(scale(v, &x)),
        (Value::Div(_), Value::Div(_)) => Err(Error::parse(at, "product of two divisors is not a divisor")),
    }
}
