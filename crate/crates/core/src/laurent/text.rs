//! Text and JSON forms for Laurent polynomials and positive rationals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::LaurentPoly;
use super::rational::{is_laurent, reduce_content, PosRational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().expect("ascii digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} at offset {i}")));
        }
    }
    Ok(out)
}

/// Order identifiers by alphabetic prefix, then numeric suffix, so that
/// `X2` sorts before `X10`.
fn natural_key(s: &str) -> (String, u64, String) {
    let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = s.split_at(split);
    (head.to_string(), tail.parse().unwrap_or(0), s.to_string())
}

type Frac = (LaurentPoly, LaurentPoly);

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
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

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at token {}", self.pos)))
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc.0 = -&acc.0;
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = frac_add(&acc, &t, false);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = frac_add(&acc, &t, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        // A sign directly after a binary + or - is accepted: `3 + -2*X1`.
        if self.eat('-') {
            let (n, d) = self.term()?;
            return Ok((-&n, d));
        }
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = reduce_content(&acc.0 * &f.0, &acc.1 * &f.1);
            } else if self.eat('/') {
                let f = self.power()?;
                if f.0.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                acc = reduce_content(&acc.0 * &f.1, &acc.1 * &f.0);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k = match self.peek() {
            Some(Tok::Int(k)) => u32::try_from(k.clone())
                .map_err(|_| Error::Parse("exponent out of range".into()))?,
            _ => return self.err("expected integer exponent"),
        };
        self.pos += 1;
        let (n, d) = base;
        if neg {
            if n.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(reduce_content(d.pow(k), n.pow(k)))
        } else {
            Ok((n.pow(k), d.pow(k)))
        }
    }

    fn atom(&mut self) -> Result<Frac> {
        let one = LaurentPoly::one(self.vars);
        match self.peek().cloned() {
            Some(Tok::Int(c)) => {
                self.pos += 1;
                Ok((LaurentPoly::constant(self.vars, c), one))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                Ok((LaurentPoly::var(self.vars, i), one))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

fn frac_add(a: &Frac, b: &Frac, subtract: bool) -> Frac {
    let rhs = if subtract { -&b.0 } else { b.0.clone() };
    if a.1 == b.1 {
        return reduce_content(&a.0 + &rhs, a.1.clone());
    }
    reduce_content(&(&a.0 * &b.1) + &(&rhs * &a.1), &a.1 * &b.1)
}

/// Parse a rational expression built from integers, variables, `+ - * /`,
/// integer powers and parentheses. Without an explicit variable list the
/// identifiers found are used, in natural order.
pub fn parse_fraction(s: &str, vars: Option<&[String]>) -> Result<(LaurentPoly, LaurentPoly)> {
    let toks = tokenize(s)?;
    let owned: Vec<String>;
    let vars = match vars {
        Some(v) => v,
        None => {
            let mut names: Vec<String> = toks
                .iter()
                .filter_map(|t| match t {
                    Tok::Ident(n) => Some(n.clone()),
                    _ => None,
                })
                .collect();
            names.sort_by_key(|n| natural_key(n));
            names.dedup();
            owned = names;
            &owned
        }
    };
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

impl LaurentPoly {
    /// Parse text such as `-1*X1^-1*X2^2 + 3`. Quotients are accepted when
    /// they divide exactly.
    pub fn parse(s: &str, vars: Option<&[String]>) -> Result<Self> {
        let (n, d) = parse_fraction(s, vars)?;
        is_laurent(&n, &d)
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a Laurent polynomial")))
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LaurentPoly::parse(s, None)
    }
}

impl PosRational {
    /// Parse a rational expression whose reduced numerator and denominator
    /// have positive coefficients.
    pub fn parse(s: &str, vars: Option<&[String]>) -> Result<Self> {
        let (n, d) = parse_fraction(s, vars)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (n, d) = if d.terms().next_back().is_some_and(|(_, c)| c < &BigInt::zero()) {
            (-&n, -&d)
        } else {
            (n, d)
        };
        PosRational::new(n, d)
    }
}

impl FromStr for PosRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PosRational::parse(s, None)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars().to_vec(),
            terms: self
                .terms()
                .map(|(e, c)| TermJson { exp: e.clone(), coef: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let c: BigInt = t.coef.parse().map_err(|_| {
                D::Error::custom(format!("coefficient {:?} is not a decimal integer", t.coef))
            })?;
            terms.push((t.exp, c));
        }
        LaurentPoly::from_terms(&j.vars, terms).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RatJson {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for PosRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatJson { num: self.numerator().clone(), den: self.denominator().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PosRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RatJson::deserialize(d)?;
        PosRational::new(j.num, j.den).map_err(D::Error::custom)
    }
}
