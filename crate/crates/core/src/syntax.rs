//! Recursive-descent parser for the ADE grammar.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := rational | name | deriv | '(' expr ')'
//! deriv  := name '\''+ | name '^(' uint ')'
//! ```
//!
//! An optional top-level `lhs = rhs` becomes `lhs - rhs`.

use num_bigint::BigInt;

use crate::diff::{Context, DiffPoly, RationalExpr};
use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, Var};

/// How names are resolved while parsing.
#[derive(Clone, Debug)]
pub struct Names {
    pub indep: String,
    pub params: Vec<String>,
    /// `None` accepts any other name as a function.
    pub functions: Option<Vec<String>>,
}

impl Names {
    pub fn new(indep: &str, params: &[&str]) -> Names {
        Names {
            indep: indep.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
            functions: None,
        }
    }

    pub fn with_functions(mut self, fs: &[&str]) -> Names {
        self.functions = Some(fs.iter().map(|s| s.to_string()).collect());
        self
    }

    fn candidates(&self) -> Vec<String> {
        let mut c = vec![self.indep.clone()];
        c.extend(self.functions.iter().flatten().cloned());
        c.extend(self.params.iter().cloned());
        c
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a Names,
    allow_division: bool,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, msg: impl Into<String>) -> Error {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.iter().filter(|&&c| c == b'\n').count() + 1;
        let line_start = before.iter().rposition(|&c| c == b'\n').map_or(0, |i| i + 1);
        Error::Parse { line, col: at - line_start + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(start, "expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error(start, "integer too large"))
    }

    fn expr(&mut self) -> Result<RationalExpr> {
        let mut acc = if self.eat(b'-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.factor()?;
                if !self.allow_division && !(rhs.is_polynomial() && rhs.num.is_constant()) {
                    return Err(self.error(at, "division by a non-constant expression"));
                }
                acc = acc.div(&rhs).map_err(|_| self.error(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RationalExpr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalExpr> {
        let at = match self.peek() {
            None => return Err(self.error(self.src.len(), "unexpected end of input, expected an operand")),
            Some(_) => self.pos,
        };
        let c = self.src[at];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error(self.pos, "expected `)`"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n: BigInt = std::str::from_utf8(&self.src[at..self.pos]).unwrap().parse().unwrap();
            return Ok(RationalExpr::constant(Rational::from_integer(n)));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[at..self.pos]).unwrap().to_string();
            let mut order = 0u32;
            let mut is_deriv = false;
            while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
                self.pos += 1;
                order += 1;
                is_deriv = true;
            }
            if !is_deriv && self.src[self.pos..].starts_with(b"^(") {
                self.pos += 2;
                order = self.uint()?;
                if !self.eat(b')') {
                    return Err(self.error(self.pos, "expected `)`"));
                }
                is_deriv = true;
            }
            return self.resolve(&name, order, is_deriv, at).map(RationalExpr::var);
        }
        Err(self.error(at, format!("unexpected character `{}`", c as char)))
    }

    fn resolve(&self, name: &str, order: u32, is_deriv: bool, at: usize) -> Result<Var> {
        let n = self.names;
        if name == n.indep || n.params.iter().any(|p| p == name) {
            if is_deriv {
                return Err(self.error(at, format!("derivative of `{name}`, which is not a function")));
            }
            return Ok(if name == n.indep { Var::indep(name) } else { Var::param(name) });
        }
        match &n.functions {
            Some(fs) if !fs.iter().any(|f| f == name) => {
                Err(Error::Undeclared { name: name.to_string(), candidates: n.candidates() })
            }
            _ => Ok(Var::diff(name, order)),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(self.pos, format!("unexpected `{}`", c as char))),
        }
    }
}

fn run(src: &str, names: &Names, allow_division: bool) -> Result<RationalExpr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, names, allow_division };
    let lhs = p.expr()?;
    let out = if p.eat(b'=') { lhs.sub(&p.expr()?) } else { lhs };
    p.finish()?;
    Ok(out)
}

/// Parses a rational expression; `/` by anything is allowed.
pub fn parse_rational(src: &str, names: &Names) -> Result<RationalExpr> {
    run(src, names, true)
}

/// Parses a polynomial; `/` only by constants.
pub fn parse_poly(src: &str, names: &Names) -> Result<Poly> {
    let r = run(src, names, false)?;
    let c = r.den.constant_value().expect("constant denominator");
    Ok(r.num.scale(&c.recip()))
}

/// Parses an ADE source into a [`DiffPoly`] whose context holds the
/// functions it mentions.
pub fn parse_ade(src: &str, names: &Names) -> Result<DiffPoly> {
    let p = parse_poly(src, names)?;
    let mut fs = crate::diff::functions_in(&p);
    if fs.is_empty() {
        if let Some(decl) = &names.functions {
            fs = decl.clone();
        }
    }
    let ctx = Context {
        indep: names.indep.clone(),
        functions: fs,
        params: names.params.clone(),
    };
    DiffPoly::new(p, ctx)
}

/// Splits `name = expr` into the name and the parsed right-hand side.
pub fn parse_relation(src: &str, names: &Names) -> Result<(String, RationalExpr)> {
    let Some(eq) = src.find('=') else {
        return Err(Error::Parse { line: 1, col: src.len() + 1, msg: "expected `name = expression`".into() });
    };
    let lhs = src[..eq].trim();
    let valid = lhs.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && lhs.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("`{lhs}` is not a name") });
    }
    let rhs = parse_rational(&src[eq + 1..], names).map_err(|e| match e {
        Error::Parse { line, col, msg } if line == 1 => Error::Parse { line, col: col + eq + 1, msg },
        other => other,
    })?;
    Ok((lhs.to_string(), rhs))
}

/// Normalized rendering used for every emitted ADE.
pub fn format_ade(p: &Poly) -> String {
    p.normalized().to_string()
}
