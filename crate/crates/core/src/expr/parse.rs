//! Recursive-descent parser for the scalar grammar.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := int_lit ('^' exponent)? | '(' int_lit ')'
//! int_lit  := '-'? digits
//! primary  := number | ident | func '(' expr ')' | '(' expr ')'
//! ```

use thiserror::Error;

use super::{Expr, NamedConst};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        digits(&mut self.pos);
        let mut integral = true;
        if bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            integral = false;
            if digits(&mut self.pos) == 0 {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    message: "expected digits after decimal point".into(),
                });
            }
        }
        if matches!(bytes.get(self.pos), Some(b'e' | b'E')) {
            integral = false;
            self.pos += 1;
            if matches!(bytes.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(&mut self.pos) == 0 {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    message: "expected exponent digits".into(),
                });
            }
        }
        let text = &self.src[start..self.pos];
        if integral {
            if let Ok(i) = text.parse::<i64>() {
                return Ok((Tok::Int(i), start));
            }
        }
        let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("invalid number `{text}`"),
        })?;
        Ok((Tok::Num(v), start))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    allowed: &'a [&'a str],
}

const FUNCTIONS: [&str; 3] = ["sin", "cos", "exp"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            self.syntax(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat('/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat('^') {
            let k = self.exponent()?;
            Ok(base.powi(k))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let at = self.offset();
        if self.eat('(') {
            let k = self.int_lit()?;
            self.expect(')')?;
            return Ok(k);
        }
        let k = self.int_lit()?;
        if self.eat('^') {
            let m = self.exponent()?;
            let folded = u32::try_from(m)
                .ok()
                .and_then(|m| k.checked_pow(m))
                .ok_or_else(|| ParseError::Syntax {
                    offset: at,
                    message: "exponent tower does not fold to a 32-bit integer".into(),
                })?;
            return Ok(folded);
        }
        Ok(k)
    }

    fn int_lit(&mut self) -> Result<i32, ParseError> {
        let neg = self.eat('-');
        let at = self.offset();
        match self.bump() {
            Tok::Int(i) => {
                let i = if neg { -i } else { i };
                i32::try_from(i).map_err(|_| ParseError::Syntax {
                    offset: at,
                    message: "exponent out of range".into(),
                })
            }
            _ => Err(ParseError::Syntax {
                offset: at,
                message: "exponent must be an integer literal".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Int(i) => Ok(Expr::Const(i as f64)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    if !FUNCTIONS.contains(&name.as_str()) {
                        return Err(ParseError::UnknownIdentifier { name, offset: at });
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(match name.as_str() {
                        "sin" => arg.sin(),
                        "cos" => arg.cos(),
                        _ => arg.exp(),
                    });
                }
                if self.allowed.contains(&name.as_str()) {
                    return Ok(Expr::Var(name));
                }
                if let Some(c) = NamedConst::from_name(&name) {
                    return Ok(Expr::Named(c));
                }
                if FUNCTIONS.contains(&name.as_str()) {
                    return Err(ParseError::Syntax {
                        offset: self.offset(),
                        message: format!("function `{name}` requires parentheses"),
                    });
                }
                Err(ParseError::UnknownIdentifier { name, offset: at })
            }
            Tok::End => Err(ParseError::Syntax {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            t => Err(ParseError::Syntax {
                offset: at,
                message: format!("unexpected token {t:?}"),
            }),
        }
    }
}

/// Parses `text` allowing the identifiers in `allowed_vars` as variables.
pub fn parse_scalar_expr<S: AsRef<str>>(text: &str, allowed_vars: &[S]) -> Result<Expr, ParseError> {
    let allowed: Vec<&str> = allowed_vars.iter().map(AsRef::as_ref).collect();
    let mut p = Parser {
        toks: Lexer::tokenize(text)?,
        pos: 0,
        allowed: &allowed,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, vars: &[&str]) -> Result<Expr, ParseError> {
        parse_scalar_expr(s, vars)
    }

    #[test]
    fn single_variable() {
        assert_eq!(parse("z", &["x", "y", "z"]).unwrap(), Expr::var("z"));
    }

    #[test]
    fn function_of_quotient() {
        let e = parse("cos(3*theta/2)", &["theta"]).unwrap();
        let want = ((Expr::c(3.0) * Expr::var("theta")) / Expr::c(2.0)).cos();
        assert_eq!(e, want);
    }

    #[test]
    fn form_syntax_is_rejected() {
        match parse("dy - z*dx", &["x", "y", "z"]) {
            Err(ParseError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "dy");
                assert_eq!(offset, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let x = || Expr::var("x");
        assert_eq!(parse("-x^2", &["x"]).unwrap(), -(x().powi(2)));
        assert_eq!(parse("-x*x", &["x"]).unwrap(), (-x()) * x());
        assert_eq!(parse("x-x-x", &["x"]).unwrap(), (x() - x()) - x());
        assert_eq!(parse("x/x/x", &["x"]).unwrap(), (x() / x()) / x());
        assert_eq!(parse("x^2^3", &["x"]).unwrap(), x().powi(8));
        assert_eq!(parse("x^-2", &["x"]).unwrap(), x().powi(-2));
        assert_eq!(parse("x^(-2)", &["x"]).unwrap(), x().powi(-2));
        assert_eq!(parse("2.5e-1", &["x"]).unwrap(), Expr::c(0.25));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("x + * y", &["x", "y"]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse("sin x", &["x"]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("x^y", &["x", "y"]),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("(x", &["x"]), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(
            parse("x $", &["x"]),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("1.", &[]), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("", &[]), Err(ParseError::Syntax { offset: 0, .. })));
    }

    #[test]
    fn unknown_function() {
        assert!(matches!(
            parse("atan2(x)", &["x"]),
            Err(ParseError::UnknownIdentifier { .. })
        ));
    }
}
