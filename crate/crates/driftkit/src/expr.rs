//! Infix expression parser and evaluator for user-written drift functions
//! such as `exp(-1+2*x/n)*x/n`.
//!
//! Grammar: precedence `^` > unary `-` > `*`,`/` > `+`,`-`; parentheses;
//! function calls `name(args)` for `exp`, `ln`, `ceil` (one argument) and
//! `min`, `max` (two); identifiers limited to `x` and `n`; numeric literals
//! in decimal or scientific notation; whitespace insignificant. `^` is
//! right-associative and its exponent may carry a unary minus.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Const(f64),
    X,
    N,
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, Box<ExprAst>),
    Exp(Box<ExprAst>),
    Ln(Box<ExprAst>),
    Ceil(Box<ExprAst>),
    Min(Box<ExprAst>, Box<ExprAst>),
    Max(Box<ExprAst>, Box<ExprAst>),
}

impl ExprAst {
    /// Parse a source string into an AST.
    pub fn parse(src: &str) -> Result<ExprAst> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let ast = p.expr()?;
        match p.peek() {
            Token::End => Ok(ast),
            _ => Err(p.unexpected("end of input")),
        }
    }

    /// Evaluate at the point `(x, n)`.
    ///
    /// Total on the declared domain: out-of-domain arguments (ln of a
    /// non-positive value, division by zero, fractional power of a negative
    /// base) report [`Error::Domain`] instead of propagating NaN.
    pub fn eval(&self, x: f64, n: f64) -> Result<f64> {
        Ok(match self {
            ExprAst::Const(c) => *c,
            ExprAst::X => x,
            ExprAst::N => n,
            ExprAst::Neg(e) => -e.eval(x, n)?,
            ExprAst::Add(a, b) => a.eval(x, n)? + b.eval(x, n)?,
            ExprAst::Sub(a, b) => a.eval(x, n)? - b.eval(x, n)?,
            ExprAst::Mul(a, b) => a.eval(x, n)? * b.eval(x, n)?,
            ExprAst::Div(a, b) => {
                let d = b.eval(x, n)?;
                if d == 0.0 {
                    return Err(Error::domain(format!("division by zero at x={x}")));
                }
                a.eval(x, n)? / d
            }
            ExprAst::Pow(a, b) => {
                let base = a.eval(x, n)?;
                let exponent = b.eval(x, n)?;
                let v = base.powf(exponent);
                if v.is_nan() {
                    return Err(Error::domain(format!(
                        "{base}^{exponent} is undefined at x={x}"
                    )));
                }
                v
            }
            ExprAst::Exp(e) => e.eval(x, n)?.exp(),
            ExprAst::Ln(e) => {
                let v = e.eval(x, n)?;
                if v <= 0.0 {
                    return Err(Error::domain(format!("ln({v}) at x={x}")));
                }
                v.ln()
            }
            ExprAst::Ceil(e) => e.eval(x, n)?.ceil(),
            ExprAst::Min(a, b) => a.eval(x, n)?.min(b.eval(x, n)?),
            ExprAst::Max(a, b) => a.eval(x, n)?.max(b.eval(x, n)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => pushed(&mut out, &mut i, Token::Plus),
            '-' => pushed(&mut out, &mut i, Token::Minus),
            '*' => pushed(&mut out, &mut i, Token::Star),
            '/' => pushed(&mut out, &mut i, Token::Slash),
            '^' => pushed(&mut out, &mut i, Token::Caret),
            '(' => pushed(&mut out, &mut i, Token::LParen),
            ')' => pushed(&mut out, &mut i, Token::RParen),
            ',' => pushed(&mut out, &mut i, Token::Comma),
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    at: start,
                    msg: format!("bad numeric literal `{text}`"),
                })?;
                out.push((start, Token::Num(value)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    at: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push((bytes.len(), Token::End));
    Ok(out)
}

fn pushed(out: &mut Vec<(usize, Token)>, i: &mut usize, t: Token) {
    out.push((*i, t));
    *i += 1;
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        self.pos += 1;
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::Parse {
            at: self.tokens[self.pos].0,
            msg: format!("expected {wanted}, found {:?}", self.tokens[self.pos].1),
        }
    }

    fn expect(&mut self, t: Token, wanted: &str) -> Result<()> {
        if *self.peek() == t {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.pos += 1;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.pos += 1;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.pos += 1;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    self.pos += 1;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        if *self.peek() == Token::Minus {
            self.pos += 1;
            Ok(ExprAst::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.pos += 1;
            // right-associative; exponent admits unary minus
            let exponent = self.unary()?;
            Ok(ExprAst::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ExprAst> {
        match self.bump() {
            Token::Num(v) => Ok(ExprAst::Const(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if *self.peek() == Token::LParen {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Token::Comma {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Token::RParen, "`)`")?;
                    self.call(&name, args)
                } else {
                    match name.as_str() {
                        "x" => Ok(ExprAst::X),
                        "n" => Ok(ExprAst::N),
                        other => Err(Error::Parse {
                            at: self.tokens[self.pos - 1].0,
                            msg: format!("unknown identifier `{other}` (only x, n)"),
                        }),
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a number, identifier or `(`"))
            }
        }
    }

    fn call(&mut self, name: &str, mut args: Vec<ExprAst>) -> Result<ExprAst> {
        let arity_err = |want: usize, got: usize| Error::Parse {
            at: 0,
            msg: format!("{name} takes {want} argument(s), got {got}"),
        };
        let one = |args: &mut Vec<ExprAst>| -> Result<Box<ExprAst>> {
            if args.len() == 1 {
                Ok(Box::new(args.pop().unwrap()))
            } else {
                Err(arity_err(1, args.len()))
            }
        };
        let two = |args: &mut Vec<ExprAst>| -> Result<(Box<ExprAst>, Box<ExprAst>)> {
            if args.len() == 2 {
                let b = Box::new(args.pop().unwrap());
                let a = Box::new(args.pop().unwrap());
                Ok((a, b))
            } else {
                Err(arity_err(2, args.len()))
            }
        };
        match name {
            "exp" => Ok(ExprAst::Exp(one(&mut args)?)),
            "ln" => Ok(ExprAst::Ln(one(&mut args)?)),
            "ceil" => Ok(ExprAst::Ceil(one(&mut args)?)),
            "min" => {
                let (a, b) = two(&mut args)?;
                Ok(ExprAst::Min(a, b))
            }
            "max" => {
                let (a, b) = two(&mut args)?;
                Ok(ExprAst::Max(a, b))
            }
            other => Err(Error::Parse {
                at: 0,
                msg: format!("unknown function `{other}`"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64, n: f64) -> f64 {
        ExprAst::parse(src).unwrap().eval(x, n).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1+2*3", 0.0, 0.0), 7.0);
        assert_eq!(eval("2^3^2", 0.0, 0.0), 512.0); // right-assoc
        assert_eq!(eval("-2^2", 0.0, 0.0), -4.0); // ^ binds tighter than unary -
        assert_eq!(eval("2^-2", 0.0, 0.0), 0.25);
        assert_eq!(eval("6/3/2", 0.0, 0.0), 1.0); // left-assoc
        assert_eq!(eval("1-2-3", 0.0, 0.0), -4.0);
    }

    #[test]
    fn scientific_literals_and_whitespace() {
        assert_eq!(eval(" 1.5e2 + 2E-1 ", 0.0, 0.0), 150.2);
        assert_eq!(eval("1e3", 0.0, 0.0), 1000.0);
        assert_eq!(eval(".5", 0.0, 0.0), 0.5);
    }

    #[test]
    fn variables_and_functions() {
        let v = eval("exp(-1+2*x/n)*x/n", 50.0, 100.0);
        assert!((v - (0.0f64).exp() * 0.5).abs() < 1e-15);
        assert_eq!(eval("min(x, n)", 3.0, 5.0), 3.0);
        assert_eq!(eval("max(x, n)", 3.0, 5.0), 5.0);
        assert_eq!(eval("ceil(x/2)", 5.0, 0.0), 3.0);
        assert!((eval("ln(x)", std::f64::consts::E, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let ast = ExprAst::parse("ln(x)").unwrap();
        assert!(matches!(ast.eval(0.0, 0.0), Err(Error::Domain(_))));
        let ast = ExprAst::parse("1/x").unwrap();
        assert!(matches!(ast.eval(0.0, 0.0), Err(Error::Domain(_))));
        let ast = ExprAst::parse("x^0.5").unwrap();
        assert!(matches!(ast.eval(-1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        match ExprAst::parse("1 + y") {
            Err(Error::Parse { at, .. }) => assert_eq!(at, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(ExprAst::parse("min(1)").is_err());
        assert!(ExprAst::parse("(1+2").is_err());
        assert!(ExprAst::parse("1 2").is_err());
    }
}
