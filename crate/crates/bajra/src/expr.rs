//! Minimal arithmetic expression grammar for registry map specs: the binary
//! operators `+ - * / ^`, unary minus, `ln` and `exp`, the variable `x`, and
//! numeric literals. `^` is right-associative and binds tighter than unary
//! minus, so `-x^2` reads as `-(x^2)`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Neg(a) => -a.eval(x),
            Expr::Ln(a) => a.eval(x).ln(),
            Expr::Exp(a) => a.eval(x).exp(),
        }
    }
}

/// Parses one expression, consuming the whole input.
pub fn parse_expr(input: &str) -> Result<Expr> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(expr)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Var,
    Ln,
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let bad = |c: char| Error::InvalidInput(format!("unexpected character `{c}` in expression"));
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            'x' => {
                tokens.push(Token::Var);
                i += 1;
            }
            'l' => {
                if chars[i..].starts_with(&['l', 'n']) {
                    tokens.push(Token::Ln);
                    i += 2;
                } else {
                    return Err(bad(c));
                }
            }
            'e' => {
                if chars[i..].starts_with(&['e', 'x', 'p']) {
                    tokens.push(Token::Exp);
                    i += 3;
                } else {
                    return Err(bad(c));
                }
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent part like 1e-3 or 2.5E4
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad number `{text}`")))?;
                tokens.push(Token::Num(value));
            }
            other => return Err(bad(other)),
        }
    }
    if tokens.is_empty() {
        return Err(Error::InvalidInput("empty expression".into()));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::InvalidInput(format!("expression parse error: {message}"))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    node = Expr::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    node = Expr::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    // term := factor (('*' | '/') factor)*
    fn term(&mut self) -> Result<Expr> {
        let mut node = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    node = Expr::Mul(Box::new(node), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    node = Expr::Div(Box::new(node), Box::new(self.factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    // factor := '-' factor | power
    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    // power := primary ('^' factor)?   (right-associative)
    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.advance() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Var) => Ok(Expr::Var),
            Some(Token::Open) => {
                let inner = self.expr()?;
                self.expect(Token::Close, "missing `)`")?;
                Ok(inner)
            }
            Some(Token::Ln) => {
                self.expect(Token::Open, "ln needs parentheses")?;
                let inner = self.expr()?;
                self.expect(Token::Close, "missing `)` after ln")?;
                Ok(Expr::Ln(Box::new(inner)))
            }
            Some(Token::Exp) => {
                self.expect(Token::Open, "exp needs parentheses")?;
                let inner = self.expr()?;
                self.expect(Token::Close, "missing `)` after exp")?;
                Ok(Expr::Exp(Box::new(inner)))
            }
            _ => Err(self.error("expected a number, `x`, `(`, `ln` or `exp`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64) -> f64 {
        parse_expr(src).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2+3*4", 0.0), 14.0);
        assert_eq!(eval("(2+3)*4", 0.0), 20.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0); // right-assoc
        assert_eq!(eval("-x^2", 3.0), -9.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("6/3/2", 0.0), 1.0);
    }

    #[test]
    fn functions_and_literals() {
        assert!((eval("ln(exp(x))", 2.5) - 2.5).abs() < 1e-12);
        assert!((eval("x^0.5", 9.0) - 3.0).abs() < 1e-12);
        assert!((eval("1e-3 + 1", 0.0) - 1.001).abs() < 1e-15);
        assert!((eval("x*ln(x)", 2.0) - 2.0 * 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_expr("").is_err());
        assert!(parse_expr("2+").is_err());
        assert!(parse_expr("(2").is_err());
        assert!(parse_expr("ln 2").is_err());
        assert!(parse_expr("2 3").is_err());
        assert!(parse_expr("y").is_err());
    }
}
