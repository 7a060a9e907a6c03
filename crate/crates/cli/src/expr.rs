//! A minimal polynomial expression grammar: integer and rational
//! literals, named variables, `+`, `-`, `*`, `^` with nonnegative integer
//! exponents, and parentheses. Anything else is rejected with a message
//! naming the offending token.

use polysym_core::exact::{Poly, Rat, Vars};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Int(s));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(s));
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Token::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.next();
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Token::Slash => {
                    return Err(
                        "division is only allowed inside rational literals; write (1/2)*x instead of x/2"
                            .to_string(),
                    );
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, String> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            let p = self.unary()?;
            return Ok(-&p);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Int(s)) => {
                    let k: u32 = s.parse().map_err(|_| "exponent overflows".to_string())?;
                    Ok(base.pow(k))
                }
                _ => Err("non-polynomial exponent: '^' must be followed by a nonnegative integer literal".to_string()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, String> {
        match self.next() {
            Some(Token::Int(num)) => {
                // optional rational literal num/den
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Token::Int(den)) => {
                            if den.chars().all(|c| c == '0') {
                                return Err("zero denominator in rational literal".to_string());
                            }
                            let r = Rat::new(num.parse().unwrap(), den.parse().unwrap());
                            Ok(Poly::constant(self.vars, r))
                        }
                        _ => Err("rational literal must be integer/integer".to_string()),
                    }
                } else {
                    Ok(Poly::constant(self.vars, Rat::new(num.parse().unwrap(), 1.into())))
                }
            }
            Some(Token::Ident(name)) => match self.vars.index_of(&name) {
                Some(i) => Ok(Poly::var(self.vars, i)),
                None => Err(format!("unknown variable '{name}'")),
            },
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err("missing closing parenthesis".to_string()),
                }
            }
            Some(tok) => Err(format!("unexpected token {tok:?}")),
            None => Err("unexpected end of expression".to_string()),
        }
    }
}

/// Parse one polynomial over the given chart.
pub fn parse_poly(input: &str, vars: &Vars) -> Result<Poly, String> {
    let tokens = lex(input).map_err(|e| format!("in '{input}': {e}"))?;
    let mut p = Parser { tokens, pos: 0, vars };
    let poly = p.expr().map_err(|e| format!("in '{input}': {e}"))?;
    if p.pos != p.tokens.len() {
        return Err(format!("in '{input}': trailing tokens after a complete expression"));
    }
    Ok(poly)
}
