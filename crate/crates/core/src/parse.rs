//! Parser for the word grammar shared by the library and the command line.
//!
//! ```text
//! word    := term*
//! term    := atom postfix*
//! postfix := '^' signed-int | '^' '(' word ')'
//! atom    := symbol digits? | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `g^h` is `h⁻¹ g h` and `[g,h]` is `g⁻¹ h⁻¹ g h`. A symbol followed by
//! digits, such as `b2`, is the symbol conjugated by that power of the rooted
//! generator: `b2 = b^(a^2)`. Whitespace and `*` separators are ignored.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Identity,
    Symbol { name: char, position: usize },
    /// `name` conjugated by the `index`-th power of the rooted generator.
    Indexed { name: char, index: u32, position: usize },
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
    Conjugate(Box<Expr>, Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let expr = parser.word()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error(format!("unexpected `{}`", parser.chars[parser.pos])));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_whitespace() || *c == '*' || *c == '·')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, ')' | ']' | ',') {
                break;
            }
            terms.push(self.term()?);
        }
        Ok(match terms.len() {
            0 => Expr::Identity,
            1 => terms.pop().unwrap(),
            _ => Expr::Product(terms),
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut expr = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let by = self.word()?;
                    self.expect(')')?;
                    expr = Expr::Conjugate(Box::new(expr), Box::new(by));
                }
                Some(c) if c == '-' || c == '+' || c.is_ascii_digit() => {
                    let exponent = self.signed_int()?;
                    expr = Expr::Power(Box::new(expr), exponent);
                }
                _ => return Err(self.error("expected an integer or `(` after `^`")),
            }
        }
        Ok(expr)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let mut negative = false;
        if let Some(c @ ('-' | '+')) = self.peek() {
            negative = c == '-';
            self.pos += 1;
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let value: i64 = digits
            .parse()
            .map_err(|_| Error::Parse {
                position: start + 1,
                message: format!("exponent `{digits}` out of range"),
            })?;
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr> {
        let position = self.pos + 1;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.word()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let left = self.word()?;
                self.expect(',')?;
                let right = self.word()?;
                self.expect(']')?;
                Ok(Expr::Commutator(Box::new(left), Box::new(right)))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Expr::Identity)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Ok(Expr::Symbol { name: c, position });
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let index = digits.parse().map_err(|_| Error::Parse {
                    position: start + 1,
                    message: format!("index `{digits}` out of range"),
                })?;
                Ok(Expr::Indexed { name: c, index, position })
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Renders a parse error with a caret under the offending column.
pub fn annotate(text: &str, err: &Error) -> String {
    match err {
        Error::Parse { position, message } => {
            let pad = " ".repeat(position.saturating_sub(1));
            format!("{text}\n{pad}^ {message}")
        }
        other => other.to_string(),
    }
}
