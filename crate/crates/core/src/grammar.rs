//! Character cursor shared by the class and predicate expression parsers.

use crate::error::{Error, Result};

#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    /// Identifier: ASCII letter or underscore, then letters, digits, underscores.
    pub fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars.find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_')).map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    /// Keyword lookahead that does not consume on mismatch.
    pub fn eat_word(&mut self, word: &str) -> bool {
        let save = self.pos;
        match self.ident() {
            Some(w) if w.eq_ignore_ascii_case(word) => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    pub fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected a number"));
        }
        self.pos += end;
        rest[..end].parse().map_err(|_| self.error("number out of range"))
    }

    /// Raw text up to the parenthesis closing the one just consumed.
    pub fn raw_until_close(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        let mut depth = 0usize;
        for (i, c) in rest.char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    self.pos += i + 1;
                    return Ok(rest[..i].trim());
                }
                ')' => depth -= 1,
                _ => {}
            }
        }
        Err(self.error("unclosed '('"))
    }

    pub fn error(&self, msg: &str) -> Error {
        Error::parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }
}
