//! Hand-written lexer shared by every program notation.
//!
//! All notations use the same instruction tokens; each one accepts a subset
//! of [`Item`] and rejects the rest with a located [`ParseError`].

use crate::action::Basic;
use crate::error::ParseError;
use crate::pga::CoreInstr;

/// One instruction token, before a notation decides what it means.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Item {
    Plain(Basic),
    PosTest(Basic),
    NegTest(Basic),
    /// `#l`
    Fwd(usize),
    /// `##l`
    Abs(usize),
    /// `\#l`
    Back(usize),
    Halt,
    Swo(usize),
    Put(usize, CoreInstr),
    Get(usize),
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    pub(crate) fn error_at(&self, at: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        let tail = &self.src[at..];
        let mut token: String = tail
            .chars()
            .take_while(|c| !c.is_whitespace() && !matches!(c, ';' | '(' | ')'))
            .collect();
        if token.is_empty() {
            token = tail.chars().next().map(String::from).unwrap_or_default();
        }
        ParseError {
            line,
            column,
            token,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn number(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "number out of range"))
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
            return Err(self.error("expected an identifier"));
        }
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.bump();
        }
        Ok(&self.src[start..self.pos])
    }

    /// `ident ('.' ident)? (':' segment)*` where a segment is a word or a
    /// braced core instruction.
    pub(crate) fn basic(&mut self) -> Result<Basic, ParseError> {
        let head = self.ident()?;
        let (focus, mut method) = if self.eat('.') {
            (Some(head.to_string()), self.ident()?.to_string())
        } else {
            (None, head.to_string())
        };
        while self.eat(':') {
            method.push(':');
            if self.eat('{') {
                self.skip_ws();
                let inner = self.core_instr()?;
                self.skip_ws();
                self.expect('}')?;
                method.push('{');
                method.push_str(&inner.to_string());
                method.push('}');
            } else {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.bump();
                }
                if start == self.pos {
                    return Err(self.error("expected a parameter segment"));
                }
                method.push_str(&self.src[start..self.pos]);
            }
        }
        Ok(Basic::from_parts(focus, method))
    }

    /// A core primitive instruction: `a`, `+a`, `-a`, `#l` or `!`.
    pub(crate) fn core_instr(&mut self) -> Result<CoreInstr, ParseError> {
        let start = self.pos;
        match self.item()? {
            Item::Plain(b) => Ok(CoreInstr::Plain(b)),
            Item::PosTest(b) => Ok(CoreInstr::PosTest(b)),
            Item::NegTest(b) => Ok(CoreInstr::NegTest(b)),
            Item::Fwd(l) => Ok(CoreInstr::Jump(l)),
            Item::Halt => Ok(CoreInstr::Halt),
            _ => Err(self.error_at(start, "expected a core primitive instruction")),
        }
    }

    pub(crate) fn payload(&mut self) -> Result<CoreInstr, ParseError> {
        self.skip_ws();
        if self.eat('{') {
            self.skip_ws();
            let instr = self.core_instr()?;
            self.skip_ws();
            self.expect('}')?;
            Ok(instr)
        } else {
            self.core_instr()
        }
    }

    pub(crate) fn register(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let i = self.number()?;
        if i == 0 {
            return Err(self.error_at(start, "register numbers start at 1"));
        }
        Ok(i)
    }

    /// Reads one instruction token.
    pub(crate) fn item(&mut self) -> Result<Item, ParseError> {
        match self.peek() {
            Some('!') => {
                self.bump();
                Ok(Item::Halt)
            }
            Some('#') => {
                self.bump();
                if self.eat('#') {
                    Ok(Item::Abs(self.number()?))
                } else {
                    Ok(Item::Fwd(self.number()?))
                }
            }
            Some('\\') => {
                self.bump();
                self.expect('#')?;
                Ok(Item::Back(self.number()?))
            }
            Some('@') => {
                self.bump();
                Ok(Item::Swo(self.number()?))
            }
            Some('+') => {
                self.bump();
                Ok(Item::PosTest(self.basic()?))
            }
            Some('-') => {
                self.bump();
                Ok(Item::NegTest(self.basic()?))
            }
            Some(c) if c.is_ascii_lowercase() => {
                let rest = self.rest();
                if rest.starts_with("put(") {
                    self.pos += 4;
                    self.skip_ws();
                    let i = self.register()?;
                    self.skip_ws();
                    self.expect(',')?;
                    let v = self.payload()?;
                    self.skip_ws();
                    self.expect(')')?;
                    Ok(Item::Put(i, v))
                } else if rest.starts_with("get(") {
                    self.pos += 4;
                    self.skip_ws();
                    let i = self.register()?;
                    self.skip_ws();
                    self.expect(')')?;
                    Ok(Item::Get(i))
                } else {
                    Ok(Item::Plain(self.basic()?))
                }
            }
            _ => Err(self.error("expected an instruction")),
        }
    }

    /// Parses `item (';' item)*` to the end of input, mapping each item with
    /// `accept` (which receives the item's start offset for diagnostics).
    pub(crate) fn sequence<T>(
        &mut self,
        mut accept: impl FnMut(&Self, usize, Item) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        self.skip_ws();
        loop {
            let start = self.pos;
            let item = self.item()?;
            out.push(accept(self, start, item)?);
            self.skip_ws();
            if self.eat(';') {
                self.skip_ws();
                continue;
            }
            self.expect_end()?;
            return Ok(out);
        }
    }
}
