//! Source locations and syntax errors shared by both parsers.

use alloc::string::String;
use core::fmt;

/// A 1-based line/column position in source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub line: u32,
    pub column: u32,
}

impl Location {
    pub const fn new(line: u32, column: u32) -> Self {
        Location { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub location: Location,
    pub expected: String,
    pub found: String,
}

impl SyntaxError {
    pub fn new(location: Location, expected: impl Into<String>, found: impl Into<String>) -> Self {
        SyntaxError {
            location,
            expected: expected.into(),
            found: found.into(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error: expected {}, found {} at {}",
            self.expected, self.found, self.location
        )
    }
}

impl core::error::Error for SyntaxError {}

/// Character cursor with line/column tracking.
#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    pub(crate) fn location(&self) -> Location {
        Location::new(self.line, self.column)
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    pub(crate) fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub(crate) fn eat_while(&mut self, mut pred: impl FnMut(char) -> bool, out: &mut String) {
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
    }

    /// Skips whitespace and line comments introduced by `marker`.
    pub(crate) fn skip_trivia(&mut self, marker: &str) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(c) if self.starts_comment(c, marker) => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn starts_comment(&self, first: char, marker: &str) -> bool {
        let mut m = marker.chars();
        if m.next() != Some(first) {
            return false;
        }
        match m.next() {
            None => true,
            Some(second) => self.peek2() == Some(second),
        }
    }
}
