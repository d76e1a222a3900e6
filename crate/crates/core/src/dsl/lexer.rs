use alloc::string::String;
use alloc::vec::Vec;

use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Int(i) => alloc::format!("{i}"),
            Tok::Str(s) => alloc::format!("\"{s}\""),
            Tok::Sym(s) => String::from(*s),
            Tok::Eof => String::from("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const SYMBOLS: &[&str] = &[
    "->", ">=", "{", "}", "(", ")", "[", "]", "<", ">", ".", "!", "?", "+", "|", "=", ":", ",", "*", "-",
];

struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.column, length: 0, offset: self.offset }
    }

    fn error(&self, start: SourceSpan, found: String, expected: &str) -> ParseError {
        let mut span = start;
        span.length = self.column.saturating_sub(start.column).max(1);
        ParseError {
            kind: ParseErrorKind::InvalidToken,
            span: span.clamped(self.src.len()),
            expected: alloc::vec![String::from(expected)],
            found,
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.src[self.offset..].starts_with("//") => {
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

    fn next(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let start = self.here();
        let finish = |lx: &Self, tok: Tok| {
            let mut span = start;
            span.length = lx.offset - start.offset;
            Token { tok, span }
        };
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, span: start });
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok(finish(self, Tok::Ident(s)));
        }
        if c.is_ascii_digit() {
            let mut v: i64 = 0;
            let mut overflow = false;
            while let Some(c) = self.peek() {
                let Some(d) = c.to_digit(10) else { break };
                self.bump();
                match v.checked_mul(10).and_then(|v| v.checked_add(i64::from(d))) {
                    Some(n) => v = n,
                    None => overflow = true,
                }
            }
            if overflow {
                let text = String::from(&self.src[start.offset..self.offset]);
                return Err(self.error(start, text, "integer within 64-bit range"));
            }
            return Ok(finish(self, Tok::Int(v)));
        }
        if c == '"' {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    None | Some('\n') => {
                        return Err(self.error(start, String::from("unterminated string"), "`\"`"));
                    }
                    Some('"') => break,
                    Some('\\') => match self.bump() {
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        other => {
                            let found = other.map(String::from).unwrap_or_default();
                            return Err(self.error(start, found, "escape sequence"));
                        }
                    },
                    Some(c) => s.push(c),
                }
            }
            return Ok(finish(self, Tok::Str(s)));
        }
        for sym in SYMBOLS {
            if self.src[self.offset..].starts_with(sym) {
                for _ in 0..sym.len() {
                    self.bump();
                }
                return Ok(finish(self, Tok::Sym(sym)));
            }
        }
        self.bump();
        Err(self.error(start, String::from(c), "token"))
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer { src, offset: 0, line: 1, column: 1 };
    let mut out = Vec::new();
    loop {
        let t = lx.next()?;
        let eof = t.tok == Tok::Eof;
        out.push(t);
        if eof {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn symbols_and_comments() {
        assert_eq!(
            kinds("a!.b // x\n -> >= 12"),
            alloc::vec![
                Tok::Ident("a".into()),
                Tok::Sym("!"),
                Tok::Sym("."),
                Tok::Ident("b".into()),
                Tok::Sym("->"),
                Tok::Sym(">="),
                Tok::Int(12),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spans_are_one_based() {
        let t = tokenize("x\n  yy").unwrap();
        assert_eq!((t[1].span.line, t[1].span.column, t[1].span.length), (2, 3, 2));
    }

    #[test]
    fn string_escapes() {
        assert_eq!(kinds(r#""a\"b\\""#)[0], Tok::Str("a\"b\\".into()));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("a @").unwrap_err();
        assert_eq!((e.span.line, e.span.column), (1, 3));
        assert_eq!(e.found, "@");
    }

    #[test]
    fn overflow() {
        assert!(tokenize("99999999999999999999").is_err());
    }
}
