//! Lexer for the expression language.

use std::fmt;

use crate::bits::BitString;

/// Byte-offset range of a token or AST node in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

/// 1-based line/column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Parse (or lex) failure with position and the tokens that would have
/// been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(src: &str, span: Span, message: impl Into<String>, expected: &[&str]) -> Self {
        let (line, column) = line_col(src, span.start);
        ParseError {
            message: message.into(),
            span,
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ket(BitString),
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semicolon,
    Equals,
    Lt,
    Gt,
    Pipe,
    /// The `⊗` glyph; the ASCII spelling `(x)` is recognized by the parser
    /// from its three constituent tokens so that `norm(x)` stays a call.
    TensorGlyph,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ket(s) => format!(
                "ket |{}>",
                if s.is_empty() {
                    "e".into()
                } else {
                    s.to_string()
                }
            ),
            TokenKind::Int(n) => format!("integer {n}"),
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semicolon => "`;`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Lt => "`<`".into(),
            TokenKind::Gt => "`>`".into(),
            TokenKind::Pipe => "`|`".into(),
            TokenKind::TensorGlyph => "`(x)`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Tokenize the source. Ket literals (`|110>`, `|e>`, Unicode `|…⟩` and
/// `|λ⟩`) are lexed atomically so that leading zeros survive; a lone `|`
/// is the inner-product separator.
pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let end_of = |i: usize| -> usize {
        chars
            .get(i)
            .map(|&(pos, c)| pos + c.len_utf8())
            .unwrap_or(src.len())
    };
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = |kind: TokenKind, tokens: &mut Vec<Token>, i: &mut usize| {
            tokens.push(Token {
                kind,
                span: Span::new(pos, end_of(*i)),
            });
            *i += 1;
        };
        match c {
            '+' => simple(TokenKind::Plus, &mut tokens, &mut i),
            '-' => simple(TokenKind::Minus, &mut tokens, &mut i),
            '*' => simple(TokenKind::Star, &mut tokens, &mut i),
            '/' => simple(TokenKind::Slash, &mut tokens, &mut i),
            '.' | '∘' => simple(TokenKind::Dot, &mut tokens, &mut i),
            '^' => simple(TokenKind::Caret, &mut tokens, &mut i),
            '(' => simple(TokenKind::LParen, &mut tokens, &mut i),
            ')' => simple(TokenKind::RParen, &mut tokens, &mut i),
            '[' => simple(TokenKind::LBracket, &mut tokens, &mut i),
            ']' => simple(TokenKind::RBracket, &mut tokens, &mut i),
            '{' => simple(TokenKind::LBrace, &mut tokens, &mut i),
            '}' => simple(TokenKind::RBrace, &mut tokens, &mut i),
            ',' => simple(TokenKind::Comma, &mut tokens, &mut i),
            ':' => simple(TokenKind::Colon, &mut tokens, &mut i),
            ';' => simple(TokenKind::Semicolon, &mut tokens, &mut i),
            '=' => simple(TokenKind::Equals, &mut tokens, &mut i),
            '<' | '⟨' => simple(TokenKind::Lt, &mut tokens, &mut i),
            '>' | '⟩' => simple(TokenKind::Gt, &mut tokens, &mut i),
            '⊗' => simple(TokenKind::TensorGlyph, &mut tokens, &mut i),
            '|' => {
                // try a ket literal: bits or the empty-string marker,
                // immediately closed by '>' or '⟩'
                let mut j = i + 1;
                let mut bits = Vec::new();
                let mut empty_marker = false;
                if let Some(&(_, m)) = chars.get(j) {
                    if m == 'e' || m == 'λ' {
                        empty_marker = true;
                        j += 1;
                    } else {
                        while let Some(&(_, b)) = chars.get(j) {
                            match b {
                                '0' => bits.push(false),
                                '1' => bits.push(true),
                                _ => break,
                            }
                            j += 1;
                        }
                    }
                }
                let body_seen = empty_marker || !bits.is_empty();
                match chars.get(j) {
                    Some(&(_, close)) if body_seen && (close == '>' || close == '⟩') => {
                        tokens.push(Token {
                            kind: TokenKind::Ket(BitString::from_bits(bits)),
                            span: Span::new(pos, end_of(j)),
                        });
                        i = j + 1;
                    }
                    None if body_seen => {
                        return Err(ParseError::new(
                            src,
                            Span::new(pos, src.len()),
                            "unbalanced ket delimiter: `|` was never closed by `>`",
                            &["`>`"],
                        ));
                    }
                    _ => simple(TokenKind::Pipe, &mut tokens, &mut i),
                }
            }
            '0'..='9' => {
                let mut j = i;
                while matches!(chars.get(j), Some(&(_, d)) if d.is_ascii_digit()) {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|&(_, d)| d).collect();
                let value: u64 = text.parse().map_err(|_| {
                    ParseError::new(
                        src,
                        Span::new(pos, end_of(j.saturating_sub(1))),
                        format!("integer literal {text} is too large"),
                        &[],
                    )
                })?;
                tokens.push(Token {
                    kind: TokenKind::Int(value),
                    span: Span::new(pos, end_of(j - 1)),
                });
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while matches!(chars.get(j), Some(&(_, d)) if d.is_alphanumeric() || d == '_') {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|&(_, d)| d).collect();
                tokens.push(Token {
                    kind: TokenKind::Ident(text),
                    span: Span::new(pos, end_of(j - 1)),
                });
                i = j;
            }
            other => {
                return Err(ParseError::new(
                    src,
                    Span::new(pos, end_of(i)),
                    format!("unexpected character {other:?}"),
                    &[],
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;

    fn kinds(src: &str) -> Vec<TokenKind> {
        lex(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn kets_are_atomic_and_keep_leading_zeros() {
        assert_eq!(
            kinds("|01>"),
            vec![TokenKind::Ket(bitstring("01")), TokenKind::Eof]
        );
        assert_eq!(
            kinds("|e>"),
            vec![TokenKind::Ket(BitString::empty()), TokenKind::Eof]
        );
        assert_eq!(
            kinds("|λ⟩"),
            vec![TokenKind::Ket(BitString::empty()), TokenKind::Eof]
        );
    }

    #[test]
    fn pipe_before_non_bits_is_a_separator() {
        assert_eq!(
            kinds("<v|w>"),
            vec![
                TokenKind::Lt,
                TokenKind::Ident("v".into()),
                TokenKind::Pipe,
                TokenKind::Ident("w".into()),
                TokenKind::Gt,
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn empty_marker_binds_to_ket() {
        // `|e>` right after a pipe context is still a ket; variables named
        // `e` cannot appear directly after `|`.
        assert_eq!(
            kinds("<v|e>"),
            vec![
                TokenKind::Lt,
                TokenKind::Ident("v".into()),
                TokenKind::Ket(BitString::empty()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn unbalanced_ket_at_end_of_input() {
        let err = lex("|01").unwrap_err();
        assert!(err.message.contains("unbalanced ket"));
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(kinds("a∘b"), kinds("a.b"));
        assert_eq!(kinds("⊗"), vec![TokenKind::TensorGlyph, TokenKind::Eof]);
    }

    #[test]
    fn numbers_and_symbols() {
        assert_eq!(
            kinds("1/sqrt(2)"),
            vec![
                TokenKind::Int(1),
                TokenKind::Slash,
                TokenKind::Ident("sqrt".into()),
                TokenKind::LParen,
                TokenKind::Int(2),
                TokenKind::RParen,
                TokenKind::Eof
            ]
        );
        assert!(lex("18446744073709551616").is_err()); // u64::MAX + 1
        assert!(lex("$").is_err());
    }

    #[test]
    fn spans_give_line_and_column() {
        let err = lex("ab\ncd $").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
    }
}
