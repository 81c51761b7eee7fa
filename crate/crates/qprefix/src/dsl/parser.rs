//! Recursive-descent parser with explicit precedence.
//!
//! Grammar sketch (the machine-readable version ships in
//! `docs/grammar.ebnf`):
//!
//! ```text
//! program    := { "let" IDENT "=" expr ";" } expr
//! expr       := tenscat { ("+" | "-") tenscat }
//! tenscat    := scalmul { ("." scalmul | tensor-op [iset] scalmul) }
//! scalmul    := unary { "*" unary }
//! unary      := "-" unary | postfix
//! postfix    := atom { "^" INT | "[" INT ":" INT "]" }
//! atom       := KET | scalar | IDENT | "norm" "(" expr ")"
//!             | "dm" "(" expr ")" | "(" expr ")" | "<" expr "|" expr ">"
//! scalar     := INT [ "/" (INT ["*" root] | root) | "*" root ]
//!             | root [ "/" INT ]
//! root       := "sqrt" "(" INT ["/" INT] ")"
//! iset       := "[" INT "," (INT "]" | "inf" ")") | "{" INT {"," INT} "}"
//! tensor-op  := "(x)" | "⊗"
//! ```
//!
//! `(x)` is three ordinary tokens recognized at operator position, so a
//! parenthesized variable `(x)` in operand position still works and
//! `norm(x)` is a call. `sqrt`, `norm`, `dm`, `inf` and `let` are
//! reserved words.

use crate::dsl::ast::{Binding, Expr, ExprKind, IndexSetLit, Program, RangeLit, ScalarLit};
use crate::dsl::token::{lex, ParseError, Span, Token, TokenKind};

/// Cap on cell indices and prefix lengths written in literals; big enough
/// for anything meaningful on sparse states, small enough that a typo
/// cannot allocate gigabytes.
pub const MAX_LITERAL_INDEX: u64 = 9999;

const RESERVED: [&str; 5] = ["let", "norm", "dm", "sqrt", "inf"];

pub struct Parser<'src> {
    src: &'src str,
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'src> Parser<'src> {
    pub fn new(src: &'src str) -> PResult<Self> {
        Ok(Parser {
            src,
            tokens: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError::new(self.src, self.span(), message, expected)
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        if self.peek() == &kind {
            Ok(self.advance())
        } else {
            Err(self.error(format!("found {}", self.peek().describe()), &[expected]))
        }
    }

    fn expect_int(&mut self, what: &str) -> PResult<(u64, Span)> {
        match self.peek().clone() {
            TokenKind::Int(n) => {
                let span = self.span();
                self.advance();
                Ok((n, span))
            }
            other => Err(self.error(format!("found {}", other.describe()), &[what])),
        }
    }

    fn expect_index(&mut self, what: &str) -> PResult<(usize, Span)> {
        let (n, span) = self.expect_int(what)?;
        if n > MAX_LITERAL_INDEX {
            return Err(ParseError::new(
                self.src,
                span,
                format!("index {n} exceeds the literal limit {MAX_LITERAL_INDEX}"),
                &[],
            ));
        }
        Ok((n as usize, span))
    }

    /// Parse a whole program: bindings then the final expression.
    pub fn parse_program(&mut self) -> PResult<Program> {
        let mut bindings = Vec::new();
        while self.peek() == &TokenKind::Ident("let".into()) {
            let start = self.span();
            self.advance();
            let name = match self.peek().clone() {
                TokenKind::Ident(name) if !RESERVED.contains(&name.as_str()) => {
                    self.advance();
                    name
                }
                TokenKind::Ident(name) => {
                    return Err(self.error(
                        format!("`{name}` is a reserved word and cannot be bound"),
                        &["identifier"],
                    ))
                }
                other => {
                    return Err(self.error(format!("found {}", other.describe()), &["identifier"]))
                }
            };
            self.expect(TokenKind::Equals, "`=`")?;
            let expr = self.parse_expr()?;
            self.expect(TokenKind::Semicolon, "`;`")?;
            let span = start.join(self.prev_span());
            bindings.push(Binding { name, expr, span });
        }
        let body = self.parse_expr()?;
        self.expect(TokenKind::Eof, "end of input")?;
        Ok(Program { bindings, body })
    }

    pub fn parse_single_expr(&mut self) -> PResult<Expr> {
        let expr = self.parse_expr()?;
        self.expect(TokenKind::Eof, "end of input")?;
        Ok(expr)
    }

    fn parse_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_tenscat()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => ExprKind::Add as fn(_, _) -> _,
                TokenKind::Minus => ExprKind::Sub as fn(_, _) -> _,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_tenscat()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    /// True when the upcoming tokens spell the ASCII tensor operator `(x)`.
    fn at_ascii_tensor(&self) -> bool {
        self.peek() == &TokenKind::LParen
            && matches!(self.peek_at(1), Some(TokenKind::Ident(name)) if name == "x")
            && self.peek_at(2) == Some(&TokenKind::RParen)
    }

    fn parse_tenscat(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_scalmul()?;
        loop {
            if self.peek() == &TokenKind::Dot {
                self.advance();
                let rhs = self.parse_scalmul()?;
                let span = lhs.span.join(rhs.span);
                lhs = Expr::new(ExprKind::Concat(Box::new(lhs), Box::new(rhs)), span);
            } else if self.peek() == &TokenKind::TensorGlyph || self.at_ascii_tensor() {
                if self.peek() == &TokenKind::TensorGlyph {
                    self.advance();
                } else {
                    self.advance();
                    self.advance();
                    self.advance();
                }
                let set = self.parse_optional_index_set()?;
                let rhs = self.parse_scalmul()?;
                let span = lhs.span.join(rhs.span);
                lhs = match set {
                    Some(set) => {
                        Expr::new(ExprKind::TensorAt(Box::new(lhs), set, Box::new(rhs)), span)
                    }
                    None => Expr::new(ExprKind::Tensor(Box::new(lhs), Box::new(rhs)), span),
                };
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn parse_optional_index_set(&mut self) -> PResult<Option<IndexSetLit>> {
        match self.peek() {
            TokenKind::LBracket => {
                let open = self.span();
                self.advance();
                // `[{i,j}]`: a braced set may be wrapped in the brackets
                if self.peek() == &TokenKind::LBrace {
                    let set = self.parse_braced_set()?;
                    self.expect(TokenKind::RBracket, "`]`")?;
                    return Ok(Some(set));
                }
                let (m, _) = self.expect_index("cell index")?;
                self.expect(TokenKind::Comma, "`,`")?;
                if self.peek() == &TokenKind::Ident("inf".into()) {
                    self.advance();
                    self.expect(TokenKind::RParen, "`)`")?;
                    if m == 0 {
                        return Err(ParseError::new(
                            self.src,
                            open.join(self.prev_span()),
                            "cell indices start at 1",
                            &[],
                        ));
                    }
                    return Ok(Some(IndexSetLit::Tail(m)));
                }
                let (n, _) = self.expect_index("cell index or `inf`")?;
                self.expect(TokenKind::RBracket, "`]`")?;
                let span = open.join(self.prev_span());
                if m == 0 || n < m {
                    return Err(ParseError::new(
                        self.src,
                        span,
                        format!("malformed index range [{m},{n}]"),
                        &[],
                    ));
                }
                Ok(Some(IndexSetLit::Range(m, n)))
            }
            TokenKind::LBrace => Ok(Some(self.parse_braced_set()?)),
            _ => Ok(None),
        }
    }

    fn parse_braced_set(&mut self) -> PResult<IndexSetLit> {
        let open = self.span();
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut indices = Vec::new();
        let (first, _) = self.expect_index("cell index")?;
        indices.push(first);
        while self.peek() == &TokenKind::Comma {
            self.advance();
            let (next, _) = self.expect_index("cell index")?;
            indices.push(next);
        }
        self.expect(TokenKind::RBrace, "`}`")?;
        let span = open.join(self.prev_span());
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.first() == Some(&0) {
            return Err(ParseError::new(
                self.src,
                span,
                "malformed index set: indices must be distinct and start at 1",
                &[],
            ));
        }
        Ok(IndexSetLit::Set(sorted))
    }

    fn parse_scalmul(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == &TokenKind::Star {
            self.advance();
            let rhs = self.parse_unary()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::ScalarMul(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        if self.peek() == &TokenKind::Minus {
            let start = self.span();
            self.advance();
            let inner = self.parse_unary()?;
            let span = start.join(inner.span);
            // fold the sign into a scalar literal; otherwise scale by -1
            return Ok(match inner.kind {
                ExprKind::Scalar(lit) => Expr::new(ExprKind::Scalar(lit.negated()), span),
                kind => {
                    let minus_one = Expr::new(ExprKind::Scalar(ScalarLit::integer(-1)), start);
                    Expr::new(
                        ExprKind::ScalarMul(
                            Box::new(minus_one),
                            Box::new(Expr::new(kind, inner.span)),
                        ),
                        span,
                    )
                }
            });
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.parse_atom()?;
        loop {
            match self.peek() {
                TokenKind::Caret => {
                    self.advance();
                    let (n, nspan) = self.expect_index("prefix length")?;
                    let span = expr.span.join(nspan);
                    expr = Expr::new(ExprKind::Prefix(Box::new(expr), n), span);
                }
                TokenKind::LBracket => {
                    self.advance();
                    let (start, _) = self.expect_index("range start")?;
                    self.expect(TokenKind::Colon, "`:`")?;
                    let (end, _) = self.expect_index("range end")?;
                    self.expect(TokenKind::RBracket, "`]`")?;
                    let span = expr.span.join(self.prev_span());
                    if start == 0 || end + 1 < start {
                        return Err(ParseError::new(
                            self.src,
                            span,
                            format!("malformed restriction range [{start}:{end}]"),
                            &[],
                        ));
                    }
                    expr = Expr::new(
                        ExprKind::Restrict(Box::new(expr), RangeLit { start, end }),
                        span,
                    );
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    /// `sqrt ( INT [/ INT] )`: the radicand of a scalar literal.
    fn parse_root(&mut self) -> PResult<(u64, u64, Span)> {
        let start = self.span();
        self.advance(); // `sqrt`
        self.expect(TokenKind::LParen, "`(`")?;
        let (num, _) = self.expect_int("integer")?;
        let den = if self.peek() == &TokenKind::Slash {
            self.advance();
            self.expect_int("integer")?.0
        } else {
            1
        };
        self.expect(TokenKind::RParen, "`)`")?;
        Ok((num, den, start.join(self.prev_span())))
    }

    fn at_sqrt(&self) -> bool {
        matches!(self.peek(), TokenKind::Ident(name) if name == "sqrt")
    }

    fn scalar_expr(&self, num: i64, den: u64, rad: (u64, u64), span: Span) -> PResult<Expr> {
        match ScalarLit::with_sqrt(num, den, rad.0, rad.1) {
            Some(lit) => Ok(Expr::new(ExprKind::Scalar(lit), span)),
            None => Err(ParseError::new(
                self.src,
                span,
                "division by zero in scalar literal",
                &[],
            )),
        }
    }

    fn parse_atom(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek().clone() {
            TokenKind::Ket(s) => {
                self.advance();
                Ok(Expr::new(ExprKind::Ket(s), span))
            }
            TokenKind::Int(n) => {
                self.advance();
                let num = i64::try_from(n).map_err(|_| {
                    ParseError::new(self.src, span, format!("integer {n} is too large"), &[])
                })?;
                // rational and root continuations of a leading integer
                if self.peek() == &TokenKind::Slash {
                    self.advance();
                    if self.at_sqrt() {
                        // n / sqrt(k)  ==  n · sqrt(1/k)
                        let (rn, rd, rspan) = self.parse_root()?;
                        return self.scalar_expr(num, 1, (rd, rn), span.join(rspan));
                    }
                    let (den, dspan) = self.expect_int("integer or `sqrt`")?;
                    let mut full = span.join(dspan);
                    let mut rad = (1, 1);
                    if self.peek() == &TokenKind::Star
                        && matches!(self.peek_at(1), Some(TokenKind::Ident(name)) if name == "sqrt")
                    {
                        self.advance();
                        let (rn, rd, rspan) = self.parse_root()?;
                        rad = (rn, rd);
                        full = full.join(rspan);
                    }
                    return self.scalar_expr(num, den, rad, full);
                }
                if self.peek() == &TokenKind::Star
                    && matches!(self.peek_at(1), Some(TokenKind::Ident(name)) if name == "sqrt")
                {
                    self.advance();
                    let (rn, rd, rspan) = self.parse_root()?;
                    return self.scalar_expr(num, 1, (rn, rd), span.join(rspan));
                }
                self.scalar_expr(num, 1, (1, 1), span)
            }
            TokenKind::Ident(name) if name == "sqrt" => {
                let (rn, rd, rspan) = self.parse_root()?;
                if self.peek() == &TokenKind::Slash
                    && matches!(self.peek_at(1), Some(TokenKind::Int(_)))
                {
                    self.advance();
                    let (den, dspan) = self.expect_int("integer")?;
                    return self.scalar_expr(1, den, (rn, rd), rspan.join(dspan));
                }
                self.scalar_expr(1, 1, (rn, rd), rspan)
            }
            TokenKind::Ident(name) if name == "norm" || name == "dm" => {
                self.advance();
                self.expect(TokenKind::LParen, "`(`")?;
                let inner = self.parse_expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                let full = span.join(self.prev_span());
                let kind = if name == "norm" {
                    ExprKind::Norm(Box::new(inner))
                } else {
                    ExprKind::Density(Box::new(inner))
                };
                Ok(Expr::new(kind, full))
            }
            TokenKind::Ident(name) if name == "let" || name == "inf" => {
                Err(self.error(format!("`{name}` is a reserved word"), &["expression"]))
            }
            TokenKind::Ident(name) => {
                self.advance();
                Ok(Expr::new(ExprKind::Var(name), span))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.parse_expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Expr::new(inner.kind, span.join(self.prev_span())))
            }
            TokenKind::Lt => {
                self.advance();
                let left = self.parse_expr()?;
                self.expect(TokenKind::Pipe, "`|`")?;
                let right = self.parse_expr()?;
                self.expect(TokenKind::Gt, "`>`")?;
                Ok(Expr::new(
                    ExprKind::Inner(Box::new(left), Box::new(right)),
                    span.join(self.prev_span()),
                ))
            }
            other => Err(self.error(
                format!("found {}", other.describe()),
                &[
                    "ket",
                    "scalar",
                    "identifier",
                    "`(`",
                    "`<`",
                    "`norm`",
                    "`dm`",
                ],
            )),
        }
    }
}

/// Parse a single expression (no bindings).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    Parser::new(src)?.parse_single_expr()
}

/// Parse a program: `let` bindings followed by a final expression.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    Parser::new(src)?.parse_program()
}
