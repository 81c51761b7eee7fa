//! AST for the expression language, with a pretty-printer whose output
//! parses back to a structurally identical tree.

use std::fmt;

use crate::bits::BitString;
use crate::dsl::token::Span;
use crate::error::IndexSetError;
use crate::tape::IndexSet;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

/// A scalar literal `(num/den)·√(rad_num/rad_den)`, e.g. `1/2`, `3/5`,
/// `1/sqrt(2)` or `3/8*sqrt(2)`. Normalized on construction (reduced
/// fractions, sign in the numerator) so that structural equality is
/// well-defined; the numeric value is taken at double precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarLit {
    num: i64,
    den: u64,
    rad_num: u64,
    rad_den: u64,
}

impl ScalarLit {
    pub fn rational(num: i64, den: u64) -> Option<Self> {
        ScalarLit::with_sqrt(num, den, 1, 1)
    }

    pub fn integer(num: i64) -> Self {
        ScalarLit::rational(num, 1).expect("unit denominator")
    }

    /// `(num/den)·√(rad_num/rad_den)`; `None` when a denominator is zero.
    pub fn with_sqrt(num: i64, den: u64, rad_num: u64, rad_den: u64) -> Option<Self> {
        if den == 0 || rad_den == 0 {
            return None;
        }
        if num == 0 || rad_num == 0 {
            return Some(ScalarLit {
                num: 0,
                den: 1,
                rad_num: 1,
                rad_den: 1,
            });
        }
        let g = gcd(num.unsigned_abs(), den);
        let rg = gcd(rad_num, rad_den);
        Some(ScalarLit {
            num: num / g as i64,
            den: den / g,
            rad_num: rad_num / rg,
            rad_den: rad_den / rg,
        })
    }

    pub fn negated(self) -> Self {
        ScalarLit {
            num: -self.num,
            ..self
        }
    }

    pub fn value(self) -> f64 {
        (self.num as f64 / self.den as f64) * (self.rad_num as f64 / self.rad_den as f64).sqrt()
    }

    fn is_plain_rational(self) -> bool {
        self.rad_num == 1 && self.rad_den == 1
    }

    fn is_negative(self) -> bool {
        self.num < 0
    }
}

impl fmt::Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rational = |f: &mut fmt::Formatter<'_>, num: i64, den: u64| {
            if den == 1 {
                write!(f, "{num}")
            } else {
                write!(f, "{num}/{den}")
            }
        };
        if self.is_plain_rational() {
            return rational(f, self.num, self.den);
        }
        if self.den == 1 && self.num.unsigned_abs() == 1 && self.rad_num == 1 {
            // 1/sqrt(k), the form amplitudes are usually written in
            let sign = if self.num < 0 { "-" } else { "" };
            return write!(f, "{sign}1/sqrt({})", self.rad_den);
        }
        rational(f, self.num, self.den)?;
        write!(f, "*sqrt(")?;
        if self.rad_den == 1 {
            write!(f, "{}", self.rad_num)?;
        } else {
            write!(f, "{}/{}", self.rad_num, self.rad_den)?;
        }
        write!(f, ")")
    }
}

/// Index-set literal in tensor position: `[m,n]`, `{i,j,...}` or `[m,inf)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSetLit {
    Range(usize, usize),
    Set(Vec<usize>),
    Tail(usize),
}

impl IndexSetLit {
    pub fn to_index_set(&self) -> Result<IndexSet, IndexSetError> {
        match self {
            IndexSetLit::Range(m, n) => IndexSet::range(*m, *n),
            IndexSetLit::Set(indices) => IndexSet::finite(indices.iter().copied()),
            IndexSetLit::Tail(m) => IndexSet::tail(*m),
        }
    }
}

impl fmt::Display for IndexSetLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSetLit::Range(m, n) => write!(f, "[{m},{n}]"),
            IndexSetLit::Set(indices) => {
                write!(f, "{{")?;
                for (k, i) in indices.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{i}")?;
                }
                write!(f, "}}")
            }
            IndexSetLit::Tail(m) => write!(f, "[{m},inf)"),
        }
    }
}

/// Restriction range literal `[start:end]`; `end = start - 1` denotes the
/// empty window (the 0-qubit prefix).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeLit {
    pub start: usize,
    pub end: usize,
}

impl RangeLit {
    pub fn to_index_set(&self) -> Result<IndexSet, IndexSetError> {
        IndexSet::range(self.start, self.end)
    }
}

impl fmt::Display for RangeLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.start, self.end)
    }
}

/// An expression node. Equality is structural and ignores spans.
#[derive(Debug, Clone, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Ket(BitString),
    Scalar(ScalarLit),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    ScalarMul(Box<Expr>, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    TensorAt(Box<Expr>, IndexSetLit, Box<Expr>),
    /// `expr^n`: the n-qubit prefix of an operator expression.
    Prefix(Box<Expr>, usize),
    /// `expr[m:n]`: restriction of an operator expression to cells m..=n.
    Restrict(Box<Expr>, RangeLit),
    Inner(Box<Expr>, Box<Expr>),
    /// `dm(v)`.
    Density(Box<Expr>),
    /// `norm(v)`.
    Norm(Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Precedence for printing: atoms 4, postfix 3, scalar-product 2,
    /// tensor/concatenation 1, addition/subtraction 0.
    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 0,
            ExprKind::Concat(..) | ExprKind::Tensor(..) | ExprKind::TensorAt(..) => 1,
            ExprKind::ScalarMul(..) => 2,
            ExprKind::Prefix(..) | ExprKind::Restrict(..) => 3,
            ExprKind::Ket(..)
            | ExprKind::Scalar(..)
            | ExprKind::Var(..)
            | ExprKind::Inner(..)
            | ExprKind::Density(..)
            | ExprKind::Norm(..) => 4,
        }
    }

    /// Operand position of `^n` / `[m:n]`. A bare negative scalar would
    /// re-parse with the postfix binding before the sign, so it gets
    /// explicit parentheses.
    fn fmt_postfix_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let negative_literal = matches!(&self.kind, ExprKind::Scalar(s) if s.is_negative());
        if negative_literal {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            write!(f, ")")
        } else {
            self.fmt_prec(f, 3)
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match &self.kind {
            ExprKind::Ket(s) => {
                if s.is_empty() {
                    write!(f, "|e>")?;
                } else {
                    write!(f, "|{s}>")?;
                }
            }
            ExprKind::Scalar(lit) => write!(f, "{lit}")?,
            ExprKind::Var(name) => write!(f, "{name}")?,
            ExprKind::Add(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 1)?;
            }
            ExprKind::Sub(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, " - ")?;
                r.fmt_prec(f, 1)?;
            }
            ExprKind::ScalarMul(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "*")?;
                // `3*sqrt(2)` would re-lex as one scalar literal; keep a
                // product of two literals structurally apart
                let fuses = matches!(&l.kind, ExprKind::Scalar(s) if s.is_plain_rational())
                    && matches!(&r.kind, ExprKind::Scalar(s) if !s.is_plain_rational());
                if fuses {
                    write!(f, "(")?;
                    r.fmt_prec(f, 0)?;
                    write!(f, ")")?;
                } else {
                    r.fmt_prec(f, 3)?;
                }
            }
            ExprKind::Concat(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " . ")?;
                r.fmt_prec(f, 2)?;
            }
            ExprKind::Tensor(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " (x) ")?;
                r.fmt_prec(f, 2)?;
            }
            ExprKind::TensorAt(l, set, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " (x){set} ")?;
                r.fmt_prec(f, 2)?;
            }
            ExprKind::Prefix(inner, n) => {
                inner.fmt_postfix_operand(f)?;
                write!(f, "^{n}")?;
            }
            ExprKind::Restrict(inner, range) => {
                inner.fmt_postfix_operand(f)?;
                write!(f, "{range}")?;
            }
            ExprKind::Inner(l, r) => {
                write!(f, "<")?;
                l.fmt_prec(f, 0)?;
                // spaces keep the bar from fusing with a ket literal on
                // the right
                write!(f, " | ")?;
                r.fmt_prec(f, 0)?;
                write!(f, ">")?;
            }
            ExprKind::Density(inner) => {
                write!(f, "dm(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            ExprKind::Norm(inner) => {
                write!(f, "norm(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A `let` binding.
#[derive(Debug, Clone, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
    pub span: Span,
}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.expr == other.expr
    }
}

/// A program: zero or more `let name = expr;` bindings followed by the
/// expression to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub bindings: Vec<Binding>,
    pub body: Expr,
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bindings {
            write!(f, "let {} = {}; ", b.name, b.expr)?;
        }
        write!(f, "{}", self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_normalization() {
        let a = ScalarLit::rational(2, 4).unwrap();
        let b = ScalarLit::rational(1, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value(), 0.5);

        let zero = ScalarLit::with_sqrt(0, 5, 3, 7).unwrap();
        assert_eq!(zero, ScalarLit::integer(0));

        assert!(ScalarLit::rational(1, 0).is_none());
        assert!(ScalarLit::with_sqrt(1, 1, 1, 0).is_none());
    }

    #[test]
    fn scalar_display_forms() {
        assert_eq!(ScalarLit::integer(-3).to_string(), "-3");
        assert_eq!(ScalarLit::rational(3, 5).unwrap().to_string(), "3/5");
        assert_eq!(
            ScalarLit::with_sqrt(1, 1, 1, 2).unwrap().to_string(),
            "1/sqrt(2)"
        );
        assert_eq!(
            ScalarLit::with_sqrt(-1, 1, 1, 2).unwrap().to_string(),
            "-1/sqrt(2)"
        );
        assert_eq!(
            ScalarLit::with_sqrt(3, 8, 2, 1).unwrap().to_string(),
            "3/8*sqrt(2)"
        );
        assert_eq!(
            ScalarLit::with_sqrt(1, 2, 3, 4).unwrap().to_string(),
            "1/2*sqrt(3/4)"
        );
    }

    #[test]
    fn sqrt_value() {
        let lit = ScalarLit::with_sqrt(1, 1, 1, 2).unwrap();
        assert!((lit.value() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
