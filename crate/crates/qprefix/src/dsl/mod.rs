//! Expression language for qubit strings.
//!
//! ```text
//! let p = 1/sqrt(2)*|1> + 1/sqrt(2)*|110>; dm(p)^2
//! ```
//!
//! Ket literals are `|bits>` with `|e>` for the empty string (Unicode
//! `|…⟩`, `|λ⟩`, `∘` and `⊗` are accepted as aliases). Scalars are
//! rationals and rational multiples of square roots (`1/2`, `-1/sqrt(2)`,
//! `3/8*sqrt(2)`). Operators: `+`/`-`, scalar `*`, concatenation `.`,
//! tensor `(x)` with an optional index set (`(x)[1,2]`, `(x){1,3}`,
//! `(x)[3,inf)`), postfix prefix `^n` and restriction `[m:n]` on density
//! expressions, inner products `<v | w>`, `dm(v)`, `norm(v)`, and `let`
//! bindings. See `docs/grammar.ebnf` for the full grammar.

pub mod ast;
pub mod eval;
pub mod parser;
pub mod token;

pub use ast::{Binding, Expr, ExprKind, IndexSetLit, Program, RangeLit, ScalarLit};
pub use eval::{eval_expr, eval_program, Env, EvalError, EvalErrorKind, Value};
pub use parser::{parse_expr, parse_program, MAX_LITERAL_INDEX};
pub use token::{line_col, ParseError, Span};
