//! Evaluation of parsed expressions against the string-space operations.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::dsl::ast::{Binding, Expr, ExprKind, Program};
use crate::dsl::token::Span;
use crate::error::{CoreError, IndexSetError, TapeError};
use crate::operator::QOperator;
use crate::tape;
use crate::vector::QVector;

/// A runtime value: vectors, operators and scalars.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Vector(QVector),
    Operator(QOperator),
    Complex(Complex64),
    Real(f64),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Vector(_) => "vector",
            Value::Operator(_) => "operator",
            Value::Complex(_) => "complex",
            Value::Real(_) => "real",
        }
    }

    fn as_scalar(&self) -> Option<Complex64> {
        match self {
            Value::Complex(z) => Some(*z),
            Value::Real(x) => Some(Complex64::new(*x, 0.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Vector(v) => write!(f, "{v}"),
            Value::Operator(op) => write!(f, "{op}"),
            Value::Complex(z) => write!(f, "{z}"),
            Value::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("{operation} expects {expected}, found {found}")]
    TypeMismatch {
        operation: &'static str,
        expected: &'static str,
        found: String,
    },

    #[error(transparent)]
    Tape(#[from] TapeError),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    IndexSet(#[from] IndexSetError),
}

/// Evaluation failure, positioned at the offending node.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

impl EvalError {
    fn new(kind: impl Into<EvalErrorKind>, span: Span) -> Self {
        EvalError {
            kind: kind.into(),
            span,
        }
    }
}

/// Name → value bindings. Immutable during evaluation; `let` bindings
/// extend a copy.
pub type Env = BTreeMap<String, Value>;

/// Evaluate an expression. `tol` is the comparison tolerance used by
/// normalization and length-eigenstate gates.
pub fn eval_expr(expr: &Expr, env: &Env, tol: f64) -> Result<Value, EvalError> {
    let span = expr.span;
    let mismatch = |operation: &'static str, expected: &'static str, value: &Value| {
        EvalError::new(
            EvalErrorKind::TypeMismatch {
                operation,
                expected,
                found: value.type_name().to_string(),
            },
            span,
        )
    };
    match &expr.kind {
        ExprKind::Ket(s) => Ok(Value::Vector(QVector::ket(s.clone()))),
        ExprKind::Scalar(lit) => Ok(Value::Real(lit.value())),
        ExprKind::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::new(EvalErrorKind::Unbound(name.clone()), span)),
        ExprKind::Add(l, r) | ExprKind::Sub(l, r) => {
            let subtract = matches!(expr.kind, ExprKind::Sub(..));
            let operation: &'static str = if subtract { "subtraction" } else { "addition" };
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            match (&lv, &rv) {
                (Value::Vector(a), Value::Vector(b)) => {
                    Ok(Value::Vector(if subtract { a - b } else { a + b }))
                }
                (Value::Operator(a), Value::Operator(b)) => {
                    Ok(Value::Operator(if subtract { a - b } else { a + b }))
                }
                (Value::Real(a), Value::Real(b)) => {
                    Ok(Value::Real(if subtract { a - b } else { a + b }))
                }
                _ => match (lv.as_scalar(), rv.as_scalar()) {
                    (Some(a), Some(b)) => Ok(Value::Complex(if subtract { a - b } else { a + b })),
                    _ => Err(mismatch(operation, "two values of the same kind", &rv)),
                },
            }
        }
        ExprKind::ScalarMul(l, r) => {
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            match (lv.as_scalar(), rv.as_scalar()) {
                (Some(a), Some(b)) => match (&lv, &rv) {
                    (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x * y)),
                    _ => Ok(Value::Complex(a * b)),
                },
                (Some(a), None) => match rv {
                    Value::Vector(v) => Ok(Value::Vector(v.scaled(a))),
                    Value::Operator(op) => Ok(Value::Operator(op.scaled(a))),
                    other => Err(mismatch("scalar multiplication", "scalar operand", &other)),
                },
                (None, Some(b)) => match lv {
                    Value::Vector(v) => Ok(Value::Vector(v.scaled(b))),
                    Value::Operator(op) => Ok(Value::Operator(op.scaled(b))),
                    other => Err(mismatch("scalar multiplication", "scalar operand", &other)),
                },
                (None, None) => Err(mismatch("scalar multiplication", "a scalar operand", &lv)),
            }
        }
        ExprKind::Concat(l, r) => {
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            match (lv, rv) {
                (Value::Vector(a), Value::Vector(b)) => Ok(Value::Vector(tape::concat(&a, &b))),
                (Value::Vector(_), other) | (other, _) => {
                    Err(mismatch("concatenation", "two vectors", &other))
                }
            }
        }
        ExprKind::Tensor(l, r) => {
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            match (lv, rv) {
                (Value::Vector(a), Value::Vector(b)) => Ok(Value::Vector(
                    tape::tensor_vec(&a, &b, tol).map_err(|e| EvalError::new(e, span))?,
                )),
                (Value::Operator(a), Value::Operator(b)) => Ok(Value::Operator(
                    tape::tensor(&a, &b, tol).map_err(|e| EvalError::new(e, span))?,
                )),
                (Value::Vector(_), other) | (Value::Operator(_), other) | (other, _) => Err(
                    mismatch("tensor product", "two vectors or two operators", &other),
                ),
            }
        }
        ExprKind::TensorAt(l, set, r) => {
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            let set = set.to_index_set().map_err(|e| EvalError::new(e, span))?;
            match (lv, rv) {
                (Value::Vector(a), Value::Vector(b)) => Ok(Value::Vector(
                    tape::tensor_at_vec(&a, &set, &b).map_err(|e| EvalError::new(e, span))?,
                )),
                (Value::Operator(a), Value::Operator(b)) => Ok(Value::Operator(
                    tape::tensor_at(&a, &set, &b).map_err(|e| EvalError::new(e, span))?,
                )),
                (Value::Vector(_), other) | (Value::Operator(_), other) | (other, _) => {
                    Err(mismatch(
                        "indexed tensor product",
                        "two vectors or two operators",
                        &other,
                    ))
                }
            }
        }
        ExprKind::Prefix(inner, n) => match eval_expr(inner, env, tol)? {
            Value::Operator(op) => Ok(Value::Operator(tape::prefix(&op, *n))),
            other => Err(mismatch(
                "prefix",
                "an operator (wrap vectors in dm)",
                &other,
            )),
        },
        ExprKind::Restrict(inner, range) => match eval_expr(inner, env, tol)? {
            Value::Operator(op) => {
                let set = range.to_index_set().map_err(|e| EvalError::new(e, span))?;
                Ok(Value::Operator(tape::restrict(&op, &set)))
            }
            other => Err(mismatch(
                "restriction",
                "an operator (wrap vectors in dm)",
                &other,
            )),
        },
        ExprKind::Inner(l, r) => {
            let lv = eval_expr(l, env, tol)?;
            let rv = eval_expr(r, env, tol)?;
            match (lv, rv) {
                (Value::Vector(a), Value::Vector(b)) => Ok(Value::Complex(a.inner(&b))),
                (Value::Vector(_), other) | (other, _) => {
                    Err(mismatch("inner product", "two vectors", &other))
                }
            }
        }
        ExprKind::Density(inner) => match eval_expr(inner, env, tol)? {
            Value::Vector(v) => Ok(Value::Operator(
                v.density(tol, false).map_err(|e| EvalError::new(e, span))?,
            )),
            other => Err(mismatch("dm", "a vector", &other)),
        },
        ExprKind::Norm(inner) => match eval_expr(inner, env, tol)? {
            Value::Vector(v) => Ok(Value::Real(v.norm())),
            Value::Complex(z) => Ok(Value::Real(z.norm())),
            Value::Real(x) => Ok(Value::Real(x.abs())),
            other => Err(mismatch("norm", "a vector or scalar", &other)),
        },
    }
}

/// Evaluate a program: bindings extend the environment in order, then the
/// body is evaluated.
pub fn eval_program(program: &Program, env: &Env, tol: f64) -> Result<Value, EvalError> {
    let mut scope = env.clone();
    for Binding { name, expr, .. } in &program.bindings {
        let value = eval_expr(expr, &scope, tol)?;
        scope.insert(name.clone(), value);
    }
    eval_expr(&program.body, &scope, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;
    use crate::dsl::parser::parse_program;
    use crate::DEFAULT_TOLERANCE as TOL;
    use approx::assert_abs_diff_eq;

    fn eval_str(src: &str) -> Result<Value, EvalError> {
        eval_program(&parse_program(src).unwrap(), &Env::new(), TOL)
    }

    fn expect_operator(src: &str) -> QOperator {
        match eval_str(src).unwrap() {
            Value::Operator(op) => op,
            other => panic!("expected operator, got {}", other.type_name()),
        }
    }

    fn expect_vector(src: &str) -> QVector {
        match eval_str(src).unwrap() {
            Value::Vector(v) => v,
            other => panic!("expected vector, got {}", other.type_name()),
        }
    }

    #[test]
    fn prefix_of_bound_density() {
        let got = expect_operator("let p = 1/sqrt(2)*|1> + 1/sqrt(2)*|110>; dm(p)^2");
        let want = QOperator::from_entries([
            ((bitstring("1"), bitstring("1")), Complex64::new(0.5, 0.0)),
            ((bitstring("11"), bitstring("11")), Complex64::new(0.5, 0.0)),
        ]);
        assert!(got.approx_eq(&want, 1e-12));
    }

    #[test]
    fn norm_of_unit_inner_product() {
        match eval_str("let v = 1/sqrt(2)*|0> + 1/sqrt(2)*|1>; <v | v>").unwrap() {
            Value::Complex(z) => assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-12),
            other => panic!("expected complex, got {}", other.type_name()),
        }
    }

    #[test]
    fn indexed_tensor_with_norm_loss() {
        let got = expect_vector("(3/5*|e> + 4/5*|0>) (x){1} |1>");
        let want = QVector::from_terms([(bitstring("01"), Complex64::new(0.8, 0.0))]);
        assert!(got.approx_eq(&want, 1e-12));
        match eval_str("norm((3/5*|e> + 4/5*|0>) (x){1} |1>)").unwrap() {
            Value::Real(x) => assert_abs_diff_eq!(x, 0.8, epsilon = 1e-12),
            other => panic!("expected real, got {}", other.type_name()),
        }
    }

    #[test]
    fn type_errors_carry_spans() {
        let err = eval_str("<dm(|0>) | |0>>").unwrap_err();
        assert!(matches!(err.kind, EvalErrorKind::TypeMismatch { .. }));
        let err = eval_str("|0>^1").unwrap_err();
        assert!(matches!(err.kind, EvalErrorKind::TypeMismatch { .. }));
        let err = eval_str("missing + |0>").unwrap_err();
        assert!(matches!(err.kind, EvalErrorKind::Unbound(_)));
    }

    #[test]
    fn density_requires_normalization() {
        let err = eval_str("dm(4/5*|01>)").unwrap_err();
        assert!(matches!(
            err.kind,
            EvalErrorKind::Core(CoreError::NotNormalized { .. })
        ));
    }

    #[test]
    fn tensor_requires_length_eigenstate_lhs() {
        let err = eval_str("(1/sqrt(2)*|e> + 1/sqrt(2)*|0>) (x) |1>").unwrap_err();
        assert!(matches!(
            err.kind,
            EvalErrorKind::Tape(TapeError::NotLengthEigenstate { .. })
        ));
    }

    #[test]
    fn scalar_arithmetic() {
        match eval_str("1/2 + 1/4").unwrap() {
            Value::Real(x) => assert_abs_diff_eq!(x, 0.75, epsilon = 1e-15),
            other => panic!("expected real, got {}", other.type_name()),
        }
        match eval_str("2*3").unwrap() {
            Value::Real(x) => assert_abs_diff_eq!(x, 6.0, epsilon = 0.0),
            other => panic!("expected real, got {}", other.type_name()),
        }
    }

    #[test]
    fn restriction_postfix() {
        let got = expect_operator("dm(1/sqrt(2)*|1> + 1/sqrt(2)*|110>)[2:3]");
        // tracing out cell 1 (both strings carry 1 there) keeps coherence
        let remainder = QVector::from_terms([
            (
                bitstring(""),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ),
            (
                bitstring("10"),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ),
        ]);
        assert!(got.approx_eq(&remainder.outer(), 1e-12));
    }
}
