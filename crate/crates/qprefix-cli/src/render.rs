//! Plain-text rendering of values: ket/outer-product notation with
//! amplitudes to 10 significant digits, terms in shortlex order.

use num_complex::Complex64;
use qprefix::bits::BitString;
use qprefix::dsl::Value;
use qprefix::{QOperator, QVector};

pub const SIGNIFICANT_DIGITS: usize = 10;

/// Components below this are treated as zero when classifying a complex
/// number as real or imaginary for display. Stored amplitudes are pruned
/// well below this, so only floating noise is affected.
const RENDER_ZERO: f64 = 5e-13;

/// Format with a fixed number of significant digits, trimming trailing
/// zeros; falls back to exponential notation outside a readable range.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let abs = x.abs();
    if (1e-4..1e12).contains(&abs) {
        let magnitude = abs.log10().floor() as i32;
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
        let mut text = format!("{x:.decimals$}");
        if text.contains('.') {
            while text.ends_with('0') {
                text.pop();
            }
            if text.ends_with('.') {
                text.pop();
            }
        }
        text
    } else {
        let mut text = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
        if let Some(e_at) = text.find('e') {
            let (mantissa, exponent) = text.split_at(e_at);
            let mut mantissa = mantissa.to_string();
            if mantissa.contains('.') {
                while mantissa.ends_with('0') {
                    mantissa.pop();
                }
                if mantissa.ends_with('.') {
                    mantissa.pop();
                }
            }
            text = format!("{mantissa}{exponent}");
        }
        text
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() < RENDER_ZERO {
        fmt_sig(z.re)
    } else if z.re.abs() < RENDER_ZERO {
        format!("{}i", fmt_sig(z.im))
    } else if z.im < 0.0 {
        format!("({}-{}i)", fmt_sig(z.re), fmt_sig(-z.im))
    } else {
        format!("({}+{}i)", fmt_sig(z.re), fmt_sig(z.im))
    }
}

fn ket_text(s: &BitString) -> String {
    if s.is_empty() {
        "e".to_string()
    } else {
        s.to_string()
    }
}

/// One term `coefficient · basis`, appended with sign handling: real
/// coefficients join with ` + ` / ` - `, complex ones render in full.
fn push_term(out: &mut String, first: bool, c: Complex64, basis: &str) {
    let (joiner, coefficient) = if c.im.abs() < RENDER_ZERO && c.re < 0.0 {
        (" - ", Complex64::new(-c.re, 0.0))
    } else {
        (" + ", c)
    };
    if first {
        if joiner == " - " {
            out.push('-');
        }
    } else {
        out.push_str(joiner);
    }
    let mag = fmt_complex(coefficient);
    if mag == "1" {
        out.push_str(basis);
    } else {
        out.push_str(&mag);
        out.push(' ');
        out.push_str(basis);
    }
}

pub fn render_vector(v: &QVector) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (s, a)) in v.terms().enumerate() {
        push_term(&mut out, i == 0, a, &format!("|{}>", ket_text(s)));
    }
    out
}

pub fn render_operator(op: &QOperator) -> String {
    if op.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, ((s, t), c)) in op.entries().enumerate() {
        push_term(
            &mut out,
            i == 0,
            c,
            &format!("|{}><{}|", ket_text(s), ket_text(t)),
        );
    }
    out
}

/// Render a value; vectors and operators that are not normalized carry a
/// norm (resp. trace) annotation on a second line.
pub fn render_value(value: &Value, tol: f64) -> String {
    match value {
        Value::Vector(v) => {
            let mut out = render_vector(v);
            let norm = v.norm();
            if (norm - 1.0).abs() > tol {
                out.push_str(&format!("\nnorm: {}", fmt_sig(norm)));
            }
            out
        }
        Value::Operator(op) => {
            let mut out = render_operator(op);
            let trace = op.trace();
            if (trace - Complex64::ONE).norm() > tol {
                out.push_str(&format!("\ntrace: {}", fmt_complex(trace)));
            }
            out
        }
        Value::Complex(z) => fmt_complex(*z),
        Value::Real(x) => fmt_sig(*x),
    }
}

/// Machine-readable form of a value; amplitudes as decimal strings, the
/// same convention codebook files use.
pub fn value_to_json(value: &Value) -> serde_json::Value {
    match value {
        Value::Vector(v) => serde_json::json!({
            "kind": "vector",
            "terms": v.terms().map(|(s, a)| serde_json::json!({
                "string": if s.is_empty() { String::new() } else { s.to_string() },
                "re": format!("{:?}", a.re),
                "im": format!("{:?}", a.im),
            })).collect::<Vec<_>>(),
            "norm": v.norm(),
        }),
        Value::Operator(op) => serde_json::json!({
            "kind": "operator",
            "entries": op.entries().map(|((s, t), c)| serde_json::json!({
                "ket": if s.is_empty() { String::new() } else { s.to_string() },
                "bra": if t.is_empty() { String::new() } else { t.to_string() },
                "re": format!("{:?}", c.re),
                "im": format!("{:?}", c.im),
            })).collect::<Vec<_>>(),
            "trace_re": op.trace().re,
            "trace_im": op.trace().im,
        }),
        Value::Complex(z) => serde_json::json!({
            "kind": "complex", "re": z.re, "im": z.im,
        }),
        Value::Real(x) => serde_json::json!({ "kind": "real", "value": x }),
    }
}
