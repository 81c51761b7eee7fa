//! The quantum Kraft inequality report.
//!
//! For an orthonormal system `{e_i}` spanning a subspace, three quantities
//! are chained:
//!
//! ```text
//!   Σ 2^{-ℓ(e_i)}  ≤  Σ 2^{-ℓ̄(e_i)}  ≤  Tr(2^{-Λ} P)  ( ≤ 1 when prefix-free )
//! ```
//!
//! with equality of the left three exactly when every `e_i` is a length
//! eigenstate. The trace term is computed as `Σ_i ⟨e_i|2^{-Λ}|e_i⟩`, which
//! is basis-independent because the `e_i` are an orthonormal basis of the
//! projector's range.

use crate::analysis::{check_prefix_free_complete, CodeSet, Condition};
use crate::error::AnalysisError;

/// Per-vector contribution to the Kraft quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct KraftContribution {
    pub label: String,
    /// Base length ℓ(e_i).
    pub base_length: usize,
    /// `2^{-ℓ(e_i)}`.
    pub base_term: f64,
    /// Average length ℓ̄(e_i).
    pub average_length: f64,
    /// `2^{-ℓ̄(e_i)}`.
    pub average_term: f64,
    /// `⟨e_i|2^{-Λ}|e_i⟩`.
    pub length_weight: f64,
    pub is_length_eigenstate: bool,
}

/// The three Kraft quantities, their ordering verdicts and the equality
/// diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct KraftReport {
    /// `Σ 2^{-ℓ(e_i)}`.
    pub sum_base: f64,
    /// `Σ 2^{-ℓ̄(e_i)}`.
    pub sum_avg: f64,
    /// `Tr(2^{-Λ} P)` over the spanned subspace.
    pub trace_term: f64,
    /// `sum_base ≤ sum_avg ≤ trace_term` within tolerance.
    pub chain_holds: bool,
    /// `trace_term ≤ 1` within tolerance. Guaranteed only for prefix-free
    /// systems; reported unconditionally.
    pub bounded_by_one: bool,
    /// All members are length eigenstates; exactly the case where the
    /// left three quantities coincide.
    pub equality_case: bool,
    /// Whether the set checked out as prefix-free (complete suffix bound,
    /// classical-suffix condition).
    pub prefix_free: bool,
    pub contributions: Vec<KraftContribution>,
    /// The tolerance the verdicts were computed at.
    pub tolerance: f64,
}

/// Compute the Kraft report for an orthonormal code set. Rejects
/// non-orthonormal input with the offending pair; for a merely spanning
/// set, orthonormalize first (the trace term is basis-independent).
pub fn kraft_report(set: &CodeSet, tol: f64) -> Result<KraftReport, AnalysisError> {
    set.orthonormality(tol)?;

    let mut contributions = Vec::with_capacity(set.len());
    for i in 0..set.len() {
        let v = set.vector(i);
        let base_length = v.base_length(tol).map_err(AnalysisError::Core)?;
        let average_length = v.average_length();
        contributions.push(KraftContribution {
            label: set.label(i),
            base_length,
            base_term: (-(base_length as f64)).exp2(),
            average_length,
            average_term: (-average_length).exp2(),
            length_weight: v.length_weight(),
            is_length_eigenstate: v.is_length_eigenstate(tol).map_err(AnalysisError::Core)?,
        });
    }

    let sum_base: f64 = contributions.iter().map(|c| c.base_term).sum();
    let sum_avg: f64 = contributions.iter().map(|c| c.average_term).sum();
    let trace_term: f64 = contributions.iter().map(|c| c.length_weight).sum();
    let prefix_free =
        check_prefix_free_complete(set, Condition::ClassicalSuffix, tol).is_prefix_free;

    Ok(KraftReport {
        sum_base,
        sum_avg,
        trace_term,
        chain_holds: sum_base <= sum_avg + tol && sum_avg <= trace_term + tol,
        bounded_by_one: trace_term <= 1.0 + tol,
        equality_case: contributions.iter().all(|c| c.is_length_eigenstate),
        prefix_free,
        contributions,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;
    use crate::vector::QVector;
    use crate::BitString;
    use crate::DEFAULT_TOLERANCE as TOL;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn inv_sqrt2() -> Complex64 {
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }

    /// The strange pair plus |00⟩: three orthonormal prefix-free vectors.
    fn strange_plus() -> CodeSet {
        CodeSet::with_labels(
            vec![
                QVector::from_terms([
                    (bitstring("1"), inv_sqrt2()),
                    (bitstring("01"), inv_sqrt2()),
                ]),
                QVector::from_terms([
                    (bitstring("10"), inv_sqrt2()),
                    (bitstring("010"), -inv_sqrt2()),
                ]),
                QVector::ket(bitstring("00")),
            ],
            vec!["e1".into(), "e2".into(), "e3".into()],
        )
        .unwrap()
    }

    #[test]
    fn strange_plus_chain_values() {
        let report = kraft_report(&strange_plus(), TOL).unwrap();
        assert_eq!(report.sum_base, 0.625);
        // 2^{-3/2} + 2^{-5/2} + 2^{-2} = (2 + 3√2)/8
        assert_abs_diff_eq!(
            report.sum_avg,
            (2.0 + 3.0 * std::f64::consts::SQRT_2) / 8.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(report.sum_avg, 0.780330085889911, epsilon = 1e-12);
        assert_abs_diff_eq!(report.trace_term, 0.8125, epsilon = 1e-12);
        assert!(report.chain_holds);
        assert!(report.bounded_by_one);
        assert!(!report.equality_case);
        assert!(report.prefix_free);
        assert_eq!(report.contributions.len(), 3);
        assert_eq!(report.contributions[0].base_length, 2);
        assert_eq!(report.contributions[1].base_length, 3);
        assert_abs_diff_eq!(
            report.contributions[1].length_weight,
            3.0 / 16.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn complete_classical_code_saturates() {
        let set = CodeSet::new(vec![
            QVector::ket(bitstring("0")),
            QVector::ket(bitstring("10")),
            QVector::ket(bitstring("11")),
        ])
        .unwrap();
        let report = kraft_report(&set, TOL).unwrap();
        assert_eq!(report.sum_base, 1.0);
        assert_abs_diff_eq!(report.sum_avg, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.trace_term, 1.0, epsilon = 1e-12);
        assert!(report.chain_holds);
        assert!(report.bounded_by_one);
        assert!(report.equality_case);
        assert!(report.prefix_free);
    }

    #[test]
    fn lone_empty_string_is_all_ones() {
        let set = CodeSet::new(vec![QVector::ket(BitString::empty())]).unwrap();
        let report = kraft_report(&set, TOL).unwrap();
        assert_eq!(report.sum_base, 1.0);
        assert_abs_diff_eq!(report.sum_avg, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.trace_term, 1.0, epsilon = 1e-12);
        assert!(report.bounded_by_one);
        // {|λ⟩} by itself is prefix-free: ⟨λ|λ∘s⟩ = ⟨λ|s⟩ = 0 for s ≠ λ.
        assert!(report.prefix_free);
        assert!(report.equality_case);
    }

    #[test]
    fn non_orthonormal_input_is_rejected_with_pair() {
        let set = CodeSet::new(vec![
            QVector::ket(bitstring("0")),
            QVector::from_terms([(bitstring("0"), inv_sqrt2()), (bitstring("1"), inv_sqrt2())]),
        ])
        .unwrap();
        match kraft_report(&set, TOL) {
            Err(AnalysisError::NotOrthonormal { i, j, value }) => {
                assert_eq!((i, j), (0, 1));
                assert_abs_diff_eq!(value.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
            }
            other => panic!("expected NotOrthonormal, got {other:?}"),
        }
    }
}
