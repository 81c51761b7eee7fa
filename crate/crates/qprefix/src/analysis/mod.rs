//! Prefix-free verification, orthonormalization, distinguishability and
//! the weight function.
//!
//! A set of qubit strings is *prefix-free* when no member overlaps any
//! member extended by a nonempty suffix. Four equivalent formulations are
//! implemented ([`Condition`]), each checked by honest enumeration so that
//! their agreement is itself a testable property.

mod kraft;

pub use kraft::{kraft_report, KraftContribution, KraftReport};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::AnalysisError;
use crate::operator::QOperator;
use crate::tape::{concat, concat_classical, prefix};
use crate::vector::QVector;

/// Residual-norm threshold below which Gram–Schmidt drops a vector as
/// linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// A finite ordered list of nonzero qubit strings, optionally labelled.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSet {
    vectors: Vec<QVector>,
    labels: Option<Vec<String>>,
}

impl CodeSet {
    /// Build from vectors; rejects zero vectors.
    pub fn new(vectors: Vec<QVector>) -> Result<Self, AnalysisError> {
        if let Some(index) = vectors.iter().position(|v| v.is_zero()) {
            return Err(AnalysisError::ZeroVector { index });
        }
        Ok(CodeSet {
            vectors,
            labels: None,
        })
    }

    pub fn with_labels(vectors: Vec<QVector>, labels: Vec<String>) -> Result<Self, AnalysisError> {
        let mut set = CodeSet::new(vectors)?;
        assert_eq!(set.len(), labels.len(), "one label per vector");
        set.labels = Some(labels);
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &QVector {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vectors
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// Pairwise check `⟨e_i|e_j⟩ = δ_ij` within `tol`; reports the first
    /// offending pair.
    pub fn orthonormality(&self, tol: f64) -> Result<(), AnalysisError> {
        for i in 0..self.len() {
            for j in i..self.len() {
                let value = self.vectors[i].inner(&self.vectors[j]);
                let expected = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                if (value - expected).norm() > tol {
                    return Err(AnalysisError::NotOrthonormal { i, j, value });
                }
            }
        }
        Ok(())
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.orthonormality(tol).is_ok()
    }

    /// Largest base length over the set. Vectors are nonzero by
    /// construction, so this never fails.
    pub fn max_base_length(&self, tol: f64) -> usize {
        self.vectors
            .iter()
            .map(|v| v.base_length(tol).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

/// Which of the four equivalent prefix-freeness formulations to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `⟨φ|ψ∘s⟩ = 0` for all members φ, ψ and classical `s ≠ λ`.
    ClassicalSuffix,
    /// `⟨φ|ψ∘χ⟩ = 0` for all qubit strings `χ ⊥ |λ⟩`, evaluated on the
    /// classical basis of that subspace (sufficient by linearity).
    QubitSuffix,
    /// `⟨φ∘t|ψ∘s⟩ = 0` for all classical `s ≠ t`.
    ClassicalSuffixPair,
    /// `⟨φ∘τ|ψ∘χ⟩ = 0` for all orthogonal qubit strings `χ ⊥ τ`,
    /// evaluated on classical basis pairs (sufficient by sesquilinearity).
    QubitSuffixPair,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::ClassicalSuffix,
        Condition::QubitSuffix,
        Condition::ClassicalSuffixPair,
        Condition::QubitSuffixPair,
    ];

    pub fn number(self) -> u8 {
        match self {
            Condition::ClassicalSuffix => 1,
            Condition::QubitSuffix => 2,
            Condition::ClassicalSuffixPair => 3,
            Condition::QubitSuffixPair => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.number() == n)
    }
}

/// A failed prefix-freeness check: the member pair and classical suffix
/// (or suffix pair) whose overlap is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Index of φ (the bra-side member).
    pub phi: usize,
    /// Index of ψ (the ket-side member).
    pub psi: usize,
    /// The suffix appended to ψ.
    pub suffix: BitString,
    /// The suffix appended to φ, for the pair conditions.
    pub bra_suffix: Option<BitString>,
    pub overlap: Complex64,
}

impl Witness {
    /// Re-evaluate the overlap this witness claims; used to validate that
    /// reported witnesses reproduce.
    pub fn reevaluate(&self, set: &CodeSet) -> Complex64 {
        let psi_side = concat_classical(set.vector(self.psi), &self.suffix);
        let phi_side = match &self.bra_suffix {
            Some(t) => concat_classical(set.vector(self.phi), t),
            None => set.vector(self.phi).clone(),
        };
        phi_side.inner(&psi_side)
    }
}

/// Verdict of a prefix-freeness check.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixFreeVerdict {
    pub is_prefix_free: bool,
    pub condition: Condition,
    /// First failure found under deterministic enumeration (member order,
    /// then suffixes in shortlex order), if any.
    pub witness: Option<Witness>,
}

// Suffix enumeration bound: ⟨φ|ψ∘s⟩ can only be nonzero when some string
// in the support of ψ∘s is also in the support of φ. Every string of ψ∘s
// has length at least ℓ(s), while φ is supported on lengths at most
// base_length(φ); so suffixes longer than max_i base_length(e_i) can never
// produce an overlap, and enumerating classical suffixes up to that bound
// is complete. The pair conditions reduce to the single-suffix case by
// unitarity of classical-suffix concatenation (⟨φ∘u|ψ∘u⟩ = ⟨φ|ψ⟩ and
// overlaps vanish unless one suffix is a tail of the other), so the same
// bound is complete for them.
/// The suffix length at which classical-suffix enumeration becomes
/// complete for this code set.
pub fn sufficient_suffix_len(set: &CodeSet, tol: f64) -> usize {
    set.max_base_length(tol)
}

fn single_suffix_check(
    set: &CodeSet,
    max_suffix_len: usize,
    tol: f64,
    condition: Condition,
    via_qubit_path: bool,
) -> PrefixFreeVerdict {
    for phi in 0..set.len() {
        for psi in 0..set.len() {
            for s in BitString::all_up_to(1, max_suffix_len) {
                let shifted = if via_qubit_path {
                    // route through the general bilinear concatenation with
                    // the suffix as a qubit string orthogonal to |λ⟩
                    concat(set.vector(psi), &QVector::ket(s.clone()))
                } else {
                    concat_classical(set.vector(psi), &s)
                };
                let overlap = set.vector(phi).inner(&shifted);
                if overlap.norm() > tol {
                    return PrefixFreeVerdict {
                        is_prefix_free: false,
                        condition,
                        witness: Some(Witness {
                            phi,
                            psi,
                            suffix: s,
                            bra_suffix: None,
                            overlap,
                        }),
                    };
                }
            }
        }
    }
    PrefixFreeVerdict {
        is_prefix_free: true,
        condition,
        witness: None,
    }
}

fn suffix_pair_check(
    set: &CodeSet,
    max_suffix_len: usize,
    tol: f64,
    condition: Condition,
    via_qubit_path: bool,
) -> PrefixFreeVerdict {
    for phi in 0..set.len() {
        for psi in 0..set.len() {
            for s in BitString::all_up_to(0, max_suffix_len) {
                for t in BitString::all_up_to(0, max_suffix_len) {
                    if s == t {
                        continue;
                    }
                    let (phi_side, psi_side) = if via_qubit_path {
                        // distinct classical strings are orthogonal, so
                        // (τ, χ) = (|t⟩, |s⟩) is a valid orthogonal pair
                        (
                            concat(set.vector(phi), &QVector::ket(t.clone())),
                            concat(set.vector(psi), &QVector::ket(s.clone())),
                        )
                    } else {
                        (
                            concat_classical(set.vector(phi), &t),
                            concat_classical(set.vector(psi), &s),
                        )
                    };
                    let overlap = phi_side.inner(&psi_side);
                    if overlap.norm() > tol {
                        return PrefixFreeVerdict {
                            is_prefix_free: false,
                            condition,
                            witness: Some(Witness {
                                phi,
                                psi,
                                suffix: s,
                                bra_suffix: Some(t),
                                overlap,
                            }),
                        };
                    }
                }
            }
        }
    }
    PrefixFreeVerdict {
        is_prefix_free: true,
        condition,
        witness: None,
    }
}

/// Check one prefix-freeness condition by enumeration of classical
/// suffixes up to `max_suffix_len` (see [`sufficient_suffix_len`] for the
/// bound that makes the enumeration complete).
pub fn check_prefix_free(
    set: &CodeSet,
    condition: Condition,
    max_suffix_len: usize,
    tol: f64,
) -> PrefixFreeVerdict {
    match condition {
        Condition::ClassicalSuffix => {
            single_suffix_check(set, max_suffix_len, tol, condition, false)
        }
        Condition::QubitSuffix => single_suffix_check(set, max_suffix_len, tol, condition, true),
        Condition::ClassicalSuffixPair => {
            suffix_pair_check(set, max_suffix_len, tol, condition, false)
        }
        Condition::QubitSuffixPair => suffix_pair_check(set, max_suffix_len, tol, condition, true),
    }
}

/// Check prefix-freeness with the complete suffix bound for this set.
pub fn check_prefix_free_complete(
    set: &CodeSet,
    condition: Condition,
    tol: f64,
) -> PrefixFreeVerdict {
    check_prefix_free(set, condition, sufficient_suffix_len(set, tol), tol)
}

/// Run all four conditions; true iff their verdicts coincide.
pub fn conditions_agree(set: &CodeSet, max_suffix_len: usize, tol: f64) -> bool {
    let verdicts: Vec<bool> = Condition::ALL
        .into_iter()
        .map(|c| check_prefix_free(set, c, max_suffix_len, tol).is_prefix_free)
        .collect();
    verdicts.iter().all(|&v| v == verdicts[0])
}

/// Modified Gram–Schmidt over the input order: returns an orthonormal
/// basis of the span, dropping vectors whose residual norm falls below
/// [`RANK_TOLERANCE`].
pub fn orthonormalize(spanning: &[QVector]) -> CodeSet {
    let mut basis: Vec<QVector> = Vec::new();
    for v in spanning {
        let mut residual = v.clone();
        for b in &basis {
            let coefficient = b.inner(&residual);
            residual = &residual - &b.scaled(coefficient);
        }
        if residual.norm() >= RANK_TOLERANCE {
            basis.push(residual.normalized().expect("norm above rank tolerance"));
        }
    }
    CodeSet::new(basis).expect("normalized vectors are nonzero")
}

/// Apply a unitary rotation to the span coefficients:
/// `e_i' = Σ_j U_{ij} e_j`.
pub fn rotate_basis(
    set: &CodeSet,
    rotation: &DMatrix<Complex64>,
    tol: f64,
) -> Result<CodeSet, AnalysisError> {
    let n = set.len();
    if rotation.nrows() != n || rotation.ncols() != n {
        return Err(AnalysisError::DimensionMismatch {
            rows: rotation.nrows(),
            cols: rotation.ncols(),
            expected: n,
        });
    }
    let deviation = (rotation.adjoint() * rotation - DMatrix::identity(n, n)).norm();
    if deviation > tol.max(1e-12) {
        return Err(AnalysisError::NotUnitary { deviation });
    }
    let rotated = (0..n)
        .map(|i| {
            let mut v = QVector::zero();
            for j in 0..n {
                v = &v + &set.vector(j).scaled(rotation[(i, j)]);
            }
            v
        })
        .collect();
    CodeSet::new(rotated)
}

/// Rotate an orthonormal prefix-free basis and re-check prefix-freeness.
/// Every orthonormal basis of a prefix-free span must come out prefix-free
/// again; a non-unitary rotation is rejected.
pub fn basis_rotation_preserves(
    set: &CodeSet,
    rotation: &DMatrix<Complex64>,
    tol: f64,
) -> Result<PrefixFreeVerdict, AnalysisError> {
    let rotated = rotate_basis(set, rotation, tol)?;
    Ok(check_prefix_free_complete(
        &rotated,
        Condition::ClassicalSuffix,
        tol,
    ))
}

/// `⟨ψ| φ^{ℓ(ψ)} |ψ⟩`: the probability that measuring the first ℓ(ψ)
/// qubits of φ looks like ψ. Zero means the prefix measurement excludes φ
/// with certainty.
pub fn distinguishability(phi: &QVector, psi: &QVector, tol: f64) -> Result<f64, AnalysisError> {
    let n = psi.base_length(tol).map_err(AnalysisError::Core)?;
    let restricted = prefix(&phi.outer(), n);
    Ok(restricted.expectation(psi).re.clamp(0.0, f64::INFINITY))
}

/// The weight `w_φ(s) = Σ_t |⟨φ∘t|s⟩|²`, in its closed form: the squared
/// amplitudes of φ on the prefixes of `s` (including λ and `s` itself).
/// Each suffix `t` of `s` pairs with exactly one prefix, so the defining
/// sum collapses to this.
pub fn weight(phi: &QVector, s: &BitString) -> f64 {
    (0..=s.len())
        .map(|n| phi.amplitude(&s.prefix(n)).norm_sqr())
        .sum()
}

/// Density-operator helper for worked examples: `|φ⟩⟨φ|` without a
/// normalization gate.
pub fn pure_state(phi: &QVector) -> QOperator {
    phi.outer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;
    use crate::BitString;
    use crate::DEFAULT_TOLERANCE as TOL;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn inv_sqrt2() -> Complex64 {
        c(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// (|1⟩+|01⟩)/√2 and (|10⟩−|010⟩)/√2: an orthonormal prefix-free pair
    /// with no length-eigenstate basis.
    pub(crate) fn strange_pair() -> CodeSet {
        CodeSet::new(vec![
            QVector::from_terms([
                (bitstring("1"), inv_sqrt2()),
                (bitstring("01"), inv_sqrt2()),
            ]),
            QVector::from_terms([
                (bitstring("10"), inv_sqrt2()),
                (bitstring("010"), -inv_sqrt2()),
            ]),
        ])
        .unwrap()
    }

    fn classical_code() -> CodeSet {
        CodeSet::new(vec![
            QVector::ket(bitstring("0")),
            QVector::ket(bitstring("10")),
            QVector::ket(bitstring("11")),
        ])
        .unwrap()
    }

    fn self_prefix_singleton() -> CodeSet {
        CodeSet::new(vec![QVector::from_terms([
            (BitString::empty(), inv_sqrt2()),
            (bitstring("0"), inv_sqrt2()),
        ])])
        .unwrap()
    }

    #[test]
    fn strange_pair_passes_all_four_conditions() {
        let set = strange_pair();
        assert!(set.is_orthonormal(TOL));
        let bound = sufficient_suffix_len(&set, TOL);
        assert_eq!(bound, 3);
        for condition in Condition::ALL {
            let verdict = check_prefix_free(&set, condition, bound, TOL);
            assert!(verdict.is_prefix_free, "condition {:?}", condition);
            assert!(verdict.witness.is_none());
        }
        assert!(conditions_agree(&set, bound, TOL));
    }

    #[test]
    fn self_prefix_state_fails_with_reproducible_witness() {
        let set = self_prefix_singleton();
        for condition in Condition::ALL {
            let verdict = check_prefix_free_complete(&set, condition, TOL);
            assert!(!verdict.is_prefix_free, "condition {:?}", condition);
            let witness = verdict.witness.expect("failure carries a witness");
            assert!((witness.reevaluate(&set) - witness.overlap).norm() <= 1e-12);
            assert!(witness.overlap.norm() > TOL);
        }
        // condition 1's first witness is the suffix s = 0 with overlap ½
        let verdict = check_prefix_free_complete(&set, Condition::ClassicalSuffix, TOL);
        let witness = verdict.witness.unwrap();
        assert_eq!(witness.suffix, bitstring("0"));
        assert_abs_diff_eq!(witness.overlap.re, 0.5, epsilon = 1e-12);
        assert!(conditions_agree(&set, 1, TOL));
    }

    #[test]
    fn classical_prefix_code_is_prefix_free() {
        let set = classical_code();
        for condition in Condition::ALL {
            assert!(check_prefix_free_complete(&set, condition, TOL).is_prefix_free);
        }
    }

    #[test]
    fn orthonormalize_textbook_case() {
        let zero = QVector::ket(bitstring("0"));
        let mixed = &QVector::ket(bitstring("0")) + &QVector::ket(bitstring("1"));
        let basis = orthonormalize(&[zero, mixed]);
        assert_eq!(basis.len(), 2);
        assert!(basis.is_orthonormal(1e-12));
        assert!(basis
            .vector(0)
            .approx_eq(&QVector::ket(bitstring("0")), 1e-12));
        assert!(basis
            .vector(1)
            .approx_eq(&QVector::ket(bitstring("1")), 1e-12));
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let v = QVector::from_terms([(bitstring("1"), c(0.6)), (bitstring("00"), c(0.8))]);
        let double = v.scaled(c(2.0));
        let basis = orthonormalize(&[v.clone(), double]);
        assert_eq!(basis.len(), 1);
        assert!(basis.vector(0).approx_eq(&v, 1e-12));
    }

    #[test]
    fn orthonormalize_keeps_already_orthonormal_basis() {
        let set = strange_pair();
        let basis = orthonormalize(set.vectors());
        assert_eq!(basis.len(), 2);
        for i in 0..2 {
            assert!(basis.vector(i).approx_eq(set.vector(i), 1e-9));
        }
    }

    #[test]
    fn rotation_preserves_prefix_freeness() {
        let set = strange_pair();
        let h =
            DMatrix::from_row_slice(2, 2, &[inv_sqrt2(), inv_sqrt2(), inv_sqrt2(), -inv_sqrt2()]);
        let verdict = basis_rotation_preserves(&set, &h, TOL).unwrap();
        assert!(verdict.is_prefix_free);

        let identity = DMatrix::identity(2, 2);
        assert!(
            basis_rotation_preserves(&set, &identity, TOL)
                .unwrap()
                .is_prefix_free
        );
    }

    #[test]
    fn non_unitary_rotation_is_rejected() {
        let set = strange_pair();
        let bad = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(2.0)]);
        assert!(matches!(
            basis_rotation_preserves(&set, &bad, TOL),
            Err(AnalysisError::NotUnitary { .. })
        ));
        let wrong_size = DMatrix::identity(3, 3);
        assert!(matches!(
            basis_rotation_preserves(&set, &wrong_size, TOL),
            Err(AnalysisError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn distinguishability_of_strange_pair_is_a_quarter() {
        let set = strange_pair();
        let psi = set.vector(0); // (|1⟩+|01⟩)/√2
        let phi = set.vector(1); // (|10⟩−|010⟩)/√2
        let d = distinguishability(phi, psi, TOL).unwrap();
        assert_abs_diff_eq!(d, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn distinguishability_of_orthogonal_eigenstates_is_zero() {
        let phi = QVector::ket(bitstring("00"));
        let psi = QVector::ket(bitstring("10"));
        assert_abs_diff_eq!(
            distinguishability(&phi, &psi, TOL).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            distinguishability(&phi, &phi, TOL).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn weight_closed_form_values() {
        // w_{|0⟩}(01) = 1: the prefix 0 carries all the weight.
        assert_abs_diff_eq!(
            weight(&QVector::ket(bitstring("0")), &bitstring("01")),
            1.0,
            epsilon = 1e-12
        );
        // φ = (|1⟩+|01⟩)/√2 at s = 11: only the prefix 1 contributes ½.
        let phi = strange_pair().vector(0).clone();
        assert_abs_diff_eq!(weight(&phi, &bitstring("11")), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_psi_is_rejected_by_distinguishability() {
        let phi = QVector::ket(bitstring("0"));
        assert!(distinguishability(&phi, &QVector::zero(), TOL).is_err());
    }

    #[test]
    fn eigenstate_systems_prefix_free_iff_distinguishable() {
        // for orthonormal length-eigenstate systems, prefix-freeness is
        // exactly pairwise prefix-measurement exclusion
        let code = classical_code();
        assert!(check_prefix_free_complete(&code, Condition::ClassicalSuffix, TOL).is_prefix_free);
        for i in 0..code.len() {
            for j in 0..code.len() {
                if i != j {
                    let d = distinguishability(code.vector(i), code.vector(j), TOL).unwrap();
                    assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
                }
            }
        }

        // {|0⟩, |01⟩} is an orthonormal eigenstate system that is NOT
        // prefix-free, and the prefix measurement fails to exclude
        let overlapping = CodeSet::new(vec![
            QVector::ket(bitstring("0")),
            QVector::ket(bitstring("01")),
        ])
        .unwrap();
        assert!(
            !check_prefix_free_complete(&overlapping, Condition::ClassicalSuffix, TOL)
                .is_prefix_free
        );
        let d = distinguishability(overlapping.vector(1), overlapping.vector(0), TOL).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
    }
}
