//! Sparse complex vectors on the string space.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::CoreError;
use crate::operator::QOperator;
use crate::PRUNE_TOLERANCE;

/// A finite-support element of the string space: a map from classical bit
/// strings to complex amplitudes, with absent keys read as zero.
///
/// Values are not required to be normalized: operations such as the
/// indexed tensor product legitimately produce vectors of norm below one,
/// and those are meaningful results rather than errors. Stored amplitudes
/// with magnitude at or below [`PRUNE_TOLERANCE`] are dropped so that maps
/// stay canonical under arithmetic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QVector {
    terms: BTreeMap<BitString, Complex64>,
}

impl QVector {
    /// The zero vector (empty support).
    pub fn zero() -> Self {
        QVector {
            terms: BTreeMap::new(),
        }
    }

    /// The basis vector `|s⟩`.
    pub fn ket(s: BitString) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, Complex64::new(1.0, 0.0));
        QVector { terms }
    }

    /// Build from `(string, amplitude)` pairs; amplitudes for repeated
    /// strings accumulate, and near-zero results are pruned.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (BitString, Complex64)>,
    {
        let mut v = QVector::zero();
        for (s, a) in iter {
            v.accumulate(s, a);
        }
        v.prune();
        v
    }

    pub(crate) fn accumulate(&mut self, s: BitString, a: Complex64) {
        *self.terms.entry(s).or_insert(Complex64::ZERO) += a;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() > PRUNE_TOLERANCE);
    }

    /// Stored terms in shortlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&BitString, Complex64)> + '_ {
        self.terms.iter().map(|(s, a)| (s, *a))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The amplitude at `s` (zero if absent).
    pub fn amplitude(&self, s: &BitString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Supported strings: stored terms with magnitude above `tol`.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = &BitString> + '_ {
        self.terms
            .iter()
            .filter(move |(_, a)| a.norm() > tol)
            .map(|(s, _)| s)
    }

    /// `Σ_s conj(self_s)·other_s`, conjugate-linear in `self`.
    pub fn inner(&self, other: &QVector) -> Complex64 {
        // iterate the smaller support
        let small = if self.terms.len() <= other.terms.len() {
            self
        } else {
            other
        };
        let mut acc = Complex64::ZERO;
        for s in small.terms.keys() {
            acc += self.amplitude(s).conj() * other.amplitude(s);
        }
        acc
    }

    /// `Σ_s |α_s|²`.
    pub fn squared_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Scaled copy `c·self`.
    pub fn scaled(&self, c: Complex64) -> QVector {
        let mut v = QVector {
            terms: self.terms.iter().map(|(s, a)| (s.clone(), a * c)).collect(),
        };
        v.prune();
        v
    }

    /// `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<QVector> {
        let n = self.norm();
        if n <= PRUNE_TOLERANCE {
            None
        } else {
            Some(self.scaled(Complex64::new(1.0 / n, 0.0)))
        }
    }

    /// Base length ℓ: the maximum length of a supported string.
    /// Errors on the zero vector, which has no length.
    pub fn base_length(&self, tol: f64) -> Result<usize, CoreError> {
        self.support(tol)
            .map(|s| s.len())
            .max()
            .ok_or(CoreError::ZeroSupport("vector"))
    }

    /// Supported lengths above `tol`, ascending and deduplicated.
    pub fn supported_lengths(&self, tol: f64) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.support(tol).map(|s| s.len()).collect();
        lengths.dedup(); // shortlex iteration is already length-sorted
        lengths
    }

    /// True iff every supported string has the same length.
    pub fn is_length_eigenstate(&self, tol: f64) -> Result<bool, CoreError> {
        let lengths = self.supported_lengths(tol);
        if lengths.is_empty() {
            return Err(CoreError::ZeroSupport("vector"));
        }
        Ok(lengths.len() == 1)
    }

    /// Average length ℓ̄ = `Σ_s ℓ(s)·|α_s|²` (the expectation of the length
    /// observable when the vector is normalized).
    pub fn average_length(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, a)| s.len() as f64 * a.norm_sqr())
            .sum()
    }

    /// `Σ_s |α_s|²·2^{-ℓ(s)}`: the expectation of 2^{-Λ}.
    pub fn length_weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, a)| a.norm_sqr() * (-(s.len() as f64)).exp2())
            .sum()
    }

    /// The outer product `|self⟩⟨self|`, with no normalization requirement.
    pub fn outer(&self) -> QOperator {
        QOperator::from_entries(self.terms.iter().flat_map(|(s, a)| {
            self.terms
                .iter()
                .map(move |(t, b)| ((s.clone(), t.clone()), a * b.conj()))
        }))
    }

    /// The density operator `|self⟩⟨self|` of a normalized vector.
    ///
    /// Rejects unnormalized input unless `allow_unnormalized` is set; the
    /// caller that wants a literal outer product can also use [`Self::outer`].
    pub fn density(&self, tol: f64, allow_unnormalized: bool) -> Result<QOperator, CoreError> {
        let sq = self.squared_norm();
        if !allow_unnormalized && (sq - 1.0).abs() > tol {
            return Err(CoreError::NotNormalized {
                squared_norm: sq,
                tolerance: tol,
            });
        }
        Ok(self.outer())
    }

    /// Entrywise comparison over the union of supports.
    pub fn max_deviation(&self, other: &QVector) -> f64 {
        let mut max = 0.0f64;
        for (s, a) in self.terms.iter() {
            max = max.max((a - other.amplitude(s)).norm());
        }
        for (s, b) in other.terms.iter() {
            if !self.terms.contains_key(s) {
                max = max.max(b.norm());
            }
        }
        max
    }

    pub fn approx_eq(&self, other: &QVector, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }
}

impl Add for &QVector {
    type Output = QVector;

    fn add(self, rhs: &QVector) -> QVector {
        let mut out = self.clone();
        for (s, a) in rhs.terms.iter() {
            out.accumulate(s.clone(), *a);
        }
        out.prune();
        out
    }
}

impl Sub for &QVector {
    type Output = QVector;

    fn sub(self, rhs: &QVector) -> QVector {
        let mut out = self.clone();
        for (s, a) in rhs.terms.iter() {
            out.accumulate(s.clone(), -*a);
        }
        out.prune();
        out
    }
}

impl fmt::Display for QVector {
    /// Debug-oriented rendering: `(a+bi)|s⟩ + …` in shortlex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({a})|{s}⟩")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;
    use crate::DEFAULT_TOLERANCE as TOL;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn inv_sqrt2() -> Complex64 {
        c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }

    /// `(|00⟩ - |1111⟩)/√2`
    fn two_term_superposition() -> QVector {
        QVector::from_terms([
            (bitstring("00"), inv_sqrt2()),
            (bitstring("1111"), -inv_sqrt2()),
        ])
    }

    #[test]
    fn inner_of_basis_strings() {
        let k0 = QVector::ket(bitstring("0"));
        let lambda = QVector::ket(BitString::empty());
        assert_eq!(k0.inner(&k0), c(1.0, 0.0));
        assert_eq!(lambda.inner(&k0), Complex64::ZERO);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let v = QVector::from_terms([(bitstring("0"), c(0.0, 1.0))]);
        let w = QVector::ket(bitstring("0"));
        assert_eq!(v.inner(&w), c(0.0, -1.0));
        assert_eq!(w.inner(&v), c(0.0, 1.0));
    }

    #[test]
    fn base_length_of_mixed_length_superposition() {
        let v = two_term_superposition();
        assert_eq!(v.base_length(TOL).unwrap(), 4);
        assert_eq!(
            QVector::ket(BitString::empty()).base_length(TOL).unwrap(),
            0
        );
        assert!(matches!(
            QVector::zero().base_length(TOL),
            Err(CoreError::ZeroSupport(_))
        ));
    }

    #[test]
    fn length_eigenstate_detection() {
        let balanced = QVector::from_terms([
            (bitstring("00"), inv_sqrt2()),
            (bitstring("11"), inv_sqrt2()),
        ]);
        assert!(balanced.is_length_eigenstate(TOL).unwrap());

        let mixed = QVector::from_terms([
            (bitstring("1"), inv_sqrt2()),
            (bitstring("01"), inv_sqrt2()),
        ]);
        assert!(!mixed.is_length_eigenstate(TOL).unwrap());

        let lambda = QVector::ket(BitString::empty());
        assert!(lambda.is_length_eigenstate(TOL).unwrap());
    }

    #[test]
    fn length_weight_values() {
        // (|10⟩ - |010⟩)/√2: ½·¼ + ½·⅛ = 3/16
        let e2 = QVector::from_terms([
            (bitstring("10"), inv_sqrt2()),
            (bitstring("010"), -inv_sqrt2()),
        ]);
        assert_abs_diff_eq!(e2.length_weight(), 3.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            QVector::ket(BitString::empty()).length_weight(),
            1.0,
            epsilon = 0.0
        );
        assert_abs_diff_eq!(
            QVector::ket(bitstring("0110")).length_weight(),
            1.0 / 16.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn average_length_values() {
        let e1 = QVector::from_terms([
            (bitstring("1"), inv_sqrt2()),
            (bitstring("01"), inv_sqrt2()),
        ]);
        assert_abs_diff_eq!(e1.average_length(), 1.5, epsilon = 1e-12);
        let shallow = QVector::from_terms([
            (BitString::empty(), inv_sqrt2()),
            (bitstring("0"), inv_sqrt2()),
        ]);
        assert_abs_diff_eq!(shallow.average_length(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn density_rejects_unnormalized_without_flag() {
        let v = QVector::from_terms([(bitstring("01"), c(0.8, 0.0))]);
        assert!(matches!(
            v.density(TOL, false),
            Err(CoreError::NotNormalized { .. })
        ));
        let rho = v.density(TOL, true).unwrap();
        assert_abs_diff_eq!(
            rho.entry(&bitstring("01"), &bitstring("01")).re,
            0.64,
            epsilon = 1e-12
        );
    }

    #[test]
    fn density_of_basis_ket_is_one_entry() {
        let rho = QVector::ket(bitstring("0")).density(TOL, false).unwrap();
        assert_eq!(rho.entry_count(), 1);
        assert_eq!(rho.entry(&bitstring("0"), &bitstring("0")), c(1.0, 0.0));
    }

    #[test]
    fn density_of_plus_state_has_four_entries() {
        let plus =
            QVector::from_terms([(bitstring("0"), inv_sqrt2()), (bitstring("1"), inv_sqrt2())]);
        let rho = plus.density(TOL, false).unwrap();
        assert_eq!(rho.entry_count(), 4);
        for (_, value) in rho.entries() {
            assert_abs_diff_eq!(value.norm(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn arithmetic_prunes_cancellations() {
        let v = two_term_superposition();
        let diff = &v - &v;
        assert!(diff.is_zero());
        assert_eq!(diff.term_count(), 0);
    }
}
