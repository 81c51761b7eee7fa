//! Sparse operators on the string space: density operators and general
//! bounded observables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::CoreError;
use crate::vector::QVector;
use crate::PRUNE_TOLERANCE;

/// A finite-support operator `Σ c_{st} |s⟩⟨t|` on the string space,
/// stored as a sparse map over `(ket, bra)` pairs of classical strings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QOperator {
    entries: BTreeMap<(BitString, BitString), Complex64>,
}

/// Diagnostics from a density-operator check.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub hermitian: bool,
    pub trace: Complex64,
    /// Smallest eigenvalue of the finite support block; 0 for the zero
    /// operator.
    pub min_eigenvalue: f64,
}

impl DensityCheck {
    pub fn is_density(&self, tol: f64) -> bool {
        self.hermitian && (self.trace - Complex64::ONE).norm() <= tol && self.min_eigenvalue >= -tol
    }
}

impl QOperator {
    pub fn zero() -> Self {
        QOperator {
            entries: BTreeMap::new(),
        }
    }

    /// The rank-one operator `|s⟩⟨t|`.
    pub fn ket_bra(s: BitString, t: BitString) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((s, t), Complex64::ONE);
        QOperator { entries }
    }

    /// The identity on the subspace of strings with length `≤ max_len`:
    /// `Σ_{ℓ(t) ≤ max_len} |t⟩⟨t|`. This is the usable stand-in for the
    /// (infinite) identity wherever only strings up to a known length can
    /// contribute.
    pub fn identity_up_to(max_len: usize) -> Self {
        QOperator::from_entries(
            BitString::all_up_to(0, max_len).map(|s| ((s.clone(), s), Complex64::ONE)),
        )
    }

    /// Build from `((ket, bra), coefficient)` pairs with accumulation and
    /// pruning.
    pub fn from_entries<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = ((BitString, BitString), Complex64)>,
    {
        let mut op = QOperator::zero();
        for (key, c) in iter {
            op.accumulate(key, c);
        }
        op.prune();
        op
    }

    pub(crate) fn accumulate(&mut self, key: (BitString, BitString), c: Complex64) {
        *self.entries.entry(key).or_insert(Complex64::ZERO) += c;
    }

    pub(crate) fn prune(&mut self) {
        self.entries.retain(|_, c| c.norm() > PRUNE_TOLERANCE);
    }

    /// Stored entries in shortlex pair order.
    pub fn entries(&self) -> impl Iterator<Item = (&(BitString, BitString), Complex64)> + '_ {
        self.entries.iter().map(|(k, c)| (k, *c))
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, ket: &BitString, bra: &BitString) -> Complex64 {
        self.entries
            .get(&(ket.clone(), bra.clone()))
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> QOperator {
        let mut op = QOperator {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        };
        op.prune();
        op
    }

    /// The adjoint `A†`.
    pub fn adjoint(&self) -> QOperator {
        QOperator::from_entries(
            self.entries
                .iter()
                .map(|((s, t), c)| ((t.clone(), s.clone()), c.conj())),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|((s, t), _)| s == t)
            .map(|(_, c)| c)
            .sum()
    }

    /// `Tr(self · other) = Σ_{s,t} self_{st}·other_{ts}`.
    pub fn trace_product(&self, other: &QOperator) -> Complex64 {
        self.entries
            .iter()
            .map(|((s, t), c)| c * other.entry(t, s))
            .sum()
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &QVector) -> Complex64 {
        self.entries
            .iter()
            .map(|((s, t), c)| v.amplitude(s).conj() * c * v.amplitude(t))
            .sum()
    }

    /// `A|v⟩`.
    pub fn apply(&self, v: &QVector) -> QVector {
        QVector::from_terms(
            self.entries
                .iter()
                .map(|((s, t), c)| (s.clone(), c * v.amplitude(t))),
        )
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|((s, t), c)| (c - self.entry(t, s).conj()).norm() <= tol)
    }

    /// Union of ket- and bra-side strings with coefficient magnitude above
    /// `tol`, in shortlex order.
    pub fn support_strings(&self, tol: f64) -> Vec<BitString> {
        let mut set = BTreeSet::new();
        for ((s, t), c) in self.entries.iter() {
            if c.norm() > tol {
                set.insert(s.clone());
                set.insert(t.clone());
            }
        }
        set.into_iter().collect()
    }

    /// Base length ℓ(ρ): the maximum length of a string with a diagonal
    /// coefficient above `tol`. This matches the usual definition for
    /// density operators, whose support is governed by the diagonal.
    /// Errors when no diagonal entry survives.
    pub fn base_length(&self, tol: f64) -> Result<usize, CoreError> {
        self.entries
            .iter()
            .filter(|((s, t), c)| s == t && c.norm() > tol)
            .map(|((s, _), _)| s.len())
            .max()
            .ok_or(CoreError::ZeroSupport("operator"))
    }

    /// The longest string appearing on either side of any entry above
    /// `tol`. For density operators this agrees with [`Self::base_length`];
    /// for general operators (e.g. `|0⟩⟨00|`) it is the right notion of
    /// "fits into n cells".
    pub fn max_support_len(&self, tol: f64) -> Option<usize> {
        self.entries
            .iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|((s, t), _)| s.len().max(t.len()))
            .max()
    }

    /// Lengths of diagonally supported strings, ascending and deduplicated.
    pub fn supported_lengths(&self, tol: f64) -> Vec<usize> {
        let mut lengths: Vec<usize> = self
            .entries
            .iter()
            .filter(|((s, t), c)| s == t && c.norm() > tol)
            .map(|((s, _), _)| s.len())
            .collect();
        lengths.dedup(); // map iteration is shortlex, so lengths ascend
        lengths
    }

    /// True iff all diagonal support sits at one fixed length.
    pub fn is_length_eigenstate(&self, tol: f64) -> Result<bool, CoreError> {
        let lengths = self.supported_lengths(tol);
        if lengths.is_empty() {
            return Err(CoreError::ZeroSupport("operator"));
        }
        Ok(lengths.len() == 1)
    }

    /// Average length ℓ̄(ρ) = `Σ_s ℓ(s)·⟨s|ρ|s⟩` for a density operator.
    /// Errors when the trace deviates from one by more than `tol`.
    pub fn average_length(&self, tol: f64) -> Result<f64, CoreError> {
        let tr = self.trace();
        if (tr - Complex64::ONE).norm() > tol {
            return Err(CoreError::TraceNotOne {
                trace: tr,
                tolerance: tol,
            });
        }
        Ok(self
            .entries
            .iter()
            .filter(|((s, t), _)| s == t)
            .map(|((s, _), c)| s.len() as f64 * c.re)
            .sum())
    }

    /// Dense matrix over the support block, in shortlex string order.
    fn support_block(&self, tol: f64) -> (Vec<BitString>, DMatrix<Complex64>) {
        let strings = self.support_strings(tol);
        let n = strings.len();
        let index: BTreeMap<&BitString, usize> =
            strings.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = DMatrix::from_element(n, n, Complex64::ZERO);
        for ((s, t), c) in self.entries.iter() {
            if let (Some(&i), Some(&j)) = (index.get(s), index.get(t)) {
                m[(i, j)] += c;
            }
        }
        (strings, m)
    }

    /// Smallest eigenvalue of the (Hermitian) finite support block.
    /// The support is finite by construction, so this is exact up to
    /// floating error. Returns 0 for the zero operator.
    pub fn min_eigenvalue(&self) -> f64 {
        let (strings, m) = self.support_block(PRUNE_TOLERANCE);
        if strings.is_empty() {
            return 0.0;
        }
        // Hermitize first so that near-Hermitian inputs get a meaningful
        // answer; the hermiticity flag is reported separately.
        let h = (&m + m.adjoint()).scale(0.5);
        h.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Full density-operator diagnostics: hermiticity, trace and the
    /// smallest eigenvalue of the support block.
    pub fn density_check(&self, tol: f64) -> DensityCheck {
        DensityCheck {
            hermitian: self.is_hermitian(tol),
            trace: self.trace(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }

    pub fn is_density(&self, tol: f64) -> bool {
        self.density_check(tol).is_density(tol)
    }

    /// Entrywise comparison over the union of supports.
    pub fn max_deviation(&self, other: &QOperator) -> f64 {
        let mut max = 0.0f64;
        for (k, c) in self.entries.iter() {
            max = max.max((c - other.entries.get(k).copied().unwrap_or(Complex64::ZERO)).norm());
        }
        for (k, c) in other.entries.iter() {
            if !self.entries.contains_key(k) {
                max = max.max(c.norm());
            }
        }
        max
    }

    pub fn approx_eq(&self, other: &QOperator, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }
}

impl Add for &QOperator {
    type Output = QOperator;

    fn add(self, rhs: &QOperator) -> QOperator {
        let mut out = self.clone();
        for (k, c) in rhs.entries.iter() {
            out.accumulate(k.clone(), *c);
        }
        out.prune();
        out
    }
}

impl Sub for &QOperator {
    type Output = QOperator;

    fn sub(self, rhs: &QOperator) -> QOperator {
        let mut out = self.clone();
        for (k, c) in rhs.entries.iter() {
            out.accumulate(k.clone(), -*c);
        }
        out.prune();
        out
    }
}

impl fmt::Display for QOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((s, t), c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})|{s}⟩⟨{t}|")?;
        }
        Ok(())
    }
}
