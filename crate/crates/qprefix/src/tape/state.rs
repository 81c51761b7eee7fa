//! Explicit tape states: configurations of `{0,1,#}` cells.
//!
//! These are the materialized counterpart of the pairwise rules in
//! [`crate::tape::ops`]: a truncated window of `cell_count` tape cells,
//! holding either a vector (configuration → amplitude) or an operator
//! (configuration pair → coefficient). Embedding writes a qubit string
//! onto a chosen cell set; extraction projects onto bit-string
//! configurations and reads the surviving bits back.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::TapeError;
use crate::operator::QOperator;
use crate::tape::IndexSet;
use crate::vector::QVector;

/// One tape cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Zero,
    One,
    Blank,
}

impl Cell {
    pub fn from_bit(b: bool) -> Cell {
        if b {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Cell::Zero => Some(false),
            Cell::One => Some(true),
            Cell::Blank => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Blank => '#',
        };
        write!(f, "{c}")
    }
}

/// A classical configuration of a fixed window of tape cells.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TapeConfig(Vec<Cell>);

impl TapeConfig {
    pub fn new(cells: Vec<Cell>) -> Self {
        TapeConfig(cells)
    }

    /// All-blank window.
    pub fn blank(cell_count: usize) -> Self {
        TapeConfig(vec![Cell::Blank; cell_count])
    }

    pub fn cell_count(&self) -> usize {
        self.0.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    /// 1-based cell access.
    pub fn cell(&self, index: usize) -> Cell {
        self.0[index - 1]
    }

    /// A configuration is in bit-string form when no bit follows a blank:
    /// `11##` qualifies, `1#0#` does not.
    pub fn is_bit_string_form(&self) -> bool {
        let mut seen_blank = false;
        for cell in &self.0 {
            match cell {
                Cell::Blank => seen_blank = true,
                _ if seen_blank => return false,
                _ => {}
            }
        }
        true
    }

    /// The cells at positions of `set` (within the window), in increasing
    /// cell order.
    pub fn restrict_to(&self, set: &IndexSet) -> TapeConfig {
        TapeConfig(
            set.members_up_to(self.cell_count())
                .into_iter()
                .map(|i| self.cell(i))
                .collect(),
        )
    }

    /// Strip blanks, provided the configuration is in bit-string form.
    pub fn strip(&self) -> Option<BitString> {
        if !self.is_bit_string_form() {
            return None;
        }
        Some(BitString::from_bits(self.0.iter().map_while(|c| c.bit())))
    }
}

impl fmt::Display for TapeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Sparse terms of a [`TapeState`]: vector or operator form.
#[derive(Debug, Clone, PartialEq)]
pub enum TapeTerms {
    Vector(BTreeMap<TapeConfig, Complex64>),
    Operator(BTreeMap<(TapeConfig, TapeConfig), Complex64>),
}

/// A (possibly unnormalized) state on a truncated tape window.
#[derive(Debug, Clone, PartialEq)]
pub struct TapeState {
    cell_count: usize,
    terms: TapeTerms,
}

impl TapeState {
    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn terms(&self) -> &TapeTerms {
        &self.terms
    }
}

/// Result of reading a tape state back onto the string space.
#[derive(Debug, Clone, PartialEq)]
pub enum Extracted {
    Vector(QVector),
    Operator(QOperator),
}

impl Extracted {
    pub fn into_vector(self) -> Option<QVector> {
        match self {
            Extracted::Vector(v) => Some(v),
            Extracted::Operator(_) => None,
        }
    }

    pub fn into_operator(self) -> Option<QOperator> {
        match self {
            Extracted::Operator(o) => Some(o),
            Extracted::Vector(_) => None,
        }
    }
}

/// Write `s` onto the cells of `set` within a window of `cell_count`
/// cells: bits on the first ℓ(s) cells of the set (in increasing order),
/// blanks everywhere else.
fn embed_string(s: &BitString, set: &IndexSet, cell_count: usize) -> Result<TapeConfig, TapeError> {
    let available = set.count_up_to(cell_count);
    if s.len() > available {
        return Err(TapeError::Capacity {
            needed: s.len(),
            available,
        });
    }
    let mut cells = vec![Cell::Blank; cell_count];
    for (rank, cell) in set.members_up_to(cell_count).into_iter().enumerate() {
        if rank < s.len() {
            cells[cell - 1] = Cell::from_bit(s.bit(rank));
        }
    }
    Ok(TapeConfig(cells))
}

/// Embed a vector onto the cells of `set`. Errors when some supported
/// string needs more cells of `set` than the window offers.
pub fn embed_vector(
    v: &QVector,
    set: &IndexSet,
    cell_count: usize,
) -> Result<TapeState, TapeError> {
    let mut terms = BTreeMap::new();
    for (s, a) in v.terms() {
        let config = embed_string(s, set, cell_count)?;
        *terms.entry(config).or_insert(Complex64::ZERO) += a;
    }
    Ok(TapeState {
        cell_count,
        terms: TapeTerms::Vector(terms),
    })
}

/// Embed an operator onto the cells of `set`.
pub fn embed_operator(
    rho: &QOperator,
    set: &IndexSet,
    cell_count: usize,
) -> Result<TapeState, TapeError> {
    let mut terms = BTreeMap::new();
    for ((s, t), c) in rho.entries() {
        let ket = embed_string(s, set, cell_count)?;
        let bra = embed_string(t, set, cell_count)?;
        *terms.entry((ket, bra)).or_insert(Complex64::ZERO) += c;
    }
    Ok(TapeState {
        cell_count,
        terms: TapeTerms::Operator(terms),
    })
}

/// Read a tape state back: look at the cells of `set`, drop terms whose
/// restriction there is not in bit-string form (the adjoint-inclusion
/// projection), and strip blanks from the survivors. The result may be
/// unnormalized; projection to zero is a valid outcome.
pub fn extract(state: &TapeState, set: &IndexSet) -> Extracted {
    match &state.terms {
        TapeTerms::Vector(terms) => {
            let mut v = QVector::zero();
            for (config, a) in terms {
                if let Some(s) = config.restrict_to(set).strip() {
                    v.accumulate(s, *a);
                }
            }
            v.prune();
            Extracted::Vector(v)
        }
        TapeTerms::Operator(terms) => {
            let mut op = QOperator::zero();
            for ((ket, bra), c) in terms {
                let ket = ket.restrict_to(set).strip();
                let bra = bra.restrict_to(set).strip();
                if let (Some(ket), Some(bra)) = (ket, bra) {
                    op.accumulate((ket, bra), *c);
                }
            }
            op.prune();
            Extracted::Operator(op)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitstring;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn inv_sqrt2() -> Complex64 {
        c(std::f64::consts::FRAC_1_SQRT_2)
    }

    fn config(text: &str) -> TapeConfig {
        TapeConfig::new(
            text.chars()
                .map(|ch| match ch {
                    '0' => Cell::Zero,
                    '1' => Cell::One,
                    '#' => Cell::Blank,
                    _ => panic!("bad config char"),
                })
                .collect(),
        )
    }

    #[test]
    fn bit_string_form_flags() {
        assert!(config("11##").is_bit_string_form());
        assert!(config("####").is_bit_string_form());
        assert!(config("1111").is_bit_string_form());
        assert!(!config("1#0#").is_bit_string_form());
        assert!(!config("#1##").is_bit_string_form());
    }

    #[test]
    fn embed_fills_bits_then_blanks() {
        let psi = QVector::from_terms([
            (bitstring("00"), inv_sqrt2()),
            (bitstring("1111"), -inv_sqrt2()),
        ]);
        let state = embed_vector(&psi, &IndexSet::full(), 6).unwrap();
        match state.terms() {
            TapeTerms::Vector(terms) => {
                assert_eq!(terms.len(), 2);
                assert_eq!(terms[&config("00####")], inv_sqrt2());
                assert_eq!(terms[&config("1111##")], -inv_sqrt2());
            }
            _ => panic!("expected vector form"),
        }
    }

    #[test]
    fn embed_empty_string_is_all_blank() {
        let lambda = QVector::ket(BitString::empty());
        let state = embed_vector(&lambda, &IndexSet::finite([2, 3]).unwrap(), 3).unwrap();
        match state.terms() {
            TapeTerms::Vector(terms) => {
                assert_eq!(terms[&TapeConfig::blank(3)], Complex64::ONE);
            }
            _ => panic!("expected vector form"),
        }
    }

    #[test]
    fn embed_on_offset_cell_is_not_bit_string_form_globally() {
        let one = QVector::ket(bitstring("1"));
        let set = IndexSet::singleton(2).unwrap();
        let state = embed_vector(&one, &set, 2).unwrap();
        match state.terms() {
            TapeTerms::Vector(terms) => {
                let cfg = config("#1");
                assert_eq!(terms[&cfg], Complex64::ONE);
                assert!(!cfg.is_bit_string_form());
                assert!(cfg.restrict_to(&set).is_bit_string_form());
            }
            _ => panic!("expected vector form"),
        }
    }

    #[test]
    fn embed_capacity_guard() {
        let v = QVector::ket(bitstring("111"));
        let err = embed_vector(&v, &IndexSet::finite([1, 2]).unwrap(), 4).unwrap_err();
        assert!(matches!(
            err,
            TapeError::Capacity {
                needed: 3,
                available: 2
            }
        ));
        // indices of the set beyond the window are unusable
        let err = embed_vector(&v, &IndexSet::full(), 2).unwrap_err();
        assert!(matches!(
            err,
            TapeError::Capacity {
                needed: 3,
                available: 2
            }
        ));
    }

    #[test]
    fn extract_drops_non_bit_string_terms() {
        // #1## restricted to {1,2} gives #1, which is not bit-string form.
        let state = TapeState {
            cell_count: 4,
            terms: TapeTerms::Vector(BTreeMap::from([(config("#1##"), Complex64::ONE)])),
        };
        let got = extract(&state, &IndexSet::finite([1, 2]).unwrap())
            .into_vector()
            .unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn extract_strips_trailing_blanks() {
        let state = TapeState {
            cell_count: 4,
            terms: TapeTerms::Vector(BTreeMap::from([(config("11##"), Complex64::ONE)])),
        };
        let got = extract(&state, &IndexSet::range(1, 4).unwrap())
            .into_vector()
            .unwrap();
        assert!(got.approx_eq(&QVector::ket(bitstring("11")), 0.0));
    }

    #[test]
    fn extract_inverts_embed() {
        let v = QVector::from_terms([(bitstring("10"), c(0.6)), (BitString::empty(), c(-0.8))]);
        for set in [
            IndexSet::full(),
            IndexSet::finite([2, 4, 5]).unwrap(),
            IndexSet::tail(3).unwrap(),
        ] {
            for cell_count in [5, 7] {
                let state = embed_vector(&v, &set, cell_count).unwrap();
                let got = extract(&state, &set).into_vector().unwrap();
                assert!(got.approx_eq(&v, 0.0), "set {set}, N={cell_count}");
            }
        }
    }

    #[test]
    fn operator_embed_extract_round_trip() {
        let rho = QOperator::from_entries([
            ((bitstring("1"), bitstring("1")), c(0.5)),
            ((bitstring("1"), bitstring("10")), c(0.25)),
            ((bitstring("10"), bitstring("1")), c(0.25)),
            ((bitstring("10"), bitstring("10")), c(0.5)),
        ]);
        let set = IndexSet::full();
        let state = embed_operator(&rho, &set, 4).unwrap();
        let got = extract(&state, &set).into_operator().unwrap();
        assert!(got.approx_eq(&rho, 0.0));
    }
}
