//! Restrictions, tensor products and concatenation of qubit strings.
//!
//! All three are defined through the tape picture: write each classical
//! string onto a one-way infinite tape of `{0,1,#}` cells (bits first, then
//! blanks), operate cellwise, and read the result back. For sparse inputs
//! every basis pair only touches finitely many cells, so the operations
//! here are computed exactly, pair by pair, without materializing tape
//! states. The dense materialization lives in [`crate::tape::oracle`] and
//! is used to cross-check this module.

use crate::bits::BitString;
use crate::error::TapeError;
use crate::operator::QOperator;
use crate::tape::IndexSet;
use crate::vector::QVector;

/// Symbol written at 1-based `cell` when `s` occupies the tape from cell 1:
/// `Some(bit)` within the string, `None` (blank) beyond it.
fn full_tape_symbol(s: &BitString, cell: usize) -> Option<bool> {
    if cell >= 1 && cell <= s.len() {
        Some(s.bit(cell - 1))
    } else {
        None
    }
}

/// True when the tape configurations of `s` and `t` agree on every cell
/// outside `set`. Blanks only match blanks, so this is the delta factor the
/// partial trace produces for a `|s⟩⟨t|` pair. Cells beyond both strings
/// are blank on both sides and never disagree.
fn tails_agree(s: &BitString, t: &BitString, set: &IndexSet) -> bool {
    let horizon = s.len().max(t.len());
    (1..=horizon)
        .filter(|&cell| !set.contains(cell))
        .all(|cell| full_tape_symbol(s, cell) == full_tape_symbol(t, cell))
}

/// Bits of `s` that fall on cells of `set` when `s` occupies the tape from
/// cell 1, read in increasing cell order. Because the occupied cells form
/// an initial segment of the tape, this restriction is automatically a
/// bit-string configuration, so stripping blanks is just dropping them.
fn restrict_string(s: &BitString, set: &IndexSet) -> BitString {
    BitString::from_bits(
        set.members_up_to(s.len())
            .into_iter()
            .map(|cell| s.bit(cell - 1)),
    )
}

/// The restriction ρ_I: embed on the tape, trace out the cells outside
/// `set`, project onto bit-string configurations and read back.
///
/// Per basis pair `|s⟩⟨t|` the partial trace contributes a 0/1 factor
/// (tail agreement), and the surviving cells of `set` are re-read as a
/// shorter string. For a density operator the result is again a density
/// operator; for general Hermitian input it stays Hermitian.
pub fn restrict(rho: &QOperator, set: &IndexSet) -> QOperator {
    QOperator::from_entries(rho.entries().filter_map(|((s, t), c)| {
        if tails_agree(s, t, set) {
            Some(((restrict_string(s, set), restrict_string(t, set)), c))
        } else {
            None
        }
    }))
}

/// The n-qubit prefix `ρ^n = ρ_[1,n]`.
pub fn prefix(rho: &QOperator, n: usize) -> QOperator {
    restrict(
        rho,
        &IndexSet::range(1, n).expect("prefix range is always valid"),
    )
}

/// Interleave `on_set` onto the cells of `set` and `on_complement` onto the
/// rest, then require the combined tape configuration to be a bit-string
/// configuration (all bits before all blanks). Returns the read-back string
/// or `None` when the combination leaves a gap, the projection that makes
/// products like `|11⟩ ⊗_{[3,4]} |0⟩` vanish.
fn combine_on(
    on_set: &BitString,
    set: &IndexSet,
    on_complement: &BitString,
    complement: &IndexSet,
) -> Option<BitString> {
    let total = on_set.len() + on_complement.len();
    let mut bits = Vec::with_capacity(total);
    for cell in 1..=total {
        let bit = if set.contains(cell) {
            let rank = set.rank_of(cell).expect("member has a rank");
            if rank < on_set.len() {
                on_set.bit(rank)
            } else {
                return None; // blank from the set side inside the bit region
            }
        } else {
            let rank = complement.rank_of(cell).expect("member has a rank");
            if rank < on_complement.len() {
                on_complement.bit(rank)
            } else {
                return None;
            }
        };
        bits.push(bit);
    }
    // `total` bits all landed within cells 1..=total, so nothing sits
    // beyond: the configuration is bits-then-blanks.
    Some(BitString::from_bits(bits))
}

fn check_capacity(needed: Option<usize>, set: &IndexSet) -> Result<(), TapeError> {
    let needed = needed.unwrap_or(0);
    match set.len() {
        Some(available) if needed > available => Err(TapeError::Capacity { needed, available }),
        _ => Ok(()),
    }
}

/// The indexed tensor product `A ⊗_I B`: place `A` on the cells of `set`,
/// `B` on the complement, and project the combined tape configuration back
/// onto the string space.
///
/// The projection may shrink or annihilate the result; that is the faithful
/// behaviour (such placements are physically unfeasible) and is reported
/// through the output norm rather than as an error. Only genuine capacity
/// violations fail, meaning a factor that cannot fit on its cells at all.
pub fn tensor_at(a: &QOperator, set: &IndexSet, b: &QOperator) -> Result<QOperator, TapeError> {
    let complement = set.complement();
    check_capacity(a.max_support_len(0.0), set)?;
    check_capacity(b.max_support_len(0.0), &complement)?;
    let mut out = QOperator::zero();
    for ((sa, ta), ca) in a.entries() {
        for ((sb, tb), cb) in b.entries() {
            let ket = combine_on(sa, set, sb, &complement);
            let bra = combine_on(ta, set, tb, &complement);
            if let (Some(ket), Some(bra)) = (ket, bra) {
                out.accumulate((ket, bra), ca * cb);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Vector-level indexed tensor product `|v⟩ ⊗_I |w⟩`.
pub fn tensor_at_vec(a: &QVector, set: &IndexSet, b: &QVector) -> Result<QVector, TapeError> {
    let complement = set.complement();
    let needed_a = a.terms().map(|(s, _)| s.len()).max();
    let needed_b = b.terms().map(|(s, _)| s.len()).max();
    check_capacity(needed_a, set)?;
    check_capacity(needed_b, &complement)?;
    let mut out = QVector::zero();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            if let Some(s) = combine_on(sa, set, sb, &complement) {
                out.accumulate(s, ca * cb);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// The tensor product `ρ ⊗ σ := ρ ⊗_{[1,ℓ(ρ)]} σ`, defined when ρ is a
/// length eigenstate. Rejects other first factors; the caller can fall
/// back to [`tensor_at`] with an explicit index set.
pub fn tensor(rho: &QOperator, sigma: &QOperator, tol: f64) -> Result<QOperator, TapeError> {
    if !rho.is_length_eigenstate(tol)? {
        return Err(TapeError::NotLengthEigenstate {
            lengths: rho.supported_lengths(tol),
        });
    }
    let len = rho.base_length(tol)?;
    tensor_at(
        rho,
        &IndexSet::range(1, len).expect("length range is valid"),
        sigma,
    )
}

/// Vector-level `|ψ⟩ ⊗ |φ⟩` for a length eigenstate ψ. Coincides with
/// [`concat()`](concat) exactly on such ψ.
pub fn tensor_vec(psi: &QVector, phi: &QVector, tol: f64) -> Result<QVector, TapeError> {
    if !psi.is_length_eigenstate(tol)? {
        return Err(TapeError::NotLengthEigenstate {
            lengths: psi.supported_lengths(tol),
        });
    }
    let len = psi.base_length(tol)?;
    tensor_at_vec(
        psi,
        &IndexSet::range(1, len).expect("length range is valid"),
        phi,
    )
}

/// Concatenation `|v ∘ w⟩ = Σ_{t,s} v_t·w_s |t∘s⟩`, the bilinear extension
/// of classical concatenation. Amplitudes accumulate when distinct pairs
/// collide on the same string, so the result may be unnormalized. That is
/// exactly the self-prefix phenomenon.
pub fn concat(v: &QVector, w: &QVector) -> QVector {
    let mut out = QVector::zero();
    for (t, a) in v.terms() {
        for (s, b) in w.terms() {
            out.accumulate(t.concat(s), a * b);
        }
    }
    out.prune();
    out
}

/// Concatenation with a classical suffix, `|v ∘ s⟩`. An isometry for every
/// fixed `s`, since distinct prefixes stay distinct.
pub fn concat_classical(v: &QVector, s: &BitString) -> QVector {
    QVector::from_terms(v.terms().map(|(t, a)| (t.concat(s), a)))
}
