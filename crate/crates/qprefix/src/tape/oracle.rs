//! Brute-force dense oracle for restrictions.
//!
//! Materializes an operator as a dense `3^N × 3^N` matrix over explicit
//! tape configurations, performs the partial trace as a literal index
//! contraction, applies the explicit projector onto bit-string
//! configurations, and reads the result back. Every step is independent of
//! the sparse pairwise rules in [`crate::tape::ops`], which is the point:
//! the two paths are compared against each other in tests and by the
//! `oracle` CLI command.

use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::TapeError;
use crate::operator::QOperator;
use crate::tape::state::Cell;
use crate::tape::IndexSet;
use crate::PRUNE_TOLERANCE;

/// Dense dimension guard: `3^8 = 6561` is the largest window whose square
/// matrix is still reasonable to allocate.
pub const ORACLE_MAX_CELLS: usize = 8;

fn cell_digit(cell: Cell) -> usize {
    match cell {
        Cell::Zero => 0,
        Cell::One => 1,
        Cell::Blank => 2,
    }
}

/// Dense index of the full-tape configuration of `s` within `cell_count`
/// cells: bits from cell 1, blanks after.
fn encode_string(s: &BitString, cell_count: usize) -> Result<usize, TapeError> {
    if s.len() > cell_count {
        return Err(TapeError::Capacity {
            needed: s.len(),
            available: cell_count,
        });
    }
    let mut index = 0usize;
    let mut scale = 1usize;
    for cell in 0..cell_count {
        let digit = if cell < s.len() {
            cell_digit(Cell::from_bit(s.bit(cell)))
        } else {
            cell_digit(Cell::Blank)
        };
        index += digit * scale;
        scale *= 3;
    }
    Ok(index)
}

/// Compose a dense index from digits assigned to an explicit list of
/// (0-based) cell positions.
fn compose_index(positions: &[usize], mut digits_index: usize, pow3: &[usize]) -> usize {
    let mut index = 0usize;
    for &pos in positions {
        index += (digits_index % 3) * pow3[pos];
        digits_index /= 3;
    }
    index
}

fn is_bit_string_digits(mut digits_index: usize, count: usize) -> bool {
    let mut seen_blank = false;
    for _ in 0..count {
        let digit = digits_index % 3;
        digits_index /= 3;
        if digit == 2 {
            seen_blank = true;
        } else if seen_blank {
            return false;
        }
    }
    true
}

fn strip_digits(mut digits_index: usize, count: usize) -> BitString {
    let mut bits = Vec::new();
    for _ in 0..count {
        match digits_index % 3 {
            0 => bits.push(false),
            1 => bits.push(true),
            _ => break,
        }
        digits_index /= 3;
    }
    BitString::from_bits(bits)
}

/// Literal dense implementation of the restriction ρ_I on a window of
/// `cell_count` cells. Guarded by [`ORACLE_MAX_CELLS`]; the window must be
/// at least as long as every supported string.
pub fn oracle_restrict(
    rho: &QOperator,
    set: &IndexSet,
    cell_count: usize,
) -> Result<QOperator, TapeError> {
    if cell_count > ORACLE_MAX_CELLS {
        return Err(TapeError::OracleGuard {
            cells: cell_count,
            max: ORACLE_MAX_CELLS,
        });
    }
    let dim = 3usize.pow(cell_count as u32);
    let pow3: Vec<usize> = (0..cell_count).map(|k| 3usize.pow(k as u32)).collect();

    // 1. Materialize the full-tape density matrix.
    let mut dense = vec![Complex64::ZERO; dim * dim];
    for ((s, t), c) in rho.entries() {
        let i = encode_string(s, cell_count)?;
        let j = encode_string(t, cell_count)?;
        dense[i * dim + j] += c;
    }

    // 2. Partial trace over the cells outside `set`, as an explicit
    //    contraction over the traced-out digits.
    let kept: Vec<usize> = set
        .members_up_to(cell_count)
        .into_iter()
        .map(|cell| cell - 1)
        .collect();
    let traced: Vec<usize> = (0..cell_count).filter(|p| !kept.contains(p)).collect();
    let kept_dim = 3usize.pow(kept.len() as u32);
    let traced_dim = 3usize.pow(traced.len() as u32);

    let mut reduced = vec![Complex64::ZERO; kept_dim * kept_dim];
    for a in 0..kept_dim {
        for b in 0..kept_dim {
            let mut acc = Complex64::ZERO;
            for k in 0..traced_dim {
                let row = compose_index(&kept, a, &pow3) + compose_index(&traced, k, &pow3);
                let col = compose_index(&kept, b, &pow3) + compose_index(&traced, k, &pow3);
                acc += dense[row * dim + col];
            }
            reduced[a * kept_dim + b] = acc;
        }
    }

    // 3. Explicit projector onto bit-string configurations of the kept
    //    cells: zero every row and column outside the subspace.
    let keep: Vec<bool> = (0..kept_dim)
        .map(|a| is_bit_string_digits(a, kept.len()))
        .collect();
    for a in 0..kept_dim {
        for b in 0..kept_dim {
            if !(keep[a] && keep[b]) {
                reduced[a * kept_dim + b] = Complex64::ZERO;
            }
        }
    }

    // 4. Read back to the string space.
    let mut out = QOperator::zero();
    for a in 0..kept_dim {
        for b in 0..kept_dim {
            let c = reduced[a * kept_dim + b];
            if c.norm() > PRUNE_TOLERANCE {
                out.accumulate(
                    (strip_digits(a, kept.len()), strip_digits(b, kept.len())),
                    c,
                );
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Maximum entrywise deviation between the sparse restriction and the
/// dense oracle on the same input.
pub fn restrict_oracle_deviation(
    rho: &QOperator,
    set: &IndexSet,
    cell_count: usize,
) -> Result<f64, TapeError> {
    let sparse = crate::tape::restrict(rho, set);
    let dense = oracle_restrict(rho, set, cell_count)?;
    Ok(sparse.max_deviation(&dense))
}

/// Deviation `|Tr(ρ_I A) − Tr(ρ · A ⊗_I 1)|` for the duality between
/// restriction and the indexed tensor product. The identity factor is
/// truncated at `identity_len`, which is sound as soon as it reaches the
/// base length of ρ: longer diagonal strings cannot meet ρ's support.
pub fn duality_deviation(
    rho: &QOperator,
    a: &QOperator,
    set: &IndexSet,
    identity_len: usize,
) -> Result<f64, TapeError> {
    let restricted = crate::tape::restrict(rho, set);
    let lhs = restricted.trace_product(a);
    let extended = crate::tape::tensor_at(a, set, &QOperator::identity_up_to(identity_len))?;
    let rhs = rho.trace_product(&extended);
    Ok((lhs - rhs).norm())
}
