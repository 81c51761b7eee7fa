//! Seeded random generators for vectors, operators, index sets and
//! unitaries. Used by the randomized diagnostic trials (`oracle` command)
//! and the property suites; all take a caller-supplied [`Rng`] so runs are
//! reproducible from a seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::operator::QOperator;
use crate::tape::IndexSet;
use crate::vector::QVector;

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_bitstring<R: Rng>(rng: &mut R, max_len: usize) -> BitString {
    let len = rng.random_range(0..=max_len);
    BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)))
}

/// Random normalized vector with at most `max_terms` distinct strings of
/// length at most `max_len`.
pub fn random_vector<R: Rng>(rng: &mut R, max_len: usize, max_terms: usize) -> QVector {
    let terms = rng.random_range(1..=max_terms.max(1));
    let mut v = QVector::zero();
    for _ in 0..terms {
        v = &v + &QVector::from_terms([(random_bitstring(rng, max_len), random_complex(rng))]);
    }
    loop {
        if let Some(normalized) = v.normalized() {
            return normalized;
        }
        // all amplitudes cancelled; retry with a fresh basis term
        v = QVector::from_terms([(random_bitstring(rng, max_len), random_complex(rng))]);
    }
}

/// Random length eigenstate: supported strings all share one length.
pub fn random_length_eigenstate<R: Rng>(rng: &mut R, max_len: usize, max_terms: usize) -> QVector {
    let len = rng.random_range(0..=max_len);
    let terms = rng.random_range(1..=max_terms.max(1));
    let mut v = QVector::zero();
    for _ in 0..terms {
        let s = BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)));
        v = &v + &QVector::from_terms([(s, random_complex(rng))]);
    }
    match v.normalized() {
        Some(n) => n,
        None => QVector::ket(BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)))),
    }
}

/// Random density operator: a convex mixture of one to `max_mix` random
/// pure states.
pub fn random_density<R: Rng>(
    rng: &mut R,
    max_len: usize,
    max_terms: usize,
    max_mix: usize,
) -> QOperator {
    let parts = rng.random_range(1..=max_mix.max(1));
    let weights: Vec<f64> = (0..parts).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = QOperator::zero();
    for w in weights {
        let pure = random_vector(rng, max_len, max_terms).outer();
        rho = &rho + &pure.scaled(Complex64::new(w / total, 0.0));
    }
    rho
}

/// Random Hermitian operator supported on strings of length at most
/// `max_len`, built as `(X + X†)/2` from random sparse `X`.
pub fn random_hermitian<R: Rng>(rng: &mut R, max_len: usize, max_terms: usize) -> QOperator {
    let terms = rng.random_range(1..=max_terms.max(1));
    let x = QOperator::from_entries((0..terms).map(|_| {
        (
            (
                random_bitstring(rng, max_len),
                random_bitstring(rng, max_len),
            ),
            random_complex(rng),
        )
    }));
    (&x + &x.adjoint()).scaled(Complex64::new(0.5, 0.0))
}

/// Random subset of `[1, max_cell]` (possibly empty).
pub fn random_finite_set<R: Rng>(rng: &mut R, max_cell: usize) -> IndexSet {
    IndexSet::finite((1..=max_cell).filter(|_| rng.random_bool(0.5)))
        .expect("distinct in-range indices")
}

/// Random index set within `[1, max_cell]`, cofinite one time in five.
pub fn random_index_set<R: Rng>(rng: &mut R, max_cell: usize) -> IndexSet {
    if rng.random_bool(0.2) {
        IndexSet::cofinite_excluding((1..=max_cell).filter(|_| rng.random_bool(0.5)))
            .expect("distinct in-range indices")
    } else {
        random_finite_set(rng, max_cell)
    }
}

/// Random `k × k` unitary, as the Q factor of a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, k: usize) -> DMatrix<Complex64> {
    loop {
        let m = DMatrix::from_fn(k, k, |_, _| random_complex(rng));
        let q = m.qr().q();
        // guard against a (measure-zero) rank-deficient draw
        let dev = (q.adjoint() * &q - DMatrix::identity(k, k)).norm();
        if dev < 1e-10 {
            return q;
        }
    }
}

/// Random complete classical prefix code with `leaves` code words, grown
/// by repeatedly splitting a random leaf of the code tree. The Kraft sum
/// of the result is exactly 1.
pub fn random_complete_prefix_code<R: Rng>(rng: &mut R, leaves: usize) -> Vec<BitString> {
    let mut code = vec![BitString::empty()];
    while code.len() < leaves.max(1) {
        let pick = rng.random_range(0..code.len());
        let leaf = code.swap_remove(pick);
        code.push(leaf.concat(&BitString::from_bits([false])));
        code.push(leaf.concat(&BitString::from_bits([true])));
    }
    code.sort();
    code
}
