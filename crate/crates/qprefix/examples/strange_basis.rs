//! Tour of the library on a basis with no length-eigenstate structure:
//! prefix-freeness, indistinguishable prefixes, and the Kraft chain.
//!
//! ```sh
//! cargo run -p qprefix --example strange_basis
//! ```

use num_complex::Complex64;
use qprefix::analysis::{
    check_prefix_free_complete, distinguishability, kraft_report, CodeSet, Condition,
};
use qprefix::bits::bitstring;
use qprefix::tape::{concat_classical, prefix, tensor_at_vec, IndexSet};
use qprefix::{QVector, DEFAULT_TOLERANCE};

fn main() {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let e1 = QVector::from_terms([(bitstring("1"), h), (bitstring("01"), h)]);
    let e2 = QVector::from_terms([(bitstring("10"), h), (bitstring("010"), -h)]);
    let e3 = QVector::ket(bitstring("00"));

    // e1 mixes lengths 1 and 2, yet the pair {e1, e2} is prefix-free
    let pair = CodeSet::new(vec![e1.clone(), e2.clone()]).unwrap();
    for condition in Condition::ALL {
        let verdict = check_prefix_free_complete(&pair, condition, DEFAULT_TOLERANCE);
        println!(
            "condition {}: {}",
            condition.number(),
            if verdict.is_prefix_free { "prefix-free" } else { "FAILED" }
        );
    }

    // in particular the would-be witness cancels:
    let overlap = e2.inner(&concat_classical(&e1, &bitstring("0")));
    println!("<e2|e1 o 0> = {overlap}");

    // but prefixes cannot tell the two apart with certainty
    let d = distinguishability(&e2, &e1, DEFAULT_TOLERANCE).unwrap();
    println!("<e1| (e2 restricted to 2 qubits) |e1> = {d}");
    println!("2-qubit prefix of e2: {}", prefix(&e2.outer(), 2));

    // a state that IS a prefix of itself, for contrast
    let shallow = QVector::from_terms([(bitstring(""), h), (bitstring("0"), h)]);
    let own = CodeSet::new(vec![shallow.clone()]).unwrap();
    let verdict = check_prefix_free_complete(&own, Condition::ClassicalSuffix, DEFAULT_TOLERANCE);
    let witness = verdict.witness.expect("self-prefix witness");
    println!(
        "(|e>+|0>)/sqrt(2) overlaps itself shifted by {}: {}",
        witness.suffix, witness.overlap
    );

    // placing factors on detached cells loses norm instead of erroring
    let lost = tensor_at_vec(
        &QVector::ket(bitstring("11")),
        &IndexSet::range(3, 4).unwrap(),
        &QVector::ket(bitstring("0")),
    )
    .unwrap();
    println!("|11> placed on cells [3,4] next to |0>: norm {}", lost.norm());

    // the Kraft chain for the full triple
    let code = CodeSet::with_labels(
        vec![e1, e2, e3],
        vec!["e1".into(), "e2".into(), "e3".into()],
    )
    .unwrap();
    let report = kraft_report(&code, DEFAULT_TOLERANCE).unwrap();
    println!(
        "kraft: {} <= {} <= {} <= 1 (chain holds: {}, all length eigenstates: {})",
        report.sum_base, report.sum_avg, report.trace_term, report.chain_holds, report.equality_case
    );
}
