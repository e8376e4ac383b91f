//! Block decoding, compiler equivalence and single-fault properties on
//! random logical circuits.

use proptest::prelude::*;

use iceberg_core::code::{compile_with, CompileOptions, EncodedCircuit, GadgetMode, Manifest, RejectReason};
use iceberg_core::noise::verify_fault_tolerance;
use iceberg_core::sim::Program;
use iceberg_core::{run_distribution, Circuit, Op};

/// A bare `m = 3` block measured directly: parity over all six bits, logical
/// `i` is data bit `i + 1` XOR the bottom bit.
fn bare_block() -> EncodedCircuit {
    let circuit = Circuit::from_ops(6, (0..6).map(Op::measz).collect()).unwrap();
    let manifest = Manifest {
        m: 3,
        mode: "none".into(),
        check_bits: vec![],
        parity_set: (0..6).collect(),
        logical_pairs: (1..5).map(|d| (d, 5)).collect(),
        outputs: (0..4).collect(),
    };
    EncodedCircuit::from_manifest(circuit, &manifest).unwrap()
}

#[test]
fn bare_block_decodes_codewords() {
    let ec = bare_block();
    for (shot, accepted, reason, logical) in [
        ("000000", true, RejectReason::Ok, 0b0000),
        ("111111", true, RejectReason::Ok, 0b0000),
        ("110011", true, RejectReason::Ok, 0b0110),
        ("100000", false, RejectReason::ParityOdd, 0b0000),
        ("011111", false, RejectReason::ParityOdd, 0b0000),
    ] {
        let d = ec.decode_str(shot).unwrap();
        assert_eq!((d.accepted, d.reason), (accepted, reason), "{shot}");
        if accepted {
            assert_eq!(d.logical, logical, "{shot}");
        }
    }
    assert!(ec.decode_str("0000").is_err());
}

#[test]
fn flag_bits_take_precedence_over_parity() {
    let logical = Circuit::parse("qubits 2\nmeasz 0\nmeasz 1").unwrap();
    let ec = compile_with(&logical, &CompileOptions::new(GadgetMode::Ft)).unwrap();
    let flag = ec.check_bits[0];
    let mut bits = vec!['0'; ec.num_bits()];
    bits[flag] = '1';
    bits[ec.parity_set[0]] = '1';
    let d = ec.decode_str(&bits.into_iter().collect::<String>()).unwrap();
    assert_eq!(d.reason, RejectReason::FlagFired);
}

#[test]
fn manifest_round_trip_decodes_the_same() {
    let logical = Circuit::parse("qubits 2\nh 0\ncx 0 1\nmeasz 0\nmeasz 1").unwrap();
    let ec = compile_with(&logical, &CompileOptions::new(GadgetMode::Ft)).unwrap();
    let json = serde_json::to_string(&ec.manifest()).unwrap();
    let back = EncodedCircuit::from_manifest(ec.circuit.clone(), &serde_json::from_str(&json).unwrap()).unwrap();
    let raw = Program::compile(&ec.circuit).unwrap().run::<f64>(&[]);
    assert_eq!(ec.accepted(&raw), back.accepted(&raw));
}

#[test]
fn manifest_out_of_range_is_rejected() {
    let circuit = Circuit::from_ops(2, vec![Op::measz(0), Op::measz(1)]).unwrap();
    let manifest = Manifest {
        m: 2,
        mode: "ft".into(),
        check_bits: vec![7],
        parity_set: vec![],
        logical_pairs: vec![],
        outputs: vec![],
    };
    assert!(EncodedCircuit::from_manifest(circuit, &manifest).is_err());
}

fn logical_op(q: usize) -> impl Strategy<Value = Op> {
    let one = (0..q, 0..5u8).prop_map(|(a, k)| match k {
        0 => Op::h(a),
        1 => Op::x(a),
        2 => Op::z(a),
        3 => Op::y(a),
        _ => Op::transversal_h(),
    });
    let two = (0..q, 1..q, any::<bool>()).prop_map(move |(a, d, cx)| {
        let b = (a + d) % q;
        if cx {
            Op::cx(a, b)
        } else {
            Op::cz(a, b)
        }
    });
    let three = (0..q).prop_map(move |a| Op::ccz(a, (a + 1) % q, (a + 2) % q));
    prop_oneof![3 => one, 2 => two, 1 => three]
}

/// Up to four logical qubits on an `m = 3` block, measured at the end.
fn logical_circuit(max_len: usize) -> impl Strategy<Value = Circuit> {
    (3..=4usize).prop_flat_map(move |q| {
        prop::collection::vec(logical_op(q), 0..=max_len).prop_map(move |mut ops| {
            ops.extend((0..q).map(Op::measz));
            Circuit::from_ops(q, ops).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn zero_noise_encoding_is_transparent(logical in logical_circuit(6), ft in any::<bool>()) {
        let mode = if ft { GadgetMode::Ft } else { GadgetMode::NonFt };
        let ec = compile_with(&logical, &CompileOptions::new(mode).with_m(3)).unwrap();
        let raw = Program::compile(&ec.circuit).unwrap().run::<f64>(&[]);
        let (accepted, rejected) = ec.accepted(&raw);
        prop_assert!(rejected < 1e-12);
        prop_assert!(accepted.max_abs_diff(&run_distribution(&logical).unwrap()) < 1e-9);
    }

    #[test]
    fn circuit_text_round_trips(logical in logical_circuit(10)) {
        prop_assert_eq!(Circuit::parse(&logical.to_text()).unwrap(), logical);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    /// No single fault anywhere in a fully FT compilation is accepted with
    /// an outcome the ideal circuit cannot produce.
    #[test]
    fn ft_compilation_tolerates_any_single_fault(logical in logical_circuit(3)) {
        let ec = compile_with(&logical, &CompileOptions::new(GadgetMode::Ft).with_m(3)).unwrap();
        let report = verify_fault_tolerance(&ec, &run_distribution(&logical).unwrap()).unwrap();
        prop_assert!(report.is_fault_tolerant(), "{}", logical.to_text());
    }
}
