use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateClass, GateKind, Op};
use crate::error::FaultError;
use crate::pauli::Pauli;
use crate::sim::Insertion;

/// One single-fault event: a Pauli right after an op, a flipped preparation,
/// or a flipped readout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaultLocation {
    pub op_index: usize,
    /// Qubits the fault acts on (the op's qubits, or one of them for a
    /// transversal-H marker).
    pub qubits: Vec<usize>,
    /// One Pauli per entry of `qubits`, not all identity. Empty for a
    /// readout flip.
    pub paulis: Vec<Pauli>,
}

impl FaultLocation {
    pub fn is_readout_flip(&self) -> bool {
        self.paulis.is_empty()
    }

    /// `"XZ"`-style label in qubit order, or `"M"` for a readout flip.
    pub fn label(&self) -> String {
        if self.is_readout_flip() {
            "M".to_string()
        } else {
            self.paulis.iter().map(|p| p.letter()).collect()
        }
    }

    pub fn insertions(&self) -> Vec<Insertion> {
        if self.is_readout_flip() {
            return vec![Insertion::ReadoutFlip { op_index: self.op_index }];
        }
        self.qubits
            .iter()
            .zip(&self.paulis)
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(&qubit, &pauli)| Insertion::Pauli { op_index: self.op_index, qubit, pauli })
            .collect()
    }
}

impl fmt::Display for FaultLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {} {} on {:?}", self.op_index, self.label(), self.qubits)
    }
}

const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn all_paulis(width: usize) -> impl Iterator<Item = Vec<Pauli>> {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (1..4usize.pow(width as u32)).map(move |mut code| {
        let mut v = Vec::with_capacity(width);
        for _ in 0..width {
            v.push(letters[code % 4]);
            code /= 4;
        }
        v
    })
}

/// Every single-fault location, ordered by op, then qubit, then Pauli.
///
/// Gates get every non-identity Pauli on their qubits (3, 15 or 63);
/// `prep0` gets an X flip, `prepplus` a Z flip, `measz` one readout flip.
pub fn enumerate_fault_locations(circuit: &Circuit) -> Vec<FaultLocation> {
    let n = circuit.num_qubits();
    let mut out = Vec::new();
    for (op_index, op) in circuit.ops().iter().enumerate() {
        match op.kind {
            GateKind::Prep0 | GateKind::PrepPlus => {
                let p = if op.kind == GateKind::Prep0 { Pauli::X } else { Pauli::Z };
                out.push(FaultLocation { op_index, qubits: op.qubits().to_vec(), paulis: vec![p] });
            }
            GateKind::MeasZ => out.push(FaultLocation { op_index, qubits: op.qubits().to_vec(), paulis: Vec::new() }),
            GateKind::TransversalH => {
                for q in op.support(n) {
                    for p in NON_IDENTITY {
                        out.push(FaultLocation { op_index, qubits: vec![q], paulis: vec![p] });
                    }
                }
            }
            _ => {
                for paulis in all_paulis(op.qubits().len()) {
                    out.push(FaultLocation { op_index, qubits: op.qubits().to_vec(), paulis });
                }
            }
        }
    }
    out
}

fn pauli_op(p: Pauli, q: usize) -> Option<Op> {
    match p {
        Pauli::I => None,
        Pauli::X => Some(Op::x(q)),
        Pauli::Y => Some(Op::y(q)),
        Pauli::Z => Some(Op::z(q)),
    }
}

/// Writes faults into the circuit as explicit ops. Readout flips become an
/// X right before the measurement, which is equivalent for a terminal MEASZ.
pub(crate) fn apply_locations(circuit: &Circuit, locations: &[&FaultLocation]) -> Circuit {
    let mut before: Vec<Vec<Op>> = vec![Vec::new(); circuit.ops().len()];
    let mut after: Vec<Vec<Op>> = vec![Vec::new(); circuit.ops().len()];
    for loc in locations {
        if loc.is_readout_flip() {
            before[loc.op_index].push(Op::x(loc.qubits[0]));
        } else {
            for (&q, &p) in loc.qubits.iter().zip(&loc.paulis) {
                after[loc.op_index].extend(pauli_op(p, q));
            }
        }
    }
    let mut ops = Vec::with_capacity(circuit.ops().len() + locations.len());
    for (i, op) in circuit.ops().iter().enumerate() {
        ops.append(&mut before[i]);
        ops.push(*op);
        ops.append(&mut after[i]);
    }
    Circuit::from_parts_unchecked(circuit.roles().to_vec(), ops)
}

/// `circuit` with the single fault `f` written in.
pub fn inject_fault(circuit: &Circuit, f: &FaultLocation) -> Result<Circuit, FaultError> {
    let stale = || FaultError::StaleLocation { op_index: f.op_index };
    let op = circuit.ops().get(f.op_index).ok_or_else(stale)?;
    let support = op.support(circuit.num_qubits());
    let fits = match op.kind.class() {
        GateClass::Measure => f.is_readout_flip() && f.qubits == op.qubits(),
        _ if op.kind == GateKind::TransversalH => f.qubits.len() == 1 && support.contains(&f.qubits[0]),
        _ => f.qubits == op.qubits() && f.paulis.len() == f.qubits.len(),
    };
    if !fits || (!f.is_readout_flip() && f.paulis.iter().all(|&p| p == Pauli::I)) {
        return Err(stale());
    }
    Ok(apply_locations(circuit, &[f]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_distribution, OutcomeDistribution, Program};

    fn parse(src: &str) -> Circuit {
        Circuit::parse(src).unwrap()
    }

    #[test]
    fn location_counts() {
        assert_eq!(enumerate_fault_locations(&parse("h 0")).len(), 3);
        assert_eq!(enumerate_fault_locations(&parse("cx 0 1")).len(), 15);
        assert_eq!(enumerate_fault_locations(&parse("ccz 0 1 2")).len(), 63);
        assert_eq!(enumerate_fault_locations(&parse("h 0\ncx 0 1\nmeasz 0\nmeasz 1")).len(), 20);
        assert_eq!(enumerate_fault_locations(&parse("prep0 0\nprepplus 1")).len(), 2);
    }

    #[test]
    fn locations_are_distinct_and_sorted() {
        let locs = enumerate_fault_locations(&parse("h 0\ncx 0 1\nccz 0 1 2\nmeasz 2"));
        let mut sorted = locs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), locs.len());
        assert!(locs.windows(2).all(|w| w[0].op_index <= w[1].op_index));
    }

    #[test]
    fn injected_paulis_after_h() {
        let c = parse("h 0\nmeasz 0");
        let half = OutcomeDistribution::from_pairs(&[("0", 0.5), ("1", 0.5)]);
        for loc in enumerate_fault_locations(&c).iter().filter(|l| l.op_index == 0) {
            let d = run_distribution(&inject_fault(&c, loc).unwrap()).unwrap();
            assert!(d.max_abs_diff(&half) < 1e-12, "{loc}");
        }
    }

    #[test]
    fn readout_flip_on_zero() {
        let c = parse("qubits 1\nmeasz 0");
        let flip = enumerate_fault_locations(&c).pop().unwrap();
        let d = run_distribution(&inject_fault(&c, &flip).unwrap()).unwrap();
        assert_eq!(d, OutcomeDistribution::from_pairs(&[("1", 1.0)]));
    }

    #[test]
    fn stale_location_is_rejected() {
        let c = parse("h 0\ncx 0 1");
        let loc = FaultLocation { op_index: 0, qubits: vec![0, 1], paulis: vec![Pauli::X, Pauli::X] };
        assert!(matches!(inject_fault(&c, &loc), Err(FaultError::StaleLocation { op_index: 0 })));
        let far = FaultLocation { op_index: 9, qubits: vec![0], paulis: vec![Pauli::X] };
        assert!(inject_fault(&c, &far).is_err());
    }

    #[test]
    fn insertions_match_injected_circuits() {
        let c = parse("h 0\ncx 0 1\nprep0 2\nccz 0 1 2\nh 2\nmeasz 0\nmeasz 1\nmeasz 2");
        let prog = Program::compile(&c).unwrap();
        let locs = enumerate_fault_locations(&c);
        let sets: Vec<_> = locs.iter().map(|l| l.insertions()).collect();
        let fast = prog.run_each::<f64>(&sets);
        for (loc, d) in locs.iter().zip(&fast) {
            let slow = run_distribution(&inject_fault(&c, loc).unwrap()).unwrap();
            assert!(slow.max_abs_diff(d) < 1e-12, "{loc}: {slow} vs {d}");
        }
    }
}
