//! Exact terminal-measurement simulation with qubit recycling.
//!
//! Measurements are terminal per qubit, so a qubit's MEASZ commutes back to
//! just after its last gate. The executor measures such qubits early,
//! splitting the run into weighted branches, and hands the freed slot to
//! the next qubit that gets allocated. The state vector therefore only spans
//! the largest set of simultaneously live qubits, not the whole register.

use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;

use super::dist::{shot_rng, Bits, OutcomeDistribution};
use super::state::kernels;
use crate::circuit::{Circuit, GateKind};
use crate::error::SimError;
use crate::pauli::Pauli;
use crate::Scalar;

/// Largest number of simultaneously live qubits the engine will allocate.
pub const QUBIT_CAP: usize = 20;

/// Branches lighter than this are dropped.
const BRANCH_PRUNE: f64 = 1e-15;

/// A Pauli inserted right after a given op (or a readout flip).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Insertion {
    Pauli { op_index: usize, qubit: usize, pauli: Pauli },
    /// Flips the recorded outcome of the MEASZ at `op_index`.
    ReadoutFlip { op_index: usize },
}

impl Insertion {
    pub fn op_index(&self) -> usize {
        match *self {
            Insertion::Pauli { op_index, .. } | Insertion::ReadoutFlip { op_index } => op_index,
        }
    }
}

#[derive(Clone, Debug)]
enum Action {
    None,
    Gate { kind: GateKind, slots: [usize; 3] },
    AllH(Vec<usize>),
}

#[derive(Clone, Debug)]
struct Step {
    action: Action,
    /// (qubit, slot) for every qubit the op touches.
    slots: Vec<(usize, usize)>,
    /// Slots measured (and freed) after this op, with their bit if recorded.
    releases: Vec<(usize, Option<usize>)>,
}

/// A circuit lowered onto a fixed pool of state-vector slots.
#[derive(Clone, Debug)]
pub struct Program {
    num_bits: usize,
    width: usize,
    steps: Vec<Step>,
    /// Slots still live at the end that carry a recorded bit.
    final_reads: Vec<(usize, usize)>,
    /// Measured-bit index of each MEASZ op.
    bit_of_op: HashMap<usize, usize>,
}

impl Program {
    pub fn compile(circuit: &Circuit) -> Result<Program, SimError> {
        Program::compile_with_cap(circuit, QUBIT_CAP)
    }

    pub fn compile_with_cap(circuit: &Circuit, cap: usize) -> Result<Program, SimError> {
        if let Some(v) = circuit.validate().into_iter().next() {
            return Err(SimError::InvalidCircuit(v.to_string()));
        }
        let n = circuit.num_qubits();
        let ops = circuit.ops();
        let num_bits = circuit.num_measurements();
        if num_bits > 128 {
            return Err(SimError::TooManyMeasurements(num_bits));
        }

        let mut first_op = vec![None; n];
        let mut last_gate = vec![None; n];
        let mut bit_of_qubit = vec![None; n];
        let mut bit_of_op = HashMap::new();
        let mut next_bit = 0;
        for (i, op) in ops.iter().enumerate() {
            for q in op.support(n) {
                if op.kind == GateKind::MeasZ {
                    bit_of_qubit[q] = Some(next_bit);
                    bit_of_op.insert(i, next_bit);
                    next_bit += 1;
                } else {
                    first_op[q].get_or_insert(i);
                    last_gate[q] = Some(i);
                }
            }
        }
        let last_alloc = first_op.iter().flatten().copied().max();

        let mut slot_of = vec![usize::MAX; n];
        let mut free: Vec<usize> = Vec::new();
        let mut width = 0;
        let mut live = 0;
        let mut steps = Vec::with_capacity(ops.len());
        for (i, op) in ops.iter().enumerate() {
            let mut step = Step { action: Action::None, slots: Vec::new(), releases: Vec::new() };
            if op.kind == GateKind::MeasZ {
                steps.push(step);
                continue;
            }
            for q in op.support(n) {
                if first_op[q] == Some(i) {
                    let s = if let Some(pos) = (0..free.len()).min_by_key(|&j| free[j]) {
                        free.swap_remove(pos)
                    } else {
                        width += 1;
                        width - 1
                    };
                    slot_of[q] = s;
                    live += 1;
                    if live > cap {
                        return Err(SimError::QubitCap { needed: live, cap });
                    }
                }
                step.slots.push((q, slot_of[q]));
            }
            step.action = match op.kind {
                GateKind::Prep0 => Action::None,
                GateKind::PrepPlus => Action::Gate { kind: GateKind::H, slots: [slot_of[op.qubits()[0]], 0, 0] },
                GateKind::TransversalH => Action::AllH(step.slots.iter().map(|&(_, s)| s).collect()),
                kind => {
                    let mut slots = [0; 3];
                    for (j, &q) in op.qubits().iter().enumerate() {
                        slots[j] = slot_of[q];
                    }
                    Action::Gate { kind, slots }
                }
            };
            for q in op.support(n) {
                if last_gate[q] == Some(i) && last_alloc.is_some_and(|a| i < a) {
                    step.releases.push((slot_of[q], bit_of_qubit[q]));
                    free.push(slot_of[q]);
                    slot_of[q] = usize::MAX;
                    live -= 1;
                }
            }
            steps.push(step);
        }
        let final_reads = (0..n)
            .filter(|&q| slot_of[q] != usize::MAX)
            .filter_map(|q| bit_of_qubit[q].map(|b| (slot_of[q], b)))
            .collect();
        Ok(Program { num_bits, width, steps, final_reads, bit_of_op })
    }

    /// Size of the state vector actually simulated, in qubits.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    /// Exact outcome distribution with the given insertions applied.
    /// Insertions must be sorted by op index.
    pub fn run<T: Scalar>(&self, insertions: &[Insertion]) -> OutcomeDistribution {
        let mut run = Run::<T>::new(self.width);
        let mut cursor = 0;
        for i in 0..self.steps.len() {
            let end = cursor + insertions[cursor..].iter().take_while(|f| f.op_index() == i).count();
            self.advance(&mut run, i, &insertions[cursor..end]);
            cursor = end;
        }
        debug_assert_eq!(cursor, insertions.len(), "unsorted or stale insertions");
        self.collect(run)
    }

    /// One distribution per fault, in input order. Each fault is a
    /// non-empty set of insertions at a single op; the shared prefix before
    /// that op is simulated once.
    pub fn run_each<T: Scalar>(&self, faults: &[Vec<Insertion>]) -> Vec<OutcomeDistribution> {
        let at = |j: usize| {
            let i = faults[j][0].op_index();
            assert!(faults[j].iter().all(|f| f.op_index() == i), "fault spans several ops");
            i
        };
        let mut order: Vec<usize> = (0..faults.len()).collect();
        order.sort_by_key(|&j| at(j));
        let mut out = vec![None; faults.len()];
        let mut run = Run::<T>::new(self.width);
        let mut next = 0;
        for i in 0..self.steps.len() {
            let group_end = next + order[next..].iter().take_while(|&&j| at(j) == i).count();
            if group_end > next {
                let group = &order[next..group_end];
                let dists: Vec<OutcomeDistribution> = group
                    .par_iter()
                    .map(|&j| {
                        let mut r = run.clone();
                        self.advance(&mut r, i, &faults[j]);
                        for k in i + 1..self.steps.len() {
                            self.advance(&mut r, k, &[]);
                        }
                        self.collect(r)
                    })
                    .collect();
                for (&j, d) in group.iter().zip(dists) {
                    out[j] = Some(d);
                }
                next = group_end;
            }
            self.advance(&mut run, i, &[]);
        }
        out.into_iter().map(|d| d.expect("fault op index out of range")).collect()
    }

    fn advance<T: Scalar>(&self, run: &mut Run<T>, i: usize, insertions: &[Insertion]) {
        let step = &self.steps[i];
        match &step.action {
            Action::None => {}
            Action::Gate { kind, slots } => {
                for b in &mut run.branches {
                    b.gate(*kind, slots);
                }
            }
            Action::AllH(slots) => {
                for b in &mut run.branches {
                    for &s in slots {
                        kernels::h(&mut b.amps, s);
                    }
                }
            }
        }
        for f in insertions {
            match *f {
                Insertion::Pauli { qubit, pauli, .. } => {
                    let slot = step
                        .slots
                        .iter()
                        .find(|(q, _)| *q == qubit)
                        .map(|&(_, s)| s)
                        .expect("fault on a qubit the op does not touch");
                    for b in &mut run.branches {
                        b.pauli(slot, pauli);
                    }
                }
                Insertion::ReadoutFlip { op_index } => {
                    run.flip ^= 1 << self.bit_of_op[&op_index];
                }
            }
        }
        for &(slot, bit) in &step.releases {
            run.branches = std::mem::take(&mut run.branches)
                .into_iter()
                .flat_map(|b| b.measure(slot, bit))
                .collect();
        }
    }

    fn collect<T: Scalar>(&self, run: Run<T>) -> OutcomeDistribution {
        let mut acc: HashMap<Bits, f64> = HashMap::new();
        for b in &run.branches {
            for (idx, a) in b.amps.iter().enumerate() {
                let p = a.norm_sqr().to_f64().unwrap();
                if p == 0.0 {
                    continue;
                }
                let mut key = b.bits;
                for &(slot, bit) in &self.final_reads {
                    key |= ((idx >> slot & 1) as Bits) << bit;
                }
                *acc.entry(key ^ run.flip).or_insert(0.0) += p;
            }
        }
        let dist = OutcomeDistribution::from_weights(self.num_bits, acc);
        let total = dist.total();
        let tol = f64::max(1e-10, 1e3 * T::epsilon().to_f64().unwrap());
        assert!((total - 1.0).abs() < tol, "distribution mass drifted to {total}");
        dist.normalized()
    }
}

#[derive(Clone)]
struct Run<T: Scalar> {
    branches: Vec<Branch<T>>,
    flip: Bits,
}

impl<T: Scalar> Run<T> {
    fn new(width: usize) -> Run<T> {
        Run { branches: vec![Branch::new(width)], flip: 0 }
    }
}

#[derive(Clone)]
struct Branch<T: Scalar> {
    amps: Vec<Complex<T>>,
    bits: Bits,
}

impl<T: Scalar> Branch<T> {
    fn new(width: usize) -> Branch<T> {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << width];
        amps[0] = Complex::new(T::one(), T::zero());
        Branch { amps, bits: 0 }
    }

    fn gate(&mut self, kind: GateKind, s: &[usize; 3]) {
        let v = &mut self.amps;
        match kind {
            GateKind::H => kernels::h(v, s[0]),
            GateKind::X => kernels::x(v, s[0]),
            GateKind::Y => kernels::y(v, s[0]),
            GateKind::Z => kernels::z(v, s[0]),
            GateKind::S => kernels::s(v, s[0]),
            GateKind::CX => kernels::cx(v, s[0], s[1]),
            GateKind::CZ => kernels::cz(v, s[0], s[1]),
            GateKind::CCZ => kernels::ccz(v, s[0], s[1], s[2]),
            other => unreachable!("{other} lowered before execution"),
        }
    }

    fn pauli(&mut self, slot: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => kernels::x(&mut self.amps, slot),
            Pauli::Y => kernels::y(&mut self.amps, slot),
            Pauli::Z => kernels::z(&mut self.amps, slot),
        }
    }

    /// Projects `slot` onto each outcome, resets it to |0⟩ and records the bit.
    fn measure(mut self, slot: usize, bit: Option<usize>) -> Vec<Branch<T>> {
        let m = 1usize << slot;
        let (mut p0, mut p1) = (0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr().to_f64().unwrap();
            if i & m == 0 {
                p0 += p;
            } else {
                p1 += p;
            }
        }
        let zero = Complex::new(T::zero(), T::zero());
        let keep0 = p0 > BRANCH_PRUNE;
        let keep1 = p1 > BRANCH_PRUNE;
        let mut one = match (keep0, keep1) {
            (true, true) => Some(Branch { amps: self.amps.clone(), bits: self.bits }),
            (false, true) => {
                let only = Branch { amps: std::mem::take(&mut self.amps), bits: self.bits };
                return only.collapse_one(slot, bit).into_iter().collect();
            }
            (true, false) => None,
            (false, false) => return Vec::new(),
        };
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *a = zero;
            }
        }
        let mut out = vec![self];
        if let Some(b) = one.take() {
            out.extend(b.collapse_one(slot, bit));
        }
        out
    }

    fn collapse_one(mut self, slot: usize, bit: Option<usize>) -> Option<Branch<T>> {
        let m = 1usize << slot;
        let zero = Complex::new(T::zero(), T::zero());
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps[i] = self.amps[i | m];
                self.amps[i | m] = zero;
            }
        }
        if let Some(b) = bit {
            self.bits |= 1 << b;
        }
        Some(self)
    }
}

/// Exact distribution over the circuit's MEASZ bits, in MEASZ order.
pub fn run_distribution(circuit: &Circuit) -> Result<OutcomeDistribution, SimError> {
    Ok(Program::compile(circuit)?.run::<f64>(&[]))
}

/// Same as [`run_distribution`] at a caller-chosen precision.
pub fn run_distribution_with<T: Scalar>(circuit: &Circuit) -> Result<OutcomeDistribution, SimError> {
    Ok(Program::compile(circuit)?.run::<T>(&[]))
}

/// `shots` i.i.d. samples from the exact distribution; shot `i` draws from
/// its own stream of `seed`, so the list is reproducible.
pub fn sample_shots(circuit: &Circuit, shots: usize, seed: u64) -> Result<Vec<Bits>, SimError> {
    let dist = run_distribution(circuit)?;
    let sampler = dist.sampler();
    Ok((0..shots)
        .map(|i| {
            let mut rng = shot_rng(seed, i as u64);
            sampler.sample(&mut rng)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Op;
    use crate::sim::dist::bits_to_string;

    fn dist(src: &str) -> OutcomeDistribution {
        run_distribution(&Circuit::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn bell_distribution() {
        let d = dist("h 0\ncx 0 1\nmeasz 0\nmeasz 1");
        assert_eq!(d.len(), 2);
        assert!((d.prob("00") - 0.5).abs() < 1e-12);
        assert!((d.prob("11") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn xx_toffoli_is_deterministic() {
        let d = dist("x 0\nx 1\nh 2\nccz 0 1 2\nh 2\nmeasz 0\nmeasz 1\nmeasz 2");
        assert_eq!(d, OutcomeDistribution::from_pairs(&[("111", 1.0)]));
    }

    #[test]
    fn unmeasured_qubits_are_marginalized() {
        let d = dist("h 0\ncx 0 1\nmeasz 1");
        assert!((d.prob("0") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn untouched_measured_qubit_reads_zero() {
        let d = dist("qubits 2\nx 0\nmeasz 1\nmeasz 0");
        assert_eq!(d, OutcomeDistribution::from_pairs(&[("01", 1.0)]));
    }

    #[test]
    fn recycling_matches_dense_simulation() {
        // ancillas 2 and 3 finish before 4 and 5 start, so slots get reused
        let src = "h 0\ncx 0 1\nprep0 2\ncx 0 2\ncx 1 2\nprepplus 3\ncx 3 0\ncx 3 1\nh 3\n\
                   prep0 4\ncx 1 4\nh 0\nprep0 5\nccz 0 1 5\nh 5\n\
                   measz 0\nmeasz 1\nmeasz 2\nmeasz 3\nmeasz 4\nmeasz 5";
        let c = Circuit::parse(src).unwrap();
        let prog = Program::compile(&c).unwrap();
        assert!(prog.width() < c.num_qubits());
        let d = prog.run::<f64>(&[]);
        let s = crate::State::from_circuit(&c).unwrap();
        let mq = c.measured_qubits();
        let mut dense = HashMap::new();
        for idx in 0..1usize << c.num_qubits() {
            let mut key: Bits = 0;
            for (bit, &q) in mq.iter().enumerate() {
                key |= ((idx >> q & 1) as Bits) << bit;
            }
            *dense.entry(key).or_insert(0.0) += s.probability(idx);
        }
        let dense = OutcomeDistribution::from_weights(c.num_measurements(), dense);
        assert!(d.max_abs_diff(&dense) < 1e-12, "{d} vs {dense}");
    }

    #[test]
    fn cap_is_enforced_on_live_width() {
        let mut c = Circuit::new(4);
        for q in 0..4 {
            c.push(Op::h(q)).unwrap();
        }
        // every qubit is touched again after all four are allocated
        for q in 0..4 {
            c.push(Op::cx(q, (q + 1) % 4)).unwrap();
        }
        assert_eq!(
            Program::compile_with_cap(&c, 3).unwrap_err(),
            SimError::QubitCap { needed: 4, cap: 3 }
        );
    }

    #[test]
    fn readout_flip_and_pauli_insertions() {
        let c = Circuit::parse("prep0 0\nmeasz 0").unwrap();
        let prog = Program::compile(&c).unwrap();
        let d = prog.run::<f64>(&[Insertion::ReadoutFlip { op_index: 1 }]);
        assert_eq!(bits_to_string(d.support().next().unwrap(), 1), "1");
        let d = prog.run::<f64>(&[Insertion::Pauli { op_index: 0, qubit: 0, pauli: Pauli::Y }]);
        assert_eq!(d, OutcomeDistribution::from_pairs(&[("1", 1.0)]));
    }

    #[test]
    fn samples_are_reproducible_and_in_support() {
        let c = Circuit::parse("h 0\ncx 0 1\nmeasz 0\nmeasz 1").unwrap();
        let a = sample_shots(&c, 2056, 42).unwrap();
        let b = sample_shots(&c, 2056, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&s| s == 0b00 || s == 0b11));
    }

    #[test]
    fn bell_frequency_within_binomial_bound() {
        let c = Circuit::parse("h 0\ncx 0 1\nmeasz 0\nmeasz 1").unwrap();
        let shots = 100_000;
        let zeros = sample_shots(&c, shots, 7).unwrap().iter().filter(|&&s| s == 0).count();
        // 5 sigma of Binomial(1e5, 0.5) is ~0.0079
        assert!((zeros as f64 / shots as f64 - 0.5).abs() < 0.01);
    }
}
