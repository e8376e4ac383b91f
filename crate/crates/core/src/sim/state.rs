use num_complex::Complex;

use crate::circuit::{Circuit, GateKind, Op};
use crate::error::SimError;
use crate::pauli::{Pauli, PauliString};
use crate::Scalar;

/// Dense amplitude vector. Qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Scalar> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

fn c<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re).unwrap(), T::from_f64(im).unwrap())
}

impl<T: Scalar> StateVector<T> {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> StateVector<T> {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amps[0] = Complex::new(T::one(), T::zero());
        StateVector { num_qubits, amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> StateVector<T> {
        let mut s = StateVector::zero(num_qubits);
        s.amps[0] = Complex::new(T::zero(), T::zero());
        s.amps[index] = Complex::new(T::one(), T::zero());
        s
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> StateVector<T> {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        let num_qubits = amps.len().trailing_zeros() as usize;
        StateVector { num_qubits, amps }
    }

    /// Pre-measurement state of a circuit run from `|0…0⟩`; MEASZ ops are
    /// skipped since measurements are terminal.
    pub fn from_circuit(circuit: &Circuit) -> Result<StateVector<T>, SimError> {
        let mut s = StateVector::zero(circuit.num_qubits());
        for op in circuit.ops() {
            match op.kind {
                GateKind::MeasZ | GateKind::Prep0 => {}
                GateKind::PrepPlus => s.apply(&Op::h(op.qubits()[0]))?,
                _ => s.apply(op)?,
            }
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().to_f64().unwrap()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr().to_f64().unwrap()
    }

    /// Applies one unitary op in place.
    pub fn apply(&mut self, op: &Op) -> Result<(), SimError> {
        for &q in op.qubits() {
            if q >= self.num_qubits {
                return Err(SimError::IndexOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
        }
        let q = op.qubits();
        match op.kind {
            GateKind::H => kernels::h(&mut self.amps, q[0]),
            GateKind::X => kernels::x(&mut self.amps, q[0]),
            GateKind::Y => kernels::y(&mut self.amps, q[0]),
            GateKind::Z => kernels::z(&mut self.amps, q[0]),
            GateKind::S => kernels::s(&mut self.amps, q[0]),
            GateKind::CX => kernels::cx(&mut self.amps, q[0], q[1]),
            GateKind::CZ => kernels::cz(&mut self.amps, q[0], q[1]),
            GateKind::CCZ => kernels::ccz(&mut self.amps, q[0], q[1], q[2]),
            GateKind::TransversalH => {
                for q in 0..self.num_qubits {
                    kernels::h(&mut self.amps, q);
                }
            }
            k @ (GateKind::Prep0 | GateKind::PrepPlus | GateKind::MeasZ) => {
                return Err(SimError::NotUnitary(k))
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => kernels::x(&mut self.amps, q),
            Pauli::Y => kernels::y(&mut self.amps, q),
            Pauli::Z => kernels::z(&mut self.amps, q),
        }
    }

    /// `⟨ψ|P|ψ⟩` for a Hermitian Pauli string.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64, SimError> {
        if p.len() != self.num_qubits {
            return Err(SimError::LengthMismatch { expected: self.num_qubits, found: p.len() });
        }
        if !p.is_hermitian() {
            return Err(SimError::NonHermitian);
        }
        let mut applied = self.clone();
        for (q, &letter) in p.letters().iter().enumerate() {
            applied.apply_pauli(q, letter);
        }
        let mut acc = Complex::new(0.0f64, 0.0);
        for (a, b) in self.amps.iter().zip(&applied.amps) {
            let (a, b) = (to_c64(*a), to_c64(*b));
            acc += a.conj() * b;
        }
        let sign = if p.phase().power() == 2 { -1.0 } else { 1.0 };
        Ok(sign * acc.re)
    }

    /// `|⟨a|b⟩|²`.
    pub fn fidelity(&self, other: &StateVector<T>) -> Result<f64, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::LengthMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        let mut acc = Complex::new(0.0f64, 0.0);
        for (a, b) in self.amps.iter().zip(&other.amps) {
            acc += to_c64(*a).conj() * to_c64(*b);
        }
        Ok(acc.norm_sqr())
    }

    /// Tensor product `self ⊗ other`, with `other`'s qubits placed above.
    pub fn tensor(&self, other: &StateVector<T>) -> StateVector<T> {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(*a * *b);
            }
        }
        StateVector { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    /// Single-qubit product state from per-qubit `(α, β)` pairs.
    pub fn product(qubits: &[(Complex<T>, Complex<T>)]) -> StateVector<T> {
        let mut s = StateVector { num_qubits: 0, amps: vec![Complex::new(T::one(), T::zero())] };
        for &(a, b) in qubits {
            s = s.tensor(&StateVector { num_qubits: 1, amps: vec![a, b] });
        }
        s
    }
}

/// Free-function form of [`StateVector::apply`].
pub fn apply_gate<T: Scalar>(mut state: StateVector<T>, op: &Op) -> Result<StateVector<T>, SimError> {
    state.apply(op)?;
    Ok(state)
}

/// Free-function form of [`StateVector::pauli_expectation`].
pub fn pauli_expectation<T: Scalar>(state: &StateVector<T>, p: &PauliString) -> Result<f64, SimError> {
    state.pauli_expectation(p)
}

/// Free-function form of [`StateVector::fidelity`].
pub fn statevector_fidelity<T: Scalar>(a: &StateVector<T>, b: &StateVector<T>) -> Result<f64, SimError> {
    a.fidelity(b)
}

fn to_c64<T: Scalar>(a: Complex<T>) -> Complex<f64> {
    Complex::new(a.re.to_f64().unwrap(), a.im.to_f64().unwrap())
}

pub(crate) mod kernels {
    use super::c;
    use crate::Scalar;
    use num_complex::Complex;

    #[inline]
    pub fn h<T: Scalar>(v: &mut [Complex<T>], q: usize) {
        let m = 1usize << q;
        let r: Complex<T> = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        for i in 0..v.len() {
            if i & m == 0 {
                let (a, b) = (v[i], v[i | m]);
                v[i] = (a + b) * r;
                v[i | m] = (a - b) * r;
            }
        }
    }

    #[inline]
    pub fn x<T: Scalar>(v: &mut [Complex<T>], q: usize) {
        let m = 1usize << q;
        for i in 0..v.len() {
            if i & m == 0 {
                v.swap(i, i | m);
            }
        }
    }

    #[inline]
    pub fn y<T: Scalar>(v: &mut [Complex<T>], q: usize) {
        // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
        let m = 1usize << q;
        for i in 0..v.len() {
            if i & m == 0 {
                let (a, b) = (v[i], v[i | m]);
                v[i] = Complex::new(b.im, -b.re);
                v[i | m] = Complex::new(-a.im, a.re);
            }
        }
    }

    #[inline]
    pub fn z<T: Scalar>(v: &mut [Complex<T>], q: usize) {
        let m = 1usize << q;
        for (i, a) in v.iter_mut().enumerate() {
            if i & m != 0 {
                *a = -*a;
            }
        }
    }

    #[inline]
    pub fn s<T: Scalar>(v: &mut [Complex<T>], q: usize) {
        let m = 1usize << q;
        for (i, a) in v.iter_mut().enumerate() {
            if i & m != 0 {
                *a = Complex::new(-a.im, a.re);
            }
        }
    }

    #[inline]
    pub fn cx<T: Scalar>(v: &mut [Complex<T>], control: usize, target: usize) {
        let (mc, mt) = (1usize << control, 1usize << target);
        for i in 0..v.len() {
            if i & mc != 0 && i & mt == 0 {
                v.swap(i, i | mt);
            }
        }
    }

    #[inline]
    pub fn cz<T: Scalar>(v: &mut [Complex<T>], a: usize, b: usize) {
        let m = (1usize << a) | (1usize << b);
        for (i, amp) in v.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
    }

    #[inline]
    pub fn ccz<T: Scalar>(v: &mut [Complex<T>], a: usize, b: usize, c: usize) {
        let m = (1usize << a) | (1usize << b) | (1usize << c);
        for (i, amp) in v.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::State;

    const EPS: f64 = 1e-12;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < EPS
    }

    #[test]
    fn h_on_zero() {
        let s = apply_gate(State::zero(1), &Op::h(0)).unwrap();
        assert!(approx(s.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2));
        assert!(approx(s.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2));
    }

    #[test]
    fn ccz_phases() {
        // qubit q is bit q, so |110⟩ on (q0,q1,q2) is index 0b011
        let s = apply_gate(State::basis(3, 0b011), &Op::ccz(0, 1, 2)).unwrap();
        assert_eq!(s, State::basis(3, 0b011));
        let s = apply_gate(State::basis(3, 0b111), &Op::ccz(0, 1, 2)).unwrap();
        assert!(approx(s.amplitudes()[7].re, -1.0));
    }

    #[test]
    fn out_of_range_is_error() {
        let err = apply_gate(State::zero(2), &Op::h(2)).unwrap_err();
        assert_eq!(err, SimError::IndexOutOfRange { qubit: 2, num_qubits: 2 });
        assert!(matches!(apply_gate(State::zero(1), &Op::measz(0)), Err(SimError::NotUnitary(_))));
    }

    #[test]
    fn y_is_i_x_z() {
        let mut a = State::zero(1);
        a.apply(&Op::h(0)).unwrap();
        a.apply(&Op::s(0)).unwrap();
        let mut y = a.clone();
        y.apply(&Op::y(0)).unwrap();
        let mut xz = a.clone();
        xz.apply(&Op::z(0)).unwrap();
        xz.apply(&Op::x(0)).unwrap();
        // Y = i X Z
        for (p, q) in y.amplitudes().iter().zip(xz.amplitudes()) {
            let iq = Complex::new(-q.im, q.re);
            assert!((p - iq).norm() < EPS);
        }
    }

    #[test]
    fn expectation_basics() {
        let plus = apply_gate(State::zero(1), &Op::h(0)).unwrap();
        let x: PauliString = "X".parse().unwrap();
        let mx: PauliString = "-X".parse().unwrap();
        assert!(approx(State::zero(1).pauli_expectation(&x).unwrap(), 0.0));
        assert!(approx(plus.pauli_expectation(&x).unwrap(), 1.0));
        assert!(approx(plus.pauli_expectation(&mx).unwrap(), -1.0));
        assert_eq!(plus.pauli_expectation(&"iX".parse().unwrap()), Err(SimError::NonHermitian));
        assert!(matches!(
            plus.pauli_expectation(&"XX".parse().unwrap()),
            Err(SimError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn ghz4_stabilizers() {
        let c = Circuit::parse("h 0\ncx 0 1\ncx 1 2\ncx 2 3").unwrap();
        let s = State::from_circuit(&c).unwrap();
        for p in ["XXXX", "ZZZZ"] {
            assert!(approx(s.pauli_expectation(&p.parse().unwrap()).unwrap(), 1.0));
        }
    }

    #[test]
    fn fidelity_cases() {
        let z = State::zero(1);
        let one = State::basis(1, 1);
        let plus = apply_gate(State::zero(1), &Op::h(0)).unwrap();
        assert!(approx(z.fidelity(&z).unwrap(), 1.0));
        assert!(approx(z.fidelity(&one).unwrap(), 0.0));
        assert!(approx(z.fidelity(&plus).unwrap(), 0.5));
        assert!(z.fidelity(&State::zero(2)).is_err());
    }

    #[test]
    fn f32_backend_agrees() {
        let c = Circuit::parse("h 0\ncx 0 1\nccz 0 1 2\nh 2\ns 1").unwrap();
        let a = crate::State::from_circuit(&c).unwrap();
        let b = crate::StateF32::from_circuit(&c).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x.re - y.re as f64).abs() < 1e-6 && (x.im - y.im as f64).abs() < 1e-6);
        }
    }
}
