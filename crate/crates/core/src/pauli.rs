//! Signed n-qubit Pauli operators.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Single-qubit product as (power of i, letter).
    pub fn mul_with_phase(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' | '_' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Global phase of a Pauli string, as a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

/// `phase · P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}`; letter `j` acts on qubit `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString { phase: Phase::PLUS_ONE, letters: vec![Pauli::I; n] }
    }

    pub fn new(phase: Phase, letters: Vec<Pauli>) -> PauliString {
        PauliString { phase, letters }
    }

    /// `P` on the listed qubits of an n-qubit register.
    pub fn on(n: usize, p: Pauli, qubits: &[usize]) -> PauliString {
        let mut s = PauliString::identity(n);
        for &q in qubits {
            s.letters[q] = p;
        }
        s
    }

    /// `P^{⊗n}`.
    pub fn uniform(n: usize, p: Pauli) -> PauliString {
        PauliString { phase: Phase::PLUS_ONE, letters: vec![p; n] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// True iff the two strings commute (phases are irrelevant).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.len(), other.len(), "Pauli strings of different length");
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.len(), rhs.len(), "Pauli strings of different length");
        let mut power = self.phase.0 + rhs.phase.0;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(a, b)| {
                let (k, p) = a.mul_with_phase(*b);
                power += k;
                p
            })
            .collect();
        PauliString { phase: Phase::from_power(power), letters }
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(sign)?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = String;

    /// Accepts an optional sign prefix (`+`, `-`, `+i`, `-i`, `i`) followed
    /// by letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PLUS_I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PLUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::PLUS_I, r)
        } else {
            (Phase::PLUS_ONE, s)
        };
        let letters = rest
            .chars()
            .map(|c| Pauli::from_letter(c).ok_or_else(|| format!("bad Pauli letter `{c}`")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliString { phase, letters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_strings(n: usize) -> Vec<PauliString> {
        let mut out = Vec::new();
        for code in 0..(4usize.pow(n as u32) * 4) {
            let phase = Phase::from_power((code % 4) as u8);
            let mut rest = code / 4;
            let letters = (0..n)
                .map(|_| {
                    let p = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rest % 4];
                    rest /= 4;
                    p
                })
                .collect();
            out.push(PauliString::new(phase, letters));
        }
        out
    }

    #[test]
    fn single_qubit_products() {
        let x: PauliString = "X".parse().unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(&x * &y, "+iZ".parse().unwrap());
        assert_eq!(&y * &x, "-iZ".parse().unwrap());
        assert_eq!(&x * &x, "I".parse().unwrap());
        assert_eq!(&z * &x, "+iY".parse().unwrap());
    }

    #[test]
    fn weight_of_identity_is_zero() {
        assert_eq!(PauliString::identity(5).weight(), 0);
        assert_eq!("XIZY".parse::<PauliString>().unwrap().weight(), 3);
    }

    #[test]
    fn group_laws_exhaustive_up_to_two_qubits() {
        for n in 1..=2 {
            let all = all_strings(n);
            for a in &all {
                for b in &all {
                    let ab = a * b;
                    assert!(ab.weight() <= a.weight() + b.weight());
                    for c in &all {
                        assert_eq!(&ab * c, a * &(b * c));
                    }
                }
            }
        }
    }

    #[test]
    fn group_laws_exhaustive_three_qubits() {
        // phases only add powers of i, so the letter part is the whole check
        let all: Vec<_> = all_strings(3).into_iter().filter(|p| p.phase() == Phase::PLUS_ONE).collect();
        assert_eq!(all.len(), 64);
        for a in &all {
            for b in &all {
                let ab = a * b;
                assert!(ab.weight() <= a.weight() + b.weight());
                for c in &all {
                    assert_eq!(&ab * c, a * &(b * c));
                }
            }
        }
    }

    #[test]
    fn commutation() {
        let xx: PauliString = "XX".parse().unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let zi: PauliString = "ZI".parse().unwrap();
        assert!(xx.commutes_with(&zz));
        assert!(!xx.commutes_with(&zi));
    }
}
