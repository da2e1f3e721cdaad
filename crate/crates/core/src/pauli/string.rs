use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A phase-free tensor product of Pauli letters, stored in symplectic form:
/// bit `q` of `x`/`z` is the X/Z component on qubit `q`, with `Y = i X Z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words_for(n_qubits: usize) -> usize {
    n_qubits.div_ceil(64)
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        let w = words_for(n_qubits);
        PauliString {
            n_qubits,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, l) in letters.iter().enumerate() {
            p.set(q, *l);
        }
        p
    }

    /// A string with `letter` on qubit `q` and identity elsewhere.
    pub fn single(n_qubits: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n_qubits);
        p.set(q, letter);
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, q: usize) -> Letter {
        assert!(q < self.n_qubits, "qubit {q} out of range");
        let (w, b) = (q / 64, q % 64);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n_qubits, "qubit {q} out of range");
        let (w, b) = (q / 64, q % 64);
        let (x, z) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n_qubits).map(move |q| self.get(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Raw symplectic words, X part then Z part.
    pub fn x_bits(&self) -> &[u64] {
        &self.x
    }

    pub fn z_bits(&self) -> &[u64] {
        &self.z
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= (self.x[i] & other.z[i]).count_ones() ^ (self.z[i] & other.x[i]).count_ones();
        }
        parity & 1 == 0
    }

    /// Product `self * other` as a phase and a string.
    pub fn mul(&self, other: &PauliString) -> Result<PhasedPauli> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PhasedPauli {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        // P = i^{|x&z|} X^x Z^z, and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
        let mut exponent: u32 = 0;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for i in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[i], self.z[i], other.x[i], other.z[i]);
            let (x3, z3) = (x1 ^ x2, z1 ^ z2);
            exponent +=
                (x1 & z1).count_ones() + (x2 & z2).count_ones() + 2 * (z1 & x2).count_ones();
            exponent += 4 * 64 - (x3 & z3).count_ones();
            x.push(x3);
            z.push(z3);
        }
        PhasedPauli {
            phase: Phase((exponent % 4) as u8),
            string: PauliString {
                n_qubits: self.n_qubits,
                x,
                z,
            },
        }
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        let letters = s
            .chars()
            .enumerate()
            .map(|(position, c)| {
                Letter::from_char(c).ok_or(Error::InvalidPauliLetter {
                    letter: c,
                    position,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A power of `i`: the phases reachable by products of Pauli strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn power_of_i(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl From<PauliString> for PhasedPauli {
    fn from(string: PauliString) -> Self {
        PhasedPauli {
            phase: Phase::ONE,
            string,
        }
    }
}

impl PhasedPauli {
    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli> {
        let p = self.string.mul(&other.string)?;
        Ok(PhasedPauli {
            phase: self.phase * other.phase * p.phase,
            string: p.string,
        })
    }
}
