//! Dense statevector simulation for the two gate families a feature map
//! needs: a Hadamard layer and exponentials of Pauli strings.
//!
//! Qubit `q` is bit `q` of the amplitude index (qubit 0 is the least
//! significant bit). Global phase is kept as-is.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 24;

/// A single-qubit Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn from_char(c: char) -> Option<Axis> {
        match c.to_ascii_uppercase() {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, identity on every qubit not listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    terms: Vec<(usize, Axis)>,
}

impl PauliString {
    pub fn new(terms: Vec<(usize, Axis)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Argument("Pauli string must be non-empty".into()));
        }
        for (i, (q, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(p, _)| p == q) {
                return Err(Error::Argument(format!(
                    "qubit {q} appears more than once in Pauli string"
                )));
            }
        }
        Ok(PauliString { terms })
    }

    pub fn terms(&self) -> &[(usize, Axis)] {
        &self.terms
    }

    pub fn max_qubit(&self) -> usize {
        self.terms.iter().map(|(q, _)| *q).max().unwrap_or(0)
    }

    /// Bit masks `(flip, sign)`: X and Y flip the bit, Y and Z pick up a
    /// sign when the bit is set.
    fn masks(&self) -> (usize, usize, usize) {
        let mut flip = 0;
        let mut sign = 0;
        let mut n_y = 0;
        for &(q, axis) in &self.terms {
            let bit = 1usize << q;
            match axis {
                Axis::X => flip |= bit,
                Axis::Y => {
                    flip |= bit;
                    sign |= bit;
                    n_y += 1;
                }
                Axis::Z => sign |= bit,
            }
        }
        (flip, sign, n_y)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, axis) in &self.terms {
            write!(f, "{}{}", axis.as_char(), q)?;
        }
        Ok(())
    }
}

/// The `2^n` complex amplitudes of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new_zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the caller
    /// is responsible for normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Argument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!("{n_qubits} qubits exceeds limit")));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `H` to every qubit.
    pub fn apply_hadamard_all(mut self) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let len = self.amplitudes.len();
        for q in 0..self.n_qubits {
            let bit = 1 << q;
            for k in 0..len {
                if k & bit == 0 {
                    let a = self.amplitudes[k];
                    let b = self.amplitudes[k | bit];
                    self.amplitudes[k] = (a + b) * s;
                    self.amplitudes[k | bit] = (a - b) * s;
                }
            }
        }
        self
    }

    /// Applies `exp(iθP) = cos θ · I + i sin θ · P`, exact because `P² = I`.
    pub fn apply_pauli_exponential(self, pauli: &PauliString, theta: f64) -> Result<Self> {
        if pauli.max_qubit() >= self.n_qubits {
            return Err(Error::Argument(format!(
                "Pauli string {pauli} does not fit a {}-qubit state",
                self.n_qubits
            )));
        }
        let (flip, sign, n_y) = pauli.masks();
        // i^{n_y}, then i·sin θ on top.
        let y_phase = Complex64::i().powu(n_y as u32);
        let (sin, cos) = theta.sin_cos();
        let coupled = Complex64::new(0.0, sin) * y_phase;

        let src = self.amplitudes;
        let out = (0..src.len())
            .map(|k| {
                // (Pψ)[k] = phase(k ^ flip) · ψ[k ^ flip]
                let from = k ^ flip;
                let odd = (from & sign).count_ones() & 1 == 1;
                let term = if odd { -src[from] } else { src[from] };
                src[k] * cos + coupled * term
            })
            .collect();
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    /// `⟨self|other⟩ = Σ conj(self_k) · other_k`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Argument(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn zero_state_layout() {
        let s = StateVector::new_zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::new_zero_state(2).unwrap();
        assert_eq!(s.amplitudes().len(), 4);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
    }

    #[test]
    fn zero_state_guard() {
        assert!(matches!(
            StateVector::new_zero_state(25),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            StateVector::new_zero_state(0),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn hadamard_layer() {
        let s = StateVector::new_zero_state(1).unwrap().apply_hadamard_all();
        assert!(close(
            s.amplitudes(),
            &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            1e-15
        ));
        let s = StateVector::new_zero_state(2).unwrap().apply_hadamard_all();
        assert!(close(s.amplitudes(), &[c(0.5, 0.0); 4], 1e-15));
    }

    #[test]
    fn hadamard_is_involution() {
        let p = PauliString::new(vec![(0, Axis::Y), (2, Axis::X)]).unwrap();
        let s = StateVector::new_zero_state(3)
            .unwrap()
            .apply_hadamard_all()
            .apply_pauli_exponential(&p, 0.37)
            .unwrap();
        let back = s.clone().apply_hadamard_all().apply_hadamard_all();
        assert!(close(s.amplitudes(), back.amplitudes(), 1e-12));
    }

    #[test]
    fn zero_angle_is_identity() {
        let s = StateVector::new_zero_state(2).unwrap().apply_hadamard_all();
        let p = PauliString::new(vec![(0, Axis::X), (1, Axis::Y)]).unwrap();
        let out = s.clone().apply_pauli_exponential(&p, 0.0).unwrap();
        assert!(close(s.amplitudes(), out.amplitudes(), 0.0));
    }

    #[test]
    fn z_rotation_on_zero_is_global_phase() {
        let p = PauliString::new(vec![(0, Axis::Z)]).unwrap();
        let out = StateVector::new_zero_state(1)
            .unwrap()
            .apply_pauli_exponential(&p, FRAC_PI_2)
            .unwrap();
        assert!(close(out.amplitudes(), &[c(0.0, 1.0), c(0.0, 0.0)], 1e-15));
    }

    #[test]
    fn x_and_y_single_qubit_closed_forms() {
        // exp(iθX)|0⟩ = cos θ|0⟩ + i sin θ|1⟩
        let t = 0.3_f64;
        let x = PauliString::new(vec![(0, Axis::X)]).unwrap();
        let out = StateVector::new_zero_state(1)
            .unwrap()
            .apply_pauli_exponential(&x, t)
            .unwrap();
        assert!(close(out.amplitudes(), &[c(t.cos(), 0.0), c(0.0, t.sin())], 1e-15));
        // exp(iθY)|0⟩ = cos θ|0⟩ + i sin θ · i|1⟩ = cos θ|0⟩ − sin θ|1⟩
        let y = PauliString::new(vec![(0, Axis::Y)]).unwrap();
        let out = StateVector::new_zero_state(1)
            .unwrap()
            .apply_pauli_exponential(&y, t)
            .unwrap();
        assert!(close(out.amplitudes(), &[c(t.cos(), 0.0), c(-t.sin(), 0.0)], 1e-15));
    }

    #[test]
    fn qubit_zero_is_least_significant_bit() {
        let x1 = PauliString::new(vec![(1, Axis::X)]).unwrap();
        let out = StateVector::new_zero_state(2)
            .unwrap()
            .apply_pauli_exponential(&x1, FRAC_PI_2)
            .unwrap();
        // |00⟩ → i|10⟩, i.e. index 0b10 = 2
        assert!((out.amplitudes()[2] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn invalid_pauli_strings() {
        assert!(PauliString::new(vec![]).is_err());
        assert!(PauliString::new(vec![(0, Axis::X), (0, Axis::Z)]).is_err());
        let p = PauliString::new(vec![(2, Axis::Z)]).unwrap();
        let s = StateVector::new_zero_state(2).unwrap();
        assert!(matches!(
            s.apply_pauli_exponential(&p, 1.0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn inner_products() {
        let a = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0, 0.0));
        let h = StateVector::new_zero_state(3).unwrap().apply_hadamard_all();
        assert!((h.inner_product(&h).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let two = StateVector::new_zero_state(2).unwrap();
        assert!(matches!(a.inner_product(&two), Err(Error::Argument(_))));
    }

    #[test]
    fn commuting_exponentials_commute() {
        let z0 = PauliString::new(vec![(0, Axis::Z)]).unwrap();
        let zz = PauliString::new(vec![(0, Axis::Z), (1, Axis::Z)]).unwrap();
        let s = StateVector::new_zero_state(2).unwrap().apply_hadamard_all();
        let ab = s
            .clone()
            .apply_pauli_exponential(&z0, 0.8)
            .unwrap()
            .apply_pauli_exponential(&zz, -1.3)
            .unwrap();
        let ba = s
            .apply_pauli_exponential(&zz, -1.3)
            .unwrap()
            .apply_pauli_exponential(&z0, 0.8)
            .unwrap();
        assert!(close(ab.amplitudes(), ba.amplitudes(), 1e-12));
    }
}
