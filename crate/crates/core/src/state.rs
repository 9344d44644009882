//! Dense real state vectors, exact or floating point.
//!
//! Qubits are numbered from 1 and qubit 1 is the most significant bit of the
//! basis-state index: in an `n`-qubit register qubit `q` contributes
//! `1 << (n - q)`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::matrix::{local_offsets, RingMatrix};
use crate::ring::RingReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitRange { index: usize, n: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    Length(usize),
}

/// Scalar type of a state vector.
pub trait Amplitude:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ring(x: &RingReal) -> Self;
    fn is_zero(&self) -> bool;
    fn frac_1_sqrt2() -> Self;
    fn to_f64(&self) -> f64;
    /// `1/√m` when representable.
    fn inv_sqrt(m: u64) -> Option<Self>;
}

impl Amplitude for RingReal {
    fn zero() -> Self {
        RingReal::ZERO
    }
    fn one() -> Self {
        RingReal::ONE
    }
    fn from_ring(x: &RingReal) -> Self {
        *x
    }
    fn is_zero(&self) -> bool {
        RingReal::is_zero(self)
    }
    fn frac_1_sqrt2() -> Self {
        RingReal::FRAC_1_SQRT_2
    }
    fn to_f64(&self) -> f64 {
        RingReal::to_f64(self)
    }
    fn inv_sqrt(m: u64) -> Option<Self> {
        if !m.is_power_of_two() {
            return None;
        }
        let e = m.trailing_zeros();
        let mut x = RingReal::ONE;
        for _ in 0..e / 2 {
            x = x.half();
        }
        if e % 2 == 1 {
            x *= RingReal::FRAC_1_SQRT_2;
        }
        Some(x)
    }
}

impl Amplitude for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ring(x: &RingReal) -> Self {
        x.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn frac_1_sqrt2() -> Self {
        std::f64::consts::FRAC_1_SQRT_2
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn inv_sqrt(m: u64) -> Option<Self> {
        (m > 0).then(|| 1.0 / (m as f64).sqrt())
    }
}

/// Amplitudes of an `n`-qubit real state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<A> {
    n: usize,
    amplitudes: Vec<A>,
}

pub type ExactState = StateVector<RingReal>;
pub type NumericState = StateVector<f64>;

/// Bit offset of 1-based qubit `q` in an `n`-qubit register.
pub fn qubit_bit(n: usize, q: usize) -> usize {
    1usize << (n - q)
}

impl<A: Amplitude> StateVector<A> {
    pub fn zeros(n: usize) -> Self {
        StateVector {
            n,
            amplitudes: vec![A::zero(); 1 << n],
        }
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut s = Self::zeros(n);
        s.amplitudes[index] = A::one();
        s
    }

    /// Computational basis state from bits; `bits[0]` is qubit 1.
    pub fn from_bits(bits: &[bool]) -> Self {
        let n = bits.len();
        let index = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| qubit_bit(n, i + 1))
            .sum();
        Self::basis(n, index)
    }

    pub fn from_amplitudes(amplitudes: Vec<A>) -> Result<Self, StateError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(StateError::Length(len));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[A] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [A] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<A> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> A {
        self.amplitudes.iter().fold(A::zero(), |acc, &x| acc + x * x)
    }

    pub fn inner(&self, other: &Self) -> A {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(A::zero(), |acc, (&x, &y)| acc + x * y)
    }

    /// `self ⊗ other`, with `self` on the leading (more significant) qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &x in &self.amplitudes {
            for &y in &other.amplitudes {
                amplitudes.push(x * y);
            }
        }
        StateVector {
            n: self.n + other.n,
            amplitudes,
        }
    }

    pub fn scale(&mut self, s: A) {
        for x in &mut self.amplitudes {
            *x = *x * s;
        }
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<(), StateError> {
        if other.n != self.n {
            return Err(StateError::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        for (x, &y) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *x = *x + y;
        }
        Ok(())
    }

    pub fn to_numeric(&self) -> NumericState {
        StateVector {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(A::to_f64).collect(),
        }
    }

    /// Applies `matrix` to the 1-based `qubits` (first listed qubit is the
    /// most significant local bit).
    pub fn apply_local(&mut self, matrix: &RingMatrix, qubits: &[usize]) -> Result<(), StateError> {
        self.apply_local_conditioned(matrix, qubits, None)
    }

    /// As [`apply_local`](Self::apply_local) but only on the subspace where
    /// qubit `control` is 1.
    pub fn apply_local_conditioned(
        &mut self,
        matrix: &RingMatrix,
        qubits: &[usize],
        control: Option<usize>,
    ) -> Result<(), StateError> {
        for &q in qubits.iter().chain(control.iter()) {
            if q == 0 || q > self.n {
                return Err(StateError::QubitRange { index: q, n: self.n });
            }
        }
        if qubits.is_empty() {
            return Ok(());
        }
        let positions: Vec<usize> = qubits.iter().map(|&q| q - 1).collect();
        let offsets = local_offsets(&positions, self.n);
        let mask: usize = offsets.iter().fold(0, |m, &o| m | o);
        let control_bit = control.map(|c| qubit_bit(self.n, c)).unwrap_or(0);
        let local_dim = offsets.len();
        let entries: Vec<(usize, usize, A)> = (0..local_dim)
            .flat_map(|r| (0..local_dim).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = matrix.get(r, c);
                (!v.is_zero()).then(|| (r, c, A::from_ring(&v)))
            })
            .collect();
        let mut gathered = vec![A::zero(); local_dim];
        let mut result = vec![A::zero(); local_dim];
        for base in 0..self.dim() {
            if base & mask != 0 || base & control_bit != control_bit {
                continue;
            }
            for (l, &o) in offsets.iter().enumerate() {
                gathered[l] = self.amplitudes[base | o];
                result[l] = A::zero();
            }
            for &(r, c, v) in &entries {
                result[r] = result[r] + v * gathered[c];
            }
            for (l, &o) in offsets.iter().enumerate() {
                self.amplitudes[base | o] = result[l];
            }
        }
        Ok(())
    }

    /// Applies a Hadamard to each listed qubit.
    pub fn apply_hadamards(&mut self, qubits: &[usize]) -> Result<(), StateError> {
        let s = A::frac_1_sqrt2();
        for &q in qubits {
            if q == 0 || q > self.n {
                return Err(StateError::QubitRange { index: q, n: self.n });
            }
            let bit = qubit_bit(self.n, q);
            for i in 0..self.dim() {
                if i & bit == 0 {
                    let x = self.amplitudes[i];
                    let y = self.amplitudes[i | bit];
                    self.amplitudes[i] = (x + y) * s;
                    self.amplitudes[i | bit] = (x - y) * s;
                }
            }
        }
        Ok(())
    }
}

impl NumericState {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.scale(1.0 / norm);
        }
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }
}

impl ExactState {
    pub fn is_normalized(&self) -> bool {
        self.norm_sqr().is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_one_is_most_significant() {
        let s: ExactState = StateVector::from_bits(&[true, false]);
        assert_eq!(s.amplitudes()[0b10], RingReal::ONE);
        let x = RingMatrix::from_int_rows(&[&[0, 1], &[1, 0]], RingReal::ONE);
        let mut t: ExactState = StateVector::basis(2, 0);
        t.apply_local(&x, &[1]).unwrap();
        assert_eq!(t, StateVector::basis(2, 0b10));
    }

    #[test]
    fn conditioned_application_respects_control() {
        let x = RingMatrix::from_int_rows(&[&[0, 1], &[1, 0]], RingReal::ONE);
        let mut s: ExactState = StateVector::basis(2, 0b00);
        s.apply_local_conditioned(&x, &[2], Some(1)).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b00));
        let mut s: ExactState = StateVector::basis(2, 0b10);
        s.apply_local_conditioned(&x, &[2], Some(1)).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11));
    }

    #[test]
    fn hadamards_match_dense_power() {
        let mut s: ExactState = StateVector::basis(2, 0);
        s.apply_hadamards(&[1, 2]).unwrap();
        assert!(s.amplitudes().iter().all(|&a| a == RingReal::HALF));
        assert!(s.is_normalized());
        let mut t: ExactState = StateVector::basis(2, 1);
        t.apply_local(&RingMatrix::hadamard_power(2), &[1, 2]).unwrap();
        let mut u: ExactState = StateVector::basis(2, 1);
        u.apply_hadamards(&[1, 2]).unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn inverse_square_roots() {
        assert_eq!(RingReal::inv_sqrt(4), Some(RingReal::HALF));
        let r = RingReal::inv_sqrt(8).unwrap();
        assert_eq!(r * r * RingReal::from(8), RingReal::ONE);
        assert_eq!(RingReal::inv_sqrt(6), None);
        assert_eq!(<f64 as Amplitude>::inv_sqrt(4), Some(0.5));
    }

    #[test]
    fn out_of_range_qubit() {
        let x = RingMatrix::identity(2);
        let mut s: NumericState = StateVector::zeros(2);
        assert_eq!(s.apply_local(&x, &[3]), Err(StateError::QubitRange { index: 3, n: 2 }));
    }
}
