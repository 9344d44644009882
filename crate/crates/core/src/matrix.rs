//! Small dense and sparse matrices over [`RingReal`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::ring::RingReal;

/// Dense square matrix over the exact ring, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    dim: usize,
    data: Vec<RingReal>,
}

impl RingMatrix {
    pub fn zeros(dim: usize) -> Self {
        RingMatrix {
            dim,
            data: vec![RingReal::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, RingReal::ONE);
        }
        m
    }

    /// Builds a matrix from integer rows scaled by a common factor.
    pub fn from_int_rows(rows: &[&[i64]], scale: RingReal) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, RingReal::from(v) * scale);
            }
        }
        m
    }

    pub fn diagonal_from(entries: &[RingReal]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Rank-one matrix `u vᵀ`.
    pub fn outer(u: &[RingReal], v: &[RingReal]) -> Self {
        assert_eq!(u.len(), v.len());
        let dim = u.len();
        let mut m = Self::zeros(dim);
        for (r, &ur) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (c, &vc) in v.iter().enumerate() {
                m.set(r, c, ur * vc);
            }
        }
        m
    }

    /// `Ĥ^{⊗k}`.
    pub fn hadamard_power(k: usize) -> Self {
        let dim = 1usize << k;
        let mut scale = RingReal::ONE;
        for _ in 0..k {
            scale *= RingReal::FRAC_1_SQRT_2;
        }
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                let sign = if (r & c).count_ones() % 2 == 0 { scale } else { -scale };
                m.set(r, c, sign);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> RingReal {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingReal) {
        self.data[r * self.dim + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RingReal] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    pub fn kron(&self, other: &RingMatrix) -> Self {
        let dim = self.dim * other.dim;
        let mut m = Self::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let x = self.get(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        let y = other.get(r2, c2);
                        if !y.is_zero() {
                            m.set(r1 * other.dim + r2, c1 * other.dim + c2, x * y);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, s: RingReal) -> Self {
        RingMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// `V · self · V`.
    pub fn conjugate_by(&self, v: &RingMatrix) -> Self {
        &(v * self) * v
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| (r + 1..self.dim).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingReal::is_zero)
    }

    pub fn diagonal(&self) -> Vec<RingReal> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(RingReal::to_f64).collect()
    }

    /// Embeds `local` (acting on `positions`, first position most significant)
    /// into a register of `k` qubits, identity elsewhere. Positions are 0-based.
    pub fn embed_positions(local: &RingMatrix, positions: &[usize], k: usize) -> Self {
        let arity = positions.len();
        assert_eq!(local.dim, 1 << arity);
        let dim = 1usize << k;
        let mask: usize = positions.iter().map(|&p| 1usize << (k - 1 - p)).sum();
        let offsets = local_offsets(positions, k);
        let mut m = Self::zeros(dim);
        for base in (0..dim).filter(|i| i & mask == 0) {
            for (lr, &or) in offsets.iter().enumerate() {
                for (lc, &oc) in offsets.iter().enumerate() {
                    let v = local.get(lr, lc);
                    if !v.is_zero() {
                        m.set(base | or, base | oc, v);
                    }
                }
            }
        }
        m
    }
}

/// Global index offset of each local basis state, for a gate on 0-based
/// `positions` within a `k`-qubit register (position 0 is most significant).
pub fn local_offsets(positions: &[usize], k: usize) -> Vec<usize> {
    let arity = positions.len();
    (0..1usize << arity)
        .map(|l| {
            positions
                .iter()
                .enumerate()
                .filter(|&(j, _)| (l >> (arity - 1 - j)) & 1 == 1)
                .map(|(_, &p)| 1usize << (k - 1 - p))
                .sum()
        })
        .collect()
}

impl Mul for &RingMatrix {
    type Output = RingMatrix;

    fn mul(self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = RingMatrix::zeros(n);
        for r in 0..n {
            for m in 0..n {
                let x = self.get(r, m);
                if x.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let y = rhs.get(m, c);
                    if !y.is_zero() {
                        let idx = r * n + c;
                        out.data[idx] += x * y;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RingMatrix {
    type Output = RingMatrix;

    fn add(self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        RingMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&x, &y)| x + y).collect(),
        }
    }
}

impl Sub for &RingMatrix {
    type Output = RingMatrix;

    fn sub(self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        RingMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&x, &y)| x - y).collect(),
        }
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self.row(r).iter().map(|x| format!("{:.4}", x.to_f64())).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse square matrix as sorted `(row, col, value)` triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRingMatrix {
    dim: usize,
    entries: Vec<(usize, usize, RingReal)>,
}

impl SparseRingMatrix {
    pub fn from_entries(dim: usize, mut entries: Vec<(usize, usize, RingReal)>) -> Self {
        entries.retain(|e| !e.2.is_zero());
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseRingMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, RingReal)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> RingReal {
        self.entries
            .binary_search_by_key(&(r, c), |&(r, c, _)| (r, c))
            .map(|i| self.entries[i].2)
            .unwrap_or(RingReal::ZERO)
    }

    pub fn apply(&self, v: &[RingReal]) -> Vec<RingReal> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![RingReal::ZERO; self.dim];
        for &(r, c, x) in &self.entries {
            out[r] += x * v[c];
        }
        out
    }

    pub fn to_dense(&self) -> RingMatrix {
        let mut m = RingMatrix::zeros(self.dim);
        for &(r, c, x) in &self.entries {
            m.set(r, c, x);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_power_is_involution() {
        for k in 0..4 {
            let h = RingMatrix::hadamard_power(k);
            assert!((&h * &h).is_identity());
            assert!(h.is_symmetric());
        }
    }

    #[test]
    fn embed_positions_matches_kron() {
        let x = RingMatrix::from_int_rows(&[&[0, 1], &[1, 0]], RingReal::ONE);
        let i2 = RingMatrix::identity(2);
        assert_eq!(RingMatrix::embed_positions(&x, &[0], 2), x.kron(&i2));
        assert_eq!(RingMatrix::embed_positions(&x, &[1], 2), i2.kron(&x));
    }

    #[test]
    fn sparse_round_trip() {
        let h = RingMatrix::hadamard_power(2);
        let mut entries = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                entries.push((r, c, h.get(r, c)));
            }
        }
        let s = SparseRingMatrix::from_entries(4, entries);
        assert_eq!(s.to_dense(), h);
        assert_eq!(s.get(3, 3), RingReal::HALF);
    }
}
