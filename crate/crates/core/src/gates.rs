//! Gate kinds of the two gate sets and their exact matrix semantics.
//!
//! `{X, CX, CCX, HH}` is the Toffoli/double-Hadamard set and
//! `{X, CZ, CCZ, G}` its basis-diagonal counterpart, where
//! `G = (H⊗H)·CZ·(H⊗H)`. `ID_X`/`ID_Z` are identity placeholders carrying the
//! basis slot they fill after standard-form padding.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::{RingMatrix, SparseRingMatrix};
use crate::ring::RingReal;
use crate::state::{qubit_bit, ExactState, StateError, StateVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("{kind} expects {expected} qubit(s), got {found}")]
    Arity {
        kind: GateKind,
        expected: &'static str,
        found: usize,
    },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("qubit indices are 1-based; found 0")]
    ZeroQubit,
    #[error("qubit index {index} out of range for {n} qubits")]
    OutOfRange { index: usize, n: usize },
    #[error("unknown gate kind {0:?}")]
    UnknownKind(String),
    #[error("qubit collision: {0} is also an operand of the gate")]
    Collision(usize),
    #[error("nested controls are not supported")]
    NestedControl,
    #[error("gate {0} has no controlled lowering")]
    NotLowerable(GateKind),
}

impl From<StateError> for GateError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::QubitRange { index, n } => GateError::OutOfRange { index, n },
            other => panic!("unexpected state error in gate application: {other}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    CX,
    CCX,
    HH,
    CZ,
    CCZ,
    G,
    IdX,
    IdZ,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::CX,
        GateKind::CCX,
        GateKind::HH,
        GateKind::CZ,
        GateKind::CCZ,
        GateKind::G,
        GateKind::IdX,
        GateKind::IdZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::CX => "CX",
            GateKind::CCX => "CCX",
            GateKind::HH => "HH",
            GateKind::CZ => "CZ",
            GateKind::CCZ => "CCZ",
            GateKind::G => "G",
            GateKind::IdX => "ID_X",
            GateKind::IdZ => "ID_Z",
        }
    }

    /// Operand count; placeholders report 0.
    pub fn arity(self) -> usize {
        match self {
            GateKind::X => 1,
            GateKind::CX | GateKind::HH | GateKind::CZ | GateKind::G => 2,
            GateKind::CCX | GateKind::CCZ => 3,
            GateKind::IdX | GateKind::IdZ => 0,
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::X => n == 1,
            GateKind::CX | GateKind::HH | GateKind::CZ | GateKind::G => n == 2,
            GateKind::CCX | GateKind::CCZ => n == 3,
            GateKind::IdX | GateKind::IdZ => n <= 1,
        }
    }

    fn arity_text(self) -> &'static str {
        match self {
            GateKind::X => "1",
            GateKind::CX | GateKind::HH | GateKind::CZ | GateKind::G => "2",
            GateKind::CCX | GateKind::CCZ => "3",
            GateKind::IdX | GateKind::IdZ => "0 or 1",
        }
    }

    pub fn is_placeholder(self) -> bool {
        matches!(self, GateKind::IdX | GateKind::IdZ)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GateError::UnknownKind(s.to_string()))
    }
}

/// A gate on 1-based qubit indices, listed in operand order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self, GateError> {
        if !kind.arity_ok(qubits.len()) {
            return Err(GateError::Arity {
                kind,
                expected: kind.arity_text(),
                found: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q == 0 {
                return Err(GateError::ZeroQubit);
            }
            if qubits[..i].contains(&q) {
                return Err(GateError::DuplicateQubit(q));
            }
        }
        Ok(Gate { kind, qubits })
    }

    fn fixed(kind: GateKind, qubits: &[usize]) -> Self {
        Gate::new(kind, qubits.to_vec()).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, &[q])
    }
    pub fn cx(c: usize, t: usize) -> Self {
        Self::fixed(GateKind::CX, &[c, t])
    }
    pub fn ccx(c1: usize, c2: usize, t: usize) -> Self {
        Self::fixed(GateKind::CCX, &[c1, c2, t])
    }
    pub fn hh(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::HH, &[a, b])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::CZ, &[a, b])
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Self {
        Self::fixed(GateKind::CCZ, &[a, b, c])
    }
    pub fn g(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::G, &[a, b])
    }
    pub fn id_x() -> Self {
        Self::fixed(GateKind::IdX, &[])
    }
    pub fn id_z() -> Self {
        Self::fixed(GateKind::IdZ, &[])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits.iter().copied().max().unwrap_or(0)
    }

    /// Same gate with qubits renamed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Result<Self, GateError> {
        Gate::new(self.kind, self.qubits.iter().map(|&q| f(q)).collect())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

pub type GateMatrix = RingMatrix;

fn hh_matrix() -> RingMatrix {
    RingMatrix::hadamard_power(2)
}

fn cz_matrix() -> RingMatrix {
    RingMatrix::diagonal_from(&[RingReal::ONE, RingReal::ONE, RingReal::ONE, -RingReal::ONE])
}

fn permutation_matrix(dim: usize, f: impl Fn(usize) -> usize) -> RingMatrix {
    let mut m = RingMatrix::zeros(dim);
    for c in 0..dim {
        m.set(f(c), c, RingReal::ONE);
    }
    m
}

/// Exact matrix of `g` on `2^arity` dimensions, operands in listed order.
pub fn gate_matrix(g: &Gate) -> GateMatrix {
    match g.kind {
        GateKind::X => permutation_matrix(2, |i| i ^ 1),
        GateKind::CX => permutation_matrix(4, |i| if i & 0b10 != 0 { i ^ 1 } else { i }),
        GateKind::CCX => permutation_matrix(8, |i| if i & 0b110 == 0b110 { i ^ 1 } else { i }),
        GateKind::HH => hh_matrix(),
        GateKind::CZ => cz_matrix(),
        GateKind::CCZ => {
            let mut d = vec![RingReal::ONE; 8];
            d[7] = -RingReal::ONE;
            RingMatrix::diagonal_from(&d)
        }
        GateKind::G => {
            let hh = hh_matrix();
            &(&hh * &cz_matrix()) * &hh
        }
        GateKind::IdX | GateKind::IdZ => RingMatrix::identity(1 << g.arity()),
    }
}

/// `g` acting on an `n`-qubit register, identity elsewhere.
pub fn embed(g: &Gate, n: usize) -> Result<SparseRingMatrix, GateError> {
    if let Some(&q) = g.qubits.iter().find(|&&q| q > n) {
        return Err(GateError::OutOfRange { index: q, n });
    }
    let positions: Vec<usize> = g.qubits.iter().map(|&q| q - 1).collect();
    let local = gate_matrix(g);
    let offsets = crate::matrix::local_offsets(&positions, n);
    let mask: usize = offsets.iter().fold(0, |m, &o| m | o);
    let mut entries = Vec::new();
    for base in (0..1usize << n).filter(|i| i & mask == 0) {
        for (lr, &or) in offsets.iter().enumerate() {
            for (lc, &oc) in offsets.iter().enumerate() {
                let v = local.get(lr, lc);
                if !v.is_zero() {
                    entries.push((base | or, base | oc, v));
                }
            }
        }
    }
    Ok(SparseRingMatrix::from_entries(1 << n, entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateProperties {
    pub hermitian: bool,
    pub z_diagonal: bool,
    pub x_diagonal: bool,
    pub locality: usize,
}

pub fn check_gate_properties(g: &Gate) -> GateProperties {
    let m = gate_matrix(g);
    let h = RingMatrix::hadamard_power(g.arity());
    GateProperties {
        hermitian: m.is_symmetric(),
        z_diagonal: m.is_diagonal(),
        x_diagonal: m.conjugate_by(&h).is_diagonal(),
        locality: g.arity(),
    }
}

/// Applies `gates` in order (first gate first) to `state`.
pub fn apply_gates(state: &mut ExactState, gates: &[Gate]) -> Result<(), GateError> {
    for g in gates {
        state.apply_local(&gate_matrix(g), &g.qubits)?;
    }
    Ok(())
}

/// One step of an operator sequence: a plain gate, a qubit swap defined
/// directly as a basis permutation, or either of those controlled on an extra
/// qubit (the `Γ(U)` of an operation `U`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Gate(Gate),
    Swap(usize, usize),
    Controlled { control: usize, inner: Box<Op> },
}

impl From<Gate> for Op {
    fn from(g: Gate) -> Self {
        Op::Gate(g)
    }
}

impl Op {
    pub fn controlled(control: usize, inner: impl Into<Op>) -> Self {
        Op::Controlled {
            control,
            inner: Box::new(inner.into()),
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate(g) => g.qubits().to_vec(),
            Op::Swap(a, b) => vec![*a, *b],
            Op::Controlled { control, inner } => {
                let mut q = inner.qubits();
                q.push(*control);
                q
            }
        }
    }

    fn apply(&self, state: &mut ExactState, control: Option<usize>) -> Result<(), GateError> {
        let n = state.n();
        for q in self.qubits() {
            if q == 0 || q > n {
                return Err(GateError::OutOfRange { index: q, n });
            }
        }
        match self {
            Op::Gate(g) => state.apply_local_conditioned(&gate_matrix(g), g.qubits(), control)?,
            Op::Swap(a, b) => {
                if a == b {
                    return Err(GateError::DuplicateQubit(*a));
                }
                let (ba, bb) = (qubit_bit(n, *a), qubit_bit(n, *b));
                let cb = control.map(|c| qubit_bit(n, c)).unwrap_or(0);
                let amps = state.amplitudes_mut();
                for i in 0..amps.len() {
                    if i & ba != 0 && i & bb == 0 && i & cb == cb {
                        amps.swap(i, i ^ ba ^ bb);
                    }
                }
            }
            Op::Controlled { control: c, inner } => {
                if control.is_some() || matches!(**inner, Op::Controlled { .. }) {
                    return Err(GateError::NestedControl);
                }
                if inner.qubits().contains(c) {
                    return Err(GateError::Collision(*c));
                }
                inner.apply(state, Some(*c))?;
            }
        }
        Ok(())
    }
}

/// Column `col` of the exact product of `ops` on `n` qubits.
fn product_column(ops: &[Op], n: usize, col: usize) -> Result<ExactState, GateError> {
    let mut s: ExactState = StateVector::basis(n, col);
    for op in ops {
        op.apply(&mut s, None)?;
    }
    Ok(s)
}

/// Exact equality of the operator products of two op sequences on `n` qubits.
pub fn verify_ops(lhs: &[Op], rhs: &[Op], n: usize) -> Result<bool, GateError> {
    for col in 0..1usize << n {
        if product_column(lhs, n, col)? != product_column(rhs, n, col)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact equality of the products of two gate sequences on `n` qubits.
pub fn verify_identity(lhs: &[Gate], rhs: &[Gate], n: usize) -> Result<bool, GateError> {
    let wrap = |gs: &[Gate]| gs.iter().cloned().map(Op::Gate).collect::<Vec<_>>();
    verify_ops(&wrap(lhs), &wrap(rhs), n)
}

/// `SWAP(i, j)` as three CX gates.
pub fn swap_as_cx(i: usize, j: usize) -> Vec<Gate> {
    vec![Gate::cx(i, j), Gate::cx(j, i), Gate::cx(i, j)]
}

/// Implements `Γ(g)` (g controlled on `control`) with gates from
/// `{X, CX, CCX, HH}`, borrowing `ancilla` in an arbitrary state and
/// restoring it.
pub fn controlled_lowering(g: &Gate, control: usize, ancilla: usize) -> Result<Vec<Gate>, GateError> {
    for q in [control, ancilla] {
        if g.qubits().contains(&q) {
            return Err(GateError::Collision(q));
        }
    }
    if control == ancilla {
        return Err(GateError::Collision(control));
    }
    let q = g.qubits();
    match g.kind() {
        GateKind::X => Ok(vec![Gate::cx(control, q[0])]),
        GateKind::CX => Ok(vec![Gate::ccx(control, q[0], q[1])]),
        GateKind::CCX => {
            // Γ(CCX)_{c,i,j,k} ⊗ I_a = CCX_{c,i,a} CCX_{j,a,k} CCX_{c,i,a} CCX_{j,a,k}
            let (i, j, k) = (q[0], q[1], q[2]);
            let toggle = Gate::ccx(control, i, ancilla);
            let apply = Gate::ccx(j, ancilla, k);
            Ok(vec![apply.clone(), toggle.clone(), apply, toggle])
        }
        GateKind::HH => {
            // Γ(HH)_{c,j,k} ⊗ I_a = Γ(SWAP)_{c,j,k} HH_{k,a} Γ(SWAP)_{c,j,k} HH_{k,a}
            let (j, k) = (q[0], q[1]);
            let cswap: Vec<Gate> = swap_as_cx(j, k)
                .iter()
                .map(|cx| Gate::ccx(control, cx.qubits()[0], cx.qubits()[1]))
                .collect();
            let mut out = vec![Gate::hh(k, ancilla)];
            out.extend(cswap.iter().cloned());
            out.push(Gate::hh(k, ancilla));
            out.extend(cswap);
            Ok(out)
        }
        other => Err(GateError::NotLowerable(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> RingReal {
        RingReal::from(v)
    }

    #[test]
    fn basic_matrices() {
        let x = gate_matrix(&Gate::x(1));
        assert_eq!(x, RingMatrix::from_int_rows(&[&[0, 1], &[1, 0]], RingReal::ONE));
        let cz = gate_matrix(&Gate::cz(1, 2));
        assert_eq!(cz.diagonal(), vec![r(1), r(1), r(1), r(-1)]);
        assert!(cz.is_diagonal());
    }

    #[test]
    fn g_matrix_matches_hand_product() {
        // independent oracle: multiply H⊗H · CZ · H⊗H entry by entry
        let h = RingMatrix::hadamard_power(2);
        let cz = RingMatrix::diagonal_from(&[r(1), r(1), r(1), r(-1)]);
        let mut oracle = RingMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = RingReal::ZERO;
                for m in 0..4 {
                    acc += h.get(i, m) * cz.get(m, m) * h.get(m, j);
                }
                oracle.set(i, j, acc);
            }
        }
        let expected = RingMatrix::from_int_rows(
            &[&[1, 1, 1, -1], &[1, 1, -1, 1], &[1, -1, 1, 1], &[-1, 1, 1, 1]],
            RingReal::HALF,
        );
        assert_eq!(oracle, expected);
        assert_eq!(gate_matrix(&Gate::g(1, 2)), expected);
    }

    #[test]
    fn embed_examples() {
        let x = embed(&Gate::x(1), 2).unwrap();
        let out = x.apply(&StateVector::<RingReal>::basis(2, 0b00).into_amplitudes());
        assert_eq!(out, StateVector::<RingReal>::basis(2, 0b10).into_amplitudes());

        let cx = embed(&Gate::cx(1, 2), 2).unwrap();
        let out = cx.apply(&StateVector::<RingReal>::basis(2, 0b10).into_amplitudes());
        assert_eq!(out, StateVector::<RingReal>::basis(2, 0b11).into_amplitudes());

        let hh = embed(&Gate::hh(1, 2), 2).unwrap();
        let out = hh.apply(&StateVector::<RingReal>::basis(2, 0).into_amplitudes());
        assert_eq!(out, vec![RingReal::HALF; 4]);

        assert_eq!(embed(&Gate::x(3), 2), Err(GateError::OutOfRange { index: 3, n: 2 }));
    }

    #[test]
    fn embed_agrees_with_positional_kron() {
        let g = Gate::cx(3, 1);
        let sparse = embed(&g, 3).unwrap().to_dense();
        let dense = RingMatrix::embed_positions(&gate_matrix(&g), &[2, 0], 3);
        assert_eq!(sparse, dense);
    }

    #[test]
    fn gate_properties() {
        let p = check_gate_properties(&Gate::ccz(1, 2, 3));
        assert_eq!(
            p,
            GateProperties {
                hermitian: true,
                z_diagonal: true,
                x_diagonal: false,
                locality: 3
            }
        );
        let p = check_gate_properties(&Gate::g(1, 2));
        assert_eq!(
            p,
            GateProperties {
                hermitian: true,
                z_diagonal: false,
                x_diagonal: true,
                locality: 2
            }
        );
        let p = check_gate_properties(&Gate::hh(1, 2));
        assert_eq!(
            p,
            GateProperties {
                hermitian: true,
                z_diagonal: false,
                x_diagonal: false,
                locality: 2
            }
        );
    }

    #[test]
    fn diagonal_gate_set_is_hermitian_unitary_involutory() {
        for g in [Gate::x(1), Gate::cz(1, 2), Gate::ccz(1, 2, 3), Gate::g(1, 2)] {
            let m = gate_matrix(&g);
            let p = check_gate_properties(&g);
            assert!(p.hermitian && p.locality <= 3);
            assert!(p.z_diagonal ^ p.x_diagonal, "{g}");
            assert!((&m.transpose() * &m).is_identity());
            assert!((&m * &m).is_identity());
        }
    }

    #[test]
    fn arity_and_duplicates_rejected() {
        assert!(matches!(
            Gate::new(GateKind::CCX, vec![1, 1, 2]),
            Err(GateError::DuplicateQubit(1))
        ));
        assert!(matches!(Gate::new(GateKind::CX, vec![1]), Err(GateError::Arity { .. })));
        assert!(matches!(Gate::new(GateKind::X, vec![0]), Err(GateError::ZeroQubit)));
        assert!(Gate::new(GateKind::IdX, vec![4]).is_ok());
        assert!("SWAP".parse::<GateKind>().is_err());
    }

    #[test]
    fn lowering_examples() {
        assert_eq!(controlled_lowering(&Gate::x(2), 1, 3).unwrap(), vec![Gate::cx(1, 2)]);
        let ccx = controlled_lowering(&Gate::ccx(2, 3, 4), 1, 5).unwrap();
        assert_eq!(ccx.len(), 4);
        assert!(ccx.iter().all(|g| g.kind() == GateKind::CCX));
        let hh = controlled_lowering(&Gate::hh(2, 3), 1, 4).unwrap();
        assert_eq!(hh.len(), 8);
        assert_eq!(hh.iter().filter(|g| g.kind() == GateKind::HH).count(), 2);
        assert!(matches!(
            controlled_lowering(&Gate::cx(1, 2), 1, 3),
            Err(GateError::Collision(1))
        ));
    }

    #[test]
    fn lowering_implements_controlled_gate() {
        let cases = [
            (Gate::x(2), 3),
            (Gate::cx(2, 3), 4),
            (Gate::ccx(2, 3, 4), 5),
            (Gate::hh(2, 3), 4),
        ];
        for (g, ancilla) in cases {
            let n = ancilla;
            let seq = controlled_lowering(&g, 1, ancilla).unwrap();
            let lhs = vec![Op::controlled(1, g.clone())];
            let rhs: Vec<Op> = seq.into_iter().map(Op::Gate).collect();
            assert!(verify_ops(&lhs, &rhs, n).unwrap(), "Γ({g})");
        }
    }

    #[test]
    fn verify_identity_detects_difference() {
        assert!(!verify_identity(&[Gate::cz(1, 2)], &[Gate::cx(1, 2)], 2).unwrap());
        assert!(verify_identity(&[Gate::hh(1, 2), Gate::hh(1, 2)], &[], 2).unwrap());
    }
}
