//! Fixture generators shared by the integration tests and the acceptance
//! harness.
#![allow(dead_code)]

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use xzsat::circuit::{apply_circuit, standard_form, Circuit, GateSet};
use xzsat::cnf::Cnf;
use xzsat::hamiltonian::{Basis, ProjectorTerm, XZInstance};
use xzsat::protocols::terms_commute;
use xzsat::{ExactState, Gate, GateKind, RingReal, StateVector};

/// A uniformly drawn `{X, CZ, CCZ, G}` gate on `n` qubits.
pub fn random_gt2_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let kinds: Vec<GateKind> = [GateKind::X, GateKind::CZ, GateKind::CCZ, GateKind::G]
        .into_iter()
        .filter(|k| k.arity() <= n)
        .collect();
    let kind = *kinds.choose(rng).unwrap();
    let mut qubits: Vec<usize> = (1..=n).collect();
    qubits.shuffle(rng);
    qubits.truncate(kind.arity());
    Gate::new(kind, qubits).unwrap()
}

pub fn random_gt2_circuit(rng: &mut impl Rng, n_proof: usize, n_anc: usize, gates: usize) -> Circuit {
    let n = n_proof + n_anc;
    let gates = (0..gates).map(|_| random_gt2_gate(rng, n)).collect();
    Circuit::new(n_proof, n_anc, gates, GateSet::Gt2).unwrap()
}

/// A circuit that accepts its witness with certainty: `R` followed by its
/// reverse, so the output qubit keeps the witness's first bit. With `flip`
/// an `X(1)` is appended and the witness starts with `0`.
pub struct YesFixture {
    pub circuit: Circuit,
    pub witness: ExactState,
}

pub fn yes_fixture(rng: &mut impl Rng, n_proof: usize, n_anc: usize, r: usize, flip: bool) -> YesFixture {
    let n = n_proof + n_anc;
    let forward: Vec<Gate> = (0..r).map(|_| random_gt2_gate(rng, n)).collect();
    let mut gates = forward.clone();
    gates.extend(forward.into_iter().rev());
    if flip {
        gates.push(Gate::x(1));
    }
    let c = Circuit::new(n_proof, n_anc, gates, GateSet::Gt2).unwrap();
    let first = ExactState::basis(1, usize::from(!flip));
    let witness = if n_proof > 1 {
        let mut rest = ExactState::basis(n_proof - 1, rng.random_range(0..1 << (n_proof - 1)));
        let spread: Vec<usize> = (1..n_proof).filter(|_| rng.random_bool(0.5)).collect();
        rest.apply_hadamards(&spread).unwrap();
        first.tensor(&rest)
    } else {
        first
    };
    YesFixture {
        circuit: standard_form(&c).unwrap(),
        witness,
    }
}

/// Probability-one output check by exact simulation of every branch.
pub fn output_is_one(c: &Circuit, witness: &ExactState) -> bool {
    let init = witness.tensor(&StateVector::basis(c.n_anc(), 0));
    let out = apply_circuit(c, &init).unwrap();
    let n = c.n_qubits();
    out.amplitudes()
        .iter()
        .enumerate()
        .all(|(i, a)| a.is_zero() || (i >> (n - 1)) & 1 == 1)
}

/// Fixed circuits with no proof register whose output qubit always reads 0.
pub fn no_circuits() -> Vec<(&'static str, Circuit)> {
    let c = |name, n_anc, gates: Vec<Gate>| {
        let raw = Circuit::new(0, n_anc, gates, GateSet::Gt2).unwrap();
        (name, standard_form(&raw).unwrap())
    };
    vec![
        c("empty-1", 1, vec![]),
        c("cz-2", 2, vec![Gate::cz(1, 2)]),
        c("x2-2", 2, vec![Gate::x(2)]),
        c("gg-2", 2, vec![Gate::g(1, 2), Gate::g(1, 2)]),
        c("xx-1", 1, vec![Gate::x(1), Gate::x(1)]),
        c("mixed-3", 3, vec![Gate::x(2), Gate::cz(1, 2), Gate::ccz(1, 2, 3)]),
    ]
}

/// Output-qubit-one probability for a circuit with empty proof register.
pub fn accept_probability(c: &Circuit) -> RingReal {
    let init = ExactState::basis(c.n_qubits(), 0);
    let out = apply_circuit(c, &init).unwrap();
    let n = c.n_qubits();
    out.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i >> (n - 1)) & 1 == 1)
        .map(|(_, &a)| a * a)
        .sum()
}

fn random_qubits(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut qs: Vec<usize> = (1..=n).collect();
    qs.shuffle(rng);
    qs.truncate(k);
    qs
}

/// Random commuting instance: candidate terms with parity-type or random
/// supports are kept only if they commute with everything kept so far.
pub fn random_commuting_instance(rng: &mut impl Rng, n: usize, target: usize) -> XZInstance {
    let mut terms: Vec<ProjectorTerm> = Vec::new();
    let mut attempts = 0;
    while terms.len() < target && attempts < 200 {
        attempts += 1;
        let basis = if rng.random_bool(0.5) { Basis::Z } else { Basis::X };
        let k = rng.random_range(1..=3.min(n));
        let qubits = random_qubits(rng, n, k);
        let support: Vec<usize> = if rng.random_bool(0.7) {
            let parity = usize::from(rng.random_bool(0.5));
            (0..1usize << k)
                .filter(|s| (s.count_ones() as usize) % 2 == parity)
                .collect()
        } else {
            let s: Vec<usize> = (0..1usize << k).filter(|_| rng.random_bool(0.4)).collect();
            if s.is_empty() || s.len() == 1 << k {
                continue;
            }
            s
        };
        let term = ProjectorTerm::new(basis, qubits, support).unwrap();
        if terms.iter().all(|t| terms_commute(t, &term)) {
            terms.push(term);
        }
    }
    XZInstance::new(n, terms, None, None).unwrap()
}

pub fn random_clause(rng: &mut impl Rng, n: usize) -> Vec<i64> {
    random_qubits(rng, n, 3)
        .into_iter()
        .map(|v| if rng.random_bool(0.5) { v as i64 } else { -(v as i64) })
        .collect()
}

/// A random 3-CNF satisfied by a planted assignment.
pub fn planted_3cnf(rng: &mut impl Rng, n: usize, m: usize) -> (Cnf, Vec<bool>) {
    let assignment: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let c = random_clause(rng, n);
        let cnf = Cnf {
            n_vars: n,
            clauses: vec![c.clone()],
        };
        if cnf.satisfied_by(&assignment) {
            clauses.push(c);
        }
    }
    (Cnf { n_vars: n, clauses }, assignment)
}

pub fn brute_force_satisfiable(cnf: &Cnf) -> bool {
    (0..1u64 << cnf.n_vars).any(|v| {
        let a: Vec<bool> = (0..cnf.n_vars).map(|j| (v >> j) & 1 == 1).collect();
        cnf.satisfied_by(&a)
    })
}

/// A random 3-CNF confirmed unsatisfiable by exhaustive search.
pub fn random_unsat_3cnf(rng: &mut impl Rng, n: usize) -> Cnf {
    loop {
        let clauses = (0..10 * n).map(|_| random_clause(rng, n)).collect();
        let cnf = Cnf { n_vars: n, clauses };
        if !brute_force_satisfiable(&cnf) {
            return cnf;
        }
    }
}
