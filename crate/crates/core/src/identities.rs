//! The exact circuit identities behind control lowering and gate-set
//! interchange, as a fixture suite.

use serde::Serialize;

use crate::gates::{swap_as_cx, verify_ops, Gate, GateError, GateKind, Op};

/// A named operator identity `lhs = rhs` on `n` qubits.
#[derive(Debug, Clone)]
pub struct Identity {
    pub name: String,
    pub n: usize,
    pub lhs: Vec<Op>,
    pub rhs: Vec<Op>,
}

impl Identity {
    pub fn new(name: impl Into<String>, n: usize, lhs: Vec<Op>, rhs: Vec<Op>) -> Self {
        Identity {
            name: name.into(),
            n,
            lhs,
            rhs,
        }
    }

    pub fn verify(&self) -> Result<bool, GateError> {
        verify_ops(&self.lhs, &self.rhs, self.n)
    }

    /// The same identity with every CZ on the right-hand side replaced by a
    /// CX, or `None` when that side has no CZ. Used to exercise failure paths.
    pub fn with_cz_as_cx(&self) -> Option<Identity> {
        fn swap(op: &Op, hit: &mut bool) -> Op {
            match op {
                Op::Gate(g) if g.kind() == GateKind::CZ => {
                    *hit = true;
                    Op::Gate(Gate::cx(g.qubits()[0], g.qubits()[1]))
                }
                Op::Controlled { control, inner } => Op::controlled(*control, swap(inner, hit)),
                other => other.clone(),
            }
        }
        let mut hit = false;
        let rhs = self.rhs.iter().map(|op| swap(op, &mut hit)).collect();
        hit.then(|| Identity { rhs, ..self.clone() })
    }
}

fn ops(gates: impl IntoIterator<Item = Gate>) -> Vec<Op> {
    gates.into_iter().map(Op::Gate).collect()
}

fn seq(parts: Vec<Vec<Op>>) -> Vec<Op> {
    parts.into_iter().flatten().collect()
}

/// `F̂(i, j) = Ĝ·CZ·Ĝ` as a gate list.
pub fn f_hat(i: usize, j: usize) -> Vec<Gate> {
    vec![Gate::g(i, j), Gate::cz(i, j), Gate::g(i, j)]
}

/// Every identity used by control lowering and by the two compilation
/// directions. Sequences are in application order; `Op::Swap` is the bare
/// basis permutation, independent of any gate decomposition.
pub fn standard_identities() -> Vec<Identity> {
    let swap = |i, j| vec![Op::Swap(i, j)];
    let cswap = |c, i, j| vec![Op::controlled(c, Op::Swap(i, j))];
    vec![
        Identity::new(
            "control(X) = CX",
            2,
            vec![Op::controlled(1, Gate::x(2))],
            ops([Gate::cx(1, 2)]),
        ),
        Identity::new(
            "control(CX) = CCX",
            3,
            vec![Op::controlled(1, Gate::cx(2, 3))],
            ops([Gate::ccx(1, 2, 3)]),
        ),
        Identity::new(
            "control(CCX)_{1,2,3,4} (x) I_5 = CCX_{1,2,5} CCX_{3,5,4} CCX_{1,2,5} CCX_{3,5,4}",
            5,
            vec![Op::controlled(1, Gate::ccx(2, 3, 4))],
            ops([
                Gate::ccx(3, 5, 4),
                Gate::ccx(1, 2, 5),
                Gate::ccx(3, 5, 4),
                Gate::ccx(1, 2, 5),
            ]),
        ),
        Identity::new(
            "SWAP_{1,2} = CX_{1,2} CX_{2,1} CX_{1,2}",
            2,
            swap(1, 2),
            ops(swap_as_cx(1, 2)),
        ),
        Identity::new(
            "control(SWAP)_{1,2,3} = CCX_{1,2,3} CCX_{1,3,2} CCX_{1,2,3}",
            3,
            cswap(1, 2, 3),
            ops([Gate::ccx(1, 2, 3), Gate::ccx(1, 3, 2), Gate::ccx(1, 2, 3)]),
        ),
        Identity::new(
            "control(HH)_{1,2,3} (x) I_4 = control(SWAP)_{1,2,3} HH_{3,4} control(SWAP)_{1,2,3} HH_{3,4}",
            4,
            vec![Op::controlled(1, Gate::hh(2, 3))],
            seq(vec![
                ops([Gate::hh(3, 4)]),
                cswap(1, 2, 3),
                ops([Gate::hh(3, 4)]),
                cswap(1, 2, 3),
            ]),
        ),
        Identity::new(
            "CZ_{1,2} (x) I_3 = HH_{2,3} CX_{1,2} HH_{2,3}",
            3,
            ops([Gate::cz(1, 2)]),
            ops([Gate::hh(2, 3), Gate::cx(1, 2), Gate::hh(2, 3)]),
        ),
        Identity::new(
            "CCZ_{1,2,3} (x) I_4 = HH_{3,4} CCX_{1,2,3} HH_{3,4}",
            4,
            ops([Gate::ccz(1, 2, 3)]),
            ops([Gate::hh(3, 4), Gate::ccx(1, 2, 3), Gate::hh(3, 4)]),
        ),
        Identity::new(
            "G_{1,2} = HH_{1,2} CZ_{1,2} HH_{1,2}",
            2,
            ops([Gate::g(1, 2)]),
            ops([Gate::hh(1, 2), Gate::cz(1, 2), Gate::hh(1, 2)]),
        ),
        Identity::new(
            "F_{1,2} := SWAP_{1,2} HH_{1,2} = G_{1,2} CZ_{1,2} G_{1,2}",
            2,
            seq(vec![ops([Gate::hh(1, 2)]), swap(1, 2)]),
            ops(f_hat(1, 2)),
        ),
        Identity::new(
            "HH_{1,2} SWAP_{1,2} = SWAP_{1,2} HH_{1,2}",
            2,
            seq(vec![swap(1, 2), ops([Gate::hh(1, 2)])]),
            seq(vec![ops([Gate::hh(1, 2)]), swap(1, 2)]),
        ),
        Identity::new(
            "CX_{1,2} (x) I_3 = F_{2,3} CZ_{1,3} F_{2,3}",
            3,
            ops([Gate::cx(1, 2)]),
            ops(f_hat(2, 3).into_iter().chain([Gate::cz(1, 3)]).chain(f_hat(2, 3))),
        ),
        Identity::new(
            "CCX_{1,2,3} (x) I_4 = F_{3,4} CCZ_{1,2,4} F_{3,4}",
            4,
            ops([Gate::ccx(1, 2, 3)]),
            ops(f_hat(3, 4).into_iter().chain([Gate::ccz(1, 2, 4)]).chain(f_hat(3, 4))),
        ),
        Identity::new(
            "HH_{1,2} = SWAP_{1,2} F_{1,2}",
            2,
            ops([Gate::hh(1, 2)]),
            seq(vec![ops(f_hat(1, 2)), swap(1, 2)]),
        ),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub qubits: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub passed: usize,
    pub total: usize,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_exact(&self) -> bool {
        self.passed == self.total
    }

    pub fn first_failure(&self) -> Option<&IdentityResult> {
        self.results.iter().find(|r| !r.exact)
    }
}

pub fn run_identities(identities: &[Identity]) -> Result<IdentityReport, GateError> {
    let mut results = Vec::with_capacity(identities.len());
    for id in identities {
        results.push(IdentityResult {
            name: id.name.clone(),
            qubits: id.n,
            exact: id.verify()?,
        });
    }
    Ok(IdentityReport {
        passed: results.iter().filter(|r| r.exact).count(),
        total: results.len(),
        results,
    })
}
