//! Circuits, their text format, gate-set compilation and standard-form
//! padding.
//!
//! Text format (UTF-8, `#` starts a comment):
//!
//! ```text
//! circuit v1
//! proof 1
//! anc 1
//! gateset g2        # optional; inferred from the gates when absent
//! CX 1 2
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gates::{check_gate_properties, gate_matrix, swap_as_cx, verify_identity, Gate, GateError, GateKind};
use crate::identities::f_hat;
use crate::registry::{Named, Registry};
use crate::state::{Amplitude, StateVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("gate {index} ({gate}): {source}")]
    Gate {
        index: usize,
        gate: String,
        #[source]
        source: GateError,
    },
    #[error("gate {gate} is not in gate set {gateset}")]
    WrongGateSet { gate: String, gateset: GateSet },
    #[error("expected a {expected} circuit, found {found}")]
    WrongInput { expected: &'static str, found: GateSet },
    #[error("standard form violated at position {position}: {message}")]
    StandardForm { position: usize, message: String },
    #[error("gate {0} is diagonal in neither the Z nor the X basis")]
    NotBasisDiagonal(String),
    #[error("local rewrite of {0} failed exact verification")]
    RewriteMismatch(String),
    #[error("state has {found} qubits, circuit acts on {expected}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSet {
    /// `{X, CX, CCX, HH}`
    G2,
    /// `{X, CZ, CCZ, G}`
    Gt2,
    /// `{X, CZ, CCZ, G}` plus placeholders, in alternating standard form.
    Gt2Standard,
}

impl GateSet {
    pub fn tag(self) -> &'static str {
        match self {
            GateSet::G2 => "g2",
            GateSet::Gt2 => "gt2",
            GateSet::Gt2Standard => "gt2_standard",
        }
    }

    pub fn contains(self, kind: GateKind) -> bool {
        use GateKind::*;
        match self {
            GateSet::G2 => matches!(kind, X | CX | CCX | HH),
            GateSet::Gt2 => matches!(kind, X | CZ | CCZ | G),
            GateSet::Gt2Standard => matches!(kind, X | CZ | CCZ | G | IdX | IdZ),
        }
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GateSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g2" => Ok(GateSet::G2),
            "gt2" => Ok(GateSet::Gt2),
            "gt2_standard" => Ok(GateSet::Gt2Standard),
            other => Err(format!("unknown gate set {other:?}")),
        }
    }
}

/// A verification circuit. Proof qubits are `1..=n_proof`, ancillas follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_proof: usize,
    n_anc: usize,
    gates: Vec<Gate>,
    gateset: GateSet,
}

impl Circuit {
    pub fn new(n_proof: usize, n_anc: usize, gates: Vec<Gate>, gateset: GateSet) -> Result<Self, CircuitError> {
        let c = Circuit {
            n_proof,
            n_anc,
            gates,
            gateset,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CircuitError> {
        let n = self.n_qubits();
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(&q) = g.qubits().iter().find(|&&q| q > n) {
                return Err(CircuitError::Gate {
                    index: i + 1,
                    gate: g.to_string(),
                    source: GateError::OutOfRange { index: q, n },
                });
            }
            if !self.gateset.contains(g.kind()) {
                return Err(CircuitError::WrongGateSet {
                    gate: g.to_string(),
                    gateset: self.gateset,
                });
            }
        }
        if self.gateset == GateSet::Gt2Standard {
            check_standard_form(&self.gates)?;
        }
        Ok(())
    }

    pub fn n_proof(&self) -> usize {
        self.n_proof
    }

    pub fn n_anc(&self) -> usize {
        self.n_anc
    }

    pub fn n_qubits(&self) -> usize {
        self.n_proof + self.n_anc
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gateset(&self) -> GateSet {
        self.gateset
    }

    /// Gate count `T`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Applies the gates in order, gate 1 first.
    pub fn apply<A: Amplitude>(&self, state: &mut StateVector<A>) -> Result<(), CircuitError> {
        if state.n() != self.n_qubits() {
            return Err(CircuitError::Dimension {
                expected: self.n_qubits(),
                found: state.n(),
            });
        }
        (1..=self.gates.len()).try_for_each(|t| self.apply_step(t, state))
    }

    /// Applies gate `t` (1-based) alone.
    pub fn apply_step<A: Amplitude>(&self, t: usize, state: &mut StateVector<A>) -> Result<(), CircuitError> {
        let g = &self.gates[t - 1];
        state
            .apply_local(&gate_matrix(g), g.qubits())
            .map_err(|e| CircuitError::Gate {
                index: t,
                gate: g.to_string(),
                source: e.into(),
            })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "circuit v1\nproof {}\nanc {}\ngateset {}\n",
            self.n_proof, self.n_anc, self.gateset
        );
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

pub fn apply_circuit<A: Amplitude>(c: &Circuit, state: &StateVector<A>) -> Result<StateVector<A>, CircuitError> {
    let mut out = state.clone();
    c.apply(&mut out)?;
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

fn infer_gateset(gates: &[Gate]) -> GateSet {
    if gates.iter().any(|g| g.kind().is_placeholder()) {
        GateSet::Gt2Standard
    } else if gates
        .iter()
        .any(|g| matches!(g.kind(), GateKind::CZ | GateKind::CCZ | GateKind::G))
    {
        GateSet::Gt2
    } else {
        GateSet::G2
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty circuit file"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["circuit", "v1"] {
        return Err(parse_err(
            line,
            format!("expected header \"circuit v1\", found {header:?}"),
        ));
    }
    let mut count = |key: &str| -> Result<usize, CircuitError> {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(line, format!("missing \"{key}\" line")))?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts.as_slice() {
            [k, v] if *k == key => v
                .parse()
                .map_err(|_| parse_err(line, format!("invalid {key} count {v:?}"))),
            _ => Err(parse_err(line, format!("expected \"{key} <int>\", found {text:?}"))),
        }
    };
    let n_proof = count("proof")?;
    let n_anc = count("anc")?;
    let n = n_proof + n_anc;

    let mut declared = None;
    let mut gates = Vec::new();
    for (line, text) in lines {
        let mut parts = text.split_whitespace();
        let head = parts.next().unwrap_or_default();
        if head == "gateset" {
            if declared.is_some() || !gates.is_empty() {
                return Err(parse_err(line, "gateset must follow the header, once"));
            }
            let tag = parts.next().unwrap_or_default();
            declared = Some(tag.parse::<GateSet>().map_err(|e| parse_err(line, e))?);
            continue;
        }
        let kind: GateKind = head.parse().map_err(|e: GateError| parse_err(line, e.to_string()))?;
        let qubits = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| parse_err(line, format!("invalid qubit index {p:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gate = Gate::new(kind, qubits).map_err(|e| parse_err(line, e.to_string()))?;
        if let Some(&q) = gate.qubits().iter().find(|&&q| q > n) {
            return Err(parse_err(line, format!("qubit index {q} out of range for {n} qubits")));
        }
        gates.push((line, gate));
    }
    let gateset = declared.unwrap_or_else(|| infer_gateset(&gates.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>()));
    for (line, g) in &gates {
        if !gateset.contains(g.kind()) {
            return Err(parse_err(*line, format!("gate {g} is not in gate set {gateset}")));
        }
    }
    Circuit::new(n_proof, n_anc, gates.into_iter().map(|(_, g)| g).collect(), gateset)
}

pub fn serialize_circuit(c: &Circuit) -> String {
    c.to_text()
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}

/// Standard-form law: odd positions X-diagonal, even positions Z-diagonal,
/// odd length at least 3. Placeholders count as both.
pub fn check_standard_form(gates: &[Gate]) -> Result<(), CircuitError> {
    let t = gates.len();
    if t < 3 || t.is_multiple_of(2) {
        return Err(CircuitError::StandardForm {
            position: t,
            message: format!("gate count {t} must be odd and at least 3"),
        });
    }
    for (i, g) in gates.iter().enumerate() {
        let position = i + 1;
        if g.kind().is_placeholder() {
            continue;
        }
        let p = check_gate_properties(g);
        let ok = if position % 2 == 1 { p.x_diagonal } else { p.z_diagonal };
        if !ok {
            let basis = if position % 2 == 1 { "X" } else { "Z" };
            return Err(CircuitError::StandardForm {
                position,
                message: format!("{g} is not diagonal in the {basis} basis"),
            });
        }
    }
    Ok(())
}

/// Checks a local rewrite exactly on a compact register holding only the
/// qubits it touches.
fn checked_rewrite(original: &Gate, replacement: Vec<Gate>) -> Result<Vec<Gate>, CircuitError> {
    let mut touched: Vec<usize> = original
        .qubits()
        .iter()
        .chain(replacement.iter().flat_map(|g| g.qubits()))
        .copied()
        .collect();
    touched.sort_unstable();
    touched.dedup();
    let local = |q: usize| touched.iter().position(|&t| t == q).unwrap() + 1;
    let remap = |g: &Gate| g.remap(local).expect("remapping preserves distinctness");
    let lhs = vec![remap(original)];
    let rhs: Vec<Gate> = replacement.iter().map(remap).collect();
    match verify_identity(&lhs, &rhs, touched.len()) {
        Ok(true) => Ok(replacement),
        _ => Err(CircuitError::RewriteMismatch(original.to_string())),
    }
}

fn cx_to_gt2(i: usize, j: usize, a: usize) -> Vec<Gate> {
    let mut out = f_hat(j, a);
    out.push(Gate::cz(i, a));
    out.extend(f_hat(j, a));
    out
}

/// Rewrites a `{X, CX, CCX, HH}` circuit into `{X, CZ, CCZ, G}`. One scratch
/// ancilla is appended to the ancilla register when any gate needs it; it is
/// shared by all rewrites and returned to its input state by each.
pub fn compile_g2_to_gt2(c: &Circuit) -> Result<Circuit, CircuitError> {
    if c.gateset != GateSet::G2 {
        return Err(CircuitError::WrongInput {
            expected: "g2",
            found: c.gateset,
        });
    }
    let needs_scratch = c.gates.iter().any(|g| g.kind() != GateKind::X);
    let scratch = c.n_qubits() + 1;
    let mut out = Vec::new();
    for g in &c.gates {
        let q = g.qubits();
        let replacement = match g.kind() {
            GateKind::X => vec![g.clone()],
            GateKind::CX => cx_to_gt2(q[0], q[1], scratch),
            GateKind::CCX => {
                let mut v = f_hat(q[2], scratch);
                v.push(Gate::ccz(q[0], q[1], scratch));
                v.extend(f_hat(q[2], scratch));
                v
            }
            GateKind::HH => {
                // HH = SWAP · F̂, SWAP as three CX
                let mut v = f_hat(q[0], q[1]);
                for cx in swap_as_cx(q[0], q[1]) {
                    v.extend(cx_to_gt2(cx.qubits()[0], cx.qubits()[1], scratch));
                }
                v
            }
            _ => unreachable!("validated g2 circuit"),
        };
        out.extend(checked_rewrite(g, replacement)?);
    }
    Circuit::new(c.n_proof, c.n_anc + usize::from(needs_scratch), out, GateSet::Gt2)
}

fn cz_to_g2(i: usize, j: usize, a: usize) -> Vec<Gate> {
    vec![Gate::hh(j, a), Gate::cx(i, j), Gate::hh(j, a)]
}

/// Rewrites a `{X, CZ, CCZ, G}` circuit into `{X, CX, CCX, HH}`, dropping
/// identity placeholders.
pub fn compile_gt2_to_g2(c: &Circuit) -> Result<Circuit, CircuitError> {
    if c.gateset == GateSet::G2 {
        return Err(CircuitError::WrongInput {
            expected: "gt2",
            found: c.gateset,
        });
    }
    let needs_scratch = c
        .gates
        .iter()
        .any(|g| matches!(g.kind(), GateKind::CZ | GateKind::CCZ | GateKind::G));
    let scratch = c.n_qubits() + 1;
    let mut out = Vec::new();
    for g in &c.gates {
        let q = g.qubits();
        let replacement = match g.kind() {
            GateKind::X => vec![g.clone()],
            GateKind::IdX | GateKind::IdZ => continue,
            GateKind::CZ => cz_to_g2(q[0], q[1], scratch),
            GateKind::CCZ => vec![
                Gate::hh(q[2], scratch),
                Gate::ccx(q[0], q[1], q[2]),
                Gate::hh(q[2], scratch),
            ],
            GateKind::G => {
                let mut v = vec![Gate::hh(q[0], q[1])];
                v.extend(cz_to_g2(q[0], q[1], scratch));
                v.push(Gate::hh(q[0], q[1]));
                v
            }
            _ => unreachable!("validated gt2 circuit"),
        };
        out.extend(checked_rewrite(g, replacement)?);
    }
    Circuit::new(c.n_proof, c.n_anc + usize::from(needs_scratch), out, GateSet::G2)
}

/// Pads a `{X, CZ, CCZ, G}` circuit of `τ` gates to `T = 2τ + 1` gates:
/// X-diagonal gate `j` goes to position `2j − 1`, Z-diagonal to `2j`, and the
/// remaining slots get `ID_X` (odd) or `ID_Z` (even). An empty circuit pads
/// to `T = 3`.
pub fn standard_form(c: &Circuit) -> Result<Circuit, CircuitError> {
    if c.gateset != GateSet::Gt2 {
        return Err(CircuitError::WrongInput {
            expected: "gt2",
            found: c.gateset,
        });
    }
    let t = (2 * c.gates.len() + 1).max(3);
    let mut slots: Vec<Option<Gate>> = vec![None; t];
    for (j, g) in c.gates.iter().enumerate() {
        let p = check_gate_properties(g);
        let position = if p.x_diagonal {
            2 * (j + 1) - 1
        } else if p.z_diagonal {
            2 * (j + 1)
        } else {
            return Err(CircuitError::NotBasisDiagonal(g.to_string()));
        };
        slots[position - 1] = Some(g.clone());
    }
    let gates = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.unwrap_or_else(|| if i % 2 == 0 { Gate::id_x() } else { Gate::id_z() }))
        .collect();
    Circuit::new(c.n_proof, c.n_anc, gates, GateSet::Gt2Standard)
}

/// A named circuit-to-circuit transformation.
pub trait CompilePass: Named + Send + Sync {
    fn run(&self, c: &Circuit) -> Result<Circuit, CircuitError>;
}

struct G2ToGt2;
struct Gt2ToG2;
struct StandardForm;

impl Named for G2ToGt2 {
    fn name(&self) -> &'static str {
        "g2-to-gt2"
    }
}
impl CompilePass for G2ToGt2 {
    fn run(&self, c: &Circuit) -> Result<Circuit, CircuitError> {
        compile_g2_to_gt2(c)
    }
}

impl Named for Gt2ToG2 {
    fn name(&self) -> &'static str {
        "gt2-to-g2"
    }
}
impl CompilePass for Gt2ToG2 {
    fn run(&self, c: &Circuit) -> Result<Circuit, CircuitError> {
        compile_gt2_to_g2(c)
    }
}

impl Named for StandardForm {
    fn name(&self) -> &'static str {
        "standard-form"
    }
}
impl CompilePass for StandardForm {
    fn run(&self, c: &Circuit) -> Result<Circuit, CircuitError> {
        standard_form(c)
    }
}

pub fn pass_registry() -> Registry<dyn CompilePass> {
    Registry::<dyn CompilePass>::new("compile pass")
        .with(Box::new(G2ToGt2))
        .with(Box::new(Gt2ToG2))
        .with(Box::new(StandardForm))
}

/// Pass names that take a circuit from its gate set to `target`.
pub fn plan(from: GateSet, target: GateSet) -> Result<Vec<&'static str>, CircuitError> {
    use GateSet::*;
    match (from, target) {
        (a, b) if a == b => Ok(vec![]),
        (G2, Gt2) => Ok(vec!["g2-to-gt2"]),
        (G2, Gt2Standard) => Ok(vec!["g2-to-gt2", "standard-form"]),
        (Gt2, Gt2Standard) => Ok(vec!["standard-form"]),
        (Gt2 | Gt2Standard, G2) => Ok(vec!["gt2-to-g2"]),
        (Gt2Standard, Gt2) => Err(CircuitError::WrongInput {
            expected: "g2 or gt2",
            found: from,
        }),
        _ => unreachable!("all pairs covered"),
    }
}

/// Runs the passes of [`plan`] in order.
pub fn compile_to(c: &Circuit, target: GateSet) -> Result<Circuit, CircuitError> {
    let passes = pass_registry();
    plan(c.gateset(), target)?.into_iter().try_fold(c.clone(), |acc, name| {
        passes.get(name).expect("registered pass").run(&acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingReal;
    use crate::state::ExactState;

    fn kinds(c: &Circuit) -> Vec<GateKind> {
        c.gates().iter().map(Gate::kind).collect()
    }

    #[test]
    fn parse_minimal() {
        let c = parse_circuit("circuit v1\nproof 1\nanc 1\nCX 1 2\n").unwrap();
        assert_eq!(c.n_proof(), 1);
        assert_eq!(c.n_anc(), 1);
        assert_eq!(c.gates(), &[Gate::cx(1, 2)]);
        assert_eq!(c.gateset(), GateSet::G2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_circuit("circuit v1\nproof 2\nanc 1\n# comment\nCCX 1 1 2\n").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 5, .. }), "{err}");
        assert!(err.to_string().contains("duplicate"));
        let err = parse_circuit("circuit v1\nproof 1\nanc 0\nFOO 1\n").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 4, .. }));
        let err = parse_circuit("circuit v1\nproof 1\nanc 0\nCX 1\n").unwrap_err();
        assert!(err.to_string().contains("expects 2"));
        let err = parse_circuit("circuit v1\nproof 1\nanc 0\nX 2\n").unwrap_err();
        assert!(err.to_string().contains("out of range"));
        let err = parse_circuit("circuit v1\nproof 2\nanc 0\nCX 1 2\nCZ 1 2\n").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn text_round_trip_is_canonical() {
        let text = "circuit v1\n proof 2 \nanc 1 # scratch\n\nX 1\nCZ 1 2   \nG 2 3\nCCZ 3 1 2\n";
        let c = parse_circuit(text).unwrap();
        let canonical = c.to_text();
        assert_eq!(parse_circuit(&canonical).unwrap().to_text(), canonical);
        assert!(canonical.starts_with("circuit v1\nproof 2\nanc 1\ngateset gt2\n"));
    }

    #[test]
    fn g2_to_gt2_examples() {
        let c = Circuit::new(2, 0, vec![Gate::cx(1, 2)], GateSet::G2).unwrap();
        let out = compile_g2_to_gt2(&c).unwrap();
        assert_eq!(out.n_anc(), 1);
        assert!(out.gates().iter().all(|g| GateSet::Gt2.contains(g.kind())));
        assert!(verify_identity(c.gates(), out.gates(), 3).unwrap());

        let c = Circuit::new(1, 0, vec![Gate::x(1)], GateSet::G2).unwrap();
        let out = compile_g2_to_gt2(&c).unwrap();
        assert_eq!(out.gates(), &[Gate::x(1)]);
        assert_eq!(out.n_anc(), 0);

        let c = Circuit::new(2, 0, vec![Gate::hh(1, 2)], GateSet::G2).unwrap();
        let out = compile_g2_to_gt2(&c).unwrap();
        assert!(verify_identity(c.gates(), out.gates(), 3).unwrap());
    }

    #[test]
    fn gt2_to_g2_examples() {
        let c = Circuit::new(2, 0, vec![Gate::cz(1, 2)], GateSet::Gt2).unwrap();
        let out = compile_gt2_to_g2(&c).unwrap();
        assert_eq!(out.gates(), &[Gate::hh(2, 3), Gate::cx(1, 2), Gate::hh(2, 3)]);

        let c = Circuit::new(2, 0, vec![Gate::g(1, 2)], GateSet::Gt2).unwrap();
        let out = compile_gt2_to_g2(&c).unwrap();
        assert_eq!(out.gates().first(), Some(&Gate::hh(1, 2)));
        assert_eq!(out.gates().last(), Some(&Gate::hh(1, 2)));
        assert_eq!(out.len(), 5);

        let c = Circuit::new(1, 0, vec![Gate::x(1)], GateSet::Gt2).unwrap();
        assert_eq!(compile_gt2_to_g2(&c).unwrap().gates(), &[Gate::x(1)]);
    }

    #[test]
    fn compiled_g_acts_like_g_on_all_basis_inputs() {
        // oracle: exact matrix of G applied to the first two qubits
        let c = Circuit::new(2, 0, vec![Gate::g(1, 2)], GateSet::Gt2).unwrap();
        let compiled = compile_gt2_to_g2(&c).unwrap();
        let g = gate_matrix(&Gate::g(1, 2));
        for input in 0..8usize {
            let out = apply_circuit(&compiled, &ExactState::basis(3, input)).unwrap();
            let (pair, anc) = (input >> 1, input & 1);
            let mut expected = ExactState::zeros(3);
            for row in 0..4 {
                expected.amplitudes_mut()[(row << 1) | anc] = g.get(row, pair);
            }
            assert_eq!(out, expected, "input {input:03b}");
        }
    }

    #[test]
    fn standard_form_examples() {
        let c = Circuit::new(2, 0, vec![Gate::cz(1, 2)], GateSet::Gt2).unwrap();
        let s = standard_form(&c).unwrap();
        assert_eq!(kinds(&s), vec![GateKind::IdX, GateKind::CZ, GateKind::IdX]);

        let c = Circuit::new(2, 0, vec![Gate::g(1, 2)], GateSet::Gt2).unwrap();
        let s = standard_form(&c).unwrap();
        assert_eq!(kinds(&s), vec![GateKind::G, GateKind::IdZ, GateKind::IdX]);

        let c = Circuit::new(1, 0, vec![], GateSet::Gt2).unwrap();
        let s = standard_form(&c).unwrap();
        assert_eq!(kinds(&s), vec![GateKind::IdX, GateKind::IdZ, GateKind::IdX]);
        assert_eq!(s.gateset(), GateSet::Gt2Standard);
    }

    #[test]
    fn standard_form_rejects_bad_layouts() {
        assert!(Circuit::new(
            2,
            0,
            vec![Gate::cz(1, 2), Gate::id_z(), Gate::id_x()],
            GateSet::Gt2Standard
        )
        .is_err());
        assert!(Circuit::new(1, 0, vec![Gate::id_x()], GateSet::Gt2Standard).is_err());
        assert!(standard_form(&Circuit::new(2, 0, vec![Gate::cx(1, 2)], GateSet::G2).unwrap()).is_err());
    }

    #[test]
    fn compile_to_chains_passes() {
        let c = Circuit::new(2, 0, vec![Gate::cx(1, 2), Gate::x(1)], GateSet::G2).unwrap();
        let s = compile_to(&c, GateSet::Gt2Standard).unwrap();
        assert_eq!(s.gateset(), GateSet::Gt2Standard);
        assert_eq!(s.n_anc(), 1);
        let back = compile_to(&s, GateSet::G2).unwrap();
        assert!(verify_identity(c.gates(), back.gates(), back.n_qubits()).unwrap());
        assert!(compile_to(&s, GateSet::Gt2).is_err());
        assert_eq!(pass_registry().names(), vec!["g2-to-gt2", "gt2-to-g2", "standard-form"]);
    }

    #[test]
    fn apply_examples() {
        let c = Circuit::new(1, 0, vec![Gate::x(1)], GateSet::G2).unwrap();
        assert_eq!(
            apply_circuit(&c, &ExactState::basis(1, 0)).unwrap(),
            ExactState::basis(1, 1)
        );

        let c = Circuit::new(2, 0, vec![Gate::hh(1, 2), Gate::hh(1, 2)], GateSet::G2).unwrap();
        let psi = ExactState::from_amplitudes(vec![
            RingReal::HALF,
            RingReal::HALF,
            RingReal::FRAC_1_SQRT_2,
            RingReal::ZERO,
        ])
        .unwrap();
        assert_eq!(apply_circuit(&c, &psi).unwrap(), psi);

        let wrong = ExactState::basis(3, 0);
        assert!(matches!(apply_circuit(&c, &wrong), Err(CircuitError::Dimension { .. })));
    }
}
