//! XZ projector instances and the circuit-to-Hamiltonian construction.
//!
//! A term is `Π = Σ_{s ∈ support} V|s⟩⟨s|V` with `V = I` (Z basis) or
//! `V = Ĥ^{⊗k}` (X basis). Bit `j` of a support string belongs to
//! `qubits[j]`; the first qubit is the most significant local bit.
//!
//! Global numbering: circuit qubits `1..=n`, then clock qubit `j` at `n + j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, GateSet};
use crate::gates::gate_matrix;
use crate::matrix::RingMatrix;
use crate::ring::RingReal;

/// Maximum locality of a term.
pub const MAX_LOCALITY: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Z => "Z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermViolation {
    #[error("term is not idempotent")]
    NotIdempotent,
    #[error("term is not symmetric")]
    NotSymmetric,
    #[error("term is not diagonal in the {0} basis")]
    NotDiagonal(Basis),
    #[error("diagonal entry {index} in the {basis} basis is {value}, not 0 or 1")]
    NonBinary { basis: Basis, index: usize, value: String },
    #[error("term acts on {0} qubits, more than {MAX_LOCALITY}")]
    Locality(usize),
    #[error("term is zero")]
    Zero,
    #[error("term equals identity")]
    Identity,
    #[error("qubit index {index} out of range 1..={n}")]
    QubitRange { index: usize, n: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("support entry {0} does not fit the term's qubits")]
    SupportRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("term {index}: {violation}")]
    Term { index: usize, violation: TermViolation },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("instance JSON: {0}")]
    Json(String),
    #[error("circuit must be in standard form, found {0}")]
    NotStandard(GateSet),
    #[error("circuit needs at least one qubit")]
    NoQubits,
    #[error("time step {t}: {violation}")]
    Propagation { t: usize, violation: TermViolation },
}

/// A basis-diagonal projector on at most six qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectorTerm {
    basis: Basis,
    qubits: Vec<usize>,
    support: Vec<usize>,
}

impl ProjectorTerm {
    /// Support entries are local basis indices; they are sorted and deduplicated.
    /// Structural problems (duplicates, out-of-range support) are rejected;
    /// degenerate supports are left for [`ProjectorTerm::violations`].
    pub fn new(
        basis: Basis,
        qubits: Vec<usize>,
        support: impl IntoIterator<Item = usize>,
    ) -> Result<Self, TermViolation> {
        let mut seen = BTreeSet::new();
        for &q in &qubits {
            if q == 0 {
                return Err(TermViolation::QubitRange { index: 0, n: 0 });
            }
            if !seen.insert(q) {
                return Err(TermViolation::DuplicateQubit(q));
            }
        }
        if qubits.len() > 16 {
            return Err(TermViolation::Locality(qubits.len()));
        }
        let support: BTreeSet<usize> = support.into_iter().collect();
        if let Some(&s) = support.iter().find(|&&s| s >> qubits.len() != 0) {
            return Err(TermViolation::SupportRange(s));
        }
        Ok(ProjectorTerm {
            basis,
            qubits,
            support: support.into_iter().collect(),
        })
    }

    /// Builds a term from support bitstrings such as `"01"`.
    pub fn from_strings(basis: Basis, qubits: Vec<usize>, support: &[&str]) -> Result<Self, TermViolation> {
        let k = qubits.len();
        let parsed = support
            .iter()
            .map(|s| parse_bitstring(s, k).ok_or(TermViolation::SupportRange(usize::MAX)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(basis, qubits, parsed)
    }

    /// Reads the support off an explicit local operator, which must be a
    /// 0/1-diagonal matrix in `basis`.
    pub fn from_matrix(basis: Basis, qubits: Vec<usize>, m: &RingMatrix) -> Result<Self, TermViolation> {
        let k = qubits.len();
        assert_eq!(m.dim(), 1 << k, "operator dimension must match the qubit list");
        let support = diagonal_support(basis, m)?;
        let term = Self::new(basis, qubits, support)?;
        match term.violations().into_iter().next() {
            Some(v) => Err(v),
            None => Ok(term),
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Sorted local indices of the support.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn locality(&self) -> usize {
        self.qubits.len()
    }

    pub fn contains(&self, local: usize) -> bool {
        self.support.binary_search(&local).is_ok()
    }

    pub fn support_strings(&self) -> Vec<String> {
        self.support.iter().map(|&s| bitstring(s, self.locality())).collect()
    }

    /// `Σ_s V|s⟩⟨s|V` on the term's own qubits.
    pub fn realized(&self) -> RingMatrix {
        let k = self.locality();
        let diag: Vec<RingReal> = (0..1usize << k)
            .map(|i| {
                if self.contains(i) {
                    RingReal::ONE
                } else {
                    RingReal::ZERO
                }
            })
            .collect();
        let d = RingMatrix::diagonal_from(&diag);
        match self.basis {
            Basis::Z => d,
            Basis::X => d.conjugate_by(&RingMatrix::hadamard_power(k)),
        }
    }

    /// Every defect of the term, checked exactly on its realized operator.
    pub fn violations(&self) -> Vec<TermViolation> {
        let mut out = Vec::new();
        let k = self.locality();
        if k > MAX_LOCALITY {
            out.push(TermViolation::Locality(k));
        }
        if self.support.is_empty() {
            out.push(TermViolation::Zero);
        } else if self.support.len() == 1 << k {
            out.push(TermViolation::Identity);
        }
        if k <= MAX_LOCALITY {
            out.extend(matrix_violations(self.basis, &self.realized()));
        }
        out
    }

    fn sort_key(&self) -> (Basis, &[usize], &[usize]) {
        (self.basis, &self.qubits, &self.support)
    }
}

impl fmt::Display for ProjectorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qubits: Vec<String> = self.qubits.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{{{}, [{}], {{{}}}}}",
            self.basis,
            qubits.join(", "),
            self.support_strings().join(", ")
        )
    }
}

pub fn bitstring(value: usize, k: usize) -> String {
    (0..k)
        .map(|j| if (value >> (k - 1 - j)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bitstring(s: &str, k: usize) -> Option<usize> {
    if s.len() != k {
        return None;
    }
    s.chars().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// Exact projector checks on a local operator tagged with a basis.
pub fn matrix_violations(basis: Basis, m: &RingMatrix) -> Vec<TermViolation> {
    let mut out = Vec::new();
    if !m.is_symmetric() {
        out.push(TermViolation::NotSymmetric);
    }
    if &(m * m) != m {
        out.push(TermViolation::NotIdempotent);
    }
    if let Err(v) = diagonal_support(basis, m) {
        out.push(v);
    }
    out
}

fn diagonal_support(basis: Basis, m: &RingMatrix) -> Result<Vec<usize>, TermViolation> {
    let k = m.dim().trailing_zeros() as usize;
    let d = match basis {
        Basis::Z => m.clone(),
        Basis::X => m.conjugate_by(&RingMatrix::hadamard_power(k)),
    };
    if !d.is_diagonal() {
        return Err(TermViolation::NotDiagonal(basis));
    }
    let mut support = Vec::new();
    for (i, v) in d.diagonal().into_iter().enumerate() {
        if v.is_one() {
            support.push(i);
        } else if !v.is_zero() {
            return Err(TermViolation::NonBinary {
                basis,
                index: i,
                value: v.to_string(),
            });
        }
    }
    Ok(support)
}

/// Register layout of a circuit-derived instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n_proof: usize,
    pub n_anc: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub output_qubit: usize,
}

impl Layout {
    pub fn new(n_proof: usize, n_anc: usize, t: usize) -> Self {
        Layout {
            n_proof,
            n_anc,
            t,
            output_qubit: 1,
        }
    }

    pub fn for_circuit(c: &Circuit) -> Self {
        Self::new(c.n_proof(), c.n_anc(), c.len())
    }

    /// Circuit qubit count.
    pub fn n(&self) -> usize {
        self.n_proof + self.n_anc
    }

    pub fn n_total(&self) -> usize {
        self.n() + self.t
    }

    /// Global index of clock qubit `j` (1-based).
    pub fn clock(&self, j: usize) -> usize {
        self.n() + j
    }

    pub fn ancillas(&self) -> impl Iterator<Item = usize> {
        self.n_proof + 1..=self.n()
    }
}

/// A validated XZ instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XZInstance {
    n_total: usize,
    layout: Option<Layout>,
    promise_gap: Option<Ratio<u64>>,
    terms: Vec<ProjectorTerm>,
}

impl XZInstance {
    /// Instances without a layout are put in canonical term order.
    pub fn new(
        n_total: usize,
        mut terms: Vec<ProjectorTerm>,
        layout: Option<Layout>,
        promise_gap: Option<Ratio<u64>>,
    ) -> Result<Self, InstanceError> {
        for (index, term) in terms.iter().enumerate() {
            if let Some(&q) = term.qubits.iter().find(|&&q| q > n_total) {
                return Err(InstanceError::Term {
                    index,
                    violation: TermViolation::QubitRange { index: q, n: n_total },
                });
            }
        }
        if let Some(l) = layout {
            if l.n_total() != n_total {
                return Err(InstanceError::Schema {
                    path: "layout".into(),
                    message: format!("layout covers {} qubits, n_total is {n_total}", l.n_total()),
                });
            }
        }
        if layout.is_none() {
            terms.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        }
        Ok(XZInstance {
            n_total,
            layout,
            promise_gap,
            terms,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.layout.as_ref()
    }

    pub fn promise_gap(&self) -> Option<Ratio<u64>> {
        self.promise_gap
    }

    pub fn with_promise_gap(mut self, gap: Option<Ratio<u64>>) -> Self {
        self.promise_gap = gap;
        self
    }

    pub fn terms(&self) -> &[ProjectorTerm] {
        &self.terms
    }

    pub fn max_locality(&self) -> usize {
        self.terms.iter().map(ProjectorTerm::locality).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serialize_instance(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub terms: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_instance(inst: &XZInstance) -> ValidationReport {
    let violations = inst
        .terms
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            let mut v = t.violations();
            if let Some(&q) = t.qubits.iter().find(|&&q| q > inst.n_total) {
                v.push(TermViolation::QubitRange {
                    index: q,
                    n: inst.n_total,
                });
            }
            v.into_iter().map(move |v| format!("term {i} {t}: {v}"))
        })
        .collect();
    ValidationReport {
        terms: inst.terms.len(),
        violations,
    }
}

fn term(basis: Basis, qubits: Vec<usize>, support: &[&str]) -> ProjectorTerm {
    ProjectorTerm::from_strings(basis, qubits, support).expect("builder terms are well formed")
}

/// `|1⟩⟨1|_anc ⊗ |0⟩⟨0|_{clock 1}` per ancilla.
pub fn build_h_in(layout: &Layout) -> Vec<ProjectorTerm> {
    layout
        .ancillas()
        .map(|i| term(Basis::Z, vec![i, layout.clock(1)], &["10"]))
        .collect()
}

/// `|0⟩⟨0|_{output} ⊗ |1⟩⟨1|_{clock T}`.
pub fn build_h_out(layout: &Layout) -> ProjectorTerm {
    term(Basis::Z, vec![layout.output_qubit, layout.clock(layout.t)], &["01"])
}

/// Z-part: `|01⟩⟨01|` on odd clock pairs `(j, j+2)`; X-part: `|+−⟩⟨+−|` on
/// even pairs.
pub fn build_h_format(layout: &Layout) -> (Vec<ProjectorTerm>, Vec<ProjectorTerm>) {
    let t = layout.t;
    let pair = |basis, j: usize| term(basis, vec![layout.clock(j), layout.clock(j + 2)], &["01"]);
    let z = (1..=t.saturating_sub(2))
        .step_by(2)
        .map(|j| pair(Basis::Z, j))
        .collect();
    let x = (2..=t.saturating_sub(3))
        .step_by(2)
        .map(|j| pair(Basis::X, j))
        .collect();
    (z, x)
}

fn symbol_vector(symbol: char) -> [RingReal; 2] {
    let s = RingReal::FRAC_1_SQRT_2;
    match symbol {
        '0' => [RingReal::ONE, RingReal::ZERO],
        '1' => [RingReal::ZERO, RingReal::ONE],
        '+' => [s, s],
        '-' => [s, -s],
        other => unreachable!("clock symbol {other}"),
    }
}

fn word_vector(word: &str) -> Vec<RingReal> {
    word.chars().fold(vec![RingReal::ONE], |acc, c| {
        let v = symbol_vector(c);
        acc.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect()
    })
}

/// Clock positions touched by step `t` and the local words of `|t−1̂⟩` and
/// `|t̂⟩` on them.
pub fn prop_clock_window(t: usize, big_t: usize) -> (Vec<usize>, &'static str, &'static str) {
    if t == 1 {
        (vec![1, 2], "0+", "1+")
    } else if t == big_t {
        (vec![big_t - 1, big_t], "-0", "-1")
    } else if t.is_multiple_of(2) {
        (vec![t - 1, t, t + 1], "1+0", "1-0")
    } else {
        (vec![t - 1, t, t + 1], "-0+", "-1+")
    }
}

/// Exact local operator of `H_prop,t` on `[gate qubits sorted, clock window]`:
/// `½(I⊗|a⟩⟨a| + I⊗|b⟩⟨b| − U⊗|b⟩⟨a| − Uᵀ⊗|a⟩⟨b|)` where `a`, `b` are the
/// windows of `|t−1̂⟩` and `|t̂⟩`.
pub fn prop_local_operator(c: &Circuit, t: usize) -> (Vec<usize>, RingMatrix) {
    let layout = Layout::for_circuit(c);
    let gate = &c.gates()[t - 1];
    let mut gate_qubits: Vec<usize> = gate.qubits().to_vec();
    gate_qubits.sort_unstable();
    let positions: Vec<usize> = gate
        .qubits()
        .iter()
        .map(|q| gate_qubits.iter().position(|p| p == q).unwrap())
        .collect();
    let u = RingMatrix::embed_positions(&gate_matrix(gate), &positions, gate_qubits.len());

    let (window, a, b) = prop_clock_window(t, layout.t);
    let (a, b) = (word_vector(a), word_vector(b));
    let aa = RingMatrix::outer(&a, &a);
    let bb = RingMatrix::outer(&b, &b);
    let ba = RingMatrix::outer(&b, &a);
    let ab = RingMatrix::outer(&a, &b);
    let id = RingMatrix::identity(u.dim());
    let sum = &(&id.kron(&(&aa + &bb)) - &u.kron(&ba)) - &u.transpose().kron(&ab);

    let qubits = gate_qubits
        .into_iter()
        .chain(window.into_iter().map(|j| layout.clock(j)))
        .collect();
    (qubits, sum.scale(RingReal::HALF))
}

/// Odd steps are X-diagonal, even steps Z-diagonal.
pub fn prop_basis(t: usize) -> Basis {
    if t % 2 == 1 {
        Basis::X
    } else {
        Basis::Z
    }
}

pub fn build_h_prop(c: &Circuit) -> Result<Vec<ProjectorTerm>, InstanceError> {
    require_standard(c)?;
    (1..=c.len())
        .map(|t| {
            let (qubits, m) = prop_local_operator(c, t);
            ProjectorTerm::from_matrix(prop_basis(t), qubits, &m)
                .map_err(|violation| InstanceError::Propagation { t, violation })
        })
        .collect()
}

fn require_standard(c: &Circuit) -> Result<(), InstanceError> {
    if c.gateset() != GateSet::Gt2Standard {
        return Err(InstanceError::NotStandard(c.gateset()));
    }
    if c.n_qubits() == 0 {
        return Err(InstanceError::NoQubits);
    }
    Ok(())
}

/// Pieces of the full Hamiltonian, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    In,
    Out,
    FormatZ,
    FormatX,
    Prop,
}

impl Part {
    pub const ALL: [Part; 5] = [Part::In, Part::Out, Part::FormatZ, Part::FormatX, Part::Prop];
}

impl FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "in" => Ok(Part::In),
            "out" => Ok(Part::Out),
            "format-z" => Ok(Part::FormatZ),
            "format-x" => Ok(Part::FormatX),
            "prop" => Ok(Part::Prop),
            other => Err(format!("unknown Hamiltonian part {other:?}")),
        }
    }
}

/// The selected parts of `H` for a standard-form circuit.
pub fn build_parts(c: &Circuit, parts: &[Part]) -> Result<XZInstance, InstanceError> {
    require_standard(c)?;
    let layout = Layout::for_circuit(c);
    let (format_z, format_x) = build_h_format(&layout);
    let mut terms = Vec::new();
    for part in Part::ALL.into_iter().filter(|p| parts.contains(p)) {
        match part {
            Part::In => terms.extend(build_h_in(&layout)),
            Part::Out => terms.push(build_h_out(&layout)),
            Part::FormatZ => terms.extend(format_z.iter().cloned()),
            Part::FormatX => terms.extend(format_x.iter().cloned()),
            Part::Prop => terms.extend(build_h_prop(c)?),
        }
    }
    XZInstance::new(layout.n_total(), terms, Some(layout), None)
}

/// `H = H_in + H_out + H_format + H_prop`.
pub fn build_full(c: &Circuit) -> Result<XZInstance, InstanceError> {
    build_parts(c, &Part::ALL)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    basis: Basis,
    qubits: Vec<usize>,
    support: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    n_total: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<Layout>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    promise_gap: Option<String>,
    terms: Vec<TermJson>,
}

pub fn serialize_instance(inst: &XZInstance) -> String {
    let json = InstanceJson {
        n_total: inst.n_total,
        layout: inst.layout,
        promise_gap: inst.promise_gap.map(|g| g.to_string()),
        terms: inst
            .terms
            .iter()
            .map(|t| TermJson {
                basis: t.basis,
                qubits: t.qubits.clone(),
                support: t.support_strings(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("instance serializes") + "\n"
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<XZInstance, InstanceError> {
    let json: InstanceJson = serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
    let promise_gap = json
        .promise_gap
        .map(|g| {
            let r: Ratio<u64> = g
                .trim()
                .parse()
                .map_err(|_| schema("promise_gap", format!("{g:?} is not a rational")))?;
            if r == Ratio::from_integer(0) {
                return Err(schema("promise_gap", "must be positive"));
            }
            Ok(r)
        })
        .transpose()?;
    let mut terms = Vec::with_capacity(json.terms.len());
    for (i, t) in json.terms.into_iter().enumerate() {
        let k = t.qubits.len();
        if let Some(&q) = t.qubits.iter().find(|&&q| q == 0 || q > json.n_total) {
            return Err(schema(
                format!("terms[{i}].qubits"),
                format!("qubit index {q} out of range 1..={}", json.n_total),
            ));
        }
        let support = t
            .support
            .iter()
            .enumerate()
            .map(|(j, s)| {
                parse_bitstring(s, k).ok_or_else(|| {
                    schema(
                        format!("terms[{i}].support[{j}]"),
                        format!("{s:?} is not a bitstring of length {k}"),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let term =
            ProjectorTerm::new(t.basis, t.qubits, support).map_err(|v| schema(format!("terms[{i}]"), v.to_string()))?;
        terms.push(term);
    }
    XZInstance::new(json.n_total, terms, json.layout, promise_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::standard_form;
    use crate::gates::Gate;

    fn standard(n_proof: usize, n_anc: usize, gates: Vec<Gate>) -> Circuit {
        standard_form(&Circuit::new(n_proof, n_anc, gates, GateSet::Gt2).unwrap()).unwrap()
    }

    fn z(qubits: Vec<usize>, support: &[&str]) -> ProjectorTerm {
        ProjectorTerm::from_strings(Basis::Z, qubits, support).unwrap()
    }

    #[test]
    fn h_in_and_out_examples() {
        let layout = Layout::new(1, 1, 3);
        assert_eq!(build_h_in(&layout), vec![z(vec![2, 3], &["10"])]);
        assert!(build_h_in(&Layout::new(2, 0, 3)).is_empty());
        let out = build_h_out(&Layout::new(1, 0, 3));
        assert_eq!(out, z(vec![1, 4], &["01"]));
        assert!(out.violations().is_empty());
        assert!(out.realized().is_diagonal());
    }

    #[test]
    fn h_format_examples() {
        let (zs, xs) = build_h_format(&Layout::new(0, 0, 3));
        assert_eq!(zs, vec![z(vec![1, 3], &["01"])]);
        assert!(xs.is_empty());
        let (_, xs) = build_h_format(&Layout::new(0, 0, 5));
        assert_eq!(
            xs,
            vec![ProjectorTerm::from_strings(Basis::X, vec![2, 4], &["01"]).unwrap()]
        );
        // realizes |+−⟩⟨+−|
        let pm = word_vector("+-");
        assert_eq!(xs[0].realized(), RingMatrix::outer(&pm, &pm));
        assert_eq!(
            pm,
            vec![RingReal::HALF, -RingReal::HALF, RingReal::HALF, -RingReal::HALF]
        );
    }

    fn factored(c: &Circuit, t: usize) -> RingMatrix {
        // P_window ⊗ ½(I − U⊗S_t), assembled independently of the 4-term sum
        let (window, a, _) = prop_clock_window(t, c.len());
        let gate = &c.gates()[t - 1];
        let mut gq: Vec<usize> = gate.qubits().to_vec();
        gq.sort_unstable();
        let g = gq.len();
        let k = g + window.len();
        let positions: Vec<usize> = gate
            .qubits()
            .iter()
            .map(|q| gq.iter().position(|p| p == q).unwrap())
            .collect();
        let u = RingMatrix::embed_positions(&gate_matrix(gate), &positions, k);
        let step = window.iter().position(|&w| w == t).unwrap();
        let flip = if t % 2 == 1 {
            RingMatrix::from_int_rows(&[&[0, 1], &[1, 0]], RingReal::ONE)
        } else {
            RingMatrix::from_int_rows(&[&[1, 0], &[0, -1]], RingReal::ONE)
        };
        let s = RingMatrix::embed_positions(&flip, &[g + step], k);
        let mut p = RingMatrix::identity(1 << k);
        for (j, c) in a.chars().enumerate() {
            if j == step {
                continue;
            }
            let v = symbol_vector(c);
            p = &p * &RingMatrix::embed_positions(&RingMatrix::outer(&v, &v), &[g + j], k);
        }
        let id = RingMatrix::identity(1 << k);
        &p * &(&id - &(&u * &s)).scale(RingReal::HALF)
    }

    #[test]
    fn propagation_terms_match_factored_forms() {
        let c = standard(
            3,
            0,
            vec![Gate::g(2, 1), Gate::cz(3, 1), Gate::ccz(1, 2, 3), Gate::x(2)],
        );
        for t in 1..=c.len() {
            let (_, m) = prop_local_operator(&c, t);
            assert_eq!(m, factored(&c, t), "t = {t}");
            assert!(matrix_violations(prop_basis(t), &m).is_empty(), "t = {t}");
        }
        let terms = build_h_prop(&c).unwrap();
        assert_eq!(terms.len(), c.len());
        assert!(terms.iter().all(|t| t.locality() <= MAX_LOCALITY));
        for (i, term) in terms.iter().enumerate() {
            assert_eq!(term.basis(), prop_basis(i + 1));
        }
    }

    #[test]
    fn interior_odd_g_term_is_five_local() {
        let c = standard(2, 0, vec![Gate::cz(1, 2), Gate::g(1, 2)]);
        // CZ sits at 2, G at 3: T = 5
        assert_eq!(c.len(), 5);
        let terms = build_h_prop(&c).unwrap();
        assert_eq!(terms[2].qubits(), &[1, 2, 4, 5, 6]);
        assert_eq!(terms[2].basis(), Basis::X);
    }

    #[test]
    fn placeholder_terms() {
        let c = standard(1, 0, vec![]);
        let terms = build_h_prop(&c).unwrap();
        // t = 1: ½(I − X₁) ⊗ |+⟩⟨+|₂ has X-support {"10"}
        assert_eq!(terms[0].qubits(), &[2, 3]);
        assert_eq!(terms[0].support_strings(), vec!["10"]);
        // t = 2: |1⟩⟨1| ⊗ ½(I − Z) ⊗ |0⟩⟨0| = |1−0⟩⟨1−0|, Z basis rank 1
        assert_eq!(terms[1].basis(), Basis::Z);
        assert_eq!(terms[1].support_strings(), vec!["110"]);
        assert_eq!(terms[2].support_strings(), vec!["11"]);
    }

    #[test]
    fn full_instance_counts() {
        let c = standard(1, 0, vec![]);
        let inst = build_full(&c).unwrap();
        // no ancilla, so no input term: out + format-Z + 3 propagation
        assert_eq!(inst.terms().len(), 5);
        assert_eq!(inst.n_total(), 4);
        assert!(validate_instance(&inst).passed());
        let inst = build_full(&standard(1, 1, vec![])).unwrap();
        assert_eq!(inst.terms().len(), 6);
        let c = standard(2, 1, vec![Gate::cz(1, 3), Gate::g(2, 3), Gate::ccz(1, 2, 3)]);
        let inst = build_full(&c).unwrap();
        assert_eq!(inst.n_total(), 3 + 7);
        assert!(inst.max_locality() <= 6);
        assert!(validate_instance(&inst).passed());
    }

    #[test]
    fn validation_flags_degenerate_terms() {
        let full = ProjectorTerm::from_strings(Basis::Z, vec![1], &["0", "1"]).unwrap();
        let inst = XZInstance::new(1, vec![full], None, None).unwrap();
        let report = validate_instance(&inst);
        assert!(
            report.violations[0].ends_with("term equals identity"),
            "{:?}",
            report.violations
        );

        let off = RingMatrix::from_int_rows(&[&[1, 1], &[1, 1]], RingReal::HALF);
        assert_eq!(
            matrix_violations(Basis::Z, &off),
            vec![TermViolation::NotDiagonal(Basis::Z)]
        );
        assert!(ProjectorTerm::from_matrix(Basis::Z, vec![1], &off).is_err());
        assert_eq!(
            ProjectorTerm::from_matrix(Basis::X, vec![1], &off).unwrap().support(),
            &[0]
        );
    }

    #[test]
    fn json_round_trip() {
        let c = standard(2, 1, vec![Gate::cz(1, 3), Gate::g(2, 3)]);
        let inst = build_full(&c).unwrap().with_promise_gap(Some(Ratio::new(1, 3)));
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn hand_made_instances_are_sorted() {
        let text = r#"{"n_total": 2, "terms": [
            {"basis": "Z", "qubits": [2], "support": ["1"]},
            {"basis": "X", "qubits": [1, 2], "support": ["11", "01"]}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.terms()[0].basis(), Basis::X);
        assert_eq!(inst.terms()[0].support_strings(), vec!["01", "11"]);
    }

    #[test]
    fn parse_errors_carry_paths() {
        let err = parse_instance(r#"{"n_total": 1, "terms": [{"basis": "Z", "qubits": [2], "support": ["1"]}]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("terms[0].qubits"), "{err}");
        let err = parse_instance(r#"{"n_total": 2, "terms": [{"basis": "Z", "qubits": [1, 2], "support": ["1"]}]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("terms[0].support[0]"), "{err}");
        let err = parse_instance(r#"{"n_total": 1, "promise_gap": "0", "terms": []}"#).unwrap_err();
        assert!(err.to_string().contains("positive"));
    }
}
