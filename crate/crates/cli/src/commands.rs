use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;
use xzsat::circuit::{compile_to, parse_circuit, GateSet};
use xzsat::clock::{clock_counts, component_census, lemma_registry, ClockCounts, LemmaReport, MAX_GRAPH_T};
use xzsat::cnf::{embed_3sat as embed, parse_dimacs};
use xzsat::hamiltonian::{build_full, validate_instance};
use xzsat::identities::{run_identities, standard_identities};
use xzsat::protocols::{np_verify_commuting, qma1_verify, NpWitness, ProtocolError};
use xzsat::spectral::{
    history_state, history_state_numeric, min_eigenvalue_with, solver_registry, Sector, SpectralError,
};
use xzsat::{ExactState, StateVector};

use crate::io::{self, Amplitude, StateFile};
use crate::Verdict;

pub fn identities(json: bool, corrupt: Option<usize>) -> anyhow::Result<Verdict> {
    let mut suite = standard_identities();
    if let Some(i) = corrupt {
        let id = i
            .checked_sub(1)
            .and_then(|j| suite.get(j))
            .with_context(|| format!("no identity {i}; there are {}", suite.len()))?;
        suite[i - 1] = id
            .with_cz_as_cx()
            .with_context(|| format!("identity {i} ({}) has no CZ to corrupt", id.name))?;
    }
    let report = run_identities(&suite)?;
    if json {
        io::emit(None, &io::json(&report))?;
    }
    eprintln!("{}/{} identities exact", report.passed, report.total);
    match report.first_failure() {
        Some(f) => {
            eprintln!("not exact: {}", f.name);
            Ok(Verdict::Fail)
        }
        None => Ok(Verdict::Pass),
    }
}

pub enum Emit {
    Circuit,
    Instance,
    History(String),
}

#[derive(Serialize)]
struct HistoryFile<'a> {
    #[serde(flatten)]
    state: StateFile,
    witness: &'a str,
    #[serde(rename = "T")]
    t: usize,
}

pub fn compile(path: &Path, output: Option<&Path>, target: GateSet, emit: Emit) -> anyhow::Result<Verdict> {
    let source = parse_circuit(&io::read(path)?).with_context(|| format!("invalid circuit {}", path.display()))?;
    let c = compile_to(&source, target)?;
    eprintln!(
        "compiled {} gates ({}) to {} gates ({}) on {} qubits",
        source.len(),
        source.gateset(),
        c.len(),
        c.gateset(),
        c.n_qubits()
    );
    match emit {
        Emit::Circuit => io::emit(output, &c.to_text())?,
        Emit::Instance => {
            let inst = build_full(&c)?;
            let report = validate_instance(&inst);
            io::emit(output, &inst.to_json())?;
            eprintln!(
                "instance: {} terms on {} qubits, max locality {}",
                report.terms,
                inst.n_total(),
                inst.max_locality()
            );
            if !report.passed() {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
                return Ok(Verdict::Fail);
            }
        }
        Emit::History(bits) => {
            let bools = xzsat::protocols::parse_bits(&bits)?;
            if bools.len() != c.n_proof() {
                bail!(
                    "witness has {} bits but the circuit has {} proof qubits",
                    bools.len(),
                    c.n_proof()
                );
            }
            let witness: ExactState = StateVector::from_bits(&bools);
            let amplitudes = match history_state(&c, &witness) {
                Ok(exact) => exact.amplitudes().iter().map(|&a| Amplitude::Exact(a)).collect(),
                Err(SpectralError::NotNormalizable(_)) => history_state_numeric(&c, &witness)?
                    .amplitudes()
                    .iter()
                    .map(|&a| Amplitude::Numeric(a))
                    .collect(),
                Err(e) => return Err(e.into()),
            };
            let file = HistoryFile {
                state: StateFile {
                    n: c.n_qubits() + c.len(),
                    amplitudes,
                    norm_squared: Some(1.0),
                },
                witness: &bits,
                t: c.len(),
            };
            io::emit(output, &(serde_json::to_string(&file)? + "\n"))?;
            eprintln!("history state on {} qubits for witness {bits}", file.state.n);
        }
    }
    Ok(Verdict::Pass)
}

pub fn spectrum(path: &Path, sector: Sector, tol: f64, method: &str, seed: u64) -> anyhow::Result<Verdict> {
    let inst = io::load_instance(path)?;
    let solvers = solver_registry();
    let solver = solvers.get(method)?;
    let (report, _) = match min_eigenvalue_with(&inst, sector, solver, seed) {
        Err(SpectralError::NotPositive(v)) => {
            eprintln!("instance is not positive semidefinite: eigenvalue {v}");
            return Ok(Verdict::Fail);
        }
        other => other?,
    };
    io::emit(None, &io::json(&report))?;
    eprintln!(
        "lambda_min = {:.12} on {:?} (dimension {}, {}, residual {:.2e})",
        report.lambda_min, report.sector, report.dimension, report.method, report.residual
    );
    if report.residual > tol {
        eprintln!("residual {:.3e} exceeds tolerance {tol:.3e}", report.residual);
        return Ok(Verdict::Fail);
    }
    Ok(Verdict::Pass)
}

#[derive(Serialize)]
struct ClockReport {
    #[serde(rename = "T")]
    t: usize,
    counts: ClockCounts,
    lemmas: Vec<LemmaReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    components: Vec<String>,
}

pub fn clockgraph(t: usize, check_lemmas: bool, census: bool) -> anyhow::Result<Verdict> {
    if t.is_multiple_of(2) {
        bail!("T must be odd");
    }
    if t > MAX_GRAPH_T {
        bail!("T = {t} exceeds the enumeration limit {MAX_GRAPH_T}");
    }
    let counts = clock_counts(t)?;
    let mut lemmas = Vec::new();
    if check_lemmas {
        let registry = lemma_registry();
        let mut names = registry.names();
        names.sort_unstable();
        for name in names {
            lemmas.push(registry.get(name)?.check(t)?);
        }
    }
    let components: Vec<String> = if census {
        component_census(t)?.iter().map(ToString::to_string).collect()
    } else {
        Vec::new()
    };
    let mut summary = format!("good={} fake={} bad={}", counts.good, counts.fake, counts.bad);
    for r in &lemmas {
        summary += &format!("; {} {}", r.lemma, if r.passed { "PASS" } else { "FAIL" });
    }
    for line in &components {
        eprintln!("{line}");
    }
    eprintln!("{summary}");
    for r in lemmas.iter().filter(|r| !r.passed) {
        eprintln!(
            "{} counterexample: {}",
            r.lemma,
            r.counterexample.as_deref().unwrap_or("?")
        );
    }
    let passed = lemmas.iter().all(|r| r.passed);
    io::emit(
        None,
        &io::json(&ClockReport {
            t,
            counts,
            lemmas,
            components,
        }),
    )?;
    Ok(if passed { Verdict::Pass } else { Verdict::Fail })
}

pub fn verify_qma(
    path: &Path,
    witness: &Path,
    shots: u64,
    seed: u64,
    transcript: Option<&Path>,
) -> anyhow::Result<Verdict> {
    let inst = io::load_instance(path)?;
    let psi = StateFile::load(witness)?;
    let report = qma1_verify(&inst, &psi, shots, seed)?;
    if let Some(p) = transcript {
        io::emit(Some(p), &report.transcript_jsonl())?;
    }
    io::emit(None, &io::json(&report))?;
    eprintln!(
        "accepted {}/{} shots (rate {:.6}, expected {:.6}, seed {seed})",
        report.accepted, report.shots, report.accept_rate, report.expected_rate
    );
    Ok(if report.accepted == report.shots {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

pub fn verify_np(path: &Path, pair: &str) -> anyhow::Result<Verdict> {
    let inst = io::load_instance(path)?;
    let (x, z) = pair
        .split_once(',')
        .with_context(|| format!("--np expects \"x,z\", found {pair:?}"))?;
    let w = NpWitness::parse(x.trim(), z.trim())?;
    match np_verify_commuting(&inst, &w) {
        Ok(true) => {
            eprintln!("NP: accept");
            Ok(Verdict::Pass)
        }
        Ok(false) => {
            eprintln!("NP: reject");
            Ok(Verdict::Fail)
        }
        Err(ProtocolError::NotCommuting(i, j)) => {
            bail!("instance is not commuting: terms {i} and {j} do not commute")
        }
        Err(e) => Err(e.into()),
    }
}

pub fn embed_3sat(path: &Path, output: Option<&Path>) -> anyhow::Result<Verdict> {
    let cnf = parse_dimacs(&io::read(path)?).with_context(|| format!("invalid DIMACS file {}", path.display()))?;
    let inst = embed(&cnf)?;
    io::emit(output, &inst.to_json())?;
    eprintln!(
        "{} clauses embedded as {} terms on {} qubits",
        cnf.clauses.len(),
        inst.terms().len(),
        inst.n_total()
    );
    Ok(Verdict::Pass)
}
