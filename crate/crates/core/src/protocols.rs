//! The term-sampling QMA₁ verifier and the classical verifier for
//! commuting instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hamiltonian::{Basis, ProjectorTerm, XZInstance};
use crate::matrix::local_offsets;
use crate::spectral::{energy, SpectralError};
use crate::state::NumericState;

/// Largest register for exhaustive good-string search.
pub const MAX_ENUMERATION_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("state has {found} qubits, instance has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("instance has no terms to sample")]
    NoTerms,
    #[error("terms {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("{n} qubits exceed the enumeration limit of {MAX_ENUMERATION_QUBITS}")]
    TooLarge { n: usize },
    #[error("witness strings have lengths {x} and {z}, instance has {n} qubits")]
    WitnessLength { x: usize, z: usize, n: usize },
    #[error("invalid bitstring {0:?}")]
    Bitstring(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    #[serde(rename = "Pi")]
    Pi,
    #[serde(rename = "I-Pi")]
    Complement,
}

/// Result of measuring `{Π, I − Π}` by reading the term's qubits in its
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: Outcome,
    /// Local string read off the term's qubits, bit `j` for `qubits[j]`.
    pub string: usize,
    pub post_state: NumericState,
}

struct TermFrame {
    offsets: Vec<usize>,
    mask: usize,
}

impl TermFrame {
    fn new(term: &ProjectorTerm, n: usize) -> Self {
        let positions: Vec<usize> = term.qubits().iter().map(|&q| q - 1).collect();
        let offsets = local_offsets(&positions, n);
        let mask = offsets.iter().fold(0, |m, &o| m | o);
        TermFrame { offsets, mask }
    }

    fn bases(&self, dim: usize) -> impl Iterator<Item = usize> + '_ {
        (0..dim).filter(move |b| b & self.mask == 0)
    }
}

fn walsh(v: &mut [f64]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = (x + y) * s;
                v[j + h] = (x - y) * s;
            }
        }
        h *= 2;
    }
}

/// Distribution of the term-qubit string in the term's basis.
pub fn term_marginal(term: &ProjectorTerm, psi: &NumericState) -> Vec<f64> {
    let frame = TermFrame::new(term, psi.n());
    let amps = psi.amplitudes();
    let mut p = vec![0.0; frame.offsets.len()];
    let mut local = vec![0.0; frame.offsets.len()];
    for base in frame.bases(psi.dim()) {
        for (l, &o) in frame.offsets.iter().enumerate() {
            local[l] = amps[base | o];
        }
        if term.basis() == Basis::X {
            walsh(&mut local);
        }
        for (acc, x) in p.iter_mut().zip(&local) {
            *acc += x * x;
        }
    }
    p
}

fn sample(p: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = p.iter().sum();
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &x) in p.iter().enumerate() {
        acc += x;
        if r < acc {
            return i;
        }
    }
    // roundoff at the top end: last string with positive weight
    p.iter().rposition(|&x| x > 0.0).unwrap_or(p.len() - 1)
}

fn outcome_of(term: &ProjectorTerm, string: usize) -> Outcome {
    if term.contains(string) {
        Outcome::Pi
    } else {
        Outcome::Complement
    }
}

/// Measures `{Π, I − Π}` on `ψ` and collapses onto the string read.
pub fn measure_projector(
    term: &ProjectorTerm,
    psi: &NumericState,
    rng: &mut impl Rng,
) -> Result<Measurement, ProtocolError> {
    let n = psi.n();
    if term.qubits().iter().any(|&q| q > n) {
        return Err(ProtocolError::Dimension {
            expected: term.qubits().iter().copied().max().unwrap_or(0),
            found: n,
        });
    }
    let string = sample(&term_marginal(term, psi), rng);
    let frame = TermFrame::new(term, n);
    let mut post = psi.clone();
    let amps = post.amplitudes_mut();
    let mut local = vec![0.0; frame.offsets.len()];
    for base in frame.bases(psi.dim()) {
        for (l, &o) in frame.offsets.iter().enumerate() {
            local[l] = amps[base | o];
        }
        let rotate = term.basis() == Basis::X;
        if rotate {
            walsh(&mut local);
        }
        for (l, x) in local.iter_mut().enumerate() {
            if l != string {
                *x = 0.0;
            }
        }
        if rotate {
            walsh(&mut local);
        }
        for (l, &o) in frame.offsets.iter().enumerate() {
            amps[base | o] = local[l];
        }
    }
    post.normalize();
    Ok(Measurement {
        outcome: outcome_of(term, string),
        string,
        post_state: post,
    })
}

/// One verifier shot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotRecord {
    pub shot: u64,
    pub term_index: usize,
    pub outcome: Outcome,
    pub accepted: bool,
    #[serde(skip)]
    pub string: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TermStats {
    pub sampled: u64,
    pub accepted: u64,
    /// `⟨ψ|Π|ψ⟩`
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub shots: u64,
    pub accepted: u64,
    pub accept_rate: f64,
    pub expected_rate: f64,
    pub seed: u64,
    pub per_term: Vec<TermStats>,
    #[serde(skip)]
    pub transcript: Vec<ShotRecord>,
}

impl VerifyReport {
    pub fn transcript_jsonl(&self) -> String {
        self.transcript
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

/// Shot `s` draws from stream `s` of the generator seeded by `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Picks a uniform term per shot, measures it, accepts on `I − Π`.
pub fn qma1_verify(
    inst: &XZInstance,
    psi: &NumericState,
    shots: u64,
    seed: u64,
) -> Result<VerifyReport, ProtocolError> {
    if psi.n() != inst.n_total() {
        return Err(ProtocolError::Dimension {
            expected: inst.n_total(),
            found: psi.n(),
        });
    }
    if !psi.is_normalized() {
        return Err(ProtocolError::NotNormalized(psi.norm_sqr()));
    }
    let m = inst.terms().len();
    if m == 0 {
        return Err(ProtocolError::NoTerms);
    }
    let marginals: Vec<Vec<f64>> = inst.terms().par_iter().map(|t| term_marginal(t, psi)).collect();
    let transcript: Vec<ShotRecord> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let term_index = rng.random_range(0..m);
            let string = sample(&marginals[term_index], &mut rng);
            let outcome = outcome_of(&inst.terms()[term_index], string);
            ShotRecord {
                shot,
                term_index,
                outcome,
                accepted: outcome == Outcome::Complement,
                string,
            }
        })
        .collect();
    let mut per_term: Vec<TermStats> = inst
        .terms()
        .iter()
        .zip(&marginals)
        .map(|(t, p)| TermStats {
            energy: t.support().iter().map(|&s| p[s]).sum(),
            ..TermStats::default()
        })
        .collect();
    for r in &transcript {
        per_term[r.term_index].sampled += 1;
        per_term[r.term_index].accepted += u64::from(r.accepted);
    }
    let accepted = transcript.iter().filter(|r| r.accepted).count() as u64;
    let total_energy = energy(inst, psi)?;
    Ok(VerifyReport {
        shots,
        accepted,
        accept_rate: if shots == 0 {
            0.0
        } else {
            accepted as f64 / shots as f64
        },
        expected_rate: 1.0 - total_energy / m as f64,
        seed,
        per_term,
        transcript,
    })
}

/// Local index of `term` under a global assignment `bit(q)`.
fn local_index(term: &ProjectorTerm, bit: impl Fn(usize) -> bool) -> usize {
    term.qubits().iter().fold(0, |acc, &q| (acc << 1) | usize::from(bit(q)))
}

/// Exact commutation test for a pair of basis-diagonal projectors.
///
/// A Z term and an X term sharing qubits `O` split into blocks indexed by
/// their private bits: `D` (diagonal on `O`) and `E = Ĥ P Ĥ`. The pair commutes
/// iff every `[D, E]` vanishes, i.e. `E_ab = 0` whenever `d_a ≠ d_b`, where
/// `2^|O| E_ab = Σ_{s ∈ P} (−1)^{(a⊕b)·s}`.
pub fn terms_commute(a: &ProjectorTerm, b: &ProjectorTerm) -> bool {
    if a.basis() == b.basis() {
        return true;
    }
    let (z, x) = if a.basis() == Basis::Z { (a, b) } else { (b, a) };
    let overlap: Vec<usize> = z.qubits().iter().copied().filter(|q| x.qubits().contains(q)).collect();
    if overlap.is_empty() {
        return true;
    }
    let z_only: Vec<usize> = z.qubits().iter().copied().filter(|q| !overlap.contains(q)).collect();
    let x_only: Vec<usize> = x.qubits().iter().copied().filter(|q| !overlap.contains(q)).collect();
    let k = overlap.len();
    let assign = |qs: &[usize], bits: usize| {
        let qs = qs.to_vec();
        move |q: usize| {
            let j = qs.iter().position(|&p| p == q).expect("qubit in set");
            (bits >> (qs.len() - 1 - j)) & 1 == 1
        }
    };
    for za in 0..1usize << z_only.len() {
        let za_bit = assign(&z_only, za);
        let d: Vec<bool> = (0..1usize << k)
            .map(|o| {
                let o_bit = assign(&overlap, o);
                z.contains(local_index(
                    z,
                    |q| if overlap.contains(&q) { o_bit(q) } else { za_bit(q) },
                ))
            })
            .collect();
        if d.iter().all(|&v| v == d[0]) {
            continue;
        }
        for xb in 0..1usize << x_only.len() {
            let xb_bit = assign(&x_only, xb);
            let p: Vec<usize> = (0..1usize << k)
                .filter(|&o| {
                    let o_bit = assign(&overlap, o);
                    x.contains(local_index(
                        x,
                        |q| if overlap.contains(&q) { o_bit(q) } else { xb_bit(q) },
                    ))
                })
                .collect();
            for ai in 0..1usize << k {
                for bi in ai + 1..1usize << k {
                    if d[ai] == d[bi] {
                        continue;
                    }
                    let e: i64 = p
                        .iter()
                        .map(|&s| if ((ai ^ bi) & s).count_ones() % 2 == 0 { 1 } else { -1 })
                        .sum();
                    if e != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First non-commuting pair, if any.
pub fn find_noncommuting_pair(inst: &XZInstance) -> Option<(usize, usize)> {
    let terms = inst.terms();
    (0..terms.len())
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..terms.len()).map(move |j| (i, j)))
        .find_first(|&(i, j)| !terms_commute(&terms[i], &terms[j]))
}

pub fn is_commuting(inst: &XZInstance) -> bool {
    find_noncommuting_pair(inst).is_none()
}

/// A pair `(x, z)` of `n`-bit strings; index 0 is qubit 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpWitness {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, ProtocolError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ProtocolError::Bitstring(s.to_string())),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl NpWitness {
    pub fn parse(x: &str, z: &str) -> Result<Self, ProtocolError> {
        Ok(NpWitness {
            x: parse_bits(x)?,
            z: parse_bits(z)?,
        })
    }
}

fn annihilated(terms: &[&ProjectorTerm], bits: &[bool]) -> bool {
    terms.iter().all(|t| !t.contains(local_index(t, |q| bits[q - 1])))
}

fn split(inst: &XZInstance) -> (Vec<&ProjectorTerm>, Vec<&ProjectorTerm>) {
    inst.terms().iter().partition(|t| t.basis() == Basis::X)
}

fn require_commuting(inst: &XZInstance) -> Result<(), ProtocolError> {
    match find_noncommuting_pair(inst) {
        Some((i, j)) => Err(ProtocolError::NotCommuting(i, j)),
        None => Ok(()),
    }
}

/// Accepts iff every Z term annihilates `|z⟩` and every X term annihilates
/// `Ĥ^{⊗n}|x⟩`.
pub fn np_verify_commuting(inst: &XZInstance, w: &NpWitness) -> Result<bool, ProtocolError> {
    let n = inst.n_total();
    if w.x.len() != n || w.z.len() != n {
        return Err(ProtocolError::WitnessLength {
            x: w.x.len(),
            z: w.z.len(),
            n,
        });
    }
    require_commuting(inst)?;
    let (xs, zs) = split(inst);
    Ok(annihilated(&zs, &w.z) && annihilated(&xs, &w.x))
}

fn first_good_string(terms: &[&ProjectorTerm], n: usize) -> Option<Vec<bool>> {
    (0..1u64 << n)
        .into_par_iter()
        .find_first(|&v| {
            let bits: Vec<bool> = (0..n).map(|j| (v >> (n - 1 - j)) & 1 == 1).collect();
            annihilated(terms, &bits)
        })
        .map(|v| (0..n).map(|j| (v >> (n - 1 - j)) & 1 == 1).collect())
}

/// A witness accepted by [`np_verify_commuting`], when one exists.
pub fn find_np_witness(inst: &XZInstance) -> Result<Option<NpWitness>, ProtocolError> {
    let n = inst.n_total();
    if n > MAX_ENUMERATION_QUBITS {
        return Err(ProtocolError::TooLarge { n });
    }
    require_commuting(inst)?;
    let (xs, zs) = split(inst);
    let Some(z) = first_good_string(&zs, n) else {
        return Ok(None);
    };
    Ok(first_good_string(&xs, n).map(|x| NpWitness { x, z }))
}

/// `tr(Π_X Π_Z) > 0`, which holds iff both good sets are non-empty since
/// every `|⟨x|Ĥ^{⊗n}|z⟩|²` equals `2^{−n}`.
pub fn zero_energy_exists_commuting(inst: &XZInstance) -> Result<bool, ProtocolError> {
    Ok(find_np_witness(inst)?.is_some())
}
