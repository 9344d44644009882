//! Energies, history states, sector-restricted ground energies and the
//! small closed-form bounds behind the fake/bad sector gap.
//!
//! Numeric work happens in a "mixed" basis where even clock qubits are
//! rotated by Ĥ. There every good clock state is a computational word, so a
//! sector is just a set of basis indices selected by their clock bits.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateSet};
use crate::clock::{good_clock_state, ClockClass, ClockString};
use crate::hamiltonian::{Basis, Layout, ProjectorTerm, XZInstance};
use crate::matrix::{local_offsets, RingMatrix};
use crate::registry::{Named, Registry};
use crate::ring::RingReal;
use crate::state::{Amplitude, NumericState, StateVector};

/// Largest register handled by the numeric operators.
pub const MAX_NUMERIC_QUBITS: usize = 26;
/// Restricted dimension up to which `auto` uses a dense solve.
pub const DENSE_LIMIT: usize = 4096;
/// Most negative eigenvalue accepted as roundoff.
pub const PSD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("state has {found} qubits, instance has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("sector {0} needs an instance with a layout")]
    NoLayout(Sector),
    #[error("sector {0} is empty")]
    EmptySector(Sector),
    #[error("{n} qubits exceed the numeric limit of {MAX_NUMERIC_QUBITS}")]
    TooLarge { n: usize },
    #[error("solver {solver} cannot handle this operator: {reason}")]
    Unsupported { solver: &'static str, reason: String },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("minimum eigenvalue {0:e} is below -{PSD_TOLERANCE:e}")]
    NotPositive(f64),
    #[error("history state needs a standard-form circuit, found {0}")]
    NotStandard(GateSet),
    #[error("witness has {found} qubits, circuit has {expected} proof qubits")]
    Witness { expected: usize, found: usize },
    #[error("1/sqrt({0}) is not exactly representable")]
    NotNormalizable(u64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("vectors are not normalized: total squared norm {0}")]
    NotNormalized(f64),
    #[error("expected {expected} vectors, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("component energy {0} is below 1/4")]
    BelowQuarter(f64),
    #[error("k must be at least 1")]
    ZeroK,
}

/// Positions of `qubits` in an `n`-qubit register and the index mask they
/// cover.
fn term_offsets(qubits: &[usize], n: usize) -> (Vec<usize>, usize) {
    let positions: Vec<usize> = qubits.iter().map(|&q| q - 1).collect();
    let offsets = local_offsets(&positions, n);
    let mask = offsets.iter().fold(0, |m, &o| m | o);
    (offsets, mask)
}

fn hadamard_butterfly<A: Amplitude>(v: &mut [A]) {
    let s = A::frac_1_sqrt2();
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

/// `⟨ψ|Π|ψ⟩` without materializing `Π`.
pub fn term_energy<A: Amplitude>(term: &ProjectorTerm, psi: &StateVector<A>) -> A {
    let n = psi.n();
    let (offsets, mask) = term_offsets(term.qubits(), n);
    let amps = psi.amplitudes();
    let support = term.support();
    let mut local = vec![A::zero(); offsets.len()];
    let mut total = A::zero();
    for base in (0..psi.dim()).filter(|b| b & mask == 0) {
        for (l, &o) in offsets.iter().enumerate() {
            local[l] = amps[base | o];
        }
        if term.basis() == Basis::X {
            hadamard_butterfly(&mut local);
        }
        for &s in support {
            total = total + local[s] * local[s];
        }
    }
    total
}

/// `⟨ψ|H|ψ⟩`, exact for exact states.
pub fn energy<A: Amplitude>(inst: &XZInstance, psi: &StateVector<A>) -> Result<A, SpectralError> {
    if psi.n() != inst.n_total() {
        return Err(SpectralError::Dimension {
            expected: inst.n_total(),
            found: psi.n(),
        });
    }
    Ok(inst
        .terms()
        .par_iter()
        .map(|t| term_energy(t, psi))
        .reduce(A::zero, |a, b| a + b))
}

/// Amplitude of good clock state `|t̂⟩` on the packed clock word `word`.
fn good_clock_amplitude<A: Amplitude>(good: &ClockString, word: u64) -> A {
    let t = good.len();
    let mut amp = A::one();
    for p in 1..=t {
        let bit = (word >> (t - p)) & 1 == 1;
        if p % 2 == 1 {
            if bit != good.is_set(p) {
                return A::zero();
            }
        } else {
            amp = amp * A::frac_1_sqrt2();
            if bit && good.is_set(p) {
                amp = -amp;
            }
        }
    }
    amp
}

/// `Σ_t U_t⋯U_1|init⟩ ⊗ |t̂⟩` without the `1/√(T+1)` factor, so its squared
/// norm is `(T+1)·‖witness‖²`.
pub fn history_state_unnormalized<A: Amplitude>(
    c: &Circuit,
    witness: &StateVector<A>,
) -> Result<StateVector<A>, SpectralError> {
    if c.gateset() != GateSet::Gt2Standard {
        return Err(SpectralError::NotStandard(c.gateset()));
    }
    if witness.n() != c.n_proof() {
        return Err(SpectralError::Witness {
            expected: c.n_proof(),
            found: witness.n(),
        });
    }
    let big_t = c.len();
    let n = c.n_qubits();
    if n + big_t > MAX_NUMERIC_QUBITS {
        return Err(SpectralError::TooLarge { n: n + big_t });
    }
    let mut phi = witness.tensor(&StateVector::basis(c.n_anc(), 0));
    let mut out = StateVector::zeros(n + big_t);
    for t in 0..=big_t {
        if t > 0 {
            c.apply_step(t, &mut phi)?;
        }
        let good = good_clock_state(t, big_t).expect("valid clock length");
        let clock: Vec<(u64, A)> = (0..1u64 << big_t)
            .map(|w| (w, good_clock_amplitude::<A>(&good, w)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let amps = out.amplitudes_mut();
        for (x, &px) in phi.amplitudes().iter().enumerate() {
            if px.is_zero() {
                continue;
            }
            for &(w, a) in &clock {
                let i = (x << big_t) | w as usize;
                amps[i] = amps[i] + px * a;
            }
        }
    }
    Ok(out)
}

/// The normalized history state. Exact amplitudes need `T + 1` to be a power
/// of two.
pub fn history_state<A: Amplitude>(c: &Circuit, witness: &StateVector<A>) -> Result<StateVector<A>, SpectralError> {
    let m = c.len() as u64 + 1;
    let scale = A::inv_sqrt(m).ok_or(SpectralError::NotNormalizable(m))?;
    let mut s = history_state_unnormalized(c, witness)?;
    s.scale(scale);
    Ok(s)
}

/// Numeric normalized history state for any `T`.
pub fn history_state_numeric(c: &Circuit, witness: &StateVector<RingReal>) -> Result<NumericState, SpectralError> {
    let mut s = history_state_unnormalized(c, witness)?.to_numeric();
    s.normalize();
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    Full,
    Good,
    FakeBad,
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sector::Full => "full",
            Sector::Good => "good",
            Sector::FakeBad => "fake_bad",
        })
    }
}

impl std::str::FromStr for Sector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Sector::Full),
            "good" => Ok(Sector::Good),
            "fake_bad" | "fake-bad" => Ok(Sector::FakeBad),
            other => Err(format!("unknown sector {other:?}")),
        }
    }
}

/// One term as rows of a real local matrix in the mixed basis.
#[derive(Debug, Clone)]
struct LocalTerm {
    offsets: Vec<usize>,
    mask: usize,
    rows: Vec<Vec<(usize, f64)>>,
    diagonal: bool,
}

impl LocalTerm {
    fn local_index(&self, i: usize) -> usize {
        // offsets[1 << (k-1-j)] is the bit of local qubit j
        let k = self.offsets.len().trailing_zeros() as usize;
        (0..k).fold(0, |acc, j| {
            let bit = self.offsets[1 << (k - 1 - j)];
            (acc << 1) | usize::from(i & bit != 0)
        })
    }
}

/// Mixed-basis local matrix: `V Π V` with `V` a Hadamard on every even
/// clock qubit of the term.
pub fn mixed_basis_matrix(term: &ProjectorTerm, layout: Option<&Layout>) -> RingMatrix {
    let m = term.realized();
    let Some(layout) = layout else {
        return m;
    };
    let h = RingMatrix::hadamard_power(1);
    let i2 = RingMatrix::identity(2);
    let v = term.qubits().iter().fold(RingMatrix::identity(1), |acc, &q| {
        let even_clock = q > layout.n() && (q - layout.n()) % 2 == 0;
        acc.kron(if even_clock { &h } else { &i2 })
    });
    if v.is_identity() {
        m
    } else {
        m.conjugate_by(&v)
    }
}

/// `H` restricted to a sector, as a matrix-free real symmetric operator.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    n: usize,
    sector: Sector,
    terms: Vec<LocalTerm>,
    /// Sector basis as global indices, increasing.
    indices: Vec<usize>,
    /// Global index → sector position, `u32::MAX` outside.
    position: Vec<u32>,
}

impl SectorOperator {
    pub fn new(inst: &XZInstance, sector: Sector) -> Result<Self, SpectralError> {
        let n = inst.n_total();
        if n > MAX_NUMERIC_QUBITS {
            return Err(SpectralError::TooLarge { n });
        }
        let layout = inst.layout();
        if sector != Sector::Full && layout.is_none() {
            return Err(SpectralError::NoLayout(sector));
        }
        let terms = inst
            .terms()
            .iter()
            .map(|term| {
                let m = mixed_basis_matrix(term, layout);
                let (offsets, mask) = term_offsets(term.qubits(), n);
                let rows = (0..m.dim())
                    .map(|r| {
                        (0..m.dim())
                            .filter_map(|c| {
                                let v = m.get(r, c);
                                (!v.is_zero()).then(|| (c, v.to_f64()))
                            })
                            .collect()
                    })
                    .collect();
                LocalTerm {
                    offsets,
                    mask,
                    rows,
                    diagonal: m.is_diagonal(),
                }
            })
            .collect();
        let dim = 1usize << n;
        let indices: Vec<usize> = match (sector, layout) {
            (Sector::Full, _) => (0..dim).collect(),
            (_, Some(l)) => {
                let clock_mask = (1usize << l.t) - 1;
                let want_good = sector == Sector::Good;
                (0..dim)
                    .filter(|&i| {
                        let word = ClockString::from_bits(l.t, (i & clock_mask) as u64).expect("valid layout");
                        (word.classify() == ClockClass::Good) == want_good
                    })
                    .collect()
            }
            (_, None) => unreachable!(),
        };
        if indices.is_empty() {
            return Err(SpectralError::EmptySector(sector));
        }
        let mut position = vec![u32::MAX; dim];
        for (p, &i) in indices.iter().enumerate() {
            position[i] = p as u32;
        }
        Ok(SectorOperator {
            n,
            sector,
            terms,
            indices,
            position,
        })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Global basis indices spanning the sector (mixed basis).
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.diagonal)
    }

    /// Calls `f(sector column, value)` for every nonzero of row `row`.
    fn for_row(&self, row: usize, mut f: impl FnMut(usize, f64)) {
        let i = self.indices[row];
        for term in &self.terms {
            let r = term.local_index(i);
            let base = i & !term.mask;
            for &(c, v) in &term.rows[r] {
                let p = self.position[base | term.offsets[c]];
                if p != u32::MAX {
                    f(p as usize, v);
                }
            }
        }
    }

    /// `y = P H P x` on sector coordinates.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dimension());
        (0..self.dimension())
            .into_par_iter()
            .map(|row| {
                let mut acc = 0.0;
                self.for_row(row, |c, v| acc += v * x[c]);
                acc
            })
            .collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dimension())
            .into_par_iter()
            .map(|row| {
                let mut acc = 0.0;
                self.for_row(row, |c, v| {
                    if c == row {
                        acc += v;
                    }
                });
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dimension();
        let rows: Vec<Vec<f64>> = (0..d)
            .into_par_iter()
            .map(|row| {
                let mut r = vec![0.0; d];
                self.for_row(row, |c, v| r[c] += v);
                r
            })
            .collect();
        DMatrix::from_fn(d, d, |r, c| rows[r][c])
    }

    /// Embeds sector coordinates into the full mixed-basis vector.
    pub fn scatter(&self, x: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; 1 << self.n];
        for (&i, &v) in self.indices.iter().zip(x) {
            full[i] = v;
        }
        full
    }

    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let hv = self.apply(v);
        hv.iter()
            .zip(v)
            .map(|(h, x)| (h - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub method: &'static str,
}

/// Smallest-eigenpair strategy for a sector operator.
pub trait Eigensolver: Named + Send + Sync {
    fn solve(&self, op: &SectorOperator, seed: u64) -> Result<Eigenpair, SpectralError>;
}

pub struct DenseSolver;
pub struct LanczosSolver {
    pub krylov: usize,
    pub max_restarts: usize,
}
pub struct DiagonalSolver;
pub struct AutoSolver;

impl Named for DenseSolver {
    fn name(&self) -> &'static str {
        "dense"
    }
}

impl Eigensolver for DenseSolver {
    fn solve(&self, op: &SectorOperator, _seed: u64) -> Result<Eigenpair, SpectralError> {
        let eig = SymmetricEigen::new(op.to_dense());
        let (idx, &value) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty sector");
        Ok(Eigenpair {
            value,
            vector: eig.eigenvectors.column(idx).iter().copied().collect(),
            method: "dense",
        })
    }
}

impl Named for DiagonalSolver {
    fn name(&self) -> &'static str {
        "diagonal"
    }
}

impl Eigensolver for DiagonalSolver {
    fn solve(&self, op: &SectorOperator, _seed: u64) -> Result<Eigenpair, SpectralError> {
        if !op.is_diagonal() {
            return Err(SpectralError::Unsupported {
                solver: "diagonal",
                reason: "operator has off-diagonal terms".into(),
            });
        }
        let diag = op.diagonal();
        let (idx, &value) = diag
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty sector");
        let mut vector = vec![0.0; diag.len()];
        vector[idx] = 1.0;
        Ok(Eigenpair {
            value,
            vector,
            method: "diagonal",
        })
    }
}

impl Default for LanczosSolver {
    fn default() -> Self {
        LanczosSolver {
            krylov: 80,
            max_restarts: 400,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

impl Named for LanczosSolver {
    fn name(&self) -> &'static str {
        "iterative"
    }
}

impl LanczosSolver {
    /// One Lanczos cycle from `start` with full reorthogonalization; returns
    /// the lowest Ritz pair.
    fn cycle(&self, op: &SectorOperator, start: Vec<f64>) -> (f64, Vec<f64>) {
        let d = op.dimension();
        let m = self.krylov.min(d);
        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            let mut w = op.apply(&basis[j]);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            if j + 1 == m {
                break;
            }
            let b = normalize(&mut w);
            if b < 1e-12 {
                break;
            }
            beta.push(b);
            basis.push(w);
        }
        let k = alpha.len();
        let tri = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let (idx, &value) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty Krylov space");
        let y = eig.eigenvectors.column(idx);
        let mut ritz = vec![0.0; d];
        for (q, &c) in basis.iter().zip(y.iter()) {
            ritz.iter_mut().zip(q).for_each(|(x, v)| *x += c * v);
        }
        normalize(&mut ritz);
        (value, ritz)
    }
}

impl Eigensolver for LanczosSolver {
    fn solve(&self, op: &SectorOperator, seed: u64) -> Result<Eigenpair, SpectralError> {
        let d = op.dimension();
        let tol = 1e-10 * (d as f64).max(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        normalize(&mut v);
        let mut residual = f64::INFINITY;
        for _ in 0..self.max_restarts.max(1) {
            let (value, ritz) = self.cycle(op, v);
            residual = op.residual(value, &ritz);
            if residual <= tol {
                return Ok(Eigenpair {
                    value,
                    vector: ritz,
                    method: "iterative",
                });
            }
            v = ritz;
        }
        Err(SpectralError::NoConvergence {
            iterations: self.max_restarts * self.krylov,
            residual,
        })
    }
}

impl Named for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }
}

impl Eigensolver for AutoSolver {
    fn solve(&self, op: &SectorOperator, seed: u64) -> Result<Eigenpair, SpectralError> {
        if op.is_diagonal() {
            DiagonalSolver.solve(op, seed)
        } else if op.dimension() <= DENSE_LIMIT {
            DenseSolver.solve(op, seed)
        } else {
            LanczosSolver::default().solve(op, seed)
        }
    }
}

pub fn solver_registry() -> Registry<dyn Eigensolver> {
    Registry::<dyn Eigensolver>::new("eigensolver")
        .with(Box::new(AutoSolver))
        .with(Box::new(DenseSolver))
        .with(Box::new(LanczosSolver::default()))
        .with(Box::new(DiagonalSolver))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub sector: Sector,
    pub dimension: usize,
    pub lambda_min: f64,
    pub residual: f64,
    pub method: &'static str,
    pub seed: u64,
}

/// Ground energy of `inst` on `sector` with a named solver.
pub fn min_eigenvalue_with(
    inst: &XZInstance,
    sector: Sector,
    solver: &dyn Eigensolver,
    seed: u64,
) -> Result<(SpectralReport, Vec<f64>), SpectralError> {
    let op = SectorOperator::new(inst, sector)?;
    let pair = solver.solve(&op, seed)?;
    if pair.value < -PSD_TOLERANCE {
        return Err(SpectralError::NotPositive(pair.value));
    }
    let residual = op.residual(pair.value, &pair.vector);
    Ok((
        SpectralReport {
            sector,
            dimension: op.dimension(),
            lambda_min: pair.value,
            residual,
            method: pair.method,
            seed,
        },
        pair.vector,
    ))
}

pub fn min_eigenvalue(inst: &XZInstance, sector: Sector) -> Result<SpectralReport, SpectralError> {
    min_eigenvalue_with(inst, sector, &AutoSolver, 0).map(|(r, _)| r)
}

/// The 2×2 form `[[k/2, −√k/2], [−√k/2, 3/2]]`, kept exact through its
/// rational trace and determinant.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticFormBound {
    pub k: u64,
    #[serde(serialize_with = "ratio_str")]
    pub trace: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub det: Ratio<u64>,
    pub lambda_min: f64,
}

fn ratio_str<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl QuadraticFormBound {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let k = self.k as f64;
        let off = -k.sqrt() / 2.0;
        [[k / 2.0, off], [off, 1.5]]
    }
}

/// `λ_min = ((3+k)/4)(1 − √(1 − 8k/(3+k)²))`, evaluated as `det / λ_max` to
/// avoid cancellation for large `k`.
pub fn quadratic_form_bound(k: u64) -> Result<QuadraticFormBound, SpectralError> {
    if k == 0 {
        return Err(SpectralError::ZeroK);
    }
    let trace = Ratio::new(k + 3, 2);
    let det = Ratio::new(k, 2);
    let kf = k as f64;
    let lambda_max = ((3.0 + kf) / 4.0) * (1.0 + (1.0 - 8.0 * kf / (3.0 + kf).powi(2)).sqrt());
    let lambda_min = (kf / 2.0) / lambda_max;
    if lambda_min < 0.25 {
        return Err(SpectralError::BelowQuarter(lambda_min));
    }
    Ok(QuadraticFormBound {
        k,
        trace,
        det,
        lambda_min,
    })
}

/// `Σ_{i=1}^k (½‖α₀ − U_i α_i‖² + ‖α_i‖²)` for normalized `(α₀, …, α_k)`.
pub fn component_energy_check(unitaries: &[DMatrix<f64>], vectors: &[DVector<f64>]) -> Result<f64, SpectralError> {
    let k = unitaries.len();
    if vectors.len() != k + 1 {
        return Err(SpectralError::Shape {
            expected: k + 1,
            found: vectors.len(),
        });
    }
    let total: f64 = vectors.iter().map(|v| v.norm_squared()).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SpectralError::NotNormalized(total));
    }
    let a0 = &vectors[0];
    let e: f64 = unitaries
        .iter()
        .zip(&vectors[1..])
        .map(|(u, a)| 0.5 * (a0 - u * a).norm_squared() + a.norm_squared())
        .sum();
    if e < 0.25 - 1e-12 {
        return Err(SpectralError::BelowQuarter(e));
    }
    Ok(e)
}
