//! QUBO formulation of the minimum-cut subproblem and its solvers.
//!
//! A [`QuboInstance`] is a symmetric real matrix `Q`; the objective is
//! `E(x) = x^T Q x` over binary `x`, i.e. diagonal entries act as linear
//! terms and each unordered pair contributes `2 q_ij x_i x_j`.
//!
//! [`build_mincut_qubo`] encodes a signed graph so that `E(x)` equals the
//! weight of the cut separating `x=1` from `x=0` exactly, state by state.
//! Two native solvers are provided: exhaustive enumeration over a Gray-code
//! walk (exact, capacity-limited) and restarted simulated annealing.
//! External backends can be plugged in through [`SolverRegistry`]; their
//! reported energies are revalidated against the returned bits.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// Exhaustive enumeration refuses instances above this many variables.
pub const EXACT_HARD_CAP: usize = 30;

/// Agreement tolerance when revalidating an external solver's energy.
const EXTERNAL_ENERGY_TOL: f64 = 1e-9;

/// Symmetric QUBO matrix; see the module docs for the energy convention.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboInstance {
    n: usize,
    /// Row-major `n * n`, symmetric; diagonal holds the linear terms.
    coeffs: Vec<f64>,
}

impl QuboInstance {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("QUBO must have n >= 1".into()));
        }
        if coeffs.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "QUBO matrix has {} entries, expected {}",
                coeffs.len(),
                n * n
            )));
        }
        for i in 0..n {
            for j in 0..=i {
                let a = coeffs[i * n + j];
                if !a.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "QUBO entry ({i},{j}) = {a} is not finite"
                    )));
                }
                if a != coeffs[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "QUBO not symmetric at ({i},{j}): {a} vs {}",
                        coeffs[j * n + i]
                    )));
                }
            }
        }
        Ok(QuboInstance { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.n + j]
    }

    /// Largest `|q_ij|`; sets the annealing temperature scale.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, &a| m.max(a.abs()))
    }

    /// Direct evaluation of `E(x) = x^T Q x`.
    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "state has {} bits for {} variables",
                bits.len(),
                self.n
            )));
        }
        let mut e = 0.0;
        for i in 0..self.n {
            if !bits[i] {
                continue;
            }
            e += self.coeff(i, i);
            for j in (i + 1)..self.n {
                if bits[j] {
                    e += 2.0 * self.coeff(i, j);
                }
            }
        }
        Ok(e)
    }
}

/// Min-cut encoding: `q_ii = sum_j w_ij`, `q_ij = -w_ij`.
///
/// With that choice `E(x) = sum_{i<j} w_ij (x_i + x_j - 2 x_i x_j)`, which is
/// the weight crossing the bipartition `{x=1} | {x=0}`. A negative optimum
/// therefore certifies a profitable split.
pub fn build_mincut_qubo(g: &SignedGraph) -> QuboInstance {
    let n = g.n();
    let mut coeffs = vec![0.0; n * n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if j != i {
                coeffs[i * n + j] = -g.weight(i, j);
                row_sum += g.weight(i, j);
            }
        }
        coeffs[i * n + i] = row_sum;
    }
    QuboInstance { n, coeffs }
}

/// Which solver family handles a [`solve`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// Exact when the instance fits under `exact_threshold`, else annealing.
    Auto,
    Exact,
    Anneal,
    /// Named solver from a [`SolverRegistry`].
    External(String),
}

/// Solver knobs; `Default` gives the settings used throughout the tooling.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub backend: Backend,
    /// `Auto` switches to annealing above this many variables.
    pub exact_threshold: usize,
    /// Full single-bit-flip passes per annealing run.
    pub sweeps: usize,
    /// Independent annealing runs; best result wins.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::Auto,
            exact_threshold: 24,
            sweeps: 2000,
            restarts: 8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.exact_threshold > EXACT_HARD_CAP {
            return Err(Error::Config(format!(
                "exact_threshold {} exceeds the enumeration cap {EXACT_HARD_CAP}",
                self.exact_threshold
            )));
        }
        if self.sweeps == 0 {
            return Err(Error::Config("sweeps must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one QUBO solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub bits: Vec<bool>,
    /// Recomputed from `bits` by direct evaluation, never the solver's
    /// running estimate.
    pub energy: f64,
    pub solver: String,
    pub diagnostics: BTreeMap<String, u64>,
}

/// Exhaustive minimization over all `2^n` states.
///
/// Walks states in Gray-code order, maintaining per-variable local fields so
/// each step costs `O(n)`. Among states whose running energies compare
/// exactly equal, the lexicographically smallest bit vector wins; the
/// reported energy is recomputed from the winning bits.
pub fn solve_exact(q: &QuboInstance) -> Result<SolveResult> {
    let n = q.n();
    if n > EXACT_HARD_CAP {
        return Err(Error::Capacity(format!(
            "exact enumeration over {n} variables would visit 2^{n} states \
             (cap {EXACT_HARD_CAP}); use the annealing backend"
        )));
    }
    // h[i] = q_ii + 2 sum_{j != i} q_ij x_j: the energy delta of raising x_i.
    let mut h: Vec<f64> = (0..n).map(|i| q.coeff(i, i)).collect();
    let mut state: u32 = 0;
    let mut energy = 0.0;
    let mut best_state: u32 = 0;
    let mut best_energy = 0.0;
    let total: u64 = 1u64 << n;
    for t in 1..total {
        let b = t.trailing_zeros() as usize;
        let mask = 1u32 << b;
        let raising = state & mask == 0;
        if raising {
            energy += h[b];
            state |= mask;
        } else {
            energy -= h[b];
            state &= !mask;
        }
        let s2 = if raising { 2.0 } else { -2.0 };
        for (i, hi) in h.iter_mut().enumerate() {
            *hi += s2 * q.coeff(i, b);
        }
        // h[b] excludes the j = b term; undo the self contribution.
        h[b] -= s2 * q.coeff(b, b);
        if energy < best_energy || (energy == best_energy && lex_smaller(state, best_state)) {
            best_energy = energy;
            best_state = state;
        }
    }
    let bits: Vec<bool> = (0..n).map(|i| best_state >> i & 1 == 1).collect();
    let energy = q.energy(&bits)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("states_enumerated".to_string(), total);
    Ok(SolveResult {
        bits,
        energy,
        solver: "exact".to_string(),
        diagnostics,
    })
}

/// True when bit vector `a` precedes `b` lexicographically (bit 0 first).
fn lex_smaller(a: u32, b: u32) -> bool {
    let d = a ^ b;
    debug_assert!(d != 0);
    a >> d.trailing_zeros() & 1 == 0
}

/// Restarted simulated annealing with a geometric cooling schedule.
///
/// Each restart runs `cfg.sweeps` full passes of single-bit Metropolis moves,
/// cooling from `T0 = n * max|q_ij|` down to `1e-3 * T0`. Restarts execute in
/// parallel but are merged in index order, and restart `r` draws from a
/// stream seeded with `cfg.seed + r`, so results do not depend on thread
/// scheduling. The all-zeros state (energy 0) is always a candidate, so the
/// returned energy is never positive.
pub fn solve_anneal(q: &QuboInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let n = q.n();
    let t0 = q.max_abs_coeff().max(1e-12) * n as f64;
    let t_end = 1e-3 * t0;
    let ratio = if cfg.sweeps > 1 {
        (t_end / t0).powf(1.0 / (cfg.sweeps as f64 - 1.0))
    } else {
        1.0
    };
    let runs: Vec<(f64, Vec<bool>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
            let mut x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            let mut h: Vec<f64> = (0..n)
                .map(|i| {
                    let mut hi = q.coeff(i, i);
                    for j in 0..n {
                        if j != i && x[j] {
                            hi += 2.0 * q.coeff(i, j);
                        }
                    }
                    hi
                })
                .collect();
            let mut energy = q.energy(&x).expect("state length matches");
            let mut best = (energy, x.clone());
            let mut t = t0;
            for _ in 0..cfg.sweeps {
                for i in 0..n {
                    let delta = if x[i] { -h[i] } else { h[i] };
                    let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp();
                    if !accept {
                        continue;
                    }
                    energy += delta;
                    let s2 = if x[i] { -2.0 } else { 2.0 };
                    x[i] = !x[i];
                    for (j, hj) in h.iter_mut().enumerate() {
                        *hj += s2 * q.coeff(j, i);
                    }
                    h[i] -= s2 * q.coeff(i, i);
                    if energy < best.0 {
                        best = (energy, x.clone());
                    }
                }
                t *= ratio;
            }
            let e = q.energy(&best.1).expect("state length matches");
            (e, best.1)
        })
        .collect();
    let mut best_bits = vec![false; n];
    let mut best_energy = 0.0;
    for (e, bits) in runs {
        if e < best_energy {
            best_energy = e;
            best_bits = bits;
        }
    }
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("restarts".to_string(), cfg.restarts as u64);
    diagnostics.insert("sweeps".to_string(), cfg.sweeps as u64);
    Ok(SolveResult {
        bits: best_bits,
        energy: best_energy,
        solver: "anneal".to_string(),
        diagnostics,
    })
}

/// A pluggable QUBO backend (hardware annealer client, alternative
/// heuristic, mock for tests).
pub trait QuboSolver: Send + Sync {
    fn solve(&self, q: &QuboInstance, cfg: &SolverConfig) -> Result<SolveResult>;
}

/// Named external solvers addressable from [`Backend::External`].
#[derive(Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<String, Box<dyn QuboSolver>>,
}

impl SolverRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: impl Into<String>, solver: Box<dyn QuboSolver>) {
        self.solvers.insert(name.into(), solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn QuboSolver> {
        self.solvers.get(name).map(|s| s.as_ref())
    }
}

/// Dispatch a solve according to `cfg.backend`; external backends are not
/// available through this entry point.
pub fn solve(q: &QuboInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_with_registry(q, cfg, None)
}

/// [`solve`] with an optional registry for [`Backend::External`].
///
/// External results are revalidated: the bits must have the right length and
/// evaluate to the reported energy within 1e-9. The stored energy is always
/// the recomputed one.
pub fn solve_with_registry(
    q: &QuboInstance,
    cfg: &SolverConfig,
    registry: Option<&SolverRegistry>,
) -> Result<SolveResult> {
    cfg.validate()?;
    match &cfg.backend {
        Backend::Auto => {
            if q.n() <= cfg.exact_threshold {
                solve_exact(q)
            } else {
                solve_anneal(q, cfg)
            }
        }
        Backend::Exact => solve_exact(q),
        Backend::Anneal => solve_anneal(q, cfg),
        Backend::External(name) => {
            let solver = registry
                .and_then(|r| r.get(name))
                .ok_or_else(|| Error::Config(format!("no external solver named {name:?}")))?;
            let mut result = solver.solve(q, cfg)?;
            let recomputed = q.energy(&result.bits).map_err(|_| {
                Error::Numerical(format!(
                    "external solver {name:?} returned {} bits for {} variables",
                    result.bits.len(),
                    q.n()
                ))
            })?;
            if (recomputed - result.energy).abs() > EXTERNAL_ENERGY_TOL {
                return Err(Error::Numerical(format!(
                    "external solver {name:?} reported energy {} but its state evaluates to {}",
                    result.energy, recomputed
                )));
            }
            result.energy = recomputed;
            result.solver = name.clone();
            Ok(result)
        }
    }
}

/// Write a QUBO matrix as CSV (`n` rows of `n` reals, no header).
pub fn write_qubo_csv(path: &Path, q: &QuboInstance) -> Result<()> {
    let mut out = Vec::new();
    for i in 0..q.n() {
        let row: Vec<String> = (0..q.n()).map(|j| format!("{}", q.coeff(i, j))).collect();
        writeln!(out, "{}", row.join(",")).expect("write to vec");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Read a matrix written by [`write_qubo_csv`].
pub fn read_qubo_csv(path: &Path) -> Result<QuboInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let n = lines.len();
    let mut coeffs = Vec::with_capacity(n * n);
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n {
            return Err(Error::Parse(format!(
                "{}: row {i} has {} fields, expected {n}",
                path.display(),
                fields.len()
            )));
        }
        for (j, f) in fields.iter().enumerate() {
            coeffs.push(f.parse().map_err(|_| {
                Error::Parse(format!(
                    "{}: row {i}, column {j}: {f:?} is not a number",
                    path.display()
                ))
            })?);
        }
    }
    QuboInstance::new(n, coeffs)
}
