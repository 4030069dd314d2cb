//! Floating-point simulation of the walk's unitary evolution
//! `psi_(t+1) = U psi_t`, with per-vertex probabilities and numerical
//! period detection to corroborate the exact `2n` period.
//!
//! This module is the only place exact values are evaluated numerically;
//! everything structural stays in the exact engine.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cyclotomic::CycNum;
use crate::linalg::CycMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("state has norm {norm}, expected 1 within {tol}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("state length {found} does not match n^2 = {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex index {index} out of range for n = {n}")]
    VertexOutOfRange { index: usize, n: usize },
}

const NORM_TOL: f64 = 1e-9;

/// The stacked amplitude vector `[psi(v_1), ..., psi(v_n)]` of length `n^2`,
/// kept normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl AmplitudeState {
    /// Wraps an already-normalized amplitude vector; rejects states whose
    /// norm is off by more than `1e-9`.
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        if amplitudes.len() != n * n {
            return Err(SimError::WrongLength { expected: n * n, found: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(AmplitudeState { n, amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn from_unnormalized(n: usize, amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        if amplitudes.len() != n * n {
            return Err(SimError::WrongLength { expected: n * n, found: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(SimError::NotNormalized { norm, tol: NORM_TOL });
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(AmplitudeState { n, amplitudes })
    }

    /// Equal amplitude `1/n` on every component.
    pub fn uniform(n: usize) -> Self {
        let value = Complex64::new(1.0 / n as f64, 0.0);
        AmplitudeState { n, amplitudes: vec![value; n * n] }
    }

    /// Amplitude spread uniformly over the block of vertex `j` (0-indexed).
    pub fn vertex(n: usize, j: usize) -> Result<Self, SimError> {
        if j >= n {
            return Err(SimError::VertexOutOfRange { index: j, n });
        }
        let value = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            amplitudes[j * n + k] = value;
        }
        Ok(AmplitudeState { n, amplitudes })
    }

    /// Standard complex Gaussian entries, normalized.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let amplitudes: Vec<Complex64> = (0..n * n)
            .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        Self::from_unnormalized(n, amplitudes).expect("gaussian vector is nonzero")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Squared norm of each vertex block.
    pub fn vertex_probabilities(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                self.amplitudes[j * self.n..(j + 1) * self.n]
                    .iter()
                    .map(|a| a.norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Box-Muller, to avoid pulling a distributions crate for one sampler.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Dense double-precision walk operator.
#[derive(Debug, Clone)]
pub struct EvolutionMatrix {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

/// The `n^2 x n^2` walk operator with block `(r, c)` equal to
/// `P_((c - r) mod n)`, built directly from the rational entries.
pub fn build_u_float(n: usize) -> EvolutionMatrix {
    assert!(n >= 2, "walk matrices require n >= 2");
    let dim = n * n;
    let off = 2.0 / n as f64;
    let diag = off - 1.0;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for br in 0..n {
        for bc in 0..n {
            let j = (bc + n - br) % n; // block is P_j, whose only nonzero row is j
            for c in 0..n {
                let value = if c == j { diag } else { off };
                data[(br * n + j) * dim + bc * n + c] = Complex64::new(value, 0.0);
            }
        }
    }
    EvolutionMatrix { n, dim, data }
}

impl EvolutionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn apply(&self, state: &AmplitudeState) -> AmplitudeState {
        assert_eq!(state.n, self.n, "state size does not match the operator");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            *slot = row
                .iter()
                .zip(&state.amplitudes)
                .map(|(m, a)| m * a)
                .sum();
        }
        AmplitudeState { n: self.n, amplitudes: out }
    }

    /// Max-norm distance of `U U^*` from the identity; a unitarity probe.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.dim {
                    acc += self.entry(r, k) * self.entry(c, k).conj();
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }
}

/// Time-indexed simulation output: the state and per-vertex probabilities
/// at every step, and optionally a numerically detected period.
#[derive(Debug, Clone)]
pub struct WalkTrace {
    pub states: Vec<AmplitudeState>,
    pub probabilities: Vec<Vec<f64>>,
    pub detected_period: Option<usize>,
    pub seed: Option<u64>,
}

/// Applies the walk operator `steps` times, recording every state.
pub fn simulate(n: usize, initial: &AmplitudeState, steps: usize) -> Result<WalkTrace, SimError> {
    if initial.n != n {
        return Err(SimError::WrongLength { expected: n * n, found: initial.amplitudes.len() });
    }
    let norm = initial.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(SimError::NotNormalized { norm, tol: NORM_TOL });
    }
    let u = build_u_float(n);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial.clone());
    for _ in 0..steps {
        let next = u.apply(states.last().expect("trace is nonempty"));
        states.push(next);
    }
    let probabilities = states.iter().map(AmplitudeState::vertex_probabilities).collect();
    Ok(WalkTrace { states, probabilities, detected_period: None, seed: None })
}

/// Smallest `t <= max_steps` at which all `trials` random initial states
/// have returned to their starting point within `tol`, or `None`.
///
/// A single state can return early when it lies in a proper invariant
/// subspace, so several independent trials are required; the first time
/// *all* of them return is the least common multiple of their individual
/// periods, which is the walk period.
pub fn detect_period(
    n: usize,
    trials: usize,
    max_steps: usize,
    tol: f64,
    seed: u64,
) -> Option<usize> {
    assert!(trials >= 1, "period detection requires at least one trial");
    assert!(tol > 0.0, "tolerance must be positive");
    let u = build_u_float(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial: Vec<AmplitudeState> = (0..trials).map(|_| AmplitudeState::random(n, &mut rng)).collect();
    let mut current = initial.clone();
    for t in 1..=max_steps {
        for state in current.iter_mut() {
            *state = u.apply(state);
        }
        if current
            .iter()
            .zip(&initial)
            .all(|(now, start)| now.distance(start) < tol)
        {
            return Some(t);
        }
    }
    None
}

/// A deterministic generator for reproducible random states.
pub fn seeded_rng(seed: u64) -> impl Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default number of random trials for period detection.
pub const DEFAULT_TRIALS: usize = 8;

/// Default return tolerance for period detection.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default step bound for period detection: twice the expected period.
pub fn default_max_steps(n: usize) -> usize {
    4 * n
}

/// Numerical value of a field element, via `zeta_n = e^(2*pi*i/n)`.
pub fn cyc_to_complex(x: &CycNum) -> Complex64 {
    let n = x.modulus_n() as f64;
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let angle = std::f64::consts::TAU * k as f64 / n;
            let coeff = c.to_f64().expect("rational coefficient fits in f64");
            coeff * Complex64::from_polar(1.0, angle)
        })
        .sum()
}

/// Numerical realization of an exact matrix, row-major.
pub fn matrix_to_complex(m: &CycMatrix) -> Vec<Complex64> {
    let dim = m.dim();
    let mut out = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            out.push(cyc_to_complex(m.get(r, c)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::build_u;

    #[test]
    fn float_operator_matches_the_exact_operator() {
        for n in [2usize, 3, 4] {
            let float = build_u_float(n);
            let exact = matrix_to_complex(&build_u(n as u64));
            for r in 0..n * n {
                for c in 0..n * n {
                    let delta = (float.entry(r, c) - exact[r * n * n + c]).norm();
                    assert!(delta < 1e-15, "entry ({r},{c}) off by {delta} at n={n}");
                }
            }
        }
    }

    #[test]
    fn float_operator_is_unitary() {
        assert!(build_u_float(5).unitarity_defect() < 1e-12);
    }

    #[test]
    fn second_block_row_carries_p1() {
        // block (0, 1) is P_1: row 1 holds 2/n except 2/n - 1 at column 1
        let n = 4usize;
        let u = build_u_float(n);
        for c in 0..n {
            let expected = if c == 1 { 2.0 / 4.0 - 1.0 } else { 2.0 / 4.0 };
            assert_eq!(u.entry(1, n + c).re, expected);
            assert_eq!(u.entry(0, n + c).re, 0.0);
        }
    }

    #[test]
    fn zero_step_trace_contains_only_the_initial_state() {
        let initial = AmplitudeState::uniform(3);
        let trace = simulate(3, &initial, 0).unwrap();
        assert_eq!(trace.states.len(), 1);
        assert_eq!(trace.probabilities.len(), 1);
        assert_eq!(trace.states[0], initial);
    }

    #[test]
    fn walk_returns_after_two_n_steps() {
        for n in [3usize, 4] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for initial in [
                AmplitudeState::uniform(n),
                AmplitudeState::vertex(n, 0).unwrap(),
                AmplitudeState::random(n, &mut rng),
            ] {
                let trace = simulate(n, &initial, 2 * n).unwrap();
                let distance = trace.states.last().unwrap().distance(&initial);
                assert!(distance < 1e-9, "no return at n={n}: distance {distance}");
            }
        }
    }

    #[test]
    fn norm_is_preserved_along_the_trace() {
        let initial = AmplitudeState::vertex(5, 2).unwrap();
        let trace = simulate(5, &initial, 20).unwrap();
        for state in &trace.states {
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
        for probs in &trace.probabilities {
            let total: f64 = probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn detected_periods() {
        assert_eq!(detect_period(4, 4, 16, 1e-9, 1), Some(8));
        assert_eq!(detect_period(7, 4, 28, 1e-9, 1), Some(14));
        // unachievably tight tolerance
        assert_eq!(detect_period(3, 2, 12, 1e-30, 1), None);
    }

    #[test]
    fn unnormalized_states_are_rejected() {
        let bad = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            AmplitudeState::new(2, bad),
            Err(SimError::NotNormalized { .. })
        ));
        let wrong_len = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(
            AmplitudeState::new(2, wrong_len),
            Err(SimError::WrongLength { expected: 4, found: 3 })
        ));
        assert!(matches!(
            AmplitudeState::vertex(3, 3),
            Err(SimError::VertexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn float_power_tracks_exact_power() {
        // U_float^t vs the exact U^t evaluated numerically
        for n in [2usize, 3] {
            let u = build_u_float(n);
            let exact_u = build_u(n as u64);
            let t = 2 * n as u64;
            let exact_power = matrix_to_complex(&exact_u.mat_pow(t));
            // apply U t times to each basis column and compare
            let dim = n * n;
            for col in 0..dim {
                let mut state = vec![Complex64::new(0.0, 0.0); dim];
                state[col] = Complex64::new(1.0, 0.0);
                let mut state = AmplitudeState::new(n, state).unwrap();
                for _ in 0..t {
                    state = u.apply(&state);
                }
                for row in 0..dim {
                    let delta = (state.amplitudes()[row] - exact_power[row * dim + col]).norm();
                    assert!(delta < 1e-10, "entry ({row},{col}) drift {delta}");
                }
            }
        }
    }

    #[test]
    fn gaussian_sampler_is_seed_stable() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            AmplitudeState::random(3, &mut a),
            AmplitudeState::random(3, &mut b)
        );
    }
}
