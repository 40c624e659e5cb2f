//! Register basis, Fock-space matrix elements, states and operators.
//!
//! The space is N two-level ions tensored with one shared motional mode
//! truncated at phonon number `cutoff`. Basis states are laid out spin-major
//! with the phonon index innermost:
//!
//! ```text
//! index = (Σᵢ spins[i]·2^(N−1−i))·(cutoff+1) + q
//! ```
//!
//! so for a single ion the first four indices are |00⟩, |01⟩, |10⟩, |11⟩ in
//! the `|spin motional⟩` labelling.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{invalid, Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

pub const DEFAULT_CUTOFF: usize = 12;

/// Entries smaller than this are treated as absent when policing truncation.
pub const LEAK_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    pub num_ions: usize,
    /// kg
    pub ion_mass: f64,
    /// rad/s
    pub trap_frequency: f64,
    /// rad/s, informational only
    pub transition_frequency: f64,
    /// 1/m
    pub wavenumber: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapScales {
    /// Motional length scale z₀ in metres.
    pub z0: f64,
    /// Lamb-Dicke parameter η = k·z₀.
    pub eta: f64,
}

/// Motional length scale `z₀ = √(ħ / 2Nmω_z)` and Lamb-Dicke parameter `η = k z₀`.
pub fn trap_parameters(cfg: &TrapConfig) -> Result<TrapScales> {
    if cfg.num_ions == 0 {
        return Err(invalid("num_ions must be at least 1"));
    }
    for (name, v) in [
        ("ion_mass", cfg.ion_mass),
        ("trap_frequency", cfg.trap_frequency),
        ("transition_frequency", cfg.transition_frequency),
        ("wavenumber", cfg.wavenumber),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let z0 = (HBAR / (2.0 * cfg.num_ions as f64 * cfg.ion_mass * cfg.trap_frequency)).sqrt();
    Ok(TrapScales {
        z0,
        eta: cfg.wavenumber * z0,
    })
}

/// `|spins; q⟩`, ion 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterBasisState {
    pub spins: Vec<u8>,
    pub phonon: usize,
}

impl RegisterBasisState {
    pub fn new(spins: Vec<u8>, phonon: usize) -> Self {
        RegisterBasisState { spins, phonon }
    }

    /// Spin pattern as an integer, ion 0 most significant.
    pub fn spin_word(&self) -> usize {
        self.spins.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

impl std::fmt::Display for RegisterBasisState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for s in &self.spins {
            write!(f, "{s}")?;
        }
        write!(f, ";{}⟩", self.phonon)
    }
}

pub fn dimension(num_ions: usize, cutoff: usize) -> usize {
    (1usize << num_ions) * (cutoff + 1)
}

pub fn basis_index(state: &RegisterBasisState, num_ions: usize, cutoff: usize) -> Result<usize> {
    if state.spins.len() != num_ions {
        return Err(invalid(format!(
            "expected {num_ions} spins, got {}",
            state.spins.len()
        )));
    }
    if let Some(s) = state.spins.iter().find(|&&s| s > 1) {
        return Err(invalid(format!("spin label {s} is not 0 or 1")));
    }
    if state.phonon > cutoff {
        return Err(invalid(format!(
            "phonon level {} exceeds cutoff {cutoff}",
            state.phonon
        )));
    }
    Ok(state.spin_word() * (cutoff + 1) + state.phonon)
}

pub fn basis_state(index: usize, num_ions: usize, cutoff: usize) -> Result<RegisterBasisState> {
    if index >= dimension(num_ions, cutoff) {
        return Err(invalid(format!("basis index {index} out of range")));
    }
    let word = index / (cutoff + 1);
    let spins = (0..num_ions)
        .map(|i| ((word >> (num_ions - 1 - i)) & 1) as u8)
        .collect();
    Ok(RegisterBasisState {
        spins,
        phonon: index % (cutoff + 1),
    })
}

/// `n!` for `n ≤ 20`.
pub fn factorial(n: u32) -> Option<u64> {
    (n <= 20).then(|| (1..=n as u64).product())
}

/// `q!/(q−n)!`, exact, or `None` on overflow or `n > q`.
pub fn falling_factorial(q: usize, n: usize) -> Option<u128> {
    if n > q {
        return None;
    }
    ((q - n + 1)..=q).try_fold(1u128, |acc, k| acc.checked_mul(k as u128))
}

/// Squared matrix element `⟨q_out|aⁿ|q_in⟩²`, exact.
pub fn mode_matrix_element_squared(q_out: usize, n: usize, q_in: usize) -> Option<u128> {
    if q_in < n || q_out != q_in - n {
        return Some(0);
    }
    falling_factorial(q_in, n)
}

/// `⟨q_out|aⁿ|q_in⟩ = √(q_in!/(q_in−n)!)` when `q_out = q_in − n`, else 0.
pub fn mode_matrix_element(q_out: usize, n: usize, q_in: usize) -> f64 {
    if q_in < n || q_out != q_in - n {
        return 0.0;
    }
    match falling_factorial(q_in, n) {
        Some(v) => Dd::from_u128(v).sqrt().expect("non-negative").to_f64(),
        None => ((q_in - n + 1)..=q_in).map(|k| (k as f64).sqrt()).product(),
    }
}

/// Sideband coupling `√((q+n)!/q!)` in double-double precision.
pub(crate) fn coupling(q: usize, n: usize) -> Dd {
    match falling_factorial(q + n, n) {
        Some(v) => Dd::from_u128(v).sqrt().expect("non-negative"),
        None => Dd::from_f64(((q + 1)..=(q + n)).map(|k| (k as f64).sqrt()).product()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub num_ions: usize,
    pub cutoff: usize,
    pub amplitudes: Array1<Complex64>,
}

impl StateVector {
    pub fn basis(state: &RegisterBasisState, num_ions: usize, cutoff: usize) -> Result<Self> {
        let idx = basis_index(state, num_ions, cutoff)?;
        let mut amplitudes = Array1::zeros(dimension(num_ions, cutoff));
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_ions,
            cutoff,
            amplitudes,
        })
    }

    /// Wraps amplitudes that must already be normalized to 1e-12.
    pub fn from_amplitudes(num_ions: usize, cutoff: usize, amplitudes: Array1<Complex64>) -> Result<Self> {
        let dim = dimension(num_ions, cutoff);
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let s = StateVector {
            num_ions,
            cutoff,
            amplitudes,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, state: &RegisterBasisState) -> Result<Complex64> {
        Ok(self.amplitudes[basis_index(state, self.num_ions, self.cutoff)?])
    }

    /// Same state in a space with a different cutoff. Shrinking fails if
    /// amplitude would be discarded.
    pub fn embed(&self, cutoff: usize) -> Result<StateVector> {
        let mut out = Array1::zeros(dimension(self.num_ions, cutoff));
        for (i, a) in self.amplitudes.iter().enumerate() {
            let (word, q) = (i / (self.cutoff + 1), i % (self.cutoff + 1));
            if q > cutoff {
                if a.norm() > LEAK_THRESHOLD {
                    return Err(Error::TruncationLeak {
                        index: i,
                        amplitude: a.norm(),
                        cutoff,
                        pulse: None,
                    });
                }
                continue;
            }
            out[word * (cutoff + 1) + q] = *a;
        }
        Ok(StateVector {
            num_ions: self.num_ions,
            cutoff,
            amplitudes: out,
        })
    }

    /// Basis states carrying amplitude above `threshold`, in index order.
    pub fn support(&self, threshold: f64) -> Vec<(RegisterBasisState, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| (basis_state(i, self.num_ions, self.cutoff).expect("in range"), *a))
            .collect()
    }
}

/// Dense operator on the register space.
///
/// `incomplete_pairs` lists basis indices whose sideband partner lies above
/// the cutoff; on those states the stored matrix acts as the identity, which
/// is only faithful if the state carries no amplitude there.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub num_ions: usize,
    pub cutoff: usize,
    pub matrix: Array2<Complex64>,
    pub incomplete_pairs: Vec<usize>,
}

impl Operator {
    pub fn identity(num_ions: usize, cutoff: usize) -> Self {
        Operator {
            num_ions,
            cutoff,
            matrix: Array2::eye(dimension(num_ions, cutoff)),
            incomplete_pairs: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: self.matrix.t().mapv(|z| z.conj()),
            ..self.clone()
        }
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.t().mapv(|z| z.conj()).dot(&self.matrix);
        let mut worst: f64 = 0.0;
        for ((i, j), z) in prod.indexed_iter() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((z - target).norm());
        }
        worst
    }

    /// Largest entrywise deviation from another operator of the same shape.
    pub fn max_deviation(&self, other: &Operator) -> f64 {
        max_entry_deviation(&self.matrix, &other.matrix)
    }
}

pub(crate) fn max_entry_deviation(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Returns the first flagged index carrying amplitude above the leak threshold.
pub(crate) fn leaked_index(incomplete: &[usize], amplitudes: &Array1<Complex64>) -> Option<(usize, f64)> {
    incomplete
        .iter()
        .map(|&i| (i, amplitudes[i].norm()))
        .find(|&(_, a)| a > LEAK_THRESHOLD)
}

/// `U·ψ`, refusing states with amplitude on an incomplete pair.
pub fn apply_operator(op: &Operator, state: &StateVector) -> Result<StateVector> {
    if op.num_ions != state.num_ions || op.cutoff != state.cutoff {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            actual: state.dim(),
        });
    }
    if let Some((index, amplitude)) = leaked_index(&op.incomplete_pairs, &state.amplitudes) {
        return Err(Error::TruncationLeak {
            index,
            amplitude,
            cutoff: op.cutoff,
            pulse: None,
        });
    }
    Ok(StateVector {
        num_ions: state.num_ions,
        cutoff: state.cutoff,
        amplitudes: op.matrix.dot(&state.amplitudes),
    })
}
