//! Pulse schedules and their composition.
//!
//! Pulses are stored in temporal order, first-applied first. The unitary of
//! a schedule `[p₁, p₂, …, pₖ]` is `Uₖ ⋯ U₂ U₁`.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{dimension, leaked_index, Operator, StateVector, DEFAULT_CUTOFF};
use crate::pulse::{pulse_action, Pulse};

pub use crate::angle::parse_angle_expression;

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub num_ions: usize,
    /// Recommended cutoff; simulations may raise it but not lower it.
    pub cutoff: usize,
    pub label: String,
    pub pulses: Vec<Pulse>,
}

impl Schedule {
    pub fn new(num_ions: usize, label: impl Into<String>) -> Schedule {
        Schedule {
            num_ions,
            cutoff: DEFAULT_CUTOFF,
            label: label.into(),
            pulses: Vec::new(),
        }
    }

    pub fn with_pulses(num_ions: usize, label: impl Into<String>, pulses: Vec<Pulse>) -> Result<Schedule> {
        let s = Schedule {
            pulses,
            ..Schedule::new(num_ions, label)
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_ions == 0 {
            return Err(crate::error::invalid("schedule needs at least one ion"));
        }
        for p in &self.pulses {
            p.validate(self.num_ions)?;
        }
        Ok(())
    }

    pub fn push(&mut self, p: Pulse) {
        self.pulses.push(p);
    }

    pub fn extend(&mut self, other: &Schedule) {
        self.pulses.extend(other.pulses.iter().cloned());
    }

    /// `self` followed in time by `next`.
    pub fn then(&self, next: &Schedule) -> Schedule {
        let mut out = self.clone();
        out.num_ions = self.num_ions.max(next.num_ions);
        out.cutoff = self.cutoff.max(next.cutoff);
        out.extend(next);
        out
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn sideband_count(&self) -> usize {
        self.pulses.iter().filter(|p| p.kind.is_sideband()).count()
    }

    /// Highest phonon level reachable from a state with at most `q` phonons.
    pub fn phonon_reach(&self, q: usize) -> usize {
        self.pulses.iter().fold(q, |acc, p| p.reach(acc))
    }
}

/// Product of the pulse unitaries, last pulse leftmost.
///
/// The returned operator lists every index flagged by any pulse as
/// incomplete; use [`checked_schedule_unitary`] to police truncation for a
/// particular set of input states.
pub fn schedule_unitary(s: &Schedule, cutoff: usize) -> Result<Operator> {
    s.validate()?;
    let dim = dimension(s.num_ions, cutoff);
    let mut m = Array2::<Complex64>::eye(dim);
    let mut incomplete = Vec::new();
    for p in &s.pulses {
        let action = pulse_action(p, s.num_ions, cutoff)?;
        action.apply_left(m.view_mut());
        incomplete.extend(action.incomplete);
    }
    incomplete.sort_unstable();
    incomplete.dedup();
    Ok(Operator {
        num_ions: s.num_ions,
        cutoff,
        matrix: m,
        incomplete_pairs: incomplete,
    })
}

/// Schedule unitary, failing if any of the given input basis states is
/// carried onto a truncated pair at some point during the schedule.
///
/// On success the operator's `incomplete_pairs` is empty: on the span of
/// `inputs` the matrix is exact.
pub fn checked_schedule_unitary(s: &Schedule, cutoff: usize, inputs: &[usize]) -> Result<Operator> {
    s.validate()?;
    let dim = dimension(s.num_ions, cutoff);
    let mut m = Array2::<Complex64>::eye(dim);
    for (k, p) in s.pulses.iter().enumerate() {
        let action = pulse_action(p, s.num_ions, cutoff)?;
        for &col in inputs {
            let column = m.column(col);
            for &i in &action.incomplete {
                let a = column[i].norm();
                if a > crate::hilbert::LEAK_THRESHOLD {
                    return Err(Error::TruncationLeak {
                        index: i,
                        amplitude: a,
                        cutoff,
                        pulse: Some(k),
                    });
                }
            }
        }
        action.apply_left(m.view_mut());
    }
    Ok(Operator {
        num_ions: s.num_ions,
        cutoff,
        matrix: m,
        incomplete_pairs: Vec::new(),
    })
}

/// Reversed order, negated areas. Its unitary is the adjoint of the original.
pub fn invert_schedule(s: &Schedule) -> Schedule {
    Schedule {
        pulses: s.pulses.iter().rev().map(Pulse::inverse).collect(),
        ..s.clone()
    }
}

/// How to react when a state reaches a truncated sideband pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruncationMode {
    /// Fail with a truncation-leak error.
    #[default]
    Strict,
    /// Re-embed the state at a larger cutoff and continue.
    Auto,
}

/// Applies a schedule pulse by pulse to a state.
///
/// In auto mode the returned state may live at a larger cutoff than the input.
pub fn run_schedule(s: &Schedule, state: &StateVector, mode: TruncationMode) -> Result<StateVector> {
    s.validate()?;
    if state.num_ions != s.num_ions {
        return Err(Error::DimensionMismatch {
            expected: s.num_ions,
            actual: state.num_ions,
        });
    }
    let mut psi = state.clone();
    for (k, p) in s.pulses.iter().enumerate() {
        let action = loop {
            let action = pulse_action(p, psi.num_ions, psi.cutoff)?;
            match leaked_index(&action.incomplete, &psi.amplitudes) {
                None => break action,
                Some((index, amplitude)) => match mode {
                    TruncationMode::Strict => {
                        return Err(Error::TruncationLeak {
                            index,
                            amplitude,
                            cutoff: psi.cutoff,
                            pulse: Some(k),
                        })
                    }
                    TruncationMode::Auto => psi = psi.embed(psi.cutoff + p.order.max(1))?,
                },
            }
        };
        action.apply_vec(&mut psi.amplitudes);
    }
    Ok(psi)
}

/// Where a named gate sits inside an emitted schedule, as a pulse range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub name: String,
    pub start: usize,
    pub end: usize,
}
