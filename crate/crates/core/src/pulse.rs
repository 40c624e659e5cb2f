//! Carrier and sideband pulse unitaries.
//!
//! Every pulse couples basis states in disjoint pairs `(X, Y)` with coupling
//! strength `m`, so its unitary is a direct sum of 2×2 blocks:
//!
//! ```text
//! U|Y⟩ = cos(mθ/2)|Y⟩ + i·e^{ iφ}·sin(mθ/2)|X⟩
//! U|X⟩ = cos(mθ/2)|X⟩ + i·e^{−iφ}·sin(mθ/2)|Y⟩
//! ```
//!
//! Spin label 0 is the σ_z = +1 state and σ⁺ = |0⟩⟨1|. With that choice a
//! blue sideband of order n pairs `X = |0,q⟩` with `Y = |1,q+n⟩`, a red
//! sideband pairs `X = |0,q+n⟩` with `Y = |1,q⟩`, and both use
//! `m = √((q+n)!/q!)`. The carrier pairs `|0,q⟩` with `|1,q⟩` at `m = 1`.

use ndarray::{Array1, Array2, ArrayViewMut2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{invalid, Result};
use crate::hilbert::{coupling, dimension, factorial, Operator, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseKind {
    Carrier,
    Blue,
    Red,
}

impl PulseKind {
    pub fn name(self) -> &'static str {
        match self {
            PulseKind::Carrier => "carrier",
            PulseKind::Blue => "blue",
            PulseKind::Red => "red",
        }
    }

    pub fn from_name(name: &str) -> Option<PulseKind> {
        match name {
            "carrier" => Some(PulseKind::Carrier),
            "blue" => Some(PulseKind::Blue),
            "red" => Some(PulseKind::Red),
            _ => None,
        }
    }

    pub fn is_sideband(self) -> bool {
        !matches!(self, PulseKind::Carrier)
    }
}

impl std::fmt::Display for PulseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One laser pulse addressed to a single ion.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    pub ion: usize,
    pub kind: PulseKind,
    /// Sideband order; 0 for the carrier.
    pub order: usize,
    pub theta: Angle,
    pub phi: Angle,
}

impl Pulse {
    pub fn carrier(ion: usize, theta: Angle, phi: Angle) -> Pulse {
        Pulse {
            ion,
            kind: PulseKind::Carrier,
            order: 0,
            theta,
            phi,
        }
    }

    pub fn blue(ion: usize, order: usize, theta: Angle, phi: Angle) -> Pulse {
        Pulse {
            ion,
            kind: PulseKind::Blue,
            order,
            theta,
            phi,
        }
    }

    pub fn red(ion: usize, order: usize, theta: Angle, phi: Angle) -> Pulse {
        Pulse {
            ion,
            kind: PulseKind::Red,
            order,
            theta,
            phi,
        }
    }

    /// Convenience constructor from expression text; panics on a bad expression.
    pub fn parsed(ion: usize, kind: PulseKind, order: usize, theta: &str, phi: &str) -> Pulse {
        Pulse {
            ion,
            kind,
            order,
            theta: Angle::parse(theta).expect("valid theta expression"),
            phi: Angle::parse(phi).expect("valid phi expression"),
        }
    }

    pub fn validate(&self, num_ions: usize) -> Result<()> {
        if self.ion >= num_ions {
            return Err(invalid(format!(
                "pulse addresses ion {} but the register has {num_ions}",
                self.ion
            )));
        }
        match (self.kind, self.order) {
            (PulseKind::Carrier, 0) => Ok(()),
            (PulseKind::Carrier, n) => Err(invalid(format!("carrier pulse with order {n}"))),
            (_, 0) => Err(invalid("sideband pulse with order 0")),
            _ => Ok(()),
        }
    }

    /// Same pulse with the area negated: the adjoint unitary.
    pub fn inverse(&self) -> Pulse {
        Pulse {
            theta: self.theta.negated(),
            ..self.clone()
        }
    }

    /// Highest phonon level this pulse can reach from a state with at most `q` phonons.
    pub fn reach(&self, q: usize) -> usize {
        match self.kind {
            PulseKind::Carrier => q,
            _ => q + self.order,
        }
    }
}

impl std::fmt::Display for Pulse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            PulseKind::Carrier => write!(f, "R_{}({}, {})", self.ion, self.theta, self.phi),
            PulseKind::Blue => write!(f, "R+{}_{}({}, {})", self.order, self.ion, self.theta, self.phi),
            PulseKind::Red => write!(f, "R-{}_{}({}, {})", self.order, self.ion, self.theta, self.phi),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Block {
    x: usize,
    y: usize,
    cos: f64,
    /// `U[x, y]`
    xy: Complex64,
    /// `U[y, x]`
    yx: Complex64,
}

/// Block-sparse form of a pulse unitary.
#[derive(Debug, Clone)]
pub(crate) struct PulseAction {
    pub dim: usize,
    pub blocks: Vec<Block>,
    pub incomplete: Vec<usize>,
}

pub(crate) fn pulse_action(p: &Pulse, num_ions: usize, cutoff: usize) -> Result<PulseAction> {
    p.validate(num_ions)?;
    let levels = cutoff + 1;
    let bit = 1usize << (num_ions - 1 - p.ion);
    let (sin_phi, cos_phi) = p.phi.value().sin_cos();
    let i = Complex64::i();
    let e_plus = Complex64::new(cos_phi, sin_phi);
    let e_minus = e_plus.conj();

    let mut blocks = Vec::new();
    let mut incomplete = Vec::new();
    for word in (0..(1usize << num_ions)).filter(|w| w & bit == 0) {
        let lower = word * levels;
        let upper = (word | bit) * levels;
        for q in 0..=cutoff {
            let (x, y, m) = match p.kind {
                PulseKind::Carrier => (lower + q, upper + q, crate::dd::Dd::ONE),
                PulseKind::Blue | PulseKind::Red if q + p.order > cutoff => {
                    // the state that would be lifted past the cutoff is left alone
                    let stranded = if p.kind == PulseKind::Blue { lower + q } else { upper + q };
                    incomplete.push(stranded);
                    continue;
                }
                PulseKind::Blue => (lower + q, upper + q + p.order, coupling(q, p.order)),
                PulseKind::Red => (lower + q + p.order, upper + q, coupling(q, p.order)),
            };
            let half = m * p.theta.value().scale(0.5);
            let (s, c) = half.sin_cos();
            blocks.push(Block {
                x,
                y,
                cos: c,
                xy: i * e_plus * s,
                yx: i * e_minus * s,
            });
        }
    }
    incomplete.sort_unstable();
    Ok(PulseAction {
        dim: dimension(num_ions, cutoff),
        blocks,
        incomplete,
    })
}

impl PulseAction {
    /// `m ← U·m`
    pub fn apply_left(&self, mut m: ArrayViewMut2<Complex64>) {
        for b in &self.blocks {
            for col in 0..m.ncols() {
                let vx = m[[b.x, col]];
                let vy = m[[b.y, col]];
                m[[b.x, col]] = vx * b.cos + b.xy * vy;
                m[[b.y, col]] = b.yx * vx + vy * b.cos;
            }
        }
    }

    /// `v ← U·v`
    pub fn apply_vec(&self, v: &mut Array1<Complex64>) {
        for b in &self.blocks {
            let vx = v[b.x];
            let vy = v[b.y];
            v[b.x] = vx * b.cos + b.xy * vy;
            v[b.y] = b.yx * vx + vy * b.cos;
        }
    }

    pub fn matrix(&self) -> Array2<Complex64> {
        let mut m = Array2::eye(self.dim);
        for b in &self.blocks {
            m[[b.x, b.x]] = Complex64::new(b.cos, 0.0);
            m[[b.y, b.y]] = Complex64::new(b.cos, 0.0);
            m[[b.x, b.y]] = b.xy;
            m[[b.y, b.x]] = b.yx;
        }
        m
    }
}

/// Exact unitary of a single pulse on `num_ions` spins and a mode truncated at `cutoff`.
pub fn pulse_unitary(p: &Pulse, num_ions: usize, cutoff: usize) -> Result<Operator> {
    let action = pulse_action(p, num_ions, cutoff)?;
    Ok(Operator {
        num_ions,
        cutoff,
        matrix: action.matrix(),
        incomplete_pairs: action.incomplete,
    })
}

/// Laboratory description of a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPulseParams {
    /// Magnetic moment μ, J/T.
    pub mu: f64,
    /// Field amplitude B, T.
    pub field: f64,
    /// Duration t, s.
    pub duration: f64,
    /// Lamb-Dicke parameter η.
    pub eta: f64,
    /// Transition order n.
    pub order: usize,
    /// Laser phase Φ, rad.
    pub laser_phase: f64,
}

fn order_factorial(n: usize) -> Result<f64> {
    u32::try_from(n)
        .ok()
        .and_then(factorial)
        .map(|f| f as f64)
        .ok_or_else(|| invalid(format!("transition order {n} is above 20")))
}

/// Pulse area `θ = −μBtηⁿ/(2ħ·n!)` and phase `φ = Φ + (n mod 4)·π/2`.
pub fn physical_to_pulse(pp: &PhysicalPulseParams, kind: PulseKind, ion: usize) -> Result<Pulse> {
    if pp.duration.is_nan() || pp.duration < 0.0 {
        return Err(invalid("pulse duration must be non-negative"));
    }
    if pp.eta.is_nan() || pp.eta <= 0.0 {
        return Err(invalid("Lamb-Dicke parameter must be positive"));
    }
    match (kind, pp.order) {
        (PulseKind::Carrier, 0) => {}
        (PulseKind::Carrier, _) => return Err(invalid("carrier pulses have order 0")),
        (_, 0) => return Err(invalid("sideband pulses need order >= 1")),
        _ => {}
    }
    let n = pp.order;
    let theta = -pp.mu * pp.field * pp.duration * pp.eta.powi(n as i32) / (2.0 * HBAR * order_factorial(n)?);
    let phi = pp.laser_phase + (n % 4) as f64 * std::f64::consts::FRAC_PI_2;
    Ok(Pulse {
        ion,
        kind,
        order: n,
        theta: Angle::from_radians(theta),
        phi: Angle::from_radians(phi),
    })
}

/// Duration needed for pulse area `θ` on an order-`n` transition: `t = 2ħ·n!·|θ| / (|μB|·ηⁿ)`.
pub fn pulse_duration(theta: f64, order: usize, mu: f64, field: f64, eta: f64) -> Result<f64> {
    let drive = (mu * field).abs();
    if drive == 0.0 || !drive.is_finite() {
        return Err(invalid("drive strength μB must be non-zero"));
    }
    if eta.is_nan() || eta <= 0.0 {
        return Err(invalid("Lamb-Dicke parameter must be positive"));
    }
    Ok(2.0 * HBAR * order_factorial(order)? * theta.abs() / (drive * eta.powi(order as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{apply_operator, RegisterBasisState, StateVector};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn carrier_pi_pulse_flips_with_phase_i() {
        let u = pulse_unitary(&Pulse::parsed(0, PulseKind::Carrier, 0, "pi", "0"), 1, 3).unwrap();
        let s = StateVector::basis(&RegisterBasisState::new(vec![0], 0), 1, 3).unwrap();
        let out = apply_operator(&u, &s).unwrap();
        let a = out.amplitude(&RegisterBasisState::new(vec![1], 0)).unwrap();
        assert!((a - c(0.0, 1.0)).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn red_interchange_moves_spin_into_mode() {
        let u = pulse_unitary(&Pulse::parsed(0, PulseKind::Red, 1, "pi", "-pi/2"), 1, 4).unwrap();
        let s = StateVector::basis(&RegisterBasisState::new(vec![1], 0), 1, 4).unwrap();
        let out = apply_operator(&u, &s).unwrap();
        let a = out.amplitude(&RegisterBasisState::new(vec![0], 1)).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-15);
        // columns of the 3x3 interchange matrix on {|00>,|01>,|10>}
        assert!((u.matrix[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((u.matrix[[5, 1]] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn full_carrier_turn_is_minus_identity() {
        for phi in [0.0, 0.4, -2.0] {
            let p = Pulse::carrier(1, Angle::parse("2*pi").unwrap(), Angle::from_radians(phi));
            let u = pulse_unitary(&p, 2, 3).unwrap();
            for i in 0..u.dim() {
                for j in 0..u.dim() {
                    let want = if i == j { -1.0 } else { 0.0 };
                    assert!((u.matrix[[i, j]] - want).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn truncated_pairs_are_recorded() {
        let blue = pulse_unitary(&Pulse::parsed(0, PulseKind::Blue, 2, "1", "0"), 1, 3).unwrap();
        // |0,2> and |0,3> would need |1,4>, |1,5>
        assert_eq!(blue.incomplete_pairs, vec![2, 3]);
        let red = pulse_unitary(&Pulse::parsed(0, PulseKind::Red, 1, "1", "0"), 1, 3).unwrap();
        // |1,3> would need |0,4>
        assert_eq!(red.incomplete_pairs, vec![7]);
        let carrier = pulse_unitary(&Pulse::parsed(0, PulseKind::Carrier, 0, "1", "0"), 1, 3).unwrap();
        assert!(carrier.incomplete_pairs.is_empty());
    }

    #[test]
    fn invalid_pulses_are_rejected() {
        assert!(pulse_unitary(&Pulse::parsed(2, PulseKind::Carrier, 0, "1", "0"), 2, 3).is_err());
        assert!(pulse_unitary(&Pulse::parsed(0, PulseKind::Carrier, 1, "1", "0"), 1, 3).is_err());
        assert!(pulse_unitary(&Pulse::parsed(0, PulseKind::Red, 0, "1", "0"), 1, 3).is_err());
    }

    #[test]
    fn physical_mapping() {
        let mu = HBAR * 1e6;
        let pp = PhysicalPulseParams {
            mu,
            field: 1.0,
            duration: 1e-5,
            eta: 0.1,
            order: 1,
            laser_phase: 0.0,
        };
        let p = physical_to_pulse(&pp, PulseKind::Blue, 0).unwrap();
        assert!((p.theta.radians() + 0.5).abs() < 1e-12);
        assert!((p.phi.radians() - PI / 2.0).abs() < 1e-15);

        let doubled = physical_to_pulse(&PhysicalPulseParams { duration: 2e-5, ..pp }, PulseKind::Blue, 0).unwrap();
        assert!((doubled.theta.radians() - 2.0 * p.theta.radians()).abs() < 1e-15);

        let carrier = physical_to_pulse(
            &PhysicalPulseParams { order: 0, laser_phase: 0.7, ..pp },
            PulseKind::Carrier,
            0,
        )
        .unwrap();
        assert_eq!(carrier.phi.radians(), 0.7);

        let third = physical_to_pulse(&PhysicalPulseParams { order: 3, laser_phase: 0.2, ..pp }, PulseKind::Red, 0).unwrap();
        assert!((third.phi.radians() - (0.2 + 1.5 * PI)).abs() < 1e-15);
        let fifth = physical_to_pulse(&PhysicalPulseParams { order: 5, laser_phase: 0.2, ..pp }, PulseKind::Red, 0).unwrap();
        assert!((fifth.phi.radians() - (0.2 + 0.5 * PI)).abs() < 1e-15);

        assert!(physical_to_pulse(&PhysicalPulseParams { duration: -1.0, ..pp }, PulseKind::Blue, 0).is_err());
        assert!(physical_to_pulse(&PhysicalPulseParams { eta: 0.0, ..pp }, PulseKind::Blue, 0).is_err());
        assert!(physical_to_pulse(&pp, PulseKind::Carrier, 0).is_err());
    }

    #[test]
    fn duration_inverts_area() {
        let mu = 9.274e-24;
        let field = 1e-4;
        assert_eq!(pulse_duration(0.0, 1, mu, field, 0.1).unwrap(), 0.0);
        assert!(pulse_duration(1.0, 1, 0.0, field, 0.1).is_err());
        for (n, kind) in [(0, PulseKind::Carrier), (1, PulseKind::Red), (3, PulseKind::Blue), (7, PulseKind::Red)] {
            let pp = PhysicalPulseParams {
                mu,
                field,
                duration: 3.3e-6,
                eta: 0.2,
                order: n,
                laser_phase: 0.0,
            };
            let p = physical_to_pulse(&pp, kind, 0).unwrap();
            let t = pulse_duration(p.theta.radians(), n, mu, field, pp.eta).unwrap();
            assert!(((t - pp.duration) / pp.duration).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn third_order_pulses_take_six_over_eta_squared_longer() {
        for eta in [0.1, 0.05, 0.5] {
            let t1 = pulse_duration(PI, 1, 1e-23, 1e-3, eta).unwrap();
            let t3 = pulse_duration(PI, 3, 1e-23, 1e-3, eta).unwrap();
            let ratio = t3 / t1;
            let expect = 6.0 / (eta * eta);
            assert!(((ratio - expect) / expect).abs() < 1e-14);
        }
    }
}
