//! Gate recipes emitted as pulse schedules.
//!
//! Recipes are written in the literature as operator products, read right to
//! left; the emitters here list pulses in temporal order instead. Single-ion
//! spin rotations (`Z(φ) = diag(e^{iφ}, e^{−iφ})` and the Hadamard) are
//! compiled to carrier pulses at emission time, and their position is kept in
//! [`Construction::segments`] for display.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{format_radians, Angle};
use crate::dd::Dd;
use crate::error::{invalid, Result};
use crate::numerics::AngleSolution;
use crate::pulse::Pulse;
use crate::schedule::{Schedule, Segment};
use crate::verify::Target;

pub type Mat2 = [[Complex64; 2]; 2];

/// The two motional levels spanning the computational subspace of each ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CsSpec {
    pub low: usize,
    pub high: usize,
}

impl CsSpec {
    pub const DEFAULT: CsSpec = CsSpec { low: 0, high: 1 };
    pub const ALTERNATE: CsSpec = CsSpec { low: 0, high: 2 };

    pub fn new(low: usize, high: usize) -> Result<CsSpec> {
        if low >= high {
            return Err(invalid(format!("computational subspace needs low < high, got ({low},{high})")));
        }
        Ok(CsSpec { low, high })
    }

    pub fn levels(&self) -> [usize; 2] {
        [self.low, self.high]
    }
}

impl Default for CsSpec {
    fn default() -> Self {
        CsSpec::DEFAULT
    }
}

impl std::fmt::Display for CsSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.low, self.high)
    }
}

/// An emitted schedule with the gate it is meant to realize.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub schedule: Schedule,
    pub segments: Vec<Segment>,
    pub cs: CsSpec,
    pub target: Target,
}

fn angle(text: &str) -> Angle {
    Angle::parse(text).expect("built-in angle expression")
}

struct Builder {
    schedule: Schedule,
    segments: Vec<Segment>,
}

impl Builder {
    fn new(num_ions: usize, label: String) -> Builder {
        Builder {
            schedule: Schedule::new(num_ions, label),
            segments: Vec::new(),
        }
    }

    fn gate(&mut self, name: impl Into<String>, pulses: Vec<Pulse>) -> &mut Self {
        let start = self.schedule.len();
        self.schedule.pulses.extend(pulses);
        self.segments.push(Segment {
            name: name.into(),
            start,
            end: self.schedule.len(),
        });
        self
    }

    fn finish(self, cs: CsSpec, target: Target) -> Construction {
        let mut label = self.schedule.label.clone();
        label.push_str(&format!(" target={} cs={cs}", target.spec()));
        Construction {
            schedule: Schedule { label, ..self.schedule },
            segments: self.segments,
            cs,
            target,
        }
    }
}

fn is_unitary(u: &Mat2, tol: f64) -> bool {
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot - want).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Carrier pulses realizing a single-spin unitary up to global phase.
///
/// The SU(2) part is factored as `R(θ, φ)·D(λ)` with `D(λ) = diag(e^{iλ}, e^{−iλ})`,
/// and `D(λ)` is produced by two π pulses on the equator, `R(π, λ)·R(π, 0) = −D(λ)`.
/// At most three pulses result; rotations that are the identity are omitted.
pub fn single_qubit_schedule(target: &Mat2, ion: usize) -> Result<Vec<Pulse>> {
    if !is_unitary(target, 1e-12) {
        return Err(invalid("single-qubit target is not unitary"));
    }
    let det = target[0][0] * target[1][1] - target[0][1] * target[1][0];
    let unphase = Complex64::from_polar(1.0, -det.arg() / 2.0);
    let a = target[0][0] * unphase;
    let b = target[0][1] * unphase;

    let lambda = if a.norm() > 1e-15 { a.arg() } else { 0.0 };
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = b.arg() - FRAC_PI_2 + lambda;

    let mut pulses = Vec::new();
    // D(λ + π) = −D(λ), so only λ mod π matters
    let mut z = lambda.rem_euclid(PI);
    if z > FRAC_PI_2 {
        z -= PI;
    }
    if z.abs() > 1e-15 {
        pulses.push(Pulse::carrier(ion, angle("pi"), Angle::zero()));
        pulses.push(Pulse::carrier(ion, angle("pi"), Angle::from_radians(z)));
    }
    if theta > 1e-15 {
        pulses.push(Pulse::carrier(ion, Angle::from_radians(theta), Angle::from_radians(phi)));
    }
    Ok(pulses)
}

/// `Z(φ) = diag(e^{iφ}, e^{−iφ})` as two carrier π pulses.
pub fn z_pulses(ion: usize, phi: &Angle) -> Vec<Pulse> {
    if phi.is_zero() {
        return Vec::new();
    }
    vec![
        Pulse::carrier(ion, angle("pi"), Angle::zero()),
        Pulse::carrier(ion, angle("pi"), phi.clone()),
    ]
}

/// Hadamard as three carrier pulses: `R(π/2, π/2)·R(π, π/2)·R(π, 0) ∝ H`.
pub fn hadamard_pulses(ion: usize) -> Vec<Pulse> {
    vec![
        Pulse::carrier(ion, angle("pi"), Angle::zero()),
        Pulse::carrier(ion, angle("pi"), angle("pi/2")),
        Pulse::carrier(ion, angle("pi/2"), angle("pi/2")),
    ]
}

pub fn z_matrix(phi: f64) -> Mat2 {
    let z = Complex64::from_polar(1.0, phi);
    [[z, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), z.conj()]]
}

pub fn hadamard_matrix() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn check_distinct(j: usize, k: usize) -> Result<()> {
    if j == k {
        return Err(invalid(format!("control and target must differ, both are ion {j}")));
    }
    Ok(())
}

fn p_gate_pulses(ion: usize) -> Vec<Pulse> {
    vec![
        Pulse::blue(ion, 1, angle("pi/2"), Angle::zero()),
        Pulse::blue(ion, 1, angle("pi*sqrt(2)"), angle("-pi/2")),
        Pulse::blue(ion, 1, angle("-pi/2"), Angle::zero()),
    ]
}

/// Diagonal CS gate `diag(e^{iπ/√2}, −1, 1, e^{−iπ/√2})` from three first blue sideband pulses.
pub fn p_gate(ion: usize) -> Construction {
    let mut b = Builder::new(ion + 1, "pgate".into());
    b.gate(format!("P_{ion}"), p_gate_pulses(ion));
    b.finish(
        CsSpec::DEFAULT,
        Target::phases(ion, ["pi/sqrt(2)", "pi", "0", "-pi/sqrt(2)"]).expect("valid phases"),
    )
}

/// Textual sum of `|θ|` over a schedule together with its value.
pub fn total_area(s: &Schedule) -> (String, Dd) {
    let mut text = String::new();
    let mut sum = Dd::ZERO;
    for p in &s.pulses {
        let a = if p.theta.value() < Dd::ZERO { p.theta.negated() } else { p.theta.clone() };
        if !text.is_empty() {
            text.push_str(" + ");
        }
        text.push_str(a.text());
        sum = sum + a.value();
    }
    if text.is_empty() {
        text.push('0');
    }
    (text, sum)
}

/// CNOT from ion `j` (control) to ion `k` (target) using first-order sidebands and the P gate.
pub fn cnot_first_sideband(j: usize, k: usize, phi: &Angle) -> Result<Construction> {
    check_distinct(j, k)?;
    let swap = Pulse::red(j, 1, angle("pi"), phi.clone());
    let z = angle("-pi/(2*sqrt(2))");
    let mut b = Builder::new(j.max(k) + 1, format!("cnot-sideband1 phi={phi}"));
    b.gate(format!("R-1_{j}"), vec![swap.clone()])
        .gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("Z_{k}"), z_pulses(k, &z))
        .gate(format!("P_{k}"), p_gate_pulses(k))
        .gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("R-1_{j}"), vec![swap])
        .gate(format!("Z_{j}"), z_pulses(j, &z));
    Ok(b.finish(CsSpec::DEFAULT, Target::Cnot { control: j, target: k }))
}

/// The printed U(φ) pulse form with an explicit middle-pulse area.
pub(crate) fn u_phi_form(ion: usize, sol: &AngleSolution, middle_area: Angle) -> Vec<Pulse> {
    let a = Angle::from_radians(sol.alpha);
    let b = Angle::from_radians(sol.beta);
    let g = Angle::from_radians(sol.gamma);
    let d = Angle::from_radians(sol.delta);
    vec![
        Pulse::blue(ion, 1, a.clone(), angle("pi/2")),
        Pulse::blue(ion, 1, b.clone(), g.clone()),
        Pulse::blue(ion, 1, middle_area, d),
        Pulse::blue(ion, 1, b.negated(), g),
        Pulse::blue(ion, 1, a.negated(), angle("pi/2")),
    ]
}

/// One-parameter family of diagonal CS gates `diag(e^{iφ}, e^{±i√2φ}, 1, e^{−iφ})`.
///
/// The middle pulse area is `2φ` scaled by the orientation recorded in the
/// solution, so that the first diagonal entry is `e^{+iφ}`; the sign of the
/// `√2` entry is reported in the label.
pub fn u_phi(ion: usize, phi: &Angle, sol: &AngleSolution) -> Result<Construction> {
    if !sol.is_valid() {
        return Err(invalid("angle solution does not satisfy the constraint system"));
    }
    let doubled = Angle::parse(&format!("2*({})", phi.text()))?;
    let middle = if sol.orientation < 0 { doubled.negated() } else { doubled };
    let branch = sol.sign_branch;
    let mut b = Builder::new(ion + 1, format!("uphi phi={phi} branch={branch:+}"));
    b.gate(format!("U_{ion}"), u_phi_form(ion, sol, middle));
    let p = phi.text();
    let sq = if branch > 0 { format!("sqrt(2)*({p})") } else { format!("-sqrt(2)*({p})") };
    let target = Target::phases(ion, [&format!("({p})"), sq.as_str(), "0", &format!("-({p})")])?;
    Ok(b.finish(CsSpec::DEFAULT, target))
}

/// `R⁻₃(2π/√6, φ′) = diag(1, 1, −1, 1)` on the default CS.
pub fn third_sideband_cz(ion: usize, phi2: &Angle) -> Construction {
    let mut b = Builder::new(ion + 1, format!("cz-sideband3 phi2={phi2}"));
    b.gate(format!("R-3_{ion}"), vec![Pulse::red(ion, 3, angle("2*pi/sqrt(6)"), phi2.clone())]);
    b.finish(CsSpec::DEFAULT, Target::diagonal(ion, [1.0, 1.0, -1.0, 1.0]))
}

/// CNOT using one third-order red sideband pulse on the target.
pub fn cnot_third_sideband(j: usize, k: usize, phi: &Angle, phi2: &Angle) -> Result<Construction> {
    check_distinct(j, k)?;
    let swap = Pulse::red(j, 1, angle("pi"), phi.clone());
    let mut b = Builder::new(j.max(k) + 1, format!("cnot-sideband3 phi={phi} phi2={phi2}"));
    b.gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("R-1_{j}"), vec![swap.clone()])
        .gate(format!("Z_{k}"), z_pulses(k, &angle("-pi/2")))
        .gate(format!("R-3_{k}"), vec![Pulse::red(k, 3, angle("2*pi/sqrt(6)"), phi2.clone())])
        .gate(format!("R-1_{j}"), vec![swap])
        .gate(format!("Z_{j}"), z_pulses(j, &angle("pi/2")))
        .gate(format!("H_{k}"), hadamard_pulses(k));
    Ok(b.finish(CsSpec::DEFAULT, Target::Cnot { control: j, target: k }))
}

/// CNOT on the alternate computational subspace spanned by motional levels 0 and 2.
pub fn cnot_alt_cs(j: usize, k: usize, phi: &Angle) -> Result<Construction> {
    check_distinct(j, k)?;
    let swap = Pulse::red(j, 2, angle("pi/sqrt(2)"), phi.clone());
    let z = angle("-pi/(2*sqrt(6))");
    let mut b = Builder::new(j.max(k) + 1, format!("cnot-altcs2 phi={phi}"));
    b.gate(format!("R-2_{j}"), vec![swap.clone()])
        .gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("Z_{k}"), z_pulses(k, &z))
        .gate(
            format!("P2_{k}"),
            vec![
                Pulse::blue(k, 2, angle("pi/(2*sqrt(2))"), Angle::zero()),
                Pulse::blue(k, 2, angle("pi/sqrt(3)"), angle("-pi/2")),
                Pulse::blue(k, 2, angle("-pi/(2*sqrt(2))"), Angle::zero()),
            ],
        )
        .gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("R-2_{j}"), vec![swap])
        .gate(format!("Z_{j}"), z_pulses(j, &z));
    Ok(b.finish(CsSpec::ALTERNATE, Target::Cnot { control: j, target: k }))
}

/// CNOT on the alternate CS using a seventh-order red sideband; needs cutoff ≥ 9.
pub fn cnot_alt_cs_seventh(j: usize, k: usize, phi: &Angle, phi2: &Angle) -> Result<Construction> {
    check_distinct(j, k)?;
    let swap = Pulse::red(j, 2, angle("pi/sqrt(2)"), phi.clone());
    let mut b = Builder::new(j.max(k) + 1, format!("cnot-altcs7 phi={phi} phi2={phi2}"));
    b.gate(format!("H_{k}"), hadamard_pulses(k))
        .gate(format!("R-2_{j}"), vec![swap.clone()])
        .gate(format!("Z_{k}"), z_pulses(k, &angle("-pi/2")))
        .gate(format!("R-7_{k}"), vec![Pulse::red(k, 7, angle("pi/(6*sqrt(35))"), phi2.clone())])
        .gate(format!("R-2_{j}"), vec![swap])
        .gate(format!("Z_{j}"), z_pulses(j, &angle("pi/2")))
        .gate(format!("H_{k}"), hadamard_pulses(k));
    Ok(b.finish(CsSpec::ALTERNATE, Target::Cnot { control: j, target: k }))
}

/// Single red sideband pulse `R⁻₁(2lπ√2, −π/2)`, close to a spin–motion swap
/// when `cos(lπ√2) ≈ 0`.
pub fn approx_swap(ion: usize, l: u64) -> Result<Construction> {
    if l == 0 {
        return Err(invalid("swap integer l must be at least 1"));
    }
    let mut b = Builder::new(ion + 1, format!("swap l={l}"));
    b.gate(
        format!("R-1_{ion}"),
        vec![Pulse::red(ion, 1, angle(&format!("2*{l}*pi*sqrt(2)")), angle("-pi/2"))],
    );
    Ok(b.finish(CsSpec::DEFAULT, Target::Swap { ion, l }))
}

/// Formats a construction as one line per gate segment.
pub fn describe(c: &Construction) -> String {
    let mut out = format!("# {}\n", c.schedule.label);
    for seg in &c.segments {
        let pulses: Vec<String> = c.schedule.pulses[seg.start..seg.end].iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("{:<8} {}\n", seg.name, pulses.join("  ")));
    }
    out
}

/// Convenience for tests and the CLI: angle from a float with a readable text form.
pub fn radians(x: f64) -> Angle {
    if x == 0.0 {
        Angle::zero()
    } else {
        Angle::parse(&format_radians(x)).expect("formatted number parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{schedule_unitary, Schedule};
    use crate::verify::distance_up_to_global_phase;
    use ndarray::Array2;

    fn carrier_product(pulses: Vec<Pulse>) -> Array2<Complex64> {
        // single ion, cutoff 0: the carrier acts on the spin alone
        let s = Schedule::with_pulses(1, "sq", pulses).unwrap();
        schedule_unitary(&s, 0).unwrap().matrix
    }

    fn to_array(m: &Mat2) -> Array2<Complex64> {
        Array2::from_shape_fn((2, 2), |(i, j)| m[i][j])
    }

    #[test]
    fn identity_compiles_to_nothing() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(single_qubit_schedule(&[[one, zero], [zero, one]], 0).unwrap().is_empty());
        let ph = Complex64::from_polar(1.0, 0.3);
        assert!(single_qubit_schedule(&[[ph, zero], [zero, ph]], 0).unwrap().is_empty());
    }

    #[test]
    fn single_qubit_targets_match_up_to_phase() {
        let cases = [
            z_matrix(PI / 4.0),
            hadamard_matrix(),
            z_matrix(-PI / (2.0 * 2f64.sqrt())),
            z_matrix(2.0),
            [
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ],
            [
                [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
                [Complex64::new(0.0, 0.8), Complex64::new(0.6, 0.0)],
            ],
        ];
        for m in cases {
            let pulses = single_qubit_schedule(&m, 0).unwrap();
            assert!(pulses.len() <= 3);
            assert!(pulses.iter().all(|p| p.kind == crate::pulse::PulseKind::Carrier));
            let d = distance_up_to_global_phase(&carrier_product(pulses), &to_array(&m)).unwrap();
            assert!(d < 1e-10, "{d}");
        }
    }

    #[test]
    fn non_unitary_target_is_rejected() {
        let one = Complex64::new(1.0, 0.0);
        assert!(single_qubit_schedule(&[[one, one], [one, one]], 0).is_err());
    }

    #[test]
    fn exact_forms_agree_with_compiler() {
        let d = distance_up_to_global_phase(&carrier_product(hadamard_pulses(0)), &to_array(&hadamard_matrix())).unwrap();
        assert!(d < 1e-14);
        for phi in ["pi/2", "-pi/2", "-pi/(2*sqrt(2))", "-pi/(2*sqrt(6))"] {
            let a = angle(phi);
            let d = distance_up_to_global_phase(&carrier_product(z_pulses(0, &a)), &to_array(&z_matrix(a.radians()))).unwrap();
            assert!(d < 1e-14, "{phi}");
        }
    }

    #[test]
    fn same_ion_cnot_is_rejected() {
        let phi = Angle::zero();
        assert!(cnot_first_sideband(1, 1, &phi).is_err());
        assert!(cnot_third_sideband(0, 0, &phi, &phi).is_err());
        assert!(cnot_alt_cs(0, 0, &phi).is_err());
        assert!(cnot_alt_cs_seventh(0, 0, &phi, &phi).is_err());
        assert!(approx_swap(0, 0).is_err());
    }

    #[test]
    fn pulse_counts() {
        let phi = Angle::zero();
        let c1 = cnot_first_sideband(0, 1, &phi).unwrap();
        // two red swaps plus the three-pulse P gate
        assert_eq!(c1.schedule.sideband_count(), 5);
        assert_eq!(c1.schedule.len(), 15);
        let c3 = cnot_third_sideband(0, 1, &phi, &phi).unwrap();
        assert_eq!(c3.schedule.sideband_count(), 3);
        assert!(c3.schedule.sideband_count() < c1.schedule.sideband_count());
        assert_eq!(p_gate(0).schedule.len(), 3);
    }

    #[test]
    fn p_gate_area_is_one_plus_root_two_pi() {
        let (text, sum) = total_area(&p_gate(0).schedule);
        assert_eq!(text, "pi/2 + pi*sqrt(2) + pi/2");
        let expect = (Dd::ONE + Dd::SQRT_2) * Dd::PI;
        assert!((sum - expect).to_f64().abs() < 1e-30);
    }

    #[test]
    fn labels_carry_target_and_cs() {
        let c = cnot_alt_cs(0, 1, &angle("0.7")).unwrap();
        assert!(c.schedule.label.contains("target=cnot:0,1"));
        assert!(c.schedule.label.contains("cs=0,2"));
        let text = describe(&c);
        assert!(text.contains("P2_1"));
    }
}
