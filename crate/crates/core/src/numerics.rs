//! Angle equations for the diagonal U(φ) family and the search for swap integers.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::Serialize;

use crate::constructions::u_phi_form;
use crate::dd::Dd;
use crate::error::{invalid, Result};
use crate::schedule::{checked_schedule_unitary, Schedule};
use crate::verify::{off_diagonal_mass, subspace_indices, subspace_matrix};

pub const ROOT_SCAN_STEP: f64 = PI / 64.0;
pub const BISECTION_WIDTH: f64 = 1e-13;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Exhaustive sweeps for swap integers stop here; above it only convergents are used.
pub const SWEEP_LIMIT: u64 = 100_000;

/// Bracketing bisection for a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn angle_difference(x: f64) -> f64 {
    x.cos() - (SQRT_2 * x).cos()
}

/// All roots of `cos x = cos √2x` in `(0, limit]`, ascending.
pub fn angle_roots(limit: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    if limit.is_nan() || limit <= 0.0 {
        return roots;
    }
    let steps = (limit / ROOT_SCAN_STEP).ceil() as usize;
    let mut prev_x = 0.0;
    // x = 0 is a root itself; start just past it
    let mut prev_f = angle_difference(ROOT_SCAN_STEP * 1e-6);
    for k in 1..=steps {
        let x = (k as f64 * ROOT_SCAN_STEP).min(limit);
        let fx = angle_difference(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (fx < 0.0) != (prev_f < 0.0) {
            roots.push(bisect(angle_difference, prev_x, x, BISECTION_WIDTH));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

/// Which value of the arcsine was used for `δ − γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcsinBranch {
    Principal,
    Supplement,
}

/// Angles (α, β, γ, δ) of the U(φ) family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleSolution {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `|cos α − cos √2α|`, `|cos β − cos √2β|`, sign condition (0 or 1),
    /// `|sin(δ−γ) − cos α / sin β|`, `|tan γ + cos β·tan(δ−γ)|`.
    pub residuals: [f64; 5],
    pub arcsin_branch: ArcsinBranch,
    /// Sign `s` such that the printed pulse form with middle area `2φ` gives
    /// first diagonal entry `e^{isφ}`.
    pub orientation: i8,
    /// Sign of the `√2` entry of the emitted family, `e^{±i√2φ}`.
    pub sign_branch: i8,
}

impl AngleSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_valid(&self) -> bool {
        self.max_residual() < RESIDUAL_TOLERANCE && (self.orientation == 1 || self.orientation == -1)
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn angle_residuals(alpha: f64, beta: f64, gamma: f64, delta: f64) -> [f64; 5] {
    let sign_ok = sign(alpha.sin()) * sign(beta.sin()) == sign((SQRT_2 * alpha).sin()) * sign((SQRT_2 * beta).sin());
    let x = delta - gamma;
    [
        angle_difference(alpha).abs(),
        angle_difference(beta).abs(),
        if sign_ok { 0.0 } else { 1.0 },
        (x.sin() - alpha.cos() / beta.sin()).abs(),
        (gamma.tan() + beta.cos() * x.tan()).abs(),
    ]
}

const PROBE_PHI: f64 = 1.0;

/// Simulates the printed pulse form at φ = 1 and reads off the orientation
/// and √2 branch, or `None` if the result is not a diagonal CS gate.
fn realized_branch(sol: &AngleSolution) -> Result<Option<(i8, i8)>> {
    let pulses = u_phi_form(0, sol, crate::angle::Angle::from_radians(2.0 * PROBE_PHI));
    let s = Schedule::with_pulses(1, "probe", pulses)?;
    let cutoff = 4;
    let inputs = subspace_indices(1, cutoff, &[0, 1])?;
    let op = checked_schedule_unitary(&s, cutoff, &inputs)?;
    let (m, leak) = subspace_matrix(&op, &[0, 1])?;
    if leak > 1e-12 || off_diagonal_mass(&m) > 1e-9 {
        return Ok(None);
    }
    let near = |z: num_complex::Complex64, angle: f64| (z - num_complex::Complex64::from_polar(1.0, angle)).norm() < 1e-9;
    let orientation = if near(m[[0, 0]], PROBE_PHI) && near(m[[3, 3]], -PROBE_PHI) {
        1
    } else if near(m[[0, 0]], -PROBE_PHI) && near(m[[3, 3]], PROBE_PHI) {
        -1
    } else {
        return Ok(None);
    };
    if !near(m[[2, 2]], 0.0) {
        return Ok(None);
    }
    // middle entry relative to the emitted parameter φ' = orientation·φ
    let root = SQRT_2 * PROBE_PHI;
    let branch = if near(m[[1, 1]], root * orientation as f64) {
        1
    } else if near(m[[1, 1]], -root * orientation as f64) {
        -1
    } else {
        return Ok(None);
    };
    Ok(Some((orientation, branch)))
}

/// Solves the constraint system for the U(φ) family.
///
/// Root pairs are tried with β ascending and then α ascending over the roots
/// in (0, 4π]; for each the principal arcsine is tried before its supplement,
/// and a candidate is accepted once the simulated gate is diagonal.
pub fn solve_u_phi_angles() -> Result<AngleSolution> {
    let roots = angle_roots(4.0 * PI);
    for &beta in &roots {
        for &alpha in &roots {
            let residual_sign =
                sign(alpha.sin()) * sign(beta.sin()) == sign((SQRT_2 * alpha).sin()) * sign((SQRT_2 * beta).sin());
            if !residual_sign {
                continue;
            }
            let ratio = alpha.cos() / beta.sin();
            if ratio.is_nan() || ratio.abs() > 1.0 {
                continue;
            }
            let principal = ratio.asin();
            for (branch, x) in [
                (ArcsinBranch::Principal, principal),
                (ArcsinBranch::Supplement, PI - principal),
            ] {
                let gamma = (-beta.cos() * x.tan()).atan();
                let delta = gamma + x;
                let mut sol = AngleSolution {
                    alpha,
                    beta,
                    gamma,
                    delta,
                    residuals: angle_residuals(alpha, beta, gamma, delta),
                    arcsin_branch: branch,
                    orientation: 0,
                    sign_branch: 0,
                };
                if sol.max_residual() >= RESIDUAL_TOLERANCE {
                    continue;
                }
                if let Some((orientation, sign_branch)) = realized_branch(&sol)? {
                    sol.orientation = orientation;
                    sol.sign_branch = sign_branch;
                    return Ok(sol);
                }
            }
        }
    }
    Err(invalid("no solution of the angle system found in (0, 4π]"))
}

/// How a swap candidate was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSource {
    /// `l = q` for a convergent `p/q` of √2.
    Denominator,
    /// `l = q/2` for a convergent with even `q`.
    HalfDenominator,
    /// Record minimum of an exhaustive sweep.
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalApprox {
    pub l: u64,
    /// `|cos(lπ√2)|`
    pub value: f64,
    pub convergent: Option<(u64, u64)>,
    pub source: CandidateSource,
}

/// Convergents `p/q` of √2 = [1; 2, 2, 2, …] with `q ≤ max_q`.
pub fn sqrt2_convergents(max_q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0) = (1u64, 0u64);
    let (mut p1, mut q1) = (1u64, 1u64);
    while q1 <= max_q {
        out.push((p1, q1));
        let (Some(p2), Some(q2)) = (p1.checked_mul(2).and_then(|v| v.checked_add(p0)), q1.checked_mul(2).and_then(|v| v.checked_add(q0))) else {
            break;
        };
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// `|cos(lπ√2)|`, with `l√2` reduced modulo 1 in double-double precision.
pub fn swap_cosine(l: u64) -> f64 {
    let x = Dd::from_u128(l as u128) * Dd::SQRT_2;
    let frac = x - x.round();
    (PI * frac.to_f64()).cos().abs()
}

/// Candidate integers `l` for which `R⁻₁(2lπ√2, −π/2)` is close to a swap,
/// sorted by ascending `|cos(lπ√2)|`.
pub fn find_swap_l(max_l: u64) -> Result<Vec<RationalApprox>> {
    if max_l == 0 {
        return Err(invalid("max_l must be at least 1"));
    }
    let mut out: Vec<RationalApprox> = Vec::new();
    for (p, q) in sqrt2_convergents(max_l) {
        out.push(RationalApprox {
            l: q,
            value: swap_cosine(q),
            convergent: Some((p, q)),
            source: CandidateSource::Denominator,
        });
        if q % 2 == 0 && !out.iter().any(|c| c.l == q / 2) {
            out.push(RationalApprox {
                l: q / 2,
                value: swap_cosine(q / 2),
                convergent: Some((p, q)),
                source: CandidateSource::HalfDenominator,
            });
        }
    }
    if max_l <= SWEEP_LIMIT {
        let mut best = f64::INFINITY;
        for l in 1..=max_l {
            let v = swap_cosine(l);
            if v < best {
                best = v;
                if !out.iter().any(|c| c.l == l) {
                    out.push(RationalApprox {
                        l,
                        value: v,
                        convergent: None,
                        source: CandidateSource::Sweep,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.l.cmp(&b.l)));
    Ok(out)
}

/// Degrees, for reporting.
pub fn degrees(rad: f64) -> f64 {
    rad * 90.0 / FRAC_PI_2
}
