//! Subspace restriction, phase-aligned distances, truth tables and
//! truncation scans.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::angle::Angle;
use crate::constructions::CsSpec;
use crate::error::{invalid, Error, Result};
use crate::hilbert::{basis_state, max_entry_deviation, Operator};
use crate::schedule::{checked_schedule_unitary, Schedule};

/// Magnitude a truth-table entry must reach to count as a permutation entry.
pub const PERMUTATION_THRESHOLD: f64 = 1.0 - 1e-9;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-10;

/// Indices of `spins ⊗ levels`, spin-major, in the order used by [`subspace_matrix`].
pub fn subspace_indices(num_ions: usize, cutoff: usize, levels: &[usize]) -> Result<Vec<usize>> {
    for (i, &l) in levels.iter().enumerate() {
        if l > cutoff {
            return Err(invalid(format!("motional level {l} exceeds cutoff {cutoff}")));
        }
        if levels[..i].contains(&l) {
            return Err(invalid(format!("motional level {l} listed twice")));
        }
    }
    Ok((0..(1usize << num_ions))
        .flat_map(|word| levels.iter().map(move |&l| word * (cutoff + 1) + l))
        .collect())
}

/// Restriction `P·U·P` to spins ⊗ `levels`, and the leakage
/// `max_j ‖(I − P)·U·e_j‖` over subspace columns `j`.
pub fn subspace_matrix(op: &Operator, levels: &[usize]) -> Result<(Array2<Complex64>, f64)> {
    let idx = subspace_indices(op.num_ions, op.cutoff, levels)?;
    let restricted = Array2::from_shape_fn((idx.len(), idx.len()), |(r, c)| op.matrix[[idx[r], idx[c]]]);
    let mut inside = vec![false; op.dim()];
    for &i in &idx {
        inside[i] = true;
    }
    let leakage = idx
        .iter()
        .map(|&c| {
            op.matrix
                .column(c)
                .iter()
                .enumerate()
                .filter(|(r, _)| !inside[*r])
                .map(|(_, z)| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok((restricted, leakage))
}

/// `min_χ ‖A − e^{iχ}B‖_F`, attained at `χ = arg tr(B†A)`.
pub fn distance_up_to_global_phase(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            actual: a.len(),
        });
    }
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Largest off-diagonal magnitude (Frobenius) of a square matrix.
pub fn off_diagonal_mass(m: &Array2<Complex64>) -> f64 {
    m.indexed_iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, z)| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthEntry {
    pub input: usize,
    pub output: usize,
    /// `[re, im]`
    pub phase: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TruthTable {
    Permutation(Vec<TruthEntry>),
    NotPermutation,
}

impl TruthTable {
    /// True if this is the permutation `perm` with one phase common to all entries.
    pub fn matches_up_to_common_phase(&self, perm: &[usize], tol: f64) -> bool {
        let TruthTable::Permutation(entries) = self else {
            return false;
        };
        if entries.len() != perm.len() {
            return false;
        }
        let p0 = Complex64::new(entries[0].phase[0], entries[0].phase[1]);
        entries.iter().all(|e| {
            let p = Complex64::new(e.phase[0], e.phase[1]);
            e.output == perm[e.input] && (p - p0).norm() < tol
        })
    }
}

/// Permutation-with-phases action of a matrix on basis states.
pub fn truth_table(m: &Array2<Complex64>) -> TruthTable {
    if !m.is_square() {
        return TruthTable::NotPermutation;
    }
    let mut seen = vec![false; m.nrows()];
    let mut entries = Vec::with_capacity(m.ncols());
    for (input, col) in m.columns().into_iter().enumerate() {
        let big: Vec<usize> = (0..col.len()).filter(|&r| col[r].norm() >= PERMUTATION_THRESHOLD).collect();
        let [output] = big.as_slice() else {
            return TruthTable::NotPermutation;
        };
        if std::mem::replace(&mut seen[*output], true) {
            return TruthTable::NotPermutation;
        }
        let z = col[*output];
        entries.push(TruthEntry {
            input,
            output: *output,
            phase: [z.re, z.im],
        });
    }
    TruthTable::Permutation(entries)
}

/// Spin permutation of CNOT(control, target) on `num_ions` spins, ion 0 most significant.
pub fn cnot_permutation(num_ions: usize, control: usize, target: usize) -> Vec<usize> {
    let cbit = 1usize << (num_ions - 1 - control);
    let tbit = 1usize << (num_ions - 1 - target);
    (0..(1usize << num_ions))
        .map(|w| if w & cbit != 0 { w ^ tbit } else { w })
        .collect()
}

/// The gate a schedule is meant to realize.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// Spin-level CNOT with the mode at `cs.low` on input and output.
    Cnot { control: usize, target: usize },
    /// `diag(e^{iθ₁}, …, e^{iθ₄})` on one ion's CS, ordered |low,0⟩… as |s q⟩ = |0 low⟩, |0 high⟩, |1 low⟩, |1 high⟩.
    Phases { ion: usize, phases: [Angle; 4] },
    /// Real diagonal on one ion's CS.
    Diagonal { ion: usize, entries: [f64; 4] },
    /// The ideal matrix of `R⁻₁(2lπ√2, −π/2)` on one ion's CS.
    Swap { ion: usize, l: u64 },
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

impl Target {
    pub fn phases(ion: usize, phases: [&str; 4]) -> Result<Target> {
        let mut out = Vec::with_capacity(4);
        for p in phases {
            out.push(Angle::parse(&strip_ws(p))?);
        }
        Ok(Target::Phases {
            ion,
            phases: out.try_into().expect("four phases"),
        })
    }

    pub fn diagonal(ion: usize, entries: [f64; 4]) -> Target {
        Target::Diagonal { ion, entries }
    }

    /// Compact textual form, parseable by [`Target::parse`].
    pub fn spec(&self) -> String {
        match self {
            Target::Cnot { control, target } => format!("cnot:{control},{target}"),
            Target::Phases { ion, phases } => {
                let p: Vec<String> = phases.iter().map(|a| strip_ws(a.text())).collect();
                format!("phases:{ion}:{}", p.join(","))
            }
            Target::Diagonal { ion, entries } => {
                let e: Vec<String> = entries.iter().map(|v| crate::angle::format_radians(*v)).collect();
                format!("diag:{ion}:{}", e.join(","))
            }
            Target::Swap { ion, l } => format!("swap:{ion}:{l}"),
        }
    }

    pub fn parse(text: &str) -> Result<Target> {
        let text = strip_ws(text);
        let bad = |why: &str| invalid(format!("target '{text}': {why}"));
        let (kind, rest) = text.split_once(':').ok_or_else(|| bad("expected kind:arguments"))?;
        let uint = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an ion index"));
        match kind {
            "cnot" => {
                let (c, t) = rest.split_once(',').ok_or_else(|| bad("expected control,target"))?;
                let (control, target) = (uint(c)?, uint(t)?);
                if control == target {
                    return Err(bad("control and target must differ"));
                }
                Ok(Target::Cnot { control, target })
            }
            "phases" | "diag" | "swap" => {
                let (ion, args) = rest.split_once(':').ok_or_else(|| bad("expected ion:arguments"))?;
                let ion = uint(ion)?;
                if kind == "swap" {
                    let l = args.parse::<u64>().map_err(|_| bad("expected an integer l"))?;
                    return Ok(Target::Swap { ion, l });
                }
                let parts: Vec<&str> = args.split(',').collect();
                let [a, b, c, d] = parts.as_slice() else {
                    return Err(bad("expected four entries"));
                };
                if kind == "phases" {
                    Target::phases(ion, [a, b, c, d])
                } else {
                    let mut e = [0.0; 4];
                    for (slot, s) in e.iter_mut().zip([a, b, c, d]) {
                        *slot = crate::angle::parse_angle_expression(s)?;
                    }
                    Ok(Target::Diagonal { ion, entries: e })
                }
            }
            _ => Err(bad("unknown kind (expected cnot, phases, diag or swap)")),
        }
    }

    /// Motional levels the target is defined on.
    pub fn levels(&self, cs: CsSpec) -> Vec<usize> {
        match self {
            Target::Cnot { .. } => vec![cs.low],
            _ => cs.levels().to_vec(),
        }
    }

    fn ions(&self) -> usize {
        match self {
            Target::Cnot { control, target } => control.max(target) + 1,
            Target::Phases { ion, .. } | Target::Diagonal { ion, .. } | Target::Swap { ion, .. } => ion + 1,
        }
    }

    /// 4×4 single-ion block over `|s q⟩ ∈ {|0 low⟩, |0 high⟩, |1 low⟩, |1 high⟩}`.
    fn local_block(&self) -> Option<(usize, Array2<Complex64>)> {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            Target::Cnot { .. } => None,
            Target::Phases { ion, phases } => {
                let mut m = Array2::zeros((4, 4));
                for (i, p) in phases.iter().enumerate() {
                    let (s, co) = p.value().sin_cos();
                    m[[i, i]] = Complex64::new(co, s);
                }
                Some((*ion, m))
            }
            Target::Diagonal { ion, entries } => {
                let mut m = Array2::zeros((4, 4));
                for (i, e) in entries.iter().enumerate() {
                    m[[i, i]] = c(*e);
                }
                Some((*ion, m))
            }
            Target::Swap { ion, l } => {
                let x = crate::dd::Dd::from_f64(*l as f64) * crate::dd::Dd::PI * crate::dd::Dd::SQRT_2;
                let (s, co) = x.sin_cos();
                let mut m = Array2::zeros((4, 4));
                m[[0, 0]] = c(1.0);
                m[[1, 1]] = c(co);
                m[[1, 2]] = c(s);
                m[[2, 1]] = c(-s);
                m[[2, 2]] = c(co);
                m[[3, 3]] = c(1.0);
                Some((*ion, m))
            }
        }
    }

    /// Ideal matrix over `spins ⊗ levels(cs)` for a register of `num_ions`.
    pub fn matrix(&self, num_ions: usize) -> Result<Array2<Complex64>> {
        if self.ions() > num_ions {
            return Err(invalid(format!(
                "target {} needs {} ions, schedule has {num_ions}",
                self.spec(),
                self.ions()
            )));
        }
        let words = 1usize << num_ions;
        match (self, self.local_block()) {
            (Target::Cnot { control, target }, _) => {
                let perm = cnot_permutation(num_ions, *control, *target);
                let mut m = Array2::zeros((words, words));
                for (w, &out) in perm.iter().enumerate() {
                    m[[out, w]] = Complex64::new(1.0, 0.0);
                }
                Ok(m)
            }
            (_, Some((ion, block))) => {
                let bit = 1usize << (num_ions - 1 - ion);
                let n = words * 2;
                Ok(Array2::from_shape_fn((n, n), |(r, c)| {
                    let (wr, lr) = (r / 2, r % 2);
                    let (wc, lc) = (c / 2, c % 2);
                    if wr & !bit != wc & !bit {
                        return Complex64::new(0.0, 0.0);
                    }
                    let sr = usize::from(wr & bit != 0);
                    let sc = usize::from(wc & bit != 0);
                    block[[sr * 2 + lr, sc * 2 + lc]]
                }))
            }
            _ => unreachable!("local targets have a block"),
        }
    }
}

/// Outcome of checking a schedule against a target.
#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub label: String,
    pub cs: CsSpec,
    pub levels: Vec<usize>,
    /// Restricted matrix as `[re, im]` pairs, row-major.
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub leakage: f64,
    pub target: String,
    pub distance: f64,
    pub tolerance: f64,
    pub leak_tolerance: f64,
    pub pass: bool,
    pub cutoff: usize,
    pub truth_table: Option<Vec<TruthEntry>>,
}

pub(crate) fn to_pairs(m: &Array2<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.rows().into_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Restricts the schedule's unitary to the target's subspace and compares.
///
/// The unitary is built in strict mode with the subspace states as inputs,
/// so a cutoff too small for the schedule is an error, not a silent mismatch.
pub fn verify_schedule(
    s: &Schedule,
    target: &Target,
    cs: CsSpec,
    cutoff: usize,
    tol: f64,
    leak_tol: f64,
) -> Result<GateReport> {
    let levels = target.levels(cs);
    let inputs = subspace_indices(s.num_ions, cutoff, &levels)?;
    let op = checked_schedule_unitary(s, cutoff, &inputs)?;
    let (m, leakage) = subspace_matrix(&op, &levels)?;
    let ideal = target.matrix(s.num_ions)?;
    let distance = distance_up_to_global_phase(&m, &ideal)?;
    let truth = match (target, truth_table(&m)) {
        (Target::Cnot { .. }, TruthTable::Permutation(e)) => Some(e),
        _ => None,
    };
    Ok(GateReport {
        label: s.label.clone(),
        cs,
        levels,
        matrix: to_pairs(&m),
        leakage,
        target: target.spec(),
        distance,
        tolerance: tol,
        leak_tolerance: leak_tol,
        pass: distance < tol && leakage < leak_tol,
        cutoff,
        truth_table: truth,
    })
}

/// Reads `target=` and `cs=` tokens from an emitted schedule label.
pub fn target_from_label(label: &str) -> Option<(Target, Option<CsSpec>)> {
    let mut target = None;
    let mut cs = None;
    for tok in label.split_whitespace() {
        if let Some(t) = tok.strip_prefix("target=") {
            target = Target::parse(t).ok();
        } else if let Some(c) = tok.strip_prefix("cs=") {
            cs = parse_cs(c).ok();
        }
    }
    target.map(|t| (t, cs))
}

/// Parses `"low,high"`, optionally prefixed by `cs:`.
pub fn parse_cs(text: &str) -> Result<CsSpec> {
    let t = text.trim();
    let t = t.strip_prefix("cs:").unwrap_or(t);
    let (a, b) = t
        .split_once(',')
        .ok_or_else(|| invalid(format!("computational subspace '{text}': expected low,high")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("computational subspace '{text}': bad level '{s}'")))
    };
    CsSpec::new(parse(a)?, parse(b)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub cutoff: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub leakage: f64,
    /// Largest entrywise deviation from the matrix at the largest cutoff.
    pub deviation_from_last: f64,
    /// Set when the cutoff is too small for the schedule (non-strict scans only).
    pub truncation_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub label: String,
    pub levels: Vec<usize>,
    pub entries: Vec<ScanEntry>,
    /// Largest entrywise deviation between any two viable cutoffs.
    pub max_pairwise_deviation: f64,
    /// Smallest cutoff from which every larger scanned cutoff agrees to 1e-12.
    pub minimal_stable_cutoff: Option<usize>,
}

pub const SCAN_AGREEMENT: f64 = 1e-12;

/// Restricted matrix of a schedule at each cutoff.
///
/// In strict mode a cutoff too small for the schedule aborts the scan with
/// the truncation-leak error; otherwise the failure is recorded in the entry.
pub fn truncation_scan(s: &Schedule, cutoffs: &[usize], levels: &[usize], strict: bool) -> Result<ScanReport> {
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("cutoffs must be strictly ascending"));
    }
    let mut mats: BTreeMap<usize, (Array2<Complex64>, f64)> = BTreeMap::new();
    let mut errors: BTreeMap<usize, String> = BTreeMap::new();
    for &q in cutoffs {
        let inputs = subspace_indices(s.num_ions, q, levels)?;
        match checked_schedule_unitary(s, q, &inputs) {
            Ok(op) => {
                mats.insert(q, subspace_matrix(&op, levels)?);
            }
            Err(e @ Error::TruncationLeak { .. }) => {
                if strict {
                    return Err(e);
                }
                errors.insert(q, e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    let last = mats.values().next_back().map(|(m, _)| m.clone());
    let mut max_pairwise: f64 = 0.0;
    let viable: Vec<&Array2<Complex64>> = mats.values().map(|(m, _)| m).collect();
    for (i, a) in viable.iter().enumerate() {
        for b in &viable[i + 1..] {
            max_pairwise = max_pairwise.max(max_entry_deviation(a, b));
        }
    }
    let entries: Vec<ScanEntry> = cutoffs
        .iter()
        .map(|&q| match mats.get(&q) {
            Some((m, leak)) => ScanEntry {
                cutoff: q,
                matrix: to_pairs(m),
                leakage: *leak,
                deviation_from_last: last.as_ref().map(|l| max_entry_deviation(m, l)).unwrap_or(0.0),
                truncation_error: None,
            },
            None => ScanEntry {
                cutoff: q,
                matrix: Vec::new(),
                leakage: f64::NAN,
                deviation_from_last: f64::NAN,
                truncation_error: errors.get(&q).cloned(),
            },
        })
        .collect();
    let mut minimal = None;
    for e in entries.iter().rev() {
        if e.truncation_error.is_none() && e.deviation_from_last < SCAN_AGREEMENT {
            minimal = Some(e.cutoff);
        } else {
            break;
        }
    }
    Ok(ScanReport {
        label: s.label.clone(),
        levels: levels.to_vec(),
        entries,
        max_pairwise_deviation: max_pairwise,
        minimal_stable_cutoff: minimal,
    })
}

/// Decodes a basis index of the restricted space into `(spins, level)` for display.
pub fn subspace_label(num_ions: usize, levels: &[usize], index: usize) -> String {
    let word = index / levels.len();
    let level = levels[index % levels.len()];
    let spins = basis_state(word, num_ions, 0).expect("word in range").spins;
    let s: String = spins.iter().map(|b| char::from(b'0' + b)).collect();
    format!("|{s};{level}⟩")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{pulse_unitary, Pulse, PulseKind};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_restricts_to_identity() {
        let op = Operator::identity(2, 5);
        let (m, leak) = subspace_matrix(&op, &[0, 1]).unwrap();
        assert_eq!(m, Array2::eye(8));
        assert_eq!(leak, 0.0);
        assert!(subspace_matrix(&op, &[0, 6]).is_err());
        assert!(subspace_matrix(&op, &[1, 1]).is_err());
    }

    #[test]
    fn blue_pi_pulse_leaks_out_of_cs() {
        let op = pulse_unitary(&Pulse::parsed(0, PulseKind::Blue, 1, "pi", "0"), 1, 4).unwrap();
        let (_, leak) = subspace_matrix(&op, &[0, 1]).unwrap();
        // |01> couples to |12> with half-angle π/√2
        let expect = (std::f64::consts::PI / 2f64.sqrt()).sin().abs();
        assert!((leak - expect).abs() < 1e-14);
        assert!(leak > 0.75);
    }

    #[test]
    fn distance_examples() {
        let u = Array2::from_shape_vec((2, 2), vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.8), c(0.6, 0.0)]).unwrap();
        assert_eq!(distance_up_to_global_phase(&u, &u).unwrap(), 0.0);
        let shifted = u.mapv(|z| z * Complex64::from_polar(1.0, 0.7));
        assert!(distance_up_to_global_phase(&u, &shifted).unwrap() < 1e-14);
        let id: Array2<Complex64> = Array2::eye(2);
        let flip = Array2::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((distance_up_to_global_phase(&id, &flip).unwrap() - 2.0).abs() < 1e-12);
        assert!(distance_up_to_global_phase(&id, &Array2::eye(3)).is_err());
    }

    #[test]
    fn truth_tables() {
        let cnot = Target::Cnot { control: 0, target: 1 }.matrix(2).unwrap();
        let TruthTable::Permutation(entries) = truth_table(&cnot) else {
            panic!("CNOT is a permutation");
        };
        let map: Vec<(usize, usize)> = entries.iter().map(|e| (e.input, e.output)).collect();
        assert_eq!(map, vec![(0, 0), (1, 1), (2, 3), (3, 2)]);
        assert!(entries.iter().all(|e| e.phase == [1.0, 0.0]));
        assert!(truth_table(&cnot).matches_up_to_common_phase(&cnot_permutation(2, 0, 1), 1e-12));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = Array2::from_shape_vec((2, 2), vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]).unwrap();
        assert_eq!(truth_table(&had), TruthTable::NotPermutation);
    }

    #[test]
    fn cnot_permutation_orders_ions() {
        assert_eq!(cnot_permutation(2, 0, 1), vec![0, 1, 3, 2]);
        assert_eq!(cnot_permutation(2, 1, 0), vec![0, 3, 2, 1]);
        assert_eq!(cnot_permutation(3, 2, 0), vec![0, 5, 2, 7, 4, 1, 6, 3]);
    }

    #[test]
    fn target_specs_round_trip() {
        for t in ["cnot:0,1", "cnot:2,0", "phases:0:pi/sqrt(2),pi,0,-pi/sqrt(2)", "diag:1:1,1,-1,1", "swap:0:1189"] {
            let target = Target::parse(t).unwrap();
            assert_eq!(target.spec(), t);
            assert_eq!(Target::parse(&target.spec()).unwrap(), target);
        }
        assert!(Target::parse("cnot:1,1").is_err());
        assert!(Target::parse("phases:0:1,2,3").is_err());
        assert!(Target::parse("toffoli:0").is_err());
    }

    #[test]
    fn local_target_embeds_on_the_right_ion() {
        let t = Target::diagonal(1, [1.0, 1.0, -1.0, 1.0]);
        let m = t.matrix(2).unwrap();
        // spins |s0 s1>, level index innermost: -1 wherever ion 1 is up at the low level
        let diag: Vec<f64> = (0..8).map(|i| m[[i, i]].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0]);
        assert!(t.matrix(1).is_err());
    }

    #[test]
    fn labels_and_cs_parse() {
        let (t, cs) = target_from_label("cnot-altcs2 phi=0.7 target=cnot:0,1 cs=0,2").unwrap();
        assert_eq!(t, Target::Cnot { control: 0, target: 1 });
        assert_eq!(cs, Some(CsSpec::ALTERNATE));
        assert!(target_from_label("no target here").is_none());
        assert_eq!(parse_cs("cs:0,1").unwrap(), CsSpec::DEFAULT);
        assert!(parse_cs("2,1").is_err());
        assert_eq!(subspace_label(2, &[0, 1], 5), "|10;1⟩");
    }

    #[test]
    fn scan_of_empty_schedule_has_zero_deviation() {
        let s = Schedule::new(1, "empty");
        let r = truncation_scan(&s, &[1, 3, 8], &[0, 1], true).unwrap();
        assert_eq!(r.max_pairwise_deviation, 0.0);
        assert_eq!(r.minimal_stable_cutoff, Some(1));
        assert!(truncation_scan(&s, &[3, 1], &[0, 1], true).is_err());
    }
}
