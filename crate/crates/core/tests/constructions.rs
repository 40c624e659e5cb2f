use std::f64::consts::PI;

use ionlogic::angle::Angle;
use ionlogic::constructions::{
    approx_swap, cnot_alt_cs, cnot_alt_cs_seventh, cnot_first_sideband, cnot_third_sideband, describe,
    hadamard_matrix, p_gate, radians, single_qubit_schedule, third_sideband_cz, u_phi, z_matrix, Construction,
    Mat2,
};
use ionlogic::document::{schedule_from_str, schedule_to_string};
use ionlogic::numerics::solve_u_phi_angles;
use ionlogic::schedule::{schedule_unitary, Schedule};
use ionlogic::verify::{target_from_label, truncation_scan, verify_schedule, DEFAULT_LEAK_TOLERANCE, DEFAULT_TOLERANCE};
use ionlogic::Error;
use num_complex::Complex64;

fn passes(con: &Construction, cutoff: usize) -> f64 {
    let r = verify_schedule(&con.schedule, &con.target, con.cs, cutoff, DEFAULT_TOLERANCE, DEFAULT_LEAK_TOLERANCE)
        .unwrap();
    assert!(r.pass, "{}: distance {} leakage {}", con.schedule.label, r.distance, r.leakage);
    r.distance
}

fn all_cnots(j: usize, k: usize, phi: f64, phi2: f64) -> Vec<Construction> {
    let (a, b) = (radians(phi), radians(phi2));
    vec![
        cnot_first_sideband(j, k, &a).unwrap(),
        cnot_third_sideband(j, k, &a, &b).unwrap(),
        cnot_alt_cs(j, k, &a).unwrap(),
        cnot_alt_cs_seventh(j, k, &a, &b).unwrap(),
    ]
}

#[test]
fn cnots_hold_over_a_phase_grid() {
    for phi in [0.0, 0.4, 1.234, PI / 2.0, 3.0, -2.2] {
        for phi2 in [0.0, 2.5, -1.0] {
            for con in all_cnots(0, 1, phi, phi2) {
                passes(&con, 12);
            }
        }
    }
}

#[test]
fn cnots_on_larger_registers() {
    for (j, k) in [(1, 0), (0, 2), (2, 1)] {
        for con in all_cnots(j, k, 0.3, 1.1) {
            assert_eq!(con.schedule.num_ions, j.max(k) + 1);
            passes(&con, 10);
        }
    }
}

#[test]
fn equal_ions_are_rejected() {
    assert!(cnot_first_sideband(1, 1, &Angle::zero()).is_err());
    assert!(cnot_alt_cs_seventh(0, 0, &Angle::zero(), &Angle::zero()).is_err());
    assert!(approx_swap(0, 0).is_err());
}

#[test]
fn truncation_scans_agree_across_cutoffs() {
    let p = p_gate(0);
    let scan = truncation_scan(&p.schedule, &[2, 3, 8, 12], &[0, 1], true).unwrap();
    assert!(scan.max_pairwise_deviation < 1e-12);
    assert_eq!(scan.minimal_stable_cutoff, Some(2));

    let c7 = cnot_alt_cs_seventh(0, 1, &radians(0.5), &radians(1.5)).unwrap();
    let scan = truncation_scan(&c7.schedule, &[8, 9, 12, 16], &[0], false).unwrap();
    assert!(scan.entries[0].truncation_error.is_some());
    assert!(scan.entries[1..].iter().all(|e| e.truncation_error.is_none()));
    assert_eq!(scan.minimal_stable_cutoff, Some(9));
    assert!(matches!(
        truncation_scan(&c7.schedule, &[8, 9], &[0], true),
        Err(Error::TruncationLeak { .. })
    ));
    assert!(truncation_scan(&c7.schedule, &[9, 8], &[0], false).is_err());
}

#[test]
fn emitted_labels_name_their_target() {
    let sol = solve_u_phi_angles().unwrap();
    let cons = vec![
        p_gate(1),
        third_sideband_cz(0, &radians(2.5)),
        u_phi(0, &Angle::parse("pi/3").unwrap(), &sol).unwrap(),
        approx_swap(0, 1189).unwrap(),
        cnot_alt_cs(1, 0, &Angle::zero()).unwrap(),
    ];
    for con in cons {
        let text = schedule_to_string(&con.schedule);
        let back = schedule_from_str(&text).unwrap();
        let (target, cs) = target_from_label(&back.label).expect("label carries target");
        assert_eq!(target, con.target);
        assert_eq!(cs, Some(con.cs));
    }
}

#[test]
fn swap_construction_against_its_own_target() {
    // the target is the exact pulse matrix, so every l verifies
    for l in [1u64, 6, 1189, 2378] {
        passes(&approx_swap(0, l).unwrap(), 6);
    }
}

#[test]
fn u_phi_targets_verify() {
    let sol = solve_u_phi_angles().unwrap();
    for phi in ["0", "0.3", "1", "pi", "-2.5"] {
        let con = u_phi(0, &Angle::parse(phi).unwrap(), &sol).unwrap();
        passes(&con, 12);
    }
}

#[test]
fn single_qubit_compiler_reproduces_targets() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let targets: Vec<Mat2> = vec![
        hadamard_matrix(),
        z_matrix(0.7),
        [[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]],
        [
            [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(s, 0.0)],
        ],
    ];
    for t in targets {
        let pulses = single_qubit_schedule(&t, 0).unwrap();
        assert!(pulses.len() <= 3);
        let u = schedule_unitary(&Schedule::with_pulses(1, "u", pulses).unwrap(), 1).unwrap();
        // spin block for phonon 0: indices 0 and 2
        let m = [[u.matrix[[0, 0]], u.matrix[[0, 2]]], [u.matrix[[2, 0]], u.matrix[[2, 2]]]];
        let mut overlap = Complex64::new(0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                overlap += t[r][c].conj() * m[r][c];
            }
        }
        assert!((overlap.norm() - 2.0).abs() < 1e-12, "{overlap}");
    }
}

#[test]
fn description_lists_segments() {
    let con = cnot_first_sideband(0, 1, &Angle::zero()).unwrap();
    let text = describe(&con);
    assert_eq!(text.lines().count(), 1 + con.segments.len());
    assert!(text.contains("P_1"));
    assert_eq!(con.segments.last().unwrap().end, con.schedule.len());
}
