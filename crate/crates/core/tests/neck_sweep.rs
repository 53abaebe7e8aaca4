use conflap_core::eigensolver::solve_lowest;
use conflap_core::neck_surgery::*;

const RADII: [f64; 5] = [0.3, 0.2, 0.1, 0.05, 0.025];

#[test]
fn sweep_converges_to_two_spheres() {
    let rep = neck_sweep(3, 0.125, &RADII, 1, SWEEP_SAMPLES).unwrap();
    assert_eq!(rep.baseline, vec![0.75, 0.75]);
    let last = &rep.rows[rep.rows.len() - 3..];
    for j in 0..2 {
        for w in last.windows(2) {
            assert!(w[1].gaps[j] < w[0].gaps[j], "j = {j}");
        }
        assert!(last[2].gaps[j] <= 0.05 * 0.75);
    }
    assert!(rep.monotone_from.unwrap() >= 0.1);
    for row in &rep.rows {
        assert!(row.s1 > row.s0);
        assert!(row.localization.iter().all(|l| l.holds), "r = {}", row.r);
        // Cheeger direction within the symmetric class
        assert!(row.cheeger * row.cheeger / 4.0 <= row.mu1_laplacian + 1e-6);
        assert!(row.eigenvalues[0] <= 0.75 + 1e-9);
    }
    // fat neck: the two lowest modes are still well apart
    let fat = &rep.rows[0];
    assert!(fat.eigenvalues[1] - fat.eigenvalues[0] > 0.1);
    // neck curvature grows like r⁻²
    assert!(rep.rows[4].s1 > 10.0 * rep.rows[2].s1);
}

#[test]
fn cheeger_constant_shrinks_with_neck() {
    let h: Vec<f64> = RADII
        .iter()
        .map(|&r| profile_cheeger(&make_dumbbell(3, r, 4096).unwrap()).unwrap().h)
        .collect();
    assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
    let p = make_dumbbell(3, 0.1, 4096).unwrap();
    let c = profile_cheeger(&p).unwrap();
    // symmetric bulbs: the best cut is the neck sphere
    assert!((c.cut as f64 + 1.0 - p.samples() as f64 / 2.0).abs() <= 1.0);
}

#[test]
fn one_bulb_test_function_bounds_ground_state() {
    for r in [0.2, 0.05] {
        let p = make_dumbbell(3, r, 4096).unwrap();
        let op = reduce_to_sturm_liouville(&p, 0.125).unwrap();
        let chi = cutoff_chi(&p, r).unwrap();
        let u: Vec<f64> = (0..p.samples())
            .map(|i| if p.t[i] < p.center() { chi.field.values[i] } else { 0.0 })
            .collect();
        let q = op.rayleigh(&u).unwrap();
        let mu0 = solve_lowest(&op, 1, 1e-10).unwrap().eigenvalues[0];
        assert!(mu0 <= q, "{mu0} {q}");
    }
}

#[test]
fn csv_is_deterministic() {
    let a = neck_sweep(3, 0.125, &[0.2, 0.1], 1, 2048).unwrap().to_csv();
    let b = neck_sweep(3, 0.125, &[0.2, 0.1], 1, 2048).unwrap().to_csv();
    assert_eq!(a, b);
    assert!(a.starts_with("r,j,mu_j,gap_j,S0,S1,C1,C2,h_sweep\n"));
    assert_eq!(a.lines().count(), 5);
}
