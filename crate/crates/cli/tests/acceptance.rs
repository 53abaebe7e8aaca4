//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use conflap_cli::{run, Experiment, Outcome, Params};
use conflap_core::kappa_bounds::{
    k3_sum_sandwich, kappa_bounds, pn_bruteforce, pn_upper, stable_exponent, GenusInput,
};
use conflap_core::spinor_kato::c_constant;

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed(e: Experiment, p: &Params) -> (Outcome, f64) {
    let t = Instant::now();
    let out = run(e, p).unwrap_or_else(|err| panic!("{} failed to run: {err}", e.name()));
    (out, t.elapsed().as_secs_f64())
}

fn check(o: &Outcome, name: &str) -> bool {
    o.checks.iter().any(|c| c.name == name && c.pass)
}

fn value(o: &Outcome, name: &str) -> f64 {
    o.checks.iter().find(|c| c.name == name).map_or(f64::NAN, |c| c.value)
}

fn small(e: Experiment) -> Params {
    let mut p = Params::default();
    match e {
        Experiment::Spectrum => {
            p.grid = Some(8);
            p.k = Some(4);
        }
        Experiment::ConformalCheck => p.grids = Some(vec![8, 12]),
        Experiment::NeckSweep => {
            p.radii = Some(vec![0.2, 0.1]);
            p.samples = Some(2048);
        }
        Experiment::C1Continuity => {
            p.grid = Some(8);
            p.k = Some(3);
        }
        Experiment::Kato => p.samples = Some(100),
        Experiment::Kappa => {
            p.n = Some(16);
            p.ahat = Some(21);
        }
        Experiment::Subcritical => {
            p.grids = Some(vec![8, 12]);
            p.grid = Some(32);
        }
        Experiment::Cheeger => {
            p.radii = Some(vec![0.2, 0.1]);
            p.samples = Some(2048);
        }
    }
    p
}

fn main() {
    let mut lines = Vec::new();
    let none = Params::default();

    let (conf, t_conf) = timed(Experiment::ConformalCheck, &none);
    lines.push(Line {
        id: 1,
        name: "conformal covariance",
        pass: check(&conf, "covariance_32") && check(&conf, "covariance_order") && t_conf <= 60.0,
        detail: format!(
            "residual(32^3) = {:.3e}, order = {:.3}, {t_conf:.1} s",
            value(&conf, "covariance_32"),
            value(&conf, "covariance_order")
        ),
    });
    lines.push(Line {
        id: 2,
        name: "scalar-curvature law",
        pass: check(&conf, "scal_law_order") && check(&conf, "scal_law_constant_factor"),
        detail: format!(
            "order = {:.3}, constant f residual = {:.1e}",
            value(&conf, "scal_law_order"),
            value(&conf, "scal_law_constant_factor")
        ),
    });

    let (torus, _) = timed(Experiment::Spectrum, &none);
    let sphere_p = Params {
        model: Some("sphere".into()),
        ..Params::default()
    };
    let (sphere, _) = timed(Experiment::Spectrum, &sphere_p);
    lines.push(Line {
        id: 3,
        name: "analytic spectra",
        pass: torus.pass && sphere.pass,
        detail: format!(
            "torus 32^3 max gap = {:.3e}, sphere cap max gap = {:.3e}",
            value(&torus, "max_rel_gap"),
            value(&sphere, "max_rel_gap")
        ),
    });

    let (neck, t_neck) = timed(Experiment::NeckSweep, &none);
    lines.push(Line {
        id: 4,
        name: "surgery stability",
        pass: ["gap_0_decreasing_last_three", "gap_1_decreasing_last_three"]
            .iter()
            .chain(&["gap_0_relative_final", "gap_1_relative_final"])
            .all(|c| check(&neck, c))
            && t_neck <= 120.0,
        detail: format!(
            "final relative gaps {:.3e}, {:.3e}, {t_neck:.1} s",
            value(&neck, "gap_0_relative_final"),
            value(&neck, "gap_1_relative_final")
        ),
    });

    let (c1, _) = timed(Experiment::C1Continuity, &none);
    lines.push(Line {
        id: 5,
        name: "C1 continuity",
        pass: c1.pass,
        detail: format!(
            "decreasing = {}, relative diff at 1e-3 = {:.3e}",
            check(&c1, "max_diff_decreasing_in_delta"),
            value(&c1, "relative_diff_at_delta_0.001")
        ),
    });

    lines.push(Line {
        id: 6,
        name: "mass localization",
        pass: check(&neck, "mass_localization_all_eigenpairs")
            && check(&neck, "localization_formula_0_10_eighth_half"),
        detail: format!(
            "all eigenpairs hold, formula value = {}",
            value(&neck, "localization_formula_0_10_eighth_half")
        ),
    });

    let (kato, t_kato) = timed(Experiment::Kato, &none);
    lines.push(Line {
        id: 7,
        name: "Kato suite",
        pass: kato.pass && t_kato <= 5.0,
        detail: format!(
            "n = 3..8, worst defect {:.1e}, {t_kato:.2} s",
            kato.checks
                .iter()
                .filter(|c| c.name.ends_with("_suite_defect"))
                .map(|c| c.value)
                .fold(0.0, f64::max)
        ),
    });

    let c44 = c_constant(4, 4).unwrap();
    let sandwich = (1..=5u64).all(|k| k3_sum_sandwich(k).unwrap().exact == Some(k));
    lines.push(Line {
        id: 8,
        name: "constants",
        pass: (c44.numer, c44.denom) == (224, 1) && sandwich,
        detail: format!("C(4,4) = {}/{}, K3-sum sandwich k = 1..5 exact: {sandwich}", c44.numer, c44.denom),
    });

    let t = Instant::now();
    let exact = |n, g| kappa_bounds(n, g, true, true).unwrap().exact;
    let w = pn_upper(16, 21).unwrap();
    let hand = [0, 1, 1, 1, 1, 2, 2, 2, 2, 3];
    let brute = (0..10).all(|a| pn_bruteforce(8, a as u64, 8).unwrap().count == Some(hand[a]));
    let st = stable_exponent(8, 6).unwrap();
    let kappa_ok = exact(8, GenusInput::Ahat(4)) == Some(1)
        && exact(9, GenusInput::Mod2(true)) == Some(1)
        && exact(7, GenusInput::None) == Some(0)
        && w.witness.count == 3
        && w.witness.verify(16, 21)
        && brute
        && st.p == 1
        && st.witness.verify(16, 6);
    let t_kappa = t.elapsed().as_secs_f64();
    lines.push(Line {
        id: 9,
        name: "kappa calculus",
        pass: kappa_ok && t_kappa <= 5.0,
        detail: format!(
            "(16,21) witness {:?}, stable_exponent(8,6) = {}, {t_kappa:.3} s",
            w.witness.blocks, st.p
        ),
    });

    let (sub, _) = timed(Experiment::Subcritical, &none);
    lines.push(Line {
        id: 10,
        name: "subcritical positivity",
        pass: sub.pass,
        detail: format!(
            "identity order = {:.3}, mu0(c3/2) = {:.4e}, mu0(c3) = {:.3e}",
            value(&sub, "identity_order"),
            value(&sub, "mu0_subcritical"),
            value(&sub, "abs_mu0_critical")
        ),
    });

    let mut same = Vec::new();
    for e in Experiment::ALL {
        let p = small(e);
        let a = run(e, &p).unwrap();
        let b = run(e, &p).unwrap();
        same.push((e.name(), !a.csv().is_empty() && a.csv() == b.csv()));
    }
    lines.push(Line {
        id: 11,
        name: "determinism",
        pass: same.iter().all(|(_, s)| *s),
        detail: format!(
            "byte-identical CSV for {}",
            same.iter()
                .map(|(n, s)| format!("{n}={}", if *s { "yes" } else { "NO" }))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    });

    let mut failed = 0;
    for l in &lines {
        println!(
            "criterion {:>2} {:<24} {}  {}",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail
        );
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
