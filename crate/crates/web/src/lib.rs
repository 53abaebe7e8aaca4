//! Browser bindings: κ bounds, the Kato projection suite and a single
//! dumbbell spectrum, each returning JSON for the static demo page.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use conflap_core::eigensolver::solve_lowest;
use conflap_core::kappa_bounds::{kappa_bounds, GenusInput};
use conflap_core::metric_field::conformal_coefficient;
use conflap_core::neck_surgery::{make_dumbbell, reduce_to_sturm_liouville, two_sphere_baseline, warped_scal};
use conflap_core::spinor_kato::{c_constant, kato_suite};

const PLOT_POINTS: usize = 400;

/// `genus`: `"ahat:<int>"`, `"alpha:1"`, `"alpha:0"` or `""`.
pub fn kappa_json(n: usize, genus: &str, spin: bool, simply_connected: bool) -> Result<String, String> {
    let g = match genus.trim().split_once(':') {
        None if genus.trim().is_empty() => GenusInput::None,
        Some(("ahat", v)) => GenusInput::Ahat(v.trim().parse().map_err(|_| format!("bad A-hat value {v}"))?),
        Some(("alpha", v)) => GenusInput::Mod2(match v.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(format!("mod-2 alpha must be 0 or 1, got {v}")),
        }),
        _ => return Err(format!("cannot read genus {genus:?}")),
    };
    kappa_bounds(n, g, spin, simply_connected)
        .map(|r| r.to_json())
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct KatoOut {
    n: usize,
    spin_dim: usize,
    idempotency: f64,
    hermiticity: f64,
    rotation: f64,
    norm_identity: f64,
    complementary: f64,
    c_nn: String,
    passes: bool,
}

pub fn kato_json(n: usize, samples: usize, seed: u64) -> Result<String, String> {
    let row = kato_suite(n, samples, seed).map_err(|e| e.to_string())?;
    let c = c_constant(n, n).map_err(|e| e.to_string())?;
    let out = KatoOut {
        n,
        spin_dim: row.spin_dim,
        idempotency: row.idempotency,
        hermiticity: row.hermiticity,
        rotation: row.rotation,
        norm_identity: row.norm_identity,
        complementary: (n as f64 - 1.0) / n as f64,
        c_nn: if c.denom == 1 {
            c.numer.to_string()
        } else {
            format!("{}/{}", c.numer, c.denom)
        },
        passes: row.passes(1e-12),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[derive(Serialize)]
struct NeckOut {
    r: f64,
    eigenvalues: Vec<f64>,
    limit: Vec<f64>,
    t: Vec<f64>,
    phi: Vec<f64>,
    scal: Vec<f64>,
    ground: Vec<f64>,
}

/// Lowest two invariant eigenvalues of `Δ + c₃ Scal` on the 3-dimensional
/// dumbbell with neck radius `r`, plus a thinned profile for plotting.
pub fn neck_json(r: f64, samples: usize) -> Result<String, String> {
    let c = conformal_coefficient(3);
    let p = make_dumbbell(3, r, samples).map_err(|e| e.to_string())?;
    let op = reduce_to_sturm_liouville(&p, c).map_err(|e| e.to_string())?;
    let res = solve_lowest(&op, 2, 1e-9).map_err(|e| e.to_string())?;
    let scal = warped_scal(&p).map_err(|e| e.to_string())?;
    let step = (p.samples() / PLOT_POINTS).max(1);
    let pick = |v: &[f64]| v.iter().step_by(step).copied().collect::<Vec<_>>();
    let u = &res.eigenvectors[0];
    let sign = if u.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let ground: Vec<f64> = u.iter().map(|x| sign * x).collect();
    let out = NeckOut {
        r,
        eigenvalues: res.eigenvalues.clone(),
        limit: two_sphere_baseline(3, c, 2),
        t: pick(&p.t),
        phi: pick(&p.phi),
        scal: pick(&scal.values),
        ground: pick(&ground),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[wasm_bindgen]
pub fn kappa(n: usize, genus: &str, spin: bool, simply_connected: bool) -> Result<String, JsError> {
    kappa_json(n, genus, spin, simply_connected).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kato(n: usize, samples: usize, seed: u32) -> Result<String, JsError> {
    kato_json(n, samples, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn neck(r: f64, samples: usize) -> Result<String, JsError> {
    neck_json(r, samples).map_err(|e| JsError::new(&e))
}
