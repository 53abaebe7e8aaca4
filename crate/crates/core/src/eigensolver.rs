//! Lowest eigenpairs of `(S + P)u = μMu`, inertia-based eigenvalue counting,
//! the mass-localization bound and Cheeger sweeps over one-dimensional cuts.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric_field::ScalarField;
use crate::operator_assembly::DiscreteOperator;
use crate::sparse::Ldlt;

/// Problems up to this size are solved densely.
pub const DENSE_LIMIT: usize = 2000;
/// Relative width used to merge split multiplicities.
pub const CLUSTER_RTOL: f64 = 1e-8;
const SEED: u64 = 0x5eed_c0de;
const KRYLOV_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub mode: SolveMode,
    pub n: usize,
    /// Shift-invert applications of the block (0 for dense solves).
    pub iterations: usize,
    pub shift: Option<f64>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `‖(S+P)u − μMu‖_{M⁻¹}` per eigenpair.
    pub residuals: Vec<f64>,
    pub meta: SolverMeta,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// Eigenvalues grouped within `1e−8·(1+|μ|)`.
    pub fn levels(&self) -> Vec<(f64, usize)> {
        cluster(&self.eigenvalues)
    }

    pub fn count_at_most(&self, lambda: f64) -> usize {
        self.eigenvalues.iter().filter(|&&m| m <= lambda).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    /// Eigenvectors as (row = node, col = index, value) lines.
    pub fn eigenvectors_coo_text(&self) -> String {
        let mut s = String::new();
        for (j, v) in self.eigenvectors.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                s.push_str(&format!("{i} {j} {x:.16e}\n"));
            }
        }
        s
    }
}

/// Groups sorted values whose neighbours differ by at most `1e−8·(1+|μ|)`.
pub fn cluster(values: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((mean, m, last)) if (v - *last).abs() <= CLUSTER_RTOL * (1.0 + v.abs()) => {
                *mean = (*mean * *m as f64 + v) / (*m as f64 + 1.0);
                *m += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(v, m, _)| (v, m)).collect()
}

fn residual_norm(op: &DiscreteOperator, mu: f64, x: &[f64]) -> f64 {
    let ax = op.apply(x);
    ax.iter()
        .zip(x)
        .zip(op.mass())
        .map(|((a, x), m)| {
            let r = a - mu * m * x;
            r * r / m
        })
        .sum::<f64>()
        .sqrt()
}

/// The `k` smallest eigenpairs with M-orthonormal eigenvectors.
pub fn solve_lowest(op: &DiscreteOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    let n = op.n();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("k = {k} must lie in 1..={n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
    }
    if n <= DENSE_LIMIT {
        solve_dense(op, k, tol)
    } else {
        solve_iterative(op, k, tol)
    }
}

fn solve_dense(op: &DiscreteOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    let n = op.n();
    let dense = op.total().to_dense();
    let isq: Vec<f64> = op.mass().iter().map(|m| 1.0 / m.sqrt()).collect();
    let b = DMatrix::from_fn(n, n, |i, j| dense[i * n + j] * isq[i] * isq[j]);
    let b = (&b + b.transpose()) * 0.5;
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for &j in order.iter().take(k) {
        let mu = eig.eigenvalues[j];
        let v: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, j)] * isq[i]).collect();
        residuals.push(residual_norm(op, mu, &v));
        eigenvalues.push(mu);
        eigenvectors.push(v);
    }
    Ok(SpectrumResult {
        eigenvalues,
        residuals,
        meta: SolverMeta {
            mode: SolveMode::Dense,
            n,
            iterations: 0,
            shift: None,
            tol,
        },
        eigenvectors,
    })
}

/// A value certainly at or below the smallest eigenvalue.
fn spectral_lower_bound(op: &DiscreteOperator) -> f64 {
    // S is positive semidefinite, so a Gershgorin bound for the potential in
    // the mass-scaled basis bounds μ₀ from below.
    let p = op.potential();
    let m = op.mass();
    (0..op.n())
        .map(|i| {
            let mut off = 0.0;
            let mut diag = 0.0;
            for (j, v) in p.row(i) {
                if j == i {
                    diag = v;
                } else {
                    off += v.abs() * (m[i] / m[j]).sqrt();
                }
            }
            (diag - off) / m[i]
        })
        .fold(f64::INFINITY, f64::min)
        .min(0.0)
}

/// `max_i Σ_j |A_ij| / M_i`.
fn operator_norm_bound(op: &DiscreteOperator) -> f64 {
    (0..op.n())
        .map(|i| op.total().row(i).map(|(_, v)| v.abs()).sum::<f64>() / op.mass()[i])
        .fold(0.0, f64::max)
}

fn factor_shifted(op: &DiscreteOperator, sigma: f64) -> Result<Ldlt> {
    Ldlt::factor(&op.total().shifted(sigma, op.mass()), op.layout())
}

/// Factors `A − σM` for the largest σ ≤ `target` that keeps it positive definite.
fn certified_shift(op: &DiscreteOperator, target: f64, floor: f64) -> Result<(f64, Ldlt)> {
    let mut sigma = target;
    for _ in 0..60 {
        let f = factor_shifted(op, sigma)?;
        let inertia = f.inertia();
        if inertia.negative == 0 && inertia.zero == 0 {
            return Ok((sigma, f));
        }
        if sigma <= floor {
            break;
        }
        sigma = floor + 0.5 * (sigma - floor) - f64::EPSILON * floor.abs();
    }
    let f = factor_shifted(op, floor)?;
    if f.inertia().negative == 0 {
        Ok((floor, f))
    } else {
        Err(Error::Singular(format!("shift {floor} below the spectrum is not definite")))
    }
}

fn m_dot(a: &[f64], b: &[f64], m: &[f64]) -> f64 {
    a.iter().zip(b).zip(m).map(|((a, b), m)| a * b * m).sum()
}

/// M-orthonormalizes `vs` in place (two passes of classical Gram–Schmidt),
/// dropping numerically dependent vectors.
fn m_orthonormalize(vs: Vec<Vec<f64>>, m: &[f64]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        let before = m_dot(&v, &v, m).sqrt();
        if before == 0.0 || !before.is_finite() {
            continue;
        }
        for _ in 0..2 {
            let coeffs: Vec<f64> = basis.iter().map(|q| m_dot(q, &v, m)).collect();
            for (q, c) in basis.iter().zip(coeffs) {
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let after = m_dot(&v, &v, m).sqrt();
        if after > 1e-10 * before {
            v.iter_mut().for_each(|x| *x /= after);
            basis.push(v);
        }
    }
    basis
}

fn solve_iterative(op: &DiscreteOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    let n = op.n();
    let mass = op.mass();
    let block = (k + 8).min(n);
    let cap = ((10 * k) as f64 * (n as f64).sqrt()).ceil() as usize;

    // Residuals cannot drop much below roundoff in applying A.
    let floor_res = 1e3 * f64::EPSILON * operator_norm_bound(op);
    let floor = spectral_lower_bound(op) - 10.0 * tol;
    let (mut sigma, mut fact) = certified_shift(op, floor, floor - 1.0 - floor.abs())?;
    let mut reshifts = 0;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let start: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut x = m_orthonormalize(start, mass);

    let mut iterations = 0;
    let mut best: Option<Vec<f64>> = None;
    loop {
        let mut basis = x.clone();
        let mut last = x.clone();
        for _ in 0..KRYLOV_DEPTH {
            let mv: Vec<Vec<f64>> = last
                .iter()
                .map(|v| v.iter().zip(mass).map(|(v, m)| v * m).collect())
                .collect();
            let next = fact.solve_many(&mv);
            iterations += 1;
            basis.extend(next.iter().cloned());
            last = next;
        }
        let q = m_orthonormalize(basis, mass);
        let aq: Vec<Vec<f64>> = q.iter().map(|v| op.apply(v)).collect();
        let dim = q.len();
        let sym = |u: &[Vec<f64>], w: &[Vec<f64>], i: usize, j: usize| {
            0.5 * (u[i].iter().zip(&w[j]).map(|(a, b)| a * b).sum::<f64>()
                + u[j].iter().zip(&w[i]).map(|(a, b)| a * b).sum::<f64>())
        };
        let mq: Vec<Vec<f64>> = q
            .iter()
            .map(|v| v.iter().zip(mass).map(|(v, m)| v * m).collect())
            .collect();
        // Rayleigh–Ritz against the computed Gram matrix, so residual loss of
        // M-orthogonality in the basis does not limit the attainable accuracy.
        let h = DMatrix::from_fn(dim, dim, |i, j| sym(&q, &aq, i, j));
        let gram = DMatrix::from_fn(dim, dim, |i, j| sym(&q, &mq, i, j));
        let l = gram
            .cholesky()
            .ok_or_else(|| Error::Singular("Krylov basis lost definiteness".into()))?
            .l();
        let linv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("Krylov basis lost definiteness".into()))?;
        let reduced = &linv * h * linv.transpose();
        let reduced = (&reduced + reduced.transpose()) * 0.5;
        let eig = SymmetricEigen::new(reduced);
        let coeffs = linv.transpose() * &eig.eigenvectors;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let keep = block.min(dim);
        let theta: Vec<f64> = order.iter().take(keep).map(|&j| eig.eigenvalues[j]).collect();
        x = order
            .iter()
            .take(keep)
            .map(|&j| {
                let mut v = vec![0.0; n];
                for (i, qi) in q.iter().enumerate() {
                    let c = coeffs[(i, j)];
                    for (vv, qq) in v.iter_mut().zip(qi) {
                        *vv += c * qq;
                    }
                }
                v
            })
            .collect();

        let residuals: Vec<f64> = (0..k).map(|j| residual_norm(op, theta[j], &x[j])).collect();
        let converged = residuals
            .iter()
            .zip(&theta)
            .all(|(r, t)| *r <= (tol * (1.0 + t.abs())).max(floor_res));
        if best.as_ref().is_none_or(|b| residuals.iter().sum::<f64>() < b.iter().sum::<f64>()) {
            best = Some(residuals.clone());
        }
        if converged {
            x.truncate(k);
            return Ok(SpectrumResult {
                eigenvalues: theta[..k].to_vec(),
                residuals,
                meta: SolverMeta {
                    mode: SolveMode::Iterative,
                    n,
                    iterations,
                    shift: Some(sigma),
                    tol,
                },
                eigenvectors: x,
            });
        }
        if iterations >= cap {
            let best_residuals = best.unwrap_or(residuals);
            return Err(Error::SolverFailure {
                iterations,
                best_residual: best_residuals.iter().copied().fold(0.0, f64::max),
                residuals: best_residuals,
            });
        }
        // Move a distant shift towards the wanted cluster; the inertia check
        // keeps A − σM definite.
        let spread = theta[keep - 1] - theta[0];
        if reshifts < 4 && theta[0] - sigma > 0.5 * spread {
            let target = theta[0] - (0.05 * spread).max(10.0 * tol);
            if let Ok((s, f)) = certified_shift(op, target, sigma) {
                if s > sigma {
                    sigma = s;
                    fact = f;
                }
            }
            reshifts += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: usize,
    /// Set when an eigenvalue lies within `tol` of λ.
    pub ambiguous: bool,
}

/// `N(λ)`, the number of eigenvalues `≤ λ`, from the inertia of `(S+P) − λM`.
pub fn counting(op: &DiscreteOperator, lambda: f64, tol: f64) -> Result<CountResult> {
    if !lambda.is_finite() {
        return Err(Error::Precondition(format!("λ = {lambda} must be finite")));
    }
    let at = |s: f64| -> Result<usize> {
        let f = factor_shifted(op, s)?;
        let i = f.inertia();
        Ok(i.negative + i.zero)
    };
    let count = at(lambda)?;
    let lo = at(lambda - tol.abs())?;
    let hi = at(lambda + tol.abs())?;
    Ok(CountResult {
        count,
        ambiguous: lo != hi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassLocalization {
    /// Mass fraction of `u` on `{Scal ≥ S1}`.
    pub measured: f64,
    /// `(Λ²/c − S0)/(S1 − S0)`.
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Compares the mass of `u` on `{Scal ≥ S1}` with `(Λ²/c − S0)/(S1 − S0)`.
pub fn lemma36_check(
    op: &DiscreteOperator,
    scal: &ScalarField,
    u: &[f64],
    s0: f64,
    s1: f64,
    lambda_sq: f64,
    c: f64,
) -> Result<MassLocalization> {
    if scal.values.len() != op.n() || u.len() != op.n() {
        return Err(Error::DimensionMismatch(op.n(), scal.values.len().min(u.len())));
    }
    if !(c > 0.0) {
        return Err(Error::Coefficient {
            got: c,
            why: "the localization bound needs c > 0".into(),
        });
    }
    if !(s0 < s1) {
        return Err(Error::Precondition(format!("need S0 < S1, got {s0} and {s1}")));
    }
    let min = scal.min();
    if min < s0 {
        return Err(Error::ScalBelowS0 { s0, min });
    }
    let rayleigh = op.rayleigh(u)?;
    if rayleigh > lambda_sq {
        return Err(Error::RayleighExceeds { rayleigh, lambda_sq });
    }
    Ok(localization(op.mass(), &scal.values, u, s0, s1, lambda_sq, c, op.spacing()))
}

/// The bound alone, `(Λ²/c − S0)/(S1 − S0)`.
pub fn lemma36_bound(s0: f64, s1: f64, lambda_sq: f64, c: f64) -> f64 {
    (lambda_sq / c - s0) / (s1 - s0)
}

#[allow(clippy::too_many_arguments)]
fn localization(
    mass: &[f64],
    scal: &[f64],
    u: &[f64],
    s0: f64,
    s1: f64,
    lambda_sq: f64,
    c: f64,
    h: f64,
) -> MassLocalization {
    let total: f64 = mass.iter().zip(u).map(|(m, u)| m * u * u).sum();
    let high: f64 = mass
        .iter()
        .zip(u)
        .zip(scal)
        .filter(|(_, s)| **s >= s1)
        .map(|((m, u), _)| m * u * u)
        .sum();
    let measured = high / total;
    let bound = lemma36_bound(s0, s1, lambda_sq, c);
    let slack = 10.0 * h * h;
    MassLocalization {
        measured,
        bound,
        slack,
        holds: measured <= bound + slack,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheegerEstimate {
    pub h: f64,
    /// Cut between cells `cut` and `cut + 1`.
    pub cut: usize,
}

/// Minimizes `area / min(vol₁, vol₂)` over the interfaces of a chain of cells.
/// `areas[i]` is the interface between cells `i` and `i + 1`.
pub fn cheeger_sweep(volumes: &[f64], areas: &[f64]) -> Result<CheegerEstimate> {
    if volumes.len() < 2 || areas.len() + 1 != volumes.len() {
        return Err(Error::DimensionMismatch(volumes.len().saturating_sub(1), areas.len()));
    }
    if let Some(i) = areas.iter().position(|a| !(*a > 0.0)) {
        return Err(Error::Disconnected(format!("interface {i} has zero area")));
    }
    let total: f64 = volumes.iter().sum();
    let mut left = 0.0;
    let mut best = CheegerEstimate {
        h: f64::INFINITY,
        cut: 0,
    };
    for (i, a) in areas.iter().enumerate() {
        left += volumes[i];
        let ratio = a / left.min(total - left);
        if ratio < best.h {
            best = CheegerEstimate { h: ratio, cut: i };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::metric_field::MetricField;
    use crate::operator_assembly::{assemble, AssemblyMode};
    use std::f64::consts::PI;

    fn flat_op(m: usize, c: f64) -> DiscreteOperator {
        assemble(&MetricField::flat(&Grid::unit(3, m)), c, AssemblyMode::Pointwise).unwrap()
    }

    #[test]
    fn dense_flat_torus() {
        let op = flat_op(10, 0.125);
        let r = solve_lowest(&op, 7, 1e-8).unwrap();
        assert_eq!(r.meta.mode, SolveMode::Dense);
        assert!(r.eigenvalues[0].abs() < 1e-10);
        let exact = 400.0 * (PI / 10.0).sin().powi(2);
        for mu in &r.eigenvalues[1..] {
            assert!((mu - exact).abs() < 1e-9 * exact, "{mu} {exact}");
        }
        assert_eq!(r.levels().len(), 2);
        assert_eq!(r.levels()[1].1, 6);
        for (i, u) in r.eigenvectors.iter().enumerate() {
            for (j, v) in r.eigenvectors.iter().enumerate() {
                let d = m_dot(u, v, op.mass());
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn iterative_flat_torus() {
        let op = flat_op(16, 0.125);
        let r = solve_lowest(&op, 7, 1e-9).unwrap();
        assert_eq!(r.meta.mode, SolveMode::Iterative);
        let exact = 4.0 * 256.0 * (PI / 16.0).sin().powi(2);
        assert!(r.eigenvalues[0].abs() < 1e-8);
        for mu in &r.eigenvalues[1..] {
            assert!((mu - exact).abs() < 1e-8 * exact, "{mu}");
        }
        for (mu, res) in r.eigenvalues.iter().zip(&r.residuals) {
            assert!(*res <= 1e-9 * (1.0 + mu.abs()));
        }
        for (i, u) in r.eigenvectors.iter().enumerate() {
            for (j, v) in r.eigenvectors.iter().enumerate() {
                let d = m_dot(u, v, op.mass());
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn iterative_matches_dense_on_curved_metric() {
        let grid = Grid::new(vec![16, 12, 12], vec![1.0, 1.0, 1.0]).unwrap();
        let g = MetricField::conformally_flat(&grid, |x| 0.3 * (2.0 * PI * x[0]).cos()).unwrap();
        let op = assemble(&g, 0.125, AssemblyMode::Pointwise).unwrap();
        let it = solve_lowest(&op, 5, 1e-9).unwrap();
        let de = solve_dense(&op, 5, 1e-9).unwrap();
        for (a, b) in it.eigenvalues.iter().zip(&de.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn counting_examples() {
        let op = flat_op(12, 0.125);
        assert_eq!(counting(&op, -1.0, 1e-6).unwrap().count, 0);
        assert_eq!(counting(&op, 1.0, 1e-6).unwrap().count, 1);
        assert_eq!(counting(&op, 45.0, 1e-6).unwrap().count, 7);
        assert!(counting(&op, 0.0, 1e-6).unwrap().ambiguous);
        let r = solve_lowest(&op, 30, 1e-9).unwrap();
        for lambda in [10.0, 38.0, 60.0, 70.0] {
            assert_eq!(counting(&op, lambda, 1e-6).unwrap().count, r.count_at_most(lambda));
        }
    }

    #[test]
    fn homothety_scales_exactly() {
        let grid = Grid::unit(3, 10);
        let g = MetricField::conformally_flat(&grid, |x| 0.2 * (2.0 * PI * x[2]).sin()).unwrap();
        let lam = 1.7f64;
        let scaled = g.scaled_by(&vec![lam * lam; grid.len()]).unwrap();
        let a = solve_lowest(&assemble(&g, 0.125, AssemblyMode::Pointwise).unwrap(), 4, 1e-9).unwrap();
        let b = solve_lowest(&assemble(&scaled, 0.125, AssemblyMode::Pointwise).unwrap(), 4, 1e-9).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((y - x / (lam * lam)).abs() < 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn localization_formula() {
        assert!((lemma36_bound(0.0, 10.0, 0.5, 0.125) - 0.4).abs() < 1e-15);
        let op = flat_op(8, 0.125);
        let scal = ScalarField::constant(&Grid::unit(3, 8), 0.0);
        let u = vec![1.0; op.n()];
        let r = lemma36_check(&op, &scal, &u, 0.0, 10.0, 0.5, 0.125).unwrap();
        assert_eq!(r.measured, 0.0);
        assert!(r.holds);
        assert!(matches!(
            lemma36_check(&op, &scal, &u, 1.0, 10.0, 0.5, 0.125),
            Err(Error::ScalBelowS0 { .. })
        ));
        let wave: Vec<f64> = Grid::unit(3, 8).sample(|x| (2.0 * PI * x[0]).cos());
        assert!(matches!(
            lemma36_check(&op, &scal, &wave, 0.0, 10.0, 0.5, 0.125),
            Err(Error::RayleighExceeds { .. })
        ));
    }

    #[test]
    fn cheeger_of_round_three_sphere() {
        let m = 20000;
        let h = PI / m as f64;
        let vols: Vec<f64> = (0..m)
            .map(|i| 4.0 * PI * ((i as f64 + 0.5) * h).sin().powi(2) * h)
            .collect();
        let areas: Vec<f64> = (1..m).map(|i| 4.0 * PI * (i as f64 * h).sin().powi(2)).collect();
        let est = cheeger_sweep(&vols, &areas).unwrap();
        assert!((est.h - 4.0 / PI).abs() < 1e-6, "{}", est.h);
        assert_eq!(est.cut, m / 2 - 1);
        assert!(matches!(
            cheeger_sweep(&[1.0, 1.0, 1.0], &[1.0, 0.0]),
            Err(Error::Disconnected(_))
        ));
    }

    #[test]
    fn clusters_merge_split_levels() {
        let c = cluster(&[0.0, 1.0, 1.0 + 1e-9, 1.0 + 2e-9, 2.0]);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].1, 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn rayleigh_bounds_ground_state(seed in 0u64..1000) {
                let grid = Grid::unit(3, 8);
                let g = MetricField::conformally_flat(&grid, |x| 0.2 * (2.0 * PI * x[0]).sin()).unwrap();
                let op = assemble(&g, 0.125, AssemblyMode::Weak).unwrap();
                let mu0 = solve_lowest(&op, 1, 1e-9).unwrap().eigenvalues[0];
                let u = ScalarField::random_smooth(&grid, seed, 3);
                prop_assert!(op.rayleigh(&u.values).unwrap() >= mu0 - 1e-9);
            }
        }
    }
}
