//! Riemannian metrics sampled on a periodic coordinate grid, their scalar
//! curvature, and conformal deformations `ḡ = f^{4/(n−2)} g`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operator_assembly::{assemble, AssemblyMode};
use crate::small;

const MAXD: usize = 4;
pub(crate) type Mat = [[f64; MAXD]; MAXD];
pub(crate) type D1 = [Mat; MAXD];
type D2 = [[Mat; MAXD]; MAXD];

/// Relative SPD threshold on the nodal eigenvalue spread.
pub const SPD_RTOL: f64 = 1e-10;

/// `c_n = (n−2)/(4(n−1))`.
pub fn conformal_coefficient(n: usize) -> f64 {
    (n as f64 - 2.0) / (4.0 * (n as f64 - 1.0))
}

/// One real value per grid node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        ScalarField {
            values: grid.sample(f),
            grid: grid.clone(),
        }
    }

    pub fn constant(grid: &Grid, v: f64) -> Self {
        ScalarField {
            values: vec![v; grid.len()],
            grid: grid.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Seeded random combination of low Fourier modes (wavenumbers ≤ `kmax`).
    pub fn random_smooth(grid: &Grid, seed: u64, kmax: usize) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = grid.dim();
        let terms: Vec<(Vec<f64>, f64, f64)> = (0..8)
            .map(|_| {
                let k = (0..n)
                    .map(|d| {
                        let j = rng.random_range(-(kmax as i64)..=kmax as i64) as f64;
                        2.0 * std::f64::consts::PI * j / grid.lengths[d]
                    })
                    .collect();
                (k, rng.random_range(-1.0..1.0), rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        ScalarField::from_fn(grid, |x| {
            terms
                .iter()
                .map(|(k, a, p)| a * (k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>() + p).cos())
                .sum()
        })
    }
}

/// Symmetric positive definite matrix field `g_{αβ}(x)` on a torus chart.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    grid: Grid,
    /// `n·n` row-major entries per node.
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricJson {
    dim: usize,
    shape: Vec<usize>,
    lengths: Vec<f64>,
    matrices: Vec<Vec<f64>>,
}

/// Nodal geometry shared by the assembly routines.
pub(crate) struct NodeGeometry {
    pub ginv: Mat,
    pub sqrt_det: f64,
}

impl MetricField {
    pub fn new(grid: Grid, data: Vec<f64>) -> Result<Self> {
        let n = grid.dim();
        if !(2..=MAXD).contains(&n) {
            return Err(Error::InvalidMetric(format!("dimension {n} outside 2..=4")));
        }
        if grid.shape.iter().any(|&s| s < 8) {
            return Err(Error::InvalidMetric(format!(
                "grid shape {:?} needs at least 8 nodes per axis",
                grid.shape
            )));
        }
        if data.len() != grid.len() * n * n {
            return Err(Error::GridMismatch(format!(
                "{} metric entries for {} nodes of dimension {n}",
                data.len(),
                grid.len()
            )));
        }
        for (node, m) in data.chunks_exact(n * n).enumerate() {
            check_spd(m, n).map_err(|why| Error::InvalidMetric(format!("node {node}: {why}")))?;
        }
        Ok(MetricField { grid, data })
    }

    /// Samples `g(x)` given as a row-major `n·n` vector.
    pub fn from_fn(grid: &Grid, g: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut data = Vec::with_capacity(grid.len() * grid.dim() * grid.dim());
        for i in 0..grid.len() {
            let m = g(&grid.position(i));
            if m.len() != grid.dim() * grid.dim() {
                return Err(Error::GridMismatch(format!(
                    "metric sample has {} entries, expected {}",
                    m.len(),
                    grid.dim() * grid.dim()
                )));
            }
            data.extend(m);
        }
        MetricField::new(grid.clone(), data)
    }

    pub fn flat(grid: &Grid) -> Self {
        let n = grid.dim();
        MetricField::from_fn(grid, |_| identity(n)).expect("flat metric is valid")
    }

    /// `e^{2φ}·δ`.
    pub fn conformally_flat(grid: &Grid, phi: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let n = grid.dim();
        MetricField::from_fn(grid, |x| {
            let s = (2.0 * phi(x)).exp();
            identity(n).into_iter().map(|v| v * s).collect()
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn node(&self, idx: usize) -> &[f64] {
        let nn = self.dim() * self.dim();
        &self.data[idx * nn..(idx + 1) * nn]
    }

    /// Returns a new field with every node multiplied by `s(x)`.
    pub fn scaled_by(&self, s: &[f64]) -> Result<Self> {
        let nn = self.dim() * self.dim();
        let data = self
            .data
            .chunks_exact(nn)
            .zip(s)
            .flat_map(|(m, &k)| m.iter().map(move |v| v * k))
            .collect();
        MetricField::new(self.grid.clone(), data)
    }

    /// Adds a perturbation field of the same layout.
    pub fn perturbed(&self, h: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let nn = self.dim() * self.dim();
        let mut data = self.data.clone();
        for i in 0..self.grid.len() {
            let d = h(&self.grid.position(i));
            for (a, b) in data[i * nn..(i + 1) * nn].iter_mut().zip(d) {
                *a += b;
            }
        }
        MetricField::new(self.grid.clone(), data)
    }

    pub fn to_json(&self) -> String {
        let nn = self.dim() * self.dim();
        let j = MetricJson {
            dim: self.dim(),
            shape: self.grid.shape.clone(),
            lengths: self.grid.lengths.clone(),
            matrices: self.data.chunks_exact(nn).map(|m| m.to_vec()).collect(),
        };
        serde_json::to_string(&j).expect("metric serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: MetricJson = serde_json::from_str(s)?;
        if j.shape.len() != j.dim {
            return Err(Error::Parse(format!("dim {} but shape {:?}", j.dim, j.shape)));
        }
        let grid = Grid::new(j.shape, j.lengths)?;
        let data = j.matrices.into_iter().flatten().collect();
        MetricField::new(grid, data)
    }

    pub(crate) fn at(&self, idx: usize) -> Mat {
        let n = self.dim();
        let m = self.node(idx);
        let mut out = [[0.0; MAXD]; MAXD];
        for a in 0..n {
            for b in 0..n {
                out[a][b] = m[a * n + b];
            }
        }
        out
    }

    pub(crate) fn geometry(&self, idx: usize) -> NodeGeometry {
        let n = self.dim();
        let (inv, det) = small::spd_inverse_det(self.node(idx), n).expect("checked SPD");
        let mut ginv = [[0.0; MAXD]; MAXD];
        for a in 0..n {
            for b in 0..n {
                ginv[a][b] = inv[a * n + b];
            }
        }
        NodeGeometry {
            ginv,
            sqrt_det: det.sqrt(),
        }
    }

    /// Central first differences `dg[λ][a][b] = ∂_λ g_ab`.
    pub(crate) fn first_derivatives(&self, idx: usize, strides: &[usize]) -> D1 {
        let n = self.dim();
        let mut dg = [[[0.0; MAXD]; MAXD]; MAXD];
        for (l, dl) in dg.iter_mut().enumerate().take(n) {
            let p = self.at(self.grid.shift_with(strides, idx, l, 1));
            let m = self.at(self.grid.shift_with(strides, idx, l, -1));
            let h2 = 2.0 * self.grid.spacing(l);
            for a in 0..n {
                for b in 0..n {
                    dl[a][b] = (p[a][b] - m[a][b]) / h2;
                }
            }
        }
        dg
    }

    /// Compact second differences `ddg[λ][κ][a][b] = ∂_λ∂_κ g_ab`.
    fn second_derivatives(&self, idx: usize, strides: &[usize]) -> D2 {
        let n = self.dim();
        let g0 = self.at(idx);
        let mut ddg = [[[[0.0; MAXD]; MAXD]; MAXD]; MAXD];
        for l in 0..n {
            let hl = self.grid.spacing(l);
            let p = self.at(self.grid.shift_with(strides, idx, l, 1));
            let m = self.at(self.grid.shift_with(strides, idx, l, -1));
            for a in 0..n {
                for b in 0..n {
                    ddg[l][l][a][b] = (p[a][b] - 2.0 * g0[a][b] + m[a][b]) / (hl * hl);
                }
            }
            for k in l + 1..n {
                let hk = self.grid.spacing(k);
                let corner = |sl: isize, sk: isize| {
                    let i = self.grid.shift_with(strides, idx, l, sl);
                    self.at(self.grid.shift_with(strides, i, k, sk))
                };
                let (pp, pm, mp, mm) = (corner(1, 1), corner(1, -1), corner(-1, 1), corner(-1, -1));
                for a in 0..n {
                    for b in 0..n {
                        let v = (pp[a][b] - pm[a][b] - mp[a][b] + mm[a][b]) / (4.0 * hl * hk);
                        ddg[l][k][a][b] = v;
                        ddg[k][l][a][b] = v;
                    }
                }
            }
        }
        ddg
    }
}

fn identity(n: usize) -> Vec<f64> {
    (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect()
}

fn check_spd(m: &[f64], n: usize) -> std::result::Result<(), String> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err("non-finite entry".into());
    }
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for a in 0..n {
        for b in a + 1..n {
            if (m[a * n + b] - m[b * n + a]).abs() > 1e-12 * scale {
                return Err("matrix is not symmetric".into());
            }
        }
    }
    let ev = small::sym_eigenvalues(m, n);
    if !(ev[0] > SPD_RTOL * ev[n - 1]) {
        return Err(format!("eigenvalues {ev:?} are not positive"));
    }
    Ok(())
}

/// Christoffel symbols of the second kind, `Γ^ρ_{μν}`, and the lowered `Γ_{σμν}`.
pub(crate) fn christoffel(n: usize, ginv: &Mat, dg: &D1) -> (D1, D1) {
    let mut low = [[[0.0; MAXD]; MAXD]; MAXD];
    for s in 0..n {
        for m in 0..n {
            for v in 0..n {
                low[s][m][v] = 0.5 * (dg[m][s][v] + dg[v][s][m] - dg[s][m][v]);
            }
        }
    }
    let mut up = [[[0.0; MAXD]; MAXD]; MAXD];
    for r in 0..n {
        for m in 0..n {
            for v in 0..n {
                up[r][m][v] = (0..n).map(|s| ginv[r][s] * low[s][m][v]).sum();
            }
        }
    }
    (up, low)
}

fn scal_from_jet(n: usize, ginv: &Mat, dg: &D1, ddg: &D2) -> f64 {
    let (gam, low) = christoffel(n, ginv, dg);
    // ∂_λ g^{ρσ} = −g^{ρa} ∂_λ g_ab g^{bσ}
    let mut dginv = [[[0.0; MAXD]; MAXD]; MAXD];
    for l in 0..n {
        for r in 0..n {
            for s in 0..n {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc += ginv[r][a] * dg[l][a][b] * ginv[b][s];
                    }
                }
                dginv[l][r][s] = -acc;
            }
        }
    }
    // dgam[λ][ρ][μ][ν] = ∂_λ Γ^ρ_{μν}
    let mut dgam = [[[[0.0; MAXD]; MAXD]; MAXD]; MAXD];
    for l in 0..n {
        for r in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = 0.0;
                    for s in 0..n {
                        let dlow = 0.5 * (ddg[l][m][s][v] + ddg[l][v][s][m] - ddg[l][s][m][v]);
                        acc += dginv[l][r][s] * low[s][m][v] + ginv[r][s] * dlow;
                    }
                    dgam[l][r][m][v] = acc;
                }
            }
        }
    }
    let mut scal = 0.0;
    for m in 0..n {
        for v in 0..n {
            let mut ric = 0.0;
            for r in 0..n {
                ric += dgam[r][r][m][v] - dgam[v][r][m][r];
                for l in 0..n {
                    ric += gam[r][r][l] * gam[l][m][v] - gam[r][v][l] * gam[l][m][r];
                }
            }
            scal += ginv[m][v] * ric;
        }
    }
    scal
}

/// First-order pieces of `√g·Scal = √g·G + ∂_α(√g·w^α)`.
pub(crate) fn weak_terms(n: usize, ginv: &Mat, dg: &D1) -> (f64, [f64; MAXD]) {
    let (gam, _) = christoffel(n, ginv, dg);
    let mut big_g = 0.0;
    for m in 0..n {
        for v in 0..n {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += gam[a][b][m] * gam[b][a][v] - gam[a][m][v] * gam[b][a][b];
                }
            }
            big_g += ginv[m][v] * acc;
        }
    }
    let mut w = [0.0; MAXD];
    for (a, wa) in w.iter_mut().enumerate().take(n) {
        let mut acc = 0.0;
        for m in 0..n {
            for v in 0..n {
                acc += ginv[m][v] * gam[a][m][v];
            }
            for b in 0..n {
                acc -= ginv[a][m] * gam[b][m][b];
            }
        }
        *wa = acc;
    }
    (big_g, w)
}

fn leading_from_jet(n: usize, ginv: &Mat, ddg: &D2) -> f64 {
    let mut acc = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let second = ddg[b][c][a][d] + ddg[a][d][b][c] - ddg[b][d][a][c] - ddg[a][c][b][d];
                    acc += ginv[a][c] * ginv[b][d] * second;
                }
            }
        }
    }
    0.5 * acc
}

/// Nodal scalar curvature from Christoffel symbols and central differences.
pub fn scalar_curvature(g: &MetricField) -> ScalarField {
    let n = g.dim();
    let strides = g.grid.strides();
    let values = (0..g.grid.len())
        .map(|i| {
            let geo = g.geometry(i);
            let dg = g.first_derivatives(i, &strides);
            let ddg = g.second_derivatives(i, &strides);
            scal_from_jet(n, &geo.ginv, &dg, &ddg)
        })
        .collect();
    ScalarField {
        grid: g.grid.clone(),
        values,
    }
}

/// The term of `Scal_g` that is linear in second derivatives of `g`:
/// `½ Σ g^{αγ}g^{βδ}(∂_β∂_γ g_αδ + ∂_α∂_δ g_βγ − ∂_β∂_δ g_αγ − ∂_α∂_γ g_βδ)`.
pub fn scal_leading_term(g: &MetricField) -> ScalarField {
    let n = g.dim();
    let strides = g.grid.strides();
    let values = (0..g.grid.len())
        .map(|i| {
            let geo = g.geometry(i);
            leading_from_jet(n, &geo.ginv, &g.second_derivatives(i, &strides))
        })
        .collect();
    ScalarField {
        grid: g.grid.clone(),
        values,
    }
}

/// Result of the second-derivative linearity probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearityProbe {
    /// Change in `Scal` at the probe node.
    pub scal_change: f64,
    /// Change predicted by the leading second-derivative term.
    pub leading_change: f64,
    /// Change of the first-order remainder `Scal − leading`.
    pub remainder_change: f64,
}

/// Perturbs `g` by the bump `amp·q·Σ_α(1 − cos(2π(x^α − x₀^α)/ℓ_α))`, whose
/// value and central first differences vanish at `node`, and compares the
/// curvature response there with the leading term.
pub fn leading_term_linearity(g: &MetricField, node: usize, q: &[f64], amp: f64) -> Result<LinearityProbe> {
    let n = g.dim();
    if q.len() != n * n {
        return Err(Error::DimensionMismatch(n * n, q.len()));
    }
    let x0 = g.grid.position(node);
    let lengths = g.grid.lengths.clone();
    let bump = move |x: &[f64]| -> f64 {
        (0..x.len())
            .map(|a| 1.0 - (2.0 * std::f64::consts::PI * (x[a] - x0[a]) / lengths[a]).cos())
            .sum()
    };
    let gp = g.perturbed(|x| {
        let b = amp * bump(x);
        (0..n * n)
            .map(|k| 0.5 * (q[k] + q[(k % n) * n + k / n]) * b)
            .collect()
    })?;
    let strides = g.grid.strides();
    let eval = |m: &MetricField| {
        let geo = m.geometry(node);
        let dg = m.first_derivatives(node, &strides);
        let ddg = m.second_derivatives(node, &strides);
        (
            scal_from_jet(n, &geo.ginv, &dg, &ddg),
            leading_from_jet(n, &geo.ginv, &ddg),
        )
    };
    let (s0, l0) = eval(g);
    let (s1, l1) = eval(&gp);
    Ok(LinearityProbe {
        scal_change: s1 - s0,
        leading_change: l1 - l0,
        remainder_change: (s1 - l1) - (s0 - l0),
    })
}

/// `ḡ = f^{4/(n−2)} g` nodewise.
pub fn conformal_deform(g: &MetricField, f: &ScalarField) -> Result<MetricField> {
    let n = g.dim();
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if f.grid != g.grid {
        return Err(Error::GridMismatch("conformal factor lives on another grid".into()));
    }
    if let Some(v) = f.values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidConformalFactor(format!("value {v} is not positive")));
    }
    let p = 4.0 / (n as f64 - 2.0);
    let s: Vec<f64> = f.values.iter().map(|v| v.powf(p)).collect();
    g.scaled_by(&s)
}

/// Max-norm mismatch between `Scal_ḡ` and `(4(n−1)/(n−2)) f^{−(n+2)/(n−2)} L_g f`.
pub fn scal_conformal_residual(g: &MetricField, f: &ScalarField) -> Result<f64> {
    let n = g.dim();
    let gbar = conformal_deform(g, f)?;
    let lhs = scalar_curvature(&gbar);
    let op = assemble(g, conformal_coefficient(n), AssemblyMode::Pointwise)?;
    let lf = op.apply_strong(&f.values);
    let nf = n as f64;
    let k = 4.0 * (nf - 1.0) / (nf - 2.0);
    let e = -(nf + 2.0) / (nf - 2.0);
    Ok(lhs
        .values
        .iter()
        .zip(&f.values)
        .zip(&lf)
        .map(|((s, fv), l)| (s - k * fv.powf(e) * l).abs())
        .fold(0.0, f64::max))
}

/// `sup|g − g′| + sup|∂g − ∂g′|` over nodes, components and directions.
pub fn c1_distance(g: &MetricField, gp: &MetricField) -> Result<f64> {
    if g.grid != gp.grid {
        return Err(Error::GridMismatch("metrics live on different grids".into()));
    }
    let n = g.dim();
    let strides = g.grid.strides();
    let mut sup0 = 0.0f64;
    let mut sup1 = 0.0f64;
    for i in 0..g.grid.len() {
        for (a, b) in g.node(i).iter().zip(gp.node(i)) {
            sup0 = sup0.max((a - b).abs());
        }
        let d = g.first_derivatives(i, &strides);
        let dp = gp.first_derivatives(i, &strides);
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    sup1 = sup1.max((d[l][a][b] - dp[l][a][b]).abs());
                }
            }
        }
    }
    Ok(sup0 + sup1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn conf_flat_oracle(n: usize, phi: f64, dphi: &[f64], ddphi_trace: f64) -> f64 {
        // Scal(e^{2φ}δ) = −e^{−2φ}(2(n−1)Δφ + (n−1)(n−2)|dφ|²)
        let nf = n as f64;
        let grad2: f64 = dphi.iter().map(|v| v * v).sum();
        -(-2.0 * phi).exp() * (2.0 * (nf - 1.0) * ddphi_trace + (nf - 1.0) * (nf - 2.0) * grad2)
    }

    #[test]
    fn flat_and_constant_metrics_have_zero_curvature() {
        let grid = Grid::unit(3, 8);
        assert_eq!(scalar_curvature(&MetricField::flat(&grid)).max_abs(), 0.0);
        let c = MetricField::from_fn(&grid, |_| vec![2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0]).unwrap();
        assert!(scalar_curvature(&c).max_abs() < 1e-12);
    }

    #[test]
    fn conformally_flat_matches_closed_form() {
        let err_at = |m: usize| {
            let grid = Grid::unit(3, m);
            let a = 0.1;
            let w = 2.0 * PI;
            let g = MetricField::conformally_flat(&grid, |x| a * (w * x[0]).cos()).unwrap();
            let s = scalar_curvature(&g);
            (0..grid.len())
                .map(|i| {
                    let x = grid.position(i);
                    let phi = a * (w * x[0]).cos();
                    let d = [-a * w * (w * x[0]).sin(), 0.0, 0.0];
                    let dd = -a * w * w * (w * x[0]).cos();
                    (s.values[i] - conf_flat_oracle(3, phi, &d, dd)).abs()
                })
                .fold(0.0, f64::max)
        };
        // |Scal| peaks near 16 here.
        let (e1, e2) = (err_at(16), err_at(32));
        assert!(e2 < 0.08, "{e2}");
        assert!(e1 / e2 > 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn product_with_surface_factor() {
        // g = e^{2ψ}(dx² + dy²) + dz²: Scal = 2K = −2e^{−2ψ}Δψ.
        let m = 32;
        let grid = Grid::new(vec![m, m, 8], vec![1.0, 1.0, 1.0]).unwrap();
        let psi = |x: &[f64]| 0.1 * (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos();
        let g = MetricField::from_fn(&grid, |x| {
            let e = (2.0 * psi(x)).exp();
            vec![e, 0.0, 0.0, 0.0, e, 0.0, 0.0, 0.0, 1.0]
        })
        .unwrap();
        let s = scalar_curvature(&g);
        let err = (0..grid.len())
            .map(|i| {
                let x = grid.position(i);
                let lap = -8.0 * PI * PI * psi(&x);
                (s.values[i] + 2.0 * (-2.0 * psi(&x)).exp() * lap).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 0.08, "{err}");
    }

    #[test]
    fn second_derivatives_enter_linearly() {
        let grid = Grid::unit(3, 12);
        let g = MetricField::from_fn(&grid, |x| {
            let s = 1.0 + 0.2 * (2.0 * PI * x[0]).sin();
            let t = 0.1 * (2.0 * PI * x[1]).cos();
            vec![s, t, 0.0, t, 1.2, 0.05, 0.0, 0.05, 1.0 / s]
        })
        .unwrap();
        let q = [0.3, 0.1, -0.2, 0.1, -0.4, 0.05, -0.2, 0.05, 0.25];
        for node in [0, 17, 500] {
            let p = leading_term_linearity(&g, node, &q, 1e-3).unwrap();
            assert!(p.scal_change.abs() > 1e-3);
            assert!(p.remainder_change.abs() < 1e-10 * p.scal_change.abs().max(1.0), "{p:?}");
        }
    }

    #[test]
    fn deform_rules() {
        let grid = Grid::unit(3, 8);
        let g = MetricField::flat(&grid);
        let one = ScalarField::constant(&grid, 1.0);
        assert_eq!(conformal_deform(&g, &one).unwrap(), g);
        let f = ScalarField::from_fn(&grid, |x| (2.0 * PI * x[0]).cos().exp());
        let d = conformal_deform(&g, &f).unwrap();
        for i in 0..grid.len() {
            assert!((d.node(i)[0] - f.values[i].powi(4)).abs() < 1e-12 * d.node(i)[0]);
        }
        let bad = ScalarField::constant(&grid, -1.0);
        assert!(matches!(conformal_deform(&g, &bad), Err(Error::InvalidConformalFactor(_))));
        let g2 = MetricField::flat(&Grid::unit(2, 8));
        let f2 = ScalarField::constant(&Grid::unit(2, 8), 1.0);
        assert!(matches!(conformal_deform(&g2, &f2), Err(Error::UnsupportedDimension(2))));
    }

    #[test]
    fn scal_law_for_trivial_factors() {
        let grid = Grid::unit(3, 8);
        let g = MetricField::conformally_flat(&grid, |x| 0.1 * (2.0 * PI * x[2]).sin()).unwrap();
        let one = ScalarField::constant(&grid, 1.0);
        assert!(scal_conformal_residual(&g, &one).unwrap() < 1e-9);
        let flat = MetricField::flat(&grid);
        let k = ScalarField::constant(&grid, 1.7);
        assert!(scal_conformal_residual(&flat, &k).unwrap() <= 1e-10);
    }

    #[test]
    fn c1_examples() {
        let grid = Grid::unit(3, 32);
        let g = MetricField::flat(&grid);
        assert_eq!(c1_distance(&g, &g).unwrap(), 0.0);
        let e = 1e-3;
        let shifted = g.perturbed(|_| identity(3).into_iter().map(|v| v * e).collect()).unwrap();
        assert!((c1_distance(&g, &shifted).unwrap() - e).abs() < 1e-15);
        let wavy = g
            .perturbed(|x| {
                let s = e * (2.0 * PI * x[0]).cos();
                identity(3).into_iter().map(|v| v * s).collect()
            })
            .unwrap();
        let d = c1_distance(&g, &wavy).unwrap();
        assert!((d - e * (1.0 + 2.0 * PI)).abs() < 0.01 * e * (1.0 + 2.0 * PI), "{d}");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let grid = Grid::new(vec![8, 9, 10], vec![1.0, 0.7, 1.3]).unwrap();
        let g = MetricField::conformally_flat(&grid, |x| 0.3 * (x[0] * 7.1).sin() + x[1] / 3.0).unwrap();
        let back = MetricField::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(MetricField::from_json(r#"{"dim":3,"shape":[8,8,8],"lengths":[1,1,1],"matrices":[],"x":1}"#).is_err());
    }

    #[test]
    fn rejects_invalid_nodes() {
        let grid = Grid::unit(2, 8);
        assert!(matches!(
            MetricField::from_fn(&grid, |_| vec![1.0, 2.0, 2.0, 1.0]),
            Err(Error::InvalidMetric(_))
        ));
        assert!(matches!(
            MetricField::new(Grid::unit(2, 4), vec![1.0, 0.0, 0.0, 1.0].repeat(16)),
            Err(Error::InvalidMetric(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn constant_metric_is_flat(a in 0.5f64..2.0, b in 0.5f64..2.0, s in -0.3f64..0.3) {
                let grid = Grid::unit(2, 8);
                let g = MetricField::from_fn(&grid, |_| vec![a, s, s, b]).unwrap();
                prop_assert!(scalar_curvature(&g).max_abs() < 1e-10);
            }

            #[test]
            fn deformations_compose(k1 in -0.3f64..0.3, k2 in -0.3f64..0.3) {
                let grid = Grid::unit(3, 8);
                let g = MetricField::conformally_flat(&grid, |x| 0.1 * (2.0 * PI * x[1]).cos()).unwrap();
                let f1 = ScalarField::from_fn(&grid, |x| (k1 * (2.0 * PI * x[0]).cos()).exp());
                let f2 = ScalarField::from_fn(&grid, |x| (k2 * (2.0 * PI * x[2]).sin()).exp());
                let f12 = ScalarField::new(grid.clone(), f1.values.iter().zip(&f2.values).map(|(a, b)| a * b).collect()).unwrap();
                let twice = conformal_deform(&conformal_deform(&g, &f1).unwrap(), &f2).unwrap();
                let once = conformal_deform(&g, &f12).unwrap();
                for (a, b) in twice.data().iter().zip(once.data()) {
                    prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(b.abs()));
                }
            }

            #[test]
            fn curvature_commutes_with_axis_swap(a in 0.05f64..0.2) {
                let grid = Grid::unit(3, 8);
                let phi = move |x: &[f64]| a * (2.0 * PI * x[0]).cos() + 0.5 * a * (2.0 * PI * x[1]).sin();
                let g = MetricField::conformally_flat(&grid, phi).unwrap();
                let swapped = MetricField::conformally_flat(&grid, move |x| phi(&[x[1], x[0], x[2]])).unwrap();
                let s = scalar_curvature(&g);
                let t = scalar_curvature(&swapped);
                for i in 0..grid.len() {
                    let c = grid.coords(i);
                    let j = (c[1] * 8 + c[0]) * 8 + c[2];
                    prop_assert!((s.values[i] - t.values[j]).abs() < 1e-10);
                }
            }
        }
    }
}
