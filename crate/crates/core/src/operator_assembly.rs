//! Symmetric discrete forms for `L_g = Δ_g + c·Scal_g` on a periodic grid.
//!
//! The stiffness form averages `grad_σᵀ W grad_σ` over the `2ⁿ` one-sided
//! difference orientations σ, with nodal weights `W = g^{αβ}√det g·|cell|`.
//! The potential form is either pointwise (`c·Scal·√det g·|cell|`) or the
//! weak form obtained after moving one derivative of `Scal` onto the test
//! functions, which only needs first differences of `g`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::metric_field::{
    conformal_coefficient, conformal_deform, scalar_curvature, weak_terms, MetricField, ScalarField,
};
use crate::sparse::{CsrMatrix, Layout, RowBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssemblyMode {
    #[serde(rename = "pointwise-Scal")]
    Pointwise,
    #[serde(rename = "weak-form")]
    Weak,
    /// One-dimensional reduction built elsewhere.
    #[serde(rename = "sturm-liouville")]
    SturmLiouville,
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    stiffness: CsrMatrix,
    potential: CsrMatrix,
    total: CsrMatrix,
    mass: Vec<f64>,
    c: f64,
    mode: AssemblyMode,
    layout: Layout,
    spacing: f64,
}

impl DiscreteOperator {
    /// Wraps externally assembled forms after checking the structural invariants.
    pub fn from_parts(
        stiffness: CsrMatrix,
        potential: CsrMatrix,
        mass: Vec<f64>,
        c: f64,
        mode: AssemblyMode,
        layout: Layout,
        spacing: f64,
    ) -> Result<Self> {
        let n = mass.len();
        if stiffness.n() != n || potential.n() != n {
            return Err(Error::DimensionMismatch(n, stiffness.n().max(potential.n())));
        }
        if let Some(m) = mass.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidMetric(format!("mass entry {m} is not positive")));
        }
        for (name, a) in [("stiffness", &stiffness), ("potential", &potential)] {
            let asym = a.asymmetry();
            if asym > 1e-13 * a.max_abs().max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidMetric(format!("{name} form asymmetric by {asym:e}")));
            }
        }
        let total = stiffness.add_scaled(1.0, &potential);
        Ok(DiscreteOperator {
            stiffness,
            potential,
            total,
            mass,
            c,
            mode,
            layout,
            spacing,
        })
    }

    pub fn n(&self) -> usize {
        self.mass.len()
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn potential(&self) -> &CsrMatrix {
        &self.potential
    }

    /// `S + P`.
    pub fn total(&self) -> &CsrMatrix {
        &self.total
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mode(&self) -> AssemblyMode {
        self.mode
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Largest grid spacing, used for discretization slack estimates.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// `(S + P)u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.total.matvec(u)
    }

    /// Strong form `M⁻¹(S + P)u`.
    pub fn apply_strong(&self, u: &[f64]) -> Vec<f64> {
        let mut y = self.total.matvec(u);
        for (y, m) in y.iter_mut().zip(&self.mass) {
            *y /= m;
        }
        y
    }

    pub fn mass_norm_sq(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.mass).map(|(u, m)| m * u * u).sum()
    }

    /// `uᵀ(S + P)u / uᵀMu`.
    pub fn rayleigh(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch(self.n(), u.len()));
        }
        let m = self.mass_norm_sq(u);
        if m == 0.0 || !m.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.total.quad(u) / m)
    }

    /// Coordinate-list export of `S + P` followed by the mass diagonal.
    pub fn to_coo_text(&self) -> (String, String) {
        (
            self.total.to_coo_text(),
            CsrMatrix::diagonal(&self.mass).to_coo_text(),
        )
    }
}

/// Accumulates couplings at offsets in `{-1,0,1}ⁿ` per row.
struct StencilAccumulator<'a> {
    grid: &'a Grid,
    strides: Vec<usize>,
    width: usize,
    vals: Vec<f64>,
}

impl<'a> StencilAccumulator<'a> {
    fn new(grid: &'a Grid) -> Self {
        let width = 3usize.pow(grid.dim() as u32);
        StencilAccumulator {
            grid,
            strides: grid.strides(),
            width,
            vals: vec![0.0; grid.len() * width],
        }
    }

    fn code(offset: &[i8]) -> usize {
        offset.iter().rev().fold(0, |acc, &o| acc * 3 + (o + 1) as usize)
    }

    fn target(&self, idx: usize, offset: &[i8]) -> usize {
        offset.iter().enumerate().fold(idx, |i, (d, &o)| {
            if o == 0 {
                i
            } else {
                self.grid.shift_with(&self.strides, i, d, o as isize)
            }
        })
    }

    /// Adds `v` at (idx + from, idx + to).
    fn add(&mut self, idx: usize, from: &[i8], to: &[i8], v: f64) {
        let row = self.target(idx, from);
        let rel: Vec<i8> = from.iter().zip(to).map(|(a, b)| b - a).collect();
        debug_assert!(rel.iter().all(|r| r.abs() <= 1));
        self.vals[row * self.width + Self::code(&rel)] += v;
    }

    fn finish(self) -> CsrMatrix {
        let n = self.grid.len();
        let dim = self.grid.dim();
        let offsets: Vec<Vec<i8>> = (0..self.width)
            .map(|mut c| {
                (0..dim)
                    .map(|_| {
                        let o = (c % 3) as i8 - 1;
                        c /= 3;
                        o
                    })
                    .collect()
            })
            .collect();
        let mut b = RowBuilder::new(n);
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(self.width);
        for i in 0..n {
            row.clear();
            for (k, off) in offsets.iter().enumerate() {
                let v = self.vals[i * self.width + k];
                if v != 0.0 {
                    row.push((self.target(i, off), v));
                }
            }
            row.sort_by_key(|e| e.0);
            b.push_row(row.iter().copied());
        }
        b.finish()
    }
}

fn assemble_stiffness(g: &MetricField) -> (CsrMatrix, Vec<f64>) {
    let grid = g.grid();
    let n = grid.dim();
    let h = grid.spacings();
    let cell = grid.cell_volume();
    let norient = 1usize << n;
    let mut acc = StencilAccumulator::new(grid);
    let mut mass = Vec::with_capacity(grid.len());
    let zero = [0i8; 4];
    let mut unit = [[0i8; 4]; 4];
    for (d, u) in unit.iter_mut().enumerate().take(n) {
        u[d] = 1;
    }
    for idx in 0..grid.len() {
        let geo = g.geometry(idx);
        mass.push(geo.sqrt_det * cell);
        let scale = geo.sqrt_det * cell / norient as f64;
        for sigma in 0..norient {
            let sign = |d: usize| if sigma >> d & 1 == 1 { -1i8 } else { 1i8 };
            for a in 0..n {
                let pa: Vec<i8> = unit[a][..n].iter().map(|&e| e * sign(a)).collect();
                for b in 0..n {
                    let w = geo.ginv[a][b];
                    if w == 0.0 {
                        continue;
                    }
                    let pb: Vec<i8> = unit[b][..n].iter().map(|&e| e * sign(b)).collect();
                    let k = scale * w * (sign(a) * sign(b)) as f64 / (h[a] * h[b]);
                    acc.add(idx, &pa, &pb, k);
                    acc.add(idx, &pa, &zero[..n], -k);
                    acc.add(idx, &zero[..n], &pb, -k);
                    acc.add(idx, &zero[..n], &zero[..n], k);
                }
            }
        }
    }
    (acc.finish(), mass)
}

fn assemble_weak_potential(g: &MetricField, c: f64) -> CsrMatrix {
    let grid = g.grid();
    let n = grid.dim();
    let h = grid.spacings();
    let cell = grid.cell_volume();
    let strides = grid.strides();
    let mut acc = StencilAccumulator::new(grid);
    let zero = [0i8; 4];
    for idx in 0..grid.len() {
        let geo = g.geometry(idx);
        let dg = g.first_derivatives(idx, &strides);
        let (big_g, w) = weak_terms(n, &geo.ginv, &dg);
        acc.add(idx, &zero[..n], &zero[..n], c * geo.sqrt_det * big_g * cell);
        for a in 0..n {
            let k = c * geo.sqrt_det * w[a] * cell / (2.0 * h[a]);
            for s in [1i8, -1] {
                let mut e = [0i8; 4];
                e[a] = s;
                // −k·s·(u_x v_{x+se} + v_x u_{x+se})
                acc.add(idx, &zero[..n], &e[..n], -k * s as f64);
                acc.add(idx, &e[..n], &zero[..n], -k * s as f64);
            }
        }
    }
    acc.finish()
}

/// Discretizes `Δ_g + c·Scal_g` on the metric's grid.
pub fn assemble(g: &MetricField, c: f64, mode: AssemblyMode) -> Result<DiscreteOperator> {
    if !c.is_finite() {
        return Err(Error::Coefficient {
            got: c,
            why: "coefficient must be finite".into(),
        });
    }
    let (stiffness, mass) = assemble_stiffness(g);
    let n = mass.len();
    let potential = match mode {
        _ if c == 0.0 => CsrMatrix::zeros(n),
        AssemblyMode::Pointwise => {
            let scal = scalar_curvature(g);
            let d: Vec<f64> = scal.values.iter().zip(&mass).map(|(s, m)| c * s * m).collect();
            CsrMatrix::diagonal(&d)
        }
        AssemblyMode::Weak => assemble_weak_potential(g, c),
        AssemblyMode::SturmLiouville => {
            return Err(Error::Precondition(
                "Sturm–Liouville operators come from the profile reduction".into(),
            ))
        }
    };
    DiscreteOperator::from_parts(
        stiffness,
        potential,
        mass,
        c,
        mode,
        g.grid().layout(),
        g.grid().max_spacing(),
    )
}

/// Shift `k = |min Scal| + 1` making `L_g + k` positive for `0 ≤ c ≤ 1`.
pub fn positivity_shift(scal: &ScalarField) -> f64 {
    scal.min().abs() + 1.0
}

fn check_conformal_inputs(g: &MetricField, f: &ScalarField) -> Result<()> {
    if g.dim() < 3 {
        return Err(Error::UnsupportedDimension(g.dim()));
    }
    if f.grid != *g.grid() {
        return Err(Error::GridMismatch("conformal factor lives on another grid".into()));
    }
    Ok(())
}

/// Relative mismatch of `L_ḡu` and `f^{−(n+2)/(n−2)} L_g(fu)` in the mass norm of `ḡ`.
pub fn conformal_covariance_residual(g: &MetricField, f: &ScalarField, u: &ScalarField, c: f64) -> Result<f64> {
    check_conformal_inputs(g, f)?;
    let n = g.dim();
    let cn = conformal_coefficient(n);
    if (c - cn).abs() > 1e-14 * cn {
        return Err(Error::Coefficient {
            got: c,
            why: format!("conformal covariance needs c = c_n = {cn}"),
        });
    }
    if u.grid != *g.grid() {
        return Err(Error::GridMismatch("test function lives on another grid".into()));
    }
    let gbar = conformal_deform(g, f)?;
    let op_bar = assemble(&gbar, cn, AssemblyMode::Pointwise)?;
    let op = assemble(g, cn, AssemblyMode::Pointwise)?;
    let lhs = op_bar.apply_strong(&u.values);
    let fu: Vec<f64> = f.values.iter().zip(&u.values).map(|(f, u)| f * u).collect();
    let nf = n as f64;
    let e = -(nf + 2.0) / (nf - 2.0);
    let rhs: Vec<f64> = op
        .apply_strong(&fu)
        .iter()
        .zip(&f.values)
        .map(|(l, f)| f.powf(e) * l)
        .collect();
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let den = op_bar.mass_norm_sq(&lhs);
    if den == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((op_bar.mass_norm_sq(&diff) / den).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubcriticalCheck {
    /// `|lhs − rhs| / |lhs|`.
    pub residual: f64,
    /// Nodal minimum of `(c/c_n)(1 − c/c_n)|df|² + c·Scal_g·f²`.
    pub bracket_min: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `∫u(Δ_ḡ + c·Scal_ḡ)u dV_ḡ = ∫|f du + (c/c_n)u df|² + [(c/c_n)(1−c/c_n)|df|²
/// + c·Scal_g f²]u² dV_g` for `ḡ = f^{4/(n−2)}g`, `f = e^{tl}`.
pub fn subcritical_identity_residual(
    g: &MetricField,
    l: &ScalarField,
    t: f64,
    c: f64,
    u: &ScalarField,
) -> Result<SubcriticalCheck> {
    let f = ScalarField::new(l.grid.clone(), l.values.iter().map(|v| (t * v).exp()).collect())?;
    check_conformal_inputs(g, &f)?;
    let n = g.dim();
    let cn = conformal_coefficient(n);
    if !(c > 0.0 && c < cn) {
        return Err(Error::Coefficient {
            got: c,
            why: format!("identity needs 0 < c < c_n = {cn}"),
        });
    }
    if u.grid != *g.grid() {
        return Err(Error::GridMismatch("test function lives on another grid".into()));
    }
    let gbar = conformal_deform(g, &f)?;
    let lhs = assemble(&gbar, c, AssemblyMode::Pointwise)?.total().quad(&u.values);

    let grid = g.grid();
    let h = grid.spacings();
    let cell = grid.cell_volume();
    let strides = grid.strides();
    let scal = scalar_curvature(g);
    let k = c / cn;
    let norient = 1usize << n;
    let mut rhs = 0.0;
    let mut bracket_min = f64::INFINITY;
    for idx in 0..grid.len() {
        let geo = g.geometry(idx);
        let (fx, ux) = (f.values[idx], u.values[idx]);
        let mut sq = 0.0;
        let mut df2 = 0.0;
        for sigma in 0..norient {
            let mut v = [0.0; 4];
            let mut df = [0.0; 4];
            for d in 0..n {
                let s = if sigma >> d & 1 == 1 { -1isize } else { 1 };
                let j = grid.shift_with(&strides, idx, d, s);
                let du = s as f64 * (u.values[j] - ux) / h[d];
                let dfd = s as f64 * (f.values[j] - fx) / h[d];
                v[d] = fx * du + k * ux * dfd;
                df[d] = dfd;
            }
            for a in 0..n {
                for b in 0..n {
                    sq += geo.ginv[a][b] * v[a] * v[b];
                    df2 += geo.ginv[a][b] * df[a] * df[b];
                }
            }
        }
        sq /= norient as f64;
        df2 /= norient as f64;
        let bracket = k * (1.0 - k) * df2 + c * scal.values[idx] * fx * fx;
        bracket_min = bracket_min.min(bracket);
        rhs += (sq + bracket * ux * ux) * geo.sqrt_det * cell;
    }
    if lhs == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(SubcriticalCheck {
        residual: (lhs - rhs).abs() / lhs.abs(),
        bracket_min,
        lhs,
        rhs,
    })
}
