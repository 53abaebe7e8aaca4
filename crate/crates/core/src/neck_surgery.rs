//! Rotationally symmetric dumbbells `dt² + φ(t)² g_{S^{n−1}}`: two round caps
//! joined through a thin neck, reduced to a Sturm–Liouville problem on the
//! invariant functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigensolver::{cheeger_sweep, lemma36_check, solve_lowest, CheegerEstimate, MassLocalization};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::metric_field::ScalarField;
use crate::operator_assembly::{AssemblyMode, DiscreteOperator};
use crate::sparse::{CsrMatrix, Layout};

pub const MIN_SAMPLES: usize = 512;
/// Default resolution of the sweep.
pub const SWEEP_SAMPLES: usize = 8192;
const SWEEP_TOL: f64 = 1e-9;
/// The neck deformation is switched off between these warp values.
const BLEND_LO: f64 = 0.5;
const BLEND_HI: f64 = 0.9;

/// Samples of a warp function on `[0, T]` at the cell centres `(i + ½)h`,
/// with `φ` also kept at the interfaces `jh`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckProfile {
    pub dim: usize,
    pub length: f64,
    /// Smallest warp over the middle third.
    pub neck_radius: f64,
    /// Exponent `p` of the `(r/φ)^p` neck deformation, zero when not a dumbbell.
    pub exponent: f64,
    /// Both ends are smooth poles.
    pub closed: bool,
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub ddphi: Vec<f64>,
    pub phi_face: Vec<f64>,
}

impl NeckProfile {
    /// Samples `f(t) = (φ, φ′, φ″)`. With `closed`, `φ` must vanish at both ends.
    pub fn from_fn(
        dim: usize,
        length: f64,
        samples: usize,
        closed: bool,
        f: impl Fn(f64) -> (f64, f64, f64),
    ) -> Result<Self> {
        if dim < 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if samples < 3 {
            return Err(Error::Precondition(format!("{samples} samples are too few")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidProfile(format!("length {length}")));
        }
        let h = length / samples as f64;
        let mut t = Vec::with_capacity(samples);
        let (mut phi, mut dphi, mut ddphi) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..samples {
            let ti = (i as f64 + 0.5) * h;
            let (a, b, c) = f(ti);
            t.push(ti);
            phi.push(a);
            dphi.push(b);
            ddphi.push(c);
        }
        let phi_face: Vec<f64> = (0..=samples).map(|j| f(j as f64 * h).0).collect();
        build(dim, length, closed, 0.0, t, phi, dphi, ddphi, phi_face)
    }

    /// Round unit `Sⁿ`, `φ = sin t` on `[0, π]`.
    pub fn round_sphere(dim: usize, samples: usize) -> Result<Self> {
        Self::from_fn(dim, PI, samples, true, |t| (t.sin(), t.cos(), -t.sin()))
    }

    pub fn samples(&self) -> usize {
        self.phi.len()
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.samples() as f64
    }

    pub fn center(&self) -> f64 {
        0.5 * self.length
    }

    /// Distance of sample `i` from the central sphere.
    pub fn distance(&self, i: usize) -> f64 {
        (self.t[i] - self.center()).abs()
    }

    /// One-dimensional container grid for nodal fields.
    pub fn grid(&self) -> Grid {
        Grid::new(vec![self.samples()], vec![self.length]).expect("profile grid")
    }

    /// Cell volumes `|S^{n−1}| φ^{n−1} h`.
    pub fn volumes(&self) -> Vec<f64> {
        let (w, h) = (sphere_area(self.dim - 1), self.spacing());
        self.phi.iter().map(|p| w * p.powi(self.dim as i32 - 1) * h).collect()
    }

    /// Areas of the interior interfaces, `N − 1` entries.
    pub fn areas(&self) -> Vec<f64> {
        let w = sphere_area(self.dim - 1);
        let n = self.samples();
        self.phi_face[1..n].iter().map(|p| w * p.powi(self.dim as i32 - 1)).collect()
    }

    pub fn volume(&self) -> f64 {
        self.volumes().iter().sum()
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    dim: usize,
    length: f64,
    closed: bool,
    exponent: f64,
    t: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    ddphi: Vec<f64>,
    mut phi_face: Vec<f64>,
) -> Result<NeckProfile> {
    let n = phi.len();
    if let Some(i) = phi.iter().position(|p| !(*p > 0.0 && p.is_finite())) {
        return Err(Error::SingularProfile(format!("warp {} at t = {}", phi[i], t[i])));
    }
    if dphi.iter().chain(&ddphi).any(|v| !v.is_finite()) {
        return Err(Error::InvalidProfile("non-finite derivative".into()));
    }
    if let Some(j) = (1..n).find(|&j| !(phi_face[j] > 0.0 && phi_face[j].is_finite())) {
        return Err(Error::SingularProfile(format!("warp vanishes at interface {j}")));
    }
    let scale = phi.iter().fold(0.0, |m: f64, p| m.max(*p));
    if closed {
        for j in [0, n] {
            if phi_face[j].abs() > 1e-12 * scale {
                return Err(Error::InvalidProfile(format!("warp {} at a pole", phi_face[j])));
            }
            phi_face[j] = 0.0;
        }
    }
    let neck_radius = phi[n / 3..n - n / 3].iter().fold(f64::INFINITY, |m, p| m.min(*p));
    Ok(NeckProfile {
        dim,
        length,
        neck_radius,
        exponent,
        closed,
        t,
        phi,
        dphi,
        ddphi,
        phi_face,
    })
}

/// `|Sᵐ|`.
pub fn sphere_area(m: usize) -> f64 {
    2.0 * PI.powf((m + 1) as f64 / 2.0) / gamma_half(m + 1)
}

/// `Γ(k/2)`.
fn gamma_half(k: usize) -> f64 {
    let (mut x, mut g) = if k % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while x < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

fn smoothstep(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        (0.0, 0.0)
    } else if x >= 1.0 {
        (1.0, 0.0)
    } else {
        (x * x * x * (10.0 - 15.0 * x + 6.0 * x * x), 30.0 * x * x * (1.0 - x) * (1.0 - x))
    }
}

/// `φ′² = F(φ) = (1 − φ²)(1 − s)` on the neck side, `s = (r/φ)^p β(φ)`;
/// returns `F′(φ)/2 = φ″`.
struct NeckLaw {
    r: f64,
    p: f64,
}

impl NeckLaw {
    fn s(&self, phi: f64) -> (f64, f64) {
        let w = BLEND_HI - BLEND_LO;
        let (b, db) = smoothstep((phi - BLEND_LO) / w);
        let (beta, dbeta) = (1.0 - b, -db / w);
        let q = (self.r / phi).powf(self.p);
        (q * beta, q * (dbeta - self.p * beta / phi))
    }

    fn accel(&self, phi: f64) -> f64 {
        let (s, ds) = self.s(phi);
        0.5 * (-2.0 * phi * (1.0 - s) - (1.0 - phi * phi) * ds)
    }

    fn rk4(&self, (phi, v): (f64, f64), dt: f64) -> (f64, f64) {
        let k1 = (v, self.accel(phi));
        let k2 = (v + 0.5 * dt * k1.1, self.accel(phi + 0.5 * dt * k1.0));
        let k3 = (v + 0.5 * dt * k2.1, self.accel(phi + 0.5 * dt * k2.0));
        let k4 = (v + dt * k3.1, self.accel(phi + dt * k3.0));
        (
            phi + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            v + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    }

    fn advance(&self, mut y: (f64, f64), span: f64, max_step: f64) -> (f64, f64) {
        if span <= 0.0 {
            return y;
        }
        let steps = (span / max_step).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        for _ in 0..steps {
            y = self.rk4(y, dt);
        }
        y
    }
}

/// Two unit caps joined by a neck of radius `r` in the middle of `[0, T]`.
///
/// Each half is `sin t` until `φ` drops below 0.9 on the neck side, then
/// follows `φ′² = (1 − φ²)(1 − (r/φ)^p β(φ))` with `p = 3(n−2)/4`, which
/// reaches its minimum `r` with positive scalar curvature on the neck.
/// `T` is fixed by `r`; the second half mirrors the first.
pub fn make_dumbbell(n: usize, r: f64, samples: usize) -> Result<NeckProfile> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(r > 0.0 && r < BLEND_LO) {
        return Err(Error::InvalidProfile(format!("neck radius {r} outside (0, {BLEND_LO})")));
    }
    if samples < MIN_SAMPLES || samples % 2 != 0 {
        return Err(Error::Precondition(format!(
            "need an even sample count of at least {MIN_SAMPLES}, got {samples}"
        )));
    }
    let law = NeckLaw {
        r,
        p: 0.75 * (n as f64 - 2.0),
    };
    let t1 = PI - BLEND_HI.asin();
    let start = (BLEND_HI, t1.cos());
    let step = (r / 400.0).min(1e-3);

    // march to the turning point, then polish it with Newton steps on φ′
    let (mut t, mut y) = (t1, start);
    let limit = (20.0 / step) as usize;
    let mut it = 0;
    loop {
        let next = law.rk4(y, step);
        if next.1 >= 0.0 {
            break;
        }
        y = next;
        t += step;
        it += 1;
        if it > limit {
            return Err(Error::InvalidProfile("neck never closes".into()));
        }
    }
    for _ in 0..6 {
        let tau = -y.1 / law.accel(y.0);
        y = law.rk4(y, tau);
        t += tau;
    }
    let length = 2.0 * t;
    let h = length / samples as f64;

    // half-grid values on [0, T/2]
    let half = samples;
    let mut vals = Vec::with_capacity(half + 1);
    let (mut tc, mut yc) = (t1, start);
    for k in 0..=half {
        let tk = k as f64 * 0.5 * h;
        if tk <= t1 {
            vals.push((tk.sin(), tk.cos(), -tk.sin()));
        } else {
            yc = law.advance(yc, tk - tc, step);
            tc = tk;
            vals.push((yc.0, yc.1, law.accel(yc.0)));
        }
    }
    let mut ts = Vec::with_capacity(samples);
    let (mut phi, mut dphi, mut ddphi) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..samples {
        let (k, sign) = if i < samples / 2 {
            (2 * i + 1, 1.0)
        } else {
            (2 * (samples - 1 - i) + 1, -1.0)
        };
        let (a, b, c) = vals[k];
        ts.push((i as f64 + 0.5) * h);
        phi.push(a);
        dphi.push(sign * b);
        ddphi.push(c);
    }
    let phi_face = (0..=samples)
        .map(|j| vals[2 * j.min(samples - j)].0)
        .collect();
    let mut p = build(n, length, true, law.p, ts, phi, dphi, ddphi, phi_face)?;
    p.neck_radius = r;
    Ok(p)
}

/// Scalar curvature of `dt² + φ² g_F` for a fiber of constant sectional curvature `K`:
/// `−2(n−1)φ″/φ + (n−1)(n−2)(K − φ′²)/φ²`.
pub fn warped_scal_with_fiber(p: &NeckProfile, fiber_curvature: f64) -> Result<ScalarField> {
    let m = (p.dim - 1) as f64;
    let mut values = Vec::with_capacity(p.samples());
    for i in 0..p.samples() {
        let (f, df, ddf) = (p.phi[i], p.dphi[i], p.ddphi[i]);
        let s = -2.0 * m * ddf / f + m * (m - 1.0) * (fiber_curvature - df * df) / (f * f);
        if !(f > 0.0) || !s.is_finite() {
            return Err(Error::SingularProfile(format!("curvature blows up at t = {}", p.t[i])));
        }
        values.push(s);
    }
    ScalarField::new(p.grid(), values)
}

/// Scalar curvature of the warped product over round spheres.
pub fn warped_scal(p: &NeckProfile) -> Result<ScalarField> {
    warped_scal_with_fiber(p, 1.0)
}

/// Finite-volume form of `−φ^{1−n}(φ^{n−1}u′)′ + c·Scal·u` with mass `|S^{n−1}|φ^{n−1}h`.
/// Vanishing pole weights leave no flux through the ends.
pub fn reduce_to_sturm_liouville(p: &NeckProfile, c: f64) -> Result<DiscreteOperator> {
    if !c.is_finite() {
        return Err(Error::Coefficient {
            got: c,
            why: "coefficient must be finite".into(),
        });
    }
    let scal = warped_scal(p)?;
    let mass = p.volumes();
    let h = p.spacing();
    let n = p.samples();
    let mut trip = Vec::with_capacity(4 * n);
    for (j, a) in p.areas().iter().enumerate() {
        let k = a / h;
        let (l, r) = (j, j + 1);
        trip.extend([(l, l, k), (r, r, k), (l, r, -k), (r, l, -k)]);
    }
    let stiffness = CsrMatrix::from_triplets(n, trip);
    let potential = if c == 0.0 {
        CsrMatrix::zeros(n)
    } else {
        let d: Vec<f64> = scal.values.iter().zip(&mass).map(|(s, m)| c * s * m).collect();
        CsrMatrix::diagonal(&d)
    };
    DiscreteOperator::from_parts(
        stiffness,
        potential,
        mass,
        c,
        AssemblyMode::SturmLiouville,
        Layout::Grid {
            shape: vec![n],
            periodic: vec![false],
        },
        h,
    )
}

/// Rotationally symmetric Cheeger estimate: sweep over the coordinate spheres.
pub fn profile_cheeger(p: &NeckProfile) -> Result<CheegerEstimate> {
    cheeger_sweep(&p.volumes(), &p.areas())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub field: ScalarField,
    pub radius: f64,
    /// Largest of the nodal `|χ′|` and the difference quotients between nodes.
    pub max_slope: f64,
    pub vanishes_inside: bool,
    pub one_outside: bool,
    pub in_unit_interval: bool,
}

impl Cutoff {
    pub fn slope_ok(&self) -> bool {
        self.max_slope <= 2.0 / self.radius
    }

    pub fn holds(&self) -> bool {
        self.vanishes_inside && self.one_outside && self.in_unit_interval && self.slope_ok()
    }
}

/// `χ_r` as a quintic ramp in the distance `d` to the central sphere:
/// 0 for `d ≤ r`, 1 for `d ≥ 2r`, slope at most `15/(8r)`.
pub fn cutoff_chi(p: &NeckProfile, r: f64) -> Result<Cutoff> {
    let h = p.spacing();
    if !(r >= 2.0 * h) || 2.0 * r > p.center() {
        return Err(Error::OutOfRange(format!(
            "cut-off radius {r} needs 2h = {} <= r and 2r <= {}",
            2.0 * h,
            p.center()
        )));
    }
    let n = p.samples();
    let mut values = Vec::with_capacity(n);
    let mut max_slope: f64 = 0.0;
    for i in 0..n {
        let (v, dv) = smoothstep((p.distance(i) - r) / r);
        values.push(v);
        max_slope = max_slope.max(dv / r);
    }
    for w in values.windows(2) {
        max_slope = max_slope.max((w[1] - w[0]).abs() / h);
    }
    let mut vanishes_inside = true;
    let mut one_outside = true;
    for (i, v) in values.iter().enumerate() {
        let d = p.distance(i);
        if d <= r {
            vanishes_inside &= *v == 0.0;
        }
        if d >= 2.0 * r {
            one_outside &= *v == 1.0;
        }
    }
    let in_unit_interval = values.iter().all(|v| (0.0..=1.0).contains(v));
    Ok(Cutoff {
        field: ScalarField::new(p.grid(), values)?,
        radius: r,
        max_slope,
        vanishes_inside,
        one_outside,
        in_unit_interval,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusMass {
    /// `‖u‖²_{A(r,2r)} / ‖u‖²_{A(r,(2r)^{1/11})}`.
    pub ratio: f64,
    /// `∫_{S(ρ)} u ∂_ν u ≥ 0` at every sampled `ρ ∈ [r, (2r)^{1/11}]`.
    pub flux_ok: bool,
    /// `10 r^{5/2}`.
    pub bound: f64,
    /// Whether `ratio ≤ bound`, only decided when `flux_ok`.
    pub holds: Option<bool>,
}

/// Annulus mass ratio around the central sphere.
pub fn annulus_mass_ratio(p: &NeckProfile, u: &[f64], r: f64) -> Result<AnnulusMass> {
    let n = p.samples();
    if u.len() != n {
        return Err(Error::DimensionMismatch(n, u.len()));
    }
    let outer = (2.0 * r).powf(1.0 / 11.0);
    if !(r > 0.0) || !(outer > r) || outer > p.center() {
        return Err(Error::OutOfRange(format!(
            "annulus [{r}, {outer}] does not fit in half-length {}",
            p.center()
        )));
    }
    let vol = p.volumes();
    let mass = |a: f64, b: f64| -> f64 {
        (0..n)
            .filter(|&i| (a..=b).contains(&p.distance(i)))
            .map(|i| vol[i] * u[i] * u[i])
            .sum()
    };
    let inner = mass(r, 2.0 * r);
    let total = mass(r, outer);
    if total == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ratio = inner / total;

    let h = p.spacing();
    let w = sphere_area(p.dim - 1);
    let flux_at = |j: usize| -> f64 {
        let uf = 0.5 * (u[j - 1] + u[j]);
        let du = (u[j] - u[j - 1]) / h;
        let sign = if j as f64 * h > p.center() { 1.0 } else { -1.0 };
        sign * uf * du * w * p.phi_face[j].powi(p.dim as i32 - 1)
    };
    let umax = u.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let tol = 1e-12 * umax * umax * w / h;
    let mut flux_ok = true;
    for j in 1..=n / 2 {
        let rho = p.center() - j as f64 * h;
        if rho < r || rho > outer {
            continue;
        }
        let f = flux_at(j) + flux_at(n - j);
        flux_ok &= f >= -tol;
    }
    let bound = 10.0 * r.powf(2.5);
    Ok(AnnulusMass {
        ratio,
        flux_ok,
        bound,
        holds: flux_ok.then_some(ratio <= bound),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckSweepRow {
    pub r: f64,
    pub eigenvalues: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Global minimum of Scal.
    pub s0: f64,
    /// Minimum of Scal within distance `2r` of the central sphere.
    pub s1: f64,
    /// `max |u|` over the computed `M`-normalized eigenvectors.
    pub c1: f64,
    /// `vol(U(2r)) / rⁿ`.
    pub c2: f64,
    pub cheeger: f64,
    /// Lowest nonzero invariant eigenvalue of the plain Laplacian.
    pub mu1_laplacian: f64,
    pub localization: Vec<MassLocalization>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckSweepReport {
    pub dim: usize,
    pub c: f64,
    pub samples: usize,
    /// Invariant eigenvalues of two disjoint unit spheres.
    pub baseline: Vec<f64>,
    pub rows: Vec<NeckSweepRow>,
    /// Largest radius from which every gap is non-increasing along the rest of the sweep.
    pub monotone_from: Option<f64>,
}

impl NeckSweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,j,mu_j,gap_j,S0,S1,C1,C2,h_sweep\n");
        for row in &self.rows {
            for (j, (mu, gap)) in row.eigenvalues.iter().zip(&row.gaps).enumerate() {
                out.push_str(&format!(
                    "{},{j},{},{},{},{},{},{},{}\n",
                    crate::sig17(row.r),
                    crate::sig17(*mu),
                    crate::sig17(*gap),
                    crate::sig17(row.s0),
                    crate::sig17(row.s1),
                    crate::sig17(row.c1),
                    crate::sig17(row.c2),
                    crate::sig17(row.cheeger),
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Invariant eigenvalues of two unit `Sⁿ`, each zonal level doubled.
pub fn two_sphere_baseline(n: usize, c: f64, count: usize) -> Vec<f64> {
    let scal = (n * (n - 1)) as f64;
    (0..count)
        .map(|j| {
            let l = (j / 2) as f64;
            l * (l + n as f64 - 2.0) + c * scal
        })
        .collect()
}

/// Lowest `k + 1` invariant eigenvalues of the dumbbell for each neck radius.
pub fn neck_sweep(n: usize, c: f64, radii: &[f64], k: usize, samples: usize) -> Result<NeckSweepReport> {
    if radii.is_empty() {
        return Err(Error::Precondition("no radii".into()));
    }
    if radii.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Precondition(format!("radii {radii:?} must be strictly descending")));
    }
    if k > 6 {
        return Err(Error::Precondition(format!("k = {k} exceeds 6")));
    }
    let baseline = two_sphere_baseline(n, c, k + 1);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let p = make_dumbbell(n, r, samples)?;
        rows.push(sweep_row(&p, c, k, &baseline)?);
    }
    let mut start = rows.len() - 1;
    while start > 0 {
        let (a, b) = (&rows[start - 1], &rows[start]);
        if a.gaps.iter().zip(&b.gaps).all(|(x, y)| y <= x) {
            start -= 1;
        } else {
            break;
        }
    }
    let monotone_from = (start + 1 < rows.len()).then(|| rows[start].r);
    Ok(NeckSweepReport {
        dim: n,
        c,
        samples,
        baseline,
        rows,
        monotone_from,
    })
}

fn sweep_row(p: &NeckProfile, c: f64, k: usize, baseline: &[f64]) -> Result<NeckSweepRow> {
    let r = p.neck_radius;
    let op = reduce_to_sturm_liouville(p, c)?;
    let res = solve_lowest(&op, k + 1, SWEEP_TOL)?;
    let scal = warped_scal(p)?;
    let s0 = scal.min();
    let s1 = (0..p.samples())
        .filter(|&i| p.distance(i) <= 2.0 * r)
        .map(|i| scal.values[i])
        .fold(f64::INFINITY, f64::min);
    let mut localization = Vec::with_capacity(k + 1);
    for u in &res.eigenvectors {
        let lambda_sq = op.rayleigh(u)?;
        localization.push(lemma36_check(&op, &scal, u, s0, s1, lambda_sq, c)?);
    }
    let c1 = res
        .eigenvectors
        .iter()
        .flat_map(|u| u.iter())
        .fold(0.0, |m: f64, v| m.max(v.abs()));
    let vol = p.volumes();
    let tube: f64 = (0..p.samples()).filter(|&i| p.distance(i) <= 2.0 * r).map(|i| vol[i]).sum();
    let c2 = tube / r.powi(p.dim as i32);
    let lap = solve_lowest(&reduce_to_sturm_liouville(p, 0.0)?, 2, SWEEP_TOL)?;
    Ok(NeckSweepRow {
        r,
        gaps: res.eigenvalues.iter().zip(baseline).map(|(m, b)| (m - b).abs()).collect(),
        eigenvalues: res.eigenvalues,
        s0,
        s1,
        c1,
        c2,
        cheeger: profile_cheeger(p)?.h,
        mu1_laplacian: lap.eigenvalues[1],
        localization,
    })
}
