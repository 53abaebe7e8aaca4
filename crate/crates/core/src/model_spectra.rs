//! Closed-form spectra of `L = Δ + c·Scal` on flat tori, round spheres,
//! Riemannian products and disjoint unions.
//!
//! Every [`ModelSpectrum`] records the value through which its level list is
//! complete; operations that would need levels beyond that value fail with
//! [`Error::Truncated`] instead of returning a silently wrong answer.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::small;

/// Relative tolerance used to merge analytically equal eigenvalues.
pub const LEVEL_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalConstant {
    Constant(f64),
    NonConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpectrum {
    dim: usize,
    c: f64,
    levels: Vec<Level>,
    scal: ScalConstant,
    /// Every eigenvalue `≤ complete_through` is listed with full multiplicity.
    complete_through: f64,
}

fn same_value(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= LEVEL_RTOL * a.abs().max(b.abs())
}

fn same_coefficient(a: f64, b: f64) -> bool {
    same_value(a, b)
}

/// Groups sorted values into levels.
fn group_levels(values: &mut [f64]) -> Vec<Level> {
    values.sort_by(f64::total_cmp);
    let mut levels: Vec<Level> = Vec::new();
    for &v in values.iter() {
        match levels.last_mut() {
            Some(l) if same_value(l.value, v) => l.multiplicity += 1,
            _ => levels.push(Level {
                value: v,
                multiplicity: 1,
            }),
        }
    }
    levels
}

impl ModelSpectrum {
    /// Assembles a spectrum from explicit levels. `complete_through` may be
    /// `f64::INFINITY` for a fully known (finite) spectrum.
    pub fn from_levels(
        dim: usize,
        c: f64,
        levels: Vec<Level>,
        scal: ScalConstant,
        complete_through: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        for w in levels.windows(2) {
            if !(w[0].value < w[1].value) || same_value(w[0].value, w[1].value) {
                return Err(Error::Precondition(format!(
                    "levels must be strictly ascending ({} then {})",
                    w[0].value, w[1].value
                )));
            }
        }
        if levels.iter().any(|l| l.multiplicity == 0) {
            return Err(Error::Precondition("multiplicities must be positive".into()));
        }
        if let Some(last) = levels.last() {
            if complete_through < last.value {
                return Err(Error::Precondition(
                    "complete_through lies below the last listed level".into(),
                ));
            }
        }
        Ok(ModelSpectrum {
            dim,
            c,
            levels,
            scal,
            complete_through,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn scal(&self) -> ScalConstant {
        self.scal
    }

    pub fn complete_through(&self) -> f64 {
        self.complete_through
    }

    pub fn total_multiplicity(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// Eigenvalues repeated according to multiplicity, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity))
            .collect()
    }

    pub fn lowest(&self) -> Option<f64> {
        self.levels.first().map(|l| l.value)
    }

    /// Keeps the smallest levels whose multiplicities reach `count`.
    pub fn truncated(&self, count: usize) -> Result<ModelSpectrum> {
        let mut total = 0;
        let mut keep = Vec::new();
        for l in &self.levels {
            if total >= count {
                break;
            }
            keep.push(*l);
            total += l.multiplicity;
        }
        if total < count {
            return Err(Error::Truncated(format!(
                "spectrum holds {total} eigenvalues, {count} requested"
            )));
        }
        let complete_through = keep.last().map_or(self.complete_through, |l| l.value);
        Ok(ModelSpectrum {
            levels: keep,
            complete_through,
            ..self.clone()
        })
    }
}

/// Generators of a lattice in ℝⁿ, stored as the columns of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dim: usize,
    basis: DMatrix<f64>,
}

impl Lattice {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let dim = basis.nrows();
        if dim == 0 || basis.ncols() != dim {
            return Err(Error::InvalidLattice(format!(
                "basis must be square, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let det = basis.determinant();
        let scale: f64 = basis.column_iter().map(|c| c.norm()).product();
        if !det.is_finite() || det.abs() <= 1e-12 * scale {
            return Err(Error::InvalidLattice(format!("singular basis (det = {det:e})")));
        }
        Ok(Lattice { dim, basis })
    }

    pub fn cubic(dim: usize) -> Self {
        Lattice::new(DMatrix::identity(dim, dim)).expect("identity basis")
    }

    pub fn diagonal(lengths: &[f64]) -> Result<Self> {
        Lattice::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(lengths)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Gram matrix of the dual lattice, `B⁻¹B⁻ᵀ`.
    pub fn dual_gram(&self) -> DMatrix<f64> {
        let inv = self.basis.clone().try_inverse().expect("checked nonsingular");
        &inv * inv.transpose()
    }
}

/// Spectrum of the flat torus `ℝⁿ/Λ`: `4π²|λ*|²` over the dual lattice.
pub fn torus_spectrum(lat: &Lattice, c: f64, count: usize) -> Result<ModelSpectrum> {
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    let n = lat.dim();
    let gram = lat.dual_gram();
    let flat: Vec<f64> = (0..n * n).map(|k| gram[(k / n, k % n)]).collect();
    let sigma_min = small::sym_eigenvalues(&flat, n)[0];
    let scale = 4.0 * PI * PI;

    let mut radius = 1usize;
    loop {
        // Any k outside the box [-R, R]ⁿ has |λ*|² ≥ σ_min (R+1)².
        let coverage = sigma_min * ((radius + 1) as f64).powi(2);
        let mut values = Vec::new();
        let side = 2 * radius + 1;
        let total = side.pow(n as u32);
        let mut k = vec![0i64; n];
        for idx in 0..total {
            let mut r = idx;
            for kd in k.iter_mut() {
                *kd = (r % side) as i64 - radius as i64;
                r /= side;
            }
            let mut q = 0.0;
            for a in 0..n {
                for b in 0..n {
                    q += k[a] as f64 * flat[a * n + b] * k[b] as f64;
                }
            }
            if q < coverage {
                values.push(q);
            }
        }
        let levels = group_levels(&mut values);
        let mut total_mult = 0;
        let mut kept = Vec::new();
        for l in &levels {
            if total_mult >= count {
                break;
            }
            kept.push(*l);
            total_mult += l.multiplicity;
        }
        // The last kept level must lie strictly inside the certified ball so
        // that its multiplicity is complete.
        if total_mult >= count && kept.last().is_some_and(|l| l.value < coverage) {
            let levels: Vec<Level> = kept
                .into_iter()
                .map(|l| Level {
                    value: scale * l.value,
                    multiplicity: l.multiplicity,
                })
                .collect();
            let complete = levels.last().unwrap().value;
            return ModelSpectrum::from_levels(n, c, levels, ScalConstant::Constant(0.0), complete);
        }
        radius += 1;
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of degree-`k` spherical harmonics on `Sⁿ`.
pub fn spherical_harmonic_dim(n: usize, k: usize) -> usize {
    let (n, k) = (n as u64, k as u64);
    let top = binomial(n + k, n);
    let low = if k >= 2 { binomial(n + k - 2, n) } else { 0 };
    (top - low) as usize
}

/// Spectrum of the round `Sⁿ` of the given radius.
pub fn sphere_spectrum(n: usize, radius: f64, c: f64, count: usize) -> Result<ModelSpectrum> {
    if n < 2 {
        return Err(Error::Precondition(format!("sphere dimension {n} < 2")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Precondition(format!("radius {radius} must be positive")));
    }
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    let r2 = radius * radius;
    let scal = (n * (n - 1)) as f64 / r2;
    let mut levels = Vec::new();
    let mut total = 0;
    let mut k = 0usize;
    while total < count {
        let m = spherical_harmonic_dim(n, k);
        levels.push(Level {
            value: (k * (k + n - 1)) as f64 / r2 + c * scal,
            multiplicity: m,
        });
        total += m;
        k += 1;
    }
    let complete = levels.last().unwrap().value;
    ModelSpectrum::from_levels(n, c, levels, ScalConstant::Constant(scal), complete)
}

/// Spectrum of a Riemannian product: pairwise sums with product multiplicities.
pub fn product_spectrum(a: &ModelSpectrum, b: &ModelSpectrum, count: usize) -> Result<ModelSpectrum> {
    if !same_coefficient(a.c, b.c) {
        return Err(Error::CoefficientMismatch(a.c, b.c));
    }
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    let (amin, bmin) = match (a.lowest(), b.lowest()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Truncated("empty factor spectrum".into())),
    };
    let cutoff = (a.complete_through + bmin).min(b.complete_through + amin);
    let mut sums: Vec<(f64, usize)> = Vec::new();
    for la in &a.levels {
        for lb in &b.levels {
            let v = la.value + lb.value;
            if v <= cutoff || same_value(v, cutoff) {
                sums.push((v, la.multiplicity * lb.multiplicity));
            }
        }
    }
    sums.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut levels: Vec<Level> = Vec::new();
    for (v, m) in sums {
        match levels.last_mut() {
            Some(l) if same_value(l.value, v) => l.multiplicity += m,
            _ => levels.push(Level {
                value: v,
                multiplicity: m,
            }),
        }
    }
    let scal = match (a.scal, b.scal) {
        (ScalConstant::Constant(x), ScalConstant::Constant(y)) => ScalConstant::Constant(x + y),
        _ => ScalConstant::NonConstant,
    };
    let full = ModelSpectrum::from_levels(a.dim + b.dim, a.c, levels, scal, cutoff)?;
    full.truncated(count).map_err(|_| {
        Error::Truncated(format!(
            "factors certify {} eigenvalues of the product, {count} requested",
            full.total_multiplicity()
        ))
    })
}

/// Spectrum of a disjoint union: the merged multiset, complete through the
/// smallest certified value among the parts.
pub fn disjoint_union_spectrum(parts: &[ModelSpectrum]) -> Result<ModelSpectrum> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("disjoint union of no parts".into()))?;
    for p in parts {
        if p.dim != first.dim {
            return Err(Error::DimensionMismatch(first.dim, p.dim));
        }
        if !same_coefficient(p.c, first.c) {
            return Err(Error::CoefficientMismatch(first.c, p.c));
        }
    }
    let cutoff = parts.iter().map(|p| p.complete_through).fold(f64::INFINITY, f64::min);
    let mut merged: Vec<(f64, usize)> = parts
        .iter()
        .flat_map(|p| p.levels.iter().map(|l| (l.value, l.multiplicity)))
        .filter(|&(v, _)| v <= cutoff)
        .collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut levels: Vec<Level> = Vec::new();
    for (v, m) in merged {
        match levels.last_mut() {
            Some(l) if same_value(l.value, v) => l.multiplicity += m,
            _ => levels.push(Level {
                value: v,
                multiplicity: m,
            }),
        }
    }
    let scal = match first.scal {
        ScalConstant::Constant(s) if parts.iter().all(|p| p.scal == ScalConstant::Constant(s)) => {
            ScalConstant::Constant(s)
        }
        _ => ScalConstant::NonConstant,
    };
    ModelSpectrum::from_levels(first.dim, first.c, levels, scal, cutoff)
}

/// Number of eigenvalues `≤ lambda`, counted with multiplicity.
pub fn counting_function(s: &ModelSpectrum, lambda: f64) -> Result<usize> {
    if lambda > s.complete_through {
        return Err(Error::Truncated(format!(
            "λ = {lambda} lies above the certified value {}",
            s.complete_through
        )));
    }
    Ok(s.levels
        .iter()
        .filter(|l| l.value <= lambda)
        .map(|l| l.multiplicity)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force dual-lattice enumeration over a generous fixed box.
    fn brute_torus(lat: &Lattice, count: usize) -> Vec<f64> {
        let n = lat.dim();
        let g = lat.dual_gram();
        let r: i64 = 6;
        let side = (2 * r + 1) as usize;
        let mut v = Vec::new();
        for idx in 0..side.pow(n as u32) {
            let mut k = vec![0i64; n];
            let mut t = idx;
            for kd in k.iter_mut() {
                *kd = (t % side) as i64 - r;
                t /= side;
            }
            let mut q = 0.0;
            for a in 0..n {
                for b in 0..n {
                    q += k[a] as f64 * g[(a, b)] * k[b] as f64;
                }
            }
            v.push(4.0 * PI * PI * q);
        }
        v.sort_by(f64::total_cmp);
        v.truncate(count);
        v
    }

    #[test]
    fn cubic_torus_first_levels() {
        let s = torus_spectrum(&Lattice::cubic(3), 0.125, 2).unwrap();
        assert_eq!(s.levels().len(), 2);
        assert_eq!(s.levels()[0], Level { value: 0.0, multiplicity: 1 });
        assert_eq!(s.levels()[1].multiplicity, 6);
        assert!((s.levels()[1].value - 4.0 * PI * PI).abs() < 1e-12);
        let brute = brute_torus(&Lattice::cubic(3), 7);
        for (a, b) in s.eigenvalues().iter().zip(&brute) {
            assert!((a - b).abs() < 1e-12);
        }
        let one = torus_spectrum(&Lattice::cubic(3), 3.0, 1).unwrap();
        assert_eq!(one.eigenvalues(), vec![0.0]);
    }

    #[test]
    fn rectangular_torus() {
        let lat = Lattice::diagonal(&[1.0, 1.0, 2.0]).unwrap();
        let s = torus_spectrum(&lat, 0.125, 2).unwrap();
        assert_eq!(s.levels()[1].multiplicity, 2);
        assert!((s.levels()[1].value - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn skew_torus_matches_brute_force() {
        let b = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.1, 0.0, 0.9, 0.2, 0.0, 0.0, 1.3]);
        let lat = Lattice::new(b).unwrap();
        let s = torus_spectrum(&lat, 0.0, 15).unwrap();
        let ev = s.eigenvalues();
        let brute = brute_torus(&lat, ev.len());
        for (a, b) in ev.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b), "{a} {b}");
        }
    }

    #[test]
    fn singular_lattice_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(Lattice::new(b), Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn three_sphere_levels() {
        let s = sphere_spectrum(3, 1.0, 0.125, 14).unwrap();
        let lv = s.levels();
        assert_eq!(lv.len(), 3);
        for (l, (v, m)) in lv.iter().zip([(0.75, 1), (3.75, 4), (8.75, 9)]) {
            assert!((l.value - v).abs() < 1e-14);
            assert_eq!(l.multiplicity, m);
        }
        let plain = sphere_spectrum(3, 1.0, 0.0, 1).unwrap();
        assert_eq!(plain.eigenvalues(), vec![0.0]);
        let s4 = sphere_spectrum(4, 2.0, 1.0 / 6.0, 1).unwrap();
        assert!((s4.levels()[0].value - 0.5).abs() < 1e-14);
        assert_eq!(spherical_harmonic_dim(2, 3), 7);
    }

    #[test]
    fn products() {
        let t2 = torus_spectrum(&Lattice::cubic(2), 0.125, 1).unwrap();
        let t1 = torus_spectrum(&Lattice::cubic(1), 0.125, 1).unwrap();
        let p = product_spectrum(&t2, &t1, 1).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.eigenvalues(), vec![0.0]);

        let s3 = sphere_spectrum(3, 1.0, 0.125, 1).unwrap();
        let p = product_spectrum(&s3, &s3, 1).unwrap();
        assert!((p.levels()[0].value - 1.5).abs() < 1e-14);

        let toy = ModelSpectrum::from_levels(
            1,
            0.0,
            vec![
                Level { value: 0.0, multiplicity: 1 },
                Level { value: 1.0, multiplicity: 2 },
            ],
            ScalConstant::Constant(0.0),
            2.0,
        )
        .unwrap();
        let p = product_spectrum(&toy, &toy, 9).unwrap();
        assert_eq!(
            p.levels(),
            &[
                Level { value: 0.0, multiplicity: 1 },
                Level { value: 1.0, multiplicity: 4 },
                Level { value: 2.0, multiplicity: 4 },
            ]
        );
    }

    #[test]
    fn product_errors() {
        let a = sphere_spectrum(3, 1.0, 0.125, 1).unwrap();
        let b = sphere_spectrum(3, 1.0, 0.0, 1).unwrap();
        assert!(matches!(product_spectrum(&a, &b, 1), Err(Error::CoefficientMismatch(..))));
        assert!(matches!(product_spectrum(&a, &a, 2), Err(Error::Truncated(_))));
    }

    #[test]
    fn disjoint_unions() {
        let t3 = torus_spectrum(&Lattice::cubic(3), 0.125, 1).unwrap();
        let u = disjoint_union_spectrum(&[t3.clone(), t3.clone()]).unwrap();
        assert_eq!(u.levels(), &[Level { value: 0.0, multiplicity: 2 }]);

        let s3 = sphere_spectrum(3, 1.0, 0.125, 1).unwrap();
        let u = disjoint_union_spectrum(&[s3.clone(), s3.clone()]).unwrap();
        assert_eq!(u.levels(), &[Level { value: 0.75, multiplicity: 2 }]);

        let t3deep = torus_spectrum(&Lattice::cubic(3), 0.125, 2).unwrap();
        let u = disjoint_union_spectrum(&[t3deep, s3]).unwrap().truncated(2).unwrap();
        assert_eq!(u.eigenvalues(), vec![0.0, 0.75]);

        let s2 = sphere_spectrum(2, 1.0, 0.125, 1).unwrap();
        assert!(matches!(
            disjoint_union_spectrum(&[t3, s2]),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn counting() {
        let t3 = torus_spectrum(&Lattice::cubic(3), 0.125, 2).unwrap();
        assert_eq!(counting_function(&t3, -1.0).unwrap(), 0);
        assert_eq!(counting_function(&t3, 0.0).unwrap(), 1);
        let s3 = sphere_spectrum(3, 1.0, 0.125, 14).unwrap();
        assert_eq!(counting_function(&s3, 4.0).unwrap(), 5);
        assert!(matches!(counting_function(&s3, 100.0), Err(Error::Truncated(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn torus_ground_state_is_zero(a in 0.5f64..2.0, b in 0.5f64..2.0, s in -0.4f64..0.4, c in -1.0f64..1.0) {
                let m = DMatrix::from_row_slice(2, 2, &[a, s, 0.0, b]);
                let t = torus_spectrum(&Lattice::new(m).unwrap(), c, 3).unwrap();
                prop_assert_eq!(t.levels()[0], Level { value: 0.0, multiplicity: 1 });
            }

            #[test]
            fn counting_is_monotone(x in -1.0f64..8.75, dx in 0.0f64..5.0) {
                let s3 = sphere_spectrum(3, 1.0, 0.125, 14).unwrap();
                let y = (x + dx).min(8.75);
                prop_assert!(counting_function(&s3, x).unwrap() <= counting_function(&s3, y).unwrap());
            }

            #[test]
            fn union_of_flat_copies(k in 1usize..6) {
                let t = torus_spectrum(&Lattice::cubic(2), 0.1, 1).unwrap();
                let parts = vec![t; k];
                let u = disjoint_union_spectrum(&parts).unwrap();
                prop_assert_eq!(u.levels()[0].multiplicity, k);
            }

            #[test]
            fn product_commutes(r1 in 0.5f64..2.0, r2 in 0.5f64..2.0) {
                let a = sphere_spectrum(3, r1, 0.125, 10).unwrap();
                let b = sphere_spectrum(2, r2, 0.125, 10).unwrap();
                let ab = product_spectrum(&a, &b, 3).unwrap();
                let ba = product_spectrum(&b, &a, 3).unwrap();
                prop_assert_eq!(ab.levels().len(), ba.levels().len());
                for (x, y) in ab.levels().iter().zip(ba.levels()) {
                    prop_assert!((x.value - y.value).abs() < 1e-12 * (1.0 + x.value.abs()));
                    prop_assert_eq!(x.multiplicity, y.multiplicity);
                }
            }
        }
    }
}
