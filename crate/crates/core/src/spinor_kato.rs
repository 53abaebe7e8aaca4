//! Pointwise Clifford algebra: gamma matrices, the refined Kato projection on
//! `Rⁿ ⊗ Σ`, and the spectral-comparison constant `C(n, l)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Generators `e₁ … eₙ` of the complex Clifford algebra with `eⱼ² = −1`,
/// acting on `C^d`, `d = 2^⌊n/2⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    pub n: usize,
    pub spin_dim: usize,
    pub gens: Vec<CMat>,
}

fn pauli() -> [CMat; 4] {
    [
        CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

fn kron_all(factors: &[&CMat]) -> CMat {
    factors
        .iter()
        .fold(CMat::from_element(1, 1, ONE), |acc, f| acc.kronecker(f))
}

/// Tensor-product construction: `γ_{2k}, γ_{2k+1} = σ₃^{⊗k} ⊗ σ₁,σ₂ ⊗ 1`, plus
/// `σ₃^{⊗m}` in odd dimension, and `eⱼ = i γⱼ`.
pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    if !(3..=8).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let [id, s1, s2, s3] = pauli();
    let m = n / 2;
    let mut gens = Vec::with_capacity(n);
    for k in 0..m {
        for s in [&s1, &s2] {
            let mut f: Vec<&CMat> = vec![&s3; k];
            f.push(s);
            f.extend(std::iter::repeat_n(&id, m - k - 1));
            gens.push(kron_all(&f) * I);
        }
    }
    if n % 2 == 1 {
        gens.push(kron_all(&vec![&s3; m]) * I);
    }
    Ok(CliffordRep {
        n,
        spin_dim: 1 << m,
        gens,
    })
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

impl CliffordRep {
    /// Largest deviation from `eⱼeₖ + eₖeⱼ = −2δⱼₖ`.
    pub fn anticommutation_defect(&self) -> f64 {
        let d = self.spin_dim;
        let mut worst: f64 = 0.0;
        for (j, a) in self.gens.iter().enumerate() {
            for (k, b) in self.gens.iter().enumerate() {
                let mut s = a * b + b * a;
                if j == k {
                    s += CMat::identity(d, d) * Complex64::new(2.0, 0.0);
                }
                worst = worst.max(max_abs(&s));
            }
        }
        worst
    }

    /// Largest deviation from `eⱼ* = −eⱼ` and `eⱼ*eⱼ = 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.spin_dim;
        self.gens.iter().fold(0.0, |w: f64, e| {
            let skew = max_abs(&(e.adjoint() + e));
            let unit = max_abs(&(e.adjoint() * e - CMat::identity(d, d)));
            w.max(skew).max(unit)
        })
    }

    /// `e₁e₂⋯eₙ`.
    pub fn volume_element(&self) -> CMat {
        let d = self.spin_dim;
        self.gens.iter().fold(CMat::identity(d, d), |acc, e| acc * e)
    }

    /// Clifford action of the real vector `x`.
    pub fn act(&self, x: &[f64]) -> CMat {
        let d = self.spin_dim;
        self.gens
            .iter()
            .zip(x)
            .fold(CMat::zeros(d, d), |acc, (e, c)| acc + e * Complex64::new(*c, 0.0))
    }

    /// Plain-text dump of the generators.
    pub fn audit_text(&self) -> String {
        let mut out = String::new();
        for (j, e) in self.gens.iter().enumerate() {
            out.push_str(&format!("e_{}\n", j + 1));
            for r in 0..self.spin_dim {
                let row: Vec<String> = (0..self.spin_dim)
                    .map(|c| format!("{:+.0}{:+.0}i", e[(r, c)].re, e[(r, c)].im))
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// `π(X ⊗ ψ) = −(1/n) Σⱼ eⱼ ⊗ eⱼ·X·ψ` on `Cⁿ ⊗ C^d`, index `j·d + α`.
#[derive(Debug, Clone, PartialEq)]
pub struct KatoProjection {
    pub n: usize,
    pub spin_dim: usize,
    pub matrix: CMat,
}

/// Block `(j, k)` of `π` is `−(1/n) eⱼeₖ`.
pub fn kato_projection(rep: &CliffordRep) -> KatoProjection {
    let frame: Vec<Vec<f64>> = (0..rep.n)
        .map(|j| (0..rep.n).map(|a| if a == j { 1.0 } else { 0.0 }).collect())
        .collect();
    kato_projection_in_frame(rep, &frame)
}

/// `π` assembled from the orthonormal frame `fⱼ = Σₐ frame[j][a] eₐ`, still
/// written in the coordinate basis.
pub fn kato_projection_in_frame(rep: &CliffordRep, frame: &[Vec<f64>]) -> KatoProjection {
    let (n, d) = (rep.n, rep.spin_dim);
    let fs: Vec<CMat> = frame.iter().map(|f| rep.act(f)).collect();
    let scale = Complex64::new(-1.0 / n as f64, 0.0);
    let mut matrix = CMat::zeros(n * d, n * d);
    for b in 0..n {
        for (f, fj) in frame.iter().zip(&fs) {
            let prod = fj * &rep.gens[b] * scale;
            for a in 0..n {
                if f[a] == 0.0 {
                    continue;
                }
                let mut block = matrix.view_mut((a * d, b * d), (d, d));
                block += &prod * Complex64::new(f[a], 0.0);
            }
        }
    }
    KatoProjection {
        n,
        spin_dim: d,
        matrix,
    }
}

impl KatoProjection {
    /// `max |π² − π|`.
    pub fn idempotency_defect(&self) -> f64 {
        max_abs(&(&self.matrix * &self.matrix - &self.matrix))
    }

    /// `max |π − π*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `|π′(X ⊗ ψ)|²` with `π′ = 1 − π`.
    pub fn complementary_norm_sq(&self, x: &[f64], psi: &[Complex64]) -> f64 {
        let d = self.spin_dim;
        let v: Vec<Complex64> = (0..self.n * d)
            .map(|idx| psi[idx % d] * x[idx / d])
            .collect();
        let v = nalgebra::DVector::from_vec(v);
        let w = &v - &self.matrix * &v;
        w.norm_squared()
    }
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `|π′(X ⊗ ψ)|²` for unit `X` and `ψ`; equals `(n−1)/n`.
pub fn complementary_norm_check(pi: &KatoProjection, x: &[f64], psi: &[Complex64]) -> Result<f64> {
    if x.len() != pi.n || psi.len() != pi.spin_dim {
        return Err(Error::DimensionMismatch(pi.n * pi.spin_dim, x.len() * psi.len()));
    }
    let nx = norm_sq(x);
    let np: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (nx - 1.0).abs() > 1e-12 || (np - 1.0).abs() > 1e-12 {
        return Err(Error::Normalization(format!("|X|² = {nx}, |ψ|² = {np}")));
    }
    Ok(pi.complementary_norm_sq(x, psi))
}

/// Haar-distributed element of SO(n) from the QR factorization of a Gaussian matrix.
pub fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    if q.determinant() < 0.0 {
        let mut col = q.column_mut(0);
        col *= -1.0;
    }
    (0..n).map(|j| q.row(j).iter().copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatoSuiteRow {
    pub n: usize,
    pub spin_dim: usize,
    pub anticommutation: f64,
    pub unitarity: f64,
    pub idempotency: f64,
    pub hermiticity: f64,
    /// `max |π_R − π|` over random frames.
    pub rotation: f64,
    pub trace: f64,
    /// Largest relative deviation of `|π′(X⊗ψ)|²` from `(n−1)/n |X|²|ψ|²`.
    pub norm_identity: f64,
    pub samples: usize,
}

impl KatoSuiteRow {
    pub fn passes(&self, tol: f64) -> bool {
        [
            self.anticommutation,
            self.unitarity,
            self.idempotency,
            self.hermiticity,
            self.rotation,
            self.norm_identity,
        ]
        .iter()
        .all(|v| *v <= tol)
            && (self.trace - self.spin_dim as f64).abs() <= tol
    }
}

/// All projection checks for one dimension on `samples` random inputs.
/// Odd samples use unit `X, ψ`; even ones are rescaled to test bilinearity.
pub fn kato_suite(n: usize, samples: usize, seed: u64) -> Result<KatoSuiteRow> {
    let rep = build_clifford(n)?;
    let pi = kato_projection(&rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    let mut rotation: f64 = 0.0;
    for _ in 0..8 {
        let frame = random_rotation(n, &mut rng);
        let pr = kato_projection_in_frame(&rep, &frame);
        rotation = rotation.max(max_abs(&(&pr.matrix - &pi.matrix)));
    }
    let target = (n as f64 - 1.0) / n as f64;
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut psi: Vec<Complex64> = (0..rep.spin_dim)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let nx = norm_sq(&x).sqrt();
        let np = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= nx);
        psi.iter_mut().for_each(|z| *z /= np);
        let got = if s % 2 == 0 {
            complementary_norm_check(&pi, &x, &psi)?
        } else {
            let (a, b) = (0.5 + 2.0 * (s as f64 / samples as f64), 3.0 - (s as f64 / samples as f64));
            x.iter_mut().for_each(|v| *v *= a);
            psi.iter_mut().for_each(|z| *z *= b);
            pi.complementary_norm_sq(&x, &psi) / (a * a * b * b)
        };
        worst = worst.max((got - target).abs());
    }
    Ok(KatoSuiteRow {
        n,
        spin_dim: rep.spin_dim,
        anticommutation: rep.anticommutation_defect(),
        unitarity: rep.unitarity_defect(),
        idempotency: pi.idempotency_defect(),
        hermiticity: pi.hermiticity_defect(),
        rotation,
        trace: pi.trace().re,
        norm_identity: worst / target,
        samples,
    })
}

/// `C(n, l) = 8(l+1)²(n−1)²/(n(n−2)) − 1`, exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CConstant {
    pub numer: i64,
    pub denom: i64,
}

impl CConstant {
    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.numer, self.denom)
    }
}

pub fn c_constant(n: usize, l: usize) -> Result<CConstant> {
    if n < 3 || l < 1 {
        return Err(Error::Precondition(format!("C(n, l) needs n >= 3 and l >= 1, got ({n}, {l})")));
    }
    let (n, l) = (n as i64, l as i64);
    let top = (l + 1)
        .checked_pow(2)
        .and_then(|a| a.checked_mul((n - 1) * (n - 1)))
        .and_then(|a| a.checked_mul(8))
        .ok_or_else(|| Error::OutOfRange(format!("C({n}, {l}) overflows")))?;
    let r = Ratio::new(top, n * (n - 2)) - 1;
    Ok(CConstant {
        numer: *r.numer(),
        denom: *r.denom(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaLower {
    pub lower: u64,
    /// False unless `n ≡ 0 mod 4`.
    pub applicable: bool,
}

/// `κ ≥ ⌈|Â| / 2^{2m−1}⌉` for `n = 4m`.
pub fn theorem24_kappa_lower(ahat: i64, n: usize) -> KappaLower {
    if n == 0 || n % 4 != 0 {
        return KappaLower {
            lower: 0,
            applicable: false,
        };
    }
    let e = (n / 2 - 1) as u32;
    let a = ahat.unsigned_abs();
    let lower = match 1u64.checked_shl(e) {
        Some(den) if e < 64 => a.div_ceil(den),
        _ => u64::from(a > 0),
    };
    KappaLower {
        lower,
        applicable: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spinor_dimensions() {
        for (n, d) in [(3, 2), (4, 4), (5, 4), (6, 8), (7, 8), (8, 16)] {
            let rep = build_clifford(n).unwrap();
            assert_eq!(rep.spin_dim, d);
            assert_eq!(rep.gens.len(), n);
            assert!(rep.anticommutation_defect() < 1e-15);
            assert!(rep.unitarity_defect() < 1e-15);
        }
        assert!(build_clifford(2).is_err());
        assert!(build_clifford(9).is_err());
    }

    #[test]
    fn volume_element_square() {
        for n in 3..=8 {
            let rep = build_clifford(n).unwrap();
            let w = rep.volume_element();
            let sq = &w * &w;
            // brute-force sign of the reordering: eⱼ² = −1 and n(n−1)/2 swaps
            let swaps = n * (n - 1) / 2;
            let sign = if (swaps + n) % 2 == 0 { 1.0 } else { -1.0 };
            let d = rep.spin_dim;
            let err = max_abs(&(sq - CMat::identity(d, d) * Complex64::new(sign, 0.0)));
            assert!(err < 1e-14, "{n}");
            let by_mod4 = if matches!(n % 4, 0 | 3) { 1.0 } else { -1.0 };
            assert_eq!(sign, by_mod4);
        }
    }

    #[test]
    fn projection_properties() {
        for n in 3..=8 {
            let rep = build_clifford(n).unwrap();
            let pi = kato_projection(&rep);
            assert!(pi.idempotency_defect() < 1e-12);
            assert!(pi.hermiticity_defect() < 1e-12);
            let tr = pi.trace();
            assert!((tr.re - rep.spin_dim as f64).abs() < 1e-12 && tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn kato_values() {
        for (n, want) in [(3, 2.0 / 3.0), (4, 0.75)] {
            let pi = kato_projection(&build_clifford(n).unwrap());
            let mut x = vec![0.0; n];
            x[0] = 1.0;
            let mut psi = vec![ZERO; pi.spin_dim];
            psi[1] = ONE;
            let v = complementary_norm_check(&pi, &x, &psi).unwrap();
            assert!((v - want).abs() < 1e-14, "{n} {v}");
            assert!(v < 1.0);
        }
        let pi = kato_projection(&build_clifford(3).unwrap());
        assert!(complementary_norm_check(&pi, &[2.0, 0.0, 0.0], &[ONE, ZERO]).is_err());
    }

    #[test]
    fn suite_all_dimensions() {
        for n in 3..=8 {
            let row = kato_suite(n, 1000, 7).unwrap();
            assert!(row.passes(1e-12), "{row:?}");
        }
    }

    #[test]
    fn rotation_is_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 3..=8 {
            let r = random_rotation(n, &mut rng);
            let m = DMatrix::from_fn(n, n, |i, j| r[i][j]);
            assert!((m.determinant() - 1.0).abs() < 1e-12);
            let e = (&m * m.transpose() - DMatrix::identity(n, n)).amax();
            assert!(e < 1e-13);
        }
    }

    #[test]
    fn c_constant_values() {
        let c = c_constant(4, 4).unwrap();
        assert_eq!((c.numer, c.denom), (224, 1));
        let c = c_constant(3, 1).unwrap();
        assert_eq!((c.numer, c.denom), (125, 3));
        assert!(c_constant(2, 1).is_err());
        assert!(c_constant(3, 0).is_err());
        for n in 3..=8i64 {
            for l in 1..=64i64 {
                let c = c_constant(n as usize, l as usize).unwrap();
                let want = Ratio::new(8 * (l + 1) * (l + 1) * (n - 1) * (n - 1) - n * (n - 2), n * (n - 2));
                assert_eq!(c.ratio(), want);
                assert!(c.value() > 0.0);
            }
        }
    }

    #[test]
    fn ahat_lower_bounds() {
        for k in 0..=5 {
            let b = theorem24_kappa_lower(2 * k, 4);
            assert!(b.applicable);
            assert_eq!(b.lower, k as u64);
        }
        assert_eq!(theorem24_kappa_lower(4, 8).lower, 1);
        assert_eq!(theorem24_kappa_lower(9, 8).lower, 2);
        assert_eq!(theorem24_kappa_lower(-3, 4).lower, 2);
        let b = theorem24_kappa_lower(4, 6);
        assert!(!b.applicable);
        assert_eq!(b.lower, 0);
    }

    proptest! {
        #[test]
        fn norm_identity_is_bilinear(
            n in 3usize..=8,
            xs in proptest::collection::vec(-3.0f64..3.0, 8),
            ps in proptest::collection::vec(-3.0f64..3.0, 32),
        ) {
            let rep = build_clifford(n).unwrap();
            let pi = kato_projection(&rep);
            let x = &xs[..n];
            let psi: Vec<Complex64> = (0..rep.spin_dim).map(|a| Complex64::new(ps[2 * a], ps[2 * a + 1])).collect();
            let scale = norm_sq(x) * psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let got = pi.complementary_norm_sq(x, &psi);
            let want = (n as f64 - 1.0) / n as f64 * scale;
            prop_assert!((got - want).abs() <= 1e-12 * (1.0 + scale));
        }
    }
}
