//! Integer bounds on κ from the dimension and the α/Â-genus, with witness
//! manifolds assembled from a closed catalog of special-holonomy blocks.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spinor_kato::theorem24_kappa_lower;

const CATALOG_NOTE: &str =
    "witnesses and brute-force values range over the block catalog only (catalog-exact, not the true p_n)";
const KAPPA_PRIME_NOTE: &str = "kappa' <= kappa: upper bounds carry over, no lower bound is claimed for kappa'";

const CITE_DIRAC: &str = "Dirac-kernel comparison with refined Kato inequality: |A-hat| <= 2^(2m-1) kappa";
const CITE_PN: &str = "surgery stability + bordism to E + N (Stolz): kappa <= p_n(alpha)";
const CITE_DIGITS: &str = "base-4^l split of |alpha| into V_4^l and V_q x W_i products";
const CITE_PSC: &str = "positive scalar curvature exists (Gromov-Lawson, Stolz): kappa = 0";
const CITE_MOD2: &str = "V_1^l x (S^1)^a realizes the nontrivial mod-2 alpha; no psc metric: kappa = |alpha|";
const CITE_STABLE: &str = "alpha(M x B) = alpha(M); connected scalar-flat product with the same A-hat";
const CITE_UNION: &str = "kappa is additive over disjoint unions";
const CITE_SURGERY: &str = "connected sum is a codimension >= 3 surgery on the disjoint union: kappa cannot grow";
const CITE_FLAT: &str = "flat metric gives kappa <= 1; no psc metric on the torus: kappa = 1";
const CITE_SCALAR_FLAT: &str = "connected scalar-flat metric gives kappa <= 1; nonzero A-hat forbids psc";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildingBlock {
    pub name: String,
    pub dim: usize,
    /// `None` for the circle, whose α is a mod-2 class.
    pub ahat: Option<u64>,
    pub connected: bool,
    pub tag: String,
}

fn block(name: &str, dim: usize, ahat: Option<u64>, tag: &str) -> BuildingBlock {
    BuildingBlock {
        name: name.into(),
        dim,
        ahat,
        connected: true,
        tag: tag.into(),
    }
}

/// K3, `V₀…V₄`, `Hᵢ` for `4i ≤ max_dim`, `B` and the non-bounding circle.
pub fn catalog(max_dim: usize) -> Vec<BuildingBlock> {
    let mut out = vec![block("K3", 4, Some(2), "K3")];
    for i in 0..=4 {
        out.push(block(&format!("V{i}"), 8, Some(i), "Ricci-flat"));
    }
    for i in 1..=max_dim / 4 {
        out.push(block(&format!("H{i}"), 4 * i, Some(i as u64 + 1), &format!("Sp({i})")));
    }
    out.push(block("B", 8, Some(1), "Spin(7)"));
    out.push(block("S1", 1, None, "circle"));
    out
}

/// One connected component: a product `Π bᵢ^{eᵢ}`, repeated `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub factors: Vec<(String, u32)>,
    pub multiplicity: u64,
    pub dim: usize,
    /// `None` when a circle factor is present.
    pub ahat: Option<u128>,
}

impl Component {
    fn new(factors: &[(&str, u32)], multiplicity: u64) -> Result<Self> {
        let mut dim = 0;
        let mut ahat: Option<u128> = Some(1);
        let mut kept = Vec::new();
        for &(name, power) in factors {
            if power == 0 {
                continue;
            }
            let b = lookup(name)?;
            dim += b.dim * power as usize;
            ahat = match (ahat, b.ahat) {
                (Some(a), Some(x)) => Some(
                    (x as u128)
                        .checked_pow(power)
                        .and_then(|p| p.checked_mul(a))
                        .ok_or_else(|| Error::OutOfRange(format!("A-hat of {name}^{power} overflows")))?,
                ),
                _ => None,
            };
            kept.push((name.to_string(), power));
        }
        Ok(Component {
            factors: kept,
            multiplicity,
            dim,
            ahat,
        })
    }

    pub fn label(&self) -> String {
        let body = if self.factors.is_empty() {
            "pt".to_string()
        } else {
            self.factors
                .iter()
                .map(|(n, p)| if *p == 1 { n.clone() } else { format!("{n}^{p}") })
                .collect::<Vec<_>>()
                .join(" x ")
        };
        if self.multiplicity == 1 {
            body
        } else {
            format!("{} * {body}", self.multiplicity)
        }
    }
}

fn lookup(name: &str) -> Result<BuildingBlock> {
    let max = name
        .strip_prefix('H')
        .and_then(|i| i.parse::<usize>().ok())
        .map_or(8, |i| 4 * i);
    catalog(max)
        .into_iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::Precondition(format!("no block named {name}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub count: u64,
    pub blocks: Vec<String>,
    pub cite: String,
    #[serde(skip)]
    pub components: Vec<Component>,
}

impl Witness {
    fn new(components: Vec<Component>, cite: &str) -> Self {
        let components: Vec<Component> = components.into_iter().filter(|c| c.multiplicity > 0).collect();
        Witness {
            count: components.iter().map(|c| c.multiplicity).sum(),
            blocks: components.iter().map(Component::label).collect(),
            cite: cite.into(),
            components,
        }
    }

    /// Sum of `multiplicity · Â` over the components.
    pub fn ahat_sum(&self) -> Option<u128> {
        self.components
            .iter()
            .try_fold(0u128, |s, c| c.ahat.and_then(|a| a.checked_mul(c.multiplicity as u128)).map(|v| s + v))
    }

    /// Every component has dimension `dim` and the Â-values add up to `ahat`.
    pub fn verify(&self, dim: usize, ahat: u128) -> bool {
        self.components.iter().all(|c| c.dim == dim) && self.ahat_sum() == Some(ahat)
    }
}

/// `α = Â` for `n = 8l`, `α = Â/2` for `n = 8l + 4`.
pub fn alpha_from_ahat(n: usize, ahat: i64) -> Result<i64> {
    match n % 8 {
        0 if n > 0 => Ok(ahat),
        4 => {
            if ahat % 2 != 0 {
                Err(Error::Normalization(format!("odd A-hat {ahat} in dimension {n}")))
            } else {
                Ok(ahat / 2)
            }
        }
        _ => Err(Error::Precondition(format!("dimension {n} is not divisible by 4"))),
    }
}

/// `(l, K3 prefix)` for `n = 8l` or `n = 8l + 4`, `l ≥ 1`.
fn dimension_class(n: usize) -> Result<(u32, bool)> {
    let l = n / 8;
    match n % 8 {
        0 | 4 if l >= 1 => Ok((l as u32, n % 8 == 4)),
        _ => Err(Error::Precondition(format!("dimension {n} is not 8l or 8l+4 with l >= 1"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PnUpper {
    pub bound: u64,
    pub p: u64,
    pub q: u64,
    pub witness: Witness,
}

/// `p_n(a) ≤ p + min{q, l}` with `|a| = 4ˡp + q`, together with the witness.
pub fn pn_upper(n: usize, a: i64) -> Result<PnUpper> {
    let (l, k3) = dimension_class(n)?;
    let abs = a.unsigned_abs();
    let (p, q) = match 4u64.checked_pow(l) {
        Some(base) => (abs / base, abs % base),
        None => (0, abs),
    };
    let bound = p + q.min(l as u64);
    let pre: Vec<(&str, u32)> = if k3 { vec![("K3", 1)] } else { vec![] };
    let with = |f: &[(&'static str, u32)], m: u64| -> Result<Component> {
        let mut all = pre.clone();
        all.extend_from_slice(f);
        Component::new(&all, m)
    };
    let mut comps = Vec::new();
    if abs > 0 {
        comps.push(with(&[("V4", l)], p)?);
        if q <= l as u64 {
            comps.push(with(&[("V1", l)], q)?);
        } else {
            let mut rest = q;
            for i in 0..l {
                let digit = (rest % 4) as usize;
                rest /= 4;
                let v = ["V0", "V1", "V2", "V3"][digit];
                comps.push(with(&[(v, 1), ("V4", i), ("V1", l - 1 - i)], 1)?);
            }
        }
    }
    let witness = Witness::new(comps, CITE_DIGITS);
    let target = abs as u128 * if k3 { 2 } else { 1 };
    if witness.count != bound || !witness.verify(n, target) {
        return Err(Error::Precondition(format!("witness for ({n}, {a}) failed verification")));
    }
    Ok(PnUpper { bound, p, q, witness })
}

/// Outcome of the exhaustive catalog search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PnSearch {
    /// `None` when more than `max_components` would be needed.
    pub count: Option<usize>,
    /// Â-values of the components of one optimal witness.
    pub parts: Vec<u128>,
}

/// Â-values of connected products of catalog blocks of total dimension `n`, capped at `cap`.
pub fn product_ahats(n: usize, cap: u128) -> BTreeSet<u128> {
    let blocks: Vec<(usize, u128)> = catalog(n)
        .into_iter()
        .filter_map(|b| b.ahat.map(|a| (b.dim, a as u128)))
        .filter(|(d, _)| d % 4 == 0)
        .collect();
    let mut by_dim: Vec<BTreeSet<u128>> = vec![BTreeSet::new(); n / 4 + 1];
    by_dim[0].insert(1);
    for d in 1..=n / 4 {
        let mut here = BTreeSet::new();
        for &(bd, a) in &blocks {
            if bd / 4 > d {
                continue;
            }
            for &v in &by_dim[d - bd / 4] {
                let x = v.saturating_mul(a);
                if x <= cap {
                    here.insert(x);
                }
            }
        }
        by_dim[d] = here;
    }
    by_dim.pop().unwrap_or_default()
}

/// Minimal number of connected catalog products of dimension `n` whose α-values
/// add up to `a`; α = Â/2 in dimensions `8l + 4`.
pub fn pn_bruteforce(n: usize, a: u64, max_components: usize) -> Result<PnSearch> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::Precondition(format!("dimension {n} is not divisible by 4")));
    }
    if max_components > 8 {
        return Err(Error::Precondition(format!("max_components {max_components} exceeds 8")));
    }
    if a == 0 {
        return Ok(PnSearch {
            count: Some(0),
            parts: vec![],
        });
    }
    let scale: u128 = if n % 8 == 4 { 2 } else { 1 };
    let target = a as u128 * scale;
    let coins: Vec<u128> = product_ahats(n, target)
        .into_iter()
        .filter(|&v| v > 0 && v % scale == 0)
        .collect();
    let none = PnSearch {
        count: None,
        parts: vec![],
    };
    let Some(&top) = coins.last() else {
        return Ok(none);
    };
    if target > top * max_components as u128 {
        return Ok(none);
    }
    // iterative deepening over non-increasing coin sequences
    fn dfs(coins: &[u128], rest: u128, slots: usize, from: usize, path: &mut Vec<u128>) -> bool {
        if rest == 0 {
            return true;
        }
        if slots == 0 {
            return false;
        }
        for i in (0..=from).rev() {
            let c = coins[i];
            if c > rest {
                continue;
            }
            if c * (slots as u128) < rest {
                return false;
            }
            path.push(c);
            if dfs(coins, rest - c, slots - 1, i, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    for k in 1..=max_components {
        let mut path = Vec::new();
        if dfs(&coins, target, k, coins.len() - 1, &mut path) {
            return Ok(PnSearch {
                count: Some(k),
                parts: path,
            });
        }
    }
    Ok(none)
}

/// α input matching the dimension class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusInput {
    /// Â-genus, for `n ≡ 0 mod 4`.
    Ahat(i64),
    /// Nontrivial mod-2 α, for `n ≡ 1, 2 mod 8`.
    Mod2(bool),
    /// No genus data; α vanishes for the remaining dimensions.
    None,
}

fn upper_ser<S: Serializer>(v: &Option<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_u64(*x),
        None => s.serialize_str("unknown"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaReport {
    pub n: usize,
    /// `|α|`, the integer α for `n ≡ 0 mod 4` and 0/1 for the mod-2 classes.
    pub alpha: u64,
    pub lower: u64,
    #[serde(serialize_with = "upper_ser")]
    pub upper: Option<u64>,
    pub exact: Option<u64>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub spin: bool,
    pub simply_connected: bool,
    #[serde(serialize_with = "upper_ser")]
    pub kappa_prime_upper: Option<u64>,
}

impl KappaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn exact(n: usize, alpha: u64, value: u64, cite: &str, spin: bool, sc: bool) -> Self {
        KappaReport {
            n,
            alpha,
            lower: value,
            upper: Some(value),
            exact: Some(value),
            witnesses: vec![],
            notes: vec![cite.into()],
            spin,
            simply_connected: sc,
            kappa_prime_upper: Some(value),
        }
    }
}

/// Combines the lower bound from the Â-genus with the bordism upper bounds.
pub fn kappa_bounds(n: usize, genus: GenusInput, spin: bool, simply_connected: bool) -> Result<KappaReport> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let r8 = n % 8;
    let mut notes = Vec::new();
    let alpha = match genus {
        GenusInput::Ahat(a) => {
            if n % 4 != 0 {
                return Err(Error::InconsistentFlags(format!("A-hat given in dimension {n}")));
            }
            if a != 0 && !spin {
                return Err(Error::InconsistentFlags("an A-hat value needs a spin manifold".into()));
            }
            if a < 0 {
                notes.push("negative A-hat: orientation reversed, |.| used".into());
            }
            alpha_from_ahat(n, a)?.unsigned_abs()
        }
        GenusInput::Mod2(b) => {
            if !matches!(r8, 1 | 2) {
                return Err(Error::InconsistentFlags(format!("mod-2 alpha given in dimension {n}")));
            }
            if b && !spin {
                return Err(Error::InconsistentFlags("a nontrivial alpha needs a spin manifold".into()));
            }
            u64::from(b)
        }
        GenusInput::None => {
            if spin && (n % 4 == 0 || matches!(r8, 1 | 2)) {
                return Err(Error::InconsistentFlags(format!(
                    "dimension {n} needs the genus of a spin manifold"
                )));
            }
            0
        }
    };
    let big = simply_connected && n >= 5;

    if big && (!spin || alpha == 0) {
        return Ok(KappaReport::exact(n, alpha, 0, CITE_PSC, spin, simply_connected));
    }
    if big && spin && matches!(r8, 1 | 2) {
        let l = (n / 8) as u32;
        let mut report = KappaReport::exact(n, alpha, alpha, CITE_MOD2, spin, simply_connected);
        let circles = (n % 8) as u32;
        let w = Witness::new(vec![Component::new(&[("V1", l), ("S1", circles)], 1)?], CITE_MOD2);
        if w.components[0].dim != n {
            return Err(Error::Precondition("mod-2 witness has the wrong dimension".into()));
        }
        report.witnesses.push(w);
        return Ok(report);
    }

    let mut lower = 0;
    if let (GenusInput::Ahat(a), true) = (genus, spin) {
        let b = theorem24_kappa_lower(a, n);
        if b.applicable {
            lower = b.lower;
            notes.push(CITE_DIRAC.into());
        }
    }
    let mut upper = None;
    let mut witnesses = Vec::new();
    if big && n % 4 == 0 {
        let pn = pn_upper(n, alpha as i64)?;
        upper = Some(pn.bound);
        let mut w = pn.witness;
        w.cite = format!("{CITE_PN}; {}", w.cite);
        witnesses.push(w);
        notes.push(CATALOG_NOTE.into());
    } else if !simply_connected {
        notes.push("not simply connected: bordism upper bounds do not apply".into());
    } else {
        notes.push(format!("dimension {n} < 5: bordism upper bounds do not apply"));
    }
    if let Some(u) = upper {
        if lower > u {
            return Err(Error::Precondition(format!("lower bound {lower} exceeds upper bound {u}")));
        }
    }
    notes.push(KAPPA_PRIME_NOTE.into());
    Ok(KappaReport {
        n,
        alpha,
        lower,
        upper,
        exact: upper.filter(|&u| u == lower),
        witnesses,
        notes,
        spin,
        simply_connected,
        kappa_prime_upper: upper,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableExponent {
    pub p: u64,
    pub a: u32,
    pub b: u64,
    pub witness: Witness,
}

/// Number of `B` factors after which `κ(M × Bᵖ) ≤ 1`, following the
/// factorization `Â = 2^a(2b+1)` (with an extra factor 2 in dimension `8l + 4`).
pub fn stable_exponent(n: usize, ahat: i64) -> Result<StableExponent> {
    let (l, k3) = dimension_class(n)?;
    if ahat == 0 {
        return Ok(StableExponent {
            p: 0,
            a: 0,
            b: 0,
            witness: Witness::new(vec![], CITE_PSC),
        });
    }
    let abs = ahat.unsigned_abs();
    let x = if k3 {
        if abs % 2 != 0 {
            return Err(Error::Normalization(format!("odd A-hat {ahat} in dimension {n}")));
        }
        abs / 2
    } else {
        abs
    };
    let a = x.trailing_zeros();
    let b = (x >> a) / 2;
    let need = a as u64 + b;
    let mut f: Vec<(&str, u32)> = if k3 { vec![("K3", 1)] } else { vec![] };
    let h = format!("H{}", 2 * b);
    let hp = u32::from(b > 0);
    let p = need.saturating_sub(l as u64);
    if need <= l as u64 {
        f.push(("V1", l - need as u32));
    }
    f.push(("V2", a));
    f.push((h.as_str(), hp));
    let comp = Component::new(&f, 1)?;
    let witness = Witness::new(vec![comp], CITE_STABLE);
    if !witness.verify(n + 8 * p as usize, abs as u128) || witness.count != 1 {
        return Err(Error::Precondition(format!("stable witness for ({n}, {ahat}) failed verification")));
    }
    Ok(StableExponent { p, a, b, witness })
}

/// `κ(M₁ + … + M_k) = Σ κ(Mᵢ)` for exactly known parts.
pub fn kappa_disjoint_union(parts: &[KappaReport]) -> Result<u64> {
    parts.iter().try_fold(0, |s, r| {
        r.exact
            .map(|k| s + k)
            .ok_or_else(|| Error::Inexact(format!("part of dimension {} has no exact value", r.n)))
    })
}

/// Manifolds whose κ follows from an explicit metric plus an obstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Known {
    Sphere(usize),
    Torus(usize),
    K3,
    /// `K3 # … # K3` with `k` summands.
    K3Sum(u64),
}

pub fn known_kappa(m: Known) -> Result<KappaReport> {
    Ok(match m {
        Known::Sphere(n) => {
            if n < 3 {
                return Err(Error::UnsupportedDimension(n));
            }
            KappaReport::exact(n, 0, 0, "round metric has positive scalar curvature", true, true)
        }
        Known::Torus(n) => {
            if n < 3 {
                return Err(Error::UnsupportedDimension(n));
            }
            KappaReport::exact(n, 0, 1, CITE_FLAT, true, false)
        }
        Known::K3 => {
            let mut r = KappaReport::exact(4, 1, 1, CITE_SCALAR_FLAT, true, true);
            r.notes.push(CITE_DIRAC.into());
            r
        }
        Known::K3Sum(k) => {
            let s = k3_sum_sandwich(k)?;
            let mut r = KappaReport::exact(4, k, k, CITE_DIRAC, true, true);
            r.lower = s.lower;
            r.notes.push(format!("{CITE_SURGERY}; {CITE_UNION}"));
            r
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sandwich {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
}

/// `k ≤ κ(#ₖK3) ≤ k`: Â-bound from below, disjoint-union additivity plus
/// surgery monotonicity from above.
pub fn k3_sum_sandwich(k: u64) -> Result<Sandwich> {
    if k == 0 {
        return Err(Error::Precondition("need at least one summand".into()));
    }
    let ahat = i64::try_from(2 * k).map_err(|_| Error::OutOfRange(format!("{k} summands")))?;
    let lower = theorem24_kappa_lower(ahat, 4).lower;
    let parts = vec![known_kappa(Known::K3)?; k as usize];
    let upper = kappa_disjoint_union(&parts)?;
    Ok(Sandwich {
        lower,
        upper,
        exact: (lower == upper).then_some(lower),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub claim: String,
    pub cite: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringExample {
    pub name: String,
    /// `"unchanged"`, `"increases"` or `"decreases"`.
    pub relation: String,
    pub base: Sandwich,
    pub cover: Sandwich,
    pub steps: Vec<ChainStep>,
    pub verified: bool,
}

fn step(claim: String, cite: &str) -> ChainStep {
    ChainStep {
        claim,
        cite: cite.into(),
    }
}

/// The three covering phenomena: torus (unchanged), `K3 # T⁴` under a
/// `k`-fold cover (increases), and a lens-space product summed with an exotic
/// sphere of order `exotic_order` (decreases).
pub fn covering_examples(k: u64, exotic_order: u64) -> Result<Vec<CoveringExample>> {
    if k < 3 {
        return Err(Error::Precondition(format!("the increasing example needs k >= 3, got {k}")));
    }
    if exotic_order < 2 {
        return Err(Error::Precondition("an exotic sphere has order at least 2".into()));
    }
    let torus = known_kappa(Known::Torus(4))?;
    let t = torus.exact.unwrap_or(0);
    let ex1 = CoveringExample {
        name: format!("T^4 and its {k}-fold cover"),
        relation: "unchanged".into(),
        base: Sandwich {
            lower: t,
            upper: t,
            exact: Some(t),
        },
        cover: Sandwich {
            lower: t,
            upper: t,
            exact: Some(t),
        },
        steps: vec![
            step(format!("kappa(T^4) = {t}"), CITE_FLAT),
            step("every finite cover of T^4 is diffeomorphic to T^4".into(), "covering of a torus"),
        ],
        verified: t == 1,
    };

    let upper = kappa_disjoint_union(&[known_kappa(Known::K3)?, torus])?;
    let ahat_cover = i64::try_from(2 * k).map_err(|_| Error::OutOfRange(format!("cover degree {k}")))?;
    let lower_cover = theorem24_kappa_lower(ahat_cover, 4).lower;
    let ex2 = CoveringExample {
        name: format!("K3 # T^4 and its {k}-fold cover"),
        relation: "increases".into(),
        base: Sandwich {
            lower: 1,
            upper,
            exact: None,
        },
        cover: Sandwich {
            lower: lower_cover,
            upper: lower_cover,
            exact: Some(lower_cover),
        },
        steps: vec![
            step(format!("kappa(K3 # T^4) <= kappa(K3 + T^4) = 1 + 1 = {upper}"), CITE_SURGERY),
            step(
                format!("cover = K3 # ... # K3 # T^4 ({k} copies of K3), A-hat = {k} * 2 = {ahat_cover}"),
                "A-hat is multiplicative under finite covers of the K3 summands",
            ),
            step(format!("kappa(cover) >= {ahat_cover}/2 = {lower_cover} > {upper}"), CITE_DIRAC),
        ],
        verified: lower_cover > upper,
    };

    let n = 9;
    let residue = exotic_order % exotic_order;
    let ex3 = CoveringExample {
        name: format!("(S^3/Z_{exotic_order} x S^{}) # Sigma^{n}", n - 3),
        relation: "decreases".into(),
        base: Sandwich {
            lower: 1,
            upper: 1,
            exact: Some(1),
        },
        cover: Sandwich {
            lower: 0,
            upper: 0,
            exact: Some(0),
        },
        steps: vec![
            step(
                "alpha(M) = alpha(Sigma) is nontrivial and M is spin: no psc metric, kappa(M) >= 1".into(),
                "alpha obstruction",
            ),
            step(
                format!(
                    "universal cover = (S^3 x S^{}) # {exotic_order} Sigma; {exotic_order} * [Sigma] = {residue} in the group of homotopy spheres",
                    n - 3
                ),
                "Sigma has order k",
            ),
            step(format!("S^3 x S^{} carries psc: kappa(cover) = 0", n - 3), CITE_PSC),
        ],
        verified: residue == 0,
    };
    Ok(vec![ex1, ex2, ex3])
}
