//! Weight multiplicities of standard `A_n^(1)` modules by the affine
//! Freudenthal recursion, and the traces built from them.
//!
//! A weight of `L(Λ̂)` is written `Λ̂ + β - dδ` with `β ∈ Q` in simple-root
//! coordinates and `d ≥ 0` its depth. All geometry is integral in these
//! coordinates, so the recursion runs on `i64` inner products and `BigInt`
//! multiplicities.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fermionic::{parse_weight_terms, HighestWeight};
use crate::lattice::{LatticeContext, LatticeError, WeightVec};
use crate::qseries::{euler_inf, QSeries};
use crate::rational::{int, Rational};

const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("insufficient precision: requested order {requested}, table depth {available}")]
    InsufficientPrecision { requested: Rational, available: usize },
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("cache i/o: {0}")]
    Io(String),
}

/// A dominant integral affine weight `Σ_{i=0}^{n} l_i Λ̂_i` of positive level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominantWeight {
    labels: Vec<usize>,
}

impl DominantWeight {
    pub fn new(labels: Vec<usize>) -> Result<Self, OracleError> {
        if labels.len() < 2 {
            return Err(OracleError::InvalidWeight("rank must be at least 1".into()));
        }
        if labels.iter().sum::<usize>() == 0 {
            return Err(OracleError::InvalidWeight("level must be positive".into()));
        }
        Ok(Self { labels })
    }

    /// Parses `"1*L1+1*L2"`-style sums; unlisted labels are 0.
    pub fn parse(n: usize, spec: &str) -> Result<Self, OracleError> {
        let terms = parse_weight_terms(spec).map_err(OracleError::InvalidWeight)?;
        let mut labels = vec![0usize; n + 1];
        let mut seen = vec![false; n + 1];
        for (index, coeff) in terms {
            if index > n {
                return Err(OracleError::InvalidWeight(format!(
                    "L{index} out of range for rank {n}"
                )));
            }
            if seen[index] {
                return Err(OracleError::InvalidWeight(format!("L{index} repeated")));
            }
            seen[index] = true;
            labels[index] = coeff;
        }
        Self::new(labels)
    }

    pub fn rank(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn level(&self) -> usize {
        self.labels.iter().sum()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn finite_weight(&self) -> WeightVec {
        WeightVec::from_ints(&self.labels[1..].iter().map(|&l| l as i64).collect::<Vec<_>>())
    }
}

impl From<&HighestWeight> for DominantWeight {
    fn from(hw: &HighestWeight) -> Self {
        let mut labels = vec![0usize; hw.n() + 1];
        labels[0] = hw.k0();
        if let Some(j) = hw.j() {
            labels[j] += hw.kj();
        }
        Self { labels }
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, l)| format!("{l}*L{i}"))
            .collect();
        f.write_str(&terms.join("+"))
    }
}

/// `Λ̂ + β - dδ` by its finite part and depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeight {
    pub finite: WeightVec,
    pub depth: usize,
}

/// Where a table came from when loaded through the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
    Rebuilt,
}

/// Multiplicities of all weights of `L(Λ̂)` down to a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    weight: DominantWeight,
    max_depth: usize,
    ctx: LatticeContext,
    /// `levels[d]` maps `β` (simple-root coordinates of `μ - Λ`) to the
    /// nonzero multiplicity at depth `d`.
    levels: Vec<BTreeMap<Vec<i64>, BigInt>>,
}

struct Geometry {
    n: usize,
    k: i64,
    cartan: Vec<Vec<i64>>,
    labels: Vec<i64>,
    roots: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
}

impl Geometry {
    fn new(weight: &DominantWeight, ctx: &LatticeContext) -> Self {
        Self {
            n: weight.rank(),
            k: weight.level() as i64,
            cartan: ctx.cartan().to_vec(),
            labels: weight.labels[1..].iter().map(|&l| l as i64).collect(),
            roots: ctx.roots(),
            positive: ctx.positive_roots(),
        }
    }

    fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                total += a[i] * self.cartan[i][j] * b[j];
            }
        }
        total
    }

    /// `⟨Λ, β⟩`.
    fn lambda_dot(&self, b: &[i64]) -> i64 {
        self.labels.iter().zip(b).map(|(l, c)| l * c).sum()
    }

    /// `|β|²/2 + ⟨Λ, β⟩`, which is `(|Λ+β|² - |Λ|²)/2`; weights at depth
    /// `d` have it at most `kd`.
    fn half_excess(&self, b: &[i64]) -> i64 {
        self.inner(b, b) / 2 + self.lambda_dot(b)
    }

    /// `|Λ̂+ρ̂|² - |Λ̂+β-dδ+ρ̂|²`.
    fn denominator(&self, b: &[i64], d: i64) -> i64 {
        let h = self.n as i64 + 1;
        let rho_dot: i64 = b.iter().sum();
        2 * (self.k + h) * d - self.inner(b, b) - 2 * self.lambda_dot(b) - 2 * rho_dot
    }
}

fn shifted(b: &[i64], alpha: &[i64], j: i64) -> Vec<i64> {
    b.iter().zip(alpha).map(|(x, a)| x + j * a).collect()
}

impl MultTable {
    pub fn build(weight: &DominantWeight, max_depth: usize) -> Result<Self, OracleError> {
        Self::build_with(weight, max_depth, None)
    }

    /// Builds the table, processing each batch of independent weights in an
    /// order scrambled by `seed` (results must not depend on it).
    pub fn build_with(weight: &DominantWeight, max_depth: usize, seed: Option<u64>) -> Result<Self, OracleError> {
        let ctx = LatticeContext::new(weight.rank())?;
        let geo = Geometry::new(weight, &ctx);
        let lambda = weight.finite_weight();
        let mut levels: Vec<BTreeMap<Vec<i64>, BigInt>> = Vec::with_capacity(max_depth + 1);
        for d in 0..=max_depth {
            let candidates = ctx.vectors_by_norm(Rational::new(1, 2), &lambda, int(geo.k * d as i64))?;
            // Roots with no δ part raise the height, so equal heights are
            // independent of each other.
            let mut by_height: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
            for (b, _) in candidates {
                by_height.entry(-b.iter().sum::<i64>()).or_default().push(b);
            }
            let mut level: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
            for (_, mut batch) in by_height {
                if let Some(s) = seed {
                    batch.sort_by_key(|b| {
                        let mut h = DefaultHasher::new();
                        (s, b).hash(&mut h);
                        h.finish()
                    });
                }
                let computed: Vec<(Vec<i64>, BigInt)> = batch
                    .par_iter()
                    .map(|b| freudenthal_step(&geo, &levels, &level, b, d).map(|m| (b.clone(), m)))
                    .collect::<Result<_, _>>()?;
                for (b, m) in computed {
                    if !m.is_zero() {
                        level.insert(b, m);
                    }
                }
            }
            levels.push(level);
        }
        Ok(Self {
            weight: weight.clone(),
            max_depth,
            ctx,
            levels,
        })
    }

    /// Loads the table from `dir` if a valid cache file exists, otherwise
    /// builds it and writes the cache.
    pub fn load_or_build(
        weight: &DominantWeight,
        max_depth: usize,
        dir: &Path,
    ) -> Result<(Self, CacheOutcome), OracleError> {
        let path = cache_path(dir, weight, max_depth);
        let existed = path.exists();
        if existed {
            if let Some(table) = fs::read_to_string(&path)
                .ok()
                .and_then(|t| Self::from_cache_text(weight, max_depth, &t))
            {
                return Ok((table, CacheOutcome::Hit));
            }
        }
        let table = Self::build(weight, max_depth)?;
        table.write_cache(dir)?;
        Ok((
            table,
            if existed {
                CacheOutcome::Rebuilt
            } else {
                CacheOutcome::Built
            },
        ))
    }

    pub fn write_cache(&self, dir: &Path) -> Result<PathBuf, OracleError> {
        fs::create_dir_all(dir).map_err(|e| OracleError::Io(e.to_string()))?;
        let path = cache_path(dir, &self.weight, self.max_depth);
        let text = serde_json::to_string(&self.to_cache_doc()).map_err(|e| OracleError::Io(e.to_string()))?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text).map_err(|e| OracleError::Io(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| OracleError::Io(e.to_string()))?;
        Ok(path)
    }

    fn to_cache_doc(&self) -> CacheDoc {
        let mut entries = Vec::new();
        for (d, level) in self.levels.iter().enumerate() {
            for (b, m) in level {
                entries.push(CacheEntry {
                    weight: b.clone(),
                    depth: d,
                    mult: m.to_string(),
                });
            }
        }
        CacheDoc {
            params: CacheParams {
                n: self.weight.rank(),
                k: self.weight.level(),
                labels: self.weight.labels.clone(),
                max_depth: self.max_depth,
            },
            version: CACHE_VERSION,
            cartan: self.ctx.cartan().to_vec(),
            entries,
        }
    }

    fn from_cache_text(weight: &DominantWeight, max_depth: usize, text: &str) -> Option<Self> {
        let doc: CacheDoc = serde_json::from_str(text).ok()?;
        let n = weight.rank();
        let ctx = LatticeContext::new(n).ok()?;
        let expected = CacheParams {
            n,
            k: weight.level(),
            labels: weight.labels.clone(),
            max_depth,
        };
        if doc.version != CACHE_VERSION || doc.params != expected || doc.cartan != ctx.cartan() {
            return None;
        }
        let mut levels = vec![BTreeMap::new(); max_depth + 1];
        for e in doc.entries {
            if e.weight.len() != n || e.depth > max_depth {
                return None;
            }
            let m: BigInt = e.mult.parse().ok()?;
            if !m.is_positive() || levels[e.depth].insert(e.weight, m).is_some() {
                return None;
            }
        }
        if levels[0].get(&vec![0; n]) != Some(&BigInt::from(1)) {
            return None;
        }
        Some(Self {
            weight: weight.clone(),
            max_depth,
            ctx,
            levels,
        })
    }

    pub fn weight(&self) -> &DominantWeight {
        &self.weight
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn level(&self) -> usize {
        self.weight.level()
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    /// `β`, the simple-root coordinates of `μ - Λ`, when `μ ∈ Λ + Q`.
    pub fn offset(&self, finite: &WeightVec) -> Option<Vec<i64>> {
        self.ctx.root_coords(&finite.sub(&self.weight.finite_weight())).ok()
    }

    pub fn mult(&self, weight: &AffineWeight) -> BigInt {
        if weight.depth > self.max_depth {
            return BigInt::zero();
        }
        self.offset(&weight.finite)
            .and_then(|b| self.levels[weight.depth].get(&b).cloned())
            .unwrap_or_default()
    }

    /// Nonzero entries at `depth`, keyed by `β`.
    pub fn level_entries(&self, depth: usize) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.levels[depth]
    }

    pub fn entries(&self) -> impl Iterator<Item = (AffineWeight, &BigInt)> + '_ {
        let lambda = self.weight.finite_weight();
        self.levels.iter().enumerate().flat_map(move |(d, level)| {
            let lambda = lambda.clone();
            level.iter().map(move |(b, m)| {
                (
                    AffineWeight {
                        finite: lambda.add(&self.ctx.from_root_coords(b)),
                        depth: d,
                    },
                    m,
                )
            })
        })
    }

    /// Total dimension of the depth-`d` subspace.
    pub fn depth_dimension(&self, depth: usize) -> BigInt {
        self.levels[depth].values().sum()
    }

    fn check_order(&self, order: Rational) -> Result<(), OracleError> {
        if order > int(self.max_depth as i64) {
            Err(OracleError::InsufficientPrecision {
                requested: order,
                available: self.max_depth,
            })
        } else {
            Ok(())
        }
    }

    /// `Σ_d mult(μ, d) q^d`; zero when `μ ∉ Λ + Q`.
    pub fn weight_trace(&self, mu: &WeightVec, order: Rational) -> Result<QSeries, OracleError> {
        self.check_order(order)?;
        let mut out = QSeries::zero(order);
        if let Some(b) = self.offset(mu) {
            for (d, level) in self.levels.iter().enumerate() {
                if int(d as i64) > order {
                    break;
                }
                if let Some(m) = level.get(&b) {
                    out.add_term(int(d as i64), m.clone());
                }
            }
        }
        Ok(out)
    }

    /// Exponent of the string-function prefactor,
    /// `|Λ+ρ|²/2(k+h∨) - |ρ|²/2h∨ - |μ|²/2k`.
    pub fn string_prefactor(&self, mu: &WeightVec) -> Result<Rational, OracleError> {
        let k = int(self.level() as i64);
        let h = int(self.ctx.dual_coxeter());
        let lr = self.weight.finite_weight().add(&self.ctx.rho());
        Ok(self.ctx.norm_sq(&lr)? / (int(2) * (k + h))
            - self.ctx.rho_normsq() / (int(2) * h)
            - self.ctx.norm_sq(mu)? / (int(2) * k))
    }

    /// The string function `c^Λ̂_μ`, with `order` bounding the depth.
    pub fn string_function(&self, mu: &WeightVec, order: Rational) -> Result<QSeries, OracleError> {
        let trace = self.weight_trace(mu, order)?;
        Ok(trace.shift(self.string_prefactor(mu)?))
    }

    /// The element of minimal norm in `Λ + Σ c_i α_i + kQ`, ties broken by
    /// the smallest simple-root coordinates of `μ - Λ`.
    pub fn class_representative(&self, residues: &[i64]) -> Result<WeightVec, OracleError> {
        let n = self.weight.rank();
        if residues.len() != n {
            return Err(OracleError::InvalidWeight(format!("expected {n} class coordinates")));
        }
        let k = self.level() as i64;
        let c: Vec<i64> = residues.iter().map(|r| r.rem_euclid(k)).collect();
        let nu = self.weight.finite_weight().add(&self.ctx.from_root_coords(&c));
        let points = self.ctx.vectors_by_norm(Rational::new(k, 2), &nu, Rational::zero())?;
        let best = points
            .into_iter()
            .map(|(a, v)| (v, shifted(&c, &a, k)))
            .min()
            .expect("α = 0 is always within bound 0");
        Ok(self.weight.finite_weight().add(&self.ctx.from_root_coords(&best.1)))
    }

    /// `(q)_∞^n q^{(|Λ|²-|μ|²)/2k} Tr_{L_μ} q^D`, the parafermionic trace of
    /// the class of `μ`, valid to `order`.
    pub fn class_trace(&self, mu: &WeightVec, order: Rational) -> Result<QSeries, OracleError> {
        let k = int(self.level() as i64);
        let shift = (self.ctx.norm_sq(&self.weight.finite_weight())? - self.ctx.norm_sq(mu)?) / (int(2) * k);
        let trace = self.weight_trace(mu, order - shift)?.shift(shift);
        let mut factor = QSeries::one(order);
        let euler = euler_inf(order);
        for _ in 0..self.weight.rank() {
            factor = factor.mul(&euler);
        }
        let out = trace.mul(&factor).truncate(order);
        if let Some((e, c)) = out.terms().find(|(_, c)| c.is_negative()) {
            return Err(OracleError::Consistency(format!(
                "negative coefficient {c} at q^{e} in the class of {mu}"
            )));
        }
        Ok(out)
    }

    /// All classes of `(Λ + Q)/kQ`, as residues in `{0..k-1}^n`.
    pub fn classes(&self) -> Vec<Vec<i64>> {
        let n = self.weight.rank();
        let k = self.level() as i64;
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..k).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// `Tr q^{D - D^ĥ}` summed over the given classes (all when `None`).
    pub fn parafermionic_trace(&self, classes: Option<&[Vec<i64>]>, order: Rational) -> Result<QSeries, OracleError> {
        let all = self.classes();
        let chosen = classes.unwrap_or(&all);
        let mut total = QSeries::zero(order);
        for c in chosen {
            let rep = self.class_representative(c)?;
            total = total.add(&self.class_trace(&rep, order)?);
        }
        Ok(total)
    }
}

fn lookup<'a>(
    levels: &'a [BTreeMap<Vec<i64>, BigInt>],
    current: &'a BTreeMap<Vec<i64>, BigInt>,
    b: &[i64],
    d: usize,
    at: usize,
) -> Option<&'a BigInt> {
    if at == d {
        current.get(b)
    } else {
        levels[at].get(b)
    }
}

fn freudenthal_step(
    geo: &Geometry,
    levels: &[BTreeMap<Vec<i64>, BigInt>],
    current: &BTreeMap<Vec<i64>, BigInt>,
    b: &[i64],
    d: usize,
) -> Result<BigInt, OracleError> {
    if d == 0 && b.iter().all(|&c| c == 0) {
        return Ok(BigInt::from(1));
    }
    let k = geo.k;
    let bound = k * d as i64;
    let mut rhs = BigInt::zero();

    // α + 0δ, α > 0: stays at depth d.
    for alpha in &geo.positive {
        let base = geo.inner(b, alpha) + geo.lambda_dot(alpha);
        let vertex = -(base as f64) / 2.0;
        let mut j = 1i64;
        loop {
            let next = shifted(b, alpha, j);
            if geo.half_excess(&next) > bound {
                if j as f64 >= vertex {
                    break;
                }
            } else if let Some(m) = lookup(levels, current, &next, d, d) {
                rhs += m * (base + 2 * j);
            }
            j += 1;
        }
    }
    // α + mδ for every root α and m ≥ 1, and mδ with multiplicity n.
    for step in 1..=d {
        for j in 1..=(d / step) {
            let at = d - j * step;
            let km = k * step as i64;
            for alpha in &geo.roots {
                let next = shifted(b, alpha, j as i64);
                if let Some(m) = lookup(levels, current, &next, d, at) {
                    let pairing = geo.inner(b, alpha) + geo.lambda_dot(alpha) + 2 * j as i64 + km;
                    rhs += m * pairing;
                }
            }
            if let Some(m) = lookup(levels, current, b, d, at) {
                rhs += m * (km * geo.n as i64);
            }
        }
    }
    rhs *= 2;
    let denom = geo.denominator(b, d as i64);
    if denom == 0 {
        if rhs.is_zero() {
            return Ok(BigInt::zero());
        }
        return Err(OracleError::Consistency(format!(
            "zero denominator at β = {b:?}, depth {d}"
        )));
    }
    let (q, r) = rhs.div_rem(&BigInt::from(denom));
    if !r.is_zero() || q.is_negative() {
        return Err(OracleError::Consistency(format!(
            "non-integral or negative multiplicity at β = {b:?}, depth {d}"
        )));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CacheParams {
    n: usize,
    k: usize,
    labels: Vec<usize>,
    max_depth: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    weight: Vec<i64>,
    depth: usize,
    mult: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheDoc {
    params: CacheParams,
    version: u32,
    cartan: Vec<Vec<i64>>,
    entries: Vec<CacheEntry>,
}

pub fn cache_path(dir: &Path, weight: &DominantWeight, max_depth: usize) -> PathBuf {
    let labels: Vec<String> = weight.labels.iter().map(usize::to_string).collect();
    dir.join(format!(
        "mult-n{}-l{}-d{}.json",
        weight.rank(),
        labels.join("_"),
        max_depth
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn table(n: usize, spec: &str, depth: usize) -> MultTable {
        MultTable::build(&DominantWeight::parse(n, spec).unwrap(), depth).unwrap()
    }

    #[test]
    fn level_one_sl2_is_partitions() {
        let t = table(1, "1*L0", 8);
        let trace = t.weight_trace(&WeightVec::from_ints(&[0]), int(8)).unwrap();
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (d, &v) in p.iter().enumerate() {
            assert_eq!(trace.coeff(&int(d as i64)), BigInt::from(v));
        }
        // weight ±α sits at depth m² = 1 and below
        let alpha = WeightVec::from_ints(&[2]);
        let shifted = t.weight_trace(&alpha, int(8)).unwrap();
        assert_eq!(shifted.leading_exponent(), Some(int(1)));
        assert_eq!(shifted.coeff(&int(5)), BigInt::from(5));
    }

    #[test]
    fn highest_weight_and_outside_lattice() {
        let t = table(2, "1*L0+1*L1", 3);
        let lambda = t.weight().finite_weight();
        assert_eq!(
            t.mult(&AffineWeight {
                finite: lambda.clone(),
                depth: 0
            }),
            BigInt::from(1)
        );
        assert!(t.weight_trace(&WeightVec::zero(2), int(3)).unwrap().is_zero());
        assert!(matches!(
            t.weight_trace(&lambda, int(4)),
            Err(OracleError::InsufficientPrecision { .. })
        ));
        // depth 0 is the 3-dimensional module
        assert_eq!(t.depth_dimension(0), BigInt::from(3));
    }

    #[test]
    fn weyl_invariance() {
        for (n, spec) in [
            (1, "2*L0"),
            (2, "2*L0"),
            (2, "1*L0+1*L2"),
            (2, "1*L1+1*L2"),
            (3, "1*L0+1*L2"),
        ] {
            let t = table(n, spec, 6);
            let ctx = t.context().clone();
            for (w, m) in t.entries() {
                for i in 1..=n {
                    let label = w.finite.dynkin_labels().unwrap()[i - 1];
                    let reflected = w.finite.sub(&ctx.simple_root(i).unwrap().scale(int(label)));
                    let image = AffineWeight {
                        finite: reflected,
                        depth: w.depth,
                    };
                    assert_eq!(&t.mult(&image), m, "{spec}: s_{i} of {w:?}");
                }
            }
        }
    }

    #[test]
    fn processing_order_does_not_matter() {
        let w = DominantWeight::parse(2, "1*L0+1*L1").unwrap();
        let base = MultTable::build(&w, 6).unwrap();
        for seed in [1u64, 7, 12345] {
            let other = MultTable::build_with(&w, 6, Some(seed)).unwrap();
            assert_eq!(base, other);
            for d in 0..=6 {
                assert_eq!(base.depth_dimension(d), other.depth_dimension(d));
            }
        }
    }

    #[test]
    fn string_function_normalization() {
        let t = table(2, "2*L0", 4);
        let c = t.string_function(&WeightVec::zero(2), int(4)).unwrap();
        assert_eq!(c.leading_exponent(), Some(frac(-2, 15)));
        let t = table(2, "1*L0+1*L1", 4);
        let c = t.string_function(&WeightVec::from_ints(&[1, 0]), int(4)).unwrap();
        assert_eq!(c.leading_exponent(), Some(frac(-1, 30)));
    }

    #[test]
    fn string_functions_related_by_diagram_automorphism() {
        let a = table(2, "1*L0+1*L1", 8);
        let b = table(2, "1*L0+1*L2", 8);
        let ca = a.string_function(&WeightVec::from_ints(&[1, 0]), int(8)).unwrap();
        let cb = b.string_function(&WeightVec::from_ints(&[0, 1]), int(8)).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn class_representatives_are_interchangeable() {
        let t = table(2, "2*L0", 14);
        let ctx = t.context().clone();
        for c in t.classes() {
            let rep = t.class_representative(&c).unwrap();
            let a = t.class_trace(&rep, int(6)).unwrap();
            for shift in [[1i64, 0], [0, -1], [1, 1]] {
                let other = rep.add(&ctx.from_root_coords(&shift).scale(int(2)));
                let b = t.class_trace(&other, int(6)).unwrap();
                assert_eq!(a, b, "class {c:?}");
            }
        }
    }

    #[test]
    fn vacuum_class_starts_at_one() {
        let t = table(2, "2*L0", 4);
        let s = t.parafermionic_trace(Some(&[vec![0, 0]]), int(4)).unwrap();
        assert_eq!(s.leading_exponent(), Some(int(0)));
        assert_eq!(s.coeff(&int(0)), BigInt::from(1));
        assert_eq!(t.classes().len(), 4);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let w = DominantWeight::parse(2, "1*L0+1*L1").unwrap();
        let (a, o1) = MultTable::load_or_build(&w, 4, dir.path()).unwrap();
        assert_eq!(o1, CacheOutcome::Built);
        let (b, o2) = MultTable::load_or_build(&w, 4, dir.path()).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(a, b);
        let path = cache_path(dir.path(), &w, 4);
        let text = fs::read_to_string(&path).unwrap();
        for bad in [
            "{not json".to_string(),
            text.replace("\"version\":1", "\"version\":99"),
            text.replace("\"cartan\":[[2,-1]", "\"cartan\":[[2,0]"),
            text.replace("\"max_depth\":4", "\"max_depth\":5"),
        ] {
            assert_ne!(bad, text);
            fs::write(&path, bad).unwrap();
            let (c, o) = MultTable::load_or_build(&w, 4, dir.path()).unwrap();
            assert_eq!(o, CacheOutcome::Rebuilt);
            assert_eq!(c, a);
        }
    }

    #[test]
    fn parse_dominant_weight() {
        let w = DominantWeight::parse(2, "1*L1+1*L2").unwrap();
        assert_eq!(w.labels(), &[0, 1, 1]);
        assert_eq!(w.level(), 2);
        assert_eq!(w.to_string(), "1*L1+1*L2");
        assert!(DominantWeight::parse(2, "1*L3").is_err());
        assert!(DominantWeight::parse(2, "1*L1+2*L1").is_err());
        let hw = HighestWeight::parse(2, "1*L0+1*L2").unwrap();
        assert_eq!(DominantWeight::from(&hw).labels(), &[1, 0, 1]);
    }
}
