//! Fermionic sums over occupation numbers `p_i^(s)`.
//!
//! Every sum here has the shape `Σ_p q^{E(p)} / ∏ (q)_{p_v}` with `E` a
//! quadratic plus a linear term, positive definite except in [`prop01_sum`]. Since each summand is a
//! series with nonnegative coefficients starting at `q^{E(p)}`, exactly the
//! tuples with `E(p) ≤ order` contribute, and those are enumerated exactly by
//! the ellipsoid walker in [`crate::lattice::ellipsoid`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::lattice::{ellipsoid::Ellipsoid, LatticeContext, LatticeError, WeightVec};
use crate::qseries::{dense_len, dense_mul, pochhammer_inv_dense, QSeries};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FermionicError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),
    #[error("level {0} is too small for this sum")]
    LevelTooSmall(usize),
    #[error("charge bound K = {found} outside the allowed range {allowed}")]
    ChargeBound { found: usize, allowed: String },
    #[error("restriction {0} is not in the class Λ + Q")]
    RestrictionOutsideClass(String),
    #[error("exponent form is not positive definite for n = {n}, k = {k}")]
    NotPositiveDefinite { n: usize, k: usize },
}

/// `Λ̂ = k0 Λ̂0 + kj Λ̂j` at level `k = k0 + kj`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HighestWeight {
    n: usize,
    k: usize,
    k0: usize,
    j: Option<usize>,
    kj: usize,
}

impl HighestWeight {
    pub fn new(n: usize, k0: usize, j: Option<usize>, kj: usize) -> Result<Self, FermionicError> {
        if n == 0 {
            return Err(FermionicError::Lattice(LatticeError::ZeroRank));
        }
        let j = if kj == 0 { None } else { j };
        match j {
            Some(idx) if idx == 0 || idx > n => {
                return Err(FermionicError::InvalidWeight(format!(
                    "index j = {idx} outside 1..={n}"
                )))
            }
            None if kj > 0 => return Err(FermionicError::InvalidWeight("kj > 0 needs an index j".into())),
            _ => {}
        }
        let k = k0 + kj;
        if k == 0 {
            return Err(FermionicError::LevelTooSmall(0));
        }
        Ok(Self { n, k, k0, j, kj })
    }

    pub fn vacuum(n: usize, k: usize) -> Result<Self, FermionicError> {
        Self::new(n, k, None, 0)
    }

    /// Parses `"k0*L0+kj*Lj"` (terms in any order; `L0` alone means `1*L0`).
    pub fn parse(n: usize, spec: &str) -> Result<Self, FermionicError> {
        let bad = |m: &str| FermionicError::InvalidWeight(format!("{spec:?}: {m}"));
        let terms = parse_weight_terms(spec).map_err(|m| bad(&m))?;
        let mut k0 = 0;
        let mut other: Option<(usize, usize)> = None;
        for (index, coeff) in terms {
            if index > n {
                return Err(bad(&format!("L{index} exceeds rank {n}")));
            }
            if index == 0 {
                k0 += coeff;
            } else {
                match other {
                    Some((j, kj)) if j == index => other = Some((j, kj + coeff)),
                    Some(_) => return Err(bad("at most one nonzero Lj with j ≥ 1 is allowed")),
                    None => other = Some((index, coeff)),
                }
            }
        }
        let (j, kj) = match other {
            Some((j, kj)) if kj > 0 => (Some(j), kj),
            _ => (None, 0),
        };
        Self::new(n, k0, j, kj)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn j(&self) -> Option<usize> {
        self.j
    }

    pub fn kj(&self) -> usize {
        self.kj
    }

    pub fn is_vacuum(&self) -> bool {
        self.kj == 0
    }

    /// `j_t`: 0 for `t ≤ k0`, `j` afterwards.
    pub fn j_t(&self, t: usize) -> usize {
        if t <= self.k0 {
            0
        } else {
            self.j.unwrap_or(0)
        }
    }

    /// The finite part `Λ = kj Λ_j`.
    pub fn finite_weight(&self) -> WeightVec {
        let mut coords = vec![0i64; self.n];
        if let Some(j) = self.j {
            coords[j - 1] = self.kj as i64;
        }
        WeightVec::from_ints(&coords)
    }

    /// `Λ̂ - Λ̂_{j_k}`, a weight of the same shape at level `k - 1`.
    pub fn dotted(&self) -> Result<Self, FermionicError> {
        if self.k < 2 {
            return Err(FermionicError::LevelTooSmall(self.k));
        }
        if self.kj > 0 {
            Self::new(self.n, self.k0, self.j, self.kj - 1)
        } else {
            Self::new(self.n, self.k0 - 1, None, 0)
        }
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.j {
            None => write!(f, "{}*L0", self.k0),
            Some(j) if self.k0 == 0 => write!(f, "{}*L{j}", self.kj),
            Some(j) => write!(f, "{}*L0+{}*L{j}", self.k0, self.kj),
        }
    }
}

/// Splits `"a*Lb+c*Ld"` into `(b, a)` pairs.
pub fn parse_weight_terms(spec: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    for raw in spec.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err("empty term".into());
        }
        let (coeff, label) = match term.split_once('*') {
            Some((c, l)) => (
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad coefficient in {term:?}"))?,
                l.trim(),
            ),
            None => (1, term),
        };
        let index = label
            .strip_prefix('L')
            .or_else(|| label.strip_prefix('l'))
            .ok_or_else(|| format!("expected L<index> in {term:?}"))?
            .parse::<usize>()
            .map_err(|_| format!("bad index in {term:?}"))?;
        out.push((index, coeff));
    }
    Ok(out)
}

/// Occupation numbers `p[i][s-1] = p_{i+1}^{(s)}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OccupationTuple {
    p: Vec<Vec<i64>>,
}

impl OccupationTuple {
    pub fn new(p: Vec<Vec<i64>>) -> Self {
        Self { p }
    }

    /// Builds from the flat layout used by the enumerator (color-major).
    pub fn from_flat(n: usize, charges: usize, flat: &[i64]) -> Self {
        assert_eq!(flat.len(), n * charges);
        if charges == 0 {
            return Self::zero(n, 0);
        }
        Self::new(flat.chunks(charges).map(<[i64]>::to_vec).collect())
    }

    pub fn zero(n: usize, charges: usize) -> Self {
        Self::new(vec![vec![0; charges]; n])
    }

    pub fn rank(&self) -> usize {
        self.p.len()
    }

    pub fn max_charge(&self) -> usize {
        self.p.first().map_or(0, Vec::len)
    }

    /// `p_i^{(s)}`, 1-based.
    pub fn get(&self, i: usize, s: usize) -> i64 {
        self.p[i - 1][s - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.p
    }

    /// `r_i = Σ_s s p_i^{(s)}`.
    pub fn r(&self, i: usize) -> i64 {
        self.p[i - 1].iter().enumerate().map(|(s, v)| (s as i64 + 1) * v).sum()
    }

    /// `r_i^{(u)} = Σ_{s≥u} p_i^{(s)}`.
    pub fn dual(&self, i: usize, u: usize) -> i64 {
        self.p[i - 1][u - 1..].iter().sum()
    }

    pub fn color_type(&self) -> Vec<i64> {
        (1..=self.rank()).map(|i| self.r(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().flatten().all(|&v| v == 0)
    }
}

/// Enumeration radius: exactly `order`, or a doubled radius for
/// self-checking (the result is truncated back to `order` either way).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Search {
    #[default]
    Tight,
    Doubled,
}

impl Search {
    /// `order`, or `order + |order| + 1` (twice the radius plus one for a
    /// nonnegative budget, and still a widening for a negative one).
    pub fn bound(self, order: Rational) -> Rational {
        match self {
            Search::Tight => order,
            Search::Doubled => order + order.abs() + int(1),
        }
    }
}

/// Exponent `xᵀ G x + l·x` over nonnegative integer vectors, together with
/// the layout needed to interpret them.
#[derive(Debug, Clone)]
pub struct ExponentForm {
    pub gram: Vec<Vec<Rational>>,
    pub linear: Vec<Rational>,
}

impl ExponentForm {
    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn evaluate(&self, x: &[i64]) -> Rational {
        crate::lattice::ellipsoid::evaluate(&self.gram, &self.linear, x)
    }

    /// All `x ≥ 0` with exponent `≤ bound`, with their exponents, in the
    /// enumerator's deterministic order.
    pub fn points(&self, bound: Rational) -> Result<Vec<(Vec<i64>, Rational)>, LatticeError> {
        Ok(Ellipsoid::new(&self.gram, &self.linear)?
            .with_lower_bounds(0)
            .points(bound))
    }
}

/// `(1/2) Σ A_lm K_st p_l^s p_m^t` plus a linear term, on `n × charges`
/// variables laid out color-major.
fn tensor_form(ctx: &LatticeContext, charges: usize, kernel: impl Fn(usize, usize) -> Rational) -> ExponentForm {
    let n = ctx.rank();
    let dim = n * charges;
    let mut gram = vec![vec![Rational::zero(); dim]; dim];
    let half = Rational::new(1, 2);
    for l in 0..n {
        for m in 0..n {
            let a = ctx.cartan()[l][m];
            if a == 0 {
                continue;
            }
            for s in 0..charges {
                for t in 0..charges {
                    gram[l * charges + s][m * charges + t] = half * int(a) * kernel(s + 1, t + 1);
                }
            }
        }
    }
    ExponentForm {
        gram,
        linear: vec![Rational::zero(); dim],
    }
}

/// Exponent of the principal-subspace sum at charge bound `K`:
/// `(1/2) Σ A_lm min(s,t) p p + Σ_{s=k0+1}^{K} (s-k0) p_j^{(s)}`.
pub fn principal_form(hw: &HighestWeight, charges: usize) -> Result<ExponentForm, FermionicError> {
    let ctx = LatticeContext::new(hw.n)?;
    let mut form = tensor_form(&ctx, charges, |s, t| int(s.min(t) as i64));
    if let Some(j) = hw.j {
        for s in (hw.k0 + 1)..=charges {
            form.linear[(j - 1) * charges + s - 1] += int((s - hw.k0) as i64);
        }
    }
    Ok(form)
}

/// Exponent of the parafermionic sum: inverse Cartan kernel of `sl(k)` and
/// the extra `-(kj/k) Σ s p_j^{(s)}`.
pub fn parafermionic_form(hw: &HighestWeight) -> Result<ExponentForm, FermionicError> {
    let k = hw.k;
    if k < 2 {
        return Err(FermionicError::LevelTooSmall(k));
    }
    let charges = k - 1;
    let ctx = LatticeContext::new(hw.n)?;
    let kk = k as i64;
    let mut form = tensor_form(&ctx, charges, |s, t| {
        int(s.min(t) as i64) - Rational::new((s * t) as i64, kk)
    });
    if let Some(j) = hw.j {
        for s in 1..=charges {
            let mut lin = -Rational::new((hw.kj * s) as i64, kk);
            if s > hw.k0 {
                lin += int((s - hw.k0) as i64);
            }
            form.linear[(j - 1) * charges + s - 1] += lin;
        }
    }
    Ok(form)
}

/// Exponent of the particle/antiparticle vacuum sum. Variables are the
/// `n × k` particle numbers followed by `n` charge-`k` antiparticle numbers.
pub fn prop01_form(n: usize, k: usize) -> Result<ExponentForm, FermionicError> {
    if k == 0 {
        return Err(FermionicError::LevelTooSmall(0));
    }
    let ctx = LatticeContext::new(n)?;
    let base = tensor_form(&ctx, k, |s, t| int(s.min(t) as i64));
    let dim = n * k + n;
    // (p+ - p-) = T x with T the identity on particles and -1 from the
    // antiparticle of color l into slot (l, k).
    let column = |v: usize| -> Vec<(usize, i64)> {
        if v < n * k {
            vec![(v, 1)]
        } else {
            vec![((v - n * k) * k + k - 1, -1)]
        }
    };
    let mut gram = vec![vec![Rational::zero(); dim]; dim];
    for (a, row) in gram.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            for &(u, cu) in &column(a) {
                for &(w, cw) in &column(b) {
                    *entry += base.gram[u][w] * int(cu * cw);
                }
            }
        }
    }
    let half = Rational::new(1, 2);
    for l in 0..n {
        let plus = l * k + k - 1;
        let minus = n * k + l;
        gram[plus][minus] += half;
        gram[minus][plus] += half;
    }
    Ok(ExponentForm {
        gram,
        linear: vec![Rational::zero(); dim],
    })
}

/// `∏_v 1/(q)_{x_v}` as a dense series of length `len`.
pub fn denominator_dense(x: &[i64], len: usize) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = (0..len)
        .map(|e| if e == 0 { BigInt::one() } else { BigInt::zero() })
        .collect();
    for &p in x {
        if p > 0 && len > 1 {
            acc = dense_mul(&acc, &pochhammer_inv_dense(p as usize, len), len);
        }
    }
    acc
}

/// `Σ_{x ≥ 0, keep(x)} q^{E(x)} / ∏(q)_{x_v}` to `order`.
pub fn sum_form<F>(form: &ExponentForm, order: Rational, search: Search, keep: F) -> Result<QSeries, LatticeError>
where
    F: Fn(&[i64]) -> bool + Sync,
{
    let points = form.points(search.bound(order))?;
    let partial = points
        .par_iter()
        .filter(|(x, e)| *e <= order && keep(x))
        .fold(
            || QSeries::zero(order),
            |mut acc, (x, e)| {
                let dense = denominator_dense(x, dense_len(order - e));
                acc.add_shifted_dense(*e, &dense);
                acc
            },
        )
        .reduce(|| QSeries::zero(order), |a, b| a.add(&b));
    Ok(partial)
}

fn map_form_error(err: LatticeError, n: usize, k: usize) -> FermionicError {
    match err {
        LatticeError::NotPositiveDefinite => FermionicError::NotPositiveDefinite { n, k },
        other => FermionicError::Lattice(other),
    }
}

/// Principal-subspace character with charges `1..=K`.
pub fn principal_sum(
    hw: &HighestWeight,
    charges: usize,
    order: Rational,
    search: Search,
) -> Result<QSeries, FermionicError> {
    if charges > hw.k {
        return Err(FermionicError::ChargeBound {
            found: charges,
            allowed: format!("0..={}", hw.k),
        });
    }
    let form = principal_form(hw, charges)?;
    sum_form(&form, order, search, |_| true).map_err(|e| map_form_error(e, hw.n, hw.k))
}

/// Congruence class of `μ - Λ` modulo `kQ`, as residues of its simple-root
/// coordinates.
pub fn class_residues(hw: &HighestWeight, mu: &WeightVec) -> Result<Vec<i64>, FermionicError> {
    let ctx = LatticeContext::new(hw.n)?;
    let diff = mu.sub(&hw.finite_weight());
    let coords = ctx
        .root_coords(&diff)
        .map_err(|_| FermionicError::RestrictionOutsideClass(mu.to_string()))?;
    let k = hw.k as i64;
    Ok(coords.iter().map(|c| c.rem_euclid(k)).collect())
}

/// Parafermionic character, optionally restricted to the weight class of
/// `μ` modulo `kQ` (the tuples with `r_i ≡ c_i mod k`, `μ - Λ = Σ c_i α_i`).
pub fn parafermionic_sum(
    hw: &HighestWeight,
    order: Rational,
    restriction: Option<&WeightVec>,
    search: Search,
) -> Result<QSeries, FermionicError> {
    let form = parafermionic_form(hw)?;
    let residues = restriction.map(|mu| class_residues(hw, mu)).transpose()?;
    let (n, charges, k) = (hw.n, hw.k - 1, hw.k as i64);
    sum_form(&form, order, search, |x| match &residues {
        None => true,
        Some(res) => (0..n).all(|i| {
            let r: i64 = (0..charges).map(|s| (s as i64 + 1) * x[i * charges + s]).sum();
            r.rem_euclid(k) == res[i]
        }),
    })
    .map_err(|e| map_form_error(e, hw.n, hw.k))
}

/// Vacuum character from particles of charges `1..=k` and charge-`k`
/// antiparticles.
///
/// The exponent is only copositive (indefinite once `n ≥ 4`), so it is split:
/// with `x = p₊ - p₋` in the charge-`k` slots and `t = min(p₊, p₋)` it reads
/// `(1/2) Σ A B x x + Σ_l t_l (|x_l| + t_l)`. The first part is positive
/// definite in `x` (charge-`k` slots of any sign); the second bounds each `t`.
pub fn prop01_sum(n: usize, k: usize, order: Rational, search: Search) -> Result<QSeries, FermionicError> {
    if k == 0 {
        return Err(FermionicError::LevelTooSmall(0));
    }
    let ctx = LatticeContext::new(n)?;
    let base = tensor_form(&ctx, k, |s, t| int(s.min(t) as i64));
    let dim = n * k;
    let lower = (0..dim).map(|v| (v % k != k - 1).then_some(0)).collect();
    let budget = search.bound(order);
    let points = Ellipsoid::new(&base.gram, &base.linear)
        .map_err(|e| map_form_error(e, n, k))?
        .with_bounds(lower, vec![None; dim])
        .points(budget);
    let mut terms: Vec<(Vec<i64>, Rational)> = Vec::new();
    for (x, value) in points {
        let diffs: Vec<i64> = (0..n).map(|l| x[l * k + k - 1]).collect();
        let mut partial = vec![(Vec::new(), value)];
        for &d in &diffs {
            let mut next = Vec::new();
            for (ts, e) in partial {
                let mut t = 0i64;
                while e + int(t * (d.abs() + t)) <= budget {
                    let mut grown: Vec<i64> = ts.clone();
                    grown.push(t);
                    next.push((grown, e + int(t * (d.abs() + t))));
                    t += 1;
                }
            }
            partial = next;
        }
        for (ts, e) in partial {
            if e > order {
                continue;
            }
            let mut flat = Vec::with_capacity(dim + n);
            for l in 0..n {
                flat.extend_from_slice(&x[l * k..l * k + k - 1]);
                flat.push(diffs[l].max(0) + ts[l]);
                flat.push((-diffs[l]).max(0) + ts[l]);
            }
            terms.push((flat, e));
        }
    }
    Ok(terms
        .par_iter()
        .fold(
            || QSeries::zero(order),
            |mut acc, (flat, e)| {
                acc.add_shifted_dense(*e, &denominator_dense(flat, dense_len(order - e)));
                acc
            },
        )
        .reduce(|| QSeries::zero(order), |a, b| a.add(&b)))
}

/// `Σ_{a-b=c, a,b≥0} q^{ab}/((q)_a (q)_b)`.
pub fn durfee_rhs(c: i64, order: Rational) -> QSeries {
    let mut out = QSeries::zero(order);
    let len = dense_len(order);
    let mut b: i64 = (-c).max(0);
    loop {
        let a = b + c;
        let e = a * b;
        if int(e) > order {
            // ab is increasing in b once b ≥ max(0, -c).
            break;
        }
        let rest = len - e as usize;
        let dense = dense_mul(
            &pochhammer_inv_dense(a as usize, rest),
            &pochhammer_inv_dense(b as usize, rest),
            rest,
        );
        out.add_shifted_dense(int(e), &dense);
        b += 1;
    }
    out
}
