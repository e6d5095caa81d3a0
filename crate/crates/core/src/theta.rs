//! Degree-`k` theta functions of the `A_n` root lattice and full characters
//! of standard modules assembled from them.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::fermionic::{
    denominator_dense, parafermionic_form, parafermionic_sum, principal_form, sum_form, ExponentForm, FermionicError,
    HighestWeight, OccupationTuple, Search,
};
use crate::lattice::{LatticeContext, LatticeError, WeightVec};
use crate::qseries::{dense_len, euler_inf_inv, QSeries};
use crate::rational::{ceil_int, floor_int, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fermionic(#[from] FermionicError),
    #[error("weight {0} is not in the weight lattice")]
    NotInWeightLattice(String),
    #[error("level must be positive")]
    ZeroLevel,
}

/// A character either resolved by finite weight (the `y`-grading) or
/// collapsed to a single q-series.
///
/// Keys are finite weights; `base` is the weight the keys are measured from
/// when written in simple-root coordinates (`Λ` for module characters, `μ`
/// for a theta function), so every key differs from it by an element of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCharacter {
    rank: usize,
    order: Rational,
    resolved: bool,
    base: WeightVec,
    components: BTreeMap<WeightVec, QSeries>,
}

impl GradedCharacter {
    pub fn new(rank: usize, order: Rational, resolved: bool, base: WeightVec) -> Self {
        Self {
            rank,
            order,
            resolved,
            base,
            components: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> Rational {
        self.order
    }

    pub fn is_resolved(&self) -> bool {
        self.resolved
    }

    pub fn base(&self) -> &WeightVec {
        &self.base
    }

    pub fn components(&self) -> &BTreeMap<WeightVec, QSeries> {
        &self.components
    }

    pub fn component(&self, weight: &WeightVec) -> QSeries {
        self.components
            .get(weight)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.order))
    }

    /// Adds `series` at `weight` (or at the base when collapsed).
    pub fn add(&mut self, weight: &WeightVec, series: &QSeries) {
        let key = if self.resolved {
            weight.clone()
        } else {
            self.base.clone()
        };
        let order = self.order;
        let slot = self.components.entry(key).or_insert_with(|| QSeries::zero(order));
        *slot = slot.add(&series.truncate(order));
    }

    /// Multiplies every component by `factor`, keeping the common order.
    pub fn mul_all(&mut self, factor: &QSeries) {
        for s in self.components.values_mut() {
            *s = s.mul(factor).truncate(self.order);
        }
        self.order = self.order.min(factor.order());
        self.prune();
    }

    fn prune(&mut self) {
        self.components.retain(|_, s| !s.is_zero());
    }

    /// Sums all components.
    pub fn collapse(&self) -> QSeries {
        self.components
            .values()
            .fold(QSeries::zero(self.order), |acc, s| acc.add(s))
    }

    pub fn collapsed(&self) -> GradedCharacter {
        let mut out = GradedCharacter::new(self.rank, self.order, false, self.base.clone());
        let total = self.collapse();
        if !total.is_zero() {
            out.components.insert(self.base.clone(), total);
        }
        out
    }

    /// `[{"weight": [...], "dynkin": [...], "series": {...}}]`, with
    /// `weight` the simple-root coordinates of `key - base`, sorted.
    pub fn to_json_value(&self) -> serde_json::Value {
        let ctx = LatticeContext::new(self.rank).expect("positive rank");
        let mut rows: Vec<(Vec<i64>, serde_json::Value)> = self
            .components
            .iter()
            .map(|(w, s)| {
                let coords = ctx.root_coords(&w.sub(&self.base)).expect("keys lie in base + Q");
                let dynkin: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
                let value = serde_json::json!({
                    "weight": coords,
                    "dynkin": dynkin,
                    "series": s.to_json_value(),
                });
                (coords, value)
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        serde_json::Value::Array(rows.into_iter().map(|r| r.1).collect())
    }

    /// Text form: a `# weight` header per component followed by its terms.
    pub fn to_text(&self) -> String {
        let ctx = LatticeContext::new(self.rank).expect("positive rank");
        let mut rows: Vec<(Vec<i64>, String)> = self
            .components
            .iter()
            .map(|(w, s)| {
                let coords = ctx.root_coords(&w.sub(&self.base)).expect("keys lie in base + Q");
                let label: Vec<String> = coords.iter().map(i64::to_string).collect();
                (
                    coords,
                    format!("# weight {} dynkin {}\n{}", label.join(","), w, s.to_text()),
                )
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows.into_iter().map(|r| r.1).collect()
    }
}

fn check_level(k: usize) -> Result<Rational, ThetaError> {
    if k == 0 {
        Err(ThetaError::ZeroLevel)
    } else {
        Ok(int(k as i64))
    }
}

/// `Θ_μ = q^{⟨μ,μ⟩/2k} Σ_{α∈Q} q^{(k/2)⟨α,α⟩+⟨α,μ⟩}`, keyed by `kα + μ`.
pub fn theta_series(
    ctx: &LatticeContext,
    mu: &WeightVec,
    k: usize,
    order: Rational,
    weight_resolved: bool,
    search: Search,
) -> Result<GradedCharacter, ThetaError> {
    let kk = check_level(k)?;
    if !mu.is_integral() {
        return Err(ThetaError::NotInWeightLattice(mu.to_string()));
    }
    let lead = ctx.norm_sq(mu)? / (kk * int(2));
    let mut out = GradedCharacter::new(ctx.rank(), order, weight_resolved, mu.clone());
    let points = ctx.vectors_by_norm(kk / int(2), mu, search.bound(order - lead))?;
    for (alpha, value) in points {
        let e = lead + value;
        if e > order {
            continue;
        }
        let key = ctx.from_root_coords(&alpha).scale(kk).add(mu);
        out.add(&key, &QSeries::monomial(e, 1.into(), order));
    }
    Ok(out)
}

/// `Σ_{γ ∈ Q + μ/k} q^{(k/2)⟨γ,γ⟩}` by a box scan: each simple-root
/// coordinate of `γ` satisfies `|γ_i| ≤ |Λ_i| |γ|` (Cauchy–Schwarz).
pub fn theta_direct(ctx: &LatticeContext, mu: &WeightVec, k: usize, order: Rational) -> Result<QSeries, ThetaError> {
    let kk = check_level(k)?;
    let n = ctx.rank();
    let shift = ctx.root_coords_rational(&mu.scale(Rational::new(1, k as i64)))?;
    // |γ|² ≤ 2·order/k
    let norm_bound = order * int(2) / kk;
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        let fund = ctx.inv_cartan_fund()[i][i];
        let limit = (fund * norm_bound).to_integer() as f64;
        let r = ((fund * norm_bound).ceil().to_integer() as f64)
            .max(limit)
            .sqrt()
            .ceil() as i64
            + 1;
        let centre = -shift[i];
        ranges.push((floor_int(&centre) - r, ceil_int(&centre) + r));
    }
    let mut out = QSeries::zero(order);
    if order < Rational::zero() {
        return Ok(out);
    }
    let mut beta: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let gamma = ctx.from_root_coords(&beta).add(&mu.scale(Rational::new(1, k as i64)));
        let e = kk / int(2) * ctx.norm_sq(&gamma)?;
        if e <= order {
            out.add_term(e, 1.into());
        }
        let mut idx = 0;
        loop {
            if idx == n {
                return Ok(out);
            }
            beta[idx] += 1;
            if beta[idx] > ranges[idx].1 {
                beta[idx] = ranges[idx].0;
                idx += 1;
            } else {
                break;
            }
        }
    }
}

/// Full character of `L(Λ̂)` from the principal-subspace sum and theta
/// functions, optionally resolved by finite weight; anchored so that the
/// highest weight vector has degree 0.
pub fn assemble_character(
    hw: &HighestWeight,
    order: Rational,
    weight_resolved: bool,
    search: Search,
) -> Result<GradedCharacter, ThetaError> {
    let n = hw.n();
    let k = hw.level();
    let kk = int(k as i64);
    let charges = k - 1;
    let ctx = LatticeContext::new(n)?;
    let lambda = hw.finite_weight();
    let lambda_sq = ctx.norm_sq(&lambda)?;

    // Tuples that can contribute: their total exponent is at least
    // E_pf(p) - |Λ|²/2k, so E_pf(p) ≤ order + |Λ|²/2k.
    let tuples: Vec<Vec<i64>> = if charges == 0 {
        vec![Vec::new()]
    } else {
        let pf = parafermionic_form(hw)?;
        pf.points(search.bound(order + lambda_sq / (kk * int(2))))?
            .into_iter()
            .map(|(x, _)| x)
            .collect()
    };
    let principal = principal_form(hw, charges)?;

    let partials: Vec<GradedCharacter> = tuples
        .par_iter()
        .map(|flat| -> Result<GradedCharacter, ThetaError> {
            let mut part = GradedCharacter::new(n, order, weight_resolved, lambda.clone());
            let tuple = OccupationTuple::from_flat(n, charges, flat);
            let e_b = principal.evaluate(flat);
            let nu = lambda.add(&ctx.from_root_coords(&tuple.color_type()));
            let alphas = ctx.vectors_by_norm(kk / int(2), &nu, search.bound(order - e_b))?;
            if alphas.is_empty() {
                return Ok(part);
            }
            let lowest = alphas.iter().map(|a| a.1).min().expect("nonempty");
            let dense = denominator_dense(flat, dense_len(order - e_b - lowest));
            for (alpha, value) in alphas {
                let e = e_b + value;
                if e > order {
                    continue;
                }
                let key = ctx.from_root_coords(&alpha).scale(kk).add(&nu);
                let mut s = QSeries::zero(order);
                s.add_shifted_dense(e, &dense);
                part.add(&key, &s);
            }
            Ok(part)
        })
        .collect::<Result<_, _>>()?;

    let mut out = GradedCharacter::new(n, order, weight_resolved, lambda.clone());
    for part in partials {
        for (w, s) in part.components {
            out.add(&w, &s);
        }
    }
    out.mul_all(&euler_inverse_power(n, order));
    Ok(out)
}

fn euler_inverse_power(n: usize, order: Rational) -> QSeries {
    let inv = euler_inf_inv(order);
    (0..n).fold(QSeries::one(order), |acc, _| acc.mul(&inv))
}

/// `Tr q^D` on the `μ`-weight space of `L(Λ̂)`, rebuilt from the
/// parafermionic sum of the class of `μ`:
/// `q^{(|μ|²-|Λ|²)/2k} (q)_∞^{-n} Σ_{class of μ}`.
pub fn weight_trace_from_sum(
    hw: &HighestWeight,
    mu: &WeightVec,
    order: Rational,
    search: Search,
) -> Result<QSeries, ThetaError> {
    let ctx = LatticeContext::new(hw.n())?;
    let k = int(hw.level() as i64);
    let shift = (ctx.norm_sq(mu)? - ctx.norm_sq(&hw.finite_weight())?) / (int(2) * k);
    let pf = parafermionic_sum(hw, order - shift, Some(mu), search)?;
    Ok(pf.shift(shift).mul(&euler_inverse_power(hw.n(), order)).truncate(order))
}

/// `|Λ+ρ|²/2(k+h∨) - |ρ|²/2h∨ - |μ|²/2k`, the exponent that turns the
/// weight trace of `μ` into the string function `c^Λ̂_μ`.
pub fn string_prefactor(
    ctx: &LatticeContext,
    lambda: &WeightVec,
    level: usize,
    mu: &WeightVec,
) -> Result<Rational, ThetaError> {
    let k = int(level as i64);
    let h = int(ctx.dual_coxeter());
    let lr = lambda.add(&ctx.rho());
    Ok(ctx.norm_sq(&lr)? / (int(2) * (k + h)) - ctx.rho_normsq() / (int(2) * h) - ctx.norm_sq(mu)? / (int(2) * k))
}

/// The string function `c^Λ̂_μ` from the parafermionic sum; `order` bounds
/// the depth, as for the oracle.
pub fn string_function_from_sum(
    hw: &HighestWeight,
    mu: &WeightVec,
    order: Rational,
    search: Search,
) -> Result<QSeries, ThetaError> {
    let ctx = LatticeContext::new(hw.n())?;
    let prefactor = string_prefactor(&ctx, &hw.finite_weight(), hw.level(), mu)?;
    Ok(weight_trace_from_sum(hw, mu, order, search)?.shift(prefactor))
}

/// Recovers `xᵀGx + l·x + c` from a quadratic function by polarization.
fn polarize(dim: usize, f: impl Fn(&[i64]) -> Rational) -> (ExponentForm, Rational) {
    let c = f(&vec![0; dim]);
    let at = |pairs: &[(usize, i64)]| {
        let mut x = vec![0i64; dim];
        for &(i, v) in pairs {
            x[i] += v;
        }
        f(&x) - c
    };
    let single: Vec<Rational> = (0..dim).map(|a| at(&[(a, 1)])).collect();
    let mut gram = vec![vec![Rational::zero(); dim]; dim];
    let mut linear = vec![Rational::zero(); dim];
    for a in 0..dim {
        gram[a][a] = (at(&[(a, 2)]) - single[a] * int(2)) / int(2);
        linear[a] = single[a] - gram[a][a];
        for b in 0..a {
            let g = (at(&[(a, 1), (b, 1)]) - single[a] - single[b]) / int(2);
            gram[a][b] = g;
            gram[b][a] = g;
        }
    }
    (ExponentForm { gram, linear }, c)
}

/// The two-term parafermionic character of `L(Λ̂1 + Λ̂2)` for `sl(3)` at
/// level 2: monomials without, respectively with, the particle
/// `x_{α1}(-1)`.
pub fn special_character_l1l2(order: Rational, search: Search) -> Result<QSeries, ThetaError> {
    let half = Rational::new(1, 2);
    let quad = |a: Rational, b: Rational| half * (a * a + b * b - a * b);
    let first = move |p: &[i64]| {
        let (p1, p2) = (int(p[0]), int(p[1]));
        quad(p1, p2) + p1 - half * (p1 + p2)
    };
    let second = move |p: &[i64]| {
        let (p1, p2) = (int(p[0]) + int(1), int(p[1]));
        quad(p1, p2) + p2 - half * (p1 + p2)
    };
    let mut total = QSeries::zero(order);
    for term in [&first as &dyn Fn(&[i64]) -> Rational, &second] {
        let (form, constant) = polarize(2, term);
        for x in [[0i64, 0], [1, 2], [3, 1], [2, 5]] {
            debug_assert_eq!(form.evaluate(&x) + constant, term(&x));
        }
        let s = sum_form(&form, order - constant, search, |_| true).map_err(FermionicError::from)?;
        total = total.add(&s.shift(constant));
    }
    Ok(total)
}
