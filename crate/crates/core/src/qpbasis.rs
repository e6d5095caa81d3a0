//! Quasi-particle monomials, their admissibility conditions, and graded
//! censuses of admissible monomials.
//!
//! A monomial carries, per color `i`, particles `(n_{p,i}, m_{p,i})` for
//! `p = 1, 2, …` with charges weakly decreasing in `p`. Admissibility bounds
//! every index from above by a quantity that depends only on the charges, so
//! the census runs in two stages: choose charge configurations whose least
//! possible energy fits the budget, then walk the indices downward from
//! their bounds.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::fermionic::{FermionicError, HighestWeight, OccupationTuple, Search};
use crate::lattice::{ellipsoid::Ellipsoid, LatticeContext, LatticeError, WeightVec};
use crate::qseries::QSeries;
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QPError {
    #[error(transparent)]
    Fermionic(#[from] FermionicError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("charge bound K = {0} must satisfy 1 ≤ K ≤ k")]
    ChargeBound(usize),
    #[error("minimal energy of charge type {charge_type} is {actual}, but its quadratic model predicts {predicted}")]
    FormMismatch {
        charge_type: String,
        actual: Rational,
        predicted: Rational,
    },
    #[error("malformed {what}: {text:?}")]
    Parse { what: &'static str, text: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Particle {
    pub charge: usize,
    pub index: i64,
}

/// A quasi-particle monomial; `colors[i-1]` lists the particles of color `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPMonomial {
    colors: Vec<Vec<Particle>>,
}

impl QPMonomial {
    pub fn new(colors: Vec<Vec<Particle>>) -> Self {
        Self { colors }
    }

    /// Builds from `(charge, index)` pairs per color, `p = 1, 2, …`.
    pub fn from_pairs(colors: &[&[(usize, i64)]]) -> Self {
        Self::new(
            colors
                .iter()
                .map(|c| c.iter().map(|&(charge, index)| Particle { charge, index }).collect())
                .collect(),
        )
    }

    pub fn empty(n: usize) -> Self {
        Self::new(vec![Vec::new(); n])
    }

    pub fn rank(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[Vec<Particle>] {
        &self.colors
    }

    /// `(r_1, …, r_n)` with `r_i` the total charge of color `i`.
    pub fn color_type(&self) -> Vec<i64> {
        self.colors
            .iter()
            .map(|c| c.iter().map(|p| p.charge as i64).sum())
            .collect()
    }

    /// Charges per color as stored (weakly decreasing).
    pub fn charge_type(&self) -> Vec<Vec<usize>> {
        self.colors
            .iter()
            .map(|c| c.iter().map(|p| p.charge).collect())
            .collect()
    }

    /// `r_i^{(t)} = #{p : n_{p,i} ≥ t}` for `t = 1..=charges`.
    pub fn dual_charge_type(&self, charges: usize) -> Vec<Vec<i64>> {
        self.colors
            .iter()
            .map(|c| {
                (1..=charges)
                    .map(|t| c.iter().filter(|p| p.charge >= t).count() as i64)
                    .collect()
            })
            .collect()
    }

    /// Occupation numbers `p_i^{(s)}`.
    pub fn occupation(&self, charges: usize) -> OccupationTuple {
        OccupationTuple::new(
            self.colors
                .iter()
                .map(|c| {
                    (1..=charges)
                        .map(|s| c.iter().filter(|p| p.charge == s).count() as i64)
                        .collect()
                })
                .collect(),
        )
    }

    /// `-Σ m`.
    pub fn principal_energy(&self) -> i64 {
        -self.colors.iter().flatten().map(|p| p.index).sum::<i64>()
    }

    /// `Λ + Σ r_i α_i`.
    pub fn weight(&self, hw: &HighestWeight) -> Result<WeightVec, LatticeError> {
        let ctx = LatticeContext::new(hw.n())?;
        Ok(hw.finite_weight().add(&ctx.from_root_coords(&self.color_type())))
    }

    /// Index sequence in display order (color `n` first, highest `p` first).
    pub fn display_indices(&self) -> Vec<i64> {
        self.colors
            .iter()
            .rev()
            .flat_map(|c| c.iter().rev().map(|p| p.index))
            .collect()
    }

    /// `[[color, charge, m], …]` in storage order.
    pub fn encode(&self) -> Vec<[i64; 3]> {
        self.colors
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |p| [i as i64 + 1, p.charge as i64, p.index]))
            .collect()
    }
}

impl fmt::Display for QPMonomial {
    /// `(1_{a2} -3_{a1} -1_{a1})`; a charge `c > 1` is written `m_{ca i}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (i, color) in self.colors.iter().enumerate().rev() {
            for p in color.iter().rev() {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                if p.charge == 1 {
                    write!(f, "{}_{{a{}}}", p.index, i + 1)?;
                } else {
                    write!(f, "{}_{{{}a{}}}", p.index, p.charge, i + 1)?;
                }
            }
        }
        write!(f, ")")
    }
}

impl Serialize for QPMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.encode().serialize(s)
    }
}

/// Renders a color type as `(r_n;…;r_1)`.
pub fn format_color_type(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().rev().map(i64::to_string).collect();
    format!("({})", parts.join(";"))
}

/// Renders a charge type as `(…;…)`, color `n` first, charges ascending.
pub fn format_charge_type(charges: &[Vec<usize>]) -> String {
    let parts: Vec<String> = charges
        .iter()
        .rev()
        .map(|c| c.iter().rev().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect();
    format!("({})", parts.join(";"))
}

/// Parses `"r_n;…;r_1"` (parentheses optional) into `(r_1, …, r_n)`.
pub fn parse_color_type(text: &str, n: usize) -> Result<Vec<i64>, QPError> {
    let bad = || QPError::Parse {
        what: "color type",
        text: text.to_string(),
    };
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let mut r: Vec<i64> = inner
        .split(';')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if r.len() != n || r.iter().any(|&v| v < 0) {
        return Err(bad());
    }
    r.reverse();
    Ok(r)
}

/// Parses a charge type such as `"1,1;2"` into occupation numbers.
pub fn parse_charge_type(text: &str, n: usize, charges: usize) -> Result<OccupationTuple, QPError> {
    let bad = || QPError::Parse {
        what: "charge type",
        text: text.to_string(),
    };
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let groups: Vec<&str> = inner.split(';').collect();
    if groups.len() != n {
        return Err(bad());
    }
    let mut rows = vec![vec![0i64; charges]; n];
    for (g, group) in groups.iter().enumerate() {
        let color = n - 1 - g;
        for t in group.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let c: usize = t.parse().map_err(|_| bad())?;
            if c == 0 || c > charges {
                return Err(bad());
            }
            rows[color][c - 1] += 1;
        }
    }
    Ok(OccupationTuple::new(rows))
}

/// Data fixing which monomials are admissible: the highest weight (hence
/// the `j_t`) and the charge bound `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityContext {
    hw: HighestWeight,
    charges: usize,
}

impl AdmissibilityContext {
    /// The parafermionic setting `K = k - 1`.
    pub fn new(hw: HighestWeight) -> Result<Self, QPError> {
        let k = hw.level();
        Self::with_charges(hw, k.saturating_sub(1))
    }

    pub fn with_charges(hw: HighestWeight, charges: usize) -> Result<Self, QPError> {
        if charges == 0 || charges > hw.level() {
            return Err(QPError::ChargeBound(charges));
        }
        Ok(Self { hw, charges })
    }

    pub fn hw(&self) -> &HighestWeight {
        &self.hw
    }

    pub fn charges(&self) -> usize {
        self.charges
    }

    pub fn n(&self) -> usize {
        self.hw.n()
    }

    /// Upper bound on `m_{p,i}` (0-based `p`, 1-based `i`) given the charges
    /// of colors `i` and `i - 1`.
    pub fn index_bound(&self, lower: &[usize], this: &[usize], p: usize, i: usize) -> i64 {
        let np = this[p];
        let from_lower: usize = lower.iter().map(|&nq| np.min(nq)).sum();
        let from_weight = (1..=np).filter(|&t| self.hw.j_t(t) == i).count();
        let from_same: usize = this[..p].iter().map(|&nq| 2 * np.min(nq)).sum();
        from_lower as i64 - from_weight as i64 - from_same as i64 - np as i64
    }

    /// All index bounds for a charge configuration.
    pub fn bounds(&self, charge_type: &[Vec<usize>]) -> Vec<Vec<i64>> {
        (0..charge_type.len())
            .map(|c| {
                let lower: &[usize] = if c == 0 { &[] } else { &charge_type[c - 1] };
                (0..charge_type[c].len())
                    .map(|p| self.index_bound(lower, &charge_type[c], p, c + 1))
                    .collect()
            })
            .collect()
    }

    /// `(1/k)(Σ r_i² - Σ r_i r_{i+1}) + (kj/k) r_j`, the shift between the
    /// two gradings.
    pub fn energy_shift(&self, color_type: &[i64]) -> Rational {
        let k = self.hw.level() as i64;
        let sq: i64 = color_type.iter().map(|r| r * r).sum();
        let cross: i64 = color_type.windows(2).map(|w| w[0] * w[1]).sum();
        let mut shift = Rational::new(sq - cross, k);
        if let Some(j) = self.hw.j() {
            shift += Rational::new(self.hw.kj() as i64 * color_type[j - 1], k);
        }
        shift
    }
}

/// Charges per color (weakly decreasing) for an occupation tuple.
pub fn charges_of(tuple: &OccupationTuple) -> Vec<Vec<usize>> {
    tuple
        .rows()
        .iter()
        .map(|row| {
            let mut cs = Vec::new();
            for s in (1..=row.len()).rev() {
                cs.extend(std::iter::repeat_n(s, row[s - 1].max(0) as usize));
            }
            cs
        })
        .collect()
}

pub fn check_admissible(m: &QPMonomial, ctx: &AdmissibilityContext) -> bool {
    if m.rank() != ctx.n() {
        return false;
    }
    for color in m.colors() {
        if color.iter().any(|p| p.charge == 0 || p.charge > ctx.charges) {
            return false;
        }
        if color.windows(2).any(|w| w[1].charge > w[0].charge) {
            return false;
        }
    }
    let charges = m.charge_type();
    let bounds = ctx.bounds(&charges);
    for (c, color) in m.colors().iter().enumerate() {
        for (p, particle) in color.iter().enumerate() {
            if particle.index > bounds[c][p] {
                return false;
            }
            if p > 0
                && color[p - 1].charge == particle.charge
                && particle.index > color[p - 1].index - 2 * particle.charge as i64
            {
                return false;
            }
        }
    }
    true
}

pub fn parafermionic_energy(m: &QPMonomial, ctx: &AdmissibilityContext) -> Rational {
    int(m.principal_energy()) - ctx.energy_shift(&m.color_type())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    Principal,
    Parafermionic,
}

#[derive(Debug, Clone, Default)]
pub struct CensusFilter {
    /// `(r_1, …, r_n)`.
    pub color_type: Option<Vec<i64>>,
    /// Exact charge configuration.
    pub charge_type: Option<OccupationTuple>,
    /// Residues mod `k` of the simple-root coordinates of `μ - Λ`.
    pub weight_class: Option<Vec<i64>>,
}

impl CensusFilter {
    fn accepts(&self, tuple: &OccupationTuple, k: i64) -> bool {
        if let Some(ct) = &self.charge_type {
            if ct != tuple {
                return false;
            }
        }
        let r = tuple.color_type();
        if let Some(want) = &self.color_type {
            if *want != r {
                return false;
            }
        }
        if let Some(res) = &self.weight_class {
            if r.iter().zip(res).any(|(ri, ci)| (ri - ci).rem_euclid(k) != 0) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedMonomial {
    #[serde(with = "crate::rational::serde_rational")]
    pub grade: Rational,
    pub monomial: QPMonomial,
}

/// Graded count of admissible monomials, optionally with the monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub grading: Grading,
    pub max_energy: Rational,
    pub counts: BTreeMap<Rational, u64>,
    pub monomials: Option<Vec<GradedMonomial>>,
}

impl Census {
    /// The census as a q-series known to `max_energy`.
    pub fn to_series(&self) -> QSeries {
        QSeries::from_terms(
            self.counts.iter().map(|(g, c)| (*g, num_bigint::BigInt::from(*c))),
            self.max_energy,
        )
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `[{grade, count, monomials?}]`, ascending grade.
    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .counts
            .iter()
            .map(|(g, c)| {
                let mut obj = serde_json::Map::new();
                obj.insert("grade".into(), format_rational(g).into());
                obj.insert("count".into(), (*c).into());
                if let Some(list) = &self.monomials {
                    let ms: Vec<serde_json::Value> = list
                        .iter()
                        .filter(|gm| gm.grade == *g)
                        .map(|gm| serde_json::to_value(&gm.monomial).expect("monomial serialises"))
                        .collect();
                    obj.insert("monomials".into(), ms.into());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        entries.into()
    }
}

/// Evaluates `f(p) = -Σ_p U_p`, the least principal energy of a charge
/// configuration, straight from the index bounds.
fn minimal_principal_energy(ctx: &AdmissibilityContext, tuple: &OccupationTuple) -> i64 {
    -ctx.bounds(&charges_of(tuple)).iter().flatten().sum::<i64>()
}

/// Quadratic model `xᵀGx + l·x` of the least grade over charge
/// configurations, recovered by polarizing the definitional minimal energy.
fn grade_form(ctx: &AdmissibilityContext, grading: Grading) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let (n, big_k) = (ctx.n(), ctx.charges());
    let dim = n * big_k;
    let unit = |a: usize, b: Option<usize>, scale: i64| {
        let mut flat = vec![0i64; dim];
        flat[a] += scale;
        if let Some(b) = b {
            flat[b] += 1;
        }
        OccupationTuple::from_flat(n, big_k, &flat)
    };
    let grade = |t: &OccupationTuple| -> Rational {
        let base = int(minimal_principal_energy(ctx, t));
        match grading {
            Grading::Principal => base,
            Grading::Parafermionic => base - ctx.energy_shift(&t.color_type()),
        }
    };
    let single: Vec<Rational> = (0..dim).map(|a| grade(&unit(a, None, 1))).collect();
    let mut gram = vec![vec![Rational::from_integer(0); dim]; dim];
    let mut linear = vec![Rational::from_integer(0); dim];
    for a in 0..dim {
        gram[a][a] = (grade(&unit(a, None, 2)) - single[a] * int(2)) / int(2);
        linear[a] = single[a] - gram[a][a];
        for b in 0..a {
            let g = (grade(&unit(a, Some(b), 1)) - single[a] - single[b]) / int(2);
            gram[a][b] = g;
            gram[b][a] = g;
        }
    }
    (gram, linear)
}

/// Walks indices downward from their bounds; `spent` is the principal
/// energy already used, `floor` the least energy the remaining particles can
/// still add.
struct Walker<'a> {
    bounds: &'a [Vec<i64>],
    charges: &'a [Vec<usize>],
    budget: i64,
    floors: Vec<i64>,
    slots: Vec<(usize, usize)>,
}

impl Walker<'_> {
    fn run<F: FnMut(&[i64])>(&self, visit: &mut F) {
        let mut m = vec![0i64; self.slots.len()];
        self.step(0, 0, &mut m, visit);
    }

    fn step<F: FnMut(&[i64])>(&self, idx: usize, spent: i64, m: &mut Vec<i64>, visit: &mut F) {
        if idx == self.slots.len() {
            visit(m);
            return;
        }
        let (c, p) = self.slots[idx];
        let mut top = self.bounds[c][p];
        if p > 0 && self.charges[c][p - 1] == self.charges[c][p] {
            top = top.min(m[idx - 1] - 2 * self.charges[c][p] as i64);
        }
        let rest = self.floors[idx + 1];
        let mut value = top;
        while spent - value + rest <= self.budget {
            m[idx] = value;
            self.step(idx + 1, spent - value, m, visit);
            value -= 1;
        }
    }
}

/// Graded census of the admissible monomials with grade `≤ max_energy`.
pub fn enumerate_basis(
    ctx: &AdmissibilityContext,
    max_energy: Rational,
    grading: Grading,
    filter: &CensusFilter,
    listing: bool,
    search: Search,
) -> Result<Census, QPError> {
    let (n, big_k) = (ctx.n(), ctx.charges());
    let k = ctx.hw().level() as i64;
    let (gram, linear) = grade_form(ctx, grading);
    let ellipsoid = Ellipsoid::new(&gram, &linear)?.with_lower_bounds(0);
    let candidates = ellipsoid.points(search.bound(max_energy));

    let mut types = Vec::new();
    for (flat, predicted) in candidates {
        let tuple = OccupationTuple::from_flat(n, big_k, &flat);
        let shift = ctx.energy_shift(&tuple.color_type());
        let principal = minimal_principal_energy(ctx, &tuple);
        let actual = match grading {
            Grading::Principal => int(principal),
            Grading::Parafermionic => int(principal) - shift,
        };
        if actual != predicted {
            return Err(QPError::FormMismatch {
                charge_type: format_charge_type(&charges_of(&tuple)),
                actual,
                predicted,
            });
        }
        if actual <= max_energy && filter.accepts(&tuple, k) {
            types.push((tuple, shift));
        }
    }

    let per_type: Vec<(BTreeMap<Rational, u64>, Vec<GradedMonomial>)> = types
        .par_iter()
        .map(|(tuple, shift)| {
            let charges = charges_of(tuple);
            let bounds = ctx.bounds(&charges);
            let slots: Vec<(usize, usize)> = (0..n)
                .flat_map(|c| (0..charges[c].len()).map(move |p| (c, p)))
                .collect();
            let mut floors = vec![0i64; slots.len() + 1];
            for idx in (0..slots.len()).rev() {
                let (c, p) = slots[idx];
                floors[idx] = floors[idx + 1] - bounds[c][p];
            }
            let offset = match grading {
                Grading::Principal => Rational::from_integer(0),
                Grading::Parafermionic => *shift,
            };
            // grade = principal - offset ≤ max_energy
            let budget = crate::rational::floor_int(&(max_energy + offset));
            let walker = Walker {
                bounds: &bounds,
                charges: &charges,
                budget,
                floors,
                slots: slots.clone(),
            };
            let mut counts = BTreeMap::new();
            let mut list = Vec::new();
            walker.run(&mut |m: &[i64]| {
                let grade = int(-m.iter().sum::<i64>()) - offset;
                *counts.entry(grade).or_insert(0u64) += 1;
                if listing {
                    let mut colors: Vec<Vec<Particle>> = vec![Vec::new(); n];
                    for (idx, &(c, p)) in slots.iter().enumerate() {
                        colors[c].push(Particle {
                            charge: charges[c][p],
                            index: m[idx],
                        });
                    }
                    list.push(GradedMonomial {
                        grade,
                        monomial: QPMonomial::new(colors),
                    });
                }
            });
            (counts, list)
        })
        .collect();

    let mut counts = BTreeMap::new();
    let mut monomials = Vec::new();
    for (c, l) in per_type {
        for (g, v) in c {
            *counts.entry(g).or_insert(0) += v;
        }
        monomials.extend(l);
    }
    let monomials = listing.then(|| {
        monomials.sort_by(|a, b| {
            a.grade
                .cmp(&b.grade)
                .then_with(|| display_color_type(&a.monomial).cmp(&display_color_type(&b.monomial)))
                .then_with(|| a.monomial.display_indices().cmp(&b.monomial.display_indices()))
                .then_with(|| a.monomial.cmp(&b.monomial))
        });
        monomials
    });
    Ok(Census {
        grading,
        max_energy,
        counts,
        monomials,
    })
}

fn display_color_type(m: &QPMonomial) -> Vec<i64> {
    let mut r = m.color_type();
    r.reverse();
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStyle {
    /// Columns: color-type, energy, basis.
    Plain,
    /// Columns: color-type, energy, color-charge-type, basis.
    WithChargeType,
}

/// One row of a rendered table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub color_type: String,
    pub energy: Rational,
    pub charge_type: Option<String>,
    pub monomials: Vec<QPMonomial>,
}

/// Groups a listing into table rows: by color type, then energy, then
/// (optionally) charge type.
pub fn table_rows(census: &Census, style: TableStyle) -> Vec<TableRow> {
    type Key = (Vec<i64>, Rational, Vec<Vec<usize>>);
    let mut groups: BTreeMap<Key, Vec<QPMonomial>> = BTreeMap::new();
    for gm in census.monomials.iter().flatten() {
        let m = &gm.monomial;
        let charge_key = match style {
            TableStyle::Plain => Vec::new(),
            TableStyle::WithChargeType => m
                .charge_type()
                .into_iter()
                .map(|mut c| {
                    c.reverse();
                    c
                })
                .collect(),
        };
        groups
            .entry((display_color_type(m), gm.grade, charge_key))
            .or_default()
            .push(m.clone());
    }
    groups
        .into_iter()
        .map(|((ct, energy, _), monomials)| {
            let mut r = ct.clone();
            r.reverse();
            TableRow {
                color_type: format_color_type(&r),
                energy,
                charge_type: match style {
                    TableStyle::Plain => None,
                    TableStyle::WithChargeType => Some(format_charge_type(&monomials[0].charge_type())),
                },
                monomials,
            }
        })
        .collect()
}

pub fn render_table(census: &Census, style: TableStyle) -> String {
    let mut out = String::from(match style {
        TableStyle::Plain => "color-type | energy | basis\n",
        TableStyle::WithChargeType => "color-type | energy | color-charge-type | basis\n",
    });
    for row in table_rows(census, style) {
        let basis: Vec<String> = row.monomials.iter().map(ToString::to_string).collect();
        match &row.charge_type {
            None => out.push_str(&format!(
                "{} | {} | {}\n",
                row.color_type,
                format_rational(&row.energy),
                basis.join(", ")
            )),
            Some(ct) => out.push_str(&format!(
                "{} | {} | {} | {}\n",
                row.color_type,
                format_rational(&row.energy),
                ct,
                basis.join(", ")
            )),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionic::{parafermionic_sum, principal_sum};
    use crate::rational::frac;

    fn ctx(n: usize, spec: &str) -> AdmissibilityContext {
        AdmissibilityContext::new(HighestWeight::parse(n, spec).unwrap()).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let c = ctx(2, "2*L0");
        let good = QPMonomial::from_pairs(&[&[(1, -1), (1, -3)], &[(1, 1)]]);
        assert!(check_admissible(&good, &c));
        assert_eq!(good.to_string(), "(1_{a2} -3_{a1} -1_{a1})");
        let bad = QPMonomial::from_pairs(&[&[(1, -1), (1, -2)], &[]]);
        assert!(!check_admissible(&bad, &c));
        let c3 = ctx(2, "3*L0");
        let two = QPMonomial::from_pairs(&[&[(2, -2)], &[(2, 0)]]);
        assert!(check_admissible(&two, &c3));
        assert_eq!(two.to_string(), "(0_{2a2} -2_{2a1})");
        // Charges above K are never admissible.
        assert!(!check_admissible(&QPMonomial::from_pairs(&[&[(2, -10)], &[]]), &c));
    }

    #[test]
    fn energies_of_table_entries() {
        let c = ctx(2, "2*L0");
        let m = QPMonomial::from_pairs(&[&[(1, -1), (1, -3)], &[(1, 1)]]);
        assert_eq!(parafermionic_energy(&m, &c), frac(3, 2));
        let c3 = ctx(2, "3*L0");
        let m = QPMonomial::from_pairs(&[&[(2, -2)], &[(2, 0)]]);
        assert_eq!(parafermionic_energy(&m, &c3), frac(2, 3));
        assert_eq!(parafermionic_energy(&QPMonomial::empty(2), &c3), int(0));
    }

    #[test]
    fn weight_lambda_bound() {
        // j_t = 1 for both slots at Λ̂ = 2Λ̂1: a charge-1 particle of color 1
        // loses one unit of room.
        let c = ctx(2, "2*L1");
        let bounds = c.bounds(&[vec![1], vec![]]);
        assert_eq!(bounds, vec![vec![-2], vec![]]);
        let c = ctx(2, "1*L0+1*L1");
        assert_eq!(c.bounds(&[vec![1], vec![]]), vec![vec![-1], vec![]]);
    }

    #[test]
    fn empty_census_at_zero() {
        let c = ctx(2, "2*L0");
        let census = enumerate_basis(
            &c,
            int(0),
            Grading::Principal,
            &CensusFilter::default(),
            true,
            Search::Tight,
        )
        .unwrap();
        assert_eq!(census.counts, BTreeMap::from([(int(0), 1)]));
        assert_eq!(census.monomials.unwrap()[0].monomial, QPMonomial::empty(2));
    }

    #[test]
    fn table_one_small_rows() {
        let c = ctx(2, "2*L0");
        let filter = CensusFilter {
            color_type: Some(vec![2, 1]),
            ..Default::default()
        };
        let census = enumerate_basis(&c, frac(5, 2), Grading::Parafermionic, &filter, true, Search::Tight).unwrap();
        assert_eq!(census.counts, BTreeMap::from([(frac(3, 2), 1), (frac(5, 2), 2)]));
        let text = render_table(&census, TableStyle::Plain);
        assert_eq!(text.lines().nth(1).unwrap(), "(1;2) | 3/2 | (1_{a2} -3_{a1} -1_{a1})");
    }

    #[test]
    fn table_two_first_row() {
        let c = ctx(2, "3*L0");
        let filter = CensusFilter {
            color_type: Some(vec![2, 1]),
            ..Default::default()
        };
        let census = enumerate_basis(&c, int(1), Grading::Parafermionic, &filter, true, Search::Tight).unwrap();
        let text = render_table(&census, TableStyle::WithChargeType);
        assert_eq!(text.lines().nth(1).unwrap(), "(1;2) | 1 | (1;2) | (0_{a2} -2_{2a1})");
    }

    #[test]
    fn empty_table_is_header_only() {
        let census = Census {
            grading: Grading::Parafermionic,
            max_energy: int(3),
            counts: BTreeMap::new(),
            monomials: Some(Vec::new()),
        };
        assert_eq!(
            render_table(&census, TableStyle::Plain),
            "color-type | energy | basis\n"
        );
    }

    #[test]
    fn listed_monomials_are_admissible_and_graded() {
        let c = ctx(2, "1*L0+2*L2");
        let census = enumerate_basis(
            &c,
            int(4),
            Grading::Parafermionic,
            &CensusFilter::default(),
            true,
            Search::Tight,
        )
        .unwrap();
        let list = census.monomials.as_ref().unwrap();
        assert_eq!(list.len() as u64, census.total());
        for gm in list {
            assert!(check_admissible(&gm.monomial, &c), "{}", gm.monomial);
            assert_eq!(parafermionic_energy(&gm.monomial, &c), gm.grade);
        }
        let mut sorted = list.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), list.len());
    }

    #[test]
    fn census_agrees_with_brute_force_for_sl2() {
        // Level 3, one color: scan every charge configuration and index
        // vector in a box and count the admissible ones.
        let c = ctx(1, "2*L0+1*L1");
        let max = 6i64;
        let census = enumerate_basis(
            &c,
            int(max),
            Grading::Principal,
            &CensusFilter::default(),
            false,
            Search::Tight,
        )
        .unwrap();
        let mut brute: BTreeMap<Rational, u64> = BTreeMap::new();
        let mut configs: Vec<Vec<usize>> = vec![vec![]];
        for len in 1..=4 {
            let mut next = Vec::new();
            for cfg in configs.iter().filter(|c| c.len() == len - 1) {
                for s in 1..=2usize {
                    if cfg.last().is_none_or(|&l| s <= l) {
                        let mut v = cfg.clone();
                        v.push(s);
                        next.push(v);
                    }
                }
            }
            configs.extend(next);
        }
        for cfg in configs {
            let len = cfg.len();
            let mut m = vec![-12i64; len];
            loop {
                let mono = QPMonomial::new(vec![cfg
                    .iter()
                    .zip(&m)
                    .map(|(&charge, &index)| Particle { charge, index })
                    .collect()]);
                if check_admissible(&mono, &c) && mono.principal_energy() <= max {
                    *brute.entry(int(mono.principal_energy())).or_insert(0) += 1;
                }
                let mut idx = 0;
                loop {
                    if idx == len {
                        break;
                    }
                    m[idx] += 1;
                    if m[idx] > 2 {
                        m[idx] = -12;
                        idx += 1;
                    } else {
                        break;
                    }
                }
                if idx == len {
                    break;
                }
            }
        }
        assert_eq!(census.counts, brute);
    }

    #[test]
    fn principal_census_matches_dotted_sum() {
        for spec in ["3*L0", "2*L0+1*L1"] {
            let hw = HighestWeight::parse(2, spec).unwrap();
            let c = AdmissibilityContext::new(hw.clone()).unwrap();
            let census = enumerate_basis(
                &c,
                int(6),
                Grading::Principal,
                &CensusFilter::default(),
                false,
                Search::Tight,
            )
            .unwrap();
            let dotted = hw.dotted().unwrap();
            let sum = principal_sum(&dotted, hw.level() - 1, int(6), Search::Tight).unwrap();
            assert_eq!(census.to_series(), sum, "{spec}");
        }
    }

    #[test]
    fn parafermionic_census_matches_sum() {
        let hw = HighestWeight::parse(2, "1*L0+1*L2").unwrap();
        let c = AdmissibilityContext::new(hw.clone()).unwrap();
        let census = enumerate_basis(
            &c,
            int(6),
            Grading::Parafermionic,
            &CensusFilter::default(),
            false,
            Search::Tight,
        )
        .unwrap();
        let sum = parafermionic_sum(&hw, int(6), None, Search::Tight).unwrap();
        assert_eq!(census.to_series(), sum);
    }

    #[test]
    fn charge_type_strings() {
        let t = parse_charge_type("1,1;2", 2, 2).unwrap();
        assert_eq!(t.rows(), &[vec![0, 1], vec![2, 0]]);
        assert_eq!(format_charge_type(&charges_of(&t)), "(1,1;2)");
        assert_eq!(parse_color_type("(1;2)", 2).unwrap(), vec![2, 1]);
        assert_eq!(format_color_type(&[2, 1]), "(1;2)");
        assert!(parse_color_type("1;2;3", 2).is_err());
        assert!(parse_charge_type("3;1", 2, 2).is_err());
    }

    #[test]
    fn doubled_selection_changes_nothing() {
        let c = ctx(2, "3*L0");
        let a = enumerate_basis(
            &c,
            int(5),
            Grading::Parafermionic,
            &CensusFilter::default(),
            false,
            Search::Tight,
        )
        .unwrap();
        let b = enumerate_basis(
            &c,
            int(5),
            Grading::Parafermionic,
            &CensusFilter::default(),
            false,
            Search::Doubled,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
