//! Exact enumeration of integer points under a positive definite quadratic
//! function.
//!
//! Points `x ∈ Z^d` (optionally box-constrained) with
//! `f(x) = xᵀ G x + l·x ≤ bound` are visited by a Fincke–Pohst descent over
//! an exact `LDLᵀ` factorisation of `G`. All arithmetic is rational, so the
//! per-coordinate ranges are exact and nothing below the bound is missed.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use super::LatticeError;
use crate::rational::Rational;

type Wide = Ratio<i128>;

fn widen(r: &Rational) -> Wide {
    Wide::new(*r.numer() as i128, *r.denom() as i128)
}

fn narrow(r: &Wide) -> Rational {
    let num = i64::try_from(*r.numer()).expect("energy numerator overflows i64");
    let den = i64::try_from(*r.denom()).expect("energy denominator overflows i64");
    Rational::new(num, den)
}

/// A positive definite quadratic function prepared for enumeration.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    dim: usize,
    pivots: Vec<Wide>,
    // mu[i][j] for j > i: f(x) - f_min = Σ_i pivot_i (y_i + Σ_{j>i} mu_ij y_j)², y = x - center
    mu: Vec<Vec<Wide>>,
    center: Vec<Wide>,
    min_value: Wide,
    lower: Vec<Option<i64>>,
    upper: Vec<Option<i64>>,
}

impl Ellipsoid {
    /// `gram` must be symmetric; the function is `xᵀ gram x + linear·x`.
    pub fn new(gram: &[Vec<Rational>], linear: &[Rational]) -> Result<Self, LatticeError> {
        let dim = gram.len();
        if linear.len() != dim || gram.iter().any(|row| row.len() != dim) {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: linear.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }

        // Cohen, Algorithm 2.7.6 (quadratic completion), exact.
        let mut q: Vec<Vec<Wide>> = gram.iter().map(|row| row.iter().map(widen).collect()).collect();
        for i in 0..dim {
            if !q[i][i].is_positive() {
                return Err(LatticeError::NotPositiveDefinite);
            }
            for j in (i + 1)..dim {
                q[j][i] = q[i][j];
                q[i][j] = q[i][j] / q[i][i];
            }
            for k in (i + 1)..dim {
                for l in k..dim {
                    let delta = q[k][i] * q[i][l];
                    q[k][l] -= delta;
                }
            }
        }
        let pivots: Vec<Wide> = (0..dim).map(|i| q[i][i]).collect();
        let mu: Vec<Vec<Wide>> = (0..dim)
            .map(|i| (0..dim).map(|j| if j > i { q[i][j] } else { Wide::zero() }).collect())
            .collect();

        // Minimiser z solves G z = -l/2. With G = Uᵀ D U (U unit upper with
        // entries mu), solve Uᵀ w = -l/2, then D v = w, then U z = v.
        let half = Wide::new(1, 2);
        let mut w = vec![Wide::zero(); dim];
        for i in 0..dim {
            let mut acc = -widen(&linear[i]) * half;
            for k in 0..i {
                acc -= mu[k][i] * w[k];
            }
            w[i] = acc;
        }
        let v: Vec<Wide> = (0..dim).map(|i| w[i] / pivots[i]).collect();
        let mut center = vec![Wide::zero(); dim];
        for i in (0..dim).rev() {
            let mut acc = v[i];
            for j in (i + 1)..dim {
                acc -= mu[i][j] * center[j];
            }
            center[i] = acc;
        }
        // f(z) = l·z / 2 at the minimiser.
        let min_value = (0..dim).fold(Wide::zero(), |acc, i| acc + widen(&linear[i]) * center[i]) * half;

        Ok(Self {
            dim,
            pivots,
            mu,
            center,
            min_value,
            lower: vec![None; dim],
            upper: vec![None; dim],
        })
    }

    pub fn with_lower_bounds(mut self, lower: i64) -> Self {
        self.lower = vec![Some(lower); self.dim];
        self
    }

    pub fn with_bounds(mut self, lower: Vec<Option<i64>>, upper: Vec<Option<i64>>) -> Self {
        assert_eq!(lower.len(), self.dim);
        assert_eq!(upper.len(), self.dim);
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact minimum of the function over real vectors.
    pub fn min_value(&self) -> Rational {
        narrow(&self.min_value)
    }

    /// Calls `visit(x, f(x))` for every admissible integer point with
    /// `f(x) ≤ bound`. Visiting order is deterministic (lexicographic in the
    /// last coordinate first, ascending).
    pub fn for_each<F: FnMut(&[i64], Rational)>(&self, bound: Rational, mut visit: F) {
        let remaining = widen(&bound) - self.min_value;
        if remaining.is_negative() {
            return;
        }
        let mut x = vec![0i64; self.dim];
        if self.dim == 0 {
            visit(&x, narrow(&self.min_value));
            return;
        }
        let bound_w = widen(&bound);
        self.descend(self.dim - 1, remaining, bound_w, &mut x, &mut visit);
    }

    /// Collects all points; convenience for small problems and tests.
    pub fn points(&self, bound: Rational) -> Vec<(Vec<i64>, Rational)> {
        let mut out = Vec::new();
        self.for_each(bound, |x, v| out.push((x.to_vec(), v)));
        out
    }

    fn descend<F: FnMut(&[i64], Rational)>(
        &self,
        i: usize,
        remaining: Wide,
        bound: Wide,
        x: &mut Vec<i64>,
        visit: &mut F,
    ) {
        // y_j = x_j - z_j for j > i are fixed; centre for x_i.
        let mut shift = Wide::zero();
        for j in (i + 1)..self.dim {
            shift += self.mu[i][j] * (Wide::from_integer(x[j] as i128) - self.center[j]);
        }
        let centre = self.center[i] - shift;
        let pivot = self.pivots[i];
        let radius_sq = remaining / pivot;
        let fits = |v: i64| {
            let d = Wide::from_integer(v as i128) - centre;
            d * d <= radius_sq
        };

        // Float estimate, then exact correction on both ends.
        let c = centre.to_f64().unwrap_or(0.0);
        let r = radius_sq.to_f64().unwrap_or(0.0).max(0.0).sqrt();
        let mut lo = (c - r).ceil() as i64;
        let mut hi = (c + r).floor() as i64;
        while fits(lo - 1) {
            lo -= 1;
        }
        while lo <= hi && !fits(lo) {
            lo += 1;
        }
        while fits(hi + 1) {
            hi += 1;
        }
        while hi >= lo && !fits(hi) {
            hi -= 1;
        }
        if let Some(l) = self.lower[i] {
            lo = lo.max(l);
        }
        if let Some(u) = self.upper[i] {
            hi = hi.min(u);
        }
        for v in lo..=hi {
            let d = Wide::from_integer(v as i128) - centre;
            let rest = remaining - pivot * d * d;
            x[i] = v;
            if i == 0 {
                visit(x, narrow(&(bound - rest)));
            } else {
                self.descend(i - 1, rest, bound, x, visit);
            }
        }
        x[i] = 0;
    }
}

/// Evaluates `xᵀ G x + l·x` directly (used for cross-checks).
pub fn evaluate(gram: &[Vec<Rational>], linear: &[Rational], x: &[i64]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            total += g * Rational::from_integer(x[i] * x[j]);
        }
        total += linear[i] * Rational::from_integer(x[i]);
    }
    total
}
