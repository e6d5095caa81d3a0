//! Truncated formal q-series with rational exponents.
//!
//! A [`QSeries`] stores the coefficients of every exponent up to and
//! including its truncation `order`; anything above the order is unknown.
//! Arithmetic tracks how much of the result is actually determined by the
//! operands, so a coefficient above the known range is never reported.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{floor_int, format_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QSeriesError {
    #[error("insufficient precision: comparison to order {requested} but series known only to order {available}")]
    InsufficientPrecision { requested: Rational, available: Rational },
    #[error("malformed series: {0}")]
    Malformed(String),
}

/// A q-series known exactly up to `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Rational, BigInt>,
    order: Rational,
}

/// First disagreement between two series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    #[serde(with = "crate::rational::serde_rational")]
    pub exponent: Rational,
    pub left: String,
    pub right: String,
}

impl QSeries {
    pub fn zero(order: Rational) -> Self {
        Self {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn one(order: Rational) -> Self {
        Self::monomial(Rational::zero(), BigInt::one(), order)
    }

    /// `coeff · q^exp`, dropped if `exp` exceeds the order.
    pub fn monomial(exp: Rational, coeff: BigInt, order: Rational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(exp, coeff);
        s
    }

    pub fn from_terms<I>(terms: I, order: Rational) -> Self
    where
        I: IntoIterator<Item = (Rational, BigInt)>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Series with integer exponents `0..` from a dense coefficient list.
    pub fn from_dense(coeffs: &[BigInt], order: Rational) -> Self {
        Self::from_terms(
            coeffs.iter().enumerate().map(|(i, c)| (int(i as i64), c.clone())),
            order,
        )
    }

    pub fn order(&self) -> Rational {
        self.order
    }

    pub fn coeff(&self, exp: &Rational) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<Rational> {
        self.terms.keys().next().copied()
    }

    /// Lower bound for every exponent the full series could carry.
    fn valuation_bound(&self) -> Rational {
        self.leading_exponent().unwrap_or(self.order)
    }

    /// Adds `coeff · q^exp` in place; terms above the order are dropped.
    pub fn add_term(&mut self, exp: Rational, coeff: BigInt) {
        if exp > self.order || coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `q^shift · Σ_i coeffs[i] q^i` in place, keeping the order.
    pub fn add_shifted_dense(&mut self, shift: Rational, coeffs: &[BigInt]) {
        for (i, c) in coeffs.iter().enumerate() {
            let e = shift + int(i as i64);
            if e > self.order {
                break;
            }
            if !c.is_zero() {
                self.add_term(e, c.clone());
            }
        }
    }

    /// Lowers the order (never raises it).
    pub fn truncate(&self, order: Rational) -> Self {
        let order = order.min(self.order);
        Self {
            terms: self.terms.range(..=order).map(|(e, c)| (*e, c.clone())).collect(),
            order,
        }
    }

    /// Multiplication by `q^r`; the known range moves with it.
    pub fn shift(&self, r: Rational) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + r, c.clone())).collect(),
            order: self.order + r,
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero(self.order);
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.order.min(other.order));
        for (e, c) in other.terms.range(..=out.order) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            order: self.order,
        }
    }

    /// Product; the result order is bounded by both operand orders and by
    /// each operand's unknown tail times the other's leading term.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self
            .order
            .min(other.order)
            .min(self.order + other.valuation_bound())
            .min(other.order + self.valuation_bound());
        let mut out = Self::zero(order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e > order {
                    break;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Coefficient-wise comparison for exponents `≤ order`.
    pub fn equal_to_order(&self, other: &Self, order: Rational) -> Result<Option<Discrepancy>, QSeriesError> {
        for s in [self, other] {
            if s.order < order {
                return Err(QSeriesError::InsufficientPrecision {
                    requested: order,
                    available: s.order,
                });
            }
        }
        let exps: std::collections::BTreeSet<&Rational> = self
            .terms
            .range(..=order)
            .chain(other.terms.range(..=order))
            .map(|(e, _)| e)
            .collect();
        for e in exps {
            let (a, b) = (self.coeff(e), other.coeff(e));
            if a != b {
                return Ok(Some(Discrepancy {
                    exponent: *e,
                    left: a.to_string(),
                    right: b.to_string(),
                }));
            }
        }
        Ok(None)
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// One term per line: `<exponent> <coefficient>`, ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&format!("{} {}\n", format_rational(e), c));
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SeriesRepr::from(self)).expect("series serialises")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, QSeriesError> {
        let repr: SeriesRepr =
            serde_json::from_value(value.clone()).map_err(|e| QSeriesError::Malformed(e.to_string()))?;
        QSeries::try_from(repr)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " ")?;
            }
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{sign}{mag}")?;
            } else if mag.is_one() {
                write!(f, "{sign}q^{}", format_rational(e))?;
            } else {
                write!(f, "{sign}{mag}q^{}", format_rational(e))?;
            }
        }
        write!(f, " + O(q^>{})", format_rational(&self.order))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: String,
    terms: Vec<TermRepr>,
}

impl From<&QSeries> for SeriesRepr {
    fn from(s: &QSeries) -> Self {
        SeriesRepr {
            order: format_rational(&s.order),
            terms: s
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: format_rational(e),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for QSeries {
    type Error = QSeriesError;
    fn try_from(repr: SeriesRepr) -> Result<Self, Self::Error> {
        let bad = |m: String| QSeriesError::Malformed(m);
        let order = parse_rational(&repr.order).map_err(|e| bad(e.to_string()))?;
        let mut s = QSeries::zero(order);
        for t in repr.terms {
            let e = parse_rational(&t.exp).map_err(|e| bad(e.to_string()))?;
            let c: BigInt = t.coeff.parse().map_err(|_| bad(format!("coefficient {:?}", t.coeff)))?;
            if e > order {
                return Err(bad(format!("term at {e} above order {order}")));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        QSeries::try_from(repr).map_err(serde::de::Error::custom)
    }
}

// Dense integer-exponent helpers. `len` is the number of coefficients kept
// (exponents 0..len).

/// Number of dense coefficients needed to cover exponents `≤ order`.
pub fn dense_len(order: Rational) -> usize {
    if order < Rational::zero() {
        0
    } else {
        floor_int(&order) as usize + 1
    }
}

/// `(q)_p = (1-q)(1-q²)…(1-q^p)` as a dense polynomial truncated to `len`.
pub fn pochhammer_dense(p: usize, len: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); len];
    if len == 0 {
        return poly;
    }
    poly[0] = BigInt::one();
    for part in 1..=p.min(len.saturating_sub(1)) {
        for e in (part..len).rev() {
            let delta = poly[e - part].clone();
            poly[e] -= delta;
        }
    }
    poly
}

/// `1/(q)_p`: partitions into parts of size at most `p`.
pub fn pochhammer_inv_dense(p: usize, len: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); len];
    if len == 0 {
        return poly;
    }
    poly[0] = BigInt::one();
    for part in 1..=p.min(len.saturating_sub(1)) {
        for e in part..len {
            let delta = poly[e - part].clone();
            poly[e] += delta;
        }
    }
    poly
}

/// `1/(q)_∞`: the partition numbers.
pub fn euler_inf_inv_dense(len: usize) -> Vec<BigInt> {
    pochhammer_inv_dense(len.saturating_sub(1), len)
}

/// Multiplies two dense polynomials, truncating to `len`.
pub fn dense_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(q)_p` truncated at `order`.
pub fn euler_pochhammer(p: usize, order: Rational) -> QSeries {
    QSeries::from_dense(&pochhammer_dense(p, dense_len(order)), order)
}

/// `1/(q)_p` truncated at `order`.
pub fn euler_inv(p: usize, order: Rational) -> QSeries {
    QSeries::from_dense(&pochhammer_inv_dense(p, dense_len(order)), order)
}

/// `1/(q)_∞ = Π_{l≥1} (1-q^l)^{-1}` truncated at `order`.
pub fn euler_inf_inv(order: Rational) -> QSeries {
    QSeries::from_dense(&euler_inf_inv_dense(dense_len(order)), order)
}

/// `(q)_∞` truncated at `order`.
pub fn euler_inf(order: Rational) -> QSeries {
    let len = dense_len(order);
    QSeries::from_dense(&pochhammer_dense(len.saturating_sub(1), len), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn dense_coeffs(s: &QSeries, upto: i64) -> Vec<i64> {
        (0..=upto).map(|e| i64::try_from(s.coeff(&int(e))).unwrap()).collect()
    }

    fn partitions_brute(m: usize) -> usize {
        fn count(rest: usize, max_part: usize) -> usize {
            if rest == 0 {
                return 1;
            }
            (1..=max_part.min(rest)).map(|p| count(rest - p, p)).sum()
        }
        count(m, m)
    }

    #[test]
    fn shift_of_one() {
        let s = QSeries::one(int(10)).shift(frac(3, 2));
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&frac(3, 2)), big(1));
        assert_eq!(s.order(), frac(23, 2));
    }

    #[test]
    fn difference_of_squares() {
        let order = int(4);
        let a = QSeries::from_terms([(int(0), big(1)), (int(1), big(1))], order);
        let b = QSeries::from_terms([(int(0), big(1)), (int(1), big(-1))], order);
        let p = &a * &b;
        assert_eq!(p.to_text(), "0 1\n2 -1\n");
    }

    #[test]
    fn pochhammer_small_cases() {
        assert_eq!(euler_pochhammer(0, int(5)).to_text(), "0 1\n");
        assert_eq!(dense_coeffs(&euler_pochhammer(2, int(5)), 3), vec![1, -1, -1, 1]);
        // (1-q)(1-q²)(1-q³) = 1 - q - q² + q⁴ + q⁵ - q⁶
        assert_eq!(
            dense_coeffs(&euler_pochhammer(3, int(6)), 6),
            vec![1, -1, -1, 0, 1, 1, -1]
        );
    }

    #[test]
    fn inverse_pochhammer() {
        assert_eq!(dense_coeffs(&euler_inv(1, int(3)), 3), vec![1, 1, 1, 1]);
        assert_eq!(dense_coeffs(&euler_inf_inv(int(5)), 5), vec![1, 1, 2, 3, 5, 7]);
        for p in 0..6 {
            let prod = &euler_inv(p, int(12)) * &euler_pochhammer(p, int(12));
            assert_eq!(prod, QSeries::one(int(12)), "p = {p}");
        }
    }

    #[test]
    fn partition_numbers_match_brute_force() {
        let s = euler_inf_inv(int(30));
        for m in 0..=30usize {
            assert_eq!(s.coeff(&int(m as i64)), BigInt::from(partitions_brute(m)), "m = {m}");
        }
        let prod = &euler_inf_inv(int(30)) * &euler_inf(int(30));
        assert_eq!(prod, QSeries::one(int(30)));
    }

    #[test]
    fn comparison_reports_first_witness() {
        let a = QSeries::one(int(20));
        let b = QSeries::from_terms([(int(0), big(1)), (int(10), big(1))], int(20));
        assert_eq!(a.equal_to_order(&a, int(20)).unwrap(), None);
        assert_eq!(a.equal_to_order(&b, int(5)).unwrap(), None);
        let d = a.equal_to_order(&b, int(10)).unwrap().unwrap();
        assert_eq!(d.exponent, int(10));
        assert_eq!((d.left.as_str(), d.right.as_str()), ("0", "1"));
        assert!(matches!(
            a.equal_to_order(&b.truncate(int(4)), int(5)),
            Err(QSeriesError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn product_order_tracks_negative_leading_exponents() {
        let a = QSeries::monomial(frac(-2, 15), big(1), int(5));
        let b = euler_inf_inv(int(5));
        let p = &a * &b;
        assert_eq!(p.order(), int(5) - frac(2, 15));
        assert_eq!(p.leading_exponent(), Some(frac(-2, 15)));
    }

    #[test]
    fn addition_takes_smaller_order() {
        let a = euler_inf_inv(int(3));
        let b = euler_inf_inv(int(7));
        let s = &a + &b;
        assert_eq!(s.order(), int(3));
        assert_eq!(dense_coeffs(&s, 3), vec![2, 2, 4, 6]);
    }

    #[test]
    fn json_round_trip_and_format() {
        let s = QSeries::from_terms([(frac(-1, 30), big(1)), (frac(29, 30), big(-12))], frac(9, 2));
        let v = s.to_json_value();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"order":"9/2","terms":[{"exp":"-1/30","coeff":"1"},{"exp":"29/30","coeff":"-12"}]}"#
        );
        assert_eq!(QSeries::from_json_value(&v).unwrap(), s);
        assert!(QSeries::from_json_value(&serde_json::json!({"order":"1","terms":[{"exp":"2","coeff":"1"}]})).is_err());
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        (
            proptest::collection::vec((0i64..12, 1i64..=3, -5i64..=5), 0..8),
            4i64..10,
        )
            .prop_map(|(terms, order)| {
                QSeries::from_terms(
                    terms
                        .into_iter()
                        .map(|(n, d, c)| (Rational::new(n, d), BigInt::from(c))),
                    int(order),
                )
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            let left = &(&a * &b) * &c;
            let right = &a * &(&b * &c);
            let o = left.order().min(right.order());
            prop_assert_eq!(left.truncate(o), right.truncate(o));
            let dl = &a * &(&b + &c);
            let dr = &(&a * &b) + &(&a * &c);
            let o = dl.order().min(dr.order());
            prop_assert_eq!(dl.truncate(o), dr.truncate(o));
            prop_assert_eq!((&a * &b).truncate(o.min((&b * &a).order())), (&b * &a).truncate(o.min((&a * &b).order())));
        }

        #[test]
        fn product_matches_naive_convolution(
            a in proptest::collection::vec(-4i64..=4, 0..9),
            b in proptest::collection::vec(-4i64..=4, 0..9),
        ) {
            let order = int(5);
            let sa = QSeries::from_terms(a.iter().enumerate().map(|(i, c)| (int(i as i64), big(*c))), int(12));
            let sb = QSeries::from_terms(b.iter().enumerate().map(|(i, c)| (int(i as i64), big(*c))), int(12));
            let p = (&sa.truncate(order) * &sb.truncate(order)).truncate(order);
            let mut naive = [0i64; 20];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    naive[i + j] += x * y;
                }
            }
            for e in 0..=5 {
                prop_assert_eq!(p.coeff(&int(e)), big(naive[e as usize]));
            }
            prop_assert!(p.order() >= order);
        }

        #[test]
        fn json_round_trip(s in arb_series()) {
            prop_assert_eq!(QSeries::from_json_value(&s.to_json_value()).unwrap(), s);
        }
    }
}
