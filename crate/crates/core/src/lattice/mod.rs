//! Root and weight lattices of `sl(n+1)` with exact rational inner products.
//!
//! Weights are stored in the fundamental-weight basis (`Λ_1 … Λ_n`), so a
//! weight lies in `P` exactly when its coordinates are integers; membership
//! in the root lattice `Q` is decided by converting to simple-root
//! coordinates and testing integrality. Indices in the public API are
//! 1-based, matching the usual `α_i`, `Λ_i` labelling.

pub mod ellipsoid;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{int, Rational};
pub use ellipsoid::Ellipsoid;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank mismatch: context has rank {expected}, vector has {found} coordinates")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("sl(k) data requires k ≥ 2, got {0}")]
    LevelTooSmall(usize),
    #[error("quadratic form is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("weight {0} does not lie in the root lattice")]
    NotInRootLattice(String),
    #[error("weight {0} does not lie in the weight lattice")]
    NotInWeightLattice(String),
}

/// A weight of `sl(n+1)` in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVec {
    coords: Vec<Rational>,
}

impl WeightVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Rational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates in the fundamental-weight basis (Dynkin labels).
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Integer Dynkin labels when the weight lies in `P`.
    pub fn dynkin_labels(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &WeightVec) -> WeightVec {
        assert_eq!(self.rank(), other.rank());
        WeightVec::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &WeightVec) -> WeightVec {
        assert_eq!(self.rank(), other.rank());
        WeightVec::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: Rational) -> WeightVec {
        WeightVec::new(self.coords.iter().map(|c| c * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Cartan data and the invariant form for `sl(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeContext {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    inv_cartan_fund: Vec<Vec<Rational>>,
    dual_coxeter: i64,
    dim_g: i64,
    weyl_rho_normsq: Rational,
}

impl LatticeContext {
    pub fn new(rank: usize) -> Result<Self, LatticeError> {
        if rank == 0 {
            return Err(LatticeError::ZeroRank);
        }
        let cartan = cartan_matrix(rank);
        let h = (rank + 1) as i64;
        let inv_cartan_fund: Vec<Vec<Rational>> = (1..=rank as i64)
            .map(|i| {
                (1..=rank as i64)
                    .map(|j| int(i.min(j)) - Rational::new(i * j, h))
                    .collect()
            })
            .collect();
        let weyl_rho_normsq = inv_cartan_fund.iter().flatten().sum();
        Ok(Self {
            rank,
            cartan,
            inv_cartan_fund,
            dual_coxeter: h,
            dim_g: h * h - 1,
            weyl_rho_normsq,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `⟨Λ_i, Λ_j⟩` for 0-based `i, j`.
    pub fn inv_cartan_fund(&self) -> &[Vec<Rational>] {
        &self.inv_cartan_fund
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn dim_g(&self) -> i64 {
        self.dim_g
    }

    /// `⟨ρ, ρ⟩`.
    pub fn rho_normsq(&self) -> Rational {
        self.weyl_rho_normsq
    }

    fn check_index(&self, index: usize) -> Result<usize, LatticeError> {
        if index == 0 || index > self.rank {
            Err(LatticeError::IndexOutOfRange { index, max: self.rank })
        } else {
            Ok(index - 1)
        }
    }

    fn check_rank(&self, v: &WeightVec) -> Result<(), LatticeError> {
        if v.rank() != self.rank {
            Err(LatticeError::DimensionMismatch {
                expected: self.rank,
                found: v.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// `A_{lm}` with 1-based indices.
    pub fn cartan_entry(&self, l: usize, m: usize) -> Result<i64, LatticeError> {
        Ok(self.cartan[self.check_index(l)?][self.check_index(m)?])
    }

    /// The fundamental weight `Λ_i` (1-based).
    pub fn fundamental_weight(&self, i: usize) -> Result<WeightVec, LatticeError> {
        let i = self.check_index(i)?;
        let mut coords = vec![Rational::zero(); self.rank];
        coords[i] = Rational::one();
        Ok(WeightVec::new(coords))
    }

    /// The simple root `α_i` (1-based).
    pub fn simple_root(&self, i: usize) -> Result<WeightVec, LatticeError> {
        let i = self.check_index(i)?;
        let mut coords = vec![0; self.rank];
        coords[i] = 1;
        Ok(self.from_root_coords(&coords))
    }

    pub fn rho(&self) -> WeightVec {
        WeightVec::from_ints(&vec![1; self.rank])
    }

    pub fn zero(&self) -> WeightVec {
        WeightVec::zero(self.rank)
    }

    /// `Σ c_i α_i` in the fundamental basis: the `i`-th root is the `i`-th
    /// row of the Cartan matrix.
    pub fn from_root_coords(&self, coords: &[i64]) -> WeightVec {
        assert_eq!(coords.len(), self.rank, "root coordinate count");
        WeightVec::new(
            (0..self.rank)
                .map(|j| int((0..self.rank).map(|i| coords[i] * self.cartan[i][j]).sum()))
                .collect(),
        )
    }

    /// Coordinates in the simple-root basis (exact, possibly fractional).
    pub fn root_coords_rational(&self, v: &WeightVec) -> Result<Vec<Rational>, LatticeError> {
        self.check_rank(v)?;
        Ok((0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.inv_cartan_fund[i][j] * v.coords[j]).sum())
            .collect())
    }

    /// Integer simple-root coordinates when `v ∈ Q`.
    pub fn root_coords(&self, v: &WeightVec) -> Result<Vec<i64>, LatticeError> {
        let coords = self.root_coords_rational(v)?;
        coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| LatticeError::NotInRootLattice(v.to_string()))
    }

    pub fn in_root_lattice(&self, v: &WeightVec) -> bool {
        self.root_coords(v).is_ok()
    }

    /// The invariant form, normalised so that roots have square length 2.
    pub fn inner_product(&self, u: &WeightVec, v: &WeightVec) -> Result<Rational, LatticeError> {
        self.check_rank(u)?;
        self.check_rank(v)?;
        let mut total = Rational::zero();
        for i in 0..self.rank {
            if u.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                total += u.coords[i] * self.inv_cartan_fund[i][j] * v.coords[j];
            }
        }
        Ok(total)
    }

    pub fn norm_sq(&self, v: &WeightVec) -> Result<Rational, LatticeError> {
        self.inner_product(v, v)
    }

    /// `⟨α, β⟩` for root-lattice vectors given by simple-root coordinates.
    pub fn root_inner_product(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                total += a[i] * self.cartan[i][j] * b[j];
            }
        }
        total
    }

    /// Positive roots `α_i + … + α_j` in simple-root coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let mut roots = Vec::new();
        for i in 0..self.rank {
            for j in i..self.rank {
                roots.push((0..self.rank).map(|l| i64::from(l >= i && l <= j)).collect());
            }
        }
        roots
    }

    /// All `n(n+1)` roots.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let positive = self.positive_roots();
        let negative = positive.iter().map(|r| r.iter().map(|c| -c).collect());
        positive.iter().cloned().chain(negative).collect()
    }

    /// Root-lattice vectors `α` (simple-root coordinates) with
    /// `scale·⟨α,α⟩ + ⟨α, linear⟩ ≤ bound`, in deterministic order.
    ///
    /// `scale` must be positive.
    pub fn vectors_by_norm(
        &self,
        scale: Rational,
        linear: &WeightVec,
        bound: Rational,
    ) -> Result<Vec<(Vec<i64>, Rational)>, LatticeError> {
        self.check_rank(linear)?;
        let gram: Vec<Vec<Rational>> = self
            .cartan
            .iter()
            .map(|row| row.iter().map(|&a| scale * int(a)).collect())
            .collect();
        // ⟨α_i, μ⟩ is the i-th Dynkin label of μ.
        let ellipsoid = Ellipsoid::new(&gram, linear.coords())?;
        Ok(ellipsoid.points(bound))
    }
}

/// The Cartan matrix of `sl(rank+1)`, i.e. type `A_rank`.
pub fn cartan_matrix(rank: usize) -> Vec<Vec<i64>> {
    (0..rank)
        .map(|l| {
            (0..rank)
                .map(|m| match l.abs_diff(m) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

fn check_slk(s: usize, t: usize, k: usize) -> Result<(), LatticeError> {
    if k < 2 {
        return Err(LatticeError::LevelTooSmall(k));
    }
    for index in [s, t] {
        if index == 0 || index > k - 1 {
            return Err(LatticeError::IndexOutOfRange { index, max: k - 1 });
        }
    }
    Ok(())
}

/// `B^{st} = min(s, t)` for `1 ≤ s, t ≤ k-1`.
pub fn min_matrix_entry(s: usize, t: usize, k: usize) -> Result<i64, LatticeError> {
    check_slk(s, t, k)?;
    Ok(s.min(t) as i64)
}

/// Entry of the inverse Cartan matrix of `sl(k)`: `min(s,t) - st/k`.
pub fn inv_cartan_slk_entry(s: usize, t: usize, k: usize) -> Result<Rational, LatticeError> {
    check_slk(s, t, k)?;
    Ok(int(s.min(t) as i64) - Rational::new((s * t) as i64, k as i64))
}

/// Inverts a square rational matrix by Gauss–Jordan elimination.
/// Returns `None` when the matrix is singular.
pub fn invert_exact(matrix: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = matrix.len();
    let mut work: Vec<Vec<BigRational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let inv = work[col][col].recip();
        for x in work[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let factor = work[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &work[col][c];
                    work[r][c] -= delta;
                }
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Converts an integer matrix to exact big rationals.
pub fn to_big_rational(matrix: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}
