//! Split-signature linear algebra on `R^{2m}` with the Norden metric pair.
//!
//! Vectors are columns ordered `(x^1, ..., x^m; y^1, ..., y^m)`, identified with
//! `z = x + i y` in `C^m`. The complex structure acts as `J(x; y) = (y; -x)`, so
//! multiplication by `i` on `C^m` corresponds to `-J`. With this convention
//! `g(JZ, JW) = -g(Z, W)` and `g~(Z, W) = g(JZ, W)` hold verbatim.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};

pub type RealVector = DVector<f64>;
pub type RealMatrix = DMatrix<f64>;
pub type ComplexScalar = Complex<f64>;
pub type ComplexVector = DVector<Complex<f64>>;
pub type ComplexMatrix = DMatrix<Complex<f64>>;

/// Default absolute tolerance for structural checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The arena `(R^{2m}, g, g~, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NordenSpace {
    m: usize,
}

impl NordenSpace {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::AmbientTooSmall(0));
        }
        Ok(Self { m })
    }

    /// Infers the space from a vector length.
    pub fn of_vector(u: &RealVector) -> Result<Self> {
        if u.is_empty() || !u.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: u.len() + (u.len() % 2),
                found: u.len(),
            });
        }
        Ok(Self { m: u.len() / 2 })
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Real dimension `2m`.
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn check(&self, u: &RealVector) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> RealVector {
        RealVector::zeros(self.dim())
    }

    /// `e_k`: the k-th x-axis (0-based).
    pub fn e(&self, k: usize) -> RealVector {
        let mut v = self.zero();
        v[k] = 1.0;
        v
    }

    /// `f_k`: the k-th y-axis (0-based).
    pub fn f(&self, k: usize) -> RealVector {
        let mut v = self.zero();
        v[self.m + k] = 1.0;
        v
    }

    /// Matrix of `J`: `[[0, I], [-I, 0]]`.
    pub fn j_matrix(&self) -> RealMatrix {
        let m = self.m;
        let mut j = RealMatrix::zeros(2 * m, 2 * m);
        for k in 0..m {
            j[(k, m + k)] = 1.0;
            j[(m + k, k)] = -1.0;
        }
        j
    }

    /// Gram matrix of `g` on the standard basis: `diag(I, -I)`.
    pub fn g_gram(&self) -> RealMatrix {
        let m = self.m;
        RealMatrix::from_fn(2 * m, 2 * m, |r, c| match (r == c, r < m) {
            (true, true) => 1.0,
            (true, false) => -1.0,
            _ => 0.0,
        })
    }

    /// Gram matrix of `g~` on the standard basis.
    pub fn gt_gram(&self) -> RealMatrix {
        let m = self.m;
        let mut gt = RealMatrix::zeros(2 * m, 2 * m);
        for k in 0..m {
            gt[(k, m + k)] = 1.0;
            gt[(m + k, k)] = 1.0;
        }
        gt
    }

    /// The standard adapted basis `(e_1, ..., e_m, J e_1, ..., J e_m)`.
    pub fn standard_adapted_basis(&self) -> Vec<RealVector> {
        let xs: Vec<_> = (0..self.m).map(|k| self.e(k)).collect();
        let js: Vec<_> = xs.iter().map(apply_j).collect();
        xs.into_iter().chain(js).collect()
    }
}

fn check_pair(u: &RealVector, v: &RealVector) -> Result<()> {
    let space = NordenSpace::of_vector(u)?;
    space.check(v)
}

/// `g(u, v) = sum x_u x_v - sum y_u y_v`.
pub fn metric_g(u: &RealVector, v: &RealVector) -> Result<f64> {
    check_pair(u, v)?;
    Ok(g(u, v))
}

/// The associated metric `g~(u, v) = g(Ju, v)`.
pub fn metric_gt(u: &RealVector, v: &RealVector) -> Result<f64> {
    check_pair(u, v)?;
    Ok(gt(u, v))
}

/// Unchecked `g`; both vectors must have the same even length.
#[inline]
pub fn g(u: &RealVector, v: &RealVector) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let m = u.len() / 2;
    let mut s = 0.0;
    for k in 0..m {
        s += u[k] * v[k] - u[m + k] * v[m + k];
    }
    s
}

/// Unchecked `g~`. Evaluated as `g(Ju, v)` term by term:
/// `(Ju)_k = y_k`, `(Ju)_{m+k} = -x_k`.
#[inline]
pub fn gt(u: &RealVector, v: &RealVector) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let m = u.len() / 2;
    let mut s = 0.0;
    for k in 0..m {
        s += u[m + k] * v[k] + u[k] * v[m + k];
    }
    s
}

/// `J(x; y) = (y; -x)`.
///
/// Panics if `u` has odd length.
pub fn apply_j(u: &RealVector) -> RealVector {
    assert!(u.len().is_multiple_of(2), "vector length must be even");
    let m = u.len() / 2;
    RealVector::from_fn(2 * m, |r, _| if r < m { u[m + r] } else { -u[r - m] })
}

/// Multiplication by a complex scalar under `C^m = R^{2m}`: `(re I - im J) u`.
pub fn complex_scale(c: ComplexScalar, u: &RealVector) -> RealVector {
    u * c.re - apply_j(u) * c.im
}

/// `q(u) = g(u, u) + i g~(u, u)`, the complex quadratic form `z^T z`.
pub fn quadratic(u: &RealVector) -> ComplexScalar {
    Complex::new(g(u, u), gt(u, u))
}

/// The complex bilinear pairing `g(u, v) + i g~(u, v)`.
pub fn bilinear(u: &RealVector, v: &RealVector) -> ComplexScalar {
    Complex::new(g(u, v), gt(u, v))
}

/// `r^{-1}`: real `(x; y)` to complex `x + i y`.
pub fn to_complex(u: &RealVector) -> ComplexVector {
    let m = u.len() / 2;
    ComplexVector::from_fn(m, |k, _| Complex::new(u[k], u[m + k]))
}

/// `r`: complex `x + i y` to real `(x; y)`.
pub fn from_complex(z: &ComplexVector) -> RealVector {
    let m = z.len();
    RealVector::from_fn(2 * m, |r, _| if r < m { z[r].re } else { z[r - m].im })
}

/// Real representation of a complex matrix acting on `C^m`: `[[A, -B], [B, A]]`
/// for `alpha = A + iB`.
pub fn realify(alpha: &ComplexMatrix) -> RealMatrix {
    let m = alpha.nrows();
    RealMatrix::from_fn(2 * m, 2 * m, |r, c| {
        let z = alpha[(r % m, c % m)];
        match (r < m, c < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`realify`] for a matrix commuting with `J`.
pub fn complexify(s: &RealMatrix) -> ComplexMatrix {
    let m = s.nrows() / 2;
    ComplexMatrix::from_fn(m, m, |r, c| Complex::new(s[(r, c)], s[(m + r, c)]))
}

/// Max-norm of a matrix.
pub fn max_abs(a: &RealMatrix) -> f64 {
    a.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Membership in `r(O(m, C))`: `M` commutes with `J` and preserves `g`, both
/// tested entrywise on the standard basis at absolute tolerance `tol`.
pub fn is_structure_group_member(mat: &RealMatrix, tol: f64) -> Result<bool> {
    let n = mat.nrows();
    if n != mat.ncols() || n == 0 || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: n.max(mat.ncols()) + n % 2,
            found: mat.ncols(),
        });
    }
    let space = NordenSpace::new(n / 2)?;
    let j = space.j_matrix();
    let gram = space.g_gram();
    let commutator = max_abs(&(mat * &j - &j * mat));
    let preserve = max_abs(&(mat.transpose() * &gram * mat - &gram));
    Ok(commutator <= tol && preserve <= tol)
}

/// Checks that `vectors = (x_1..x_m, Jx_1..Jx_m)` is an adapted basis:
/// the second half is `J` of the first and `g(x_i,x_j) = delta_ij`,
/// `g(x_i, Jx_j) = 0`.
pub fn is_adapted_basis(vectors: &[RealVector], tol: f64) -> Result<bool> {
    if vectors.is_empty() || !vectors.len().is_multiple_of(2) {
        return Err(Error::InvalidBasis(format!(
            "expected an even, non-zero number of vectors, got {}",
            vectors.len()
        )));
    }
    let half = vectors.len() / 2;
    let space = NordenSpace::of_vector(&vectors[0])?;
    for v in vectors {
        space.check(v)?;
    }
    let (xs, js) = vectors.split_at(half);
    for (x, jx) in xs.iter().zip(js) {
        if (apply_j(x) - jx).amax() > tol {
            return Ok(false);
        }
    }
    for i in 0..half {
        for k in 0..half {
            let delta = if i == k { 1.0 } else { 0.0 };
            if (g(&xs[i], &xs[k]) - delta).abs() > tol
                || (g(&js[i], &js[k]) + delta).abs() > tol
                || g(&xs[i], &js[k]).abs() > tol
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A complex Givens rotation in the `(j, k)` plane with complex angle
/// `theta`; it satisfies `alpha alpha^T = I`.
pub fn complex_givens(m: usize, j: usize, k: usize, theta: ComplexScalar) -> ComplexMatrix {
    let mut alpha = ComplexMatrix::identity(m, m);
    let (s, c) = (theta.sin(), theta.cos());
    alpha[(j, j)] = c;
    alpha[(k, k)] = c;
    alpha[(j, k)] = -s;
    alpha[(k, j)] = s;
    alpha
}

/// A random complex orthogonal matrix built as a product of complex Givens
/// rotations and coordinate sign flips. Hyperbolic parts of the angles are
/// drawn from `[-max_hyperbolic, max_hyperbolic]`.
pub fn random_complex_orthogonal<R: Rng>(
    m: usize,
    rng: &mut R,
    max_hyperbolic: f64,
) -> ComplexMatrix {
    let mut alpha = ComplexMatrix::identity(m, m);
    for k in 0..m {
        if rng.random_bool(0.5) {
            alpha[(k, k)] = Complex::new(-1.0, 0.0);
        }
    }
    if m < 2 {
        return alpha;
    }
    for _ in 0..(2 * m) {
        let j = rng.random_range(0..m);
        let mut k = rng.random_range(0..m - 1);
        if k >= j {
            k += 1;
        }
        let theta = Complex::new(
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.random_range(-max_hyperbolic..=max_hyperbolic),
        );
        alpha = complex_givens(m, j, k, theta) * alpha;
    }
    alpha
}

/// A random member of `r(O(m, C))`.
pub fn random_structure_group_member<R: Rng>(m: usize, rng: &mut R) -> RealMatrix {
    realify(&random_complex_orthogonal(m, rng, 0.5))
}
