//! h-symmetric operators and their adapted bases of h-proper vectors.
//!
//! An operator `S` on `R^{2m}` commuting with `J` is the real form of a complex
//! `m x m` matrix `C`; `S` is g-self-adjoint exactly when `C` is complex
//! symmetric. An eigenvector `v` of `C` with eigenvalue `zeta` maps to a real
//! vector `x` with `S x = Re(zeta) x - Im(zeta) J x`, and bilinear
//! orthonormality `v_i^T v_j = delta_ij` is the adapted-basis condition.

use nalgebra::{Complex, Schur, SVD};

use crate::error::{Error, Result};
use crate::space::{
    apply_j, complexify, from_complex, g, max_abs, ComplexMatrix, ComplexScalar, ComplexVector,
    NordenSpace, RealMatrix, RealVector,
};

/// Candidates whose `|v^T v| / |v|^2` falls below this are treated as isotropic.
pub const ISOTROPY_TOL: f64 = 1e-10;

/// Relative radius used to group numerically coincident eigenvalues.
const CLUSTER_TOL: f64 = 1e-6;

/// Relative singular-value threshold defining an eigenspace.
const NULL_TOL: f64 = 1e-7;

/// An operator commuting with `J` and self-adjoint for `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct HSymmetricOp {
    matrix: RealMatrix,
}

impl HSymmetricOp {
    /// Validates `matrix`; the tolerance is applied after dividing by the
    /// largest entry of `matrix`.
    pub fn new(matrix: RealMatrix, tol: f64) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: n + n % 2,
                found: matrix.ncols(),
            });
        }
        let (commutator, asymmetry) = h_symmetry_defect(&matrix);
        if commutator > tol || asymmetry > tol {
            return Err(Error::NotHSymmetric {
                commutator,
                asymmetry,
            });
        }
        Ok(Self { matrix })
    }

    /// `lambda I + mu J` on `R^{2m}`.
    pub fn scalar(m: usize, lambda: f64, mu: f64) -> Result<Self> {
        let space = NordenSpace::new(m)?;
        Ok(Self {
            matrix: RealMatrix::identity(2 * m, 2 * m) * lambda + space.j_matrix() * mu,
        })
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// The complex symmetric matrix `r^{-1}(S)`.
    pub fn to_complex(&self) -> ComplexMatrix {
        complexify(&self.matrix)
    }
}

/// Relative J-commutator and g-asymmetry of a square matrix.
pub fn h_symmetry_defect(matrix: &RealMatrix) -> (f64, f64) {
    let space = NordenSpace::new(matrix.nrows() / 2).expect("non-empty even matrix");
    let j = space.j_matrix();
    let gram = space.g_gram();
    let scale = match max_abs(matrix) {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let commutator = max_abs(&(matrix * &j - &j * matrix)) / scale;
    let gs = &gram * matrix;
    let asymmetry = max_abs(&(&gs - gs.transpose())) / scale;
    (commutator, asymmetry)
}

/// An adapted basis `{x_k; J x_k}` of h-proper vectors with `S x_k = lambda_k x_k + mu_k J x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HProperDecomposition {
    pub basis: Vec<RealVector>,
    pub pairs: Vec<(f64, f64)>,
}

impl HProperDecomposition {
    /// The full adapted basis `(x_1, ..., x_m, J x_1, ..., J x_m)`.
    pub fn adapted_basis(&self) -> Vec<RealVector> {
        let js: Vec<_> = self.basis.iter().map(apply_j).collect();
        self.basis.iter().cloned().chain(js).collect()
    }

    /// Rebuilds `S = X D X^{-1}` where `X` is the adapted basis matrix and `D`
    /// the block form of the pairs. Since `X^T G X = diag(I, -I)`, the inverse
    /// is `diag(I, -I) X^T G`.
    pub fn reconstruct(&self) -> RealMatrix {
        let m = self.basis.len();
        let space = NordenSpace::new(m).expect("decomposition has at least one pair");
        let cols = self.adapted_basis();
        let x = RealMatrix::from_columns(&cols);
        let mut d = RealMatrix::zeros(2 * m, 2 * m);
        for (k, &(lambda, mu)) in self.pairs.iter().enumerate() {
            d[(k, k)] = lambda;
            d[(m + k, m + k)] = lambda;
            d[(m + k, k)] = mu;
            d[(k, m + k)] = -mu;
        }
        let gram = space.g_gram();
        let x_inv = &gram * x.transpose() * &gram;
        x * d * x_inv
    }
}

/// Orthonormalizes under the complex bilinear form `v^T w` (no conjugation).
///
/// Greedy pivoting: at each step the remaining candidate (after projecting out
/// the accepted vectors) with the largest `|v^T v| / |v|^2` is accepted. Sums of
/// candidate pairs are added to the pool, since a non-degenerate form always
/// has a non-isotropic vector among `{v_i} U {v_i + v_j}`. Returns `None` when
/// fewer than `count` non-isotropic directions could be found.
pub fn bilinear_orthonormalize(
    candidates: &[ComplexVector],
    against: &[ComplexVector],
    count: usize,
) -> Option<Vec<ComplexVector>> {
    let mut pool: Vec<ComplexVector> = candidates.to_vec();
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            pool.push(&candidates[i] + &candidates[j]);
        }
    }
    let mut reference: Vec<f64> = pool.iter().map(|v| v.norm()).collect();
    let mut accepted: Vec<ComplexVector> = Vec::with_capacity(count);

    let project = |v: &mut ComplexVector, basis: &[ComplexVector]| {
        for e in basis {
            let coef = e.transpose() * &*v;
            *v -= e * coef[(0, 0)];
        }
    };

    for v in pool.iter_mut() {
        project(v, against);
        project(v, against);
    }

    while accepted.len() < count {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in pool.iter().enumerate() {
            let norm = v.norm();
            if norm <= 1e-8 * reference[i].max(f64::MIN_POSITIVE) {
                continue;
            }
            let ratio = bilinear_sq(v).norm() / (norm * norm);
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some((i, ratio));
            }
        }
        let (idx, ratio) = best?;
        if ratio < ISOTROPY_TOL {
            return None;
        }
        let v = pool.swap_remove(idx);
        reference.swap_remove(idx);
        let q = bilinear_sq(&v);
        let e = v / q.sqrt();
        for w in pool.iter_mut() {
            // twice is enough
            let c = (e.transpose() * &*w)[(0, 0)];
            *w -= &e * c;
            let c = (e.transpose() * &*w)[(0, 0)];
            *w -= &e * c;
        }
        accepted.push(e);
    }
    Some(accepted)
}

fn bilinear_sq(v: &ComplexVector) -> ComplexScalar {
    v.iter().map(|z| z * z).sum()
}

/// Computes an adapted basis of h-proper vectors of `op`.
///
/// Eigenvalues of `r^{-1}(S)` come from a complex Schur form; numerically
/// coincident eigenvalues are grouped, each group's eigenspace is taken from
/// the SVD of `C - zeta I`, and the eigenspace is orthonormalized under the
/// complex bilinear form. Defective groups and eigenspaces without
/// non-isotropic directions report [`Error::NotHDiagonalizable`].
pub fn h_proper_decomposition(op: &HSymmetricOp, tol: f64) -> Result<HProperDecomposition> {
    let c = op.to_complex();
    let m = c.nrows();
    let scale = c.iter().fold(0.0_f64, |acc, z| acc.max(z.norm())).max(f64::MIN_POSITIVE);

    let schur = Schur::try_new(c.clone(), 1e-15, 100_000).ok_or(Error::EigenFailure)?;
    let (_, t) = schur.unpack();
    let eigenvalues: Vec<ComplexScalar> = (0..m).map(|k| t[(k, k)]).collect();

    // group eigenvalues closer than CLUSTER_TOL * scale (single linkage)
    let mut cluster_of: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in 0..i {
            if (eigenvalues[i] - eigenvalues[j]).norm() <= CLUSTER_TOL * scale {
                let (a, b) = (cluster_of[i], cluster_of[j]);
                let (keep, drop) = (a.min(b), a.max(b));
                for c in cluster_of.iter_mut() {
                    if *c == drop {
                        *c = keep;
                    }
                }
            }
        }
    }
    let mut labels: Vec<usize> = cluster_of.clone();
    labels.sort_unstable();
    labels.dedup();

    let mut vectors: Vec<ComplexVector> = Vec::with_capacity(m);
    for label in labels {
        let members: Vec<usize> = (0..m).filter(|&k| cluster_of[k] == label).collect();
        let k = members.len();
        let center = members.iter().map(|&i| eigenvalues[i]).sum::<ComplexScalar>()
            / Complex::new(k as f64, 0.0);
        let shifted = &c - ComplexMatrix::identity(m, m) * center;
        let svd = SVD::new(shifted, false, true);
        let v_t = svd.v_t.as_ref().ok_or(Error::EigenFailure)?;
        let sv = &svd.singular_values;
        // sorted descending: the eigenspace is the trailing k right singular vectors
        let null_start = m - k;
        if sv[null_start] > NULL_TOL * scale {
            return Err(Error::NotHDiagonalizable(format!(
                "eigenvalue {:.6}{:+.6}i has algebraic multiplicity {k} but a smaller eigenspace",
                center.re, center.im
            )));
        }
        let space_basis: Vec<ComplexVector> = (null_start..m)
            .map(|r| v_t.row(r).transpose().map(|z| z.conj()))
            .collect();
        let ortho = bilinear_orthonormalize(&space_basis, &vectors, k).ok_or_else(|| {
            Error::NotHDiagonalizable(format!(
                "eigenspace of {:.6}{:+.6}i contains only isotropic vectors",
                center.re, center.im
            ))
        })?;
        vectors.extend(ortho);
    }

    let mut basis = Vec::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    for v in &vectors {
        // Rayleigh quotient under v^T v = 1
        let zeta = (v.transpose() * &c * v)[(0, 0)];
        basis.push(from_complex(v));
        pairs.push((zeta.re, -zeta.im));
    }
    let decomposition = HProperDecomposition { basis, pairs };
    verify_decomposition(op, &decomposition, tol)?;
    Ok(decomposition)
}

fn verify_decomposition(op: &HSymmetricOp, d: &HProperDecomposition, tol: f64) -> Result<()> {
    let s = op.matrix();
    let scale = max_abs(s).max(1.0);
    let check_tol = tol.max(1e-9) * scale;
    for (x, &(lambda, mu)) in d.basis.iter().zip(&d.pairs) {
        let residual = (s * x - x * lambda - apply_j(x) * mu).amax();
        let size = x.amax().max(1.0);
        if residual > check_tol * size {
            return Err(Error::NotHDiagonalizable(format!(
                "h-proper residual {residual:.3e} exceeds tolerance"
            )));
        }
    }
    for (i, xi) in d.basis.iter().enumerate() {
        for (j, xj) in d.basis.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            let size = xi.amax().max(1.0) * xj.amax().max(1.0);
            if (g(xi, xj) - delta).abs() > 1e-7 * size || g(xi, &apply_j(xj)).abs() > 1e-7 * size {
                return Err(Error::NotHDiagonalizable(
                    "eigenvectors failed to form an adapted basis".into(),
                ));
            }
        }
    }
    Ok(())
}
