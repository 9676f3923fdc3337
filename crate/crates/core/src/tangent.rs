//! Coordinates on a J-invariant, g-non-degenerate subspace of `R^{2m}`.

use crate::error::{Error, Result};
use crate::space::{apply_j, max_abs, NordenSpace, RealMatrix, RealVector};

/// A basis of a J-invariant subspace together with the data needed to move
/// between ambient vectors and subspace coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    basis: Vec<RealVector>,
    /// columns are the basis vectors (2m x k)
    tmat: RealMatrix,
    /// g-Gram matrix of the basis
    gram: RealMatrix,
    gram_inv: RealMatrix,
    /// J in basis coordinates
    j_coords: RealMatrix,
    ambient_gram: RealMatrix,
}

impl TangentFrame {
    /// Builds the frame; fails when the span is g-degenerate or not
    /// J-invariant (relative residual above `tol`).
    pub fn new(basis: Vec<RealVector>, tol: f64) -> Result<Self> {
        if basis.is_empty() || !basis.len().is_multiple_of(2) {
            return Err(Error::InvalidBasis(format!(
                "expected an even, non-zero number of vectors, got {}",
                basis.len()
            )));
        }
        let space = NordenSpace::of_vector(&basis[0])?;
        for v in &basis {
            space.check(v)?;
        }
        if basis.len() > space.dim() {
            return Err(Error::InvalidBasis("more vectors than the ambient dimension".into()));
        }
        let tmat = RealMatrix::from_columns(&basis);
        let ambient_gram = space.g_gram();
        let gram = tmat.transpose() * &ambient_gram * &tmat;
        let scale = max_abs(&gram).max(f64::MIN_POSITIVE);
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBasis("degenerate g-Gram matrix".into()))?;
        let det_ratio = gram.determinant().abs() / scale.powi(gram.nrows() as i32);
        if det_ratio < 1e-12 {
            return Err(Error::InvalidBasis(format!(
                "nearly degenerate g-Gram matrix (relative determinant {det_ratio:.3e})"
            )));
        }
        let jt = RealMatrix::from_columns(&basis.iter().map(apply_j).collect::<Vec<_>>());
        let j_coords = &gram_inv * tmat.transpose() * &ambient_gram * &jt;
        let invariance = max_abs(&(&tmat * &j_coords - &jt)) / max_abs(&tmat).max(f64::MIN_POSITIVE);
        if invariance > tol {
            return Err(Error::InvalidBasis(format!(
                "span is not J-invariant (residual {invariance:.3e})"
            )));
        }
        Ok(Self {
            basis,
            tmat,
            gram,
            gram_inv,
            j_coords,
            ambient_gram,
        })
    }

    pub fn basis(&self) -> &[RealVector] {
        &self.basis
    }

    /// Number of basis vectors (the real dimension `2n` of the subspace).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.tmat.nrows()
    }

    pub fn gram(&self) -> &RealMatrix {
        &self.gram
    }

    /// `J` in basis coordinates.
    pub fn j_coords(&self) -> &RealMatrix {
        &self.j_coords
    }

    /// Coordinates of the g-orthogonal projection of `x` onto the span.
    pub fn coords(&self, x: &RealVector) -> RealVector {
        &self.gram_inv * (self.tmat.transpose() * (&self.ambient_gram * x))
    }

    pub fn to_ambient(&self, c: &RealVector) -> RealVector {
        &self.tmat * c
    }

    /// g-orthogonal projection onto the span.
    pub fn project(&self, x: &RealVector) -> RealVector {
        self.to_ambient(&self.coords(x))
    }

    /// Largest `|g(t_i, v)|` over the basis, relative to `|v|`.
    pub fn normal_residual(&self, v: &RealVector) -> f64 {
        let p = self.tmat.transpose() * (&self.ambient_gram * v);
        p.amax() / v.amax().max(f64::MIN_POSITIVE)
    }

    /// Extends an operator given in basis coordinates to the ambient space:
    /// it acts as `a` on the span and vanishes on the g-orthogonal complement.
    pub fn extend(&self, a: &RealMatrix) -> RealMatrix {
        &self.tmat * a * &self.gram_inv * self.tmat.transpose() * &self.ambient_gram
    }

    /// Relative J-commutator and g-asymmetry of an operator in basis coordinates.
    pub fn h_symmetry_defect(&self, a: &RealMatrix) -> (f64, f64) {
        let scale = match max_abs(a) {
            s if s > 0.0 => s,
            _ => 1.0,
        };
        let commutator = max_abs(&(a * &self.j_coords - &self.j_coords * a)) / scale;
        let ga = &self.gram * a;
        let asymmetry = max_abs(&(&ga - ga.transpose())) / (scale * max_abs(&self.gram));
        (commutator, asymmetry)
    }

    pub fn check_h_symmetric(&self, a: &RealMatrix, tol: f64) -> Result<()> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.nrows(),
            });
        }
        let (commutator, asymmetry) = self.h_symmetry_defect(a);
        if commutator > tol || asymmetry > tol {
            return Err(Error::NotHSymmetric {
                commutator,
                asymmetry,
            });
        }
        Ok(())
    }
}
