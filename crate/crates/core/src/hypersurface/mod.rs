//! Holomorphic hypersurfaces of the flat space `R^{2m}`: h-spheres and
//! holomorphic hyperplanes, their normal frames, shape operators and mean
//! curvature.

mod fd;
mod hyperplane;
mod sample;
mod sphere;

pub use fd::{codazzi_residual, default_step, shape_operator_fd};
pub use hyperplane::HolomorphicHyperplane;
pub use sample::{normalize_normal_frame, MeanCurvatureData, NormalFrame, SurfaceSample};
pub use sphere::HSphere;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decompose::bilinear_orthonormalize;
use crate::error::{Error, Result};
use crate::space::{
    apply_j, from_complex, quadratic, to_complex, ComplexScalar, ComplexVector, NordenSpace,
    RealMatrix, RealVector,
};
use crate::tangent::TangentFrame;

/// Common interface of the model hypersurfaces. Both carry a shape operator
/// of the form `lambda I + mu J` with constant `(lambda, mu)`.
pub trait Hypersurface {
    fn space(&self) -> NordenSpace;

    /// Largest absolute defect of the defining equations at `p`.
    fn containment_residual(&self, p: &RealVector) -> f64;

    /// Magnitude against which [`Hypersurface::containment_residual`] is judged.
    fn containment_scale(&self, p: &RealVector) -> f64;

    fn contains(&self, p: &RealVector, tol: f64) -> bool {
        p.len() == self.space().dim() && self.containment_residual(p) <= tol * self.containment_scale(p)
    }

    /// Maps a nearby point onto the surface.
    fn project(&self, p: &RealVector) -> Result<RealVector>;

    /// The canonical unit normal `xi` at a point of the surface (unchecked).
    fn unit_normal(&self, p: &RealVector) -> RealVector;

    /// Adapted basis `(x_1..x_n, Jx_1..Jx_n)` of the tangent space at `p`.
    fn tangent_adapted_basis(&self, p: &RealVector) -> Result<Vec<RealVector>>;

    /// `(lambda, mu)` with `A = lambda I + mu J` for the canonical normal.
    fn lambda_mu(&self) -> (f64, f64);

    /// Length scale used by finite differences at `p`.
    fn fd_scale(&self, p: &RealVector) -> f64;

    fn sample(&self, count: usize, seed: u64) -> Result<Vec<RealVector>>;

    fn normal_frame(&self, p: &RealVector, tol: f64) -> Result<NormalFrame> {
        self.space().check(p)?;
        if !self.contains(p, tol) {
            return Err(Error::PointNotOnSurface(self.containment_residual(p)));
        }
        NormalFrame::new(p.clone(), self.unit_normal(p), tol)
    }

    /// The closed-form shape operator in the coordinates of `frame`.
    fn closed_shape_operator(&self, frame: &TangentFrame) -> RealMatrix {
        let (lambda, mu) = self.lambda_mu();
        RealMatrix::identity(frame.dim(), frame.dim()) * lambda + frame.j_coords() * mu
    }

    /// Point, canonical frame, adapted tangent basis and closed-form `A`.
    fn surface_sample(&self, p: &RealVector, tol: f64) -> Result<SurfaceSample> {
        let frame = self.normal_frame(p, tol)?;
        let basis = self.tangent_adapted_basis(p)?;
        let tangent = TangentFrame::new(basis.clone(), tol)?;
        let a = self.closed_shape_operator(&tangent);
        SurfaceSample::new(p.clone(), frame, basis, a, tol)
    }

    fn sample_surfaces(&self, count: usize, seed: u64, tol: f64) -> Result<Vec<SurfaceSample>> {
        self.sample(count, seed)?
            .iter()
            .map(|p| self.surface_sample(p, tol))
            .collect()
    }
}

const GRAM_SCHMIDT_ATTEMPTS: usize = 8;

/// Adapted basis of the complex-bilinear complement of `normal`, i.e. of the
/// real vectors `v` with `g(v, normal) = g(v, J normal) = 0`.
pub(crate) fn complement_adapted_basis(normal: &RealVector) -> Result<Vec<RealVector>> {
    let space = NordenSpace::of_vector(normal)?;
    let m = space.m();
    let q = quadratic(normal);
    if q.norm() <= 1e-14 * normal.norm_squared() || m < 2 {
        return Err(Error::GramSchmidtFailure(0));
    }
    let unit = to_complex(normal) / q.sqrt();
    let standard: Vec<ComplexVector> = (0..m)
        .map(|k| ComplexVector::from_fn(m, |r, _| ComplexScalar::new(if r == k { 1.0 } else { 0.0 }, 0.0)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut candidates = standard;
    for _ in 0..GRAM_SCHMIDT_ATTEMPTS {
        if let Some(ws) = bilinear_orthonormalize(&candidates, std::slice::from_ref(&unit), m - 1) {
            let xs: Vec<RealVector> = ws.iter().map(from_complex).collect();
            let js: Vec<RealVector> = xs.iter().map(apply_j).collect();
            return Ok(xs.into_iter().chain(js).collect());
        }
        // isotropic trouble: resample candidates
        candidates = (0..m)
            .map(|_| {
                ComplexVector::from_fn(m, |_, _| {
                    ComplexScalar::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
                })
            })
            .collect();
    }
    Err(Error::GramSchmidtFailure(GRAM_SCHMIDT_ATTEMPTS))
}
