use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{complement_adapted_basis, Hypersurface};
use crate::error::{Error, Result};
use crate::space::{bilinear, complex_scale, g, gt, quadratic, ComplexScalar, NordenSpace, RealVector};

/// The holomorphic hyperplane `{Z : g(xi, Z) = d, g~(xi, Z) = d~}` with
/// `g(xi, xi) = 1`, `g~(xi, xi) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicHyperplane {
    xi: RealVector,
    d: f64,
    d_t: f64,
}

impl HolomorphicHyperplane {
    pub fn new(xi: RealVector, d: f64, d_t: f64, tol: f64) -> Result<Self> {
        let space = NordenSpace::of_vector(&xi)?;
        if space.dim() < 4 {
            return Err(Error::AmbientTooSmall(space.dim()));
        }
        let q = quadratic(&xi);
        if (q.re - 1.0).abs() > tol || q.im.abs() > tol {
            return Err(Error::BadInputNormalization(format!(
                "g(xi, xi) = {:.6e}, g~(xi, xi) = {:.6e}",
                q.re, q.im
            )));
        }
        Ok(Self { xi, d, d_t })
    }

    /// The hyperplane through `point` with normal `xi`.
    pub fn through(xi: RealVector, point: &RealVector, tol: f64) -> Result<Self> {
        NordenSpace::of_vector(&xi)?.check(point)?;
        let (d, d_t) = (g(&xi, point), gt(&xi, point));
        Self::new(xi, d, d_t, tol)
    }

    pub fn xi(&self) -> &RealVector {
        &self.xi
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn d_t(&self) -> f64 {
        self.d_t
    }

    /// The point `(d + i d~) xi` of the hyperplane.
    pub fn base_point(&self) -> RealVector {
        complex_scale(ComplexScalar::new(self.d, self.d_t), &self.xi)
    }
}

impl Hypersurface for HolomorphicHyperplane {
    fn space(&self) -> NordenSpace {
        NordenSpace::of_vector(&self.xi).expect("normal has even length")
    }

    fn containment_residual(&self, p: &RealVector) -> f64 {
        (g(&self.xi, p) - self.d).abs().max((gt(&self.xi, p) - self.d_t).abs())
    }

    fn containment_scale(&self, p: &RealVector) -> f64 {
        1.0 + self.d.abs() + self.d_t.abs() + self.xi.norm() * p.norm()
    }

    fn project(&self, p: &RealVector) -> Result<RealVector> {
        self.space().check(p)?;
        let defect = bilinear(&self.xi, p) - ComplexScalar::new(self.d, self.d_t);
        Ok(p - complex_scale(defect, &self.xi))
    }

    fn unit_normal(&self, _p: &RealVector) -> RealVector {
        self.xi.clone()
    }

    fn tangent_adapted_basis(&self, p: &RealVector) -> Result<Vec<RealVector>> {
        self.space().check(p)?;
        complement_adapted_basis(&self.xi)
    }

    fn lambda_mu(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    fn fd_scale(&self, p: &RealVector) -> f64 {
        (p - self.base_point()).norm()
    }

    /// Base point plus Gaussian combinations of a tangent adapted basis.
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<RealVector>> {
        let base = self.base_point();
        let basis = complement_adapted_basis(&self.xi)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count)
            .map(|_| {
                basis.iter().fold(base.clone(), |acc, v| {
                    let c: f64 = StandardNormal.sample(&mut rng);
                    acc + v * c
                })
            })
            .collect())
    }
}
