use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{complement_adapted_basis, Hypersurface};
use crate::curvature::SpaceFormParams;
use crate::error::{Error, Result};
use crate::space::{complex_scale, gt, g, quadratic, ComplexScalar, NordenSpace, RealVector};

/// Consecutive rejections tolerated by [`HSphere::sample`].
const MAX_REJECTIONS: usize = 1000;

/// The h-sphere `{Z : g(Z - z0, Z - z0) = a, g~(Z - z0, Z - z0) = b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HSphere {
    center: RealVector,
    a: f64,
    b: f64,
}

impl HSphere {
    pub fn new(center: RealVector, a: f64, b: f64) -> Result<Self> {
        let space = NordenSpace::of_vector(&center)?;
        if space.dim() < 4 {
            return Err(Error::AmbientTooSmall(space.dim()));
        }
        if !(a.is_finite() && b.is_finite()) || a * a + b * b <= 1e-24 {
            return Err(Error::IsotropicParameters);
        }
        Ok(Self { center, a, b })
    }

    /// The h-sphere with constant totally real sectional curvatures
    /// `(nu, nu~)`: `a = nu / (nu^2 + nu~^2)`, `b = -nu~ / (nu^2 + nu~^2)`.
    pub fn from_curvatures(center: RealVector, curvatures: SpaceFormParams) -> Result<Self> {
        let SpaceFormParams { nu, nu_t } = curvatures;
        let r2 = nu * nu + nu_t * nu_t;
        if r2 == 0.0 {
            return Err(Error::ZeroCurvatures);
        }
        Self::new(center, nu / r2, -nu_t / r2)
    }

    pub fn center(&self) -> &RealVector {
        &self.center
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The conjugate h-sphere with parameters `(a, -b)`.
    pub fn conjugate(&self) -> Self {
        Self {
            center: self.center.clone(),
            a: self.a,
            b: -self.b,
        }
    }

    /// `nu = a / (a^2 + b^2)`, `nu~ = -b / (a^2 + b^2)`.
    pub fn theoretical_curvatures(&self) -> SpaceFormParams {
        let r2 = self.a * self.a + self.b * self.b;
        SpaceFormParams::new(self.a / r2, -self.b / r2)
    }

    /// Complex radius squared `a + i b`.
    fn target(&self) -> ComplexScalar {
        ComplexScalar::new(self.a, self.b)
    }

    /// Rescales a direction `w` onto the sphere: `z0 + c w` with
    /// `c = sqrt((a + i b) / q(w))` on the principal branch.
    pub fn point_from_direction(&self, w: &RealVector) -> Result<RealVector> {
        self.space().check(w)?;
        let q = quadratic(w);
        if q.norm() <= 1e-14 * w.norm_squared() || w.norm_squared() == 0.0 {
            return Err(Error::ProjectionFailure(format!(
                "direction is isotropic (|q| = {:.3e})",
                q.norm()
            )));
        }
        let c = (self.target() / q).sqrt();
        Ok(&self.center + complex_scale(c, w))
    }
}

impl Hypersurface for HSphere {
    fn space(&self) -> NordenSpace {
        NordenSpace::of_vector(&self.center).expect("center has even length")
    }

    fn containment_residual(&self, p: &RealVector) -> f64 {
        let z = p - &self.center;
        (g(&z, &z) - self.a).abs().max((gt(&z, &z) - self.b).abs())
    }

    /// `|a| + |b| + |z0|^2 + |p - z0|^2`.
    fn containment_scale(&self, p: &RealVector) -> f64 {
        self.a.abs() + self.b.abs() + self.center.norm_squared() + (p - &self.center).norm_squared()
    }

    fn project(&self, p: &RealVector) -> Result<RealVector> {
        self.space().check(p)?;
        self.point_from_direction(&(p - &self.center))
    }

    /// `xi = -lambda Z - mu J Z` with `Z = p - z0`.
    fn unit_normal(&self, p: &RealVector) -> RealVector {
        let (lambda, mu) = self.lambda_mu();
        complex_scale(ComplexScalar::new(-lambda, mu), &(p - &self.center))
    }

    fn tangent_adapted_basis(&self, p: &RealVector) -> Result<Vec<RealVector>> {
        self.space().check(p)?;
        complement_adapted_basis(&(p - &self.center))
    }

    /// The solution of `lambda^2 - mu^2 = a / (a^2 + b^2)`,
    /// `2 lambda mu = b / (a^2 + b^2)` with `lambda >= 0`, `mu` carrying the
    /// sign of `b`, and `mu >= 0` when `lambda = 0`.
    fn lambda_mu(&self) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let r = a.hypot(b);
        let r2 = r * r;
        if a >= 0.0 {
            let lambda = ((r + a) / (2.0 * r2)).sqrt();
            (lambda, b / (2.0 * r2 * lambda))
        } else {
            let mu = ((r - a) / (2.0 * r2)).sqrt();
            let mu = if b < 0.0 { -mu } else { mu };
            (b / (2.0 * r2 * mu), mu)
        }
    }

    fn fd_scale(&self, p: &RealVector) -> f64 {
        (p - &self.center).norm()
    }

    /// Gaussian directions rescaled onto the sphere; deterministic per seed.
    fn sample(&self, count: usize, seed: u64) -> Result<Vec<RealVector>> {
        let dim = self.space().dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        let mut rejections = 0;
        while points.len() < count {
            let w = RealVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
            if quadratic(&w).norm() < 1e-10 {
                rejections += 1;
                if rejections >= MAX_REJECTIONS {
                    return Err(Error::SamplingExhausted(rejections));
                }
                continue;
            }
            rejections = 0;
            points.push(self.point_from_direction(&w)?);
        }
        Ok(points)
    }
}
