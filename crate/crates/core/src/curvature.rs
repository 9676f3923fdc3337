//! The pi-tensors, curvature tensors of Kähler-Norden type, totally real
//! sectional curvatures and Ricci contraction.
//!
//! Curvature tensors are evaluators: `R(x, y, z, u)` is computed on demand and
//! never stored as a 4-index array.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{
    apply_j, g, gt, is_adapted_basis, random_complex_orthogonal, NordenSpace, RealMatrix,
    RealVector,
};
use crate::tangent::TangentFrame;

/// `|pi1(x,y,y,x)|` must exceed this times `|x|^2 |y|^2`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Constant totally real sectional curvatures `(nu, nu~)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpaceFormParams {
    pub nu: f64,
    pub nu_t: f64,
}

impl SpaceFormParams {
    pub const FLAT: SpaceFormParams = SpaceFormParams { nu: 0.0, nu_t: 0.0 };

    pub fn new(nu: f64, nu_t: f64) -> Self {
        Self { nu, nu_t }
    }
}

/// Values of the three pi-tensors on one quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiValues {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: f64,
}

fn pi_unchecked(x: &RealVector, y: &RealVector, z: &RealVector, u: &RealVector) -> PiValues {
    let (gyz, gxu, gxz, gyu) = (g(y, z), g(x, u), g(x, z), g(y, u));
    let (tyz, txu, txz, tyu) = (gt(y, z), gt(x, u), gt(x, z), gt(y, u));
    PiValues {
        pi1: gyz * gxu - gxz * gyu,
        pi2: tyz * txu - txz * tyu,
        pi3: -gyz * txu + gxz * tyu - tyz * gxu + txz * gyu,
    }
}

/// `pi1 = g(y,z) g(x,u) - g(x,z) g(y,u)`, `pi2` the same with `g~`, and the
/// mixed `pi3`.
pub fn pi_tensors(x: &RealVector, y: &RealVector, z: &RealVector, u: &RealVector) -> Result<PiValues> {
    let space = NordenSpace::of_vector(x)?;
    for v in [y, z, u] {
        space.check(v)?;
    }
    Ok(pi_unchecked(x, y, z, u))
}

/// A curvature tensor of type (0, 4).
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureTensor {
    /// `R = nu (pi1 - pi2) + nu~ pi3`.
    SpaceForm(SpaceFormParams),
    /// Gauss equation of a holomorphic hypersurface:
    /// `R(x,y,z,u) = R'(x,y,z,u) + pi1(Ax,Ay,z,u) - pi2(Ax,Ay,z,u)`, with `R'`
    /// the ambient space form and `A` extended by zero off the tangent space.
    GaussFromShape {
        shape: RealMatrix,
        ambient: SpaceFormParams,
    },
}

impl CurvatureTensor {
    /// Evaluates `R(x, y, z, u)`. Vectors must share one even dimension.
    pub fn eval(&self, x: &RealVector, y: &RealVector, z: &RealVector, u: &RealVector) -> f64 {
        match self {
            CurvatureTensor::SpaceForm(p) => space_form_value(p, x, y, z, u),
            CurvatureTensor::GaussFromShape { shape, ambient } => {
                let ax = shape * x;
                let ay = shape * y;
                let pa = pi_unchecked(&ax, &ay, z, u);
                space_form_value(ambient, x, y, z, u) + pa.pi1 - pa.pi2
            }
        }
    }

    /// `R~(x, y, z, u) = R(x, y, z, J u)`.
    pub fn eval_tilde(&self, x: &RealVector, y: &RealVector, z: &RealVector, u: &RealVector) -> f64 {
        self.eval(x, y, z, &apply_j(u))
    }
}

fn space_form_value(p: &SpaceFormParams, x: &RealVector, y: &RealVector, z: &RealVector, u: &RealVector) -> f64 {
    if p.nu == 0.0 && p.nu_t == 0.0 {
        return 0.0;
    }
    let pi = pi_unchecked(x, y, z, u);
    p.nu * (pi.pi1 - pi.pi2) + p.nu_t * pi.pi3
}

pub fn space_form_curvature(params: SpaceFormParams) -> CurvatureTensor {
    CurvatureTensor::SpaceForm(params)
}

/// Intrinsic curvature of a holomorphic hypersurface from its shape operator
/// `a` (in `frame` coordinates) via the Gauss equation.
pub fn gauss_curvature_from_shape(
    a: &RealMatrix,
    frame: &TangentFrame,
    ambient: SpaceFormParams,
    tol: f64,
) -> Result<CurvatureTensor> {
    frame.check_h_symmetric(a, tol)?;
    Ok(CurvatureTensor::GaussFromShape {
        shape: frame.extend(a),
        ambient,
    })
}

/// A 2-plane spanned by `x` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPlane {
    pub x: RealVector,
    pub y: RealVector,
}

impl TangentPlane {
    pub fn new(x: RealVector, y: RealVector) -> Result<Self> {
        let space = NordenSpace::of_vector(&x)?;
        space.check(&y)?;
        let (nx, ny) = (x.norm(), y.norm());
        let cos = if nx > 0.0 && ny > 0.0 { x.dot(&y) / (nx * ny) } else { 1.0 };
        if 1.0 - cos.abs() < 1e-14 {
            return Err(Error::InvalidBasis("plane vectors are linearly dependent".into()));
        }
        Ok(Self { x, y })
    }

    /// `pi1(x, y, y, x)`, the g-Gram determinant of the plane.
    pub fn pi1(&self) -> f64 {
        pi_unchecked(&self.x, &self.y, &self.y, &self.x).pi1
    }

    fn threshold(&self) -> f64 {
        DEGENERACY_THRESHOLD * self.x.norm_squared() * self.y.norm_squared()
    }

    pub fn is_degenerate(&self) -> bool {
        self.pi1().abs() <= self.threshold()
    }
}

/// Sectional curvatures `(K, K~)` of a non-degenerate plane.
pub fn sectional_curvatures(r: &CurvatureTensor, plane: &TangentPlane) -> Result<(f64, f64)> {
    let denom = plane.pi1();
    let threshold = plane.threshold();
    if denom.abs() <= threshold {
        return Err(Error::DegeneratePlane {
            value: denom,
            threshold,
        });
    }
    let (x, y) = (&plane.x, &plane.y);
    Ok((r.eval(x, y, y, x) / denom, r.eval_tilde(x, y, y, x) / denom))
}

/// A plane is totally real when `g~` vanishes on it and it is g-non-degenerate
/// and transversal to its image under `J`.
pub fn is_totally_real(plane: &TangentPlane, tol: f64) -> bool {
    let (x, y) = (&plane.x, &plane.y);
    let scale = x.norm_squared().max(y.norm_squared());
    if gt(x, x).abs() > tol * scale || gt(x, y).abs() > tol * scale || gt(y, y).abs() > tol * scale {
        return false;
    }
    if plane.is_degenerate() {
        return false;
    }
    let vs = [x.clone(), y.clone(), apply_j(x), apply_j(y)];
    let gram = RealMatrix::from_fn(4, 4, |i, j| g(&vs[i], &vs[j]));
    gram.determinant().abs() > DEGENERACY_THRESHOLD * scale.powi(4)
}

/// Draws `count` totally real planes from the real span of randomly rotated
/// copies of an adapted basis `(x_1..x_n, Jx_1..Jx_n)`. Deterministic per seed.
pub fn sample_totally_real_planes(adapted_basis: &[RealVector], count: usize, seed: u64) -> Result<Vec<TangentPlane>> {
    let scale = adapted_basis.iter().map(|v| v.amax()).fold(1.0_f64, f64::max);
    if !is_adapted_basis(adapted_basis, 1e-9 * scale * scale)? {
        return Err(Error::InvalidBasis("not an adapted basis".into()));
    }
    let n = adapted_basis.len() / 2;
    if n < 2 {
        return Err(Error::InvalidBasis(
            "totally real planes need at least two complex dimensions".into(),
        ));
    }
    let xs = &adapted_basis[..n];
    let js = &adapted_basis[n..];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut planes = Vec::with_capacity(count);
    while planes.len() < count {
        let alpha = random_complex_orthogonal(n, &mut rng, 0.5);
        // column k of alpha, realized in the adapted basis: i acts as -J
        let rotated: Vec<RealVector> = (0..n)
            .map(|k| {
                (0..n).fold(RealVector::zeros(xs[0].len()), |acc, j| {
                    let z = alpha[(j, k)];
                    acc + &xs[j] * z.re - &js[j] * z.im
                })
            })
            .collect();
        let mut accepted = None;
        for _ in 0..1000 {
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let s: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let rr: f64 = r.iter().map(|v| v * v).sum();
            let ss: f64 = s.iter().map(|v| v * v).sum();
            let rs: f64 = r.iter().zip(&s).map(|(a, b)| a * b).sum();
            if rr == 0.0 || ss == 0.0 || (rr * ss - rs * rs) / (rr * ss) < 1e-6 {
                continue;
            }
            let combine = |c: &[f64]| {
                c.iter()
                    .zip(&rotated)
                    .fold(RealVector::zeros(xs[0].len()), |acc, (w, v)| acc + v * *w)
            };
            let plane = TangentPlane {
                x: combine(&r),
                y: combine(&s),
            };
            // nearly null planes make K = R / pi1 ill-conditioned
            if is_totally_real(&plane, 1e-9) {
                accepted = Some(plane);
                break;
            }
        }
        planes.push(accepted.ok_or(Error::SamplingExhausted(1000))?);
    }
    Ok(planes)
}

/// Spread of sampled sectional curvatures around their means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureStats {
    pub nu: f64,
    pub nu_t: f64,
    pub max_deviation_k: f64,
    pub max_deviation_kt: f64,
    pub sample_count: usize,
}

/// Means and max absolute deviations of `(K, K~)` over the non-degenerate
/// planes in `planes`.
pub fn curvature_constancy_report(r: &CurvatureTensor, planes: &[TangentPlane]) -> Result<CurvatureStats> {
    if planes.len() < 2 {
        return Err(Error::TooFewPlanes {
            needed: 2,
            found: planes.len(),
        });
    }
    let values: Vec<(f64, f64)> = planes
        .iter()
        .filter_map(|p| sectional_curvatures(r, p).ok())
        .collect();
    if values.is_empty() {
        return Err(Error::AllPlanesDegenerate);
    }
    let count = values.len() as f64;
    let nu = values.iter().map(|v| v.0).sum::<f64>() / count;
    let nu_t = values.iter().map(|v| v.1).sum::<f64>() / count;
    let max_deviation_k = values.iter().map(|v| (v.0 - nu).abs()).fold(0.0, f64::max);
    let max_deviation_kt = values.iter().map(|v| (v.1 - nu_t).abs()).fold(0.0, f64::max);
    Ok(CurvatureStats {
        nu,
        nu_t,
        max_deviation_k,
        max_deviation_kt,
        sample_count: values.len(),
    })
}

/// Ricci table `rho(b_i, b_j)` over `basis`, contracting the first and last
/// slots with the inverse g-Gram matrix of the basis:
/// `rho(x, y) = sum_{a,b} G^{ab} R(b_a, x, y, b_b)`. On a pseudo-orthonormal
/// frame this is `sum_i eps_i R(E_i, x, y, E_i)`.
pub fn ricci(r: &CurvatureTensor, basis: &[RealVector]) -> Result<RealMatrix> {
    if basis.is_empty() {
        return Err(Error::InvalidBasis("empty basis".into()));
    }
    let space = NordenSpace::of_vector(&basis[0])?;
    for v in basis {
        space.check(v)?;
    }
    let k = basis.len();
    let gram = RealMatrix::from_fn(k, k, |i, j| g(&basis[i], &basis[j]));
    let scale = gram.amax().max(f64::MIN_POSITIVE);
    if gram.determinant().abs() < 1e-12 * scale.powi(k as i32) {
        return Err(Error::InvalidBasis("basis is g-degenerate".into()));
    }
    let inv = gram.try_inverse().ok_or_else(|| Error::InvalidBasis("basis is g-degenerate".into()))?;
    let mut rho = RealMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut s = 0.0;
            for a in 0..k {
                for b in 0..k {
                    let w = inv[(a, b)];
                    if w != 0.0 {
                        s += w * r.eval(&basis[a], &basis[i], &basis[j], &basis[b]);
                    }
                }
            }
            rho[(i, j)] = s;
        }
    }
    Ok(rho)
}
