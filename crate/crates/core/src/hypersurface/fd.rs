//! Finite-difference shape operators from the Weingarten formula
//! `D_X xi = -A X`.

use super::{Hypersurface, SurfaceSample};
use crate::error::{Error, Result};
use crate::space::{apply_j, bilinear, complex_scale, g, quadratic, to_complex, RealMatrix, RealVector};
use crate::tangent::TangentFrame;

/// `1e-5 (1 + |p - c|)`, where `c` is the surface's reference point.
pub fn default_step<S: Hypersurface + ?Sized>(surface: &S, p: &RealVector) -> f64 {
    1e-5 * (1.0 + surface.fd_scale(p))
}

fn check_step<S: Hypersurface + ?Sized>(surface: &S, p: &RealVector, step: f64) -> Result<()> {
    let scale = 1.0 + surface.fd_scale(p);
    let (low, high) = (1e-9 * scale, 1e-1 * scale);
    if step.is_nan() || step < low {
        return Err(Error::StepTooSmall { step, limit: low });
    }
    if step > high {
        return Err(Error::StepTooLarge { step, limit: high });
    }
    Ok(())
}

/// Shape operator of the canonical normal field in `frame` coordinates by
/// central differences along the frame vectors.
fn canonical_fd<S: Hypersurface + ?Sized>(surface: &S, p: &RealVector, frame: &TangentFrame, h: f64) -> Result<RealMatrix> {
    let k = frame.dim();
    let mut a = RealMatrix::zeros(k, k);
    for (col, t) in frame.basis().iter().enumerate() {
        let plus = surface.project(&(p + t * h))?;
        let minus = surface.project(&(p - t * h))?;
        let dxi = (surface.unit_normal(&plus) - surface.unit_normal(&minus)) / (2.0 * h);
        a.set_column(col, &(-frame.coords(&dxi)));
    }
    Ok(a)
}

/// Finite-difference shape operator at `sample`, in its tangent basis and with
/// respect to its normal `xi`. Neighbours `p +- h X` are re-projected onto the
/// surface; `step` defaults to [`default_step`].
pub fn shape_operator_fd<S: Hypersurface + ?Sized>(surface: &S, sample: &SurfaceSample, step: Option<f64>) -> Result<RealMatrix> {
    let p = sample.point();
    let h = step.unwrap_or_else(|| default_step(surface, p));
    check_step(surface, p, h)?;
    let frame = sample.tangent_frame();
    let a_canonical = canonical_fd(surface, p, frame, h)?;
    // re-express for the sample's normal: A_xi = g(xi_c, xi) A_c - g(J xi_c, xi) J A_c
    let xi_c = surface.unit_normal(p);
    let jxi_c = crate::space::apply_j(&xi_c);
    let xi = sample.frame().xi();
    Ok(&a_canonical * g(&xi_c, xi) - frame.j_coords() * &a_canonical * g(&jxi_c, xi))
}

/// Adapted basis of the complement of `xi`: the vectors `xs` are projected
/// off `xi` and orthonormalized in order under the complex bilinear form.
/// No pivoting takes place, so the result depends smoothly on `xi` as long as
/// no projected candidate becomes isotropic.
fn ordered_adapted_basis(xs: &[RealVector], xi: &RealVector) -> Result<Vec<RealVector>> {
    let q_xi = quadratic(xi);
    let mut out: Vec<RealVector> = Vec::with_capacity(2 * xs.len());
    for t in xs {
        let mut v = t - complex_scale(bilinear(t, xi) / q_xi, xi);
        for e in &out {
            v -= complex_scale(bilinear(&v, e), e);
        }
        let q = quadratic(&v);
        if q.norm() <= 1e-6 * v.norm_squared() {
            return Err(Error::GramSchmidtFailure(0));
        }
        out.push(complex_scale(q.sqrt().inv(), &v));
    }
    let js: Vec<RealVector> = out.iter().map(apply_j).collect();
    out.extend(js);
    Ok(out)
}

/// Standard vectors `e_k`, leaving out the one most aligned with `xi`.
fn gauge_candidates(xi: &RealVector) -> Vec<RealVector> {
    let m = xi.len() / 2;
    let z = to_complex(xi);
    let drop = (0..m)
        .max_by(|&i, &j| z[i].norm().total_cmp(&z[j].norm()))
        .unwrap_or(0);
    (0..m)
        .filter(|&k| k != drop)
        .map(|k| RealVector::from_fn(2 * m, |r, _| if r == k { 1.0 } else { 0.0 }))
        .collect()
}

/// Codazzi defect `max |(nabla_X A) Y - (nabla_Y A) X|` over pairs of tangent
/// basis vectors at `p`. `A` is extended to an ambient operator field (zero on
/// normals), differentiated by central differences of finite-difference
/// shape operators at `p +- h X`, and `(nabla_X A) Y` is the tangential part
/// of `(D_X A) Y`.
///
/// Every point carries its own adapted basis, built from a candidate set
/// fixed at `p` (see [`ordered_adapted_basis`]), just as independently
/// produced samples would. The inner differences are therefore taken along
/// directions that turn with the point and the residual has an `O(h^2)`
/// truncation part; in a basis transported parallel to `A` that part cancels
/// and only round-off remains.
pub fn codazzi_residual<S: Hypersurface + ?Sized>(surface: &S, p: &RealVector, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or_else(|| 10.0 * default_step(surface, p));
    check_step(surface, p, h)?;
    let tol = 1e-8;
    let candidates = gauge_candidates(&surface.unit_normal(p));
    let local_frame = |q: &RealVector| -> Result<TangentFrame> {
        TangentFrame::new(ordered_adapted_basis(&candidates, &surface.unit_normal(q))?, tol)
    };
    let frame = local_frame(p)?;
    let field = |q: &RealVector| -> Result<RealMatrix> {
        let local = local_frame(q)?;
        Ok(local.extend(&canonical_fd(surface, q, &local, h)?))
    };
    let derivatives: Vec<RealMatrix> = frame
        .basis()
        .iter()
        .map(|t| -> Result<RealMatrix> {
            let plus = field(&surface.project(&(p + t * h))?)?;
            let minus = field(&surface.project(&(p - t * h))?)?;
            Ok((plus - minus) / (2.0 * h))
        })
        .collect::<Result<_>>()?;
    let basis = frame.basis();
    let mut worst = 0.0_f64;
    for j in 0..basis.len() {
        for k in (j + 1)..basis.len() {
            let defect = &derivatives[j] * &basis[k] - &derivatives[k] * &basis[j];
            worst = worst.max(frame.project(&defect).amax());
        }
    }
    Ok(worst)
}
