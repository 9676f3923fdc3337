
use crate::error::{Error, Result};
use crate::space::{apply_j, g, gt, quadratic, NordenSpace, RealMatrix, RealVector};
use crate::tangent::TangentFrame;

/// `(xi, J xi)` at a point with `g(xi, xi) = -g(J xi, J xi) = 1` and
/// `g(xi, J xi) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFrame {
    point: RealVector,
    xi: RealVector,
    jxi: RealVector,
}

/// Largest defect of the frame equations for `xi`.
fn frame_residual(xi: &RealVector) -> f64 {
    let q = quadratic(xi);
    let jxi = apply_j(xi);
    (q.re - 1.0).abs().max((g(&jxi, &jxi) + 1.0).abs()).max(q.im.abs())
}

impl NormalFrame {
    pub fn new(point: RealVector, xi: RealVector, tol: f64) -> Result<Self> {
        let space = NordenSpace::of_vector(&point)?;
        space.check(&xi)?;
        let residual = frame_residual(&xi);
        if residual > tol {
            return Err(Error::BadInputNormalization(format!(
                "frame residual {residual:.3e}"
            )));
        }
        let jxi = apply_j(&xi);
        Ok(Self { point, xi, jxi })
    }

    pub fn point(&self) -> &RealVector {
        &self.point
    }

    pub fn xi(&self) -> &RealVector {
        &self.xi
    }

    pub fn jxi(&self) -> &RealVector {
        &self.jxi
    }

    pub fn residual(&self) -> f64 {
        frame_residual(&self.xi)
    }
}

/// Turns `eta` with `g(eta, eta) = 1` into a frame vector:
/// with `sinh t = g(eta, J eta)`,
/// `xi = (cosh(t/2) eta + sinh(t/2) J eta) / cosh t`. Returns `(xi, J xi)`.
pub fn normalize_normal_frame(eta: &RealVector, jeta: &RealVector, tol: f64) -> Result<(RealVector, RealVector)> {
    let space = NordenSpace::of_vector(eta)?;
    space.check(jeta)?;
    let scale = eta.amax().max(1.0);
    if (apply_j(eta) - jeta).amax() > tol * scale {
        return Err(Error::BadInputNormalization("second vector is not J of the first".into()));
    }
    let (gee, gjj) = (g(eta, eta), g(jeta, jeta));
    if (gee - 1.0).abs() > tol || (gjj + 1.0).abs() > tol {
        return Err(Error::BadInputNormalization(format!(
            "g(eta, eta) = {gee:.6e}, g(J eta, J eta) = {gjj:.6e}"
        )));
    }
    let t = g(eta, jeta).asinh();
    let xi = (eta * (t / 2.0).cosh() + jeta * (t / 2.0).sinh()) / t.cosh();
    let jxi = apply_j(&xi);
    Ok((xi, jxi))
}

/// Mean curvature vector `H = ((tr A) xi - (tr A J) J xi) / 2n` and its
/// lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvatureData {
    pub h: RealVector,
    pub jh: RealVector,
    pub g_hh: f64,
    pub gt_hh: f64,
    pub trace_a: f64,
    pub trace_aj: f64,
}

impl MeanCurvatureData {
    pub fn is_minimal(&self, tol: f64) -> bool {
        self.trace_a.abs() <= tol && self.trace_aj.abs() <= tol
    }
}

/// A point of a holomorphic hypersurface with its normal frame, a tangent
/// basis and the shape operator `A = A_xi` in that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSample {
    frame: NormalFrame,
    tangent: TangentFrame,
    a: RealMatrix,
}

impl SurfaceSample {
    /// Validates that the tangent span is J-invariant and non-degenerate,
    /// the frame is normal to it and `A` is h-symmetric (all within `tol`).
    pub fn new(point: RealVector, frame: NormalFrame, tangent_basis: Vec<RealVector>, a: RealMatrix, tol: f64) -> Result<Self> {
        let space = NordenSpace::of_vector(&point)?;
        if frame.point() != &point {
            return Err(Error::MalformedSample("frame is attached to another point".into()));
        }
        if tangent_basis.len() + 2 != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim() - 2,
                found: tangent_basis.len(),
            });
        }
        let tangent = TangentFrame::new(tangent_basis, tol)?;
        let normal = tangent.normal_residual(frame.xi()).max(tangent.normal_residual(frame.jxi()));
        if normal > tol {
            return Err(Error::NotNormal(normal));
        }
        tangent.check_h_symmetric(&a, tol)?;
        Ok(Self { frame, tangent, a })
    }

    /// Builds a sample from a unit normal `eta` (`g(eta, eta) = 1`) that need
    /// not satisfy `g(eta, J eta) = 0`, together with `A_eta`. The frame is
    /// normalized and `A` transformed to match: with `xi = c eta` for the
    /// complex factor `c = 1 / sqrt(q(eta))`, `A_xi = Re c A_eta + Im c J A_eta`
    /// written for the real form `(cosh(t/2) I + sinh(t/2) J) A_eta / cosh t`.
    pub fn from_raw_normal(point: RealVector, eta: &RealVector, tangent_basis: Vec<RealVector>, a_eta: RealMatrix, tol: f64) -> Result<Self> {
        let (xi, _) = normalize_normal_frame(eta, &apply_j(eta), tol)?;
        let frame = NormalFrame::new(point.clone(), xi, tol)?;
        let tangent = TangentFrame::new(tangent_basis.clone(), tol)?;
        let t = g(eta, &apply_j(eta)).asinh();
        let ja = tangent.j_coords() * &a_eta;
        let a = (&a_eta * (t / 2.0).cosh() + ja * (t / 2.0).sinh()) / t.cosh();
        Self::new(point, frame, tangent_basis, a, tol)
    }

    pub fn point(&self) -> &RealVector {
        self.frame.point()
    }

    pub fn frame(&self) -> &NormalFrame {
        &self.frame
    }

    pub fn tangent_basis(&self) -> &[RealVector] {
        self.tangent.basis()
    }

    pub fn tangent_frame(&self) -> &TangentFrame {
        &self.tangent
    }

    pub fn shape_operator(&self) -> &RealMatrix {
        &self.a
    }

    /// Real dimension `2n` of the hypersurface.
    pub fn dim(&self) -> usize {
        self.tangent.dim()
    }

    /// `A` acting on ambient vectors, zero on the normal space.
    pub fn ambient_shape_operator(&self) -> RealMatrix {
        self.tangent.extend(&self.a)
    }

    /// `sigma(x, y) = g(Ax, y) xi - g~(Ax, y) J xi` for tangent `x`, `y`.
    pub fn second_fundamental(&self, x: &RealVector, y: &RealVector) -> RealVector {
        let ax = self.ambient_shape_operator() * x;
        self.frame.xi() * g(&ax, y) - self.frame.jxi() * gt(&ax, y)
    }

    /// `A_eta = g(xi, eta) A - g(J xi, eta) J A` for a normal `eta`.
    pub fn shape_operator_wrt(&self, eta: &RealVector, tol: f64) -> Result<RealMatrix> {
        NordenSpace::of_vector(self.point())?.check(eta)?;
        let residual = self.tangent.normal_residual(eta);
        if residual > tol {
            return Err(Error::NotNormal(residual));
        }
        let ja = self.tangent.j_coords() * &self.a;
        Ok(&self.a * g(self.frame.xi(), eta) - ja * g(self.frame.jxi(), eta))
    }

    pub fn trace_a(&self) -> f64 {
        self.a.trace()
    }

    pub fn trace_aj(&self) -> f64 {
        (&self.a * self.tangent.j_coords()).trace()
    }

    /// `(tr A / 2n, -tr(A J) / 2n)`.
    pub fn lambda_mu(&self) -> (f64, f64) {
        let n2 = self.dim() as f64;
        (self.trace_a() / n2, -self.trace_aj() / n2)
    }

    pub fn mean_curvature(&self) -> MeanCurvatureData {
        let n2 = self.dim() as f64;
        let (ta, taj) = (self.trace_a(), self.trace_aj());
        let (p, q) = (ta / n2, taj / n2);
        let h = self.frame.xi() * p - self.frame.jxi() * q;
        let jh = apply_j(&h);
        MeanCurvatureData {
            g_hh: p * p - q * q,
            gt_hh: 2.0 * p * q,
            h,
            jh,
            trace_a: ta,
            trace_aj: taj,
        }
    }

    /// `|A - (tr A / 2n) I + (tr(A J) / 2n) J|_max`.
    pub fn umbilicity_deviation(&self) -> f64 {
        let (lambda, mu) = self.lambda_mu();
        let n2 = self.dim();
        let model = RealMatrix::identity(n2, n2) * lambda + self.tangent.j_coords() * mu;
        (&self.a - model).amax()
    }

    /// Whether `A = lambda I + mu J` within `tol * max(|A|_max, 1)`.
    pub fn is_h_umbilical(&self, tol: f64) -> bool {
        self.umbilicity_deviation() <= tol * self.a.amax().max(1.0)
    }
}
