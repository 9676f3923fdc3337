//! Classification of holomorphic hypersurface samples of the flat space:
//! constant totally real sectional curvatures force h-umbilicity, and the
//! data then lies on an h-sphere or on a holomorphic hyperplane.

use serde::Serialize;

use crate::curvature::SpaceFormParams;
use crate::error::{Error, Result};
use crate::hypersurface::{HSphere, HolomorphicHyperplane, Hypersurface, SurfaceSample};
use crate::space::{apply_j, bilinear, complex_scale, g, gt, quadratic, NordenSpace, RealVector};

/// Smallest ambient real dimension for which the classification holds.
pub const MIN_AMBIENT_DIM: usize = 8;

/// Surface samples of one hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    space: NordenSpace,
    samples: Vec<SurfaceSample>,
    provenance: String,
}

impl SampleSet {
    pub fn new(space: NordenSpace, samples: Vec<SurfaceSample>, provenance: impl Into<String>) -> Result<Self> {
        for s in &samples {
            space.check(s.point())?;
        }
        Ok(Self {
            space,
            samples,
            provenance: provenance.into(),
        })
    }

    pub fn space(&self) -> NordenSpace {
        self.space
    }

    pub fn samples(&self) -> &[SurfaceSample] {
        &self.samples
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Thresholds of the pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Max deviation of `(nu, nu~)` from their means, relative to `max(1, |nu| + |nu~|)`.
    pub constancy: f64,
    /// Umbilicity deviation relative to `max(|A|_max, 1)`.
    pub umbilicity: f64,
    /// Containment residual relative to the surface's scale.
    pub containment: f64,
    /// Spread of the unit normal across hyperplane samples.
    pub normal: f64,
    /// `lambda^2 + mu^2` above this selects the h-sphere branch.
    pub sphere_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            constancy: 1e-6,
            umbilicity: 1e-6,
            containment: 1e-6,
            normal: 1e-6,
            sphere_threshold: 1e-10,
        }
    }
}

/// Pointwise `(lambda, mu, nu, nu~)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invariants {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub nu_t: f64,
}

/// `lambda = tr A / 2n`, `mu = -tr(A J) / 2n`, `nu = lambda^2 - mu^2`,
/// `nu~ = -2 lambda mu`.
pub fn estimate_invariants(sample: &SurfaceSample) -> Invariants {
    let (lambda, mu) = sample.lambda_mu();
    Invariants {
        lambda,
        mu,
        nu: lambda * lambda - mu * mu,
        nu_t: -2.0 * lambda * mu,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UmbilicityReport {
    /// Per-sample deviation relative to `max(|A|_max, 1)`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub worst_index: usize,
    pub pass: bool,
}

pub fn umbilicity_check(set: &SampleSet, tol: f64) -> Result<UmbilicityReport> {
    if set.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let deviations: Vec<f64> = set
        .samples()
        .iter()
        .map(|s| s.umbilicity_deviation() / s.shape_operator().amax().max(1.0))
        .collect();
    let (worst_index, max_deviation) = deviations
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    Ok(UmbilicityReport {
        pass: max_deviation <= tol,
        deviations,
        max_deviation,
        worst_index,
    })
}

/// Residual of the relations between the h-proper pairs of `A` and the
/// curvatures that follow from the Gauss equation on the planes
/// `{x_j, x_k}`: `nu' - nu = mu_j mu_k - lambda_j lambda_k` and
/// `nu~' - nu~ = lambda_j mu_k + lambda_k mu_j` for all `j != k`.
pub fn pair_crosscheck(pairs: &[(f64, f64)], ambient: SpaceFormParams, observed: SpaceFormParams) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::TooFewPairs);
    }
    let dn = ambient.nu - observed.nu;
    let dt = ambient.nu_t - observed.nu_t;
    let mut worst = 0.0_f64;
    for (j, &(lj, mj)) in pairs.iter().enumerate() {
        for &(lk, mk) in &pairs[j + 1..] {
            worst = worst
                .max((dn - (mj * mk - lj * lk)).abs())
                .max((dt - (lj * mk + lk * mj)).abs());
        }
    }
    Ok(worst)
}

/// Recovers the h-sphere from a witness sample: `C = xi + lambda Z + mu J Z`
/// is constant, `z0 = (lambda I - mu J) C / (lambda^2 + mu^2)`,
/// `a = (lambda^2 - mu^2) / (lambda^2 + mu^2)^2`,
/// `b = 2 lambda mu / (lambda^2 + mu^2)^2`.
pub fn reconstruct_sphere(lambda: f64, mu: f64, witness: &SurfaceSample) -> Result<HSphere> {
    let r2 = lambda * lambda + mu * mu;
    if r2 <= 1e-12 {
        return Err(Error::NearZeroLambdaMu(r2));
    }
    let p = witness.point();
    let c = witness.frame().xi() + p * lambda + apply_j(p) * mu;
    let center = (&c * lambda - apply_j(&c) * mu) / r2;
    HSphere::new(center, (lambda * lambda - mu * mu) / (r2 * r2), 2.0 * lambda * mu / (r2 * r2))
}

/// Hyperplane through the samples: normals are aligned in sign, averaged and
/// renormalized; `d`, `d~` are averaged over the points.
pub fn reconstruct_hyperplane(set: &SampleSet, tol: f64) -> Result<HolomorphicHyperplane> {
    let samples = set.samples();
    let first = samples.first().ok_or(Error::EmptySampleSet)?.frame().xi().clone();
    let aligned: Vec<RealVector> = samples
        .iter()
        .map(|s| {
            let xi = s.frame().xi();
            if bilinear(xi, &first).re < 0.0 {
                -xi
            } else {
                xi.clone()
            }
        })
        .collect();
    let mean = aligned.iter().fold(set.space().zero(), |acc, v| acc + v) / aligned.len() as f64;
    let xi = complex_scale(quadratic(&mean).sqrt().inv(), &mean);
    let spread = aligned.iter().map(|v| (v - &xi).amax()).fold(0.0, f64::max);
    if spread > tol {
        return Err(Error::NonConstantNormal(spread));
    }
    let count = samples.len() as f64;
    let d = samples.iter().map(|s| g(&xi, s.point())).sum::<f64>() / count;
    let d_t = samples.iter().map(|s| gt(&xi, s.point())).sum::<f64>() / count;
    HolomorphicHyperplane::new(xi, d, d_t, 1e-9)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    HSphere,
    HolomorphicHyperplane,
    NotHUmbilical,
    NonConstantInvariants,
    DimensionTooSmall,
    /// A surface was reconstructed but some sample point is not on it.
    ContainmentFailure,
    /// Flat data whose unit normals are not parallel.
    NonConstantNormal,
}

impl Verdict {
    /// Whether the samples were recognized as one of the model hypersurfaces.
    pub fn is_success(self) -> bool {
        matches!(self, Verdict::HSphere | Verdict::HolomorphicHyperplane)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Recovered {
    Sphere(HSphere),
    Hyperplane(HolomorphicHyperplane),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Residuals {
    /// Max relative containment residual of the sample points.
    pub containment: Option<f64>,
    pub umbilicity: Option<f64>,
    /// Max deviation of `(nu, nu~)` from the mean.
    pub constancy: Option<f64>,
    /// Spread of unit normals (hyperplane branch).
    pub normal_spread: Option<f64>,
    /// Gap between `(a, b)` of the recovered sphere and the values predicted
    /// from the mean curvatures.
    pub parameter_gap: Option<f64>,
}

/// Consequences checked on h-umbilical data in a flat ambient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corollaries {
    /// `A = 0` at every sample (within the umbilicity tolerance).
    pub totally_geodesic: bool,
    /// `(nu, nu~)` equal the ambient values `(0, 0)`.
    pub curvatures_match_ambient: bool,
    /// The two statements agree.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub recovered: Option<Recovered>,
    pub per_sample: Vec<Invariants>,
    /// Means with `(lambda, mu)` aligned to the orientation of the first sample.
    pub mean: Option<Invariants>,
    pub residuals: Residuals,
    /// Sample responsible for a failed stage, when one is singled out.
    pub failing_sample: Option<usize>,
    pub corollaries: Option<Corollaries>,
}

impl ClassificationResult {
    fn stop(verdict: Verdict, per_sample: Vec<Invariants>, residuals: Residuals) -> Self {
        Self {
            verdict,
            recovered: None,
            per_sample,
            mean: None,
            residuals,
            failing_sample: None,
            corollaries: None,
        }
    }
}

/// Runs the pipeline: dimension gate, pointwise invariants, constancy of
/// `(nu, nu~)`, h-umbilicity, then reconstruction of an h-sphere (when
/// `lambda^2 + mu^2` exceeds the threshold) or of a holomorphic hyperplane,
/// followed by a containment check of every sample point.
pub fn classify(set: &SampleSet, tol: &Tolerances) -> Result<ClassificationResult> {
    if set.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut residuals = Residuals::default();
    if set.space().dim() < MIN_AMBIENT_DIM {
        return Ok(ClassificationResult::stop(Verdict::DimensionTooSmall, Vec::new(), residuals));
    }
    let per_sample: Vec<Invariants> = set.samples().iter().map(estimate_invariants).collect();
    let count = per_sample.len() as f64;

    let nu = per_sample.iter().map(|v| v.nu).sum::<f64>() / count;
    let nu_t = per_sample.iter().map(|v| v.nu_t).sum::<f64>() / count;
    let (worst, spread) = per_sample
        .iter()
        .map(|v| (v.nu - nu).abs().max((v.nu_t - nu_t).abs()))
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    residuals.constancy = Some(spread);
    if spread > tol.constancy * (nu.abs() + nu_t.abs()).max(1.0) {
        let mut result = ClassificationResult::stop(Verdict::NonConstantInvariants, per_sample, residuals);
        result.failing_sample = Some(worst);
        return Ok(result);
    }

    let umbilicity = umbilicity_check(set, tol.umbilicity)?;
    residuals.umbilicity = Some(umbilicity.max_deviation);
    if !umbilicity.pass {
        let mut result = ClassificationResult::stop(Verdict::NotHUmbilical, per_sample, residuals);
        result.failing_sample = Some(umbilicity.worst_index);
        return Ok(result);
    }

    // (lambda, mu) flips with the orientation of xi; align to the first sample
    let (l0, m0) = (per_sample[0].lambda, per_sample[0].mu);
    let signs: Vec<f64> = per_sample
        .iter()
        .map(|v| if v.lambda * l0 + v.mu * m0 < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let lambda = per_sample.iter().zip(&signs).map(|(v, s)| v.lambda * s).sum::<f64>() / count;
    let mu = per_sample.iter().zip(&signs).map(|(v, s)| v.mu * s).sum::<f64>() / count;
    let mean = Invariants { lambda, mu, nu, nu_t };

    let totally_geodesic = set
        .samples()
        .iter()
        .all(|s| s.shape_operator().amax() <= tol.umbilicity);
    let flat = nu.abs().max(nu_t.abs()) <= tol.constancy;
    let corollaries = Corollaries {
        totally_geodesic,
        curvatures_match_ambient: flat,
        consistent: totally_geodesic == flat,
    };

    let (verdict, recovered, failing_sample) = if lambda * lambda + mu * mu > tol.sphere_threshold {
        let witness = umbilicity
            .deviations
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let sign = signs[witness];
        let sphere = reconstruct_sphere(lambda * sign, mu * sign, &set.samples()[witness])?;
        let r2 = nu * nu + nu_t * nu_t;
        if r2 > 0.0 {
            let (a, b) = (nu / r2, -nu_t / r2);
            let scale = sphere.a().abs() + sphere.b().abs();
            residuals.parameter_gap = Some((sphere.a() - a).abs().max((sphere.b() - b).abs()) / scale);
        }
        let (index, worst) = containment(&sphere, set);
        residuals.containment = Some(worst);
        if worst <= tol.containment {
            (Verdict::HSphere, Some(Recovered::Sphere(sphere)), None)
        } else {
            (Verdict::ContainmentFailure, Some(Recovered::Sphere(sphere)), Some(index))
        }
    } else {
        match reconstruct_hyperplane(set, tol.normal) {
            Ok(plane) => {
                let xi = plane.xi().clone();
                residuals.normal_spread = Some(
                    set.samples()
                        .iter()
                        .map(|s| (s.frame().xi() - &xi).amax().min((s.frame().xi() + &xi).amax()))
                        .fold(0.0, f64::max),
                );
                let (index, worst) = containment(&plane, set);
                residuals.containment = Some(worst);
                if worst <= tol.containment {
                    (Verdict::HolomorphicHyperplane, Some(Recovered::Hyperplane(plane)), None)
                } else {
                    (Verdict::ContainmentFailure, Some(Recovered::Hyperplane(plane)), Some(index))
                }
            }
            Err(Error::NonConstantNormal(spread)) => {
                residuals.normal_spread = Some(spread);
                (Verdict::NonConstantNormal, None, None)
            }
            Err(e) => return Err(e),
        }
    };

    Ok(ClassificationResult {
        verdict,
        recovered,
        per_sample,
        mean: Some(mean),
        residuals,
        failing_sample,
        corollaries: Some(corollaries),
    })
}

/// Index and value of the largest relative containment residual.
fn containment<S: Hypersurface>(surface: &S, set: &SampleSet) -> (usize, f64) {
    set.samples()
        .iter()
        .map(|s| surface.containment_residual(s.point()) / surface.containment_scale(s.point()))
        .enumerate()
        .fold((0, 0.0), |best, (i, r)| if r > best.1 { (i, r) } else { best })
}
