//! Seeded numerical checks of the geometric identities, grouped in suites.
//! Each check reports a residual and the threshold it must not exceed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{
    curvature_constancy_report, gauss_curvature_from_shape, ricci, sample_totally_real_planes,
    sectional_curvatures, space_form_curvature, CurvatureTensor, SpaceFormParams,
};
use crate::decompose::{h_proper_decomposition, HSymmetricOp};
use crate::error::{Error, Result};
use crate::hypersurface::{
    codazzi_residual, normalize_normal_frame, shape_operator_fd, HSphere, Hypersurface, SurfaceSample,
};
use crate::space::{
    apply_j, g, gt, random_structure_group_member, realify, ComplexMatrix, ComplexScalar, NordenSpace,
    RealMatrix, RealVector,
};
use crate::tangent::TangentFrame;

/// Inputs shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyParams {
    pub a: f64,
    pub b: f64,
    /// Ambient complex dimension.
    pub m: usize,
    pub seed: u64,
    pub points: usize,
    pub planes: usize,
    /// Finite-difference step; each suite has its own default.
    pub step: Option<f64>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            a: 3.0,
            b: 4.0,
            m: 4,
            seed: 0,
            points: 20,
            planes: 50,
            step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite: suite.name().to_string(),
            pass: true,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        let pass = value.is_finite() && value <= threshold;
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            pass,
        });
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Curvature,
    Frame,
    Gauss,
    Ricci,
    Codazzi,
    Witnesses,
    MeanCurvature,
    Decompose,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Identities,
        Suite::Curvature,
        Suite::Frame,
        Suite::Gauss,
        Suite::Ricci,
        Suite::Codazzi,
        Suite::Witnesses,
        Suite::MeanCurvature,
        Suite::Decompose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Curvature => "curvature",
            Suite::Frame => "frame",
            Suite::Gauss => "gauss",
            Suite::Ricci => "ricci",
            Suite::Codazzi => "codazzi",
            Suite::Witnesses => "witnesses",
            Suite::MeanCurvature => "mean-curvature",
            Suite::Decompose => "decompose",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Vec<SuiteReport>> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|s| run_one(*s, params)).collect(),
        s => Ok(vec![run_one(s, params)?]),
    }
}

fn run_one(suite: Suite, p: &VerifyParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Identities => identities(p, &mut report)?,
        Suite::Curvature => curvature(p, &mut report)?,
        Suite::Frame => frame(p, &mut report)?,
        Suite::Gauss => gauss(p, &mut report)?,
        Suite::Ricci => ricci_suite(p, &mut report)?,
        Suite::Codazzi => codazzi(p, &mut report)?,
        Suite::Witnesses => witnesses(p, &mut report)?,
        Suite::MeanCurvature => mean_curvature(p, &mut report)?,
        Suite::Decompose => decompose(p, &mut report)?,
        Suite::All => unreachable!("expanded by run_suite"),
    }
    Ok(report)
}

/// The h-sphere with parameters `(a, b)` and a center drawn from `seed`.
pub fn test_sphere(a: f64, b: f64, m: usize, seed: u64) -> Result<HSphere> {
    let space = NordenSpace::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc3a5_c85c_97cb_3127);
    let center = RealVector::from_fn(space.dim(), |_, _| rng.random_range(-1.0..1.0));
    HSphere::new(center, a, b)
}

/// A random h-symmetric operator `Q D Q^{-1}` with `Q` in the structure group
/// and `D` the block form of random pairs `(lambda_k, mu_k)` in `[-1, 1]^2`.
pub fn planted_h_symmetric<R: Rng>(m: usize, rng: &mut R) -> (RealMatrix, Vec<(f64, f64)>) {
    let pairs: Vec<(f64, f64)> = (0..m)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut d = RealMatrix::zeros(2 * m, 2 * m);
    for (k, &(l, mu)) in pairs.iter().enumerate() {
        d[(k, k)] = l;
        d[(m + k, m + k)] = l;
        d[(k, m + k)] = mu;
        d[(m + k, k)] = -mu;
    }
    let q = random_structure_group_member(m, rng);
    let q_inv = q.clone().try_inverse().expect("structure group members are invertible");
    (&q * d * q_inv, pairs)
}

/// `|A - (tr A / k) I|_max / max(|A|_max, 1)` for a `k x k` matrix.
pub fn identity_deviation(a: &RealMatrix) -> f64 {
    let k = a.nrows();
    let c = a.trace() / k as f64;
    (a - RealMatrix::identity(k, k) * c).amax() / a.amax().max(1.0)
}

/// Largest defect of the adapted-basis equations.
pub fn adapted_defect(basis: &[RealVector]) -> f64 {
    let half = basis.len() / 2;
    let (xs, js) = basis.split_at(half);
    let mut worst = 0.0_f64;
    for (x, jx) in xs.iter().zip(js) {
        worst = worst.max((apply_j(x) - jx).amax());
    }
    for i in 0..half {
        for k in 0..half {
            let delta = if i == k { 1.0 } else { 0.0 };
            worst = worst
                .max((g(&xs[i], &xs[k]) - delta).abs())
                .max((g(&js[i], &js[k]) + delta).abs())
                .max(g(&xs[i], &js[k]).abs());
        }
    }
    worst
}

fn uniform_vector(rng: &mut ChaCha8Rng, dim: usize) -> RealVector {
    RealVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0))
}

fn random_tangent(sample: &SurfaceSample, rng: &mut ChaCha8Rng) -> RealVector {
    sample
        .tangent_basis()
        .iter()
        .fold(RealVector::zeros(sample.point().len()), |acc, t| acc + t * rng.random_range(-1.0..1.0))
}

fn whole_space_frame(space: NordenSpace) -> TangentFrame {
    let id = RealMatrix::identity(space.dim(), space.dim());
    TangentFrame::new((0..space.dim()).map(|k| id.column(k).into()).collect(), 1e-12)
        .expect("the standard basis spans a J-invariant subspace")
}

fn flat_gauss(sample: &SurfaceSample, a: &RealMatrix, tol: f64) -> Result<CurvatureTensor> {
    gauss_curvature_from_shape(a, sample.tangent_frame(), SpaceFormParams::FLAT, tol)
}

fn sphere_samples(sphere: &HSphere, count: usize, seed: u64) -> Result<Vec<SurfaceSample>> {
    sphere.sample_surfaces(count.max(1), seed, 1e-9)
}

const EVALUATIONS: usize = 1000;

fn identities(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let space = NordenSpace::new(p.m)?;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let samples = sphere_samples(&sphere, p.points, p.seed)?;

    let (mut anti, mut assoc) = (0.0_f64, 0.0_f64);
    for _ in 0..EVALUATIONS {
        let z = uniform_vector(&mut rng, dim);
        let w = uniform_vector(&mut rng, dim);
        let scale = z.norm() * w.norm();
        anti = anti.max((g(&apply_j(&z), &apply_j(&w)) + g(&z, &w)).abs() / scale);
        assoc = assoc.max((gt(&z, &w) - g(&apply_j(&z), &w)).abs() / scale);
    }
    report.check("g(JZ, JW) = -g(Z, W)", anti, 1e-10);
    report.check("g~(Z, W) = g(JZ, W)", assoc, 1e-10);

    let frame = whole_space_frame(space);
    let (shape, _) = planted_h_symmetric(p.m, &mut rng);
    let r = gauss_curvature_from_shape(&shape, &frame, sphere.theoretical_curvatures(), 1e-9)?;
    let k = sphere.theoretical_curvatures();
    let curvature_scale = (shape.amax() * shape.amax() + k.nu.abs() + k.nu_t.abs()).max(1.0);
    let mut skew = 0.0_f64;
    for _ in 0..EVALUATIONS {
        let v: Vec<RealVector> = (0..4).map(|_| uniform_vector(&mut rng, dim)).collect();
        let scale = v.iter().map(|x| x.norm()).product::<f64>() * curvature_scale;
        let lhs = r.eval(&v[0], &v[1], &v[2], &v[3]);
        let rhs = r.eval(&v[0], &v[1], &apply_j(&v[2]), &apply_j(&v[3]));
        skew = skew.max((lhs + rhs).abs() / scale);
    }
    report.check("R(x, y, z, u) = -R(x, y, Jz, Ju)", skew, 1e-10);

    let mut compat = 0.0_f64;
    for i in 0..EVALUATIONS {
        let s = &samples[i % samples.len()];
        let x = random_tangent(s, &mut rng);
        let y = random_tangent(s, &mut rng);
        let scale = x.norm() * y.norm() * s.shape_operator().amax().max(1.0);
        let sxy = s.second_fundamental(&x, &y);
        let sjx = s.second_fundamental(&apply_j(&x), &y);
        let sjy = s.second_fundamental(&x, &apply_j(&y));
        compat = compat.max((&sjx - &sjy).amax().max((&sjx - apply_j(&sxy)).amax()) / scale);
    }
    report.check("sigma(Jx, y) = sigma(x, Jy) = J sigma(x, y)", compat, 1e-10);

    let mut normalization = 0.0_f64;
    for _ in 0..EVALUATIONS {
        let xi = unit_normal_like(&mut rng, dim);
        let s = rng.random_range(-2.0..2.0);
        let eta = &xi * f64::cosh(s) + apply_j(&xi) * f64::sinh(s);
        let (out, jout) = normalize_normal_frame(&eta, &apply_j(&eta), 1e-8)?;
        let scale = out.norm_squared().max(1.0);
        let residual = (g(&out, &out) - 1.0)
            .abs()
            .max((g(&jout, &jout) + 1.0).abs())
            .max(g(&out, &jout).abs());
        normalization = normalization.max(residual / scale);
    }
    report.check("normalized frames satisfy the frame equations", normalization, 1e-10);

    let mut gauss_gap = 0.0_f64;
    for _ in 0..EVALUATIONS {
        let (l, mu) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let a = RealMatrix::identity(dim, dim) * l + frame.j_coords() * mu;
        let r = gauss_curvature_from_shape(&a, &frame, SpaceFormParams::FLAT, 1e-12)?;
        let sf = space_form_curvature(SpaceFormParams::new(l * l - mu * mu, -2.0 * l * mu));
        let v: Vec<RealVector> = (0..4).map(|_| uniform_vector(&mut rng, dim)).collect();
        let scale = v.iter().map(|x| x.norm()).product::<f64>();
        let gap = r.eval(&v[0], &v[1], &v[2], &v[3]) - sf.eval(&v[0], &v[1], &v[2], &v[3]);
        gauss_gap = gauss_gap.max(gap.abs() / scale);
    }
    report.check("Gauss tensor of lambda I + mu J is the space form (lambda^2 - mu^2, -2 lambda mu)", gauss_gap, 1e-10);
    Ok(())
}

/// A random `xi` with `q(xi) = 1` of moderate size.
fn unit_normal_like(rng: &mut ChaCha8Rng, dim: usize) -> RealVector {
    loop {
        let w = uniform_vector(rng, dim);
        let q = crate::space::quadratic(&w);
        if q.norm() > 0.1 * w.norm_squared() {
            return crate::space::complex_scale(q.sqrt().inv(), &w);
        }
    }
}

fn curvature(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let expected = sphere.theoretical_curvatures();
    let h = p.step.unwrap_or(1e-5);
    let (mut closed, mut fd) = (0.0_f64, 0.0_f64);
    for (i, s) in sphere_samples(&sphere, p.points, p.seed)?.iter().enumerate() {
        let planes = sample_totally_real_planes(s.tangent_basis(), p.planes, p.seed.wrapping_add(i as u64))?;
        let exact = flat_gauss(s, s.shape_operator(), 1e-9)?;
        let a_fd = shape_operator_fd(&sphere, s, Some(h))?;
        let approx = flat_gauss(s, &a_fd, 1e-6)?;
        for plane in &planes {
            let (k, kt) = sectional_curvatures(&exact, plane)?;
            closed = closed.max((k - expected.nu).abs()).max((kt - expected.nu_t).abs());
            let (k, kt) = sectional_curvatures(&approx, plane)?;
            fd = fd.max((k - expected.nu).abs()).max((kt - expected.nu_t).abs());
        }
    }
    report.check("max |K - nu|, |K~ - nu~| with closed-form A", closed, 1e-9);
    report.check(format!("max |K - nu|, |K~ - nu~| with finite-difference A (h = {h:e})"), fd, 1e-5);
    Ok(())
}

fn frame(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut residual, mut normal, mut adapted, mut normalized) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for s in sphere_samples(&sphere, p.points, p.seed)? {
        let f = s.frame();
        residual = residual.max(f.residual());
        if f.jxi() != &apply_j(f.xi()) {
            normal = f64::INFINITY;
        }
        for t in s.tangent_basis() {
            let scale = t.norm() * f.xi().norm();
            normal = normal
                .max(g(t, f.xi()).abs() / scale)
                .max(g(t, f.jxi()).abs() / scale);
        }
        adapted = adapted.max(adapted_defect(s.tangent_basis()));
        let u = rng.random_range(-2.0..2.0);
        let eta = f.xi() * f64::cosh(u) + f.jxi() * f64::sinh(u);
        let (xi, _) = normalize_normal_frame(&eta, &apply_j(&eta), 1e-8)?;
        normalized = normalized.max((&xi - f.xi()).amax() / f.xi().amax());
    }
    report.check("frame equations at sampled points", residual, 1e-10);
    report.check("xi, J xi orthogonal to the tangent basis", normal, 1e-10);
    report.check("tangent basis is adapted", adapted, 1e-9);
    report.check("normalizing a hyperbolically rotated frame recovers xi", normalized, 1e-10);
    Ok(())
}

fn gauss(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let expected = sphere.theoretical_curvatures();
    let model = space_form_curvature(expected);
    let scale_k = (expected.nu.abs() + expected.nu_t.abs()).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut tensor, mut sectional) = (0.0_f64, 0.0_f64);
    for (i, s) in sphere_samples(&sphere, p.points, p.seed)?.iter().enumerate() {
        let r = flat_gauss(s, s.shape_operator(), 1e-9)?;
        for _ in 0..p.planes {
            let v: Vec<RealVector> = (0..4).map(|_| random_tangent(s, &mut rng)).collect();
            let scale = v.iter().map(|x| x.norm()).product::<f64>() * scale_k;
            let gap = r.eval(&v[0], &v[1], &v[2], &v[3]) - model.eval(&v[0], &v[1], &v[2], &v[3]);
            tensor = tensor.max(gap.abs() / scale);
        }
        let planes = sample_totally_real_planes(s.tangent_basis(), p.planes, p.seed.wrapping_add(i as u64))?;
        let stats = curvature_constancy_report(&r, &planes)?;
        sectional = sectional
            .max((stats.nu - expected.nu).abs() + stats.max_deviation_k)
            .max((stats.nu_t - expected.nu_t).abs() + stats.max_deviation_kt);
    }
    report.check("Gauss-equation tensor equals the space form of (nu, nu~)", tensor, 1e-9);
    report.check("totally real sectional curvatures equal (nu, nu~)", sectional, 1e-9);
    Ok(())
}

fn ricci_suite(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let mut worst = 0.0_f64;
    for s in sphere_samples(&sphere, p.points, p.seed)? {
        let r = flat_gauss(&s, s.shape_operator(), 1e-9)?;
        let basis = s.tangent_basis();
        let rho = ricci(&r, basis)?;
        let expected = ricci_from_shape(&s, SpaceFormParams::FLAT);
        worst = worst.max((&rho - &expected).amax() / expected.amax().max(1.0));
    }
    report.check("Ricci tensor matches the shape-operator formula", worst, 1e-8);
    Ok(())
}

/// `rho(x, y) = 2(n-1)(nu' g(x, y) - nu~' g(x, Jy)) + tr A g(Ax, y)
/// - tr(A J) g(Ax, Jy) - 2 g(A^2 x, y)` on the tangent basis of `sample`.
pub fn ricci_from_shape(sample: &SurfaceSample, ambient: SpaceFormParams) -> RealMatrix {
    let basis = sample.tangent_basis();
    let ext = sample.ambient_shape_operator();
    let n = sample.dim() as f64 / 2.0;
    let (ta, taj) = (sample.trace_a(), sample.trace_aj());
    RealMatrix::from_fn(basis.len(), basis.len(), |i, j| {
        let (x, y) = (&basis[i], &basis[j]);
        let ax = &ext * x;
        let jy = apply_j(y);
        2.0 * (n - 1.0) * (ambient.nu * g(x, y) - ambient.nu_t * g(x, &jy)) + ta * g(&ax, y)
            - taj * g(&ax, &jy)
            - 2.0 * g(&(&ext * &ax), y)
    })
}

/// Steps used to exhibit the order of the Codazzi finite differences.
pub const CODAZZI_ORDER_STEPS: [f64; 3] = [2e-2, 1e-2, 5e-3];

fn codazzi(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let h = p.step.unwrap_or(1e-4);
    let points = sphere.sample(p.points.clamp(1, 3), p.seed)?;
    let mut worst = 0.0_f64;
    let mut order_gap = 0.0_f64;
    for pt in &points {
        worst = worst.max(codazzi_residual(&sphere, pt, Some(h))?);
        let r: Vec<f64> = CODAZZI_ORDER_STEPS
            .iter()
            .map(|&s| codazzi_residual(&sphere, pt, Some(s)))
            .collect::<Result<_>>()?;
        for w in r.windows(2) {
            order_gap = order_gap.max(((w[0] / w[1]).log2() - 2.0).abs());
        }
    }
    report.check(format!("Codazzi residual at h = {h:e}"), worst, 1e-4);
    report.check("|observed order - 2| under step halving", order_gap, 0.3);
    Ok(())
}

fn witnesses(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    // (a, b) = (1, 0): g~(H, H) = 0 with H != 0, umbilical with respect to xi
    let real = test_sphere(1.0, 0.0, p.m, p.seed)?;
    let (mut dev_xi, mut gt_hh) = (0.0_f64, 0.0_f64);
    for s in sphere_samples(&real, p.points, p.seed)? {
        let a_xi = s.shape_operator_wrt(s.frame().xi(), 1e-9)?;
        dev_xi = dev_xi.max(identity_deviation(&a_xi));
        gt_hh = gt_hh.max(s.mean_curvature().gt_hh.abs());
    }
    report.check("(1, 0): g~(H, H) = 0", gt_hh, 1e-10);
    report.check("(1, 0): A_xi is a multiple of I", dev_xi, 1e-9);

    // (a, b) = (0, 1): H isotropic, umbilical with respect to H or JH
    let iso = test_sphere(0.0, 1.0, p.m, p.seed)?;
    let (mut g_hh, mut dev_either) = (0.0_f64, 0.0_f64);
    for s in sphere_samples(&iso, p.points, p.seed)? {
        let h = s.mean_curvature();
        g_hh = g_hh.max(g(&h.h, &h.h).abs());
        let a_h = s.shape_operator_wrt(&h.h, 1e-9)?;
        let a_jh = s.shape_operator_wrt(&h.jh, 1e-9)?;
        dev_either = dev_either.max(identity_deviation(&a_h).min(identity_deviation(&a_jh)));
    }
    report.check("(0, 1): g(H, H) = 0", g_hh, 1e-10);
    report.check("(0, 1): A_H or A_JH is a multiple of I", dev_either, 1e-9);
    Ok(())
}

fn mean_curvature(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let sphere = test_sphere(p.a, p.b, p.m, p.seed)?;
    let measure = |sphere: &HSphere| -> Result<(f64, f64, f64)> {
        let mut gap = 0.0_f64;
        let (mut nu, mut nu_t) = (0.0, 0.0);
        let samples = sphere_samples(sphere, p.points, p.seed)?;
        for (i, s) in samples.iter().enumerate() {
            let r = flat_gauss(s, s.shape_operator(), 1e-9)?;
            let planes = sample_totally_real_planes(s.tangent_basis(), p.planes, p.seed.wrapping_add(i as u64))?;
            let stats = curvature_constancy_report(&r, &planes)?;
            let h = s.mean_curvature();
            gap = gap
                .max((stats.nu - g(&h.h, &h.h)).abs())
                .max((stats.nu_t - gt(&h.h, &h.h)).abs());
            nu += stats.nu / samples.len() as f64;
            nu_t += stats.nu_t / samples.len() as f64;
        }
        Ok((gap, nu, nu_t))
    };
    let (gap, nu, nu_t) = measure(&sphere)?;
    let (gap_c, nu_c, nu_t_c) = measure(&sphere.conjugate())?;
    report.check("(nu, nu~) = (g(H, H), g~(H, H))", gap, 1e-10);
    report.check("same on the conjugate sphere", gap_c, 1e-10);
    report.check("conjugation keeps nu", (nu - nu_c).abs(), 1e-10);
    report.check("conjugation flips nu~", (nu_t + nu_t_c).abs(), 1e-10);
    Ok(())
}

/// Number of planted operators in the decomposition suite.
pub const PLANTED_OPERATORS: usize = 200;

fn decompose(p: &VerifyParams, report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut worst = 0.0_f64;
    for i in 0..PLANTED_OPERATORS {
        let m = 2 + i % 3;
        let (s, _) = planted_h_symmetric(m, &mut rng);
        let scale = s.amax();
        let err = HSymmetricOp::new(s.clone(), 1e-9)
            .and_then(|op| h_proper_decomposition(&op, 1e-9))
            .map(|d| (d.reconstruct() - &s).amax() / scale)
            .unwrap_or(f64::INFINITY);
        worst = worst.max(err);
    }
    report.check(format!("{PLANTED_OPERATORS} planted operators rebuilt, error / |S|"), worst, 1e-10);

    let nilpotent = nilpotent_operator();
    let rejected = match HSymmetricOp::new(nilpotent, 1e-9).and_then(|op| h_proper_decomposition(&op, 1e-9)) {
        Err(Error::NotHDiagonalizable(_)) => 0.0,
        _ => 1.0,
    };
    report.check("nilpotent complex-symmetric operator is not h-diagonalizable", rejected, 0.0);
    Ok(())
}

/// Realification of `[[1, i], [i, -1]]`, complex symmetric with square zero.
pub fn nilpotent_operator() -> RealMatrix {
    let (one, i) = (ComplexScalar::new(1.0, 0.0), ComplexScalar::new(0.0, 1.0));
    realify(&ComplexMatrix::from_row_slice(2, 2, &[one, i, i, -one]))
}
