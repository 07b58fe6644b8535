//! Second-order Fermi-normal-coordinate geometry around a laboratory worldline.
//!
//! Frame data is supplied directly in the Fermi frame: the 4-acceleration of
//! the worldline and the Riemann components `R_{τiτj}`, `R_{τjik}` and
//! `R_{ikjl}`, each as a function of proper time. Everything here is a pure
//! function of that data.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
/// `t[i][j]`
pub type Tensor2 = [[f64; 3]; 3];
/// `t[j][i][k]` for `R_{τjik}`.
pub type Tensor3 = [[[f64; 3]; 3]; 3];
/// `t[i][k][j][l]` for `R_{ikjl}`.
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// Frame quantities evaluated at a single proper time.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameSample {
    pub accel: Vec3,
    pub riemann_titj: Tensor2,
    pub riemann_tjik: Tensor3,
    pub riemann_ikjl: Tensor4,
}

impl FrameSample {
    /// Largest absolute Riemann component in the sample.
    pub fn max_curvature(&self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max(self.riemann_titj[i][j].abs());
                for k in 0..3 {
                    m = m.max(self.riemann_tjik[i][j][k].abs());
                    for l in 0..3 {
                        m = m.max(self.riemann_ikjl[i][j][k][l].abs());
                    }
                }
            }
        }
        m
    }

    fn all_finite(&self) -> bool {
        let flat2 = self.riemann_titj.iter().flatten();
        let flat3 = self.riemann_tjik.iter().flatten().flatten();
        let flat4 = self.riemann_ikjl.iter().flatten().flatten().flatten();
        self.accel
            .iter()
            .chain(flat2)
            .chain(flat3)
            .chain(flat4)
            .all(|v| v.is_finite())
    }
}

/// How far from the worldline the second-order expansion is trusted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Validity {
    /// Radius chosen per proper time so that `|a|·r ≤ accel_bound` and
    /// `max|R|·r² ≤ curvature_bound`.
    Auto { accel_bound: f64, curvature_bound: f64 },
    /// Fixed radius.
    Radius(f64),
    /// No restriction.
    Unbounded,
}

impl Default for Validity {
    fn default() -> Self {
        Validity::Auto {
            accel_bound: 0.1,
            curvature_bound: 0.1,
        }
    }
}

type SampleFn = Arc<dyn Fn(f64) -> FrameSample + Send + Sync>;

/// Acceleration and Riemann components of a laboratory worldline, as
/// functions of proper time.
#[derive(Clone)]
pub struct FrameData {
    sample: SampleFn,
    validity: Validity,
}

impl fmt::Debug for FrameData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameData")
            .field("validity", &self.validity)
            .finish_non_exhaustive()
    }
}

impl FrameData {
    /// Build from four independent component functions.
    pub fn new<A, T2, T3, T4>(accel: A, riemann_titj: T2, riemann_tjik: T3, riemann_ikjl: T4) -> Self
    where
        A: Fn(f64) -> Vec3 + Send + Sync + 'static,
        T2: Fn(f64) -> Tensor2 + Send + Sync + 'static,
        T3: Fn(f64) -> Tensor3 + Send + Sync + 'static,
        T4: Fn(f64) -> Tensor4 + Send + Sync + 'static,
    {
        Self::from_fn(move |tau| FrameSample {
            accel: accel(tau),
            riemann_titj: riemann_titj(tau),
            riemann_tjik: riemann_tjik(tau),
            riemann_ikjl: riemann_ikjl(tau),
        })
    }

    /// Build from a function returning all components at once.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> FrameSample + Send + Sync + 'static,
    {
        Self {
            sample: Arc::new(f),
            validity: Validity::default(),
        }
    }

    pub fn with_validity(mut self, validity: Validity) -> Self {
        self.validity = validity;
        self
    }

    pub fn validity(&self) -> Validity {
        self.validity
    }

    pub fn sample(&self, tau: f64) -> FrameSample {
        (self.sample)(tau)
    }

    pub fn accel(&self, tau: f64) -> Vec3 {
        self.sample(tau).accel
    }

    pub fn riemann_titj(&self, tau: f64) -> Tensor2 {
        self.sample(tau).riemann_titj
    }

    pub fn riemann_tjik(&self, tau: f64) -> Tensor3 {
        self.sample(tau).riemann_tjik
    }

    pub fn riemann_ikjl(&self, tau: f64) -> Tensor4 {
        self.sample(tau).riemann_ikjl
    }

    /// Validity radius at proper time `tau` (may be infinite).
    pub fn validity_radius(&self, tau: f64) -> f64 {
        match self.validity {
            Validity::Unbounded => f64::INFINITY,
            Validity::Radius(r) => r,
            Validity::Auto {
                accel_bound,
                curvature_bound,
            } => {
                let s = self.sample(tau);
                let a = norm(&s.accel);
                let rmax = s.max_curvature();
                let from_accel = if a > 0.0 { accel_bound / a } else { f64::INFINITY };
                let from_curv = if rmax > 0.0 {
                    (curvature_bound / rmax).sqrt()
                } else {
                    f64::INFINITY
                };
                from_accel.min(from_curv)
            }
        }
    }

    fn checked_sample(&self, point: &FramePoint) -> Result<FrameSample> {
        if !point.tau.is_finite() || point.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite frame point".into()));
        }
        let s = self.sample(point.tau);
        if !s.all_finite() {
            return Err(Error::Input(format!("non-finite frame data at tau = {}", point.tau)));
        }
        let limit = self.validity_radius(point.tau);
        let r = point.radius();
        if r > limit {
            return Err(Error::Domain {
                radius_at_point: r,
                limit,
            });
        }
        Ok(s)
    }
}

/// A point `(τ, x)` in Fermi normal coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePoint {
    pub tau: f64,
    pub x: Vec3,
}

impl FramePoint {
    pub fn new(tau: f64, x: Vec3) -> Self {
        Self { tau, x }
    }

    /// Euclidean distance from the worldline, `sqrt(δ_ij x^i x^j)`.
    pub fn radius(&self) -> f64 {
        norm(&self.x)
    }
}

/// Metric components of the second-order Fermi expansion at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricComponents {
    pub g_tt: f64,
    pub g_ti: Vec3,
    pub g_ij: Tensor2,
}

impl MetricComponents {
    pub fn minkowski() -> Self {
        let mut g_ij = [[0.0; 3]; 3];
        for (i, row) in g_ij.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self {
            g_tt: -1.0,
            g_ti: [0.0; 3],
            g_ij,
        }
    }

    fn spatial(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.g_ij[i][j])
    }
}

/// Which Riemann symmetry a [`SymmetryViolation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameInvariant {
    TitjSymmetric,
    TjikAntisymmetric,
    IkjlAntisymmetricFirstPair,
    IkjlAntisymmetricSecondPair,
    IkjlPairExchange,
}

impl fmt::Display for FrameInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrameInvariant::TitjSymmetric => "R_titj symmetric under i<->j",
            FrameInvariant::TjikAntisymmetric => "R_tjik antisymmetric under i<->k",
            FrameInvariant::IkjlAntisymmetricFirstPair => "R_ikjl antisymmetric under i<->k",
            FrameInvariant::IkjlAntisymmetricSecondPair => "R_ikjl antisymmetric under j<->l",
            FrameInvariant::IkjlPairExchange => "R_ikjl symmetric under (ik)<->(jl)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryViolation {
    pub invariant: FrameInvariant,
    pub max_violation: f64,
    /// Proper time at which the maximum occurred.
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<SymmetryViolation>,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_violation(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.max_violation)
            .fold(0.0, f64::max)
    }

    /// Invariants whose violation exceeds the tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &SymmetryViolation> {
        self.violations
            .iter()
            .filter(move |v| v.max_violation > self.tolerance)
    }
}

pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;

/// Check the Riemann index symmetries of `frame` at every proper time in
/// `tau_samples`.
pub fn validate_frame(frame: &FrameData, tau_samples: &[f64], tolerance: f64) -> Result<ValidationReport> {
    if tau_samples.is_empty() {
        return Err(Error::Input("validate_frame needs at least one proper-time sample".into()));
    }
    use FrameInvariant::*;
    let kinds = [
        TitjSymmetric,
        TjikAntisymmetric,
        IkjlAntisymmetricFirstPair,
        IkjlAntisymmetricSecondPair,
        IkjlPairExchange,
    ];
    let mut violations: Vec<SymmetryViolation> = kinds
        .iter()
        .map(|&invariant| SymmetryViolation {
            invariant,
            max_violation: 0.0,
            tau: tau_samples[0],
        })
        .collect();

    for &tau in tau_samples {
        let s = frame.sample(tau);
        if !s.all_finite() {
            return Err(Error::Input(format!("non-finite frame data at tau = {tau}")));
        }
        let mut local = [0.0_f64; 5];
        for i in 0..3 {
            for j in 0..3 {
                local[0] = local[0].max((s.riemann_titj[i][j] - s.riemann_titj[j][i]).abs());
                for k in 0..3 {
                    // R_{τjik} = -R_{τjki}
                    local[1] = local[1].max((s.riemann_tjik[i][j][k] + s.riemann_tjik[i][k][j]).abs());
                    for l in 0..3 {
                        let r = s.riemann_ikjl[i][k][j][l];
                        local[2] = local[2].max((r + s.riemann_ikjl[k][i][j][l]).abs());
                        local[3] = local[3].max((r + s.riemann_ikjl[i][k][l][j]).abs());
                        local[4] = local[4].max((r - s.riemann_ikjl[j][l][i][k]).abs());
                    }
                }
            }
        }
        for (v, &m) in violations.iter_mut().zip(local.iter()) {
            if m > v.max_violation {
                v.max_violation = m;
                v.tau = tau;
            }
        }
    }

    let passed = violations.iter().all(|v| v.max_violation <= tolerance);
    Ok(ValidationReport {
        violations,
        tolerance,
        passed,
    })
}

/// Metric of the second-order Fermi expansion at `point`:
///
/// `g_ττ = −(1 + a_i x^i)² − R_{τiτj} x^i x^j`,
/// `g_τi = −(2/3) R_{τjik} x^j x^k`,
/// `g_ij = δ_ij − (1/3) R_{ikjl} x^k x^l`.
pub fn metric_components(frame: &FrameData, point: &FramePoint) -> Result<MetricComponents> {
    let s = frame.checked_sample(point)?;
    let metric = metric_from_sample(&s, &point.x);

    if metric.g_tt >= 0.0 {
        return Err(Error::Geometry(format!(
            "g_tt = {} is not timelike at r = {}",
            metric.g_tt,
            point.radius()
        )));
    }
    if metric.spatial().cholesky().is_none() {
        return Err(Error::Geometry(format!(
            "spatial metric not positive definite at r = {}",
            point.radius()
        )));
    }
    Ok(metric)
}

fn metric_from_sample(s: &FrameSample, x: &Vec3) -> MetricComponents {
    let ax = dot(&s.accel, x);
    let lapse = 1.0 + ax;
    let g_tt = -(lapse * lapse) - quadratic(&s.riemann_titj, x);

    let mut g_ti = [0.0; 3];
    for (i, gi) in g_ti.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                acc += s.riemann_tjik[j][i][k] * x[j] * x[k];
            }
        }
        *gi = -(2.0 / 3.0) * acc;
    }

    let mut g_ij = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    acc += s.riemann_ikjl[i][k][j][l] * x[k] * x[l];
                }
            }
            g_ij[i][j] = if i == j { 1.0 } else { 0.0 } - acc / 3.0;
        }
    }
    MetricComponents { g_tt, g_ti, g_ij }
}

/// Redshift factor `z = |g_ττ − g^{ij} g_τi g_τj|^{1/2}`.
pub fn redshift_exact(metric: &MetricComponents) -> Result<f64> {
    let inv = metric
        .spatial()
        .try_inverse()
        .ok_or_else(|| Error::Geometry("spatial metric block is singular".into()))?;
    let mut shift = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            shift += inv[(i, j)] * metric.g_ti[i] * metric.g_ti[j];
        }
    }
    let z = (metric.g_tt - shift).abs().sqrt();
    if !z.is_finite() {
        return Err(Error::Numeric("non-finite redshift".into()));
    }
    Ok(z)
}

/// Weak-field redshift `1 + a_i x^i + ½ R_{τiτj} x^i x^j`.
pub fn redshift_weakfield(frame: &FrameData, point: &FramePoint) -> Result<f64> {
    let s = frame.checked_sample(point)?;
    Ok(1.0 + dot(&s.accel, &point.x) + 0.5 * quadratic(&s.riemann_titj, &point.x))
}

/// Non-relativistic time-dilation factor
/// `𝒵 = 1 − p²/(2m²) + a_i x^i + ½ R_{τiτj} x^i x^j`.
///
/// Assumes `|p|/m ≪ 1`; this is not checked.
pub fn time_dilation(frame: &FrameData, point: &FramePoint, momentum: &Vec3, mass: f64) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::Input(format!("mass must be positive, got {mass}")));
    }
    if momentum.iter().any(|p| !p.is_finite()) {
        return Err(Error::Input("non-finite momentum".into()));
    }
    let s = frame.checked_sample(point)?;
    let p2 = dot(momentum, momentum);
    Ok(1.0 - p2 / (2.0 * mass * mass)
        + dot(&s.accel, &point.x)
        + 0.5 * quadratic(&s.riemann_titj, &point.x))
}

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn quadratic(t: &Tensor2, x: &Vec3) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += t[i][j] * x[i] * x[j];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes::{desitter_frame, flat_frame, uniform_gravity_frame};

    fn generic_frame() -> FrameData {
        // acceleration plus a tidal tensor with off-diagonal structure
        FrameData::from_fn(|_| {
            let mut s = FrameSample {
                accel: [0.3, -0.2, 0.1],
                ..Default::default()
            };
            s.riemann_titj = [[-0.4, 0.1, 0.0], [0.1, 0.2, 0.05], [0.0, 0.05, 0.3]];
            s
        })
    }

    #[test]
    fn flat_metric_is_minkowski_bitwise() {
        let frame = flat_frame();
        for x in [[0.0, 0.0, 0.0], [1.0, -2.0, 3.0], [1e3, 0.5, -7.0]] {
            let m = metric_components(&frame, &FramePoint::new(2.5, x)).unwrap();
            assert_eq!(m, MetricComponents::minkowski());
            assert_eq!(redshift_exact(&m).unwrap(), 1.0);
            assert_eq!(redshift_weakfield(&frame, &FramePoint::new(2.5, x)).unwrap(), 1.0);
        }
    }

    #[test]
    fn flat_time_dilation_is_kinetic_only() {
        let frame = flat_frame();
        let pt = FramePoint::new(0.0, [0.3, 0.0, 0.0]);
        assert_eq!(time_dilation(&frame, &pt, &[0.0; 3], 2.0).unwrap(), 1.0);
        let z = time_dilation(&frame, &pt, &[0.1, 0.2, 0.0], 2.0).unwrap();
        assert!((z - (1.0 - 0.05 / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn time_dilation_rejects_bad_mass() {
        let frame = flat_frame();
        let pt = FramePoint::new(0.0, [0.0; 3]);
        assert!(matches!(time_dilation(&frame, &pt, &[0.0; 3], 0.0), Err(Error::Input(_))));
        assert!(matches!(time_dilation(&frame, &pt, &[0.0; 3], -1.0), Err(Error::Input(_))));
    }

    #[test]
    fn uniform_gravity_metric_and_redshift() {
        let g = 0.2;
        let frame = uniform_gravity_frame(g);
        let x = 0.25;
        let pt = FramePoint::new(1.0, [x, 0.0, 0.0]);
        let m = metric_components(&frame, &pt).unwrap();
        assert!((m.g_tt + (1.0 + g * x).powi(2)).abs() < 1e-15);
        // agrees with -(1 + 2gx) up to (gx)^2
        assert!((m.g_tt + 1.0 + 2.0 * g * x).abs() <= (g * x).powi(2) + 1e-15);
        let z = redshift_exact(&m).unwrap();
        assert!((z - (1.0 + g * x)).abs() < 1e-15);
        assert!((redshift_weakfield(&frame, &pt).unwrap() - (1.0 + g * x)).abs() < 1e-15);
        let zt = time_dilation(&frame, &pt, &[0.0; 3], 1.0).unwrap();
        assert!((zt - (1.0 + g * x)).abs() < 1e-15);
    }

    #[test]
    fn desitter_metric_matches_closed_form() {
        let h = 0.05;
        let frame = desitter_frame(h).unwrap();
        let x = [1.0, -2.0, 0.5];
        let r2 = dot(&x, &x);
        let pt = FramePoint::new(3.0, x);
        let m = metric_components(&frame, &pt).unwrap();
        assert!((m.g_tt + (1.0 - h * h * r2)).abs() < 1e-14);
        let z = redshift_exact(&m).unwrap();
        assert!((z - (1.0 - h * h * r2).sqrt()).abs() < 1e-14);
        let zw = redshift_weakfield(&frame, &pt).unwrap();
        assert!((z - zw).abs() < (h * h * r2).powi(2));
    }

    #[test]
    fn validity_radius_enforced() {
        let frame = uniform_gravity_frame(1.0);
        assert!((frame.validity_radius(0.0) - 0.1).abs() < 1e-15);
        let err = metric_components(&frame, &FramePoint::new(0.0, [0.2, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        let relaxed = frame.with_validity(Validity::Radius(1.0));
        assert!(metric_components(&relaxed, &FramePoint::new(0.0, [0.2, 0.0, 0.0])).is_ok());
    }

    #[test]
    fn non_positive_spatial_metric_is_a_geometry_error() {
        // spatial curvature only: g_yy = 1 - (x² + z²)/3 turns negative at x = 2
        let frame = FrameData::from_fn(|_| {
            let mut s = FrameSample::default();
            crate::spacetimes::fill_isotropic_spatial_riemann(&mut s.riemann_ikjl, 1.0);
            s
        })
        .with_validity(Validity::Unbounded);
        let err = metric_components(&frame, &FramePoint::new(0.0, [2.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)), "{err:?}");
        // g_tt = -(1 - H²r²) > 0 beyond the horizon
        let frame = desitter_frame(1.0).unwrap().with_validity(Validity::Unbounded);
        let err = metric_components(&frame, &FramePoint::new(0.0, [1.5, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)), "{err:?}");
    }

    #[test]
    fn singular_spatial_block_rejected() {
        let mut m = MetricComponents::minkowski();
        m.g_ij[2][2] = 0.0;
        assert!(matches!(redshift_exact(&m), Err(Error::Geometry(_))));
    }

    #[test]
    fn validate_reports_constructed_asymmetry() {
        let frame = FrameData::from_fn(|_| {
            let mut s = FrameSample::default();
            s.riemann_titj[0][1] = 0.5 + 1e-3;
            s.riemann_titj[1][0] = 0.5;
            s
        });
        let rep = validate_frame(&frame, &[0.0, 1.0], DEFAULT_SYMMETRY_TOL).unwrap();
        assert!(!rep.passed);
        let v = rep.failures().next().unwrap();
        assert_eq!(v.invariant, FrameInvariant::TitjSymmetric);
        assert!((v.max_violation - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn validate_flags_non_finite_and_empty_samples() {
        let frame = FrameData::from_fn(|_| FrameSample {
            accel: [f64::NAN, 0.0, 0.0],
            ..Default::default()
        });
        assert!(matches!(validate_frame(&frame, &[0.0], 1e-12), Err(Error::Input(_))));
        assert!(matches!(validate_frame(&flat_frame(), &[], 1e-12), Err(Error::Input(_))));
    }

    #[test]
    fn redshift_difference_vanishes_at_least_quadratically() {
        let frame = generic_frame().with_validity(Validity::Unbounded);
        let dir = [0.6, 0.48, 0.64];
        let mut pts = Vec::new();
        for k in 0..8 {
            let r = 0.1 * 0.5_f64.powi(k);
            let pt = FramePoint::new(0.0, [dir[0] * r, dir[1] * r, dir[2] * r]);
            let m = metric_components(&frame, &pt).unwrap();
            let d = (redshift_exact(&m).unwrap() - redshift_weakfield(&frame, &pt).unwrap()).abs();
            pts.push((r.ln(), d.ln()));
        }
        let slope = fit_slope(&pts);
        assert!(slope >= 2.0, "slope {slope}");
    }

    #[test]
    fn time_dilation_slopes_match_closed_form() {
        let g = 0.3;
        let frame = uniform_gravity_frame(g).with_validity(Validity::Unbounded);
        let h = 1e-4;
        let z = |x: f64, p: f64| time_dilation(&frame, &FramePoint::new(0.0, [x, 0.0, 0.0]), &[p, 0.0, 0.0], 2.0).unwrap();
        // linear in a·x
        let dzdx = (z(0.1 + h, 0.0) - z(0.1 - h, 0.0)) / (2.0 * h);
        assert!((dzdx - g).abs() < 1e-9);
        // quadratic in p: second derivative is -1/m²
        let d2 = (z(0.0, 0.2 + h) - 2.0 * z(0.0, 0.2) + z(0.0, 0.2 - h)) / (h * h);
        assert!((d2 + 0.25).abs() < 1e-5, "{d2}");
        // linear in the tidal term
        let tidal = FrameData::from_fn(|_| {
            let mut s = FrameSample::default();
            s.riemann_titj[1][1] = -0.5;
            s
        })
        .with_validity(Validity::Unbounded);
        let zt = |c: f64| time_dilation(&tidal, &FramePoint::new(0.0, [0.0, c.sqrt(), 0.0]), &[0.0; 3], 1.0).unwrap();
        let slope = (zt(0.02 + h) - zt(0.02 - h)) / (2.0 * h);
        assert!((slope + 0.25).abs() < 1e-9);
    }

    fn fit_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }
}
