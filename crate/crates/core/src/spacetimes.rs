//! Frame data for the example spacetimes: flat space, a uniform gravitational
//! field and spatially flat FRW universes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{dot, FrameData, FrameSample, Tensor4, Vec3};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scale factor `𝔞(t)` with its first two cosmic-time derivatives.
#[derive(Clone)]
pub struct ScaleFactor {
    value: RealFn,
    d1: RealFn,
    d2: RealFn,
}

impl fmt::Debug for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScaleFactor")
            .field("a(0)", &self.value(0.0))
            .field("da(0)", &self.d1(0.0))
            .field("d2a(0)", &self.d2(0.0))
            .finish()
    }
}

impl ScaleFactor {
    pub fn new<V, D1, D2>(value: V, d1: D1, d2: D2) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    /// `𝔞 ≡ 1`.
    pub fn static_universe() -> Self {
        Self::new(|_| 1.0, |_| 0.0, |_| 0.0)
    }

    /// `𝔞(t) = e^{ℍt}`.
    pub fn de_sitter(hubble: f64) -> Self {
        Self::new(
            move |t| (hubble * t).exp(),
            move |t| hubble * (hubble * t).exp(),
            move |t| hubble * hubble * (hubble * t).exp(),
        )
    }

    /// `𝔞(t) = (1 + t/t0)^p`, defined for `t > −t0`.
    pub fn power_law(t0: f64, exponent: f64) -> Self {
        let p = exponent;
        Self::new(
            move |t| (1.0 + t / t0).powf(p),
            move |t| p / t0 * (1.0 + t / t0).powf(p - 1.0),
            move |t| p * (p - 1.0) / (t0 * t0) * (1.0 + t / t0).powf(p - 2.0),
        )
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn d1(&self, t: f64) -> f64 {
        (self.d1)(t)
    }

    pub fn d2(&self, t: f64) -> f64 {
        (self.d2)(t)
    }

    /// `𝔞̇/𝔞`
    pub fn hubble_rate(&self, t: f64) -> f64 {
        self.d1(t) / self.value(t)
    }

    /// `𝔞̈/𝔞`
    pub fn acceleration_ratio(&self, t: f64) -> f64 {
        self.d2(t) / self.value(t)
    }

    /// Checks positivity and derivative consistency at the given times using
    /// central differences of step `h`. Returns the largest relative mismatch
    /// seen for either derivative.
    pub fn check_consistency(&self, times: &[f64], h: f64) -> Result<f64> {
        let mut worst = 0.0_f64;
        for &t in times {
            let a = self.value(t);
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Input(format!("scale factor not positive at t = {t}: {a}")));
            }
            let fd1 = (self.value(t + h) - self.value(t - h)) / (2.0 * h);
            let fd2 = (self.d1(t + h) - self.d1(t - h)) / (2.0 * h);
            let scale = a.max(self.d1(t).abs()).max(self.d2(t).abs());
            worst = worst
                .max((fd1 - self.d1(t)).abs() / scale)
                .max((fd2 - self.d2(t)).abs() / scale);
        }
        Ok(worst)
    }
}

/// Identically zero acceleration and curvature.
pub fn flat_frame() -> FrameData {
    FrameData::from_fn(|_| FrameSample::default())
}

/// Laboratory at rest in a uniform field: `a = (g, 0, 0)`, no curvature.
pub fn uniform_gravity_frame(g: f64) -> FrameData {
    FrameData::from_fn(move |_| FrameSample {
        accel: [g, 0.0, 0.0],
        ..Default::default()
    })
}

/// Comoving geodesic observer in a spatially flat FRW universe.
///
/// `R_{τiτi} = −𝔞̈/𝔞` and `R_{ijij} = 𝔞̇²/𝔞²` for `i ≠ j`, evaluated at cosmic
/// time `t = τ`. Where the scale factor stops being positive the components
/// come back as NaN, which downstream checks reject as invalid input.
pub fn frw_frame(sf: ScaleFactor) -> Result<FrameData> {
    let a0 = sf.value(0.0);
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(Error::Input(format!("scale factor must be positive, a(0) = {a0}")));
    }
    Ok(FrameData::from_fn(move |tau| {
        let a = sf.value(tau);
        if !(a > 0.0) {
            return FrameSample {
                accel: [f64::NAN; 3],
                ..Default::default()
            };
        }
        let tidal = -sf.d2(tau) / a;
        let rate = sf.d1(tau) / a;
        let mut s = FrameSample::default();
        for i in 0..3 {
            s.riemann_titj[i][i] = tidal;
        }
        fill_isotropic_spatial_riemann(&mut s.riemann_ikjl, rate * rate);
        s
    }))
}

/// de Sitter expansion `𝔞(t) = e^{ℍt}`.
pub fn desitter_frame(hubble: f64) -> Result<FrameData> {
    if !(hubble > 0.0) || !hubble.is_finite() {
        return Err(Error::Input(format!("Hubble parameter must be positive, got {hubble}")));
    }
    // constant in τ, so skip the exponentials
    let h2 = hubble * hubble;
    let mut s = FrameSample::default();
    for i in 0..3 {
        s.riemann_titj[i][i] = -h2;
    }
    fill_isotropic_spatial_riemann(&mut s.riemann_ikjl, h2);
    Ok(FrameData::from_fn(move |_| s))
}

/// `ℍ = sqrt(Λ/3)` for a cosmological-constant-dominated universe.
pub fn hubble_from_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Input(format!("cosmological constant must be positive, got {lambda}")));
    }
    Ok((lambda / 3.0).sqrt())
}

/// Spatial Riemann tensor of constant sectional curvature `k`:
/// `R_{ikjl} = k (δ_ij δ_kl − δ_il δ_kj)`.
pub(crate) fn fill_isotropic_spatial_riemann(t: &mut Tensor4, k: f64) {
    for i in 0..3 {
        for kk in 0..3 {
            if i == kk {
                continue;
            }
            t[i][kk][i][kk] = k;
            t[i][kk][kk][i] = -k;
        }
    }
}

/// Map from Fermi normal coordinates to FRW coordinates around the comoving
/// worldline, to `O(r⁴)`. Scale-factor quantities are taken at `t = τ`.
#[derive(Clone, Debug)]
pub struct FrwFermiMap {
    sf: ScaleFactor,
}

impl FrwFermiMap {
    /// `t = τ − (𝔞̇/2𝔞) r²`
    pub fn cosmic_time(&self, tau: f64, x: &Vec3) -> f64 {
        tau - 0.5 * self.sf.hubble_rate(tau) * dot(x, x)
    }

    /// `X^i = (x^i/𝔞)(1 + (𝔞̇²/3𝔞²) r²)`
    pub fn comoving_position(&self, tau: f64, x: &Vec3) -> Vec3 {
        let a = self.sf.value(tau);
        let rate = self.sf.hubble_rate(tau);
        let factor = (1.0 + rate * rate * dot(x, x) / 3.0) / a;
        [x[0] * factor, x[1] * factor, x[2] * factor]
    }
}

pub fn frw_fermi_map(sf: ScaleFactor) -> FrwFermiMap {
    FrwFermiMap { sf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{metric_components, redshift_weakfield, validate_frame, FramePoint, MetricComponents};

    const TAUS: [f64; 5] = [0.0, 0.3, 1.0, 2.5, 7.0];

    #[test]
    fn catalog_frames_have_exact_symmetries() {
        let frames = [
            flat_frame(),
            uniform_gravity_frame(9.8),
            desitter_frame(0.3).unwrap(),
            frw_frame(ScaleFactor::de_sitter(0.3)).unwrap(),
            frw_frame(ScaleFactor::power_law(1.0, 2.0 / 3.0)).unwrap(),
        ];
        for f in &frames {
            let rep = validate_frame(f, &TAUS, 1e-12).unwrap();
            assert!(rep.passed);
            assert_eq!(rep.max_violation(), 0.0);
        }
    }

    #[test]
    fn flat_and_zero_gravity_agree() {
        let pt = FramePoint::new(1.0, [0.2, 0.1, -0.3]);
        let m0 = metric_components(&uniform_gravity_frame(0.0), &pt).unwrap();
        assert_eq!(m0, MetricComponents::minkowski());
        assert_eq!(redshift_weakfield(&flat_frame(), &pt).unwrap(), 1.0);
    }

    #[test]
    fn static_universe_has_no_curvature() {
        let f = frw_frame(ScaleFactor::static_universe()).unwrap();
        for &t in &TAUS {
            assert_eq!(f.sample(t), FrameSample::default());
        }
    }

    #[test]
    fn desitter_components() {
        let h = 0.7;
        let f = desitter_frame(h).unwrap();
        let s = f.sample(2.0);
        let trace: f64 = (0..3).map(|i| s.riemann_titj[i][i]).sum();
        assert!((trace + 3.0 * h * h).abs() < 1e-15);
        assert_eq!(s.riemann_ikjl[0][1][0][1], h * h);
        assert_eq!(s.riemann_ikjl[1][2][1][2], h * h);
        assert_eq!(s.riemann_ikjl[0][2][2][0], -h * h);
        assert_eq!(s.riemann_tjik, [[[0.0; 3]; 3]; 3]);
        assert_eq!(s.accel, [0.0; 3]);
    }

    #[test]
    fn desitter_builder_matches_generic_frw() {
        let h = 0.4;
        let direct = desitter_frame(h).unwrap();
        let generic = frw_frame(ScaleFactor::de_sitter(h)).unwrap();
        for &t in &[0.0, 0.37, 1.9, 4.2] {
            let (a, b) = (direct.sample(t), generic.sample(t));
            for i in 0..3 {
                for j in 0..3 {
                    assert!((a.riemann_titj[i][j] - b.riemann_titj[i][j]).abs() < 1e-14);
                    for k in 0..3 {
                        for l in 0..3 {
                            assert!((a.riemann_ikjl[i][j][k][l] - b.riemann_ikjl[i][j][k][l]).abs() < 1e-14);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tiny_hubble_recovers_flat() {
        let f = desitter_frame(1e-200).unwrap();
        assert_eq!(f.sample(0.0), FrameSample::default());
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(matches!(desitter_frame(0.0), Err(Error::Input(_))));
        assert!(matches!(desitter_frame(-1.0), Err(Error::Input(_))));
        let bad = ScaleFactor::new(|t| -1.0 - t, |_| -1.0, |_| 0.0);
        assert!(matches!(frw_frame(bad), Err(Error::Input(_))));
        assert!(matches!(hubble_from_lambda(0.0), Err(Error::Input(_))));
    }

    #[test]
    fn positivity_loss_after_start_surfaces_as_input_error() {
        let sf = ScaleFactor::new(|t| 1.0 - t, |_| -1.0, |_| 0.0);
        let f = frw_frame(sf).unwrap();
        assert!(matches!(validate_frame(&f, &[0.0, 2.0], 1e-12), Err(Error::Input(_))));
        let pt = FramePoint::new(2.0, [0.0; 3]);
        assert!(matches!(metric_components(&f, &pt), Err(Error::Input(_))));
    }

    #[test]
    fn lambda_to_hubble() {
        let h = hubble_from_lambda(0.12).unwrap();
        assert!((h * h - 0.04).abs() < 1e-16);
    }

    #[test]
    fn scale_factor_derivatives_are_consistent() {
        for sf in [
            ScaleFactor::de_sitter(0.5),
            ScaleFactor::power_law(2.0, 0.5),
            ScaleFactor::power_law(1.0, 2.0 / 3.0),
        ] {
            let e1 = sf.check_consistency(&[0.0, 0.5, 1.5], 1e-3).unwrap();
            let e2 = sf.check_consistency(&[0.0, 0.5, 1.5], 5e-4).unwrap();
            assert!(e1 < 1e-5, "{e1}");
            // O(h²): halving h quarters the mismatch
            assert!(e2 < e1 / 3.0, "{e1} {e2}");
        }
    }

    #[test]
    fn spatial_metric_matches_isotropic_closed_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sf = ScaleFactor::power_law(1.0, 2.0 / 3.0);
        let f = frw_frame(sf.clone()).unwrap();
        for _ in 0..50 {
            let tau: f64 = rng.random_range(0.0..3.0);
            let x: Vec3 = [
                rng.random_range(-0.1..0.1),
                rng.random_range(-0.1..0.1),
                rng.random_range(-0.1..0.1),
            ];
            let m = metric_components(&f, &FramePoint::new(tau, x)).unwrap();
            let k = sf.hubble_rate(tau).powi(2);
            let r2 = dot(&x, &x);
            for i in 0..3 {
                for j in 0..3 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let expected = delta - k * (r2 * delta - x[i] * x[j]) / 3.0;
                    assert!((m.g_ij[i][j] - expected).abs() < 1e-15);
                }
            }
            let expected_tt = -(1.0 - sf.acceleration_ratio(tau) * r2);
            assert!((m.g_tt - expected_tt).abs() < 1e-15);
        }
    }

    #[test]
    fn frw_map_identities() {
        let map = frw_fermi_map(ScaleFactor::de_sitter(0.2));
        assert_eq!(map.cosmic_time(1.5, &[0.0; 3]), 1.5);
        assert_eq!(map.comoving_position(1.5, &[0.0; 3]), [0.0; 3]);

        let stat = frw_fermi_map(ScaleFactor::static_universe());
        let x = [0.3, -0.1, 0.2];
        assert_eq!(stat.cosmic_time(2.0, &x), 2.0);
        assert_eq!(stat.comoving_position(2.0, &x), x);

        let h = 0.2;
        let (tau, x) = (1.5, [0.01, 0.02, -0.005]);
        let r2 = dot(&x, &x);
        assert!((map.cosmic_time(tau, &x) - (tau - 0.5 * h * r2)).abs() < 1e-15);
        let big_x = map.comoving_position(tau, &x);
        for i in 0..3 {
            let expected = x[i] * (-h * tau).exp() * (1.0 + h * h * r2 / 3.0);
            assert!((big_x[i] - expected).abs() < 1e-16);
        }
    }
}
