//! Acceptance checks behind `curvtherm verify`.
//!
//! Each criterion measures one quantity against a fixed tolerance and a
//! runtime budget. Failures are results, never errors: a criterion that hits
//! a library error reports it as its detail and fails.

use std::f64::consts::PI;
use std::time::Instant;

use curvtherm::frame::{metric_components, redshift_exact, redshift_weakfield, time_dilation, FramePoint, Vec3};
use curvtherm::quantum::{
    propagator, qho_hamiltonian, transition_probability_formula, x_squared_matrix, CMatrix,
};
use curvtherm::spacetimes::{desitter_frame, flat_frame, frw_frame};
use curvtherm::tpm::{crooks_check, dissipated_work_thermal, entropy_production_two_level, jarzynski_average, TpmProtocol};
use curvtherm::{FrameData, FrameSample, HermitianOperator, MetricComponents, ScaleFactor, Validity, WorkDistribution};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{FrameRow, GeometryConfig, ScenarioConfig, ScenarioKind, SystemConfig};
use crate::runners::run;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    /// Every criterion, without step-halving order studies.
    Fast,
    /// Everything.
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Noteworthy observations that do not affect `passed`.
    pub findings: Vec<String>,
    pub elapsed_seconds: f64,
    pub limit_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {} {} ({:.2} s / {:.0} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_seconds,
            self.limit_seconds,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub level: VerifyLevel,
    pub passed: bool,
    pub elapsed_seconds: f64,
    pub criteria: Vec<CriterionResult>,
}

impl VerifySummary {
    pub fn failed_ids(&self) -> Vec<&'static str> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

pub const CRITERIA: [&str; 8] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"];

/// Run every criterion.
pub fn verify(level: VerifyLevel) -> VerifySummary {
    let start = Instant::now();
    let ensemble = Ensemble::run();
    let criteria = vec![
        a1_crooks(&ensemble),
        a2_jarzynski(&ensemble),
        timed("A3", "two-level entropy production", 5.0, a3_entropy_production),
        timed("A4", "effective frequency", 5.0, a4_effective_frequency),
        timed("A5", "perturbation theory vs propagator", 60.0, a5_perturbative),
        timed("A6", "propagator quality", 30.0, |f| a6_propagator(level, f)),
        timed("A7", "frame geometry", 5.0, a7_geometry),
        timed("A8", "scale estimate", 30.0, a8_scale_estimate),
    ];
    VerifySummary {
        level,
        passed: criteria.iter().all(|c| c.passed),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        criteria,
    }
}

/// Run one criterion by id (`"A1"` … `"A8"`).
pub fn verify_one(id: &str, level: VerifyLevel) -> Option<CriterionResult> {
    Some(match id {
        "A1" => a1_crooks(&Ensemble::run()),
        "A2" => a2_jarzynski(&Ensemble::run()),
        "A3" => timed("A3", "two-level entropy production", 5.0, a3_entropy_production),
        "A4" => timed("A4", "effective frequency", 5.0, a4_effective_frequency),
        "A5" => timed("A5", "perturbation theory vs propagator", 60.0, a5_perturbative),
        "A6" => timed("A6", "propagator quality", 30.0, |f| a6_propagator(level, f)),
        "A7" => timed("A7", "frame geometry", 5.0, a7_geometry),
        "A8" => timed("A8", "scale estimate", 30.0, a8_scale_estimate),
        _ => return None,
    })
}

type Outcome = Result<(bool, String), String>;

fn timed<F>(id: &'static str, name: &'static str, limit: f64, f: F) -> CriterionResult
where
    F: FnOnce(&mut Vec<String>) -> Outcome,
{
    let start = Instant::now();
    let mut findings = Vec::new();
    let outcome = f(&mut findings);
    let elapsed = start.elapsed().as_secs_f64();
    finalize(id, name, limit, elapsed, outcome, findings)
}

fn finalize(
    id: &'static str,
    name: &'static str,
    limit: f64,
    elapsed: f64,
    outcome: Outcome,
    findings: Vec<String>,
) -> CriterionResult {
    let (mut passed, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        passed = false;
        detail.push_str(&format!("; runtime {elapsed:.1} s over budget"));
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        findings,
        elapsed_seconds: elapsed,
        limit_seconds: limit,
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- A1, A2

const ENSEMBLE_SIZE: usize = 200;
const ENSEMBLE_SEED: u64 = 0x5eed_c0ffee;

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0) * scale);
    (&a + a.transpose()) * 0.5
}

/// `ln Σ e^{−βE}` straight from a real symmetric eigensolve.
fn log_partition_direct(h: &DMatrix<f64>, beta: f64) -> f64 {
    let e = SymmetricEigen::new(h.clone()).eigenvalues;
    let e0 = e.min();
    -beta * e0 + e.iter().map(|v| (-beta * (v - e0)).exp()).sum::<f64>().ln()
}

type CrooksFn = fn(&WorkDistribution, &WorkDistribution, f64, f64) -> curvtherm::Result<f64>;

struct Ensemble {
    crooks: Result<Vec<f64>, String>,
    jarzynski: Result<Vec<f64>, String>,
    elapsed: f64,
}

impl Ensemble {
    /// Random real-symmetric driven protocols `H(τ) = A + cos(ντ)B + τC` on
    /// `[0, 1]`.
    fn run() -> Self {
        Self::run_with(crooks_check)
    }

    fn run_with(crooks_fn: CrooksFn) -> Self {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED);
        let mut crooks = Vec::with_capacity(ENSEMBLE_SIZE);
        let mut jarzynski = Vec::with_capacity(ENSEMBLE_SIZE);
        let mut failure = None;
        for k in 0..ENSEMBLE_SIZE {
            let dim = [2, 4, 8][k % 3];
            let beta = rng.random_range(0.1..=5.0);
            let a = random_symmetric(&mut rng, dim, 1.0);
            let b = random_symmetric(&mut rng, dim, 0.5);
            let c = random_symmetric(&mut rng, dim, 0.5);
            let nu = rng.random_range(0.5..3.0);
            let real_path = |t: f64| &a + &b * (nu * t).cos() + &c * t;
            let outcome = (|| -> curvtherm::Result<(f64, f64)> {
                let u = propagator(|t| HermitianOperator::from_real(real_path(t)), 0.0, 1.0, 64)?;
                let h0 = HermitianOperator::from_real(real_path(0.0))?;
                let h1 = HermitianOperator::from_real(real_path(1.0))?;
                let proto = TpmProtocol::new(&h0, &h1, &u, beta)?;
                let tol = proto.default_merge_tol();
                let fwd = proto.forward(tol)?;
                let rev = proto.reverse(tol)?;
                let crooks = crooks_fn(&fwd, &rev, beta, proto.delta_f())?;
                let ratio =
                    (log_partition_direct(&real_path(1.0), beta) - log_partition_direct(&real_path(0.0), beta)).exp();
                Ok((crooks, (jarzynski_average(&fwd, beta) - ratio).abs()))
            })();
            match outcome {
                Ok((c, j)) => {
                    crooks.push(c);
                    jarzynski.push(j);
                }
                Err(e) => {
                    failure = Some(format!("protocol {k}: {e}"));
                    break;
                }
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        match failure {
            Some(e) => Self {
                crooks: Err(e.clone()),
                jarzynski: Err(e),
                elapsed,
            },
            None => Self {
                crooks: Ok(crooks),
                jarzynski: Ok(jarzynski),
                elapsed,
            },
        }
    }
}

fn worst(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

fn a1_crooks(ens: &Ensemble) -> CriterionResult {
    let outcome = ens.crooks.clone().map(|r| {
        let m = worst(&r);
        (m < 1e-8, format!("max Crooks residual {m:.3e} over {} protocols (tol 1e-8)", r.len()))
    });
    finalize("A1", "Crooks identity", 30.0, ens.elapsed, outcome, Vec::new())
}

fn a2_jarzynski(ens: &Ensemble) -> CriterionResult {
    let outcome = ens.jarzynski.clone().map(|r| {
        let m = worst(&r);
        (m < 1e-10, format!("max |<e^-bW> - Z_T/Z_0| {m:.3e} over {} protocols (tol 1e-10)", r.len()))
    });
    finalize("A2", "Jarzynski identity", 30.0, ens.elapsed, outcome, Vec::new())
}

// ---------------------------------------------------------------- A3

fn a3_entropy_production(findings: &mut Vec<String>) -> Outcome {
    let mut zero_ok = true;
    let mut sign_failures = 0usize;
    let mut mismatches = 0usize;
    let mut worst_mismatch = 0.0f64;
    let mut oracle_sign_agree = 0usize;
    let mut off_unity = 0usize;
    for i in 0..=20 {
        let z = 0.5 + i as f64 / 20.0;
        for j in 0..=20 {
            let be = 0.1 + 9.9 * j as f64 / 20.0;
            let sigma = entropy_production_two_level(z, be).map_err(err)?;
            let h0 = HermitianOperator::diagonal(&[0.0, be]);
            let (_, w_diss) = dissipated_work_thermal(&h0, &h0.scale(z), 1.0).map_err(err)?;
            let gap = (sigma - w_diss).abs();
            if gap > 1e-10 {
                mismatches += 1;
                worst_mismatch = worst_mismatch.max(gap);
            }
            if z == 1.0 {
                zero_ok &= sigma == 0.0;
                continue;
            }
            off_unity += 1;
            if sigma == 0.0 || (sigma > 0.0) != (z > 1.0) {
                sign_failures += 1;
            }
            if w_diss != 0.0 && (w_diss > 0.0) == (z > 1.0) {
                oracle_sign_agree += 1;
            }
        }
    }
    if mismatches > 0 {
        findings.push(format!(
            "closed form differs from the thermal-endpoint value b(<W> - dF) at {mismatches}/441 grid points \
             (max {worst_mismatch:.3e}); the thermal value has sign(Z-1) at {oracle_sign_agree}/{off_unity} points"
        ));
    }
    Ok((
        zero_ok && sign_failures == 0,
        format!(
            "Sigma(1, .) == 0: {zero_ok}; sign(Sigma) != sign(Z-1) at {sign_failures}/{off_unity} points; \
             {mismatches} closed-form/thermal mismatches > 1e-10 (finding)"
        ),
    ))
}

// ---------------------------------------------------------------- A4

fn tidal_oscillator(mass: f64, omega0: f64, dim: usize, frame: &FrameData, tau: f64) -> curvtherm::Result<HermitianOperator> {
    let h0 = qho_hamiltonian(mass, omega0, dim)?;
    let x2 = x_squared_matrix(mass, omega0, dim)?;
    h0.add_scaled(&x2, 0.5 * mass * frame.riemann_titj(tau)[0][0])
}

fn a4_effective_frequency(_: &mut Vec<String>) -> Outcome {
    let omega0 = 1.0;
    let mut worst_dev = 0.0f64;
    for ratio in [0.1, 0.3, 0.5] {
        let hubble = ratio * omega0;
        let frame = desitter_frame(hubble).map_err(err)?;
        let h = tidal_oscillator(1.0, omega0, 60, &frame, 0.0).map_err(err)?;
        let expected = (omega0 * omega0 - hubble * hubble).sqrt();
        let dev = h.eigenbasis().spacings()[..30]
            .iter()
            .map(|s| (s - expected).abs())
            .fold(0.0, f64::max);
        worst_dev = worst_dev.max(dev);
    }
    Ok((
        worst_dev < 1e-10 * omega0,
        format!("max |spacing - sqrt(w0^2 - H^2)| {worst_dev:.3e} over 30 spacings, H/w0 in {{0.1, 0.3, 0.5}}"),
    ))
}

// ---------------------------------------------------------------- A5

fn a5_perturbative(_: &mut Vec<String>) -> Outcome {
    let (mass, omega0, dim) = (1.0, 1.0, 40);
    let hubble = 0.01 * omega0;
    let frame = desitter_frame(hubble).map_err(err)?;
    let h = tidal_oscillator(mass, omega0, dim, &frame, 0.0).map_err(err)?;

    let mut times: Vec<f64> = (0..50).map(|k| 10.0 * k as f64 / 49.0 / omega0).collect();
    let peaks: Vec<f64> = (0..)
        .map(|k| (2 * k + 1) as f64 * PI / 2.0 / omega0)
        .take_while(|&t| omega0 * t <= 10.0)
        .collect();
    times.extend(&peaks);

    let amplitude = hubble.powi(4) / (8.0 * omega0.powi(4));
    let mut worst_rel = 0.0f64;
    let mut checked = 0usize;
    let mut worst_odd = 0.0f64;
    for &t in &times {
        let u = if t == 0.0 {
            curvtherm::UnitaryOperator::identity(dim)
        } else {
            propagator(|_| Ok(h.clone()), 0.0, t, 8).map_err(err)?
        };
        let odd = (1..dim).step_by(2).map(|n| u.matrix()[(n, 0)].norm_sqr()).fold(0.0, f64::max);
        worst_odd = worst_odd.max(odd);
        let formula = transition_probability_formula(mass, omega0, hubble, 2, 0, t).map_err(err)?;
        // peaks: analytic maxima plus samples in the upper half of each lobe
        if formula >= 0.5 * amplitude {
            let exact = u.matrix()[(2, 0)].norm_sqr();
            worst_rel = worst_rel.max((exact - formula).abs() / formula);
            checked += 1;
        }
    }
    Ok((
        worst_rel < 0.05 && worst_odd < 1e-12,
        format!(
            "max relative |p20 - formula| {worst_rel:.3e} at {checked} peak points (tol 5%); \
             max odd-n probability {worst_odd:.3e} (tol 1e-12)"
        ),
    ))
}

// ---------------------------------------------------------------- A6

fn catalog_configs() -> Vec<ScenarioConfig> {
    let base = |scenario, system, geometry| ScenarioConfig {
        scenario,
        beta: 1.0,
        system,
        geometry,
        position: [1.0, 0.0, 0.0],
        momentum: [0.0, 0.0, 0.0],
        duration: 10.0,
        steps: 200,
        merge_tol: None,
        tolerances: Default::default(),
        output_path: None,
        seed: None,
        samples: None,
        curves: Default::default(),
    };
    let osc = SystemConfig::Oscillator {
        mass: 1.0,
        omega0: 1.0,
        dim: 40,
    };
    let two = SystemConfig::TwoLevel { eps: 1.0, mass: 1.0 };
    let ds = desitter_frame(0.1).expect("valid hubble").sample(0.0);
    let ds_rows = vec![
        FrameRow {
            tau: 0.0,
            accel: ds.accel,
            riemann_titj: ds.riemann_titj,
            riemann_tjik: ds.riemann_tjik,
            riemann_ikjl: ds.riemann_ikjl,
        },
        FrameRow {
            tau: 10.0,
            accel: ds.accel,
            riemann_titj: ds.riemann_titj,
            riemann_tjik: ds.riemann_tjik,
            riemann_ikjl: ds.riemann_ikjl,
        },
    ];
    vec![
        base(ScenarioKind::Newtonian, two.clone(), GeometryConfig::UniformGravity { g: 0.01 }),
        base(ScenarioKind::Desitter, osc.clone(), GeometryConfig::DeSitter { hubble: 0.1 }),
        base(ScenarioKind::Custom, osc, GeometryConfig::Tables { samples: ds_rows }),
        base(ScenarioKind::Custom, two, GeometryConfig::UniformGravity { g: 0.01 }),
    ]
}

/// Step-halving errors against a fine reference for one path.
fn convergence_order<F>(path: F, t_end: f64) -> curvtherm::Result<f64>
where
    F: Fn(f64) -> curvtherm::Result<HermitianOperator>,
{
    let reference = propagator(&path, 0.0, t_end, 4096)?;
    let steps = [16usize, 32, 64, 128];
    let mut errors = Vec::new();
    for &n in &steps {
        let u = propagator(&path, 0.0, t_end, n)?;
        errors.push(max_abs_diff(u.matrix(), reference.matrix()));
    }
    let ns: Vec<f64> = steps.iter().map(|&n| n as f64).collect();
    Ok(-log_log_slope(&ns, &errors))
}

fn a6_propagator(level: VerifyLevel, findings: &mut Vec<String>) -> Outcome {
    let mut worst_unitarity = 0.0f64;
    for cfg in catalog_configs() {
        let art = run(&cfg).map_err(|e| format!("{} run: {e}", cfg.scenario.name()))?;
        worst_unitarity = worst_unitarity.max(art.diagnostics.unitarity_error);
    }
    let mut passed = worst_unitarity < 1e-9;
    let mut detail = format!("max unitarity error {worst_unitarity:.3e} over catalog runs (tol 1e-9)");

    if level == VerifyLevel::Full {
        // expanding power-law universe: time-dependent tidal term
        let frame = frw_frame(ScaleFactor::power_law(2.0, 2.0 / 3.0)).map_err(err)?;
        let frw_order = convergence_order(|t| tidal_oscillator(1.0, 1.0, 20, &frame, t), 4.0).map_err(err)?;

        let mut rng = ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED ^ 6);
        let a = random_symmetric(&mut rng, 4, 1.0);
        let b = random_symmetric(&mut rng, 4, 1.0);
        let driven_order =
            convergence_order(|t| HermitianOperator::from_real(&a + &b * (2.0 * t).sin()), 2.0).map_err(err)?;

        let ok = |p: f64| (p - 2.0).abs() <= 0.2;
        passed &= ok(frw_order) && ok(driven_order);
        detail.push_str(&format!(
            "; self-convergence order {frw_order:.3} (FRW oscillator), {driven_order:.3} (driven 4-level), target 2.0 +- 0.2"
        ));
    } else {
        findings.push("order study skipped at fast level".into());
    }
    Ok((passed, detail))
}

// ---------------------------------------------------------------- A7

fn a7_geometry(_: &mut Vec<String>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED ^ 7);
    let unit = |rng: &mut ChaCha8Rng| -> Vec3 {
        let v: Vec3 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };

    // flat space
    let flat = flat_frame().with_validity(Validity::Unbounded);
    let mut flat_ok = true;
    for _ in 0..20 {
        let r = rng.random_range(0.0..100.0);
        let n = unit(&mut rng);
        let p = FramePoint::new(rng.random_range(-10.0..10.0), [n[0] * r, n[1] * r, n[2] * r]);
        let g = metric_components(&flat, &p).map_err(err)?;
        flat_ok &= g == MetricComponents::minkowski();
        flat_ok &= redshift_exact(&g).map_err(err)? == 1.0;
        let mom: Vec3 = [rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)];
        let m = rng.random_range(0.5..5.0);
        let p2 = mom[0] * mom[0] + mom[1] * mom[1] + mom[2] * mom[2];
        flat_ok &= time_dilation(&flat, &p, &mom, m).map_err(err)? == 1.0 - p2 / (2.0 * m * m);
    }

    // de Sitter g_ττ
    let mut ds_worst = 0.0f64;
    for hubble in [1e-3, 0.1, 0.7, 2.0] {
        let frame = desitter_frame(hubble).map_err(err)?;
        let rmax = frame.validity_radius(0.0);
        for _ in 0..50 {
            let r = rmax * rng.random_range(0.0..1.0);
            let n = unit(&mut rng);
            let p = FramePoint::new(rng.random_range(0.0..10.0), [n[0] * r, n[1] * r, n[2] * r]);
            let g = metric_components(&frame, &p).map_err(err)?;
            ds_worst = ds_worst.max((g.g_tt + (1.0 - hubble * hubble * r * r)).abs());
        }
    }

    // weak-field redshift against the exact one, accelerated observer in de Sitter
    let mut combined: FrameSample = desitter_frame(0.5).map_err(err)?.sample(0.0);
    combined.accel = [0.3, -0.2, 0.1];
    let frame = FrameData::from_fn(move |_| combined).with_validity(Validity::Unbounded);
    let dir = unit(&mut rng);
    let radii: Vec<f64> = (0..6).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    let mut diffs = Vec::new();
    for &r in &radii {
        let p = FramePoint::new(0.0, [dir[0] * r, dir[1] * r, dir[2] * r]);
        let exact = redshift_exact(&metric_components(&frame, &p).map_err(err)?).map_err(err)?;
        let weak = redshift_weakfield(&frame, &p).map_err(err)?;
        diffs.push((exact - weak).abs());
    }
    let order = log_log_slope(&radii, &diffs);

    Ok((
        flat_ok && ds_worst <= 1e-14 && order >= 2.0,
        format!(
            "flat frame exact: {flat_ok}; de Sitter max |g_tt + 1 - H^2 r^2| {ds_worst:.3e} (tol 1e-14); \
             weak-field redshift error order {order:.3} (need >= 2)"
        ),
    ))
}

// ---------------------------------------------------------------- A8

fn a8_scale_estimate(findings: &mut Vec<String>) -> Outcome {
    let (hubble, omega0): (f64, f64) = (1e-61, 1e-30);
    let ratio = hubble / omega0;
    let ratio_ok = (ratio / 1e-31 - 1.0).abs() < 1e-12;

    // prefactor at the first peak, sin²(ω₀t) = 1
    let peak = |h: f64, w: f64| transition_probability_formula(1.0, w, h, 2, 0, PI / (2.0 * w));
    let planck = peak(hubble, omega0).map_err(err)?;
    let planck_ok = planck > 0.0 && ((planck / (ratio.powi(4) / 8.0)) - 1.0).abs() < 1e-9;

    let sweep: Vec<f64> = (0..9).map(|k| 10f64.powf(-3.0 + 2.0 * k as f64 / 8.0)).collect();
    let probs: Vec<f64> = sweep.iter().map(|&h| peak(h, 1.0)).collect::<curvtherm::Result<_>>().map_err(err)?;
    let slope = log_log_slope(&sweep, &probs);

    // the same fit on the exact propagator, for information
    let (dim, t) = (20, PI / 2.0);
    let mut exact = Vec::new();
    for &h in &sweep {
        let frame = desitter_frame(h).map_err(err)?;
        let ham = tidal_oscillator(1.0, 1.0, dim, &frame, 0.0).map_err(err)?;
        let u = propagator(|_| Ok(ham.clone()), 0.0, t, 1).map_err(err)?;
        exact.push(u.matrix()[(2, 0)].norm_sqr());
    }
    findings.push(format!(
        "exact-propagator p20 at w0 t = pi/2 scales with exponent {:.4}",
        log_log_slope(&sweep, &exact)
    ));
    // keep the Planck-scale point on record
    findings.push(format!("peak p20 at H = 1e-61, w0 = 1e-30: {planck:.3e}"));

    Ok((
        ratio_ok && planck_ok && (slope - 4.0).abs() <= 0.01,
        format!("H/w0 = {ratio:.3e}; prefactor log-log exponent {slope:.4} over H/w0 in [1e-3, 1e-1] (target 4.00 +- 0.01)"),
    ))
}
