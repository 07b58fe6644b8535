//! Scenario pipelines.
//!
//! Every runner ends in the same two-point-measurement step: build initial and
//! final measurement Hamiltonians plus a propagator, enumerate the forward and
//! reverse work distributions and summarise them in a [`ProtocolReport`].

use curvtherm::frame::{time_dilation, validate_frame, FramePoint, Vec3};
use curvtherm::quantum::{
    perturbative_amplitude, propagator, qho_hamiltonian, thermal_state, top_population, two_level_hamiltonian,
    x_squared_matrix, CMatrix,
};
use curvtherm::spacetimes::{desitter_frame, flat_frame, uniform_gravity_frame};
use curvtherm::tpm::{dissipated_work_thermal, entropy_production_two_level, TpmProtocol};
use curvtherm::{Error as CoreError, FrameData, HermitianOperator, ProtocolReport, UnitaryOperator, WorkDistribution};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::{GeometryConfig, ScenarioConfig, ScenarioKind, SystemConfig};
use crate::error::{ScenarioError, ScenarioResult};
use crate::sampling::{sample_work, SampleEstimate};
use crate::tables::tabulated_frame;

/// Sampled series sharing one abscissa.
#[derive(Clone, Debug, PartialEq)]
pub struct Curves {
    pub x_label: String,
    pub x: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
}

impl Curves {
    fn new(x_label: &str, x: Vec<f64>) -> Self {
        Self {
            x_label: x_label.into(),
            x,
            series: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.x.len());
        self.series.push((name.into(), values));
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Scenario-specific quantities reported next to the protocol report.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioDetails {
    Internal {
        /// Time-dilation factor at the end of the protocol.
        zfactor: f64,
        /// Factor-2 variant `1 + 2 a·x − p²/2m` of the same quantity, for reference only.
        zfactor_alternate: f64,
        /// Closed-form two-level entropy production; absent for matrix systems.
        entropy_production_formula: Option<f64>,
        /// `β(⟨W⟩ − ΔF)` with thermal states at both ends.
        entropy_production_thermal: f64,
        formula_thermal_mismatch: Option<f64>,
    },
    Oscillator {
        hubble_over_omega0: Option<f64>,
        effective_frequency_expected: Option<f64>,
        effective_frequency_max_deviation: Option<f64>,
        p20_exact: Option<f64>,
        p20_perturbative: Option<f64>,
        p20_formula: Option<f64>,
        /// Largest `|⟨n|U|0⟩|²` over odd `n` along the time curve.
        max_odd_probability: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub unitarity_error: f64,
    /// `max|U_N − U_2N|`, an estimate of the propagator step error.
    pub step_doubling_change: f64,
    pub micro_reversibility_error: Option<f64>,
    /// Population on the two highest levels after evolution (oscillators only).
    pub leakage: Option<f64>,
    pub frame_symmetry_violation: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub config: ScenarioConfig,
    pub report: ProtocolReport,
    pub forward: WorkDistribution,
    pub reverse: WorkDistribution,
    pub curves: Curves,
    pub details: ScenarioDetails,
    pub diagnostics: Diagnostics,
    pub sampling: Option<SampleEstimate>,
}

/// Dispatch on `config.scenario`.
pub fn run(config: &ScenarioConfig) -> ScenarioResult<RunArtifacts> {
    match config.scenario {
        ScenarioKind::Newtonian => run_newtonian(config),
        ScenarioKind::Desitter => run_desitter(config),
        ScenarioKind::Custom => run_custom(config),
    }
}

fn config_err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Config(msg.into())
}

fn require(config: &ScenarioConfig, kind: ScenarioKind) -> ScenarioResult<()> {
    config.validate()?;
    if config.scenario != kind {
        return Err(config_err(format!(
            "config describes a {} scenario, not {}",
            config.scenario.name(),
            kind.name()
        )));
    }
    Ok(())
}

fn linspace(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|k| if k == intervals { b } else { a + (b - a) * k as f64 / intervals as f64 })
        .collect()
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn scale3(v: &Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Newtonian limit: a two-level system whose levels are rescaled by the time
/// dilation factor between start and end, with no transitions in between.
pub fn run_newtonian(config: &ScenarioConfig) -> ScenarioResult<RunArtifacts> {
    require(config, ScenarioKind::Newtonian)?;
    let (eps, mass) = match config.system {
        SystemConfig::TwoLevel { eps, mass } => (eps, mass),
        SystemConfig::Oscillator { .. } => return Err(config_err("newtonian scenario needs a two_level system, got oscillator")),
        SystemConfig::Matrix { .. } => return Err(config_err("newtonian scenario needs a two_level system, got matrix")),
    };
    let GeometryConfig::UniformGravity { g } = config.geometry else {
        return Err(config_err("newtonian scenario needs uniform_gravity geometry"));
    };
    let frame = uniform_gravity_frame(g);
    let point = FramePoint::new(config.duration, config.position);
    let z = time_dilation(&frame, &point, &config.momentum, mass)?;
    if !(z > 0.0) {
        return Err(config_err(format!("time-dilation factor must be positive, got {z}")));
    }

    let h0 = two_level_hamiltonian(eps)?;
    let ht = h0.scale(z);
    let u = UnitaryOperator::identity(2);

    let details = internal_details(config, &h0, z, Some(eps), &frame.accel(config.duration), mass)?;
    let curves = zfactor_curve(config, eps)?;
    let diagnostics = Diagnostics {
        steps: 0,
        unitarity_error: 0.0,
        step_doubling_change: 0.0,
        micro_reversibility_error: None,
        leakage: None,
        frame_symmetry_violation: None,
    };
    finish(config, &h0, &ht, &u, curves, details, diagnostics)
}

/// Harmonic oscillator in de Sitter space under the tidal Hamiltonian
/// `H(τ) = H₀ − (mℍ²/2)x²`, measured with `H₀` at both ends.
pub fn run_desitter(config: &ScenarioConfig) -> ScenarioResult<RunArtifacts> {
    require(config, ScenarioKind::Desitter)?;
    let SystemConfig::Oscillator { mass, omega0, dim } = config.system else {
        return Err(config_err("desitter scenario needs an oscillator system"));
    };
    let GeometryConfig::DeSitter { hubble } = config.geometry else {
        return Err(config_err("desitter scenario needs de_sitter geometry"));
    };
    if hubble >= omega0 {
        return Err(config_err(format!(
            "hubble ({hubble}) must be below omega0 ({omega0}); the inverted oscillator is out of scope"
        )));
    }
    let frame = if hubble == 0.0 { flat_frame() } else { desitter_frame(hubble)? };
    oscillator_pipeline(config, &frame, mass, omega0, dim, Some(hubble))
}

/// Generic pipeline over tabulated (or catalog) frames and any system.
///
/// Internal systems follow `𝔥(τ) = 𝒵(τ) H_int` with the particle moving
/// linearly from rest at the origin to the configured position and momentum;
/// oscillators follow `H(τ) = H₀ + (m/2) R_{τxτx}(τ) x²`.
pub fn run_custom(config: &ScenarioConfig) -> ScenarioResult<RunArtifacts> {
    require(config, ScenarioKind::Custom)?;
    let mut symmetry = None;
    let frame = match &config.geometry {
        GeometryConfig::UniformGravity { g } => uniform_gravity_frame(*g),
        GeometryConfig::DeSitter { hubble } if *hubble == 0.0 => flat_frame(),
        GeometryConfig::DeSitter { hubble } => desitter_frame(*hubble)?,
        GeometryConfig::Tables { samples } => {
            let frame = tabulated_frame(samples)?;
            let taus: Vec<f64> = samples.iter().map(|r| r.tau).collect();
            let report = validate_frame(&frame, &taus, config.tolerances.symmetry)?;
            if let Some(v) = report.failures().next() {
                return Err(CoreError::Geometry(format!(
                    "frame tables violate {} by {:e} at tau = {}",
                    v.invariant, v.max_violation, v.tau
                ))
                .into());
            }
            symmetry = Some(report.max_violation());
            frame
        }
    };

    let mut artifacts = match &config.system {
        SystemConfig::Oscillator { mass, omega0, dim } => {
            oscillator_pipeline(config, &frame, *mass, *omega0, *dim, None)?
        }
        SystemConfig::TwoLevel { eps, mass } => {
            internal_pipeline(config, &frame, two_level_hamiltonian(*eps)?, *mass, Some(*eps))?
        }
        SystemConfig::Matrix { h_int, mass } => {
            let n = h_int.len();
            let m = DMatrix::from_fn(n, n, |i, j| h_int[i][j]);
            internal_pipeline(config, &frame, HermitianOperator::from_real(m)?, *mass, None)?
        }
    };
    artifacts.diagnostics.frame_symmetry_violation = symmetry;
    Ok(artifacts)
}

fn internal_pipeline(
    config: &ScenarioConfig,
    frame: &FrameData,
    h_int: HermitianOperator,
    mass: f64,
    eps: Option<f64>,
) -> ScenarioResult<RunArtifacts> {
    let t_end = config.duration;
    let zfactor = |tau: f64| -> curvtherm::Result<f64> {
        let s = tau / t_end;
        let point = FramePoint::new(tau, scale3(&config.position, s));
        time_dilation(frame, &point, &scale3(&config.momentum, s), mass)
    };
    let path = |tau: f64| -> curvtherm::Result<HermitianOperator> {
        let z = zfactor(tau)?;
        if !(z > 0.0) {
            return Err(CoreError::Input(format!("time-dilation factor {z} at tau = {tau} is not positive")));
        }
        Ok(h_int.scale(z))
    };
    let u = propagator(path, 0.0, t_end, config.steps)?;
    let u2 = propagator(path, 0.0, t_end, 2 * config.steps)?;
    let h_init = path(0.0)?;
    let z_end = zfactor(t_end)?;
    let h_final = path(t_end)?;

    let details = internal_details(config, &h_int, z_end, eps, &frame.accel(t_end), mass)?;
    let times = linspace(0.0, t_end, config.curves.points);
    let mut curves = Curves::new("t", times.clone());
    curves.push("zfactor", times.iter().map(|&t| zfactor(t)).collect::<curvtherm::Result<_>>()?);

    let diagnostics = Diagnostics {
        steps: config.steps,
        unitarity_error: u.unitarity_error(),
        step_doubling_change: max_abs_diff(u.matrix(), u2.matrix()),
        micro_reversibility_error: None,
        leakage: None,
        frame_symmetry_violation: None,
    };
    finish(config, &h_init, &h_final, &u, curves, details, diagnostics)
}

fn internal_details(
    config: &ScenarioConfig,
    h_int: &HermitianOperator,
    z: f64,
    eps: Option<f64>,
    accel: &Vec3,
    mass: f64,
) -> ScenarioResult<ScenarioDetails> {
    let beta = config.beta;
    let ax: f64 = (0..3).map(|i| accel[i] * config.position[i]).sum();
    let p2: f64 = config.momentum.iter().map(|p| p * p).sum();
    let (_, w_diss) = dissipated_work_thermal(h_int, &h_int.scale(z), beta)?;
    let thermal = beta * w_diss;
    let formula = eps.map(|e| entropy_production_two_level(z, beta * e)).transpose()?;
    Ok(ScenarioDetails::Internal {
        zfactor: z,
        zfactor_alternate: 1.0 + 2.0 * ax - p2 / (2.0 * mass),
        entropy_production_formula: formula,
        entropy_production_thermal: thermal,
        formula_thermal_mismatch: formula.map(|f| (f - thermal).abs()),
    })
}

/// Entropy production against 𝒵 for the two-level system: the closed form,
/// the thermal-endpoint value and the two-point-measurement value.
fn zfactor_curve(config: &ScenarioConfig, eps: f64) -> ScenarioResult<Curves> {
    let c = &config.curves;
    let beta = config.beta;
    let zs = linspace(c.zfactor_min, c.zfactor_max, c.zfactor_points - 1);
    let h0 = two_level_hamiltonian(eps)?;
    let id = UnitaryOperator::identity(2);
    let (mut formula, mut thermal, mut tpm) = (Vec::new(), Vec::new(), Vec::new());
    for &z in &zs {
        let hz = h0.scale(z);
        formula.push(entropy_production_two_level(z, beta * eps)?);
        thermal.push(beta * dissipated_work_thermal(&h0, &hz, beta)?.1);
        let proto = TpmProtocol::new(&h0, &hz, &id, beta)?;
        let fwd = proto.forward(proto.default_merge_tol())?;
        let mean: f64 = fwd.points().iter().map(|p| p.work * p.probability).sum();
        tpm.push(beta * (mean - proto.delta_f()));
    }
    let mut curves = Curves::new("zfactor", zs);
    curves.push("sigma_formula", formula);
    curves.push("sigma_thermal", thermal);
    curves.push("sigma_tpm", tpm);
    Ok(curves)
}

fn oscillator_pipeline(
    config: &ScenarioConfig,
    frame: &FrameData,
    mass: f64,
    omega0: f64,
    dim: usize,
    hubble: Option<f64>,
) -> ScenarioResult<RunArtifacts> {
    let t_end = config.duration;
    let h0 = qho_hamiltonian(mass, omega0, dim)?;
    let x2 = x_squared_matrix(mass, omega0, dim)?;
    let r_xx = |tau: f64| frame.riemann_titj(tau)[0][0];
    let path = |tau: f64| -> curvtherm::Result<HermitianOperator> {
        let r = r_xx(tau);
        if !r.is_finite() {
            return Err(CoreError::Input(format!("non-finite curvature at tau = {tau}")));
        }
        h0.add_scaled(&x2, 0.5 * mass * r)
    };

    let u = propagator(path, 0.0, t_end, config.steps)?;
    let u2 = propagator(path, 0.0, t_end, 2 * config.steps)?;

    // H₀ is diagonal, so the matrix basis is the energy basis
    let rho0 = thermal_state(&h0, config.beta)?;
    let thermal_leak = top_population(&u.evolve_density(&rho0.density), 2);
    let ground_leak: f64 = (dim - 2..dim).map(|n| u.matrix()[(n, 0)].norm_sqr()).sum();
    let leakage = thermal_leak.max(ground_leak);
    if !(leakage <= config.tolerances.leakage) {
        return Err(CoreError::Convergence(format!(
            "population {leakage:e} reached the two highest of {dim} levels (limit {:e}); increase dim",
            config.tolerances.leakage
        ))
        .into());
    }

    // time curves, propagating segment by segment
    let times = linspace(0.0, t_end, config.curves.points);
    let sub = config.steps.div_ceil(config.curves.points).max(1);
    let mut acc = UnitaryOperator::identity(dim);
    let mut p20 = Vec::with_capacity(times.len());
    let mut p20_pert = Vec::with_capacity(times.len());
    let mut odd = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            let seg = propagator(path, times[k - 1], t, sub)?;
            acc = seg.compose(&acc)?;
        }
        let col = |n: usize| acc.matrix()[(n, 0)].norm_sqr();
        odd.push((1..dim).step_by(2).map(col).fold(0.0, f64::max));
        if dim > 2 {
            p20.push(col(2));
            p20_pert.push(perturbative_amplitude(mass, omega0, r_xx, 2, 0, t)?.norm_sqr());
        }
    }
    let max_odd = odd.iter().copied().fold(0.0, f64::max);
    let p20_formula: Option<Vec<f64>> = match hubble {
        Some(h) if dim > 2 => Some(
            times
                .iter()
                .map(|&t| curvtherm::quantum::transition_probability_formula(mass, omega0, h, 2, 0, t))
                .collect::<curvtherm::Result<_>>()?,
        ),
        _ => None,
    };

    let mut curves = Curves::new("t", times);
    if dim > 2 {
        curves.push("p20_exact", p20);
        curves.push("p20_perturbative", p20_pert);
        if let Some(f) = &p20_formula {
            curves.push("p20_formula", f.clone());
        }
    }
    curves.push("max_odd_probability", odd);

    let (ratio, omega_eff, eff_dev) = match hubble {
        Some(h) => {
            let expected = (omega0 * omega0 - h * h).sqrt();
            let spacings = path(0.0)?.eigenbasis().spacings();
            let dev = spacings
                .iter()
                .take((dim / 2).max(1))
                .map(|s| (s - expected).abs())
                .fold(0.0, f64::max);
            (Some(h / omega0), Some(expected), Some(dev))
        }
        None => (None, None, None),
    };
    let p20_final = |name: &str| curves.get(name).and_then(|v| v.last().copied());
    let details = ScenarioDetails::Oscillator {
        hubble_over_omega0: ratio,
        effective_frequency_expected: omega_eff,
        effective_frequency_max_deviation: eff_dev,
        p20_exact: if dim > 2 { Some(u.matrix()[(2, 0)].norm_sqr()) } else { None },
        p20_perturbative: p20_final("p20_perturbative"),
        p20_formula: p20_final("p20_formula"),
        max_odd_probability: max_odd,
    };

    let diagnostics = Diagnostics {
        steps: config.steps,
        unitarity_error: u.unitarity_error(),
        step_doubling_change: max_abs_diff(u.matrix(), u2.matrix()),
        micro_reversibility_error: None,
        leakage: Some(leakage),
        frame_symmetry_violation: None,
    };
    finish(config, &h0, &h0, &u, curves, details, diagnostics)
}

fn finish(
    config: &ScenarioConfig,
    h_init: &HermitianOperator,
    h_final: &HermitianOperator,
    u: &UnitaryOperator,
    curves: Curves,
    details: ScenarioDetails,
    mut diagnostics: Diagnostics,
) -> ScenarioResult<RunArtifacts> {
    if u.unitarity_error() > config.tolerances.unitarity {
        return Err(CoreError::Numeric(format!(
            "propagator unitarity error {:e} exceeds {:e}",
            u.unitarity_error(),
            config.tolerances.unitarity
        ))
        .into());
    }
    let proto = TpmProtocol::new(h_init, h_final, u, config.beta)?;
    let merge_tol = config.merge_tol.unwrap_or_else(|| proto.default_merge_tol());
    let (report, forward, reverse) = proto.report(merge_tol, config.tolerances.p_floor)?;
    report.check_consistency()?;
    diagnostics.micro_reversibility_error = proto.micro_reversibility_error();
    let sampling = match (config.samples, config.seed) {
        (Some(n), Some(seed)) => Some(sample_work(&forward, config.beta, n, seed)),
        _ => None,
    };
    Ok(RunArtifacts {
        config: config.clone(),
        report,
        forward,
        reverse,
        curves,
        details,
        diagnostics,
        sampling,
    })
}
