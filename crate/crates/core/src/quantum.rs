//! Dense quantum mechanics on small, truncated Hilbert spaces.

use std::ops::Range;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;

pub type CMatrix = DMatrix<Complex64>;

/// Max-entry tolerance on `H − H†` accepted by [`HermitianOperator::new`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default max-entry tolerance on `U†U − I`.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Relative gap below which neighbouring eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric("matrix has non-finite entries".into()))
    }
}

/// A Hermitian matrix. Construction symmetrizes away rounding-level
/// asymmetry and rejects anything larger.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Input(format!(
                "operator must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_finite(&matrix)?;
        let adjoint = matrix.adjoint();
        let asym = max_abs(&(&matrix - &adjoint));
        if asym > HERMITICITY_TOL {
            return Err(Error::Input(format!("operator is not Hermitian (|H - H†|max = {asym:e})")));
        }
        let matrix = (matrix + adjoint).scale(0.5);
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { matrix: m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// True when every entry is real in the computational basis.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.scale(factor),
        }
    }

    /// `self + factor · other`
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix + other.matrix.scale(factor),
        })
    }

    /// Expectation value `Tr(Hρ)`.
    pub fn trace_with(&self, density: &CMatrix) -> Result<f64> {
        if density.nrows() != self.dim() || density.ncols() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: density.nrows(),
            });
        }
        Ok((&self.matrix * density).trace().re)
    }

    pub fn eigenbasis(&self) -> EnergyBasis {
        let n = self.dim();
        let (values, vectors): (Vec<f64>, CMatrix) = if self.is_real() {
            let eig = SymmetricEigen::new(self.matrix.map(|z| z.re));
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(|v| Complex64::new(v, 0.0)))
        } else {
            let eig = SymmetricEigen::new(self.matrix.clone());
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
        let eigenvectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        let degenerate_groups = degenerate_groups(&eigenvalues, DEGENERACY_TOL);
        EnergyBasis {
            eigenvalues,
            eigenvectors,
            degenerate_groups,
        }
    }
}

fn degenerate_groups(sorted: &[f64], rel_tol: f64) -> Vec<Range<usize>> {
    let scale = sorted.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        let split = k == sorted.len() || sorted[k] - sorted[k - 1] >= rel_tol * scale;
        if split {
            if k - start > 1 {
                groups.push(start..k);
            }
            start = k;
        }
    }
    groups
}

/// Ascending eigenvalues with eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EnergyBasis {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
    /// Index ranges of (near-)degenerate eigenvalues.
    pub degenerate_groups: Vec<Range<usize>>,
}

impl EnergyBasis {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `‖V diag(ε) V† − H‖_max`
    pub fn reconstruction_error(&self, h: &HermitianOperator) -> f64 {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)),
        ));
        let rebuilt = &self.eigenvectors * d * self.eigenvectors.adjoint();
        max_abs(&(rebuilt - h.matrix()))
    }

    /// `V diag(f(ε)) V†`
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (c, &e) in self.eigenvalues.iter().enumerate() {
            let w = f(e);
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `V diag(w) V†`
    pub fn from_weights(&self, weights: &[f64]) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (c, &w) in weights.iter().enumerate() {
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// Differences between consecutive eigenvalues.
    pub fn spacings(&self) -> Vec<f64> {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// A matrix checked to be unitary within a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Input("unitary must be square and non-empty".into()));
        }
        check_finite(&matrix)?;
        let err = unitarity_error(&matrix);
        if err > tolerance {
            return Err(Error::Input(format!("operator is not unitary (|U†U - I|max = {err:e})")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `U ρ U†`
    pub fn evolve_density(&self, density: &CMatrix) -> CMatrix {
        &self.matrix * density * self.matrix.adjoint()
    }
}

fn unitarity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

/// Gibbs state `e^{−βH}/Tr e^{−βH}`.
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub beta: f64,
    pub density: CMatrix,
    /// `ln Tr e^{−βH}`
    pub log_partition: f64,
    /// Occupation of each eigenvector of the generating Hamiltonian.
    pub populations: Vec<f64>,
    pub basis: EnergyBasis,
}

pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<ThermalState> {
    thermal_state_in(h.eigenbasis(), beta)
}

/// Thermal state from an already computed eigenbasis.
pub fn thermal_state_in(basis: EnergyBasis, beta: f64) -> Result<ThermalState> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Input(format!("beta must be positive, got {beta}")));
    }
    let (populations, log_partition) = gibbs_weights(&basis.eigenvalues, beta);
    let density = basis.from_weights(&populations);
    Ok(ThermalState {
        beta,
        density,
        log_partition,
        populations,
        basis,
    })
}

/// Normalized Boltzmann weights and `ln Z`, shifted by the lowest level so
/// large `β·ε` cannot overflow.
pub fn gibbs_weights(sorted_levels: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let shift = sorted_levels.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = sorted_levels.iter().map(|&e| (-(beta * (e - shift))).exp()).collect();
    let z_shifted: f64 = raw.iter().sum();
    let pops = raw.iter().map(|w| w / z_shifted).collect();
    (pops, z_shifted.ln() - beta * shift)
}

/// `diag(0, ε)`
pub fn two_level_hamiltonian(eps: f64) -> Result<HermitianOperator> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Input(format!("level splitting must be positive, got {eps}")));
    }
    Ok(HermitianOperator::diagonal(&[0.0, eps]))
}

fn check_oscillator(mass: f64, omega: f64, dim: usize) -> Result<()> {
    if !(mass > 0.0) || !(omega > 0.0) || !mass.is_finite() || !omega.is_finite() {
        return Err(Error::Input(format!("oscillator needs positive mass and frequency, got m = {mass}, ω = {omega}")));
    }
    if dim < 2 {
        return Err(Error::Input(format!("oscillator truncation must be at least 2, got {dim}")));
    }
    Ok(())
}

/// `diag((n + ½)ω)` on the first `dim` Fock states.
pub fn qho_hamiltonian(mass: f64, omega: f64, dim: usize) -> Result<HermitianOperator> {
    check_oscillator(mass, omega, dim)?;
    let levels: Vec<f64> = (0..dim).map(|n| (n as f64 + 0.5) * omega).collect();
    Ok(HermitianOperator::diagonal(&levels))
}

/// `⟨n|x²|m⟩` in the Fock basis of an oscillator with the given mass and frequency.
pub fn x_squared_element(mass: f64, omega: f64, n: usize, m: usize) -> f64 {
    let mf = m as f64;
    let v = if n == m {
        2.0 * mf + 1.0
    } else if n + 2 == m {
        (mf * (mf - 1.0)).sqrt()
    } else if n == m + 2 {
        ((mf + 1.0) * (mf + 2.0)).sqrt()
    } else {
        0.0
    };
    v / (2.0 * mass * omega)
}

/// Matrix of `x²` on the first `dim` Fock states (exact elements, truncated).
pub fn x_squared_matrix(mass: f64, omega: f64, dim: usize) -> Result<HermitianOperator> {
    check_oscillator(mass, omega, dim)?;
    let m = CMatrix::from_fn(dim, dim, |r, c| Complex64::new(x_squared_element(mass, omega, r, c), 0.0));
    Ok(HermitianOperator { matrix: m })
}

/// `exp(−i H dt)` through the eigendecomposition of `H`.
pub fn evolution_factor(h: &HermitianOperator, dt: f64) -> CMatrix {
    h.eigenbasis().apply_function(|e| (-I * (e * dt)).exp())
}

/// Time-ordered propagator `𝒯 exp(−i∫H dτ)` over `[tau0, tau1]` as a
/// product of midpoint exponentials, `U = ∏_{j=N−1..0} exp(−i H(τ_j + Δ/2) Δ)`.
///
/// Each factor is exactly unitary; the global error is `O(Δ²)`. Consecutive
/// steps that return a bitwise-identical Hamiltonian reuse the previous factor.
pub fn propagator<F>(hamiltonian_path: F, tau0: f64, tau1: f64, steps: usize) -> Result<UnitaryOperator>
where
    F: Fn(f64) -> Result<HermitianOperator>,
{
    if steps == 0 {
        return Err(Error::Input("propagator needs at least one step".into()));
    }
    if !(tau1 > tau0) || !tau0.is_finite() || !tau1.is_finite() {
        return Err(Error::Input(format!("propagator needs tau1 > tau0, got [{tau0}, {tau1}]")));
    }
    let dt = (tau1 - tau0) / steps as f64;
    let mut u: Option<CMatrix> = None;
    let mut cached: Option<(HermitianOperator, CMatrix)> = None;
    let mut dim = None;

    for j in 0..steps {
        let tau = tau0 + (j as f64 + 0.5) * dt;
        let h = hamiltonian_path(tau)?;
        match dim {
            None => dim = Some(h.dim()),
            Some(d) if d != h.dim() => {
                return Err(Error::Input(format!(
                    "Hamiltonian dimension changed along the path: {d} -> {} at tau = {tau}",
                    h.dim()
                )))
            }
            _ => {}
        }
        check_finite(h.matrix())?;
        let factor = match &cached {
            Some((prev, f)) if prev == &h => f.clone(),
            _ => {
                let f = evolution_factor(&h, dt);
                cached = Some((h, f.clone()));
                f
            }
        };
        u = Some(match u {
            None => factor,
            Some(acc) => factor * acc,
        });
    }
    let u = u.expect("steps >= 1");
    check_finite(&u)?;
    let err = unitarity_error(&u);
    if err > UNITARITY_TOL {
        return Err(Error::Numeric(format!("propagator lost unitarity: {err:e}")));
    }
    Ok(UnitaryOperator { matrix: u })
}

/// First-order interaction-picture amplitude for `|m⟩ → |n⟩` under the tidal
/// perturbation `V(τ) = ½ m R_{τxτx}(τ) x²`:
///
/// `c_n(τ) = −(i m/2) ⟨n|x²|m⟩ f(τ)`, `f(τ) = ∫₀^τ R_{τxτx}(τ′) e^{i(n−m)ω₀τ′} dτ′`.
pub fn perturbative_amplitude<F>(mass: f64, omega0: f64, curvature_tt: F, n: usize, m: usize, tau: f64) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    check_oscillator(mass, omega0, 2)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Input(format!("tau must be non-negative, got {tau}")));
    }
    let x2 = x_squared_element(mass, omega0, n, m);
    if x2 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let freq = (n as f64 - m as f64) * omega0;
    let f = quadrature::integrate(
        |t| curvature_tt(t) * (I * (freq * t)).exp(),
        0.0,
        tau,
        1e-10,
        1e-300,
    )?;
    Ok(-I * (0.5 * mass * x2) * f)
}

/// Closed-form first-order transition probability in de Sitter space,
/// `4 (mℍ²/2)² |⟨n|x²|m⟩|² / |ε_n − ε_m|² · sin²((n − m)ω₀t/2)`.
pub fn transition_probability_formula(mass: f64, omega0: f64, hubble: f64, n: usize, m: usize, t: f64) -> Result<f64> {
    check_oscillator(mass, omega0, 2)?;
    if n == m {
        return Err(Error::Input("transition probability formula needs n != m".into()));
    }
    let x2 = x_squared_element(mass, omega0, n, m);
    let gap = (n as f64 - m as f64) * omega0;
    let coupling = 0.5 * mass * hubble * hubble;
    let s = (0.5 * gap * t).sin();
    Ok(4.0 * coupling * coupling * x2 * x2 / (gap * gap) * s * s)
}

/// Total population on the `count` highest basis states of a density matrix.
pub fn top_population(density: &CMatrix, count: usize) -> f64 {
    let n = density.nrows();
    (n.saturating_sub(count)..n).map(|k| density[(k, k)].re).sum()
}
