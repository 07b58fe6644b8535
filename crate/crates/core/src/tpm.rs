//! Two-point-measurement work statistics.
//!
//! A protocol is a pair of measurement Hamiltonians (`H_init` measured at the
//! start, `H_final` at the end), the unitary connecting them and an inverse
//! temperature. Work is the difference of the two measured energies,
//! `W_{k,l} = ε_k^T − ε_l^0`, and its distribution is enumerated exactly over
//! all `(l, k)` pairs.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quantum::{gibbs_weights, thermal_state, EnergyBasis, HermitianOperator, UnitaryOperator, UNITARITY_TOL};

/// Default probability floor below which support points are ignored when
/// matching forward and reverse distributions.
pub const DEFAULT_P_FLOOR: f64 = 1e-12;
/// Relative merge tolerance, scaled by the spectral span of the protocol.
pub const MERGE_TOL_REL: f64 = 1e-9;
const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkPoint {
    pub work: f64,
    pub probability: f64,
}

/// Finite distribution over work values, sorted by work, with values closer
/// than `merge_tol` coalesced.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkDistribution {
    points: Vec<WorkPoint>,
    merge_tol: f64,
}

impl WorkDistribution {
    /// Sort, merge and validate raw `(work, probability)` pairs. Exact-zero
    /// probabilities are dropped.
    pub fn from_pairs<I>(pairs: I, merge_tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        if !(merge_tol >= 0.0) || !merge_tol.is_finite() {
            return Err(Error::Input(format!("merge tolerance must be non-negative, got {merge_tol}")));
        }
        let mut raw: Vec<WorkPoint> = pairs
            .into_iter()
            .map(|(work, probability)| WorkPoint { work, probability })
            .collect();
        if raw.iter().any(|p| !p.work.is_finite() || !p.probability.is_finite()) {
            return Err(Error::Numeric("non-finite work or probability".into()));
        }
        if raw.iter().any(|p| p.probability < -1e-15) {
            return Err(Error::Numeric("negative probability".into()));
        }
        raw.retain(|p| p.probability > 0.0);
        raw.sort_by(|a, b| a.work.total_cmp(&b.work).then(a.probability.total_cmp(&b.probability)));

        // single-linkage clusters: a gap larger than merge_tol starts a new one
        let mut points: Vec<WorkPoint> = Vec::new();
        let mut cluster: Vec<WorkPoint> = Vec::new();
        let flush = |cluster: &mut Vec<WorkPoint>, points: &mut Vec<WorkPoint>| {
            if cluster.is_empty() {
                return;
            }
            let p: f64 = cluster.iter().map(|c| c.probability).sum();
            let w = cluster.iter().map(|c| c.work * c.probability).sum::<f64>() / p;
            // keep the representative inside the cluster span
            let lo = cluster[0].work;
            let hi = cluster[cluster.len() - 1].work;
            // summation roundoff can push a certain outcome a few ulps past 1
            points.push(WorkPoint {
                work: w.clamp(lo, hi),
                probability: p.min(1.0),
            });
            cluster.clear();
        };
        for p in raw {
            if let Some(last) = cluster.last() {
                if p.work - last.work > merge_tol {
                    flush(&mut cluster, &mut points);
                }
            }
            cluster.push(p);
        }
        flush(&mut cluster, &mut points);

        let dist = Self { points, merge_tol };
        let total = dist.total_probability();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Numeric(format!("work distribution not normalized: total = {total}")));
        }
        Ok(dist)
    }

    pub fn points(&self) -> &[WorkPoint] {
        &self.points
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_probability(&self) -> f64 {
        self.points.iter().map(|p| p.probability).sum()
    }

    /// Point whose work value lies within `tol` of `work`, if any.
    pub fn find(&self, work: f64, tol: f64) -> Option<&WorkPoint> {
        let idx = self.points.partition_point(|p| p.work < work - tol);
        self.points
            .get(idx)
            .filter(|p| (p.work - work).abs() <= tol)
    }

    /// `weight · self + (1 − weight) · other`, re-merged.
    pub fn mixture(&self, other: &Self, weight: f64) -> Result<Self> {
        let pairs = self
            .points
            .iter()
            .map(|p| (p.work, weight * p.probability))
            .chain(other.points.iter().map(|p| (p.work, (1.0 - weight) * p.probability)));
        Self::from_pairs(pairs, self.merge_tol.max(other.merge_tol))
    }
}

/// Eigenbases, Gibbs weights and transition probabilities of one protocol,
/// shared by the forward and reverse distributions.
#[derive(Clone, Debug)]
pub struct TpmProtocol {
    beta: f64,
    initial: EnergyBasis,
    last: EnergyBasis,
    initial_weights: Vec<f64>,
    final_weights: Vec<f64>,
    ln_z0: f64,
    ln_zt: f64,
    /// `|⟨ε_k^T|U|ε_l^0⟩|²` at `[(k, l)]`.
    forward_transitions: DMatrix<f64>,
    /// `|⟨ε_l^0|ΘU†Θ†|ε_k^T⟩|²` at `[(l, k)]`; `None` for complex Hamiltonians.
    reverse_transitions: Option<DMatrix<f64>>,
}

impl TpmProtocol {
    pub fn new(h_init: &HermitianOperator, h_final: &HermitianOperator, u: &UnitaryOperator, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Input(format!("beta must be positive, got {beta}")));
        }
        for d in [h_final.dim(), u.dim()] {
            if d != h_init.dim() {
                return Err(Error::Dimension {
                    expected: h_init.dim(),
                    got: d,
                });
            }
        }
        let err = u.unitarity_error();
        if err > UNITARITY_TOL {
            return Err(Error::Input(format!("protocol unitary is not unitary (|U†U - I|max = {err:e})")));
        }

        let initial = h_init.eigenbasis();
        let last = h_final.eigenbasis();
        let (initial_weights, ln_z0) = gibbs_weights(&initial.eigenvalues, beta);
        let (final_weights, ln_zt) = gibbs_weights(&last.eigenvalues, beta);

        let m = last.eigenvectors.adjoint() * u.matrix() * &initial.eigenvectors;
        let forward_transitions = m.map(|z| z.norm_sqr());

        let reverse_transitions = if h_init.is_real() && h_final.is_real() {
            // Θ = complex conjugation, so ΘU†Θ† = Uᵀ
            let reversed = u.matrix().transpose();
            let mr = initial.eigenvectors.adjoint() * reversed * &last.eigenvectors;
            Some(mr.map(|z| z.norm_sqr()))
        } else {
            None
        };

        Ok(Self {
            beta,
            initial,
            last,
            initial_weights,
            final_weights,
            ln_z0,
            ln_zt,
            forward_transitions,
            reverse_transitions,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn initial_basis(&self) -> &EnergyBasis {
        &self.initial
    }

    pub fn final_basis(&self) -> &EnergyBasis {
        &self.last
    }

    /// `ln Z_0`, `ln Z_T`
    pub fn log_partitions(&self) -> (f64, f64) {
        (self.ln_z0, self.ln_zt)
    }

    /// `Z_T / Z_0`
    pub fn partition_ratio(&self) -> f64 {
        (self.ln_zt - self.ln_z0).exp()
    }

    pub fn delta_f(&self) -> f64 {
        -(self.ln_zt - self.ln_z0) / self.beta
    }

    /// `1e-9` times the spread of all measured energies.
    pub fn default_merge_tol(&self) -> f64 {
        let all = self.initial.eigenvalues.iter().chain(self.last.eigenvalues.iter());
        let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let span = hi - lo;
        if span > 0.0 {
            MERGE_TOL_REL * span
        } else {
            MERGE_TOL_REL * hi.abs().max(1.0)
        }
    }

    /// Raw forward joint probabilities `p_{k,l}` before merging, as
    /// `(k, l, W_{k,l}, p_{k,l})`.
    pub fn forward_pairs(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        let n = self.initial.dim();
        (0..n).flat_map(move |l| {
            (0..n).map(move |k| {
                let w = self.last.eigenvalues[k] - self.initial.eigenvalues[l];
                let p = self.initial_weights[l] * self.forward_transitions[(k, l)];
                (k, l, w, p)
            })
        })
    }

    pub fn forward(&self, merge_tol: f64) -> Result<WorkDistribution> {
        WorkDistribution::from_pairs(self.forward_pairs().map(|(_, _, w, p)| (w, p)), merge_tol)
    }

    /// Reverse distribution over the reverse-process work `−W_{k,l}`.
    pub fn reverse(&self, merge_tol: f64) -> Result<WorkDistribution> {
        let rev = self.reverse_transitions.as_ref().ok_or_else(|| {
            Error::Input(
                "reverse protocol needs time-reversal-invariant (real-symmetric) Hamiltonians; \
                 H_init or H_final has complex entries"
                    .into(),
            )
        })?;
        let n = self.initial.dim();
        let pairs = (0..n).flat_map(|k| {
            (0..n).map(move |l| {
                let w = self.initial.eigenvalues[l] - self.last.eigenvalues[k];
                (w, self.final_weights[k] * rev[(l, k)])
            })
        });
        WorkDistribution::from_pairs(pairs, merge_tol)
    }

    /// Largest `| |⟨ε_l^0|Ũ|ε_k^T⟩|² − |⟨ε_k^T|U|ε_l^0⟩|² |` over all pairs.
    pub fn micro_reversibility_error(&self) -> Option<f64> {
        let rev = self.reverse_transitions.as_ref()?;
        Some(
            (rev.transpose() - &self.forward_transitions)
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs())),
        )
    }

    /// Forward and reverse distributions plus the summary report.
    pub fn report(&self, merge_tol: f64, p_floor: f64) -> Result<(ProtocolReport, WorkDistribution, WorkDistribution)> {
        let fwd = self.forward(merge_tol)?;
        let rev = self.reverse(merge_tol)?;
        let delta_f = self.delta_f();
        let crooks = crooks_check_with_floor(&fwd, &rev, self.beta, delta_f, p_floor)?;
        let report = ProtocolReport::new(self.beta, delta_f, &fwd, crooks)?;
        Ok((report, fwd, rev))
    }
}

/// `ΔF = −(ln Z_T − ln Z_0)/β`.
pub fn delta_f(h_init: &HermitianOperator, h_final: &HermitianOperator, beta: f64) -> Result<f64> {
    if h_init.dim() != h_final.dim() {
        return Err(Error::Dimension {
            expected: h_init.dim(),
            got: h_final.dim(),
        });
    }
    let z0 = thermal_state(h_init, beta)?.log_partition;
    let zt = thermal_state(h_final, beta)?.log_partition;
    Ok(-(zt - z0) / beta)
}

pub fn forward_distribution(
    h_init: &HermitianOperator,
    h_final: &HermitianOperator,
    u: &UnitaryOperator,
    beta: f64,
    merge_tol: f64,
) -> Result<WorkDistribution> {
    TpmProtocol::new(h_init, h_final, u, beta)?.forward(merge_tol)
}

pub fn reverse_distribution(
    h_init: &HermitianOperator,
    h_final: &HermitianOperator,
    u: &UnitaryOperator,
    beta: f64,
    merge_tol: f64,
) -> Result<WorkDistribution> {
    if !h_init.is_real() || !h_final.is_real() {
        return Err(Error::Input(
            "reverse protocol needs time-reversal-invariant (real-symmetric) Hamiltonians; \
             H_init or H_final has complex entries"
                .into(),
        ));
    }
    TpmProtocol::new(h_init, h_final, u, beta)?.reverse(merge_tol)
}

pub fn crooks_check(fwd: &WorkDistribution, rev: &WorkDistribution, beta: f64, delta_f: f64) -> Result<f64> {
    crooks_check_with_floor(fwd, rev, beta, delta_f, DEFAULT_P_FLOOR)
}

/// Largest `|ln(P_fwd(W)/P_rev(−W)) − β(W − ΔF)|` over work values carrying
/// more than `p_floor` probability in both distributions.
pub fn crooks_check_with_floor(
    fwd: &WorkDistribution,
    rev: &WorkDistribution,
    beta: f64,
    delta_f: f64,
    p_floor: f64,
) -> Result<f64> {
    let tol = fwd.merge_tol().max(rev.merge_tol());
    let mut worst: Option<f64> = None;
    for p in fwd.points().iter().filter(|p| p.probability > p_floor) {
        let Some(r) = rev.find(-p.work, tol) else { continue };
        if r.probability <= p_floor {
            continue;
        }
        let residual = ((p.probability / r.probability).ln() - beta * (p.work - delta_f)).abs();
        worst = Some(worst.map_or(residual, |w: f64| w.max(residual)));
    }
    worst.ok_or_else(|| {
        Error::Numeric(format!(
            "no work value above p_floor = {p_floor:e} is shared by the forward and reverse distributions"
        ))
    })
}

/// `⟨e^{−βW}⟩`
pub fn jarzynski_average(fwd: &WorkDistribution, beta: f64) -> f64 {
    fwd.points()
        .iter()
        .map(|p| p.probability * (-beta * p.work).exp())
        .sum()
}

/// `⟨W⟩`
pub fn mean_work(fwd: &WorkDistribution) -> f64 {
    fwd.points().iter().map(|p| p.probability * p.work).sum()
}

/// Average work between thermal states at both endpoints,
/// `⟨W⟩ = Tr{H_final ρ_T} − Tr{H_init ρ_0}`, and `W_diss = ⟨W⟩ − ΔF`.
pub fn dissipated_work_thermal(h_init: &HermitianOperator, h_final: &HermitianOperator, beta: f64) -> Result<(f64, f64)> {
    if h_init.dim() != h_final.dim() {
        return Err(Error::Dimension {
            expected: h_init.dim(),
            got: h_final.dim(),
        });
    }
    let s0 = thermal_state(h_init, beta)?;
    let st = thermal_state(h_final, beta)?;
    let w = h_final.trace_with(&st.density)? - h_init.trace_with(&s0.density)?;
    let df = -(st.log_partition - s0.log_partition) / beta;
    Ok((w, w - df))
}

/// Closed-form two-level entropy production
/// `Σ = (𝒵 − 1)βε + ln((1 − e^{−𝒵βε})/(1 − e^{−βε}))`.
pub fn entropy_production_two_level(zfactor: f64, beta_eps: f64) -> Result<f64> {
    if !(zfactor > 0.0) || !(beta_eps > 0.0) || !zfactor.is_finite() || !beta_eps.is_finite() {
        return Err(Error::Input(format!(
            "need positive zfactor and beta*eps, got {zfactor} and {beta_eps}"
        )));
    }
    let num = -(-zfactor * beta_eps).exp_m1();
    let den = -(-beta_eps).exp_m1();
    Ok((zfactor - 1.0) * beta_eps + (num.ln() - den.ln()))
}

/// Summary of one protocol run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolReport {
    pub beta: f64,
    pub delta_f: f64,
    pub mean_work: f64,
    /// `⟨e^{−βW}⟩`
    pub jarzynski_lhs: f64,
    /// `e^{−βΔF}`
    pub jarzynski_rhs: f64,
    pub crooks_max_residual: f64,
    /// `Σ = β W_diss`
    pub entropy_production: f64,
    /// `⟨W⟩ − ΔF`
    pub dissipated_work: f64,
}

impl ProtocolReport {
    pub fn new(beta: f64, delta_f: f64, fwd: &WorkDistribution, crooks_max_residual: f64) -> Result<Self> {
        let mean = mean_work(fwd);
        let dissipated_work = mean - delta_f;
        let report = Self {
            beta,
            delta_f,
            mean_work: mean,
            jarzynski_lhs: jarzynski_average(fwd, beta),
            jarzynski_rhs: (-beta * delta_f).exp(),
            crooks_max_residual,
            entropy_production: beta * dissipated_work,
            dissipated_work,
        };
        report.check_consistency()?;
        Ok(report)
    }

    /// `W_diss = ⟨W⟩ − ΔF` and `Σ = β W_diss` to 1e-12.
    pub fn check_consistency(&self) -> Result<()> {
        let d1 = (self.dissipated_work - (self.mean_work - self.delta_f)).abs();
        let d2 = (self.entropy_production - self.beta * self.dissipated_work).abs();
        if d1 > 1e-12 || d2 > 1e-12 {
            return Err(Error::Numeric(format!(
                "report inconsistent: |W_diss - (<W> - dF)| = {d1:e}, |S - beta W_diss| = {d2:e}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::two_level_hamiltonian;

    fn shifted_two_level(eps: f64, z: f64) -> (HermitianOperator, HermitianOperator) {
        let h = two_level_hamiltonian(eps).unwrap();
        (h.clone(), h.scale(z))
    }

    #[test]
    fn identity_protocol_is_a_single_point() {
        let h = two_level_hamiltonian(1.0).unwrap();
        let u = UnitaryOperator::identity(2);
        let fwd = forward_distribution(&h, &h, &u, 1.0, 1e-9).unwrap();
        assert_eq!(fwd.points(), &[WorkPoint { work: 0.0, probability: 1.0 }]);
        let rev = reverse_distribution(&h, &h, &u, 1.0, 1e-9).unwrap();
        assert_eq!(rev.points(), &[WorkPoint { work: 0.0, probability: 1.0 }]);
        assert_eq!(delta_f(&h, &h, 1.0).unwrap(), 0.0);
        assert_eq!(crooks_check(&fwd, &rev, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(jarzynski_average(&fwd, 1.0), 1.0);
        assert_eq!(mean_work(&fwd), 0.0);
        assert_eq!(dissipated_work_thermal(&h, &h, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn two_level_shift_closed_forms() {
        let (eps, beta, z) = (1.0, 1.0, 1.2);
        let x = beta * eps;
        let (h0, ht) = shifted_two_level(eps, z);
        let u = UnitaryOperator::identity(2);
        let proto = TpmProtocol::new(&h0, &ht, &u, beta).unwrap();
        let fwd = proto.forward(1e-9).unwrap();
        let p0 = 1.0 / (1.0 + (-x).exp());
        let p1 = 1.0 - p0;
        assert_eq!(fwd.len(), 2);
        assert_eq!(fwd.points()[0].work, 0.0);
        assert!((fwd.points()[0].probability - p0).abs() < 1e-15);
        assert!((fwd.points()[1].work - (z - 1.0) * eps).abs() < 1e-15);
        assert!((fwd.points()[1].probability - p1).abs() < 1e-15);

        let rev = proto.reverse(1e-9).unwrap();
        let q0 = 1.0 / (1.0 + (-z * x).exp());
        assert!((rev.points()[0].work + (z - 1.0) * eps).abs() < 1e-15);
        assert!((rev.points()[0].probability - (1.0 - q0)).abs() < 1e-15);
        assert!((rev.points()[1].probability - q0).abs() < 1e-15);

        let df = -((1.0 + (-z * x).exp()) / (1.0 + (-x).exp())).ln() / beta;
        assert!((proto.delta_f() - df).abs() < 1e-15);
        assert!((delta_f(&h0, &ht, beta).unwrap() - df).abs() < 1e-15);

        let jar = jarzynski_average(&fwd, beta);
        assert!((jar - (1.0 + (-1.2f64).exp()) / (1.0 + (-1.0f64).exp())).abs() < 1e-14);
        assert!(crooks_check(&fwd, &rev, beta, df).unwrap() < 1e-10);
        assert!((mean_work(&fwd) - (z - 1.0) * eps * (-x).exp() / (1.0 + (-x).exp())).abs() < 1e-15);
    }

    #[test]
    fn wrong_free_energy_breaks_crooks() {
        let (h0, ht) = shifted_two_level(1.0, 1.5);
        let proto = TpmProtocol::new(&h0, &ht, &UnitaryOperator::identity(2), 2.0).unwrap();
        let (fwd, rev) = (proto.forward(1e-9).unwrap(), proto.reverse(1e-9).unwrap());
        let good = crooks_check(&fwd, &rev, 2.0, proto.delta_f()).unwrap();
        let bad = crooks_check(&fwd, &rev, 2.0, -proto.delta_f()).unwrap();
        assert!(good < 1e-12);
        assert!(bad > 1e-2);
    }

    #[test]
    fn thermal_dissipated_work_two_level() {
        let (eps, beta) = (1.0, 1.0);
        let (h0, h1) = shifted_two_level(eps, 1.0);
        let (w, wd) = dissipated_work_thermal(&h0, &h1, beta).unwrap();
        assert_eq!((w, wd), (0.0, 0.0));

        let z = 1.5;
        let x = beta * eps;
        let (h0, ht) = shifted_two_level(eps, z);
        let (w, wd) = dissipated_work_thermal(&h0, &ht, beta).unwrap();
        let u = |y: f64| y * (-y).exp() / (1.0 + (-y).exp());
        let w_expected = (u(z * x) - u(x)) / beta;
        let df = -((1.0 + (-z * x).exp()) / (1.0 + (-x).exp())).ln() / beta;
        assert!((w - w_expected).abs() < 1e-14);
        assert!((wd - (w_expected - df)).abs() < 1e-14);
        // thermal endpoints: W_diss is the entropy difference S(zβε) − S(βε), negative for 𝒵 > 1
        assert!(wd < 0.0);
    }

    #[test]
    fn printed_entropy_production() {
        assert_eq!(entropy_production_two_level(1.0, 0.37).unwrap(), 0.0);
        for &z in &[0.5, 0.8, 0.99, 1.01, 1.2, 1.5] {
            for &be in &[0.1, 1.0, 10.0] {
                let s = entropy_production_two_level(z, be).unwrap();
                assert_eq!(s.signum(), (z - 1.0f64).signum(), "z = {z}, be = {be}");
            }
        }
        assert!(entropy_production_two_level(0.0, 1.0).is_err());
        assert!(entropy_production_two_level(1.0, -1.0).is_err());
    }

    #[test]
    fn merging_coalesces_close_values() {
        let d = WorkDistribution::from_pairs(
            vec![(1.0, 0.2), (1.0 + 5e-10, 0.3), (2.0, 0.5), (-1.0, 0.0)],
            1e-9,
        )
        .unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.points()[0].probability - 0.5).abs() < 1e-16);
        assert!(d.points()[0].work >= 1.0 && d.points()[0].work <= 1.0 + 5e-10);
        assert!(d.find(2.0 + 1e-10, 1e-9).is_some());
        assert!(d.find(1.5, 1e-9).is_none());
        assert!(WorkDistribution::from_pairs(vec![(0.0, 0.5)], 1e-9).is_err());
    }

    #[test]
    fn mean_work_is_linear_in_mixtures() {
        let a = WorkDistribution::from_pairs(vec![(0.0, 0.25), (1.0, 0.75)], 1e-9).unwrap();
        let b = WorkDistribution::from_pairs(vec![(-2.0, 0.5), (1.0, 0.5)], 1e-9).unwrap();
        let mix = a.mixture(&b, 0.3).unwrap();
        let expected = 0.3 * mean_work(&a) + 0.7 * mean_work(&b);
        assert!((mean_work(&mix) - expected).abs() < 1e-15);
    }

    #[test]
    fn reverse_rejects_complex_hamiltonians() {
        use crate::quantum::CMatrix;
        use num_complex::Complex64;
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, -0.5);
        m[(1, 0)] = Complex64::new(0.0, 0.5);
        let h = HermitianOperator::new(m).unwrap();
        let u = UnitaryOperator::identity(2);
        let err = reverse_distribution(&h, &h, &u, 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Input(ref msg) if msg.contains("time-reversal")));
        // forward still works
        assert!(forward_distribution(&h, &h, &u, 1.0, 1e-9).is_ok());
    }

    #[test]
    fn protocol_rejects_bad_inputs() {
        let h2 = two_level_hamiltonian(1.0).unwrap();
        let h3 = HermitianOperator::diagonal(&[0.0, 1.0, 2.0]);
        let u = UnitaryOperator::identity(2);
        assert!(matches!(TpmProtocol::new(&h2, &h3, &u, 1.0), Err(Error::Dimension { .. })));
        assert!(matches!(TpmProtocol::new(&h2, &h2, &u, 0.0), Err(Error::Input(_))));
        let mut m = crate::quantum::CMatrix::identity(2, 2);
        m[(0, 0)] *= 1.01;
        let not_unitary = UnitaryOperator::new(m, 1.0).unwrap();
        assert!(matches!(TpmProtocol::new(&h2, &h2, &not_unitary, 1.0), Err(Error::Input(_))));
        assert!(delta_f(&h2, &h3, 1.0).is_err());
        assert!(dissipated_work_thermal(&h2, &h3, 1.0).is_err());
    }

    #[test]
    fn report_is_internally_consistent() {
        let (h0, ht) = shifted_two_level(0.7, 1.3);
        let proto = TpmProtocol::new(&h0, &ht, &UnitaryOperator::identity(2), 1.4).unwrap();
        let (rep, _, _) = proto.report(proto.default_merge_tol(), DEFAULT_P_FLOOR).unwrap();
        rep.check_consistency().unwrap();
        assert!((rep.jarzynski_lhs - rep.jarzynski_rhs).abs() < 1e-14);
        assert!(rep.entropy_production > 0.0);
    }
}
