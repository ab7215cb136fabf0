//! KMS data for the gauge-type dynamics `α^{β,a}` on a Cuntz–Krieger algebra,
//! represented through its diagonal restriction.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::compensated_sum;
use crate::potential::LocallyConstantPotential;
use crate::sft::Word;
use crate::transfer::{RpfData, TransferOperator};

/// Inverse temperature, its a priori bounds and the uniqueness verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmsReport {
    pub beta: f64,
    /// `min f + log r(A)`
    pub lower_bound: f64,
    /// `max f + log r(A)`
    pub upper_bound: f64,
    pub var0: f64,
    #[serde(rename = "log_rA")]
    pub log_ra: f64,
    /// `var_0(f) < log r(A)` strictly, with `A` aperiodic.
    pub unique: bool,
    /// Set when `var_0(f)` and `log r(A)` agree within the tolerance.
    pub warning: Option<String>,
    /// Finite-range potentials have summable variation.
    pub holder_ok: bool,
    pub aperiodicity_index: usize,
    /// Eigenmeasure weights of the transfer-state cylinders.
    pub mu: BTreeMap<Word, f64>,
    /// Equilibrium weights of the transfer-state cylinders.
    pub nu: BTreeMap<Word, f64>,
}

/// Solves for `β = log λ` and evaluates the bounds and the uniqueness condition.
pub fn kms_analyze(f: &LocallyConstantPotential, tol: f64) -> Result<KmsReport> {
    let a = f.matrix();
    let index = a.aperiodicity_index().ok_or(crate::Error::NotAperiodic)?;
    let op = TransferOperator::new(f)?;
    let rpf = op.rpf_solve(tol, crate::RPF_MAX_ITER)?;
    let log_ra = a.log_spectral_radius()?;
    let var0 = f.var_n(0);
    let margin = log_ra - var0;
    let boundary = margin.abs() <= tol.max(1e-12) * (1.0 + log_ra.abs());
    let unique = margin > 0.0 && !boundary;
    let warning = boundary.then(|| {
        format!("var_0(f) = {var0} equals log r(A) = {log_ra} within tolerance; the strict uniqueness condition fails")
    });
    let weights = op.cylinder_weights(&rpf, op.m())?;
    Ok(KmsReport {
        beta: rpf.log_lambda,
        lower_bound: f.min() + log_ra,
        upper_bound: f.max() + log_ra,
        var0,
        log_ra,
        unique,
        warning,
        holder_ok: true,
        aperiodicity_index: index,
        mu: weights.iter().map(|c| (c.word.clone(), c.mu)).collect(),
        nu: weights.into_iter().map(|c| (c.word, c.nu)).collect(),
    })
}

/// `max |μ(L g) − λ μ(g)| / ‖g‖_∞` over random test vectors `g` on the transfer states.
pub fn scaling_identity_check(op: &TransferOperator, rpf: &RpfData, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g: Vec<f64> = (0..op.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm == 0.0 {
            continue;
        }
        let lg = op.apply(&g);
        let lhs = compensated_sum(rpf.mu.iter().zip(&lg).map(|(a, b)| a * b));
        let rhs = rpf.lambda * compensated_sum(rpf.mu.iter().zip(&g).map(|(a, b)| a * b));
        worst = worst.max((lhs - rhs).abs() / norm);
    }
    worst
}

/// Weights `σ([w]) = μ(h 1_{[w]})` of the equilibrium state on `m_out`-cylinders.
pub fn equilibrium_restriction(op: &TransferOperator, rpf: &RpfData, m_out: usize) -> Result<Vec<(Word, f64)>> {
    Ok(op
        .cylinder_weights(rpf, m_out)?
        .into_iter()
        .map(|c| (c.word, c.nu))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::TransitionMatrix;
    use crate::transfer::rpf;

    const LOG_PHI: f64 = 0.481_211_825_059_603_4;

    #[test]
    fn golden_mean_zero_potential() {
        let r = kms_analyze(&LocallyConstantPotential::zero(&TransitionMatrix::golden_mean()), 1e-12).unwrap();
        assert!((r.beta - LOG_PHI).abs() < 1e-12);
        assert!((r.lower_bound - LOG_PHI).abs() < 1e-12 && (r.upper_bound - LOG_PHI).abs() < 1e-12);
        assert!(r.unique);
        assert!(r.warning.is_none());
    }

    #[test]
    fn boundary_case_is_not_unique() {
        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        let r = kms_analyze(&f, 1e-12).unwrap();
        assert!((r.beta - 3f64.ln()).abs() < 1e-12);
        assert!((r.lower_bound - 2f64.ln()).abs() < 1e-12);
        assert!((r.upper_bound - 4f64.ln()).abs() < 1e-12);
        assert!(!r.unique);
        assert!(r.warning.is_some());
    }

    #[test]
    fn small_oscillation_is_unique() {
        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 0.1]).unwrap();
        let r = kms_analyze(&f, 1e-12).unwrap();
        assert!((r.beta - (1.0 + 0.1f64.exp()).ln()).abs() < 1e-12);
        assert!(r.unique);
    }

    #[test]
    fn scaling_identity() {
        let gm = TransitionMatrix::golden_mean();
        let (op, data) = rpf(&LocallyConstantPotential::zero(&gm)).unwrap();
        assert!(scaling_identity_check(&op, &data, 100, 4) <= 1e-10);
        let one = vec![1.0; op.dim()];
        let l1 = op.apply(&one);
        let lhs: f64 = data.mu.iter().zip(&l1).map(|(a, b)| a * b).sum();
        assert!((lhs - data.lambda).abs() < 1e-12);
    }

    #[test]
    fn restriction_is_positive_and_zero_off_language() {
        let gm = TransitionMatrix::golden_mean();
        let (op, data) = rpf(&LocallyConstantPotential::zero(&gm)).unwrap();
        let w = equilibrium_restriction(&op, &data, 4).unwrap();
        assert!(w.iter().all(|(_, x)| *x > 0.0));
        assert_eq!(op.cylinder_weight(&data, &[1, 1, 0]), (0.0, 0.0));
    }
}
