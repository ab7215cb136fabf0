//! Partition functions `Σ_{α∈Λ^{(n−1)}} exp‖x_α* a^{(n)} x_α‖` and the pressure bracket
//! `h_top(Λ) ≤ P_θ(a) ≤ ‖a‖ + h_top(Λ)` for positive `a`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::AlgebraElement;
use super::dpotential::DPotential;
use super::system::{BimoduleSystem, ZERO_TOL};
use crate::error::{Error, Result};
use crate::numeric::LogSumExp;
use crate::pressure::{PressureEstimate, PressureRow};

/// `log Z_n` for the Birkhoff sum `b = a^{(n)}`, where each `(n−1)`-word contributes
/// `exp(max_δ ‖b_{αδ}‖)`.
fn log_partition_of(sys: &BimoduleSystem, b: &DPotential, n: usize) -> f64 {
    let words = sys.admissible_words(n - 1);
    let norms: Vec<f64> = words
        .par_iter()
        .map(|(alpha, _)| {
            b.components()
                .range(alpha.clone()..)
                .take_while(|(w, _)| w.letters().starts_with(alpha.letters()))
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut acc = LogSumExp::new();
    for x in norms {
        acc.add(x);
    }
    acc.ln()
}

fn check_corners(sys: &BimoduleSystem) -> Result<()> {
    if sys.corner_sum_invertible() {
        Ok(())
    } else {
        Err(Error::NotInvertibleCornerSum)
    }
}

/// Running Birkhoff sums `a^{(1)}, a^{(2)}, ...` built by `a^{(n+1)} = a^{(n)} + θ^n(a)`.
struct BirkhoffIter<'a> {
    sys: &'a BimoduleSystem,
    term: DPotential,
    total: DPotential,
    n: usize,
}

impl<'a> BirkhoffIter<'a> {
    fn new(sys: &'a BimoduleSystem, a: &DPotential) -> Self {
        Self {
            sys,
            term: a.clone(),
            total: a.clone(),
            n: 1,
        }
    }

    fn advance(&mut self) -> Result<()> {
        self.term = self.term.theta(self.sys);
        self.total = self.total.promote(self.sys).add(&self.term)?;
        self.n += 1;
        Ok(())
    }
}

/// `log Z_n(a)`.
pub fn bimodule_log_partition(sys: &BimoduleSystem, a: &DPotential, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::LengthZero);
    }
    check_corners(sys)?;
    let b = a.birkhoff(sys, n)?;
    Ok(log_partition_of(sys, &b, n))
}

/// `Z_n(a) = Σ_{α∈Λ^{(n−1)}} exp‖x_α* a^{(n)} x_α‖`.
pub fn bimodule_partition(sys: &BimoduleSystem, a: &DPotential, n: usize) -> Result<f64> {
    Ok(bimodule_log_partition(sys, a, n)?.exp())
}

/// `log Z_1, ..., log Z_{n_max}`.
pub fn bimodule_log_partitions(sys: &BimoduleSystem, a: &DPotential, n_max: usize) -> Result<Vec<f64>> {
    check_corners(sys)?;
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return Ok(out);
    }
    let mut it = BirkhoffIter::new(sys, a);
    loop {
        out.push(log_partition_of(sys, &it.total, it.n));
        if it.n == n_max {
            break;
        }
        it.advance()?;
    }
    Ok(out)
}

/// Pressure of a positive `a ∈ D`.
///
/// With `s_n = Z_{n+1}` submultiplicative, row `n` reports `(1/n) log Z_n` as the
/// estimate, the Fekete bound `min_{j≤n} (1/j) log s_j` as the upper value and
/// `h_top(Λ)` as the lower value. The bracket is intersected with `[h_top, ‖a‖ + h_top]`.
pub fn bimodule_pressure(sys: &BimoduleSystem, a: &DPotential, n_max: usize) -> Result<PressureEstimate> {
    if n_max == 0 {
        return Err(Error::LengthZero);
    }
    let lam = a.min_eigenvalue();
    if lam < -ZERO_TOL {
        return Err(Error::NotPositive(lam));
    }
    let logs = bimodule_log_partitions(sys, a, n_max + 1)?;
    let h_top = sys.h_top()?;
    let norm = a.norm();
    let mut fekete = f64::INFINITY;
    let mut per_n = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        fekete = fekete.min(logs[n] / n as f64);
        per_n.push(PressureRow {
            n,
            estimate: logs[n - 1] / n as f64,
            lower: h_top,
            upper: fekete,
        });
    }
    Ok(PressureEstimate {
        per_n,
        bracket: (h_top, fekete.min(norm + h_top)),
        transfer_value: None,
        n_max,
    })
}

/// Commutator norms for one word length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutationRow {
    pub length: usize,
    /// `max_{|α|=length} ‖[a, x_α* a x_α]‖`
    pub compressed: f64,
    /// `max_{|α|=length} ‖[a, q_α]‖`
    pub projection: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub rows: Vec<CommutationRow>,
    /// Smallest `p` with both commutators vanishing for `p ≤ |α| ≤ L`.
    pub p: Option<usize>,
}

pub fn check_commutation(sys: &BimoduleSystem, a: &DPotential, max_len: usize) -> Result<CommutationReport> {
    let mut rows = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        let mut compressed = 0.0f64;
        let mut projection = 0.0f64;
        for (alpha, q) in sys.admissible_words(len) {
            let c = a.compress_d(sys, alpha.letters())?;
            compressed = compressed.max(a.commutator_norm(sys, &c)?);
            let qd = DPotential::from_coefficient(q);
            projection = projection.max(a.commutator_norm(sys, &qd)?);
        }
        rows.push(CommutationRow {
            length: len,
            compressed,
            projection,
        });
    }
    let mut p = None;
    for row in rows.iter().rev() {
        if row.compressed <= ZERO_TOL && row.projection <= ZERO_TOL {
            p = Some(row.length);
        } else {
            break;
        }
    }
    Ok(CommutationReport { rows, p })
}

/// `‖x_α* a x_α‖` for a word of any length.
pub fn compressed_norm(sys: &BimoduleSystem, a: &DPotential, alpha: &[usize]) -> Result<f64> {
    Ok(a.compress_d(sys, alpha)?.norm())
}

/// Constant element `c·I` of `D`.
pub fn scalar_potential(sys: &BimoduleSystem, c: f64) -> DPotential {
    DPotential::from_coefficient(AlgebraElement::scalar(sys.sizes(), c))
}
