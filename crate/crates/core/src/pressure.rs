//! Topological pressure from cylinder partition functions, with rigorous brackets,
//! and a suite of pressure laws checked on transfer-operator values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::LogSumExp;
use crate::potential::LocallyConstantPotential;
use crate::transfer::{transfer_pressure, TransferOperator};

/// One row of a pressure sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureRow {
    pub n: usize,
    /// `(1/n) log Z_n`.
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Pressure bracket built from partition functions up to `n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureEstimate {
    pub per_n: Vec<PressureRow>,
    pub bracket: (f64, f64),
    pub transfer_value: Option<f64>,
    pub n_max: usize,
}

/// Log partition sums over admissible cylinders of length `group_len`:
/// `log Σ_α exp(sup_{[α]} S_n f)` and the same with `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionSums {
    pub log_sup: f64,
    pub log_inf: f64,
}

struct Walker<'a> {
    f: &'a LocallyConstantPotential,
    n: usize,
    group: usize,
    total: usize,
    word: Vec<usize>,
    sums: Vec<f64>,
    group_max: f64,
    group_min: f64,
    sup: LogSumExp,
    inf: LogSumExp,
}

impl Walker<'_> {
    fn descend(&mut self) {
        let depth = self.word.len();
        if depth == self.group {
            self.group_max = f64::NEG_INFINITY;
            self.group_min = f64::INFINITY;
        }
        if depth == self.total {
            let s = self.sums[depth];
            self.group_max = self.group_max.max(s);
            self.group_min = self.group_min.min(s);
        } else {
            let a = self.f.matrix();
            let k = self.f.k();
            for j in 0..a.d() {
                if depth > 0 && !a.allowed(self.word[depth - 1], j) {
                    continue;
                }
                self.word.push(j);
                let len = depth + 1;
                let mut s = self.sums[depth];
                if len >= k && len - k < self.n {
                    s += self.f.value(&self.word[len - k..]);
                }
                self.sums[len] = s;
                self.descend();
                self.word.pop();
            }
        }
        if depth == self.group {
            self.sup.add(self.group_max);
            self.inf.add(self.group_min);
        }
    }
}

fn check_guard(f: &LocallyConstantPotential, len: usize) -> Result<()> {
    let words = f.matrix().word_count(len);
    if words > crate::WORD_LIMIT {
        return Err(Error::MemoryGuard {
            words,
            limit: crate::WORD_LIMIT,
        });
    }
    Ok(())
}

/// Exact sup/inf partition sums of `S_n f` grouped by cylinders of length `group_len ≤ n`.
///
/// Words of length `n+k−1` are enumerated depth first, one subtree per first
/// letter in parallel, and merged in letter order.
pub fn partition_sums(f: &LocallyConstantPotential, n: usize, group_len: usize) -> Result<PartitionSums> {
    if n == 0 {
        return Err(Error::LengthZero);
    }
    assert!(group_len <= n, "group length exceeds n");
    let total = n + f.k() - 1;
    check_guard(f, total)?;
    let d = f.d();
    let make = || Walker {
        f,
        n,
        group: group_len,
        total,
        word: Vec::with_capacity(total),
        sums: vec![0.0; total + 1],
        group_max: f64::NEG_INFINITY,
        group_min: f64::INFINITY,
        sup: LogSumExp::new(),
        inf: LogSumExp::new(),
    };
    if group_len == 0 {
        let mut w = make();
        w.descend();
        return Ok(PartitionSums {
            log_sup: w.sup.ln(),
            log_inf: w.inf.ln(),
        });
    }
    let parts: Vec<(LogSumExp, LogSumExp)> = (0..d)
        .into_par_iter()
        .map(|first| {
            let mut w = make();
            w.word.push(first);
            let k = f.k();
            w.sums[1] = if k == 1 { f.value(&w.word) } else { 0.0 };
            if group_len == 1 {
                w.group_max = f64::NEG_INFINITY;
                w.group_min = f64::INFINITY;
            }
            w.descend();
            (w.sup, w.inf)
        })
        .collect();
    let mut sup = LogSumExp::new();
    let mut inf = LogSumExp::new();
    for (s, i) in &parts {
        sup.merge(s);
        inf.merge(i);
    }
    Ok(PartitionSums {
        log_sup: sup.ln(),
        log_inf: inf.ln(),
    })
}

/// `Z_n = Σ_{|α|=n} exp(sup_{[α]} S_n f)`.
pub fn partition_function(f: &LocallyConstantPotential, n: usize) -> Result<f64> {
    Ok(partition_sums(f, n, n)?.log_sup.exp())
}

/// `log Z_n`, safe for large Birkhoff sums.
pub fn log_partition_function(f: &LocallyConstantPotential, n: usize) -> Result<f64> {
    Ok(partition_sums(f, n, n)?.log_sup)
}

/// Relative allowance for floating-point rounding in each bracket endpoint.
const ROUNDING: f64 = 64.0 * f64::EPSILON;

/// Pressure bracket from partition functions of lengths `1..=n_max`.
///
/// The upper bound at `n` is the smaller of the subadditive bound
/// `(1/n) log Z_n` and `max_s log((L^n 1)(s) / (L^{n−1} 1)(s))`; the lower bound is
/// the larger of the matching minimum ratio and, for aperiodic `A` with index `N`,
/// `((N−1) min f + log Σ_α exp(inf_{[α]} S_n f)) / (n+N−1)`.
pub fn pressure_estimate(f: &LocallyConstantPotential, n_max: usize) -> Result<PressureEstimate> {
    if n_max == 0 {
        return Err(Error::LengthZero);
    }
    check_guard(f, n_max + f.k() - 1)?;
    let a = f.matrix();
    let index = a.aperiodicity_index();
    let op = TransferOperator::new(f)?;
    let fmin = f.min();

    // log-scaled iterates of L^n 1
    let mut v = vec![1.0; op.dim()];
    let mut per_n = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let next = op.apply(&v);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in next.iter().zip(&v) {
            let r = (x / y).ln();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let scale = next.iter().cloned().fold(0.0, f64::max);
        v = next.into_iter().map(|x| x / scale).collect();

        let sums = partition_sums(f, n, n)?;
        let estimate = sums.log_sup / n as f64;
        let mut lower = lo;
        if let Some(big_n) = index {
            let connector = (big_n - 1) as f64;
            let bound = (connector * fmin + sums.log_inf) / (n as f64 + connector);
            lower = lower.max(bound);
        }
        let upper = estimate.min(hi);
        per_n.push(PressureRow {
            n,
            estimate,
            lower: lower - ROUNDING * (1.0 + lower.abs()),
            upper: upper + ROUNDING * (1.0 + upper.abs()),
        });
    }
    let lower = per_n.iter().map(|r| r.lower).fold(f64::NEG_INFINITY, f64::max);
    let upper = per_n.iter().map(|r| r.upper).fold(f64::INFINITY, f64::min);
    let transfer_value = match index {
        Some(_) => Some(op.rpf_solve(crate::RPF_TOL, crate::RPF_MAX_ITER)?.log_lambda),
        None => None,
    };
    Ok(PressureEstimate {
        per_n,
        bracket: (lower, upper),
        transfer_value,
        n_max,
    })
}

/// Outcome of one law check: `holds` means `lhs ≤ rhs` (or `lhs = rhs`) within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub tolerance: f64,
    pub checks: Vec<LawCheck>,
    pub all_hold: bool,
}

/// Tolerance used by [`pressure_law_suite`].
pub const LAW_TOL: f64 = 1e-8;

fn le(law: &str, lhs: f64, rhs: f64) -> LawCheck {
    LawCheck {
        law: law.to_string(),
        holds: lhs <= rhs + LAW_TOL,
        lhs,
        rhs,
    }
}

fn eq(law: &str, lhs: f64, rhs: f64) -> LawCheck {
    LawCheck {
        law: law.to_string(),
        holds: (lhs - rhs).abs() <= LAW_TOL,
        lhs,
        rhs,
    }
}

/// Checks the classical pressure laws for `f` and `g` on transfer-operator values.
///
/// The seed draws the scalar shift and the coboundary transfer function.
pub fn pressure_law_suite(
    f: &LocallyConstantPotential,
    g: &LocallyConstantPotential,
    seed: u64,
) -> Result<LawReport> {
    let a = f.matrix();
    if g.matrix() != a {
        return Err(Error::AlphabetMismatch);
    }
    if a.aperiodicity_index().is_none() {
        return Err(Error::NotAperiodic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = transfer_pressure;
    let pf = p(f)?;
    let pg = p(g)?;
    let log_r = a.log_spectral_radius()?;
    let mut checks = Vec::new();

    let join = f.zip_with(g, f64::max)?;
    let meet = f.zip_with(g, f64::min)?;
    let (pj, pm) = (p(&join)?, p(&meet)?);
    checks.push(le("monotonicity: P(f∧g) <= P(f)", pm, pf));
    checks.push(le("monotonicity: P(f) <= P(f∨g)", pf, pj));
    checks.push(le("monotonicity: P(g) <= P(f∨g)", pg, pj));

    let shift: f64 = rng.gen_range(-2.0..2.0);
    checks.push(eq("scalar additivity: P(f+c) = P(f)+c", p(&f.affine(1.0, shift))?, pf + shift));

    checks.push(le("bounds: min f + log r(A) <= P(f)", f.min() + log_r, pf));
    checks.push(le("bounds: P(f) <= max f + log r(A)", pf, f.max() + log_r));

    checks.push(le("lipschitz: |P(f)-P(g)| <= ||f-g||", (pf - pg).abs(), f.sup_distance(g)?));

    for c in [2.0, 3.5] {
        checks.push(le(&format!("scaling: P({c}f) <= {c}P(f)"), p(&f.affine(c, 0.0))?, c * pf));
    }
    for c in [0.5, -1.0] {
        checks.push(le(&format!("scaling: {c}P(f) <= P({c}f)"), c * pf, p(&f.affine(c, 0.0))?));
    }

    checks.push(le("absolute value: |P(f)| <= P(|f|)", pf.abs(), p(&f.abs())?));

    for r in [2usize, 3] {
        let (_, fr) = f.birkhoff_power(r)?;
        checks.push(eq(&format!("power law: P_T^{r}(S_{r} f) = {r}P(f)"), p(&fr)?, r as f64 * pf));
    }

    let kb = rng.gen_range(1..=2usize);
    let b = LocallyConstantPotential::random(a, kb, 1.0, &mut rng);
    checks.push(eq("coboundary: P(f + b∘T - b) = P(f)", p(&f.coboundary_perturb(&b)?)?, pf));

    let all_hold = checks.iter().all(|c| c.holds);
    Ok(LawReport {
        tolerance: LAW_TOL,
        checks,
        all_hold,
    })
}
