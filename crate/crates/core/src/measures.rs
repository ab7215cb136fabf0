//! Markov measures on a subshift of finite type: entropy, integrals, free energy and
//! the search for the free-energy maximizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, project_simplex, solve_linear, SquareMatrix};
use crate::potential::LocallyConstantPotential;
use crate::sft::{TransitionMatrix, Word};
use crate::transfer::TransferOperator;

const STOCHASTIC_TOL: f64 = 1e-12;

/// A shift-invariant Markov measure whose states are admissible `m`-words.
///
/// State `s` may move to `t` only when `t = s[1..]·j` and `s·j` is admissible.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    matrix: TransitionMatrix,
    m: usize,
    states: Vec<Word>,
    rows: Vec<Vec<f64>>,
    p: Vec<f64>,
    /// `(letter, target state)` pairs for each state.
    succ: Vec<Vec<(usize, usize)>>,
}

/// Entropy, integral and free energy of a measure, compared with a reference pressure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyReport {
    pub entropy: f64,
    pub integral: f64,
    pub free_energy: f64,
    pub pressure_gap: f64,
}

fn state_successors(matrix: &TransitionMatrix, states: &[Word]) -> Vec<Vec<(usize, usize)>> {
    let index = |w: &[usize]| {
        states
            .binary_search_by(|s| s.letters().cmp(w))
            .expect("admissible state")
    };
    states
        .iter()
        .map(|s| {
            let s = s.letters();
            let last = s[s.len() - 1];
            matrix
                .successors(last)
                .map(|j| {
                    let mut t = s[1..].to_vec();
                    t.push(j);
                    (j, index(&t))
                })
                .collect()
        })
        .collect()
}

/// Stationary vector of an irreducible stochastic matrix via `p (I − P + 1·1ᵀ) = 1ᵀ`.
pub fn stationary_vector(rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut sys = SquareMatrix::zeros(n);
    for (s, row) in rows.iter().enumerate() {
        for (t, &x) in row.iter().enumerate() {
            let v = if s == t { 1.0 } else { 0.0 } - x + 1.0;
            sys.set(t, s, v);
        }
    }
    let p = solve_linear(&sys, &vec![1.0; n])?;
    if p.iter().any(|&x| x < -1e-12) {
        return None;
    }
    let p: Vec<f64> = p.into_iter().map(|x| x.max(0.0)).collect();
    let total = compensated_sum(p.iter().cloned());
    Some(p.into_iter().map(|x| x / total).collect())
}

impl MarkovMeasure {
    /// Validates a transition matrix on `m`-word states and its stationary vector.
    /// When `p` is omitted it is computed by a linear solve.
    pub fn from_parts(
        matrix: &TransitionMatrix,
        m: usize,
        rows: Vec<Vec<f64>>,
        p: Option<Vec<f64>>,
    ) -> Result<Self> {
        let states = matrix.admissible_words(m)?;
        let n = states.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure(format!(
                "transition matrix must be {n}×{n} over the admissible {m}-words"
            )));
        }
        let succ = state_successors(matrix, &states);
        for (s, row) in rows.iter().enumerate() {
            for (t, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidMeasure(format!(
                        "entry ({}, {}) is not a probability",
                        s + 1,
                        t + 1
                    )));
                }
                if x > 0.0 && !succ[s].iter().any(|&(_, u)| u == t) {
                    return Err(Error::InvalidMeasure(format!(
                        "transition {} -> {} is not admissible",
                        states[s], states[t]
                    )));
                }
            }
            let total = compensated_sum(row.iter().cloned());
            if (total - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidMeasure(format!(
                    "row {} sums to {total}",
                    s + 1
                )));
            }
        }
        let p = match p {
            Some(p) => {
                if p.len() != n || p.iter().any(|&x| !x.is_finite() || x < 0.0) {
                    return Err(Error::InvalidMeasure("stationary vector is not a probability vector".into()));
                }
                let total = compensated_sum(p.iter().cloned());
                if (total - 1.0).abs() > STOCHASTIC_TOL {
                    return Err(Error::InvalidMeasure(format!("stationary vector sums to {total}")));
                }
                for t in 0..n {
                    let pt = compensated_sum((0..n).map(|s| p[s] * rows[s][t]));
                    if (pt - p[t]).abs() > STOCHASTIC_TOL {
                        return Err(Error::InvalidMeasure(format!(
                            "vector is not stationary at state {}",
                            states[t]
                        )));
                    }
                }
                p
            }
            None => stationary_vector(&rows)
                .ok_or_else(|| Error::InvalidMeasure("chain has no unique stationary vector".into()))?,
        };
        Ok(Self {
            matrix: matrix.clone(),
            m,
            states,
            rows,
            p,
            succ,
        })
    }

    /// Bernoulli measure with the given letter probabilities on the full shift.
    pub fn bernoulli(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        let rows = vec![probs.to_vec(); d];
        Self::from_parts(&TransitionMatrix::full(d), 1, rows, Some(probs.to_vec()))
    }

    /// Parry measure: the equilibrium measure of the zero potential.
    pub fn parry(matrix: &TransitionMatrix) -> Result<Self> {
        let (op, rpf) = crate::transfer::rpf(&LocallyConstantPotential::zero(matrix))?;
        op.equilibrium_markov(&rpf)
    }

    /// Rows drawn from the flat Dirichlet distribution on the admissible support.
    pub fn random<R: Rng>(matrix: &TransitionMatrix, m: usize, rng: &mut R) -> Result<Self> {
        let states = matrix.admissible_words(m)?;
        let succ = state_successors(matrix, &states);
        let n = states.len();
        let rows: Vec<Vec<f64>> = succ
            .iter()
            .map(|out| {
                let mut row = vec![0.0; n];
                let draws = dirichlet_row(out.len(), rng);
                for (&(_, t), x) in out.iter().zip(draws) {
                    row[t] = x;
                }
                row
            })
            .collect();
        Self::from_parts(matrix, m, rows, None)
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn transition_rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn stationary(&self) -> &[f64] {
        &self.p
    }

    fn index(&self, w: &[usize]) -> usize {
        self.states
            .binary_search_by(|s| s.letters().cmp(w))
            .expect("admissible state")
    }

    /// Probability of the cylinder `[w]`; zero for inadmissible words.
    pub fn cylinder_weight(&self, w: &[usize]) -> f64 {
        if w.is_empty() {
            return 1.0;
        }
        if !self.matrix.is_admissible(w) {
            return 0.0;
        }
        if w.len() < self.m {
            let mut ext = w.to_vec();
            let mut total = 0.0;
            for j in self.matrix.successors(w[w.len() - 1]) {
                ext.push(j);
                total += self.cylinder_weight(&ext);
                ext.pop();
            }
            return total;
        }
        let m = self.m;
        let mut s = self.index(&w[..m]);
        let mut weight = self.p[s];
        for i in 1..=w.len() - m {
            let t = self.index(&w[i..i + m]);
            weight *= self.rows[s][t];
            s = t;
        }
        weight
    }

    /// The same measure written on `m2`-word states, `m2 ≥ m`.
    pub fn recode(&self, m2: usize) -> Result<Self> {
        if m2 < self.m {
            return Err(Error::RangeMismatch {
                expected: self.m,
                found: m2,
            });
        }
        let states = self.matrix.admissible_words(m2)?;
        let succ = state_successors(&self.matrix, &states);
        let n = states.len();
        let off = m2 - self.m;
        let mut rows = vec![vec![0.0; n]; n];
        for (u, out) in succ.iter().enumerate() {
            let a = self.index(&states[u].letters()[off..]);
            for &(_, v) in out {
                let b = self.index(&states[v].letters()[off..]);
                rows[u][v] = self.rows[a][b];
            }
        }
        let p = states.iter().map(|w| self.cylinder_weight(w.letters())).collect();
        Self::from_parts(&self.matrix, m2, rows, Some(p))
    }

    /// Kolmogorov–Sinai entropy `−Σ p_s P_st log P_st`, with `0 log 0 = 0`.
    pub fn ks_entropy(&self) -> f64 {
        let terms = self.rows.iter().zip(&self.p).flat_map(|(row, &ps)| {
            row.iter()
                .filter(|&&x| x > 0.0)
                .map(move |&x| -ps * x * x.max(1e-300).ln())
        });
        compensated_sum(terms)
    }

    /// `∫ f dμ` summed over cylinders of length `max(k, m)`.
    pub fn integrate(&self, f: &LocallyConstantPotential) -> Result<f64> {
        if f.matrix() != &self.matrix {
            return Err(Error::AlphabetMismatch);
        }
        let len = f.k().max(self.m);
        let mut terms = Vec::new();
        self.matrix
            .for_each_word(len, |w| terms.push(self.cylinder_weight(w) * f.value(w)));
        Ok(compensated_sum(terms))
    }

    pub fn free_energy(&self, f: &LocallyConstantPotential, pressure_ref: f64) -> Result<FreeEnergyReport> {
        let entropy = self.ks_entropy();
        let integral = self.integrate(f)?;
        let free_energy = entropy + integral;
        Ok(FreeEnergyReport {
            entropy,
            integral,
            free_energy,
            pressure_gap: pressure_ref - free_energy,
        })
    }
}

fn dirichlet_row<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Best measure found by [`variational_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalResult {
    pub measure: MarkovMeasure,
    pub report: FreeEnergyReport,
    /// Index of the winning restart.
    pub restart: usize,
    pub iterations: usize,
}

/// Free energy as a function of the transition probabilities on the transfer states.
struct FreeEnergyProblem {
    n: usize,
    succ: Vec<Vec<(usize, usize)>>,
    /// `f(s·j)` for each successor edge.
    reward: Vec<Vec<f64>>,
}

const FLOOR: f64 = 1e-12;

impl FreeEnergyProblem {
    fn new(f: &LocallyConstantPotential) -> Result<Self> {
        let m = f.k().saturating_sub(1).max(1);
        let states = f.matrix().admissible_words(m)?;
        let succ = state_successors(f.matrix(), &states);
        let reward = states
            .iter()
            .zip(&succ)
            .map(|(s, out)| {
                out.iter()
                    .map(|&(j, _)| {
                        let mut w = s.letters().to_vec();
                        w.push(j);
                        f.value(&w)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n: states.len(),
            succ,
            reward,
        })
    }

    fn dense(&self, q: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for (s, out) in self.succ.iter().enumerate() {
            for (e, &(_, t)) in out.iter().enumerate() {
                rows[s][t] += q[s][e];
            }
        }
        rows
    }

    fn row_values(&self, q: &[Vec<f64>]) -> Vec<f64> {
        q.iter()
            .zip(&self.reward)
            .map(|(row, c)| {
                row.iter()
                    .zip(c)
                    .map(|(&x, &c)| if x > 0.0 { x * (c - x.ln()) } else { 0.0 })
                    .sum()
            })
            .collect()
    }

    fn value(&self, q: &[Vec<f64>]) -> Option<(f64, Vec<f64>)> {
        let p = stationary_vector(&self.dense(q))?;
        let r = self.row_values(q);
        Some((compensated_sum(p.iter().zip(&r).map(|(a, b)| a * b)), p))
    }

    /// Gradient of the free energy divided row-wise by `p_s`:
    /// `c_st − log P_st − 1 + (Z r)_t` with `Z = (I − P + 1 p)^{-1}`.
    fn scaled_gradient(&self, q: &[Vec<f64>], p: &[f64]) -> Option<Vec<Vec<f64>>> {
        let rows = self.dense(q);
        let n = self.n;
        let mut sys = SquareMatrix::zeros(n);
        for (s, row) in rows.iter().enumerate() {
            for t in 0..n {
                let v = if s == t { 1.0 } else { 0.0 } - row[t] + p[t];
                sys.set(s, t, v);
            }
        }
        let y = solve_linear(&sys, &self.row_values(q))?;
        Some(
            self.succ
                .iter()
                .enumerate()
                .map(|(s, out)| {
                    out.iter()
                        .enumerate()
                        .map(|(e, &(_, t))| self.reward[s][e] - q[s][e].max(FLOOR).ln() - 1.0 + y[t])
                        .collect()
                })
                .collect(),
        )
    }

    fn project(&self, q: &[Vec<f64>]) -> Vec<Vec<f64>> {
        q.iter()
            .map(|row| {
                if row.len() == 1 {
                    vec![1.0]
                } else {
                    project_simplex(row, FLOOR)
                }
            })
            .collect()
    }

    fn initial<R: Rng>(&self, rng: &mut R) -> Vec<Vec<f64>> {
        let q: Vec<Vec<f64>> = self.succ.iter().map(|out| dirichlet_row(out.len(), rng)).collect();
        self.project(&q)
    }

    /// Projected gradient ascent with Armijo backtracking.
    fn ascend(&self, mut q: Vec<Vec<f64>>, iters: usize) -> (Vec<Vec<f64>>, usize) {
        let Some((mut value, mut p)) = self.value(&q) else {
            return (q, 0);
        };
        let mut step = 1.0f64;
        let mut stalled = 0;
        for it in 0..iters {
            let Some(g) = self.scaled_gradient(&q, &p) else {
                return (q, it);
            };
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<Vec<f64>> = q
                    .iter()
                    .zip(&g)
                    .map(|(row, gr)| row.iter().zip(gr).map(|(x, d)| x + step * d).collect())
                    .collect();
                let trial = self.project(&trial);
                let ascent: f64 = (0..self.n)
                    .map(|s| {
                        p[s] * trial[s]
                            .iter()
                            .zip(&q[s])
                            .zip(&g[s])
                            .map(|((a, b), d)| (a - b) * d)
                            .sum::<f64>()
                    })
                    .sum();
                if let Some((v, pt)) = self.value(&trial) {
                    if v >= value + 1e-4 * ascent && ascent >= 0.0 {
                        let gain = v - value;
                        q = trial;
                        p = pt;
                        value = v;
                        accepted = true;
                        if gain <= 1e-15 * (1.0 + value.abs()) {
                            stalled += 1;
                        } else {
                            stalled = 0;
                        }
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted || stalled >= 5 {
                return (q, it + 1);
            }
            step = (step * 2.0).min(1e3);
        }
        (q, iters)
    }
}

/// Maximizes `h_μ + μ(f)` over Markov measures supported on the transfer-state transitions.
///
/// Each restart starts from its own seeded random stream; restarts run in
/// parallel and the best result wins, ties going to the lowest restart index.
/// With `restarts = 0` the first initialization is returned unoptimized.
pub fn variational_search(
    f: &LocallyConstantPotential,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<VariationalResult> {
    let a = f.matrix();
    if a.aperiodicity_index().is_none() {
        return Err(Error::NotAperiodic);
    }
    let pressure = crate::transfer::transfer_pressure(f)?;
    let problem = FreeEnergyProblem::new(f)?;
    let m = f.k().saturating_sub(1).max(1);
    let run = |r: usize, optimize: bool| -> (Vec<Vec<f64>>, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let q0 = problem.initial(&mut rng);
        if optimize {
            problem.ascend(q0, iters)
        } else {
            (q0, 0)
        }
    };
    let candidates: Vec<(Vec<Vec<f64>>, usize)> = if restarts == 0 {
        vec![run(0, false)]
    } else {
        (0..restarts).into_par_iter().map(|r| run(r, true)).collect()
    };
    let mut best: Option<VariationalResult> = None;
    for (r, (q, its)) in candidates.into_iter().enumerate() {
        let measure = MarkovMeasure::from_parts(a, m, problem.dense(&q), None)?;
        let report = measure.free_energy(f, pressure)?;
        let better = match &best {
            None => true,
            Some(b) => report.free_energy > b.report.free_energy,
        };
        if better {
            best = Some(VariationalResult {
                measure,
                report,
                restart: r,
                iterations: its,
            });
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Largest discrepancy between the analytic gradient and central differences
/// along in-row tangent directions `e_{s,a} − e_{s,b}`.
pub fn gradient_check(f: &LocallyConstantPotential, seed: u64, h: f64) -> Result<f64> {
    let problem = FreeEnergyProblem::new(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = problem.initial(&mut rng);
    let (_, p) = problem
        .value(&q)
        .ok_or_else(|| Error::InvalidMeasure("no stationary vector".into()))?;
    let g = problem
        .scaled_gradient(&q, &p)
        .ok_or_else(|| Error::InvalidMeasure("singular fundamental matrix".into()))?;
    let mut worst = 0.0f64;
    for s in 0..problem.n {
        let len = q[s].len();
        for a in 0..len {
            for b in a + 1..len {
                let analytic = p[s] * (g[s][a] - g[s][b]);
                let shifted = |sign: f64| {
                    let mut t = q.clone();
                    t[s][a] += sign * h;
                    t[s][b] -= sign * h;
                    problem.value(&t).map(|(v, _)| v).unwrap_or(f64::NAN)
                };
                let numeric = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
                worst = worst.max((analytic - numeric).abs());
            }
        }
    }
    Ok(worst)
}

/// Free energy of the equilibrium measure of `f` together with `log λ`.
pub fn equilibrium_free_energy(f: &LocallyConstantPotential) -> Result<(MarkovMeasure, FreeEnergyReport)> {
    let op = TransferOperator::new(f)?;
    let rpf = op.rpf_solve(crate::RPF_TOL, crate::RPF_MAX_ITER)?;
    let measure = op.equilibrium_markov(&rpf)?;
    let report = measure.free_energy(f, rpf.log_lambda)?;
    Ok((measure, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG_PHI: f64 = 0.481_211_825_059_603_4;

    #[test]
    fn entropy_examples() {
        let b = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        assert!((b.ks_entropy() - 2f64.ln()).abs() < 1e-15);
        let parry = MarkovMeasure::parry(&TransitionMatrix::golden_mean()).unwrap();
        assert!((parry.ks_entropy() - LOG_PHI).abs() < 1e-12);
        let perm = TransitionMatrix::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        let cycle = MarkovMeasure::from_parts(&perm, 1, vec![vec![0.0, 1.0], vec![1.0, 0.0]], None).unwrap();
        assert_eq!(cycle.ks_entropy(), 0.0);
        assert_eq!(cycle.stationary(), &[0.5, 0.5]);
    }

    #[test]
    fn integral_examples() {
        let full = TransitionMatrix::full(2);
        let b = MarkovMeasure::bernoulli(&[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        assert!((b.integrate(&f).unwrap() - 2.0 / 3.0 * 2f64.ln()).abs() < 1e-15);
        let c = LocallyConstantPotential::constant(&full, 1.25);
        assert!((b.integrate(&c).unwrap() - 1.25).abs() < 1e-15);
        let gm = TransitionMatrix::golden_mean();
        let parry = MarkovMeasure::parry(&gm).unwrap();
        let ind = LocallyConstantPotential::from_letters(&gm, &[0.0, 1.0]).unwrap();
        assert!((parry.integrate(&ind).unwrap() - 0.276_393_202_250_021).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_input() {
        let gm = TransitionMatrix::golden_mean();
        let bad_support = MarkovMeasure::from_parts(&gm, 1, vec![vec![0.5, 0.5], vec![0.5, 0.5]], None);
        assert!(matches!(bad_support, Err(Error::InvalidMeasure(_))));
        let bad_rows = MarkovMeasure::from_parts(&gm, 1, vec![vec![0.5, 0.4], vec![1.0, 0.0]], None);
        assert!(matches!(bad_rows, Err(Error::InvalidMeasure(_))));
        let bad_p = MarkovMeasure::from_parts(&gm, 1, vec![vec![0.5, 0.5], vec![1.0, 0.0]], Some(vec![0.5, 0.5]));
        assert!(matches!(bad_p, Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn recoding_preserves_entropy_and_cylinders() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mu = MarkovMeasure::random(&a, 1, &mut rng).unwrap();
            let two = mu.recode(2).unwrap();
            assert!((mu.ks_entropy() - two.ks_entropy()).abs() < 1e-10);
            a.for_each_word(4, |w| {
                assert!((mu.cylinder_weight(w) - two.cylinder_weight(w)).abs() < 1e-14);
            });
        }
    }

    #[test]
    fn free_energy_examples() {
        let gm = TransitionMatrix::golden_mean();
        let zero = LocallyConstantPotential::zero(&gm);
        let (_, rep) = equilibrium_free_energy(&zero).unwrap();
        assert!((rep.free_energy - LOG_PHI).abs() < 1e-12);
        assert!(rep.pressure_gap.abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = LocallyConstantPotential::random(&gm, 2, 1.0, &mut rng);
        let p = crate::transfer::transfer_pressure(&f).unwrap();
        for _ in 0..50 {
            let mu = MarkovMeasure::random(&gm, 1, &mut rng).unwrap();
            assert!(mu.free_energy(&f, p).unwrap().pressure_gap >= -1e-10);
        }
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 1..=3 {
            let f = LocallyConstantPotential::random(&a, k, 1.0, &mut rng);
            let err = gradient_check(&f, 7, 1e-6).unwrap();
            assert!(err < 1e-6, "k = {k}: {err}");
        }
    }

    #[test]
    fn search_finds_parry_and_bernoulli() {
        let gm = TransitionMatrix::golden_mean();
        let res = variational_search(&LocallyConstantPotential::zero(&gm), 4, 500, 1).unwrap();
        assert!((res.report.free_energy - LOG_PHI).abs() < 1e-6);
        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        let res = variational_search(&f, 4, 500, 1).unwrap();
        assert!((res.report.free_energy - 3f64.ln()).abs() < 1e-6);
        let rows = res.measure.transition_rows();
        assert!((rows[0][1] - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn search_without_restarts_returns_initialization() {
        let gm = TransitionMatrix::golden_mean();
        let res = variational_search(&LocallyConstantPotential::zero(&gm), 0, 500, 9).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.report.pressure_gap >= 0.0);
        let again = variational_search(&LocallyConstantPotential::zero(&gm), 0, 500, 9).unwrap();
        assert_eq!(res.measure, again.measure);
    }

    #[test]
    fn search_rejects_periodic_matrix() {
        let perm = TransitionMatrix::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        let res = variational_search(&LocallyConstantPotential::zero(&perm), 1, 10, 0);
        assert_eq!(res.err(), Some(Error::NotAperiodic));
    }
}
