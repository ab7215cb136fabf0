//! Matrix form of the Ruelle operator and its Perron–Frobenius–Ruelle data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::MarkovMeasure;
use crate::numeric::{compensated_sum, solve_linear, SquareMatrix};
use crate::potential::LocallyConstantPotential;
use crate::sft::Word;

/// Plain power steps before switching to the squared start.
const WARM_ITER: usize = 1000;

/// The Ruelle operator `(L g)(x) = Σ_{i: A[i][x_1]=1} e^{f(ix)} g(ix)` acting on
/// functions of the first `m = max(k−1, 1)` coordinates.
///
/// `matrix[s][t]` is `e^{f(i·s)}` when `t = (i·s)[..m]`, so `L g = M g` on state vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOperator {
    potential: LocallyConstantPotential,
    m: usize,
    states: Vec<Word>,
    matrix: SquareMatrix,
}

/// Eigendata of a transfer operator: `M h = λ h`, `μ M = λ μ`, `Σ μ = 1`, `μ(h) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpfData {
    pub lambda: f64,
    pub log_lambda: f64,
    pub h: Vec<f64>,
    pub mu: Vec<f64>,
    /// `μ(h)` after normalization.
    pub mu_h: f64,
    /// `‖M h − λ h‖_∞ / ‖h‖_∞` and `‖μ M − λ μ‖_1`.
    pub residuals: [f64; 2],
    pub iterations: usize,
}

/// Weights of an admissible cylinder under the eigenmeasure `μ` and the equilibrium measure `ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderWeight {
    pub word: Word,
    pub mu: f64,
    pub nu: f64,
}

impl TransferOperator {
    pub fn new(f: &LocallyConstantPotential) -> Result<Self> {
        let a = f.matrix();
        let k = f.k();
        let m = k.saturating_sub(1).max(1);
        let states = a.admissible_words(m)?;
        let n = states.len();
        let mut matrix = SquareMatrix::zeros(n);
        let index = |w: &[usize]| {
            states
                .binary_search_by(|s| s.letters().cmp(w))
                .expect("admissible state")
        };
        let mut word = Vec::with_capacity(m + 1);
        for (si, s) in states.iter().enumerate() {
            let s = s.letters();
            for i in 0..a.d() {
                if !a.allowed(i, s[0]) {
                    continue;
                }
                word.clear();
                word.push(i);
                word.extend_from_slice(s);
                let t = index(&word[..m]);
                matrix.set(si, t, f.value(&word).exp());
            }
        }
        Ok(Self {
            potential: f.clone(),
            m,
            states,
            matrix,
        })
    }

    pub fn potential(&self) -> &LocallyConstantPotential {
        &self.potential
    }

    /// Length of the words indexing the states.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, w: &[usize]) -> Option<usize> {
        self.states.binary_search_by(|s| s.letters().cmp(w)).ok()
    }

    /// `L g`
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(g)
    }

    /// `L* μ`, i.e. the row vector `μ M`.
    pub fn apply_dual(&self, mu: &[f64]) -> Vec<f64> {
        self.matrix.vec_mul(mu)
    }

    /// Simultaneous power iteration for `h` and `μ`. Requires `A` aperiodic.
    ///
    /// When the first thousand steps do not settle, the iteration restarts from
    /// the columns and rows of `M^(2^j)`, which resolves small spectral gaps.
    pub fn rpf_solve(&self, tol: f64, max_iter: usize) -> Result<RpfData> {
        if self.potential.matrix().aperiodicity_index().is_none() {
            return Err(Error::NotAperiodic);
        }
        let n = self.dim();
        let warm = max_iter.min(WARM_ITER);
        let start = vec![1.0 / n as f64; n];
        if let Some(done) = self.power_phase(start.clone(), start, tol, warm, 0) {
            return Ok(done);
        }
        let (h, mu) = self.squared_start();
        let (h, mu) = self.inverse_refine(h, mu);
        self.power_phase(h, mu, tol, max_iter - warm, warm)
            .ok_or(Error::NoConvergence(max_iter))
    }

    fn power_phase(&self, mut h: Vec<f64>, mut mu: Vec<f64>, tol: f64, steps: usize, done: usize) -> Option<RpfData> {
        for it in 1..=steps {
            let mh = self.apply(&h);
            let lam_h = compensated_sum(mh.iter().cloned());
            h = mh.into_iter().map(|x| x / lam_h).collect();
            let mm = self.apply_dual(&mu);
            let lam_mu = compensated_sum(mm.iter().cloned());
            mu = mm.into_iter().map(|x| x / lam_mu).collect();

            let scale = lam_h.max(1.0);
            if (lam_h - lam_mu).abs() > tol * scale {
                continue;
            }
            let (rh, rmu) = self.residuals(&h, &mu, lam_h);
            if rh <= tol * scale && rmu <= tol * scale {
                let (h, mu, extra) = self.polish(h, mu, rh + rmu);
                return Some(self.finish(h, mu, done + it + extra));
            }
        }
        None
    }

    /// Inverse iteration with a shift just above the current eigenvalue estimate.
    fn inverse_refine(&self, mut h: Vec<f64>, mut mu: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
        let normalize = |v: Vec<f64>| {
            let total = compensated_sum(v.iter().cloned());
            v.into_iter().map(|x| x / total).collect::<Vec<f64>>()
        };
        for _ in 0..4 {
            let sigma = self.rayleigh(&h, &mu) * (1.0 + 1e-10);
            let mut shifted = self.matrix.clone();
            for i in 0..shifted.dim() {
                shifted.set(i, i, shifted.get(i, i) - sigma);
            }
            let (Some(nh), Some(nmu)) = (solve_linear(&shifted, &h), solve_linear(&shifted.transpose(), &mu)) else {
                break;
            };
            h = normalize(nh);
            mu = normalize(nmu);
        }
        (h, mu)
    }

    /// Row and column sums of `M^(2^j)` once successive squarings agree.
    fn squared_start(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let ones = vec![1.0; n];
        let normalize = |v: Vec<f64>| {
            let total = compensated_sum(v.iter().cloned());
            v.into_iter().map(|x| x / total).collect::<Vec<f64>>()
        };
        let mut p = self.matrix.clone();
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        for _ in 0..64 {
            p = p.mul(&p);
            let top = p.max_entry();
            p.scale(1.0 / top);
            let h = normalize(p.mul_vec(&ones));
            let mu = normalize(p.vec_mul(&ones));
            if let Some((ph, pm)) = &prev {
                let dh = h.iter().zip(ph).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let dm = mu.iter().zip(pm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if dh <= 1e-15 && dm <= 1e-15 {
                    return (h, mu);
                }
            }
            prev = Some((h, mu));
        }
        prev.expect("at least one squaring")
    }

    fn residuals(&self, h: &[f64], mu: &[f64], lambda: f64) -> (f64, f64) {
        let mh = self.apply(h);
        let hmax = h.iter().cloned().fold(0.0, f64::max);
        let rh = mh
            .iter()
            .zip(h)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max)
            / hmax;
        let mm = self.apply_dual(mu);
        let rmu = mm.iter().zip(mu).map(|(a, b)| (a - lambda * b).abs()).sum();
        (rh, rmu)
    }

    /// Extra power steps while the residuals keep shrinking.
    fn polish(&self, mut h: Vec<f64>, mut mu: Vec<f64>, mut best: f64) -> (Vec<f64>, Vec<f64>, usize) {
        for extra in 0..200 {
            let mh = self.apply(&h);
            let lh = compensated_sum(mh.iter().cloned());
            let nh: Vec<f64> = mh.into_iter().map(|x| x / lh).collect();
            let mm = self.apply_dual(&mu);
            let lm = compensated_sum(mm.iter().cloned());
            let nmu: Vec<f64> = mm.into_iter().map(|x| x / lm).collect();
            let (rh, rmu) = self.residuals(&nh, &nmu, self.rayleigh(&nh, &nmu));
            if rh + rmu >= best {
                return (h, mu, extra);
            }
            best = rh + rmu;
            h = nh;
            mu = nmu;
        }
        (h, mu, 200)
    }

    /// `μ(L h) / μ(h)`.
    fn rayleigh(&self, h: &[f64], mu: &[f64]) -> f64 {
        let lh = self.apply(h);
        compensated_sum(mu.iter().zip(&lh).map(|(a, b)| a * b)) / compensated_sum(mu.iter().zip(h).map(|(a, b)| a * b))
    }

    fn finish(&self, h: Vec<f64>, mu: Vec<f64>, iterations: usize) -> RpfData {
        let lambda = self.rayleigh(&h, &mu);
        let total = compensated_sum(mu.iter().cloned());
        let mu: Vec<f64> = mu.into_iter().map(|x| x / total).collect();
        let mu_h = compensated_sum(mu.iter().zip(&h).map(|(a, b)| a * b));
        let h: Vec<f64> = h.into_iter().map(|x| x / mu_h).collect();
        let (rh, rmu) = self.residuals(&h, &mu, lambda);
        let mu_h = compensated_sum(mu.iter().zip(&h).map(|(a, b)| a * b));
        RpfData {
            lambda,
            log_lambda: lambda.ln(),
            h,
            mu,
            mu_h,
            residuals: [rh, rmu],
            iterations,
        }
    }

    /// `e_n = ‖L^n f0 / λ^n − μ(f0) h‖_∞` for `n = 1..=n_max`.
    pub fn convergence_profile(&self, rpf: &RpfData, f0: &[f64], n_max: usize) -> Vec<f64> {
        let target_scale = compensated_sum(rpf.mu.iter().zip(f0).map(|(a, b)| a * b)) / rpf.mu_h;
        let target: Vec<f64> = rpf.h.iter().map(|x| x * target_scale).collect();
        let mut v = f0.to_vec();
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            v = self.apply(&v).into_iter().map(|x| x / rpf.lambda).collect();
            let e = v
                .iter()
                .zip(&target)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            out.push(e);
        }
        out
    }

    /// The equilibrium measure `ν = μ(h·)` as a Markov measure on the transfer states:
    /// `P[s][t] = M[t][s] μ[t] / (λ μ[s])`, `p[s] = μ[s] h[s]`.
    pub fn equilibrium_markov(&self, rpf: &RpfData) -> Result<MarkovMeasure> {
        let n = self.dim();
        let mut p_rows = vec![vec![0.0; n]; n];
        for (s, row) in p_rows.iter_mut().enumerate() {
            for (t, slot) in row.iter_mut().enumerate() {
                let w = self.matrix.get(t, s);
                if w > 0.0 {
                    *slot = w * rpf.mu[t] / (rpf.lambda * rpf.mu[s]);
                }
            }
            let total = compensated_sum(row.iter().cloned());
            for x in row.iter_mut() {
                *x /= total;
            }
        }
        let p: Vec<f64> = rpf.mu.iter().zip(&rpf.h).map(|(a, b)| a * b).collect();
        let total = compensated_sum(p.iter().cloned());
        let p: Vec<f64> = p.into_iter().map(|x| x / total).collect();
        MarkovMeasure::from_parts(self.potential.matrix(), self.m, p_rows, Some(p))
    }

    /// `μ` and `ν` weights of one cylinder; zero when `w` is inadmissible.
    pub fn cylinder_weight(&self, rpf: &RpfData, w: &[usize]) -> (f64, f64) {
        let a = self.potential.matrix();
        if w.is_empty() {
            return (1.0, 1.0);
        }
        if !a.is_admissible(w) {
            return (0.0, 0.0);
        }
        let m = self.m;
        if w.len() < m {
            let mut mu = 0.0;
            let mut nu = 0.0;
            let mut ext = w.to_vec();
            for j in a.successors(w[w.len() - 1]) {
                ext.push(j);
                let (x, y) = self.cylinder_weight(rpf, &ext);
                mu += x;
                nu += y;
                ext.pop();
            }
            return (mu, nu);
        }
        let steps = w.len() - m;
        let tail = self.state_index(&w[steps..]).expect("admissible suffix");
        let head = self.state_index(&w[..m]).expect("admissible prefix");
        let log_w = self.potential.birkhoff_sum(w, steps) - steps as f64 * rpf.log_lambda;
        let mu = log_w.exp() * rpf.mu[tail];
        (mu, rpf.h[head] * mu)
    }

    /// Weights of every admissible cylinder of length `m_out`, in lexicographic order.
    pub fn cylinder_weights(&self, rpf: &RpfData, m_out: usize) -> Result<Vec<CylinderWeight>> {
        let words = self.potential.matrix().admissible_words(m_out)?;
        Ok(words
            .into_iter()
            .map(|word| {
                let (mu, nu) = self.cylinder_weight(rpf, word.letters());
                CylinderWeight { word, mu, nu }
            })
            .collect())
    }
}

/// Convenience wrapper: build the operator for `f` and solve with default tolerances.
pub fn rpf(f: &LocallyConstantPotential) -> Result<(TransferOperator, RpfData)> {
    let op = TransferOperator::new(f)?;
    let data = op.rpf_solve(crate::RPF_TOL, crate::RPF_MAX_ITER)?;
    Ok((op, data))
}

/// `log λ` for `f`, the transfer-operator value of the pressure.
pub fn transfer_pressure(f: &LocallyConstantPotential) -> Result<f64> {
    Ok(rpf(f)?.1.log_lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::TransitionMatrix;

    const PHI: f64 = 1.618_033_988_749_895;

    fn two_state_eigen(m: &SquareMatrix) -> f64 {
        let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let tr = a + d;
        let det = a * d - b * c;
        (tr + (tr * tr - 4.0 * det).sqrt()) / 2.0
    }

    #[test]
    fn build_examples() {
        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        let op = TransferOperator::new(&f).unwrap();
        assert_eq!(op.matrix().rows(), vec![vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!((two_state_eigen(op.matrix()) - 3.0).abs() < 1e-14);

        let gm = TransitionMatrix::golden_mean();
        let z = TransferOperator::new(&LocallyConstantPotential::zero(&gm)).unwrap();
        assert_eq!(z.matrix(), &gm.to_square().transpose());
        assert!((two_state_eigen(z.matrix()) - PHI).abs() < 1e-14);

        let c = TransferOperator::new(&LocallyConstantPotential::constant(&gm, 0.3)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((c.matrix().get(i, j) - 0.3f64.exp() * z.matrix().get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn range_two_operator_acts_as_ruelle_operator() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        let f = LocallyConstantPotential::from_fn(&a, 3, |w| (w[0] + 2 * w[1] + 3 * w[2]) as f64 * 0.1).unwrap();
        let op = TransferOperator::new(&f).unwrap();
        assert_eq!(op.m(), 2);
        // g depends on the first two coordinates; compare with the defining sum on every state
        let g: Vec<f64> = (0..op.dim()).map(|i| (i as f64 + 1.0).sqrt()).collect();
        let lg = op.apply(&g);
        for (si, s) in op.states().iter().enumerate() {
            let s = s.letters();
            let mut direct = 0.0;
            for i in 0..3 {
                if a.allowed(i, s[0]) {
                    let t = op.state_index(&[i, s[0]]).unwrap();
                    direct += f.value(&[i, s[0], s[1]]).exp() * g[t];
                }
            }
            assert!((lg[si] - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn rpf_full_shift() {
        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        let (_, r) = rpf(&f).unwrap();
        assert!((r.lambda - 3.0).abs() < 1e-12);
        assert!((r.log_lambda - 3f64.ln()).abs() < 1e-12);
        assert!((r.mu[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.mu[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.h[0] - 1.0).abs() < 1e-12 && (r.h[1] - 1.0).abs() < 1e-12);
        assert!((r.mu_h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rpf_golden_mean() {
        let gm = TransitionMatrix::golden_mean();
        let (op, r) = rpf(&LocallyConstantPotential::zero(&gm)).unwrap();
        assert!((r.lambda - PHI).abs() < 1e-12);
        // μ is the left Perron vector (φ, 1) normalized to a probability vector
        assert!((r.mu[0] - 1.0 / PHI).abs() < 1e-12);
        assert!((r.mu[1] - 1.0 / (PHI * PHI)).abs() < 1e-12);
        // ν = μ h gives the Parry marginals (φ²/(1+φ²), 1/(1+φ²))
        let w = op.cylinder_weights(&r, 1).unwrap();
        assert!((w[0].nu - PHI * PHI / (1.0 + PHI * PHI)).abs() < 1e-12);
        assert!((w[1].nu - 1.0 / (1.0 + PHI * PHI)).abs() < 1e-12);
    }

    #[test]
    fn rpf_constant_shift() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let r0 = a.spectral_radius(1e-13, 10_000).unwrap().radius;
        let (_, r) = rpf(&LocallyConstantPotential::constant(&a, -0.4)).unwrap();
        assert!((r.lambda - (-0.4f64).exp() * r0).abs() < 1e-11);
    }

    #[test]
    fn periodic_matrix_is_rejected() {
        let perm = TransitionMatrix::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        let op = TransferOperator::new(&LocallyConstantPotential::zero(&perm)).unwrap();
        assert_eq!(op.rpf_solve(1e-12, 1000), Err(Error::NotAperiodic));
    }

    #[test]
    fn convergence_profile_examples() {
        let gm = TransitionMatrix::golden_mean();
        let (op, r) = rpf(&LocallyConstantPotential::zero(&gm)).unwrap();
        let e = op.convergence_profile(&r, &r.h, 30);
        assert!(e.iter().all(|&x| x <= 1e-12), "{e:?}");
        let e = op.convergence_profile(&r, &[1.0, 0.0], 200);
        assert!(e[199] < 1e-8);
        assert!(e.iter().all(|x| x.is_finite()));
        let e = op.convergence_profile(&r, &[0.0, 0.0], 10);
        assert!(e.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn equilibrium_markov_examples() {
        let gm = TransitionMatrix::golden_mean();
        let (op, r) = rpf(&LocallyConstantPotential::zero(&gm)).unwrap();
        let m = op.equilibrium_markov(&r).unwrap();
        let p = m.transition_rows();
        assert!((p[0][0] - 1.0 / PHI).abs() < 1e-12);
        assert!((p[0][1] - 1.0 / (PHI * PHI)).abs() < 1e-12);
        assert!((p[1][0] - 1.0).abs() < 1e-12 && p[1][1] == 0.0);
        assert!((m.stationary()[0] - 0.723_606_797_749_979).abs() < 1e-12);

        let full = TransitionMatrix::full(2);
        let f = LocallyConstantPotential::from_letters(&full, &[0.0, 2f64.ln()]).unwrap();
        let (op, r) = rpf(&f).unwrap();
        let m = op.equilibrium_markov(&r).unwrap();
        for row in m.transition_rows() {
            assert!((row[0] - 1.0 / 3.0).abs() < 1e-12 && (row[1] - 2.0 / 3.0).abs() < 1e-12);
        }
        let w = op.cylinder_weights(&r, 1).unwrap();
        assert!((w[0].nu - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn markov_cylinders_agree_with_equilibrium_weights() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        let f = LocallyConstantPotential::from_fn(&a, 3, |w| ((w[0] * 7 + w[1] * 3 + w[2]) % 5) as f64 * 0.2)
            .unwrap();
        let (op, r) = rpf(&f).unwrap();
        let m = op.equilibrium_markov(&r).unwrap();
        for len in 1..=5 {
            for cw in op.cylinder_weights(&r, len).unwrap() {
                let markov = m.cylinder_weight(cw.word.letters());
                assert!((markov - cw.nu).abs() < 1e-12, "{} {} {}", cw.word, markov, cw.nu);
            }
        }
    }
}
