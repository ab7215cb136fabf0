//! Endomorphisms given by Bratteli multiplicities and the bimodule systems they generate.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::numeric::{perron_root, SquareMatrix};
use crate::sft::{TransitionMatrix, Word};

/// Projections with norm at most this are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// A *-homomorphism `ρ: A → A` in canonical form.
///
/// `multiplicities[t][s]` copies of block `s` sit along the diagonal of block `t`,
/// in order of `s`, starting at the top-left corner; the rest of block `t` is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endomorphism {
    pub multiplicities: Vec<Vec<usize>>,
}

impl Endomorphism {
    fn validate(&self, sizes: &[usize]) -> Result<()> {
        let s = sizes.len();
        if self.multiplicities.len() != s || self.multiplicities.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidAlgebra(format!(
                "multiplicity matrix must be {s}×{s}"
            )));
        }
        for (t, row) in self.multiplicities.iter().enumerate() {
            let used: usize = row.iter().zip(sizes).map(|(m, n)| m * n).sum();
            if used > sizes[t] {
                return Err(Error::InvalidAlgebra(format!(
                    "block {} of size {} cannot hold {} diagonal entries",
                    t + 1,
                    sizes[t],
                    used
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let sizes = a.sizes().to_vec();
        let mut out = AlgebraElement::zero(&sizes);
        for (t, row) in self.multiplicities.iter().enumerate() {
            let nt = sizes[t];
            let target = out.block_mut(t);
            let mut offset = 0;
            for (s, &mult) in row.iter().enumerate() {
                let ns = sizes[s];
                let src = a.block(s);
                for _ in 0..mult {
                    for i in 0..ns {
                        for j in 0..ns {
                            target[(offset + i) * nt + offset + j] = src[i * ns + j];
                        }
                    }
                    offset += ns;
                }
            }
        }
        out
    }
}

/// A Hilbert bimodule `X = q_1 A ⊕ … ⊕ q_d A` with left actions `ρ_1, …, ρ_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BimoduleSystem {
    algebra: MultiMatrixAlgebra,
    endos: Vec<Endomorphism>,
}

impl BimoduleSystem {
    pub fn new(algebra: MultiMatrixAlgebra, endos: Vec<Endomorphism>) -> Result<Self> {
        if endos.is_empty() {
            return Err(Error::InvalidAlgebra("at least one endomorphism is required".into()));
        }
        for e in &endos {
            e.validate(algebra.block_sizes())?;
        }
        Ok(Self { algebra, endos })
    }

    /// The commutative system of a transition matrix: `A = C^d`, `ρ_i(a) = Σ_t A[i][t] a_i p_t`,
    /// so that `q_i = Σ_t A[i][t] p_t`.
    pub fn cuntz_krieger(a: &TransitionMatrix) -> Self {
        let d = a.d();
        let endos = (0..d)
            .map(|i| Endomorphism {
                multiplicities: (0..d)
                    .map(|t| (0..d).map(|s| usize::from(s == i && a.allowed(i, t))).collect())
                    .collect(),
            })
            .collect();
        Self::new(MultiMatrixAlgebra::new(vec![1; d]).expect("valid sizes"), endos).expect("valid system")
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn sizes(&self) -> &[usize] {
        self.algebra.block_sizes()
    }

    pub fn endomorphisms(&self) -> &[Endomorphism] {
        &self.endos
    }

    /// Module rank.
    pub fn d(&self) -> usize {
        self.endos.len()
    }

    pub fn rho(&self, i: usize, a: &AlgebraElement) -> AlgebraElement {
        self.endos[i].apply(a)
    }

    /// `ρ_{w_last} ∘ … ∘ ρ_{w_1}` applied to `a`.
    pub fn rho_word(&self, w: &[usize], a: &AlgebraElement) -> AlgebraElement {
        w.iter().fold(a.clone(), |acc, &i| self.rho(i, &acc))
    }

    /// `q_α = x_α* x_α`, with `q_∅ = I` and `q_{αj} = ρ_j(q_α)`.
    pub fn q_word(&self, w: &[usize]) -> AlgebraElement {
        self.rho_word(w, &self.algebra.identity())
    }

    pub fn corner(&self, i: usize) -> AlgebraElement {
        self.q_word(&[i])
    }

    pub fn is_admissible(&self, w: &[usize]) -> bool {
        w.iter().all(|&l| l < self.d()) && !self.q_word(w).is_zero(ZERO_TOL)
    }

    /// True when `Σ_i ρ_i(I)` is invertible.
    pub fn corner_sum_invertible(&self) -> bool {
        let sum = (0..self.d()).fold(self.algebra.zero(), |acc, i| acc.add(&self.corner(i)));
        sum.min_eigenvalue() > ZERO_TOL
    }

    /// Words of length `n` with `q_α ≠ 0`, with their projections, in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Vec<(Word, AlgebraElement)> {
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(n);
        self.extend(&mut word, self.algebra.identity(), n, &mut out);
        out
    }

    fn extend(&self, word: &mut Vec<usize>, q: AlgebraElement, n: usize, out: &mut Vec<(Word, AlgebraElement)>) {
        if word.len() == n {
            out.push((Word::new(word.clone()), q));
            return;
        }
        for j in 0..self.d() {
            let next = self.rho(j, &q);
            if next.is_zero(ZERO_TOL) {
                continue;
            }
            word.push(j);
            self.extend(word, next, n, out);
            word.pop();
        }
    }

    /// The deterministic automaton reading words letter by letter, whose states are the
    /// distinct nonzero projections `q_α`; returns the transition count matrix with
    /// state 0 equal to `I`.
    pub fn language_automaton(&self) -> SquareMatrix {
        let key = |q: &AlgebraElement| -> Vec<i64> {
            q.blocks()
                .iter()
                .flat_map(|b| b.iter().flat_map(|z: &Complex64| [(z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64]))
                .collect()
        };
        let mut ids: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut states = vec![self.algebra.identity()];
        ids.insert(key(&states[0]), 0);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for j in 0..self.d() {
                let next = self.rho(j, &states[i]);
                if next.is_zero(ZERO_TOL) {
                    continue;
                }
                let k = key(&next);
                let id = match ids.get(&k) {
                    Some(&id) => id,
                    None => {
                        states.push(next);
                        ids.insert(k, states.len() - 1);
                        states.len() - 1
                    }
                };
                edges.push((i, id));
            }
            i += 1;
        }
        let mut m = SquareMatrix::zeros(states.len());
        for (a, b) in edges {
            m.set(a, b, m.get(a, b) + 1.0);
        }
        m
    }

    /// `ϑ_n = #{α : |α| = n, q_α ≠ 0}`.
    pub fn word_count(&self, n: usize) -> f64 {
        let m = self.language_automaton();
        let mut v = vec![0.0; m.dim()];
        v[0] = 1.0;
        for _ in 0..n {
            v = m.vec_mul(&v);
        }
        v.iter().sum()
    }

    /// Topological entropy of the subshift `{α : q_α ≠ 0}`.
    pub fn h_top(&self) -> Result<f64> {
        let m = self.language_automaton();
        Ok(perron_root(&m, crate::SPECTRAL_TOL, crate::SPECTRAL_MAX_ITER)?.radius.ln())
    }
}

/// JSON form of a system file: `{"blocks": [...], "endos": [{"multiplicities": [[...]]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub blocks: Vec<usize>,
    pub endos: Vec<Endomorphism>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<BimoduleSystem> {
        BimoduleSystem::new(MultiMatrixAlgebra::new(self.blocks.clone())?, self.endos.clone())
    }

    pub fn from_system(sys: &BimoduleSystem) -> Self {
        Self {
            blocks: sys.sizes().to_vec(),
            endos: sys.endomorphisms().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn m2_plus_c() -> BimoduleSystem {
        BimoduleSystem::new(
            MultiMatrixAlgebra::new(vec![2, 1]).unwrap(),
            vec![
                Endomorphism {
                    multiplicities: vec![vec![1, 0], vec![0, 1]],
                },
                Endomorphism {
                    multiplicities: vec![vec![0, 1], vec![0, 1]],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn oversized_embedding_rejected() {
        let e = Endomorphism {
            multiplicities: vec![vec![1, 1], vec![0, 1]],
        };
        assert!(BimoduleSystem::new(MultiMatrixAlgebra::new(vec![2, 1]).unwrap(), vec![e]).is_err());
    }

    #[test]
    fn endomorphisms_are_star_homomorphisms() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in 0..sys.d() {
            let q = sys.corner(i);
            assert!(q.mul(&q).max_abs_diff(&q) <= 1e-12);
            assert!(q.is_self_adjoint(0.0));
            for _ in 0..20 {
                let a = AlgebraElement::random(sys.sizes(), &mut rng);
                let b = AlgebraElement::random(sys.sizes(), &mut rng);
                assert!(sys.rho(i, &a.mul(&b)).max_abs_diff(&sys.rho(i, &a).mul(&sys.rho(i, &b))) <= 1e-10);
                assert!(sys.rho(i, &a.adjoint()).max_abs_diff(&sys.rho(i, &a).adjoint()) <= 1e-10);
            }
        }
    }

    #[test]
    fn cuntz_krieger_projections_follow_the_matrix() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let sys = BimoduleSystem::cuntz_krieger(&a);
        for i in 0..3 {
            let q = sys.q_word(&[i]);
            for t in 0..3 {
                assert_eq!(q.entry(t, 0, 0).re, if a.allowed(i, t) { 1.0 } else { 0.0 });
            }
            for j in 0..3 {
                assert_eq!(sys.is_admissible(&[i, j]), a.allowed(i, j));
            }
        }
        for n in 1..=7 {
            assert_eq!(sys.admissible_words(n).len() as u128, a.word_count(n));
            assert_eq!(sys.word_count(n) as u128, a.word_count(n));
        }
        assert!((sys.h_top().unwrap() - a.log_spectral_radius().unwrap()).abs() < 1e-12);
        assert!(sys.corner_sum_invertible());
    }

    #[test]
    fn identity_endomorphisms_give_full_shift() {
        let id = Endomorphism {
            multiplicities: vec![vec![1]],
        };
        let sys = BimoduleSystem::new(MultiMatrixAlgebra::new(vec![3]).unwrap(), vec![id.clone(), id]).unwrap();
        for w in [vec![0], vec![1, 0, 1], vec![1, 1, 1, 0]] {
            assert_eq!(sys.q_word(&w), AlgebraElement::identity(&[3]));
        }
        assert!((sys.h_top().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn m2_plus_c_is_a_full_two_shift() {
        let sys = m2_plus_c();
        assert!(sys.corner_sum_invertible());
        assert_eq!(sys.word_count(6), 64.0);
        assert!((sys.h_top().unwrap() - 2f64.ln()).abs() < 1e-12);
    }
}
