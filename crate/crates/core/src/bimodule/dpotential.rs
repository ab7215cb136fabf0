//! Elements of the diagonal subalgebra `D`, stored by their word components.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::AlgebraElement;
use super::system::{BimoduleSystem, ZERO_TOL};
use crate::error::{Error, Result};
use crate::potential::LocallyConstantPotential;
use crate::sft::Word;

/// `a = Σ_{|γ|=m} x_γ a_γ x_γ*` with `a_γ = q_γ a_γ q_γ`.
///
/// Components are kept for every word with `q_γ ≠ 0`, in lexicographic order.
/// Range 0 means an element of the coefficient algebra itself.
#[derive(Debug, Clone, PartialEq)]
pub struct DPotential {
    range: usize,
    components: BTreeMap<Word, AlgebraElement>,
}

impl DPotential {
    /// The coefficient `a ∈ A` viewed in `D`.
    pub fn from_coefficient(a: AlgebraElement) -> Self {
        let mut components = BTreeMap::new();
        components.insert(Word::empty(), a);
        Self { range: 0, components }
    }

    pub fn identity(sys: &BimoduleSystem) -> Self {
        Self::from_coefficient(sys.algebra().identity())
    }

    /// A classical potential `f ∈ C(Λ)`: component `f(γ) q_γ` at each word of length `k`.
    pub fn from_classical(sys: &BimoduleSystem, f: &LocallyConstantPotential) -> Result<Self> {
        if f.d() != sys.d() {
            return Err(Error::AlphabetMismatch);
        }
        let mut components = BTreeMap::new();
        for (w, q) in sys.admissible_words(f.k()) {
            let v = f.evaluate(w.letters())?;
            components.insert(w, q.scale(v));
        }
        Ok(Self {
            range: f.k(),
            components,
        })
    }

    /// Validates explicit components: every admissible word of length `range`
    /// must be present, self-adjoint and supported in its corner.
    pub fn from_components(
        sys: &BimoduleSystem,
        range: usize,
        mut given: BTreeMap<Word, AlgebraElement>,
    ) -> Result<Self> {
        let mut components = BTreeMap::new();
        for (w, q) in sys.admissible_words(range) {
            let a = given
                .remove(&w)
                .ok_or_else(|| Error::MissingWord(w.to_string()))?;
            if a.sizes() != sys.sizes() {
                return Err(Error::InvalidAlgebra(format!("component {w} has the wrong block sizes")));
            }
            if !a.is_self_adjoint(1e-12) {
                return Err(Error::InvalidAlgebra(format!("component {w} is not self-adjoint")));
            }
            if q.mul(&a).mul(&q).max_abs_diff(&a) > 1e-12 {
                return Err(Error::InvalidAlgebra(format!(
                    "component {w} is not supported in the corner q_{w}"
                )));
            }
            components.insert(w, a);
        }
        if let Some(w) = given.keys().next() {
            return Err(Error::Inadmissible(w.to_string()));
        }
        Ok(Self { range, components })
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn components(&self) -> &BTreeMap<Word, AlgebraElement> {
        &self.components
    }

    pub fn component(&self, w: &[usize]) -> Option<&AlgebraElement> {
        self.components.get(&Word::new(w.to_vec()))
    }

    fn map(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Self {
        Self {
            range: self.range,
            components: self.components.iter().map(|(w, a)| (w.clone(), f(a))).collect(),
        }
    }

    pub fn scale(&self, t: f64) -> Self {
        self.map(|a| a.scale(t))
    }

    /// Adds the corner projection times `c` to every component, i.e. `a + c·I`.
    pub fn shift(&self, sys: &BimoduleSystem, c: f64) -> Self {
        Self {
            range: self.range,
            components: self
                .components
                .iter()
                .map(|(w, a)| (w.clone(), a.add(&sys.q_word(w.letters()).scale(c))))
                .collect(),
        }
    }

    /// Sum of two elements of the same range.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.range != other.range {
            return Err(Error::RangeMismatch {
                expected: self.range,
                found: other.range,
            });
        }
        let mut components = self.components.clone();
        for (w, b) in &other.components {
            match components.get_mut(w) {
                Some(a) => *a = a.add(b),
                None => {
                    components.insert(w.clone(), b.clone());
                }
            }
        }
        Ok(Self {
            range: self.range,
            components,
        })
    }

    /// The same element written with range `m+1`: component `ρ_i(a_γ)` at `γi`.
    pub fn promote(&self, sys: &BimoduleSystem) -> Self {
        let mut components = BTreeMap::new();
        for (w, a) in &self.components {
            let q = sys.q_word(w.letters());
            for i in 0..sys.d() {
                if sys.rho(i, &q).is_zero(ZERO_TOL) {
                    continue;
                }
                let mut next = w.letters().to_vec();
                next.push(i);
                components.insert(Word::new(next), sys.rho(i, a));
            }
        }
        Self {
            range: self.range + 1,
            components,
        }
    }

    pub fn promote_to(&self, sys: &BimoduleSystem, range: usize) -> Result<Self> {
        if range < self.range {
            return Err(Error::RangeMismatch {
                expected: self.range,
                found: range,
            });
        }
        let mut out = self.clone();
        while out.range < range {
            out = out.promote(sys);
        }
        Ok(out)
    }

    /// `θ(a) = Σ_i x_i a x_i*`: component `q_{iγ} a_γ q_{iγ}` at `iγ`.
    pub fn theta(&self, sys: &BimoduleSystem) -> Self {
        let mut components = BTreeMap::new();
        for i in 0..sys.d() {
            for (w, a) in &self.components {
                let mut next = vec![i];
                next.extend_from_slice(w.letters());
                let q = sys.q_word(&next);
                if q.is_zero(ZERO_TOL) {
                    continue;
                }
                components.insert(Word::new(next), q.mul(a).mul(&q));
            }
        }
        Self {
            range: self.range + 1,
            components,
        }
    }

    /// `a^{(n)} = Σ_{j<n} θ^j(a)`, of range `m+n−1`.
    pub fn birkhoff(&self, sys: &BimoduleSystem, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::LengthZero);
        }
        let target = self.range + n - 1;
        let mut term = self.clone();
        let mut total = term.promote_to(sys, target)?;
        for _ in 1..n {
            term = term.theta(sys);
            total = total.add(&term.promote_to(sys, target)?)?;
        }
        Ok(total)
    }

    /// `x_β* a x_β ∈ A` for `|β| ≥ m`: `ρ_{β'}(q_γ a_γ q_γ)` where `β = γβ'`.
    pub fn compress(&self, sys: &BimoduleSystem, beta: &[usize]) -> Result<AlgebraElement> {
        if beta.len() < self.range {
            return Err(Error::WordTooShort {
                len: beta.len(),
                needed: self.range,
            });
        }
        let (head, tail) = beta.split_at(self.range);
        let base = match self.component(head) {
            Some(a) => {
                let q = sys.q_word(head);
                q.mul(a).mul(&q)
            }
            None => sys.algebra().zero(),
        };
        Ok(sys.rho_word(tail, &base))
    }

    /// `x_α* a x_α ∈ D` for `|α| ≤ m`: range `m − |α|`, component `a_{αδ}` at `δ`.
    pub fn compress_d(&self, sys: &BimoduleSystem, alpha: &[usize]) -> Result<Self> {
        if alpha.len() > self.range {
            return Ok(Self::from_coefficient(self.compress(sys, alpha)?));
        }
        let rest = self.range - alpha.len();
        let mut components = BTreeMap::new();
        for (w, _) in sys.admissible_words(rest) {
            let mut full = alpha.to_vec();
            full.extend_from_slice(w.letters());
            let c = self
                .component(&full)
                .cloned()
                .unwrap_or_else(|| sys.algebra().zero());
            components.insert(w, c);
        }
        Ok(Self {
            range: rest,
            components,
        })
    }

    /// `‖a‖ = max_γ ‖a_γ‖`.
    pub fn norm(&self) -> f64 {
        self.components.values().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.components
            .values()
            .map(|a| a.min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }

    /// `‖[a, b]‖` computed componentwise after promotion to the common range.
    pub fn commutator_norm(&self, sys: &BimoduleSystem, other: &Self) -> Result<f64> {
        let range = self.range.max(other.range);
        let a = self.promote_to(sys, range)?;
        let b = other.promote_to(sys, range)?;
        let mut worst = 0.0f64;
        for (w, x) in &a.components {
            if let Some(y) = b.components.get(w) {
                worst = worst.max(x.commutator(y).norm());
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ComponentJson {
    blocks: Vec<Vec<[f64; 2]>>,
}

/// JSON form: `{"range": m, "components": {"word": {"blocks": [[[re, im], ...], ...]}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DPotentialSpec {
    range: usize,
    components: BTreeMap<String, ComponentJson>,
}

impl DPotentialSpec {
    pub fn from_potential(a: &DPotential) -> Self {
        Self {
            range: a.range,
            components: a
                .components
                .iter()
                .map(|(w, e)| {
                    let blocks = e
                        .blocks()
                        .iter()
                        .map(|b| b.iter().map(|z| [z.re, z.im]).collect())
                        .collect();
                    (w.to_string(), ComponentJson { blocks })
                })
                .collect(),
        }
    }

    pub fn build(&self, sys: &BimoduleSystem) -> Result<DPotential> {
        let mut given = BTreeMap::new();
        for (key, comp) in &self.components {
            let w = Word::parse(key, sys.d())?;
            if w.len() != self.range {
                return Err(Error::RangeMismatch {
                    expected: self.range,
                    found: w.len(),
                });
            }
            let blocks = comp
                .blocks
                .iter()
                .map(|b| b.iter().map(|p| Complex64::new(p[0], p[1])).collect())
                .collect();
            given.insert(w, AlgebraElement::from_blocks(sys.sizes(), blocks)?);
        }
        DPotential::from_components(sys, self.range, given)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::algebra::MultiMatrixAlgebra;
    use crate::bimodule::system::Endomorphism;
    use crate::sft::TransitionMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m2_plus_c() -> BimoduleSystem {
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

    fn random_d(sys: &BimoduleSystem, range: usize, rng: &mut ChaCha8Rng) -> DPotential {
        let mut given = BTreeMap::new();
        for (w, q) in sys.admissible_words(range) {
            let h = AlgebraElement::random_hermitian(sys.sizes(), 1.0, rng);
            given.insert(w, q.mul(&h).mul(&q));
        }
        DPotential::from_components(sys, range, given).unwrap()
    }

    fn random_word(d: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        (0..len).map(|_| rng.gen_range(0..d)).collect()
    }

    #[test]
    fn coefficient_compression_is_rho() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = AlgebraElement::random_hermitian(sys.sizes(), 1.0, &mut rng);
        let d = DPotential::from_coefficient(a.clone());
        for i in 0..2 {
            assert!(d.compress(&sys, &[i]).unwrap().max_abs_diff(&sys.rho(i, &a)) < 1e-15);
        }
    }

    #[test]
    fn cuntz_krieger_compression_is_classical() {
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let sys = BimoduleSystem::cuntz_krieger(&a);
        let f = LocallyConstantPotential::from_fn(&a, 2, |w| (w[0] * 3 + w[1]) as f64 * 0.1).unwrap();
        let d = DPotential::from_classical(&sys, &f).unwrap();
        a.for_each_word(4, |w| {
            let c = d.compress(&sys, w).unwrap();
            let expected = sys.q_word(w).scale(f.value(w));
            assert!(c.max_abs_diff(&expected) < 1e-15);
        });
        // inadmissible word gives zero
        assert!(d.compress(&sys, &[1, 1, 0]).unwrap().is_zero(0.0));
        assert!(matches!(d.compress(&sys, &[0]), Err(Error::WordTooShort { .. })));
    }

    #[test]
    fn promote_then_compress_matches_direct() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for range in 0..=2 {
            let d = random_d(&sys, range, &mut rng);
            let p = d.promote(&sys);
            let pp = p.promote(&sys);
            assert_eq!(pp, d.promote_to(&sys, range + 2).unwrap());
            for _ in 0..50 {
                let len = rng.gen_range(range + 2..range + 5);
                let w = random_word(2, len, &mut rng);
                let direct = d.compress(&sys, &w).unwrap();
                assert!(p.compress(&sys, &w).unwrap().max_abs_diff(&direct) < 1e-13);
                assert!(pp.compress(&sys, &w).unwrap().max_abs_diff(&direct) < 1e-13);
            }
        }
    }

    #[test]
    fn corner_components_stay_projections() {
        let sys = m2_plus_c();
        let mut given = BTreeMap::new();
        for (w, q) in sys.admissible_words(1) {
            given.insert(w, q);
        }
        let d = DPotential::from_components(&sys, 1, given).unwrap();
        for (w, a) in d.promote(&sys).components() {
            assert!(a.max_abs_diff(&sys.q_word(w.letters())) < 1e-15);
        }
    }

    #[test]
    fn theta_of_identity_is_identity() {
        let sys = m2_plus_c();
        let t = DPotential::identity(&sys).theta(&sys);
        assert_eq!(t.range(), 1);
        let id = DPotential::identity(&sys).promote(&sys);
        for (w, a) in t.components() {
            assert!(a.max_abs_diff(&id.components()[w]) < 1e-15);
        }
    }

    #[test]
    fn theta_is_composition_with_the_shift_classically() {
        let a = TransitionMatrix::golden_mean();
        let sys = BimoduleSystem::cuntz_krieger(&a);
        let f = LocallyConstantPotential::from_letters(&a, &[0.3, -1.1]).unwrap();
        let t = DPotential::from_classical(&sys, &f).unwrap().theta(&sys);
        assert_eq!(t.range(), 2);
        for (w, c) in t.components() {
            let expected = sys.q_word(w.letters()).scale(f.value(&w.letters()[1..]));
            assert!(c.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn birkhoff_examples() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_d(&sys, 1, &mut rng);
        assert_eq!(d.birkhoff(&sys, 1).unwrap(), d);
        let id = DPotential::identity(&sys).birkhoff(&sys, 4).unwrap();
        for (w, c) in id.components() {
            assert!(c.max_abs_diff(&sys.q_word(w.letters()).scale(4.0)) < 1e-14);
        }
        let a = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let ck = BimoduleSystem::cuntz_krieger(&a);
        let f = LocallyConstantPotential::random(&a, 2, 1.0, &mut rng);
        let fd = DPotential::from_classical(&ck, &f).unwrap();
        for n in 1..=5 {
            let s = fd.birkhoff(&ck, n).unwrap();
            let table = f.birkhoff(n).unwrap();
            assert_eq!(s.components().len(), table.words.len());
            for (w, v) in table.words.iter().zip(&table.values) {
                let c = &s.components()[w];
                assert!(c.max_abs_diff(&ck.q_word(w.letters()).scale(*v)) < 1e-13);
            }
        }
    }

    #[test]
    fn compress_functoriality() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for range in 1..=3 {
            let d = random_d(&sys, range, &mut rng);
            for _ in 0..30 {
                let la = rng.gen_range(0..=range + 1);
                let alpha = random_word(2, la, &mut rng);
                let lb = rng.gen_range(range.saturating_sub(la)..range + 3);
                let beta = random_word(2, lb, &mut rng);
                let mut ab = alpha.clone();
                ab.extend_from_slice(&beta);
                if ab.len() < range {
                    continue;
                }
                let direct = d.compress(&sys, &ab).unwrap();
                let inner = d.compress_d(&sys, &alpha).unwrap();
                let nested = inner.compress(&sys, &beta).unwrap();
                assert!(direct.max_abs_diff(&nested) < 1e-13);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let sys = m2_plus_c();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_d(&sys, 2, &mut rng);
        let spec = DPotentialSpec::from_potential(&d);
        let text = serde_json::to_string(&spec).unwrap();
        let back: DPotentialSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build(&sys).unwrap(), d);
    }

    #[test]
    fn components_outside_the_corner_are_rejected() {
        let sys = m2_plus_c();
        let mut given = BTreeMap::new();
        for (w, _) in sys.admissible_words(1) {
            given.insert(w, sys.algebra().identity());
        }
        assert!(matches!(
            DPotential::from_components(&sys, 1, given),
            Err(Error::InvalidAlgebra(_))
        ));
    }
}
