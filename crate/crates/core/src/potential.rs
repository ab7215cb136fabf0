//! Locally constant potentials on a subshift of finite type.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sft::{BlockRecoding, TransitionMatrix, Word};

/// A real function on `Λ_A` depending on the first `k` coordinates.
///
/// Values are kept in a dense table indexed by the base-`d` code of a
/// `k`-word; entries of inadmissible words are zero and never read.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential {
    matrix: TransitionMatrix,
    k: usize,
    values: Vec<f64>,
}

/// Birkhoff sums `S_n f` on admissible `(n+k−1)`-words, lexicographically ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffTable {
    pub n: usize,
    pub k: usize,
    pub words: Vec<Word>,
    pub values: Vec<f64>,
}

impl BirkhoffTable {
    pub fn get(&self, w: &[usize]) -> Option<f64> {
        self.words
            .binary_search_by(|x| x.letters().cmp(w))
            .ok()
            .map(|i| self.values[i])
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn code_of(letters: &[usize], d: usize) -> usize {
    letters.iter().fold(0, |c, &l| c * d + l)
}

impl LocallyConstantPotential {
    /// Tabulates `value` on every admissible `k`-word.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(
        matrix: &TransitionMatrix,
        k: usize,
        mut value: F,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::LengthZero);
        }
        let d = matrix.d();
        let size = d
            .checked_pow(k as u32)
            .filter(|&s| s <= 1 << 28)
            .ok_or(Error::MemoryGuard {
                words: (d as u128).saturating_pow(k as u32),
                limit: 1 << 28,
            })?;
        let mut values = vec![0.0; size];
        let mut bad = None;
        matrix.for_each_word(k, |w| {
            let v = value(w);
            if !v.is_finite() && bad.is_none() {
                bad = Some(Word::new(w.to_vec()).to_string());
            }
            values[code_of(w, d)] = v;
        });
        if let Some(w) = bad {
            return Err(Error::NonFiniteValue(w));
        }
        Ok(Self {
            matrix: matrix.clone(),
            k,
            values,
        })
    }

    /// Builds a potential from an explicit table, which must cover every
    /// admissible `k`-word and nothing else.
    pub fn from_map(matrix: &TransitionMatrix, k: usize, table: &BTreeMap<Word, f64>) -> Result<Self> {
        for w in table.keys() {
            if w.len() != k {
                return Err(Error::RangeMismatch {
                    expected: k,
                    found: w.len(),
                });
            }
            matrix.check_word(w.letters())?;
        }
        let mut missing = None;
        matrix.for_each_word(k, |w| {
            if missing.is_none() && !table.contains_key(&Word::new(w.to_vec())) {
                missing = Some(Word::new(w.to_vec()).to_string());
            }
        });
        if let Some(w) = missing {
            return Err(Error::MissingWord(w));
        }
        Self::from_fn(matrix, k, |w| table[&Word::new(w.to_vec())])
    }

    pub fn constant(matrix: &TransitionMatrix, c: f64) -> Self {
        Self::from_fn(matrix, 1, |_| c).expect("constant potential")
    }

    pub fn zero(matrix: &TransitionMatrix) -> Self {
        Self::constant(matrix, 0.0)
    }

    /// Range-1 potential from its values on the letters.
    pub fn from_letters(matrix: &TransitionMatrix, values: &[f64]) -> Result<Self> {
        if values.len() != matrix.d() {
            return Err(Error::AlphabetMismatch);
        }
        Self::from_fn(matrix, 1, |w| values[w[0]])
    }

    /// Values drawn uniformly from `[-scale, scale]` on every admissible `k`-word.
    pub fn random<R: Rng>(matrix: &TransitionMatrix, k: usize, scale: f64, rng: &mut R) -> Self {
        Self::from_fn(matrix, k, |_| rng.gen_range(-scale..=scale)).expect("finite values")
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.matrix.d()
    }

    /// Table lookup on an admissible `k`-word. No checks.
    #[inline]
    pub fn value(&self, w: &[usize]) -> f64 {
        self.values[code_of(&w[..self.k], self.matrix.d())]
    }

    /// Value of `f` on the cylinder of `w`, which must be admissible and at least `k` long.
    pub fn evaluate(&self, w: &[usize]) -> Result<f64> {
        if w.len() < self.k {
            return Err(Error::WordTooShort {
                len: w.len(),
                needed: self.k,
            });
        }
        self.matrix.check_word(w)?;
        Ok(self.value(w))
    }

    /// `(word, value)` pairs in lexicographic order.
    pub fn table(&self) -> Vec<(Word, f64)> {
        let mut out = Vec::new();
        self.matrix
            .for_each_word(self.k, |w| out.push((Word::new(w.to_vec()), self.value(w))));
        out
    }

    pub fn values(&self) -> Vec<f64> {
        self.table().into_iter().map(|(_, v)| v).collect()
    }

    pub fn max(&self) -> f64 {
        self.values().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `S_n f(w) = Σ_{j<n} f(σ^j w)` for a word of length at least `n+k−1`. No checks.
    pub fn birkhoff_sum(&self, w: &[usize], n: usize) -> f64 {
        (0..n).map(|j| self.value(&w[j..])).sum()
    }

    pub fn birkhoff(&self, n: usize) -> Result<BirkhoffTable> {
        if n == 0 {
            return Err(Error::LengthZero);
        }
        let len = n + self.k - 1;
        let mut words = Vec::new();
        let mut values = Vec::new();
        self.matrix.for_each_word(len, |w| {
            words.push(Word::new(w.to_vec()));
            values.push(self.birkhoff_sum(w, n));
        });
        Ok(BirkhoffTable {
            n,
            k: self.k,
            words,
            values,
        })
    }

    /// Oscillation over points sharing their first `n` coordinates.
    pub fn var_n(&self, n: usize) -> f64 {
        if n >= self.k {
            return 0.0;
        }
        if n == 0 {
            return self.max() - self.min();
        }
        let mut groups: BTreeMap<Vec<usize>, (f64, f64)> = BTreeMap::new();
        self.matrix.for_each_word(self.k, |w| {
            let v = self.value(w);
            let e = groups
                .entry(w[..n].to_vec())
                .or_insert((f64::INFINITY, f64::NEG_INFINITY));
            e.0 = e.0.min(v);
            e.1 = e.1.max(v);
        });
        groups.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    fn same_shift(&self, other: &Self) -> Result<()> {
        if self.matrix != other.matrix {
            Err(Error::AlphabetMismatch)
        } else {
            Ok(())
        }
    }

    /// The same function written with range `k2 ≥ k`.
    pub fn promote(&self, k2: usize) -> Result<Self> {
        if k2 < self.k {
            return Err(Error::RangeMismatch {
                expected: self.k,
                found: k2,
            });
        }
        Self::from_fn(&self.matrix, k2, |w| self.value(w))
    }

    /// `f + g∘σ − g`, of range `max(k_f, k_g+1)`.
    pub fn coboundary_perturb(&self, g: &Self) -> Result<Self> {
        self.same_shift(g)?;
        let k = self.k.max(g.k + 1);
        Self::from_fn(&self.matrix, k, |w| self.value(w) + g.value(&w[1..]) - g.value(w))
    }

    /// `c·f + shift`.
    pub fn affine(&self, c: f64, shift: f64) -> Self {
        Self::from_fn(&self.matrix, self.k, |w| c * self.value(w) + shift).expect("finite values")
    }

    pub fn abs(&self) -> Self {
        Self::from_fn(&self.matrix, self.k, |w| self.value(w).abs()).expect("finite values")
    }

    /// Pointwise combination on the common range.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, g: &Self, op: F) -> Result<Self> {
        self.same_shift(g)?;
        let k = self.k.max(g.k);
        Self::from_fn(&self.matrix, k, |w| op(self.value(w), g.value(w)))
    }

    pub fn add(&self, g: &Self) -> Result<Self> {
        self.zip_with(g, |a, b| a + b)
    }

    /// `sup |f − g|`.
    pub fn sup_distance(&self, g: &Self) -> Result<f64> {
        Ok(self.zip_with(g, |a, b| (a - b).abs())?.max())
    }

    /// The potential `S_r f` on the `r`-block shift modelling `T^r`.
    ///
    /// A block sequence determines `S_r f` through its first `1 + ⌈(k−1)/r⌉` blocks.
    pub fn birkhoff_power(&self, r: usize) -> Result<(BlockRecoding, Self)> {
        let blocks = self.matrix.power_block(r)?;
        let k2 = 1 + (self.k - 1).div_ceil(r);
        let need = r + self.k - 1;
        let pot = Self::from_fn(&blocks.matrix, k2, |bw| {
            let mut letters = Vec::with_capacity(k2 * r);
            for &b in bw {
                letters.extend_from_slice(blocks.states[b].letters());
            }
            self.birkhoff_sum(&letters[..need], r)
        })?;
        Ok((blocks, pot))
    }
}
