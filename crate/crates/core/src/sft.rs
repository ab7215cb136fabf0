//! Transition matrices, admissible words and the spectral data of a subshift of finite type.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{perron_root, strongly_connected_components, SquareMatrix};
use crate::potential::LocallyConstantPotential;

/// A finite word over the alphabet `0..d`, stored 0-based.
///
/// Words print 1-based: as a digit string when every letter is at most 9,
/// otherwise with letters separated by dots (`"10.3.12"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based letters.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l - 1).collect())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Parses the printed form. Letters must lie in `1..=d`.
    pub fn parse(s: &str, d: usize) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let parts: Vec<&str> = if s.contains('.') {
            s.split('.').collect()
        } else {
            s.char_indices().map(|(i, c)| &s[i..i + c.len_utf8()]).collect()
        };
        let mut letters = Vec::with_capacity(parts.len());
        for p in parts {
            let l: usize = p
                .parse()
                .map_err(|_| Error::Inadmissible(format!("{s} (bad letter {p:?})")))?;
            if l == 0 || l > d {
                return Err(Error::LetterOutOfRange { letter: l, d });
            }
            letters.push(l - 1);
        }
        Ok(Word(letters))
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 9) {
            for l in &self.0 {
                write!(f, "{}", l + 1)?;
            }
        } else {
            for (i, l) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{}", l + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Word::parse(&s, usize::MAX).map_err(serde::de::Error::custom)
    }
}

/// A validated square 0/1 matrix with no zero row and no zero column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    d: usize,
    entries: Vec<bool>,
}

/// Validates a raw integer matrix. Indices in errors are 1-based.
pub fn validate_matrix(raw: &[Vec<i64>]) -> Result<TransitionMatrix> {
    let d = raw.len();
    if d == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut entries = Vec::with_capacity(d * d);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != d {
            return Err(Error::NotSquare {
                row: i + 1,
                len: row.len(),
                expected: d,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            match v {
                0 => entries.push(false),
                1 => entries.push(true),
                _ => return Err(Error::NonBinaryEntry(i + 1, j + 1)),
            }
        }
    }
    for i in 0..d {
        if !(0..d).any(|j| entries[i * d + j]) {
            return Err(Error::ZeroRow(i + 1));
        }
    }
    for j in 0..d {
        if !(0..d).any(|i| entries[i * d + j]) {
            return Err(Error::ZeroColumn(j + 1));
        }
    }
    Ok(TransitionMatrix { d, entries })
}

/// Perron root and eigenvector of a transition matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub radius: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Positive right eigenvector with unit 1-norm; present when the matrix is irreducible.
    pub eigenvector: Option<Vec<f64>>,
}

/// A recoded shift whose letters are words of the original one.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRecoding {
    pub matrix: TransitionMatrix,
    /// Original words labelling the new letters, in lexicographic order.
    pub states: Vec<Word>,
}

impl BlockRecoding {
    pub fn index_of(&self, letters: &[usize]) -> Option<usize> {
        self.states
            .binary_search_by(|w| w.letters().cmp(letters))
            .ok()
    }
}

impl TransitionMatrix {
    pub fn new(raw: &[Vec<i64>]) -> Result<Self> {
        validate_matrix(raw)
    }

    /// The full shift on `d` letters.
    pub fn full(d: usize) -> Self {
        assert!(d >= 1);
        TransitionMatrix {
            d,
            entries: vec![true; d * d],
        }
    }

    /// The golden mean shift: the word `22` is forbidden.
    pub fn golden_mean() -> Self {
        validate_matrix(&[vec![1, 1], vec![1, 0]]).expect("valid matrix")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.d + j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.d).filter(move |&j| self.allowed(i, j))
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.allowed(i, j) as i64).collect())
            .collect()
    }

    pub fn to_square(&self) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                if self.allowed(i, j) {
                    m.set(i, j, 1.0);
                }
            }
        }
        m
    }

    pub fn is_admissible(&self, letters: &[usize]) -> bool {
        letters.iter().all(|&l| l < self.d) && letters.windows(2).all(|w| self.allowed(w[0], w[1]))
    }

    /// Checks letters and admissibility, reporting the first problem.
    pub fn check_word(&self, letters: &[usize]) -> Result<()> {
        if let Some(&l) = letters.iter().find(|&&l| l >= self.d) {
            return Err(Error::LetterOutOfRange {
                letter: l + 1,
                d: self.d,
            });
        }
        if !self.is_admissible(letters) {
            return Err(Error::Inadmissible(Word::new(letters.to_vec()).to_string()));
        }
        Ok(())
    }

    /// Calls `visit` on every admissible word of length `n` in lexicographic order.
    pub fn for_each_word<F: FnMut(&[usize])>(&self, n: usize, mut visit: F) {
        if n == 0 {
            visit(&[]);
            return;
        }
        let mut word = Vec::with_capacity(n);
        for first in 0..self.d {
            word.clear();
            word.push(first);
            self.extend_words(&mut word, n, &mut visit);
        }
    }

    fn extend_words<F: FnMut(&[usize])>(&self, word: &mut Vec<usize>, n: usize, visit: &mut F) {
        if word.len() == n {
            visit(word);
            return;
        }
        let last = *word.last().unwrap();
        for j in 0..self.d {
            if self.allowed(last, j) {
                word.push(j);
                self.extend_words(word, n, visit);
                word.pop();
            }
        }
    }

    /// Admissible words of length `n` in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::LengthZero);
        }
        let mut out = Vec::new();
        self.for_each_word(n, |w| out.push(Word::new(w.to_vec())));
        Ok(out)
    }

    /// Number of admissible words of length `n`, computed exactly by dynamic programming.
    /// Saturates at `u128::MAX`.
    pub fn word_count(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let mut ends = vec![1u128; self.d];
        for _ in 1..n {
            let mut next = vec![0u128; self.d];
            for (i, &e) in ends.iter().enumerate() {
                for (j, slot) in next.iter_mut().enumerate() {
                    if self.allowed(i, j) {
                        *slot = slot.saturating_add(e);
                    }
                }
            }
            ends = next;
        }
        ends.iter().fold(0u128, |a, b| a.saturating_add(*b))
    }

    pub fn is_irreducible(&self) -> bool {
        strongly_connected_components(&self.to_square()).len() == 1
    }

    /// Period of an irreducible matrix (gcd of cycle lengths), `None` when reducible.
    pub fn period(&self) -> Option<usize> {
        if !self.is_irreducible() {
            return None;
        }
        let mut level = vec![usize::MAX; self.d];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in self.successors(i) {
                if level[j] == usize::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        let mut g = 0usize;
        for i in 0..self.d {
            for j in self.successors(i) {
                let diff = (level[i] + 1).abs_diff(level[j]);
                g = gcd(g, diff);
            }
        }
        Some(g)
    }

    /// Smallest `N` with every entry of `A^N` positive, searched up to the
    /// Wielandt bound `(d−1)²+1`. `None` when `A` is not primitive.
    pub fn aperiodicity_index(&self) -> Option<usize> {
        if self.period() != Some(1) {
            return None;
        }
        let d = self.d;
        let bound = (d - 1) * (d - 1) + 1;
        let words = d.div_ceil(64);
        let base: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut row = vec![0u64; words];
                for j in self.successors(i) {
                    row[j / 64] |= 1 << (j % 64);
                }
                row
            })
            .collect();
        let full = |row: &[u64]| (0..d).all(|j| row[j / 64] >> (j % 64) & 1 == 1);
        let mut power = base.clone();
        for n in 1..=bound {
            if power.iter().all(|r| full(r)) {
                return Some(n);
            }
            power = power
                .iter()
                .map(|row| {
                    let mut next = vec![0u64; words];
                    for k in 0..d {
                        if row[k / 64] >> (k % 64) & 1 == 1 {
                            for (x, y) in next.iter_mut().zip(&base[k]) {
                                *x |= y;
                            }
                        }
                    }
                    next
                })
                .collect();
        }
        None
    }

    /// Perron root by shifted power iteration on each strongly connected component.
    pub fn spectral_radius(&self, tol: f64, max_iter: usize) -> Result<SpectralReport> {
        let r = perron_root(&self.to_square(), tol, max_iter)?;
        Ok(SpectralReport {
            radius: r.radius,
            iterations: r.iterations,
            residual: r.residual,
            eigenvector: r.vector,
        })
    }

    /// `log r(A)` with the default tolerances.
    pub fn log_spectral_radius(&self) -> Result<f64> {
        Ok(self
            .spectral_radius(crate::SPECTRAL_TOL, crate::SPECTRAL_MAX_ITER)?
            .radius
            .ln())
    }

    /// Recoding on admissible `k`-words: `α → β` iff β is α shifted left with one letter appended.
    pub fn higher_block(&self, k: usize) -> Result<BlockRecoding> {
        let states = self.admissible_words(k)?;
        let lookup = |w: &[usize]| {
            states
                .binary_search_by(|s| s.letters().cmp(w))
                .expect("shifted word is admissible")
        };
        let n = states.len();
        let mut entries = vec![false; n * n];
        for (a, s) in states.iter().enumerate() {
            let l = s.letters();
            let mut next = l[1..].to_vec();
            next.push(0);
            for j in self.successors(l[k - 1]) {
                next[k - 1] = j;
                entries[a * n + lookup(&next)] = true;
            }
        }
        Ok(BlockRecoding {
            matrix: TransitionMatrix { d: n, entries },
            states,
        })
    }

    /// Shift of `r`-blocks: `α → β` iff `A[last α][first β] = 1`. Models `T^r`.
    pub fn power_block(&self, r: usize) -> Result<BlockRecoding> {
        let states = self.admissible_words(r)?;
        let n = states.len();
        let mut entries = vec![false; n * n];
        for (a, s) in states.iter().enumerate() {
            let last = s.letters()[r - 1];
            for (b, t) in states.iter().enumerate() {
                entries[a * n + b] = self.allowed(last, t.letters()[0]);
            }
        }
        Ok(BlockRecoding {
            matrix: TransitionMatrix { d: n, entries },
            states,
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A labelled directed graph presenting a sofic shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: usize,
    /// `(from, to, label)` with 0-based vertices.
    pub edges: Vec<(usize, usize, String)>,
}

/// Edge shift covering a sofic shift, with the labelling of each edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SoficCover {
    /// Edge shift on the essential edges.
    pub matrix: TransitionMatrix,
    /// Sorted distinct labels; letter `i` of the sofic shift is `alphabet[i]`.
    pub alphabet: Vec<String>,
    /// Letter carried by each edge of the cover.
    pub labels: Vec<usize>,
    /// Index of each cover edge in the input graph.
    pub edges: Vec<usize>,
}

/// Builds the edge-shift cover of a right-resolving presentation.
///
/// Vertices that are sources or sinks of the graph are pruned first, so the
/// resulting matrix has no zero row or column.
pub fn sofic_cover(graph: &LabeledGraph) -> Result<SoficCover> {
    let mut alphabet: Vec<String> = graph.edges.iter().map(|e| e.2.clone()).collect();
    alphabet.sort();
    alphabet.dedup();
    let letter = |s: &str| alphabet.binary_search_by(|a| a.as_str().cmp(s)).unwrap();

    let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for (from, _, label) in &graph.edges {
        if seen.insert((*from, letter(label)), ()).is_some() {
            return Err(Error::NotRightResolving {
                vertex: from + 1,
                label: letter(label) + 1,
            });
        }
    }

    let mut alive = vec![true; graph.vertices];
    loop {
        let mut has_in = vec![false; graph.vertices];
        let mut has_out = vec![false; graph.vertices];
        for (from, to, _) in &graph.edges {
            if alive[*from] && alive[*to] {
                has_out[*from] = true;
                has_in[*to] = true;
            }
        }
        let mut changed = false;
        for v in 0..graph.vertices {
            if alive[v] && !(has_in[v] && has_out[v]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..graph.edges.len())
        .filter(|&e| alive[graph.edges[e].0] && alive[graph.edges[e].1])
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyShift);
    }
    let n = kept.len();
    let mut entries = vec![false; n * n];
    for (a, &e) in kept.iter().enumerate() {
        for (b, &f) in kept.iter().enumerate() {
            entries[a * n + b] = graph.edges[e].1 == graph.edges[f].0;
        }
    }
    Ok(SoficCover {
        matrix: TransitionMatrix { d: n, entries },
        labels: kept.iter().map(|&e| letter(&graph.edges[e].2)).collect(),
        alphabet: alphabet.clone(),
        edges: kept,
    })
}

impl SoficCover {
    /// Label word of a path of cover edges.
    pub fn label_word(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&e| self.labels[e]).collect()
    }

    /// Pulls a range-`k` potential on label words back to the cover.
    pub fn pull_back<F: Fn(&[usize]) -> f64>(&self, k: usize, g: F) -> Result<LocallyConstantPotential> {
        LocallyConstantPotential::from_fn(&self.matrix, k, |path| g(&self.label_word(path)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_force(a: &TransitionMatrix, n: usize) -> Vec<Vec<usize>> {
        let d = a.d();
        let mut out = Vec::new();
        for code in 0..d.pow(n as u32) {
            let mut w = vec![0; n];
            let mut c = code;
            for slot in w.iter_mut().rev() {
                *slot = c % d;
                c /= d;
            }
            if w.windows(2).all(|p| a.allowed(p[0], p[1])) {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn validation_errors_are_one_based() {
        assert!(validate_matrix(&[vec![1, 1], vec![1, 0]]).is_ok());
        assert_eq!(validate_matrix(&[vec![1, 1], vec![0, 0]]), Err(Error::ZeroRow(2)));
        assert_eq!(validate_matrix(&[vec![1, 0], vec![1, 0]]), Err(Error::ZeroColumn(2)));
        assert_eq!(
            validate_matrix(&[vec![1, 2], vec![1, 0]]),
            Err(Error::NonBinaryEntry(1, 2))
        );
        assert!(validate_matrix(&[vec![1]]).is_ok());
        assert_eq!(validate_matrix(&[]), Err(Error::EmptyMatrix));
    }

    #[test]
    fn golden_mean_words() {
        let a = TransitionMatrix::golden_mean();
        let w: Vec<String> = a.admissible_words(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(w, ["11", "12", "21"]);
        assert_eq!(a.admissible_words(5).unwrap().len(), 13);
        assert_eq!(a.word_count(5), 13);
        assert_eq!(TransitionMatrix::full(2).word_count(3), 8);
        assert_eq!(a.admissible_words(0), Err(Error::LengthZero));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let mats = [
            TransitionMatrix::golden_mean(),
            TransitionMatrix::full(3),
            validate_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).unwrap(),
            validate_matrix(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 1]]).unwrap(),
        ];
        for a in &mats {
            for n in 1..=9 {
                let ours: Vec<Vec<usize>> = a
                    .admissible_words(n)
                    .unwrap()
                    .into_iter()
                    .map(Word::into_letters)
                    .collect();
                assert_eq!(ours, brute_force(a, n));
                assert_eq!(a.word_count(n), ours.len() as u128);
            }
        }
    }

    #[test]
    fn aperiodicity() {
        assert_eq!(TransitionMatrix::golden_mean().aperiodicity_index(), Some(2));
        assert_eq!(TransitionMatrix::full(2).aperiodicity_index(), Some(1));
        let perm = validate_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(perm.aperiodicity_index(), None);
        assert_eq!(perm.period(), Some(2));
        let a = validate_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).unwrap();
        // cycles of lengths 2 and 3; the Wielandt-type matrix reaching (d-1)^2+1
        assert_eq!(a.aperiodicity_index(), Some(5));
    }

    #[test]
    fn aperiodicity_index_matches_naive_powers() {
        let a = validate_matrix(&[
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 0, 0],
        ])
        .unwrap();
        let m = a.to_square();
        let mut p = m.clone();
        let mut n = 1;
        while (0..4).any(|i| (0..4).any(|j| p.get(i, j) == 0.0)) {
            p = p.mul(&m);
            n += 1;
        }
        assert_eq!(a.aperiodicity_index(), Some(n));
        assert_eq!(n, 10);
    }

    #[test]
    fn spectral_radius_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = TransitionMatrix::golden_mean().spectral_radius(1e-12, 10_000).unwrap();
        assert!((r.radius - phi).abs() < 1e-10);
        assert!(r.residual <= 1e-12 * phi);
        let v = r.eigenvector.unwrap();
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((TransitionMatrix::full(2).spectral_radius(1e-12, 10_000).unwrap().radius - 2.0).abs() < 1e-12);
        assert!((TransitionMatrix::full(1).spectral_radius(1e-12, 10_000).unwrap().radius - 1.0).abs() < 1e-15);
        let perm = validate_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!((perm.spectral_radius(1e-12, 10_000).unwrap().radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn block_recodings_preserve_radius() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let gm = TransitionMatrix::golden_mean();
        let hb = gm.higher_block(2).unwrap();
        assert_eq!(hb.matrix.d(), 3);
        let r = hb.matrix.spectral_radius(1e-12, 10_000).unwrap().radius;
        assert!((r - phi).abs() < 1e-9);
        let full = TransitionMatrix::full(2).higher_block(2).unwrap();
        assert_eq!(full.matrix.d(), 4);
        assert!((full.matrix.spectral_radius(1e-12, 10_000).unwrap().radius - 2.0).abs() < 1e-9);
        let id = gm.higher_block(1).unwrap();
        assert_eq!(id.matrix, gm);
        let pb = gm.power_block(3).unwrap();
        let r3 = pb.matrix.spectral_radius(1e-12, 10_000).unwrap().radius;
        assert!((r3 - phi.powi(3)).abs() < 1e-9);
        assert_eq!(pb.index_of(&[0, 1, 0]), Some(2));
    }

    fn even_shift_word(w: &[usize]) -> bool {
        // letter 0 = a, 1 = b; runs of b strictly between two a's have even length
        let positions: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 0).collect();
        positions.windows(2).all(|p| (p[1] - p[0] - 1) % 2 == 0)
    }

    #[test]
    fn even_shift_cover_language() {
        let g = LabeledGraph {
            vertices: 2,
            edges: vec![
                (0, 0, "a".into()),
                (0, 1, "b".into()),
                (1, 0, "b".into()),
            ],
        };
        let cover = sofic_cover(&g).unwrap();
        assert_eq!(cover.matrix.d(), 3);
        for n in 1..=6 {
            let mut ours = BTreeSet::new();
            cover.matrix.for_each_word(n, |p| {
                ours.insert(cover.label_word(p));
            });
            let mut expected = BTreeSet::new();
            for code in 0..(1usize << n) {
                let w: Vec<usize> = (0..n).map(|i| (code >> (n - 1 - i)) & 1).collect();
                if even_shift_word(&w) {
                    expected.insert(w);
                }
            }
            assert_eq!(ours, expected, "n = {n}");
        }
    }

    #[test]
    fn sft_as_its_own_graph() {
        let a = TransitionMatrix::golden_mean();
        let mut edges = Vec::new();
        for i in 0..2 {
            for j in a.successors(i) {
                edges.push((i, j, (j + 1).to_string()));
            }
        }
        let cover = sofic_cover(&LabeledGraph { vertices: 2, edges }).unwrap();
        for n in 1..=6 {
            let mut ours = BTreeSet::new();
            cover.matrix.for_each_word(n, |p| {
                ours.insert(cover.label_word(p));
            });
            let expected: BTreeSet<Vec<usize>> =
                a.admissible_words(n).unwrap().into_iter().map(Word::into_letters).collect();
            assert_eq!(ours, expected);
        }
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = LabeledGraph {
            vertices: 2,
            edges: vec![(0, 0, "a".into()), (0, 1, "a".into()), (1, 0, "b".into())],
        };
        assert_eq!(
            sofic_cover(&g),
            Err(Error::NotRightResolving { vertex: 1, label: 1 })
        );
    }

    #[test]
    fn word_display_round_trip() {
        let w = Word::from_one_based(&[1, 2, 1]);
        assert_eq!(w.to_string(), "121");
        assert_eq!(Word::parse("121", 2).unwrap(), w);
        let big = Word::new(vec![9, 2, 11]);
        assert_eq!(big.to_string(), "10.3.12");
        assert_eq!(Word::parse("10.3.12", 12).unwrap(), big);
        assert!(Word::parse("13", 2).is_err());
    }
}
