//! Multimatrix algebras `M_{n_1} ⊕ … ⊕ M_{n_S}` and their elements.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{symmetric_eigenvalues, SquareMatrix};

/// Tolerance of the Jacobi eigensolver used for norms and spectra.
pub const EIGEN_TOL: f64 = 1e-12;

/// The block structure of a finite-dimensional C*-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    block_sizes: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(Error::InvalidAlgebra("an algebra needs at least one block".into()));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidAlgebra("block sizes must be positive".into()));
        }
        Ok(Self { block_sizes })
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// `Σ n_s²`
    pub fn total_dim(&self) -> usize {
        self.block_sizes.iter().map(|n| n * n).sum()
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement::identity(&self.block_sizes)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(&self.block_sizes)
    }
}

/// An element of a multimatrix algebra: one complex square matrix per block, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    sizes: Vec<usize>,
    blocks: Vec<Vec<Complex64>>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl AlgebraElement {
    pub fn zero(sizes: &[usize]) -> Self {
        Self {
            sizes: sizes.to_vec(),
            blocks: sizes.iter().map(|&n| vec![c(0.0); n * n]).collect(),
        }
    }

    pub fn identity(sizes: &[usize]) -> Self {
        Self::scalar(sizes, 1.0)
    }

    pub fn scalar(sizes: &[usize], x: f64) -> Self {
        let mut e = Self::zero(sizes);
        for (b, &n) in e.blocks.iter_mut().zip(sizes) {
            for i in 0..n {
                b[i * n + i] = c(x);
            }
        }
        e
    }

    pub fn from_blocks(sizes: &[usize], blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        if blocks.len() != sizes.len() {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} blocks, found {}",
                sizes.len(),
                blocks.len()
            )));
        }
        for (s, (b, &n)) in blocks.iter().zip(sizes).enumerate() {
            if b.len() != n * n {
                return Err(Error::InvalidAlgebra(format!(
                    "block {} has {} entries, expected {}",
                    s + 1,
                    b.len(),
                    n * n
                )));
            }
            if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidAlgebra(format!("block {} has a non-finite entry", s + 1)));
            }
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            blocks,
        })
    }

    /// Element whose blocks are real diagonal matrices with the given diagonals.
    pub fn diagonal(sizes: &[usize], diags: &[Vec<f64>]) -> Self {
        let mut e = Self::zero(sizes);
        for (s, d) in diags.iter().enumerate() {
            let n = sizes[s];
            for (i, &x) in d.iter().enumerate() {
                e.blocks[s][i * n + i] = c(x);
            }
        }
        e
    }

    /// A random Hermitian element with entries of size about `scale`.
    pub fn random_hermitian<R: Rng>(sizes: &[usize], scale: f64, rng: &mut R) -> Self {
        let mut e = Self::zero(sizes);
        for (b, &n) in e.blocks.iter_mut().zip(sizes) {
            for i in 0..n {
                b[i * n + i] = c(rng.gen_range(-scale..scale));
                for j in i + 1..n {
                    let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
                    b[i * n + j] = z;
                    b[j * n + i] = z.conj();
                }
            }
        }
        e
    }

    /// A random element with independent complex entries.
    pub fn random<R: Rng>(sizes: &[usize], rng: &mut R) -> Self {
        let mut e = Self::zero(sizes);
        for b in e.blocks.iter_mut() {
            for z in b.iter_mut() {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        e
    }

    /// A random positive element `b* b + shift·I`.
    pub fn random_positive<R: Rng>(sizes: &[usize], shift: f64, rng: &mut R) -> Self {
        let b = Self::random(sizes, rng);
        b.adjoint().mul(&b).add(&Self::scalar(sizes, shift))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn blocks(&self) -> &[Vec<Complex64>] {
        &self.blocks
    }

    pub fn block(&self, s: usize) -> &[Complex64] {
        &self.blocks[s]
    }

    pub fn block_mut(&mut self, s: usize) -> &mut [Complex64] {
        &mut self.blocks[s]
    }

    pub fn entry(&self, s: usize, i: usize, j: usize) -> Complex64 {
        self.blocks[s][i * self.sizes[s] + j]
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.sizes, other.sizes, "elements of different algebras");
        Self {
            sizes: self.sizes.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x - y)
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            sizes: self.sizes.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|z| z * t).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.sizes, other.sizes, "elements of different algebras");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(&self.sizes)
            .map(|((a, b), &n)| {
                let mut out = vec![c(0.0); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let x = a[i * n + k];
                        if x == c(0.0) {
                            continue;
                        }
                        for j in 0..n {
                            out[i * n + j] += x * b[k * n + j];
                        }
                    }
                }
                out
            })
            .collect();
        Self {
            sizes: self.sizes.clone(),
            blocks,
        }
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&self.sizes)
            .map(|(b, &n)| {
                let mut out = vec![c(0.0); n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[j * n + i] = b[i * n + j].conj();
                    }
                }
                out
            })
            .collect();
        Self {
            sizes: self.sizes.clone(),
            blocks,
        }
    }

    /// `a b − b a`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of each block, which must be Hermitian, in ascending order.
    pub fn hermitian_spectrum(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .zip(&self.sizes)
            .map(|(b, &n)| hermitian_eigenvalues(b, n))
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_spectrum()
            .iter()
            .flatten()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.hermitian_spectrum()
            .iter()
            .flatten()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        if self.is_zero(0.0) {
            return 0.0;
        }
        if self.is_self_adjoint(0.0) {
            return self
                .hermitian_spectrum()
                .iter()
                .flatten()
                .fold(0.0f64, |m, x| m.max(x.abs()));
        }
        let gram = self.adjoint().mul(self);
        gram.max_eigenvalue().max(0.0).sqrt()
    }
}

/// Eigenvalues of a Hermitian `n×n` matrix through the real symmetric embedding
/// `[[X, −Y], [Y, X]]`, where every eigenvalue appears twice.
pub fn hermitian_eigenvalues(b: &[Complex64], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![b[0].re];
    }
    let mut s = SquareMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = b[i * n + j];
            s.set(i, j, z.re);
            s.set(i + n, j + n, z.re);
            s.set(i, j + n, -z.im);
            s.set(i + n, j, z.im);
        }
    }
    let eig = symmetric_eigenvalues(&s, EIGEN_TOL);
    eig.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn algebra_validation() {
        assert!(MultiMatrixAlgebra::new(vec![]).is_err());
        assert!(MultiMatrixAlgebra::new(vec![2, 0]).is_err());
        assert_eq!(MultiMatrixAlgebra::new(vec![2, 1]).unwrap().total_dim(), 5);
    }

    #[test]
    fn pauli_spectrum_and_norms() {
        let i = Complex64::new(0.0, 1.0);
        let y = AlgebraElement::from_blocks(&[2], vec![vec![c(0.0), -i, i, c(0.0)]]).unwrap();
        let spec = y.hermitian_spectrum();
        assert!((spec[0][0] + 1.0).abs() < 1e-12 && (spec[0][1] - 1.0).abs() < 1e-12);
        assert!((y.norm() - 1.0).abs() < 1e-12);
        let nil = AlgebraElement::from_blocks(&[2], vec![vec![c(0.0), c(3.0), c(0.0), c(0.0)]]).unwrap();
        assert!((nil.norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_positive_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = AlgebraElement::random_positive(&[3, 1, 2], 0.01, &mut rng);
            assert!(p.is_self_adjoint(1e-14));
            assert!(p.min_eigenvalue() >= 0.01 - 1e-10);
        }
    }

    #[test]
    fn norm_is_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = AlgebraElement::random(&[2, 3], &mut rng);
            let b = AlgebraElement::random(&[2, 3], &mut rng);
            assert!(a.mul(&b).norm() <= a.norm() * b.norm() + 1e-10);
            assert!((a.adjoint().norm() - a.norm()).abs() < 1e-10);
        }
    }
}
