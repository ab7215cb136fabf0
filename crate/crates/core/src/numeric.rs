//! Small dense linear algebra and summation kernels shared by the other modules.
//!
//! Everything here works on tiny matrices (tens to a few thousand states), so
//! plain row-major `Vec<f64>` storage is used throughout.

use crate::error::{Error, Result};

/// Running `log Σ exp(x_i)` with the maximum subtracted and Neumaier compensation.
///
/// Merging two accumulators is exact up to one rescaling, so partial sums over
/// disjoint word ranges can be combined in a fixed order for reproducible totals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.max == f64::NEG_INFINITY
    }

    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.rescale(x);
        }
        self.add_term((x - self.max).exp());
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.is_empty() {
            return;
        }
        if other.max > self.max {
            self.rescale(other.max);
        }
        let scale = (other.max - self.max).exp();
        self.add_term(other.sum * scale);
        self.add_term(other.comp * scale);
    }

    /// `log Σ exp(x_i)`, or `-inf` when nothing was added.
    pub fn ln(&self) -> f64 {
        if self.is_empty() {
            f64::NEG_INFINITY
        } else {
            self.max + (self.sum + self.comp).ln()
        }
    }

    /// `Σ exp(x_i)` evaluated as `exp(max)·Σ exp(x_i − max)`; exact for integer counts.
    pub fn value(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.max.exp() * (self.sum + self.comp)
        }
    }

    fn rescale(&mut self, new_max: f64) {
        let scale = (self.max - new_max).exp();
        self.sum *= scale;
        self.comp *= scale;
        self.max = new_max;
    }

    fn add_term(&mut self, t: f64) {
        let s = self.sum + t;
        if self.sum.abs() >= t.abs() {
            self.comp += (self.sum - s) + t;
        } else {
            self.comp += (t - s) + self.sum;
        }
        self.sum = s;
    }
}

/// Neumaier-compensated sum of a sequence.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in values {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Dense square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has the wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v M`
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, vi) in v.iter().enumerate() {
            if *vi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        out
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Multiplies every entry by `t`.
    pub fn scale(&mut self, t: f64) {
        for x in &mut self.data {
            *x *= t;
        }
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().cloned().fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    fn submatrix(&self, idx: &[usize]) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }
}

/// Strongly connected components of the directed graph `i → j` iff `m[i][j] > 0`.
///
/// Components are returned in an unspecified but deterministic order, each
/// with its vertices sorted ascending.
pub fn strongly_connected_components(m: &SquareMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| m.get(i, j) > 0.0).collect())
        .collect();
    let pred: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..n).filter(|&i| m.get(i, j) > 0.0).collect())
        .collect();

    // Kosaraju: finishing order on the forward graph, then sweep the reverse graph.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if next < succ[v].len() {
                top.1 += 1;
                let w = succ[v][next];
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    let mut comp = vec![usize::MAX; n];
    let mut components = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &pred[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Result of [`perron_root`].
#[derive(Debug, Clone, PartialEq)]
pub struct PerronRoot {
    pub radius: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Positive right eigenvector with unit 1-norm, present when the matrix is irreducible.
    pub vector: Option<Vec<f64>>,
}

/// Perron root of a nonnegative matrix.
///
/// The radius is the maximum over strongly connected components; each
/// irreducible block is iterated as `B + δI` with `δ` its mean row sum, which
/// makes the block primitive without moving the eigenvector.
pub fn perron_root(m: &SquareMatrix, tol: f64, max_iter: usize) -> Result<PerronRoot> {
    let n = m.dim();
    let components = strongly_connected_components(m);
    let irreducible = components.len() == 1 && n > 0;

    let mut best = PerronRoot {
        radius: 0.0,
        iterations: 0,
        residual: 0.0,
        vector: None,
    };
    let mut residual = 0.0f64;
    for comp in &components {
        if comp.len() == 1 {
            let v = m.get(comp[0], comp[0]);
            if v > best.radius {
                best.radius = v;
            }
            continue;
        }
        let sub = m.submatrix(comp);
        let (radius, vector, iters, res) = shifted_power_iteration(&sub, tol, max_iter)?;
        best.iterations += iters;
        residual = residual.max(res);
        if radius > best.radius {
            best.radius = radius;
        }
        if irreducible {
            best.vector = Some(vector);
        }
    }
    if irreducible && best.vector.is_none() {
        // 1×1 irreducible block
        best.vector = Some(vec![1.0]);
    }
    best.residual = residual;
    Ok(best)
}

fn shifted_power_iteration(
    m: &SquareMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>, usize, f64)> {
    let n = m.dim();
    let shift = (0..n).map(|i| m.row(i).iter().sum::<f64>()).sum::<f64>() / n as f64;
    let mut v = vec![1.0 / n as f64; n];
    let mut prev = f64::NAN;
    for it in 1..=max_iter {
        let mut w = m.mul_vec(&v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += shift * vi;
        }
        let norm: f64 = w.iter().sum();
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        let radius = norm - shift;
        v = w;
        if (radius - prev).abs() <= tol * radius.max(1.0) {
            let mv = m.mul_vec(&v);
            let vmax = v.iter().cloned().fold(0.0, f64::max);
            let res = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - radius * b).abs())
                .fold(0.0, f64::max)
                / vmax;
            if res <= tol * radius.max(1.0) {
                let (radius, v, extra, res) = polish(m, shift, v);
                return Ok((radius, v, it + extra, res));
            }
        }
        prev = radius;
    }
    Err(Error::NoConvergence(max_iter))
}

/// `(‖Mv‖_1 / ‖v‖_1, max_i |(Mv)_i − r v_i| / max v)` for a positive vector.
fn radius_and_residual(m: &SquareMatrix, v: &[f64]) -> (f64, f64) {
    let mv = m.mul_vec(v);
    let radius = compensated_sum(mv.iter().cloned()) / compensated_sum(v.iter().cloned());
    let vmax = v.iter().cloned().fold(0.0, f64::max);
    let res = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - radius * b).abs())
        .fold(0.0, f64::max)
        / vmax;
    (radius, res)
}

/// Further power steps while the residual keeps shrinking.
fn polish(m: &SquareMatrix, shift: f64, mut v: Vec<f64>) -> (f64, Vec<f64>, usize, f64) {
    let (mut radius, mut best) = radius_and_residual(m, &v);
    for extra in 0..1000 {
        let mut w = m.mul_vec(&v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += shift * vi;
        }
        let norm: f64 = w.iter().sum();
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        let (r, res) = radius_and_residual(m, &w);
        if res >= best {
            return (radius, v, extra, best);
        }
        radius = r;
        best = res;
        v = w;
    }
    (radius, v, 1000, best)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `1e-14` times the largest entry.
pub fn solve_linear(a: &SquareMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    let scale = a.data.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(1e-300);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        let (head, tail) = m.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail.iter_mut() {
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for (x, &y) in row[col..=n].iter_mut().zip(&pivot_row[col..=n]) {
                *x -= factor * y;
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Euclidean projection of `y` onto `{x : Σx = 1, x_i ≥ floor}`.
pub fn project_simplex(y: &[f64], floor: f64) -> Vec<f64> {
    let n = y.len();
    let total = 1.0 - floor * n as f64;
    debug_assert!(total > 0.0);
    let mut sorted: Vec<f64> = y.iter().map(|v| v - floor).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - total) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    y.iter()
        .map(|v| (v - floor - theta).max(0.0) + floor)
        .collect()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &SquareMatrix, tol: f64) -> Vec<f64> {
    let n = a.dim();
    let mut m = a.clone();
    let frob: f64 = m.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= tol * frob * 1e-3 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let xs = [0.3, -1.2, 4.0, 2.5, -700.0];
        let mut acc = LogSumExp::new();
        for x in xs {
            acc.add(x);
        }
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((acc.ln() - direct).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_survives_overflowing_terms() {
        let mut acc = LogSumExp::new();
        acc.add(1000.0);
        acc.add(1000.0);
        assert!((acc.ln() - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_merge_is_order_independent_in_value() {
        let mut a = LogSumExp::new();
        let mut b = LogSumExp::new();
        a.add(1.0);
        a.add(2.0);
        b.add(5.0);
        let mut ab = a;
        ab.merge(&b);
        let mut ba = b;
        ba.merge(&a);
        assert!((ab.ln() - ba.ln()).abs() < 1e-15);
        assert!(LogSumExp::new().ln().is_infinite());
    }

    #[test]
    fn counting_is_exact() {
        let mut acc = LogSumExp::new();
        for _ in 0..12345 {
            acc.add(0.0);
        }
        assert_eq!(acc.value(), 12345.0);
    }

    #[test]
    fn perron_root_of_golden_mean() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        let r = perron_root(&m, 1e-13, 10_000).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.radius - phi).abs() < 1e-12);
        let v = r.vector.unwrap();
        assert!((v[0] / v[1] - phi).abs() < 1e-11);
    }

    #[test]
    fn perron_root_of_reducible_matrix_takes_component_maximum() {
        // block upper triangular: {0,1} golden mean feeding into a 2-cycle {2,3}
        let m = SquareMatrix::from_rows(&[
            vec![1.0, 1.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ]);
        let r = perron_root(&m, 1e-12, 10_000).unwrap();
        assert!((r.radius - 1.618_033_988_749_895).abs() < 1e-11);
        assert!(r.vector.is_none());
        assert_eq!(strongly_connected_components(&m).len(), 2);
    }

    #[test]
    fn perron_root_handles_periodic_cycle() {
        let m = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let r = perron_root(&m, 1e-12, 10_000).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_solve_and_singular_detection() {
        let a = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = solve_linear(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let s = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(solve_linear(&s, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5], 0.0);
        for v in &p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        let q = project_simplex(&[2.0, -1.0], 1e-12);
        assert!((q[0] - (1.0 - 1e-12)).abs() < 1e-15);
        assert_eq!(q[1], 1e-12);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = SquareMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ]);
        let e = symmetric_eigenvalues(&a, 1e-14);
        let s = 2f64.sqrt();
        let expected = [2.0 - s, 2.0, 2.0 + s];
        for (x, y) in e.iter().zip(expected) {
            assert!((x - y).abs() < 1e-13, "{x} vs {y}");
        }
    }
}
