//! Dense linear least squares by complete orthogonal decomposition.
//!
//! `A P = Q [R₁₁ R₁₂; 0 0]` from Householder QR with column pivoting, then
//! `[R₁₁ R₁₂] = [T 0] Z` by right-applied reflectors. The returned solution
//! is the minimum-norm minimiser of `‖Ax − b‖₂`, which coincides with the
//! unique minimiser when `A` has full column rank.

/// Row-major dense matrix, just enough for the solver.
#[derive(Debug, Clone)]
pub(crate) struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub(crate) fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LstsqSolution {
    pub x: Vec<f64>,
    pub rank: usize,
}

/// Householder vector for `x`: returns `(v, beta, alpha)` with
/// `(I − v vᵀ / beta) x = alpha e₁`, or `None` when `x` is zero.
fn householder(x: &[f64]) -> Option<(Vec<f64>, f64, f64)> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let alpha = if x[0] >= 0.0 { -norm } else { norm };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let beta = v.iter().map(|e| e * e).sum::<f64>() / 2.0;
    if beta == 0.0 {
        return None;
    }
    Some((v, beta, alpha))
}

/// Minimum-norm least-squares solution of `a x ≈ b`.
///
/// Columns whose pivoted diagonal falls below `|R₀₀| · max(m, n) · ε` are
/// treated as dependent.
pub(crate) fn solve(a: &Matrix, b: &[f64]) -> LstsqSolution {
    let (m, n) = (a.rows, a.cols);
    assert_eq!(b.len(), m, "right-hand side length must match row count");
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);

    for j in 0..steps {
        // pivot on the largest remaining column norm
        let col_norm = |r: &Matrix, c: usize| (j..m).map(|i| r.at(i, c).powi(2)).sum::<f64>();
        let p = (j..n)
            .max_by(|&x, &y| col_norm(&r, x).total_cmp(&col_norm(&r, y)).then(y.cmp(&x)))
            .unwrap_or(j);
        if p != j {
            for i in 0..m {
                r.data.swap(i * n + j, i * n + p);
            }
            perm.swap(j, p);
        }

        let x: Vec<f64> = (j..m).map(|i| r.at(i, j)).collect();
        let Some((v, beta, alpha)) = householder(&x) else {
            continue;
        };
        for c in j + 1..n {
            let s = (j..m).map(|i| v[i - j] * r.at(i, c)).sum::<f64>() / beta;
            for i in j..m {
                *r.at_mut(i, c) -= s * v[i - j];
            }
        }
        let s = (j..m).map(|i| v[i - j] * qtb[i]).sum::<f64>() / beta;
        for i in j..m {
            qtb[i] -= s * v[i - j];
        }
        *r.at_mut(j, j) = alpha;
        for i in j + 1..m {
            *r.at_mut(i, j) = 0.0;
        }
    }

    let tol = if steps == 0 {
        0.0
    } else {
        r.at(0, 0).abs() * m.max(n) as f64 * f64::EPSILON
    };
    let rank = (0..steps).take_while(|&i| r.at(i, i).abs() > tol).count();

    // Zero the trailing block R₁₂ with reflectors applied from the right,
    // last row first, each acting on column i and columns rank..n.
    let mut z_reflectors: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    if rank < n {
        for i in (0..rank).rev() {
            let cols: Vec<usize> = std::iter::once(i).chain(rank..n).collect();
            let x: Vec<f64> = cols.iter().map(|&c| r.at(i, c)).collect();
            let Some((v, beta, _)) = householder(&x) else {
                continue;
            };
            for row in 0..=i {
                let s = cols
                    .iter()
                    .zip(&v)
                    .map(|(&c, vi)| vi * r.at(row, c))
                    .sum::<f64>()
                    / beta;
                for (&c, vi) in cols.iter().zip(&v) {
                    *r.at_mut(row, c) -= s * vi;
                }
            }
            z_reflectors.push((i, v, beta));
        }
    }

    // back substitution on the leading triangle
    let mut w = vec![0.0; n];
    for i in (0..rank).rev() {
        let s: f64 = (i + 1..rank).map(|c| r.at(i, c) * w[c]).sum();
        w[i] = (qtb[i] - s) / r.at(i, i);
    }

    // undo Z: reflectors were recorded last row first, so replay in reverse
    for (i, v, beta) in z_reflectors.iter().rev() {
        let cols: Vec<usize> = std::iter::once(*i).chain(rank..n).collect();
        let s = cols.iter().zip(v).map(|(&c, vi)| vi * w[c]).sum::<f64>() / beta;
        for (&c, vi) in cols.iter().zip(v) {
            w[c] -= s * vi;
        }
    }

    let mut x = vec![0.0; n];
    for (j, &p) in perm.iter().enumerate() {
        x[p] = w[j];
    }
    LstsqSolution { x, rank }
}
