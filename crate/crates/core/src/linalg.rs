//! Spectral and nullspace routines on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// hermitian matrix.
pub fn hermitian_eigen(matrix: &ComplexMatrix) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let eig = SymmetricEigen::new(matrix.inner().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    (values, vectors)
}

/// Groups sorted real values into clusters no wider than `tol`, returning
/// `(mean, count)` per cluster.
pub fn cluster_values(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut clusters: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match clusters.last_mut() {
            Some((sum, count, first)) if (v - *first).abs() <= tol => {
                *sum += v;
                *count += 1;
            }
            _ => clusters.push((v, 1, v)),
        }
    }
    clusters.into_iter().map(|(sum, count, _)| (sum / count as f64, count)).collect()
}

/// Outcome of a singular-value rank decision on a stacked linear system.
#[derive(Debug, Clone)]
pub struct RankDecision {
    /// Descending singular values.
    pub singular_values: Vec<f64>,
    /// Absolute threshold actually applied (`rel_tol · σ_max`).
    pub threshold: f64,
    pub nullity: usize,
    /// Set when some singular value falls inside the guard band
    /// `[threshold / 10, threshold · 10]`.
    pub indeterminate: bool,
    /// Orthonormal basis of the numerical nullspace.
    pub null_basis: Vec<DVector<Complex64>>,
}

impl RankDecision {
    /// Smallest singular value that was counted as nonzero.
    pub fn smallest_retained(&self) -> Option<f64> {
        let rank = self.singular_values.len() - self.nullity;
        rank.checked_sub(1).map(|k| self.singular_values[k])
    }

    /// Orthogonal projection of `v` onto the nullspace.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(v.len());
        for b in &self.null_basis {
            out += b * b.dotc(v);
        }
        out
    }
}

/// Accumulates row blocks of a tall complex system `L q = 0` into a square
/// triangular factor with the same singular values, so the full stack never
/// has to be held in memory.
pub struct RowCompressor {
    ncols: usize,
    r: DMatrix<Complex64>,
    pending: Vec<DMatrix<Complex64>>,
    pending_rows: usize,
}

impl RowCompressor {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, r: DMatrix::zeros(0, ncols), pending: Vec::new(), pending_rows: 0 }
    }

    pub fn push(&mut self, block: DMatrix<Complex64>) {
        assert_eq!(block.ncols(), self.ncols, "row block has wrong width");
        if block.iter().all(|z| z.norm_sqr() == 0.0) {
            return;
        }
        self.pending_rows += block.nrows();
        self.pending.push(block);
        if self.pending_rows >= 8 * self.ncols {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        let total = self.r.nrows() + self.pending_rows;
        let mut stacked = DMatrix::zeros(total, self.ncols);
        stacked.rows_mut(0, self.r.nrows()).copy_from(&self.r);
        let mut offset = self.r.nrows();
        for block in self.pending.drain(..) {
            stacked.rows_mut(offset, block.nrows()).copy_from(&block);
            offset += block.nrows();
        }
        self.pending_rows = 0;
        self.r = stacked.qr().r();
    }

    /// Finishes the compression and decides the rank with relative threshold
    /// `rel_tol`.
    pub fn decide(mut self, rel_tol: f64) -> RankDecision {
        self.flush();
        let n = self.ncols;
        let mut square = DMatrix::zeros(n, n);
        let rows = self.r.nrows().min(n);
        square.rows_mut(0, rows).copy_from(&self.r.rows(0, rows));
        rank_decision(square, rel_tol)
    }
}

/// SVD-based rank decision on a matrix with at least as many rows as columns.
pub fn rank_decision(matrix: DMatrix<Complex64>, rel_tol: f64) -> RankDecision {
    let n = matrix.ncols();
    let svd = SVD::new(matrix, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    // Rows beyond the reduced rank contribute exact zeros.
    singular_values.resize(n, 0.0);
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * sigma_max;
    let nullity = if sigma_max == 0.0 {
        n
    } else {
        singular_values.iter().filter(|&&s| s < threshold).count()
    };
    let indeterminate = sigma_max > 0.0
        && singular_values.iter().any(|&s| s >= threshold / 10.0 && s <= threshold * 10.0);
    let null_basis = order
        .iter()
        .skip(n - nullity)
        .map(|&k| v_t.row(k).adjoint().into_owned())
        .collect();
    RankDecision { singular_values, threshold, nullity, indeterminate, null_basis }
}

/// Row-major vectorisation `vec(q)` of a square matrix.
pub fn vectorize(matrix: &ComplexMatrix) -> DVector<Complex64> {
    DVector::from_vec(matrix.to_row_major())
}

pub fn unvectorize(dim: usize, v: &DVector<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_row_major(dim, v.as_slice())
}

/// Matrix of the linear map `q ↦ q·A − sign·B·q` in the row-major basis.
pub fn sylvester_block(a: &ComplexMatrix, b: &ComplexMatrix, sign: f64) -> DMatrix<Complex64> {
    let n = a.dim();
    let mut out = DMatrix::zeros(n * n, n * n);
    // (qA)_ij = Σ_k q_ik A_kj ; (Bq)_ij = Σ_k B_ik q_kj
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                out[(row, i * n + k)] += a.get(k, j);
                out[(row, k * n + j)] -= b.get(i, k) * sign;
            }
        }
    }
    out
}
