//! Floating-point kernels. Singular value decompositions go through faer;
//! nalgebra's SVD loses accuracy on some rank-deficient inputs.

use nalgebra::{DMatrix, SymmetricEigen};

/// Gap ratio above which the rank cut snaps to the largest singular-value gap.
pub const GAP_RATIO: f64 = 1e6;

/// Numerical rank of a list of singular values sorted in decreasing order.
///
/// The absolute cut is `rel_tol * max(s_max, 1)`. When some consecutive pair
/// above that cut is separated by more than [`GAP_RATIO`], the cut moves to the
/// largest such gap instead.
pub fn numerical_rank(sorted_desc: &[f64], rel_tol: f64) -> usize {
    let Some(&top) = sorted_desc.first() else {
        return 0;
    };
    let cutoff = rel_tol * top.max(1.0);
    let absolute = sorted_desc.iter().take_while(|&&s| s > cutoff).count();
    let mut best: Option<(f64, usize)> = None;
    for k in 0..sorted_desc.len() {
        let hi = sorted_desc[k];
        if hi <= cutoff {
            break;
        }
        let lo = sorted_desc.get(k + 1).copied().unwrap_or(0.0);
        if k + 1 == sorted_desc.len() {
            break;
        }
        let ratio = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
        if ratio > GAP_RATIO && best.map_or(true, |(r, _)| ratio > r) {
            best = Some((ratio, k + 1));
        }
    }
    best.map_or(absolute, |(_, rank)| rank)
}

fn columns_to_matrix(vectors: &[Vec<f64>], ambient: usize) -> DMatrix<f64> {
    DMatrix::from_fn(ambient, vectors.len(), |i, j| vectors[j][i])
}

/// Thin SVD `m = U diag(s) V^T` with `s` in decreasing order, returned as
/// (columns of `U`, `s`, columns of `V`).
fn thin_svd(m: &DMatrix<f64>) -> (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) {
    let fm = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = fm.thin_svd().expect("SVD of a finite matrix converges");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let mut order: Vec<usize> = (0..s.nrows()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let col = |x: faer::MatRef<'_, f64>, j: usize| (0..x.nrows()).map(|i| x[(i, j)]).collect::<Vec<f64>>();
    (
        order.iter().map(|&j| col(u, j)).collect(),
        order.iter().map(|&j| s[j]).collect(),
        order.iter().map(|&j| col(v, j)).collect(),
    )
}

pub(crate) fn orthonormal_basis(vectors: &[Vec<f64>], ambient: usize, rel_tol: f64) -> Vec<Vec<f64>> {
    if vectors.is_empty() || ambient == 0 {
        return Vec::new();
    }
    let (mut u, values, _) = thin_svd(&columns_to_matrix(vectors, ambient));
    u.truncate(numerical_rank(&values, rel_tol));
    u
}

pub(crate) fn kernel(rows: usize, cols: usize, data: &[f64], rel_tol: f64) -> Vec<Vec<f64>> {
    if cols == 0 {
        return Vec::new();
    }
    // Zero rows leave the kernel unchanged and make the thin SVD return a full V.
    let padded = rows.max(cols);
    let m = DMatrix::from_fn(padded, cols, |i, j| if i < rows { data[i * cols + j] } else { 0.0 });
    let (_, values, mut v) = thin_svd(&m);
    v.split_off(numerical_rank(&values, rel_tol))
}

/// Orthonormal basis of the part of span(`amb`) orthogonal to the
/// orthonormal `sub`, truncated to the `target` dominant directions.
pub(crate) fn complement_basis(
    sub: &[Vec<f64>],
    amb: &[Vec<f64>],
    ambient: usize,
    target: usize,
) -> Vec<Vec<f64>> {
    if target == 0 || amb.is_empty() {
        return Vec::new();
    }
    let mut residuals = columns_to_matrix(amb, ambient);
    if !sub.is_empty() {
        let q = columns_to_matrix(sub, ambient);
        let proj = &q * (q.transpose() * &residuals);
        residuals -= proj;
    }
    let (mut u, _, _) = thin_svd(&residuals);
    u.truncate(target);
    u
}

/// Eigenvalues of a real tridiagonal matrix whose off-diagonal products are
/// nonnegative, via the similar symmetric matrix; decreasing order.
pub(crate) fn tridiagonal_eigenvalues(a: &[i64], b: &[i64], c: &[i64]) -> Vec<f64> {
    let m = a.len();
    let sym = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            a[i] as f64
        } else if j == i + 1 {
            ((b[i] * c[i]) as f64).sqrt()
        } else if i == j + 1 {
            ((b[j] * c[j]) as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}
