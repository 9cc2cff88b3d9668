use crate::linalg::{Scalar, Subspace};

use super::{LocalAlgebra, TerwilligerError};

/// The grid `V_ij = (E*_0V + ... + E*_iV) ∩ (E_0V + ... + E_jV)` and its
/// refinement `Ṽ_ij`, the orthogonal complement of `V_{i,j-1} + V_{i-1,j}`
/// in `V_ij`, for `0 <= i, j <= D`.
#[derive(Clone, Debug)]
pub struct SplitDecomposition<S> {
    diameter: usize,
    v: Vec<Vec<Subspace<S>>>,
    vtilde: Vec<Vec<Subspace<S>>>,
    zero: Subspace<S>,
}

impl<S: Scalar> SplitDecomposition<S> {
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    fn cell<'s>(&'s self, grid: &'s [Vec<Subspace<S>>], i: isize, j: isize) -> &'s Subspace<S> {
        let d = self.diameter as isize;
        if (0..=d).contains(&i) && (0..=d).contains(&j) {
            &grid[i as usize][j as usize]
        } else {
            &self.zero
        }
    }

    /// `V_ij`, zero when either index is outside `0..=D`.
    pub fn v(&self, i: isize, j: isize) -> &Subspace<S> {
        self.cell(&self.v, i, j)
    }

    /// `Ṽ_ij`, zero when either index is outside `0..=D`.
    pub fn vtilde(&self, i: isize, j: isize) -> &Subspace<S> {
        self.cell(&self.vtilde, i, j)
    }

    pub fn v_dims(&self) -> Vec<Vec<usize>> {
        self.v.iter().map(|row| row.iter().map(Subspace::dim).collect()).collect()
    }

    pub fn vtilde_dims(&self) -> Vec<Vec<usize>> {
        self.vtilde.iter().map(|row| row.iter().map(Subspace::dim).collect()).collect()
    }

    /// Replaces one `Ṽ_ij`. Only useful for building negative controls.
    pub fn replace_vtilde(&mut self, i: usize, j: usize, space: Subspace<S>) {
        self.vtilde[i][j] = space;
    }

    pub fn to_f64(&self) -> SplitDecomposition<f64> {
        let conv = |grid: &[Vec<Subspace<S>>]| grid.iter().map(|row| row.iter().map(Subspace::to_f64).collect()).collect();
        SplitDecomposition {
            diameter: self.diameter,
            v: conv(&self.v),
            vtilde: conv(&self.vtilde),
            zero: Subspace::zero(self.zero.ambient_dim()),
        }
    }
}

/// Computes every `V_ij` and `Ṽ_ij` and asserts the dimension identities
/// `dim Ṽ_ij = dim V_ij - dim V_{i,j-1} - dim V_{i-1,j} + dim V_{i-1,j-1}`,
/// `dim V_rs = Σ_{i<=r, j<=s} dim Ṽ_ij` and `V_DD = V`.
pub fn split_decomposition<S: Scalar>(local: &LocalAlgebra<'_, S>) -> Result<SplitDecomposition<S>, TerwilligerError> {
    let d = local.diameter();
    let n = local.n();
    let mut v: Vec<Vec<Subspace<S>>> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let dual = local.dual_cumulative(i as isize);
        let row = (0..=d)
            .map(|j| dual.intersect(&local.cumulative(j as isize)))
            .collect::<Result<Vec<_>, _>>()?;
        v.push(row);
    }
    let mut split = SplitDecomposition { diameter: d, v, vtilde: Vec::new(), zero: Subspace::zero(n) };
    let mut vtilde = Vec::with_capacity(d + 1);
    for i in 0..=d as isize {
        let mut row = Vec::with_capacity(d + 1);
        for j in 0..=d as isize {
            let lower = split.v(i, j - 1).sum(split.v(i - 1, j))?;
            row.push(lower.orth_complement_in(split.v(i, j))?);
        }
        vtilde.push(row);
    }
    split.vtilde = vtilde;
    check_dimensions(&split, n)?;
    Ok(split)
}

fn check_dimensions<S: Scalar>(split: &SplitDecomposition<S>, n: usize) -> Result<(), TerwilligerError> {
    let d = split.diameter as isize;
    let dim = |i: isize, j: isize| split.v(i, j).dim() as isize;
    for i in 0..=d {
        for j in 0..=d {
            let expected = dim(i, j) - dim(i, j - 1) - dim(i - 1, j) + dim(i - 1, j - 1);
            let got = split.vtilde(i, j).dim() as isize;
            if got != expected {
                return Err(TerwilligerError::InvariantViolation(format!(
                    "dim Ṽ_{i}{j} = {got}, inclusion-exclusion gives {expected}"
                )));
            }
            let cumulative: usize =
                (0..=i).flat_map(|a| (0..=j).map(move |b| (a, b))).map(|(a, b)| split.vtilde(a, b).dim()).sum();
            if cumulative != dim(i, j) as usize {
                return Err(TerwilligerError::InvariantViolation(format!(
                    "V_{i}{j} has dimension {} but its Ṽ pieces sum to {cumulative}",
                    dim(i, j)
                )));
            }
        }
    }
    if dim(d, d) as usize != n {
        return Err(TerwilligerError::InvariantViolation(format!("dim V_DD = {} != {n}", dim(d, d))));
    }
    Ok(())
}
