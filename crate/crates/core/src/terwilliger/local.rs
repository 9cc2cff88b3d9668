use crate::drg::DrgProfile;
use crate::linalg::{Matrix, Scalar, Subspace};

use super::TerwilligerError;

/// The dual Bose–Mesner data at a base vertex `x`, with the primitive
/// idempotents relabeled by a Q-polynomial ordering.
///
/// Index `i` of [`theta`](Self::theta), [`idempotent`](Self::idempotent) and
/// [`eigenspace`](Self::eigenspace) refers to natural label `ordering[i]`.
/// The subconstituent algebra is represented by its generators `A` and `A*`.
#[derive(Clone, Debug)]
pub struct LocalAlgebra<'a, S> {
    profile: &'a DrgProfile<S>,
    ordering: Vec<usize>,
    base: usize,
    spheres: Vec<Vec<usize>>,
    theta: Vec<S>,
    theta_star: Vec<S>,
    dual_diag: Vec<S>,
    adjacency: Matrix<S>,
    eigenspaces: Vec<Subspace<S>>,
    cumulative: Vec<Subspace<S>>,
    dual_cumulative: Vec<Subspace<S>>,
}

impl<'a, S: Scalar> LocalAlgebra<'a, S> {
    pub fn new(profile: &'a DrgProfile<S>, ordering: &[usize], base: usize) -> Result<Self, TerwilligerError> {
        let n = profile.n();
        let d = profile.diameter();
        if base >= n {
            return Err(TerwilligerError::BaseVertexOutOfRange { vertex: base, n });
        }
        if !profile.qpoly_orderings().iter().any(|o| o == ordering) {
            return Err(TerwilligerError::InvalidOrdering(ordering.to_vec()));
        }
        let dist = profile.distances();
        let spheres: Vec<Vec<usize>> = (0..=d).map(|i| dist.sphere(base, i)).collect();
        let theta: Vec<S> = ordering.iter().map(|&k| profile.theta()[k].clone()).collect();

        // θ*_i = |X| (E_1)_{xy} for any y at distance i from x
        let e1 = profile.idempotent_coefficients(ordering[1]);
        let scale = S::from_i64(n as i64);
        let theta_star: Vec<S> = (0..=d).map(|i| scale.clone() * e1[i].clone()).collect();
        let spread = theta_star.iter().map(|t| t.to_f64().abs()).fold(0.0, f64::max).max(1.0);
        for i in 0..=d {
            for j in i + 1..=d {
                if (theta_star[i].clone() - theta_star[j].clone()).is_negligible(spread, 1e-8) {
                    return Err(TerwilligerError::DegenerateDualEigenvalues { i, j });
                }
            }
        }
        let dual_diag: Vec<S> = (0..n).map(|y| theta_star[dist.get(base, y)].clone()).collect();

        let tol = S::default_tolerance();
        let mut eigenspaces = Vec::with_capacity(d + 1);
        for (i, &k) in ordering.iter().enumerate() {
            let space = Subspace::span_with(&profile.idempotent(k).columns(), n, tol)?;
            if space.dim() != profile.multiplicities()[k] {
                return Err(TerwilligerError::InvariantViolation(format!(
                    "dim E_{i}V = {} but the multiplicity is {}",
                    space.dim(),
                    profile.multiplicities()[k]
                )));
            }
            eigenspaces.push(space);
        }
        // eigenspaces are mutually orthogonal, so cumulative bases concatenate
        let mut cumulative = Vec::with_capacity(d + 1);
        let mut acc: Vec<Vec<S>> = Vec::new();
        for space in &eigenspaces {
            acc.extend(space.basis().iter().cloned());
            cumulative.push(Subspace::from_orthogonal(n, acc.clone(), tol));
        }
        let dual_cumulative =
            (0..=d).map(|i| Subspace::coordinate(n, spheres[..=i].iter().flatten().copied())).collect();

        Ok(Self {
            profile,
            ordering: ordering.to_vec(),
            base,
            spheres,
            theta,
            theta_star,
            dual_diag,
            adjacency: profile.adjacency(),
            eigenspaces,
            cumulative,
            dual_cumulative,
        })
    }

    pub fn profile(&self) -> &'a DrgProfile<S> {
        self.profile
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn base_vertex(&self) -> usize {
        self.base
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn diameter(&self) -> usize {
        self.profile.diameter()
    }

    /// Eigenvalues in the Q-polynomial labeling.
    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    pub fn theta_star(&self) -> &[S] {
        &self.theta_star
    }

    /// Vertices at distance `i` from the base vertex.
    pub fn sphere(&self, i: usize) -> &[usize] {
        &self.spheres[i]
    }

    pub fn adjacency(&self) -> &Matrix<S> {
        &self.adjacency
    }

    /// `E_i` in the Q-polynomial labeling.
    pub fn idempotent(&self, i: usize) -> Matrix<S> {
        self.profile.idempotent(self.ordering[i])
    }

    pub fn apply_idempotent(&self, i: usize, v: &[S]) -> Vec<S> {
        self.profile.apply_idempotent(self.ordering[i], v)
    }

    /// `E*_i`, the diagonal projector onto the `i`th subconstituent.
    pub fn dual_idempotent(&self, i: usize) -> Matrix<S> {
        let n = self.n();
        let d = self.profile.distances();
        Matrix::from_fn(n, n, |y, z| if y == z && d.get(self.base, y) == i { S::one() } else { S::zero() })
    }

    /// Diagonal of `A*_i`: `(A*_i)_{yy} = |X| (E_i)_{xy}`.
    pub fn dual_distance_diagonal(&self, i: usize) -> Vec<S> {
        let scale = S::from_i64(self.n() as i64);
        (0..self.n())
            .map(|y| scale.clone() * self.profile.idempotent_entry(self.ordering[i], self.base, y).clone())
            .collect()
    }

    /// `A* = A*_1`.
    pub fn dual_adjacency(&self) -> Matrix<S> {
        Matrix::diagonal(&self.dual_diag)
    }

    pub fn apply_dual_adjacency(&self, v: &[S]) -> Vec<S> {
        v.iter().zip(&self.dual_diag).map(|(a, b)| a.clone() * b.clone()).collect()
    }

    fn zero(&self) -> Subspace<S> {
        Subspace::zero(self.n())
    }

    /// `E_iV`; the zero subspace outside `0..=D`.
    pub fn eigenspace(&self, i: isize) -> Subspace<S> {
        self.index(i).map_or_else(|| self.zero(), |i| self.eigenspaces[i].clone())
    }

    /// `E*_iV`; the zero subspace outside `0..=D`.
    pub fn subconstituent(&self, i: isize) -> Subspace<S> {
        self.index(i).map_or_else(|| self.zero(), |i| Subspace::coordinate(self.n(), self.spheres[i].iter().copied()))
    }

    /// `E_0V + ... + E_jV`; zero for `j < 0`, all of `V` for `j >= D`.
    pub fn cumulative(&self, j: isize) -> Subspace<S> {
        Self::clamped(&self.cumulative, j, self.n())
    }

    /// `E*_0V + ... + E*_iV`; zero for `i < 0`, all of `V` for `i >= D`.
    pub fn dual_cumulative(&self, i: isize) -> Subspace<S> {
        Self::clamped(&self.dual_cumulative, i, self.n())
    }

    fn clamped(list: &[Subspace<S>], i: isize, n: usize) -> Subspace<S> {
        if i < 0 {
            Subspace::zero(n)
        } else {
            list[(i as usize).min(list.len() - 1)].clone()
        }
    }

    fn index(&self, i: isize) -> Option<usize> {
        (0..=self.diameter() as isize).contains(&i).then_some(i as usize)
    }
}
