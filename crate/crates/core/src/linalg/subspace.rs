use super::scalar::{dot, is_zero_vector, norm_f64};
use super::{LinalgError, Matrix, Scalar, Tolerance};

/// Result of a containment test, with the residual that decided it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Containment {
    pub contained: bool,
    pub residual: f64,
}

impl Containment {
    fn merge(self, other: Containment) -> Containment {
        Containment {
            contained: self.contained && other.contained,
            residual: self.residual.max(other.residual),
        }
    }

    const TRIVIAL: Containment = Containment { contained: true, residual: 0.0 };
}

/// A subspace of `S^ambient` held by an orthogonal basis.
///
/// In float mode the basis is orthonormal; in exact mode it is pairwise
/// orthogonal with integer entries.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
    tol: Tolerance,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Self::zero_with(ambient, S::default_tolerance())
    }

    pub fn zero_with(ambient: usize, tol: Tolerance) -> Self {
        Self { ambient, basis: Vec::new(), tol }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, 0..ambient)
    }

    /// Span of the standard basis vectors at `indices` (assumed distinct).
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let basis = indices
            .into_iter()
            .map(|i| {
                let mut v = vec![S::zero(); ambient];
                v[i] = S::one();
                v
            })
            .collect();
        Self { ambient, basis, tol: S::default_tolerance() }
    }

    /// Wraps vectors already known to be pairwise orthogonal and nonzero
    /// (orthonormal in float mode).
    pub(crate) fn from_orthogonal(ambient: usize, basis: Vec<Vec<S>>, tol: Tolerance) -> Self {
        Self { ambient, basis, tol }
    }

    pub fn span(vectors: &[Vec<S>], ambient: usize) -> Result<Self, LinalgError> {
        Self::span_with(vectors, ambient, S::default_tolerance())
    }

    pub fn span_with(vectors: &[Vec<S>], ambient: usize, tol: Tolerance) -> Result<Self, LinalgError> {
        if ambient == 0 {
            return Err(LinalgError::EmptyAmbient);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(LinalgError::LengthMismatch { len: v.len(), ambient });
        }
        let basis = S::orthogonal_basis(vectors, ambient, &tol);
        Ok(Self { ambient, basis, tol })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<S> {
        Matrix::from_fn(self.ambient, self.dim(), |i, j| self.basis[j][i].clone())
    }

    fn same_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.ambient];
        for b in &self.basis {
            let num = dot(v, b);
            if num.is_zero() {
                continue;
            }
            let coeff = num / dot(b, b);
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.clone() + coeff.clone() * x.clone();
            }
        }
        out
    }

    pub fn contains(&self, v: &[S]) -> Result<Containment, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::LengthMismatch { len: v.len(), ambient: self.ambient });
        }
        let p = self.project(v);
        let diff: Vec<S> = v.iter().zip(&p).map(|(a, b)| a.clone() - b.clone()).collect();
        let residual = norm_f64(&diff);
        let contained = match S::MODE {
            super::Mode::Exact => is_zero_vector(&diff),
            super::Mode::Float => residual <= self.tol.containment * norm_f64(v).max(1.0),
        };
        Ok(Containment { contained, residual })
    }

    /// Whether every basis vector of `self` lies in `other`.
    pub fn contained_in(&self, other: &Self) -> Result<Containment, LinalgError> {
        self.same_ambient(other)?;
        self.basis.iter().try_fold(Containment::TRIVIAL, |acc, b| Ok(acc.merge(other.contains(b)?)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let vectors: Vec<Vec<S>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span_with(&vectors, self.ambient, self.tol)
    }

    /// Intersection via the kernel of the stacked system `[B_S | -B_T]`.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero_with(self.ambient, self.tol));
        }
        if self.dim() == self.ambient {
            return Ok(other.clone());
        }
        if other.dim() == other.ambient {
            return Ok(self.clone());
        }
        let (p, q) = (self.dim(), other.dim());
        let cols = p + q;
        let mut data = Vec::with_capacity(self.ambient * cols);
        for i in 0..self.ambient {
            data.extend(self.basis.iter().map(|b| b[i].clone()));
            data.extend(other.basis.iter().map(|b| -b[i].clone()));
        }
        let kernel = S::kernel(self.ambient, cols, &data, &self.tol);
        let vectors: Vec<Vec<S>> = kernel
            .iter()
            .map(|coeffs| {
                let mut v = vec![S::zero(); self.ambient];
                for (c, b) in coeffs[..p].iter().zip(&self.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, x) in v.iter_mut().zip(b) {
                        *o = o.clone() + c.clone() * x.clone();
                    }
                }
                v
            })
            .collect();
        Self::span_with(&vectors, self.ambient, self.tol)
    }

    /// Orthogonal complement of `self` inside `ambient_space`.
    pub fn orth_complement_in(&self, ambient_space: &Self) -> Result<Self, LinalgError> {
        let inside = self.contained_in(ambient_space)?;
        if !inside.contained {
            return Err(LinalgError::NotContained { residual: inside.residual });
        }
        let target = ambient_space.dim().saturating_sub(self.dim());
        let basis = S::complement_basis(&self.basis, &ambient_space.basis, self.ambient, target, &self.tol);
        Ok(Self { ambient: self.ambient, basis, tol: self.tol })
    }

    /// `M S`.
    pub fn image(&self, m: &Matrix<S>) -> Result<Self, LinalgError> {
        if !m.is_square() || m.rows() != self.ambient {
            return Err(LinalgError::MatrixShape { rows: m.rows(), cols: m.cols(), ambient: self.ambient });
        }
        let vectors: Vec<Vec<S>> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Self::span_with(&vectors, self.ambient, self.tol)
    }

    /// Equality as subspaces, with the worst mutual-containment residual.
    pub fn equals(&self, other: &Self) -> Result<Containment, LinalgError> {
        self.same_ambient(other)?;
        let both = self.contained_in(other)?.merge(other.contained_in(self)?);
        Ok(Containment { contained: both.contained && self.dim() == other.dim(), residual: both.residual })
    }

    /// Float copy with an orthonormal basis.
    pub fn to_f64(&self) -> Subspace<f64> {
        let basis = self
            .basis
            .iter()
            .map(|b| {
                let v: Vec<f64> = b.iter().map(Scalar::to_f64).collect();
                let n = norm_f64(&v);
                v.into_iter().map(|x| x / n).collect()
            })
            .collect();
        Subspace { ambient: self.ambient, basis, tol: Tolerance::float_default() }
    }

    /// Checks that the basis has the promised Gram structure and full rank.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, u) in self.basis.iter().enumerate() {
            if u.len() != self.ambient {
                return Err(format!("basis vector {i} has length {}", u.len()));
            }
            for (j, v) in self.basis.iter().enumerate().skip(i) {
                let g = dot(u, v);
                match S::MODE {
                    super::Mode::Exact => {
                        if i == j && g <= S::zero() {
                            return Err(format!("basis vector {i} is zero"));
                        }
                        if i != j && !g.is_zero() {
                            return Err(format!("basis vectors {i},{j} not orthogonal"));
                        }
                    }
                    super::Mode::Float => {
                        let target = if i == j { 1.0 } else { 0.0 };
                        if (g.to_f64() - target).abs() > self.tol.rank.max(1e-10) * 100.0 {
                            return Err(format!("Gram entry ({i},{j}) = {g}"));
                        }
                    }
                }
            }
        }
        if self.dim() > self.ambient {
            return Err("more basis vectors than the ambient dimension".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    fn v(xs: &[i64]) -> Vec<f64> {
        xs.iter().map(|&x| x as f64).collect()
    }

    fn xy() -> Subspace<f64> {
        Subspace::span(&[v(&[1, 0, 0]), v(&[0, 1, 0])], 3).unwrap()
    }

    fn yz() -> Subspace<f64> {
        Subspace::span(&[v(&[0, 1, 0]), v(&[0, 0, 1])], 3).unwrap()
    }

    #[test]
    fn span_examples() {
        assert_eq!(Subspace::<f64>::span(&[], 3).unwrap().dim(), 0);
        let s = Subspace::span(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0])], 3).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.equals(&xy()).unwrap().contained);
        assert_eq!(Subspace::<f64>::span(&[], 0).unwrap_err(), LinalgError::EmptyAmbient);
        assert!(matches!(
            Subspace::span(&[v(&[1, 0])], 3),
            Err(LinalgError::LengthMismatch { len: 2, ambient: 3 })
        ));
    }

    #[test]
    fn sum_and_intersection_examples() {
        let z = Subspace::<f64>::zero(3);
        assert!(xy().sum(&z).unwrap().equals(&xy()).unwrap().contained);
        assert_eq!(xy().sum(&yz()).unwrap().dim(), 3);
        let full = Subspace::<f64>::full(3);
        assert!(xy().intersect(&full).unwrap().equals(&xy()).unwrap().contained);
        let y = xy().intersect(&yz()).unwrap();
        assert_eq!(y.dim(), 1);
        assert!(y.contains(&v(&[0, 1, 0])).unwrap().contained);
        assert!(matches!(
            xy().sum(&Subspace::zero(4)),
            Err(LinalgError::AmbientMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn complement_examples() {
        let s = xy();
        assert!(Subspace::zero(3).orth_complement_in(&s).unwrap().equals(&s).unwrap().contained);
        assert_eq!(s.orth_complement_in(&s).unwrap().dim(), 0);
        let x = Subspace::span(&[v(&[1, 0, 0])], 3).unwrap();
        let y = x.orth_complement_in(&s).unwrap();
        assert!(y.equals(&Subspace::span(&[v(&[0, 1, 0])], 3).unwrap()).unwrap().contained);
        let z = Subspace::span(&[v(&[0, 0, 1])], 3).unwrap();
        assert!(matches!(z.orth_complement_in(&s), Err(LinalgError::NotContained { .. })));
    }

    #[test]
    fn image_examples() {
        let s = xy();
        assert!(s.image(&Matrix::identity(3)).unwrap().equals(&s).unwrap().contained);
        assert_eq!(s.image(&Matrix::zeros(3, 3)).unwrap().dim(), 0);
        assert!(matches!(s.image(&Matrix::zeros(2, 2)), Err(LinalgError::MatrixShape { .. })));
    }

    #[test]
    fn containment_examples() {
        let s = xy();
        assert!(s.contains(&[0.0; 3]).unwrap().contained);
        let c = s.contains(&v(&[0, 0, 1])).unwrap();
        assert!(!c.contained);
        assert!((c.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_is_basis_independent() {
        let (c, s) = (0.6, 0.8);
        let rotated = Subspace::span(&[vec![c, s, 0.0], vec![-s, c, 0.0]], 3).unwrap();
        assert!(rotated.equals(&xy()).unwrap().contained);
        let x = Subspace::span(&[v(&[1, 0, 0])], 3).unwrap();
        let y = Subspace::span(&[v(&[0, 1, 0])], 3).unwrap();
        assert!(!x.equals(&y).unwrap().contained);
    }

    #[test]
    fn exact_mode_matches() {
        let q = |xs: &[i64]| xs.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
        let a = Subspace::span(&[q(&[1, 1, 0, 0]), q(&[0, 1, 1, 0])], 4).unwrap();
        let b = Subspace::span(&[q(&[1, 2, 1, 0]), q(&[0, 0, 0, 1])], 4).unwrap();
        let meet = a.intersect(&b).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&q(&[1, 2, 1, 0])).unwrap().contained);
        let comp = meet.orth_complement_in(&a).unwrap();
        assert_eq!(comp.dim(), 1);
        comp.check_invariants().unwrap();
        let c = a.contains(&q(&[0, 0, 0, 1])).unwrap();
        assert!(!c.contained);
        assert_eq!(c.residual, 1.0);
    }
}
