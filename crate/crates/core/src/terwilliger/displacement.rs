use crate::linalg::{dot, norm_f64, Scalar, Subspace};

use super::{SplitDecomposition, TerwilligerError};

/// Largest normalized inner product tolerated between different `V_η` in
/// float mode.
pub const ORTHOGONALITY_TOL: f64 = 1e-7;

/// `V = V_0 + ... + V_D` (orthogonal direct sum), where `V_η` gathers the
/// irreducible modules of displacement `η`.
#[derive(Clone, Debug)]
pub struct DisplacementDecomposition<S> {
    parts: Vec<Subspace<S>>,
    worst_overlap: f64,
}

impl<S: Scalar> DisplacementDecomposition<S> {
    /// `V_η`, zero outside `0..=D`.
    pub fn part(&self, eta: isize) -> Subspace<S> {
        usize::try_from(eta)
            .ok()
            .and_then(|e| self.parts.get(e))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.parts[0].ambient_dim()))
    }

    pub fn parts(&self) -> &[Subspace<S>] {
        &self.parts
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(Subspace::dim).collect()
    }

    /// Largest `|<u,v>| / (|u| |v|)` over basis vectors of distinct parts.
    pub fn worst_overlap(&self) -> f64 {
        self.worst_overlap
    }

    pub fn to_f64(&self) -> DisplacementDecomposition<f64> {
        DisplacementDecomposition { parts: self.parts.iter().map(Subspace::to_f64).collect(), worst_overlap: self.worst_overlap }
    }
}

/// `V_η = Σ_{i+j = D+η} Ṽ_ij`, checked pairwise orthogonal and summing to `V`.
pub fn displacement_from_split<S: Scalar>(
    split: &SplitDecomposition<S>,
) -> Result<DisplacementDecomposition<S>, TerwilligerError> {
    let d = split.diameter() as isize;
    let n = split.v(d, d).ambient_dim();
    let mut parts = Vec::with_capacity(d as usize + 1);
    for eta in 0..=d {
        let mut acc = Subspace::zero(n);
        for i in eta..=d {
            acc = acc.sum(split.vtilde(i, d + eta - i))?;
        }
        parts.push(acc);
    }
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != n {
        return Err(TerwilligerError::InvariantViolation(format!("displacement parts have total dimension {total} != {n}")));
    }
    let mut worst = 0.0f64;
    for (a, pa) in parts.iter().enumerate() {
        for (b, pb) in parts.iter().enumerate().skip(a + 1) {
            for u in pa.basis() {
                for v in pb.basis() {
                    let g = dot(u, v);
                    let overlap = g.to_f64().abs() / (norm_f64(u) * norm_f64(v));
                    worst = worst.max(overlap);
                    let violated = match S::MODE {
                        crate::linalg::Mode::Exact => !g.is_zero(),
                        crate::linalg::Mode::Float => overlap > ORTHOGONALITY_TOL,
                    };
                    if violated {
                        return Err(TerwilligerError::OrthogonalityViolation { first: a, second: b, residual: overlap });
                    }
                }
            }
        }
    }
    Ok(DisplacementDecomposition { parts, worst_overlap: worst })
}
