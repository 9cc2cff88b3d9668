use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::drg::DrgProfile;
use crate::linalg::{norm_f64, Mode, Scalar};

use super::TerwilligerError;

fn validate<S: Scalar>(v: &[S], n: usize) -> Result<(), TerwilligerError> {
    if v.len() != n {
        return Err(TerwilligerError::LengthMismatch { len: v.len(), n });
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(TerwilligerError::ZeroVector);
    }
    Ok(())
}

fn check_ordering<S: Scalar>(profile: &DrgProfile<S>, ordering: &[usize]) -> Result<(), TerwilligerError> {
    if profile.qpoly_orderings().iter().any(|o| o == ordering) {
        Ok(())
    } else {
        Err(TerwilligerError::InvalidOrdering(ordering.to_vec()))
    }
}

/// The largest `i` with `E_iv != 0` in the given Q-polynomial ordering.
/// In float mode `E_iv` counts as zero when `‖E_iv‖ <= tol ‖v‖`.
pub fn dual_width<S: Scalar>(
    profile: &DrgProfile<S>,
    ordering: &[usize],
    v: &[S],
    tol: f64,
) -> Result<usize, TerwilligerError> {
    check_ordering(profile, ordering)?;
    validate(v, profile.n())?;
    let scale = norm_f64(v);
    for i in (0..ordering.len()).rev() {
        let w = profile.apply_idempotent(ordering[i], v);
        let nonzero = match S::MODE {
            Mode::Exact => w.iter().any(|x| !x.is_zero()),
            Mode::Float => norm_f64(&w) > tol * scale,
        };
        if nonzero {
            return Ok(i);
        }
    }
    Err(TerwilligerError::InvariantViolation("every E_iv vanishes for a nonzero v".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct DualWidthReport {
    pub dual_width: usize,
    /// `D - g`.
    pub bound: usize,
    pub support: Vec<usize>,
    /// Smallest `max_{y in support} ∂(x,y) - (D - g)` over all `x`.
    pub min_margin: isize,
    pub tightest_vertex: usize,
    pub pass: bool,
}

/// Checks that every vertex `x` has some `y` in the support of `v` with
/// `∂(x,y) >= D - g`, where `g` is the dual width of `v`. The support is
/// the set of coordinates with `|v_y| > tol max|v|`.
pub fn check_dual_width_bound<S: Scalar>(
    profile: &DrgProfile<S>,
    ordering: &[usize],
    v: &[S],
    tol: f64,
) -> Result<DualWidthReport, TerwilligerError> {
    let g = dual_width(profile, ordering, v, tol)?;
    let d = profile.diameter();
    let bound = d - g;
    let peak = v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let support: Vec<usize> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| match S::MODE {
            Mode::Exact => !x.is_zero(),
            Mode::Float => x.to_f64().abs() > tol * peak,
        })
        .map(|(y, _)| y)
        .collect();
    let dist = profile.distances();
    let (tightest_vertex, reach) = (0..profile.n())
        .map(|x| (x, support.iter().map(|&y| dist.get(x, y)).max().unwrap_or(0)))
        .min_by_key(|&(_, r)| r)
        .expect("graph has vertices");
    let min_margin = reach as isize - bound as isize;
    Ok(DualWidthReport { dual_width: g, bound, support, min_margin, tightest_vertex, pass: min_margin >= 0 })
}

/// `count` nonzero vectors of length `n`, each with between 1 and
/// `max_support` nonzero integer entries in `-5..=5`.
pub fn random_sparse_vectors<S: Scalar>(n: usize, count: usize, max_support: usize, seed: u64) -> Vec<Vec<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_support = max_support.clamp(1, n.max(1));
    (0..count)
        .map(|_| {
            let mut v = vec![S::zero(); n];
            let k = rng.random_range(1..=max_support);
            for _ in 0..k {
                let mut c = 0;
                while c == 0 {
                    c = rng.random_range(-5i64..=5);
                }
                v[rng.random_range(0..n)] = S::from_i64(c);
            }
            v
        })
        .collect()
}
