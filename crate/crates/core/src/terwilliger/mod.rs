//! The subconstituent algebra at a base vertex: split and displacement
//! decompositions of the standard module, the irreducible-module oracle and
//! the checks tying them together.

mod displacement;
mod dual_width;
mod local;
mod oracle;
mod split;
mod verify;

pub use displacement::{displacement_from_split, DisplacementDecomposition, ORTHOGONALITY_TOL};
pub use dual_width::{check_dual_width_bound, dual_width, random_sparse_vectors, DualWidthReport};
pub use local::LocalAlgebra;
pub use oracle::{decompose_irreducible, module_split, ModuleRecord, OracleConfig};
pub use split::{split_decomposition, SplitDecomposition};
pub use verify::{verify_all, CheckResult, CheckStatus, VerificationReport, VerifyTolerances};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::drg::{DistanceTable, DrgError};
use crate::linalg::{LinalgError, Scalar};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TerwilligerError {
    #[error(transparent)]
    Drg(#[from] DrgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("base vertex {vertex} out of range for n = {n}")]
    BaseVertexOutOfRange { vertex: usize, n: usize },
    #[error("{0:?} is not a Q-polynomial ordering of this graph")]
    InvalidOrdering(Vec<usize>),
    #[error("dual eigenvalues θ*_{i} and θ*_{j} coincide")]
    DegenerateDualEigenvalues { i: usize, j: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("V_{first} and V_{second} are not orthogonal (normalized overlap {residual:e})")]
    OrthogonalityViolation { first: usize, second: usize, residual: f64 },
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("irreducibility not certified after {attempts} attempts: {detail}")]
    IrreducibilityNotCertified { attempts: usize, detail: String },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector has length {len}, expected {n}")]
    LengthMismatch { len: usize, n: usize },
}

/// Everything computed for one base vertex and ordering.
#[derive(Clone, Debug)]
pub struct Analysis<S> {
    pub split: SplitDecomposition<S>,
    pub displacement: DisplacementDecomposition<S>,
    pub modules: Option<Vec<ModuleRecord>>,
    pub report: VerificationReport,
}

/// Builds the split and displacement decompositions, optionally runs the
/// oracle, and verifies. Structural failures of the decompositions are
/// errors; failed checks are recorded in the report.
pub fn analyze<S: Scalar>(
    local: &LocalAlgebra<'_, S>,
    oracle: Option<(u64, &OracleConfig)>,
    tol: &VerifyTolerances,
) -> Result<Analysis<S>, TerwilligerError> {
    let split = split_decomposition(local)?;
    let displacement = displacement_from_split(&split)?;
    let modules = oracle.map(|(seed, config)| decompose_irreducible(local, seed, config)).transpose()?;
    let report = verify_all(local, &split, &displacement, modules.as_deref(), oracle.map(|(s, _)| s), tol);
    Ok(Analysis { split, displacement, modules, report })
}

/// One vertex from each class of a cheap vertex invariant: for every sphere
/// around the vertex, the sorted multiset of distances between its members.
/// Vertices in different classes are never equivalent under an automorphism;
/// vertices in the same class may still be.
pub fn representative_base_vertices(dist: &DistanceTable) -> Vec<usize> {
    let mut classes: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
    for x in 0..dist.n() {
        let signature: Vec<Vec<usize>> = (0..=dist.diameter())
            .map(|i| {
                let sphere = dist.sphere(x, i);
                let mut counts = vec![0usize; dist.diameter() + 1];
                for (k, &y) in sphere.iter().enumerate() {
                    for &z in &sphere[k + 1..] {
                        counts[dist.get(y, z)] += 1;
                    }
                }
                counts
            })
            .collect();
        classes.entry(signature).or_insert(x);
    }
    let mut reps: Vec<usize> = classes.into_values().collect();
    reps.sort_unstable();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle, hamming, johnson, DEFAULT_SIZE_CAP};
    use crate::linalg::Subspace;
    use crate::drg::DrgProfile;
    use crate::linalg::Rational;

    fn cube<S: Scalar>() -> DrgProfile<S> {
        DrgProfile::certify(hamming(3, 2, DEFAULT_SIZE_CAP).unwrap()).unwrap()
    }

    #[test]
    fn hypercube_float_passes_everything() {
        let profile = cube::<f64>();
        let ordering = profile.ordering(0).unwrap().to_vec();
        let local = LocalAlgebra::new(&profile, &ordering, 0).unwrap();
        let a = analyze(&local, Some((1, &OracleConfig::default())), &VerifyTolerances::default()).unwrap();
        for c in &a.report.checks {
            assert!(c.passed(), "{c:?}");
            assert!(c.worst_residual < 1e-9, "{c:?}");
        }
        assert_eq!(a.displacement.dims(), vec![8, 0, 0, 0]);
        let tilde = a.split.vtilde_dims();
        assert_eq!([tilde[0][3], tilde[1][2], tilde[2][1], tilde[3][0]], [1, 3, 3, 1]);
    }

    #[test]
    fn hypercube_exact_passes_everything() {
        let profile = cube::<Rational>();
        let ordering = profile.ordering(0).unwrap().to_vec();
        let local = LocalAlgebra::new(&profile, &ordering, 5).unwrap();
        let a = analyze(&local, Some((1, &OracleConfig::default())), &VerifyTolerances::default()).unwrap();
        for c in &a.report.checks {
            assert!(c.passed(), "{c:?}");
        }
        let theta_star: Vec<f64> = local.theta_star().iter().map(Scalar::to_f64).collect();
        assert_eq!(theta_star, vec![3.0, 1.0, -1.0, -3.0]);
    }

    #[test]
    fn johnson_six_three_passes_everything() {
        let profile = DrgProfile::<f64>::certify(johnson(6, 3, DEFAULT_SIZE_CAP).unwrap()).unwrap();
        let ordering = profile.ordering(0).unwrap().to_vec();
        let local = LocalAlgebra::new(&profile, &ordering, 7).unwrap();
        let a = analyze(&local, Some((3, &OracleConfig::default())), &VerifyTolerances::default()).unwrap();
        assert!(a.report.all_passed(), "{:#?}", a.report);
        assert_eq!(a.displacement.dims().iter().sum::<usize>(), 20);
    }

    #[test]
    fn distance_transitive_graphs_have_one_representative() {
        let g = johnson(7, 3, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(representative_base_vertices(&g.distances().unwrap()), vec![0]);
    }

    fn local_parts<S: Scalar>(profile: &DrgProfile<S>, base: usize) -> LocalAlgebra<'_, S> {
        let ordering = profile.ordering(0).unwrap().to_vec();
        LocalAlgebra::new(profile, &ordering, base).unwrap()
    }

    #[test]
    fn dual_idempotents_partition_the_vertices() {
        let profile = DrgProfile::<Rational>::certify(johnson(6, 3, DEFAULT_SIZE_CAP).unwrap()).unwrap();
        let local = local_parts(&profile, 4);
        let n = local.n();
        let total: Rational = (0..=3).map(|i| local.dual_idempotent(i).trace()).sum();
        assert_eq!(total, Rational::from_i64(n as i64));
        let e0 = local.dual_idempotent(0);
        assert_eq!(e0.trace(), Rational::from_i64(1));
        assert_eq!(e0[(4, 4)], Rational::from_i64(1));
        assert!(local.dual_distance_diagonal(0).iter().all(|x| *x == Rational::from_i64(1)));
        assert_eq!(local.dual_distance_diagonal(1), (0..n).map(|y| local.dual_adjacency()[(y, y)].clone()).collect::<Vec<_>>());
    }

    #[test]
    fn local_algebra_rejects_bad_inputs() {
        let profile = cube::<f64>();
        assert!(matches!(
            LocalAlgebra::new(&profile, &[0, 1, 2, 3], 8),
            Err(TerwilligerError::BaseVertexOutOfRange { vertex: 8, n: 8 })
        ));
        assert!(matches!(LocalAlgebra::new(&profile, &[0, 2, 1, 3], 0), Err(TerwilligerError::InvalidOrdering(_))));
    }

    #[test]
    fn split_boundary_facts() {
        let profile = DrgProfile::<Rational>::certify(johnson(6, 3, DEFAULT_SIZE_CAP).unwrap()).unwrap();
        let local = local_parts(&profile, 0);
        let split = split_decomposition(&local).unwrap();
        let disp = displacement_from_split(&split).unwrap();
        assert_eq!(split.v(3, 3).dim(), 20);
        assert_eq!(split.v(0, 2).dim(), 0);
        assert_eq!(disp.part(3).dim(), split.vtilde(3, 3).dim());
        assert_eq!(disp.part(-1).dim(), 0);
        assert_eq!(disp.worst_overlap(), 0.0);
    }

    #[test]
    fn oracle_modules_on_the_hypercube() {
        let profile = cube::<f64>();
        let local = local_parts(&profile, 3);
        let records = decompose_irreducible(&local, 1, &OracleConfig::default()).unwrap();
        assert!(records.iter().all(|r| r.displacement == 0));
        assert_eq!(records.iter().map(ModuleRecord::dim).sum::<usize>(), 8);
        let primary: Vec<&ModuleRecord> = records.iter().filter(|r| r.diameter == 3).collect();
        assert_eq!(primary.len(), 1);
        assert!(primary[0].basis.contains(&[1.0; 8]).unwrap().contained);
        assert_eq!(primary[0].split.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![1; 4]);
        // span{A_i x̂} is the primary module
        let columns: Vec<Vec<f64>> = (0..=3).map(|i| profile.distances().distance_matrix::<f64>(i).column(3)).collect();
        let span = Subspace::span(&columns, 8).unwrap();
        assert!(span.equals(&primary[0].basis).unwrap().contained);
        for r in &records {
            let first = &r.split[0];
            assert!(first.equals(&local.subconstituent(r.endpoint as isize).intersect(&r.basis).unwrap()).unwrap().contained);
            let again = module_split(r, &local).unwrap();
            for (a, b) in again.iter().zip(&r.split) {
                assert!(a.equals(b).unwrap().contained);
            }
        }
    }

    #[test]
    fn oracle_respects_its_cap() {
        let profile = DrgProfile::<f64>::certify(johnson(7, 3, DEFAULT_SIZE_CAP).unwrap()).unwrap();
        let local = local_parts(&profile, 0);
        let config = OracleConfig { cap: 20, ..OracleConfig::default() };
        assert_eq!(
            decompose_irreducible(&local, 1, &config).unwrap_err(),
            TerwilligerError::OracleCapExceeded { n: 35, cap: 20 }
        );
    }

    #[test]
    fn oracle_is_deterministic() {
        let profile = DrgProfile::<f64>::certify(cycle(6, DEFAULT_SIZE_CAP).unwrap()).unwrap();
        let local = local_parts(&profile, 2);
        let a = decompose_irreducible(&local, 9, &OracleConfig::default()).unwrap();
        let b = decompose_irreducible(&local, 9, &OracleConfig::default()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.basis.basis(), y.basis.basis());
        }
    }

    #[test]
    fn corrupted_grid_fails_shift_check() {
        let profile = cube::<f64>();
        let local = local_parts(&profile, 0);
        let mut split = split_decomposition(&local).unwrap();
        let disp = displacement_from_split(&split).unwrap();
        let random = random_sparse_vectors::<f64>(8, 3, 8, 5);
        split.replace_vtilde(1, 2, Subspace::span(&random, 8).unwrap());
        let report = verify_all(&local, &split, &disp, None, None, &VerifyTolerances::default());
        let v4 = report.check("V4").unwrap();
        assert_eq!(v4.status, CheckStatus::Fail);
        assert!(v4.witness.as_deref().unwrap().contains("Ṽ(1,2)"), "{v4:?}");
        assert_eq!(report.check("V5").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn report_lists_each_check_once() {
        let profile = cube::<Rational>();
        let local = local_parts(&profile, 0);
        let a = analyze(&local, None, &VerifyTolerances::default()).unwrap();
        let ids: Vec<&str> = a.report.checks.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec!["V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8"]);
        assert!(a.report.checks.iter().filter(|c| c.status == CheckStatus::Pass).all(|c| c.worst_residual == 0.0));
    }
}
