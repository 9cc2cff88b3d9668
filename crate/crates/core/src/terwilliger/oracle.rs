//! Decomposition of the standard module into irreducible modules, computed
//! independently of the split decomposition.
//!
//! The commutant of `{A, A*}` equals the commutant of the algebra they
//! generate. Because that algebra is closed under transposition it is
//! semisimple, and a generic symmetric element of the commutant has an
//! eigenspace decomposition whose pieces are irreducible modules. Each
//! eigenspace is certified (invariance, scalar compression of the commutant,
//! cyclic generation) and the draw is repeated with a derived seed if any
//! piece fails.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Scalar, Subspace, Tolerance};

use super::{LocalAlgebra, TerwilligerError};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Largest vertex count the oracle will attempt.
    pub cap: usize,
    /// Draws of the random commutant element before giving up.
    pub max_attempts: usize,
    /// Eigenvalues of the random element closer than this fraction of its
    /// spectral radius are grouped.
    pub cluster_rel: f64,
    /// `E_iW` counts as nonzero when some unit basis vector of `W` has a
    /// projection longer than this.
    pub nonzero_rel: f64,
    /// Residual allowed when certifying invariance and irreducibility.
    pub certify_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { cap: 64, max_attempts: 8, cluster_rel: 1e-6, nonzero_rel: 1e-7, certify_tol: 1e-6 }
    }
}

/// One irreducible module `W` with its endpoint `ρ`, dual endpoint `τ`,
/// diameter `d`, dual diameter `d*`, displacement `η = ρ + τ + d - D` and
/// split `W_0, ..., W_d`.
#[derive(Clone, Debug)]
pub struct ModuleRecord {
    pub basis: Subspace<f64>,
    pub endpoint: usize,
    pub dual_endpoint: usize,
    pub diameter: usize,
    pub dual_diameter: usize,
    pub displacement: isize,
    /// `dual_support[i]` iff `E*_iW != 0`.
    pub dual_support: Vec<bool>,
    /// `support[i]` iff `E_iW != 0`.
    pub support: Vec<bool>,
    pub split: Vec<Subspace<f64>>,
}

impl ModuleRecord {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Float copies of the generators and projectors at one base vertex.
pub(crate) struct FloatGenerators {
    pub(crate) n: usize,
    pub(crate) diameter: usize,
    pub(crate) adjacency: DMatrix<f64>,
    pub(crate) dual: Vec<f64>,
    pub(crate) sphere_of: Vec<usize>,
    /// `E_i` in the Q-polynomial labeling.
    pub(crate) idempotents: Vec<DMatrix<f64>>,
}

impl FloatGenerators {
    pub(crate) fn new<S: Scalar>(local: &LocalAlgebra<'_, S>) -> Self {
        let n = local.n();
        let a = local.adjacency();
        let adjacency = DMatrix::from_fn(n, n, |i, j| a[(i, j)].to_f64());
        let dual = local.apply_dual_adjacency(&vec![S::one(); n]).iter().map(Scalar::to_f64).collect();
        let dist = local.profile().distances();
        let sphere_of = (0..n).map(|y| dist.get(local.base_vertex(), y)).collect();
        let idempotents = (0..=local.diameter())
            .map(|i| {
                let e = local.idempotent(i);
                DMatrix::from_fn(n, n, |y, z| e[(y, z)].to_f64())
            })
            .collect();
        Self { n, diameter: local.diameter(), adjacency, dual, sphere_of, idempotents }
    }

    fn apply_dual(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| self.dual[i] * m[(i, j)])
    }

    fn restrict_to_sphere(&self, i: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| if self.sphere_of[r] == i { m[(r, c)] } else { 0.0 })
    }
}

/// Orthonormal basis of the commutant `{M : MA = AM, MA* = A*M}`.
///
/// `MA* = A*M` reads `(θ*_{∂(x,y)} - θ*_{∂(x,z)}) M_yz = 0`, and the dual
/// eigenvalues are distinct, so only entries inside one subconstituent are
/// unknowns; the remaining equations are `MA - AM = 0`.
pub(crate) fn commutant_basis(gens: &FloatGenerators) -> Vec<DMatrix<f64>> {
    let n = gens.n;
    let mut index = vec![usize::MAX; n * n];
    let mut unknowns = Vec::new();
    for y in 0..n {
        for z in 0..n {
            if gens.sphere_of[y] == gens.sphere_of[z] {
                index[y * n + z] = unknowns.len();
                unknowns.push((y, z));
            }
        }
    }
    let neighbors: Vec<Vec<usize>> =
        (0..n).map(|y| (0..n).filter(|&w| gens.adjacency[(y, w)] != 0.0).collect()).collect();
    let cols = unknowns.len();
    let mut data: Vec<f64> = Vec::new();
    let mut rows = 0;
    let mut row = vec![0.0; cols];
    for y in 0..n {
        for z in 0..n {
            if gens.sphere_of[y].abs_diff(gens.sphere_of[z]) > 1 {
                continue;
            }
            row.iter_mut().for_each(|x| *x = 0.0);
            let mut any = false;
            // (MA)_yz = Σ_{w ~ z} M_yw, (AM)_yz = Σ_{w ~ y} M_wz
            for &w in &neighbors[z] {
                if let Some(&k) = index.get(y * n + w).filter(|&&k| k != usize::MAX) {
                    row[k] += 1.0;
                    any = true;
                }
            }
            for &w in &neighbors[y] {
                if let Some(&k) = index.get(w * n + z).filter(|&&k| k != usize::MAX) {
                    row[k] -= 1.0;
                    any = true;
                }
            }
            if any {
                data.extend_from_slice(&row);
                rows += 1;
            }
        }
    }
    let kernel = f64::kernel(rows, cols, &data, &Tolerance::float_default());
    kernel
        .into_iter()
        .map(|coeffs| {
            let mut m = DMatrix::zeros(n, n);
            for (&(y, z), c) in unknowns.iter().zip(coeffs) {
                m[(y, z)] = c;
            }
            m
        })
        .collect()
}

fn derived_seed(seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        return seed;
    }
    // splitmix64 step
    let mut z = seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Dimension of the span of the orbit of `start` under words in `A`, `A*`.
///
/// Every vector pushed is a generator applied to a unit vector, so new
/// directions are judged against the generator scale, not the image norm:
/// an image that is pure roundoff must not count.
fn orbit_dimension(gens: &FloatGenerators, start: DVector<f64>, limit: usize) -> usize {
    let scale = gens.adjacency.amax().max(gens.dual.iter().fold(1.0f64, |m, x| m.max(x.abs())));
    let mut found: Vec<DVector<f64>> = Vec::new();
    let Some(start) = start.try_normalize(0.0) else { return 0 };
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        let mut w = v;
        for _ in 0..2 {
            for q in &found {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let norm = w.norm();
        if norm <= 1e-8 * scale {
            continue;
        }
        let w = w / norm;
        queue.push(&gens.adjacency * &w);
        queue.push(DVector::from_fn(gens.n, |i, _| gens.dual[i] * w[i]));
        found.push(w);
        if found.len() > limit {
            break;
        }
    }
    found.len()
}

/// Why a cluster of eigenvectors was rejected.
fn certify_cluster(
    gens: &FloatGenerators,
    commutant: &[DMatrix<f64>],
    u: &DMatrix<f64>,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<(), String> {
    let r = u.ncols();
    let a_scale = gens.adjacency.amax().max(1.0);
    let au = &gens.adjacency * u;
    let res = (&au - u * (u.transpose() * &au)).amax();
    if res > tol * a_scale {
        return Err(format!("not A-invariant (residual {res:e})"));
    }
    let d_scale = gens.dual.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let su = gens.apply_dual(u);
    let res = (&su - u * (u.transpose() * &su)).amax();
    if res > tol * d_scale {
        return Err(format!("not A*-invariant (residual {res:e})"));
    }
    for c in commutant {
        let sym = (c + c.transpose()) * 0.5;
        let b = u.transpose() * sym * u;
        let mean = b.trace() / r as f64;
        let dev = (b - DMatrix::identity(r, r) * mean).amax();
        if dev > tol {
            return Err(format!("commutant acts non-scalarly (deviation {dev:e})"));
        }
    }
    let coeffs = DVector::from_fn(r, |_, _| rng.random_range(-1.0..=1.0));
    let start = u * coeffs;
    let orbit = orbit_dimension(gens, start, r);
    if orbit != r {
        return Err(format!("orbit of a random vector spans {orbit} of {r} dimensions"));
    }
    Ok(())
}

fn column_subspace(m: &DMatrix<f64>) -> Subspace<f64> {
    let cols: Vec<Vec<f64>> = m.column_iter().map(|c| c.iter().copied().collect()).collect();
    Subspace::span(&cols, m.nrows()).expect("columns have the ambient length")
}

/// Splits the standard module into irreducible modules and records their
/// parameters and per-module splits.
pub fn decompose_irreducible<S: Scalar>(
    local: &LocalAlgebra<'_, S>,
    seed: u64,
    config: &OracleConfig,
) -> Result<Vec<ModuleRecord>, TerwilligerError> {
    let n = local.n();
    if n > config.cap {
        return Err(TerwilligerError::OracleCapExceeded { n, cap: config.cap });
    }
    let gens = FloatGenerators::new(local);
    let commutant = commutant_basis(&gens);
    let mut last_failure = String::new();
    for attempt in 0..config.max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(seed, attempt));
        let mut h = DMatrix::zeros(n, n);
        for c in &commutant {
            h += c * rng.random_range(-1.0..=1.0);
        }
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let radius = eig.eigenvalues.amax();
        let gap = config.cluster_rel * radius;
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &k in &order {
            match clusters.last_mut() {
                Some(c) if eig.eigenvalues[k] - eig.eigenvalues[*c.last().expect("nonempty")] <= gap => c.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        let mut pieces = Vec::with_capacity(clusters.len());
        let mut failed = None;
        for (idx, cluster) in clusters.iter().enumerate() {
            let u = DMatrix::from_fn(n, cluster.len(), |i, j| eig.eigenvectors[(i, cluster[j])]);
            if let Err(why) = certify_cluster(&gens, &commutant, &u, &mut rng, config.certify_tol) {
                failed = Some(format!("attempt {attempt}, eigenspace {idx}: {why}"));
                break;
            }
            pieces.push(u);
        }
        if let Some(why) = failed {
            last_failure = why;
            continue;
        }
        let mut records: Vec<ModuleRecord> =
            pieces.iter().map(|u| build_record(&gens, u, config.nonzero_rel)).collect::<Result<_, _>>()?;
        records.sort_by_key(|r| (r.endpoint, r.dual_endpoint, std::cmp::Reverse(r.diameter)));
        let total: usize = records.iter().map(ModuleRecord::dim).sum();
        if total != n {
            return Err(TerwilligerError::InvariantViolation(format!("module dimensions sum to {total} != {n}")));
        }
        return Ok(records);
    }
    Err(TerwilligerError::IrreducibilityNotCertified { attempts: config.max_attempts, detail: last_failure })
}

fn support_flags(projections: impl Iterator<Item = DMatrix<f64>>, threshold: f64) -> Vec<bool> {
    projections
        .map(|p| p.column_iter().map(|c| c.norm()).fold(0.0, f64::max) > threshold)
        .collect()
}

fn interval(flags: &[bool]) -> (usize, usize) {
    let first = flags.iter().position(|&f| f).unwrap_or(0);
    let count = flags.iter().filter(|&&f| f).count();
    (first, count.saturating_sub(1))
}

fn build_record(gens: &FloatGenerators, u: &DMatrix<f64>, threshold: f64) -> Result<ModuleRecord, TerwilligerError> {
    let d = gens.diameter;
    let dual_support = support_flags((0..=d).map(|i| gens.restrict_to_sphere(i, u)), threshold);
    let support = support_flags(gens.idempotents.iter().map(|e| e * u), threshold);
    let (endpoint, diameter) = interval(&dual_support);
    let (dual_endpoint, dual_diameter) = interval(&support);
    let displacement = (endpoint + dual_endpoint + diameter) as isize - d as isize;
    let basis = column_subspace(u);
    let split = split_module(gens, u, endpoint, dual_endpoint, diameter)?;
    Ok(ModuleRecord { basis, endpoint, dual_endpoint, diameter, dual_diameter, displacement, dual_support, support, split })
}

/// `W_h = (E*_ρW + ... + E*_{ρ+h}W) ∩ (E_τW + ... + E_{τ+d-h}W)`.
fn split_module(
    gens: &FloatGenerators,
    u: &DMatrix<f64>,
    endpoint: usize,
    dual_endpoint: usize,
    diameter: usize,
) -> Result<Vec<Subspace<f64>>, TerwilligerError> {
    let d = gens.diameter;
    let dual_parts: Vec<Subspace<f64>> = (0..=d).map(|i| column_subspace(&gens.restrict_to_sphere(i, u))).collect();
    let parts: Vec<Subspace<f64>> = gens.idempotents.iter().map(|e| column_subspace(&(e * u))).collect();
    let sum_range = |list: &[Subspace<f64>], lo: usize, hi: usize| -> Result<Subspace<f64>, TerwilligerError> {
        let mut acc = Subspace::zero(gens.n);
        for s in list.iter().take(hi.min(d) + 1).skip(lo) {
            acc = acc.sum(s)?;
        }
        Ok(acc)
    };
    (0..=diameter)
        .map(|h| {
            let left = sum_range(&dual_parts, endpoint, endpoint + h)?;
            let right = sum_range(&parts, dual_endpoint, dual_endpoint + diameter - h)?;
            Ok(left.intersect(&right)?)
        })
        .collect()
}

/// Recomputes the split `W_0, ..., W_d` of a module from its basis and the
/// local algebra.
pub fn module_split<S: Scalar>(
    record: &ModuleRecord,
    local: &LocalAlgebra<'_, S>,
) -> Result<Vec<Subspace<f64>>, TerwilligerError> {
    let gens = FloatGenerators::new(local);
    let u = record.basis.basis_matrix();
    let u = DMatrix::from_fn(u.rows(), u.cols(), |i, j| u[(i, j)]);
    split_module(&gens, &u, record.endpoint, record.dual_endpoint, record.diameter)
}
