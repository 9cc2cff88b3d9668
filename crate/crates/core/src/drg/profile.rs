use crate::linalg::{Matrix, Scalar};

use super::{
    check_distance_regular, find_qpoly_orderings, DistanceTable, DrgError, Graph, IntersectionNumbers, KreinTable,
    MIN_DIAMETER,
};

/// Residual allowed on float spectral identities.
const FLOAT_IDENTITY_TOL: f64 = 1e-7;

/// Arithmetic in the Bose–Mesner algebra, with elements written as
/// coefficient vectors over the distance matrices `A_0, ..., A_D`.
#[derive(Clone, Copy, Debug)]
pub struct BoseMesner<'a> {
    p: &'a IntersectionNumbers,
}

impl<'a> BoseMesner<'a> {
    pub fn new(p: &'a IntersectionNumbers) -> Self {
        Self { p }
    }

    fn size(&self) -> usize {
        self.p.diameter() + 1
    }

    /// Product via `A_k A_l = Σ_h p^h_{kl} A_h`.
    pub fn mul<S: Scalar>(&self, a: &[S], b: &[S]) -> Vec<S> {
        let m = self.size();
        let mut out = vec![S::zero(); m];
        for (k, ak) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (l, bl) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let ab = ak.clone() * bl.clone();
                for (h, o) in out.iter_mut().enumerate() {
                    let p = self.p.get(h, k, l);
                    if p != 0 {
                        *o = o.clone() + ab.clone() * S::from_i64(p as i64);
                    }
                }
            }
        }
        out
    }

    /// `A X` for `X` in the algebra.
    pub fn mul_adjacency<S: Scalar>(&self, a: &[S]) -> Vec<S> {
        let mut unit = vec![S::zero(); self.size()];
        unit[1] = S::one();
        self.mul(&unit, a)
    }

    /// Coefficients of the spectral projector `Π_{j≠i} (A - θ_j I)/(θ_i - θ_j)`.
    pub fn lagrange_projector<S: Scalar>(&self, theta: &[S], i: usize) -> Vec<S> {
        let mut c = vec![S::zero(); self.size()];
        c[0] = S::one();
        for (j, tj) in theta.iter().enumerate() {
            if j == i {
                continue;
            }
            let denom = theta[i].clone() - tj.clone();
            let ac = self.mul_adjacency(&c);
            c = ac.into_iter().zip(&c).map(|(x, y)| (x - tj.clone() * y.clone()) / denom.clone()).collect();
        }
        c
    }
}

/// Certified distance-regular structure of a graph: distances, intersection
/// numbers, spectrum, primitive idempotents and Krein parameters in the
/// natural (decreasing eigenvalue) labeling, plus every Q-polynomial ordering.
#[derive(Clone, Debug)]
pub struct DrgProfile<S> {
    graph: Graph,
    dist: DistanceTable,
    p: IntersectionNumbers,
    theta: Vec<S>,
    mult: Vec<usize>,
    /// Row `i` holds `E_i` as coefficients over `A_0..A_D`.
    idempotents: Vec<Vec<S>>,
    krein: KreinTable<S>,
    orderings: Vec<Vec<usize>>,
}

impl<S: Scalar> DrgProfile<S> {
    /// Runs the full certification pipeline.
    pub fn certify(graph: Graph) -> Result<Self, DrgError> {
        let dist = graph.distances()?;
        if dist.diameter() < MIN_DIAMETER {
            return Err(DrgError::DiameterTooSmall { diameter: dist.diameter() });
        }
        let p = check_distance_regular(&dist)?;
        let theta = spectrum::<S>(&p)?;
        let bm = BoseMesner::new(&p);
        let idempotents: Vec<Vec<S>> = (0..theta.len()).map(|i| bm.lagrange_projector(&theta, i)).collect();
        let n = graph.n();
        let mult = multiplicities(n, &idempotents)?;
        let mut profile = Self { graph, dist, p, theta, mult, idempotents, krein: KreinTable::from_fn(0, |_, _, _| S::zero()), orderings: Vec::new() };
        profile.validate_idempotents()?;
        profile.krein = profile.compute_krein();
        if let Some((h, i, j, value)) = profile.krein.negative_entry() {
            return Err(DrgError::NegativeKrein { h, i, j, value });
        }
        profile.orderings = find_qpoly_orderings(&profile.krein);
        Ok(profile)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn diameter(&self) -> usize {
        self.dist.diameter()
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.dist
    }

    pub fn intersection_numbers(&self) -> &IntersectionNumbers {
        &self.p
    }

    pub fn bose_mesner(&self) -> BoseMesner<'_> {
        BoseMesner::new(&self.p)
    }

    /// Eigenvalues in decreasing order; `theta[0]` is the valency.
    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    /// Coefficients of `E_i` over the distance matrices (natural labels).
    pub fn idempotent_coefficients(&self, i: usize) -> &[S] {
        &self.idempotents[i]
    }

    /// `(E_i)_{yz}` in natural labels.
    pub fn idempotent_entry(&self, i: usize, y: usize, z: usize) -> &S {
        &self.idempotents[i][self.dist.get(y, z)]
    }

    pub fn idempotent(&self, i: usize) -> Matrix<S> {
        let n = self.n();
        Matrix::from_fn(n, n, |y, z| self.idempotent_entry(i, y, z).clone())
    }

    pub fn apply_idempotent(&self, i: usize, v: &[S]) -> Vec<S> {
        let c = &self.idempotents[i];
        (0..self.n())
            .map(|y| {
                self.dist
                    .row(y)
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| !x.is_zero())
                    .fold(S::zero(), |acc, (&d, x)| acc + c[d as usize].clone() * x.clone())
            })
            .collect()
    }

    pub fn adjacency(&self) -> Matrix<S> {
        self.graph.adjacency_matrix()
    }

    pub fn distance_matrix(&self, i: usize) -> Matrix<S> {
        self.dist.distance_matrix(i)
    }

    /// Krein parameters in natural labels.
    pub fn krein(&self) -> &KreinTable<S> {
        &self.krein
    }

    /// Krein parameters relabeled by `ordering` (new label `k` is old `ordering[k]`).
    pub fn krein_parameters(&self, ordering: &[usize]) -> KreinTable<S> {
        self.krein.permuted(ordering)
    }

    /// All Q-polynomial orderings, lexicographically sorted.
    pub fn qpoly_orderings(&self) -> &[Vec<usize>] {
        &self.orderings
    }

    /// The ordering at `index`, or an error when the graph is not
    /// Q-polynomial or the index is out of range.
    pub fn ordering(&self, index: usize) -> Result<&[usize], DrgError> {
        if self.orderings.is_empty() {
            return Err(DrgError::NotQPolynomial);
        }
        self.orderings
            .get(index)
            .map(Vec::as_slice)
            .ok_or(DrgError::OrderingOutOfRange { index, available: self.orderings.len() })
    }

    /// `q^h_{ij} = |X| trace(E_h (E_i ∘ E_j)) / m_h`, evaluated in the
    /// distance-matrix basis where `∘` is coordinatewise and
    /// `trace(E_h A_k) = |X| k_k (E_h)_k`.
    fn compute_krein(&self) -> KreinTable<S> {
        let n = S::from_i64(self.n() as i64);
        let m = self.theta.len();
        let k: Vec<S> = (0..m).map(|h| S::from_i64(self.p.valency(h) as i64)).collect();
        KreinTable::from_fn(m - 1, |h, i, j| {
            let s = (0..m).fold(S::zero(), |acc, l| {
                acc + self.idempotents[i][l].clone()
                    * self.idempotents[j][l].clone()
                    * self.idempotents[h][l].clone()
                    * k[l].clone()
            });
            n.clone() * n.clone() * s / S::from_i64(self.mult[h] as i64)
        })
    }

    /// Checks the idempotent identities in the algebra and `A E_i = θ_i E_i`
    /// against the graph itself.
    fn validate_idempotents(&self) -> Result<(), DrgError> {
        let bm = self.bose_mesner();
        let m = self.theta.len();
        let close = |a: &S, b: &S| (a.clone() - b.clone()).is_negligible(1.0, FLOAT_IDENTITY_TOL);
        let fail = |what: String| Err(DrgError::SpectrumValidation(what));
        let unit = |k: usize| (0..m).map(|l| if l == k { S::one() } else { S::zero() }).collect::<Vec<S>>();

        let total = self.idempotents.iter().fold(vec![S::zero(); m], |acc, e| {
            acc.into_iter().zip(e).map(|(a, b)| a + b.clone()).collect()
        });
        if !total.iter().zip(unit(0)).all(|(a, b)| close(a, &b)) {
            return fail("sum of idempotents is not I".into());
        }
        let inv_n = S::from_ratio(1, self.n() as i64);
        if !self.idempotents[0].iter().all(|c| close(c, &inv_n)) {
            return fail("E_0 is not J/|X|".into());
        }
        let a_sum = self.idempotents.iter().zip(&self.theta).fold(vec![S::zero(); m], |acc, (e, t)| {
            acc.into_iter().zip(e).map(|(a, b)| a + t.clone() * b.clone()).collect()
        });
        if !a_sum.iter().zip(unit(1)).all(|(a, b)| close(a, &b)) {
            return fail("A is not Σ θ_i E_i".into());
        }
        for i in 0..m {
            for j in 0..m {
                let prod = bm.mul(&self.idempotents[i], &self.idempotents[j]);
                let expected = if i == j { self.idempotents[i].clone() } else { vec![S::zero(); m] };
                if !prod.iter().zip(&expected).all(|(a, b)| close(a, b)) {
                    return fail(format!("E_{i} E_{j} is not δ_ij E_i"));
                }
            }
        }
        let n = self.n();
        for (i, t) in self.theta.iter().enumerate() {
            for z in 0..n {
                let col: Vec<S> = (0..n).map(|y| self.idempotent_entry(i, y, z).clone()).collect();
                let acol = self.graph.apply_adjacency(&col);
                if let Some(y) = (0..n).find(|&y| !close(&acol[y], &(t.clone() * col[y].clone()))) {
                    return fail(format!("A E_{i} differs from θ_{i} E_{i} at ({y},{z})"));
                }
            }
        }
        Ok(())
    }
}

/// Eigenvalues of the graph as roots of the tridiagonal intersection matrix,
/// decreasing.
pub(crate) fn spectrum<S: Scalar>(p: &IntersectionNumbers) -> Result<Vec<S>, DrgError> {
    let d = p.diameter();
    let a: Vec<i64> = (0..=d).map(|i| p.a(i) as i64).collect();
    let b: Vec<i64> = (0..d).map(|i| p.b(i) as i64).collect();
    let c: Vec<i64> = (1..=d).map(|i| p.c(i) as i64).collect();
    let theta = S::tridiagonal_eigenvalues(&a, &b, &c).ok_or(DrgError::ExactModeUnsupported)?;
    if theta.len() != d + 1 {
        return Err(DrgError::SpectrumValidation(format!("found {} eigenvalues, expected {}", theta.len(), d + 1)));
    }
    let k = p.valency(1) as f64;
    for w in theta.windows(2) {
        if (w[0].clone() - w[1].clone()).is_negligible(k.max(1.0), 1e-8) {
            return Err(DrgError::SpectrumValidation("eigenvalues are not distinct".into()));
        }
    }
    Ok(theta)
}

fn multiplicities<S: Scalar>(n: usize, idempotents: &[Vec<S>]) -> Result<Vec<usize>, DrgError> {
    idempotents
        .iter()
        .enumerate()
        .map(|(i, e)| {
            // trace(E_i) = |X| (E_i)_0
            let tr = (S::from_i64(n as i64) * e[0].clone()).to_f64();
            let rounded = tr.round();
            if (tr - rounded).abs() > 1e-6 || rounded < 1.0 {
                return Err(DrgError::SpectrumValidation(format!("trace of E_{i} is {tr}, not a positive integer")));
            }
            Ok(rounded as usize)
        })
        .collect()
}
