use serde::Serialize;

use crate::linalg::{Containment, LinalgError, Mode, Scalar, Subspace};

use super::{DisplacementDecomposition, LocalAlgebra, ModuleRecord, SplitDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one named check, with the worst residual seen and the first
/// failing witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub status: CheckStatus,
    pub worst_residual: f64,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub base_vertex: usize,
    pub ordering: Vec<usize>,
    pub seed: Option<u64>,
    pub mode: Mode,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Thresholds for the checks comparing against the oracle. Checks within
/// one arithmetic mode use the subspaces' own containment rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyTolerances {
    pub oracle: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { oracle: 1e-6 }
    }
}

/// Accumulates a single check.
struct Tally {
    id: &'static str,
    name: &'static str,
    worst: f64,
    witness: Option<String>,
    error: Option<String>,
}

impl Tally {
    fn new(id: &'static str, name: &'static str) -> Self {
        Self { id, name, worst: 0.0, witness: None, error: None }
    }

    fn record(&mut self, c: Containment, witness: impl FnOnce() -> String) {
        self.worst = self.worst.max(c.residual);
        if !c.contained && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn guard(&mut self, r: Result<Containment, LinalgError>, witness: impl FnOnce() -> String) {
        match r {
            Ok(c) => self.record(c, witness),
            Err(e) => {
                if self.error.is_none() {
                    self.error = Some(format!("{}: {e}", witness()));
                }
            }
        }
    }

    fn finish(self) -> CheckResult {
        let witness = self.error.or(self.witness);
        let status = if witness.is_some() { CheckStatus::Fail } else { CheckStatus::Pass };
        CheckResult { id: self.id, name: self.name, status, worst_residual: self.worst, witness }
    }

    fn skipped(id: &'static str, name: &'static str) -> CheckResult {
        CheckResult { id, name, status: CheckStatus::Skipped, worst_residual: 0.0, witness: None }
    }
}

fn threshold(c: Containment, tol: f64) -> Containment {
    Containment { contained: c.residual <= tol, residual: c.residual }
}

fn vectors_in<S: Scalar>(space: &Subspace<S>, vectors: &[Vec<S>]) -> Result<Containment, LinalgError> {
    let mut acc = Containment { contained: true, residual: 0.0 };
    for v in vectors {
        let c = space.contains(v)?;
        acc = Containment { contained: acc.contained && c.contained, residual: acc.residual.max(c.residual) };
    }
    Ok(acc)
}

fn shifted<S: Scalar>(apply: impl Fn(&[S]) -> Vec<S>, shift: &S, v: &[S]) -> Vec<S> {
    apply(v).into_iter().zip(v).map(|(a, b)| a - shift.clone() * b.clone()).collect()
}

fn span_sum<'s, S: Scalar>(n: usize, parts: impl IntoIterator<Item = &'s Subspace<S>>) -> Result<Subspace<S>, LinalgError> {
    parts.into_iter().try_fold(Subspace::zero(n), |acc, s| acc.sum(s))
}

/// Runs checks V1 through V8 for one base vertex and ordering.
///
/// Module-based checks (V5-V7) are reported as skipped when `records` is
/// `None`. Failures never abort the run; they become report entries.
pub fn verify_all<S: Scalar>(
    local: &LocalAlgebra<'_, S>,
    split: &SplitDecomposition<S>,
    disp: &DisplacementDecomposition<S>,
    records: Option<&[ModuleRecord]>,
    seed: Option<u64>,
    tol: &VerifyTolerances,
) -> VerificationReport {
    let d = local.diameter() as isize;
    let n = local.n();
    let theta = local.theta();
    let theta_star = local.theta_star();
    let a = |v: &[S]| local.profile().graph().apply_adjacency(v);
    let a_star = |v: &[S]| local.apply_dual_adjacency(v);
    let mut checks = Vec::with_capacity(8);

    // V1: A E*_iV ⊆ E*_{i-1}V + E*_iV + E*_{i+1}V, and dually
    let mut t = Tally::new("V1", "tridiagonal actions");
    for i in 0..=d {
        let band = span_sum(n, &[local.subconstituent(i - 1), local.subconstituent(i), local.subconstituent(i + 1)]);
        let images: Vec<Vec<S>> = local.subconstituent(i).basis().iter().map(|u| a(u)).collect();
        t.guard(band.and_then(|b| vectors_in(&b, &images)), || format!("A E*_{i}V"));
        let band = span_sum(n, &[local.eigenspace(i - 1), local.eigenspace(i), local.eigenspace(i + 1)]);
        let images: Vec<Vec<S>> = local.eigenspace(i).basis().iter().map(|u| a_star(u)).collect();
        t.guard(band.and_then(|b| vectors_in(&b, &images)), || format!("A* E_{i}V"));
    }
    checks.push(t.finish());

    // V2: (A - θ_i I)(E_0V + ... + E_iV) = E_0V + ... + E_{i-1}V, and dually
    let mut t = Tally::new("V2", "cumulative actions");
    for i in 0..=d {
        let iu = i as usize;
        let image = |apply: &dyn Fn(&[S]) -> Vec<S>, shift: &S, space: &Subspace<S>| {
            let vs: Vec<Vec<S>> = space.basis().iter().map(|u| shifted(apply, shift, u)).collect();
            Subspace::span(&vs, n)
        };
        let r = image(&a, &theta[iu], &local.cumulative(i)).and_then(|img| img.equals(&local.cumulative(i - 1)));
        t.guard(r, || format!("(A - θ_{i}I)(E_0V+…+E_{i}V)"));
        let r = image(&a_star, &theta_star[iu], &local.dual_cumulative(i))
            .and_then(|img| img.equals(&local.dual_cumulative(i - 1)));
        t.guard(r, || format!("(A* - θ*_{i}I)(E*_0V+…+E*_{i}V)"));
    }
    checks.push(t.finish());

    // V3: V_ij = 0 for i + j < D, and some V_ij with i + j = D is nonzero
    let mut t = Tally::new("V3", "vanishing below the antidiagonal");
    for i in 0..=d {
        for j in 0..=d - i - 1 {
            let dim = split.v(i, j).dim();
            t.require(dim == 0, || format!("dim V({i},{j}) = {dim}"));
        }
    }
    let any_on_diagonal = (0..=d).any(|i| split.v(i, d - i).dim() > 0);
    t.require(any_on_diagonal, || "every V_ij with i + j = D is zero".into());
    checks.push(t.finish());

    // V4: (A - θ_jI)Ṽ_ij ⊆ Ṽ_{i+1,j-1} and (A* - θ*_iI)Ṽ_ij ⊆ Ṽ_{i-1,j+1}
    let mut t = Tally::new("V4", "shift actions on the split decomposition");
    for i in 0..=d {
        for j in 0..=d {
            let basis = split.vtilde(i, j).basis();
            let raised: Vec<Vec<S>> = basis.iter().map(|u| shifted(&a, &theta[j as usize], u)).collect();
            t.guard(vectors_in(split.vtilde(i + 1, j - 1), &raised), || format!("(A - θ_{j}I)Ṽ({i},{j}) ⊄ Ṽ({},{})", i + 1, j - 1));
            let lowered: Vec<Vec<S>> = basis.iter().map(|u| shifted(&a_star, &theta_star[i as usize], u)).collect();
            t.guard(vectors_in(split.vtilde(i - 1, j + 1), &lowered), || {
                format!("(A* - θ*_{i}I)Ṽ({i},{j}) ⊄ Ṽ({},{})", i - 1, j + 1)
            });
        }
    }
    checks.push(t.finish());

    match records {
        None => {
            checks.push(Tally::skipped("V5", "module parameter laws"));
            checks.push(Tally::skipped("V6", "oracle equivalence of displacement parts"));
            checks.push(Tally::skipped("V7", "module split placement"));
        }
        Some(records) => {
            checks.push(check_module_laws(records, d as usize));
            let split_f = split.to_f64();
            checks.push(check_oracle_equivalence(records, &disp.to_f64(), n, tol.oracle));
            checks.push(check_module_placement(records, &split_f, tol.oracle));
        }
    }

    // V8: Ṽ_ij = V_ij ∩ V_η with η = i + j - D
    let mut t = Tally::new("V8", "intersection refinement");
    for i in 0..=d {
        for j in (d - i).max(0)..=d {
            let eta = i + j - d;
            let r = split.v(i, j).intersect(&disp.part(eta)).and_then(|meet| meet.equals(split.vtilde(i, j)));
            t.guard(r, || format!("Ṽ({i},{j}) != V({i},{j}) ∩ V_{eta}"));
        }
    }
    checks.push(t.finish());

    VerificationReport { base_vertex: local.base_vertex(), ordering: local.ordering().to_vec(), seed, mode: S::MODE, checks }
}

fn check_module_laws(records: &[ModuleRecord], d: usize) -> CheckResult {
    let mut t = Tally::new("V5", "module parameter laws");
    for (k, r) in records.iter().enumerate() {
        let (rho, tau, dm) = (r.endpoint, r.dual_endpoint, r.diameter);
        let interval = |flags: &[bool], start: usize| flags.iter().enumerate().all(|(i, &f)| f == (start..=start + dm).contains(&i));
        let laws = [
            (2 * rho + dm >= d, "2ρ + d >= D"),
            (2 * tau + dm >= d, "2τ + d >= D"),
            ((0..=d as isize).contains(&r.displacement), "0 <= η <= D"),
            (dm == r.dual_diameter, "d = d*"),
            (rho + dm <= d && tau + dm <= d, "ρ + d <= D and τ + d <= D"),
            (interval(&r.dual_support, rho), "E*_iW != 0 iff ρ <= i <= ρ + d"),
            (interval(&r.support, tau), "E_iW != 0 iff τ <= i <= τ + d"),
        ];
        for (ok, law) in laws {
            t.require(ok, || format!("module {k} (ρ={rho}, τ={tau}, d={dm}, d*={}): {law}", r.dual_diameter));
        }
    }
    t.finish()
}

fn check_oracle_equivalence(
    records: &[ModuleRecord],
    disp: &DisplacementDecomposition<f64>,
    n: usize,
    tol: f64,
) -> CheckResult {
    let mut t = Tally::new("V6", "oracle equivalence of displacement parts");
    for (eta, part) in disp.parts().iter().enumerate() {
        let vectors: Vec<Vec<f64>> = records
            .iter()
            .filter(|r| r.displacement == eta as isize)
            .flat_map(|r| r.basis.basis().iter().cloned())
            .collect();
        match Subspace::span(&vectors, n).and_then(|oracle| Ok((oracle.dim(), part.equals(&oracle)?))) {
            Ok((dim, c)) => {
                t.record(threshold(c, tol), || format!("V_{eta}: split and oracle differ (residual {:e})", c.residual));
                t.require(dim == part.dim(), || format!("dim V_{eta}: split {} vs oracle {dim}", part.dim()));
            }
            Err(e) => t.require(false, || format!("V_{eta}: {e}")),
        }
    }
    let stray = records.iter().filter(|r| !(0..disp.parts().len() as isize).contains(&r.displacement)).count();
    t.require(stray == 0, || format!("{stray} module(s) with displacement outside 0..=D"));
    t.finish()
}

fn check_module_placement(records: &[ModuleRecord], split: &SplitDecomposition<f64>, tol: f64) -> CheckResult {
    let mut t = Tally::new("V7", "module split placement");
    for (k, r) in records.iter().enumerate() {
        let total: usize = r.split.iter().map(Subspace::dim).sum();
        t.require(total == r.dim(), || format!("module {k}: Σ dim W_h = {total} != dim W = {}", r.dim()));
        let n = r.basis.ambient_dim();
        match span_sum(n, &r.split) {
            Ok(s) => t.require(s.dim() == r.dim(), || format!("module {k}: W_h do not span W")),
            Err(e) => t.require(false, || format!("module {k}: {e}")),
        }
        for (h, wh) in r.split.iter().enumerate() {
            let (i, j) = ((r.endpoint + h) as isize, (r.dual_endpoint + r.diameter) as isize - h as isize);
            let c = wh.contained_in(split.vtilde(i, j));
            match c {
                Ok(c) => t.record(threshold(c, tol), || format!("module {k}: W_{h} ⊄ Ṽ({i},{j})")),
                Err(e) => t.require(false, || format!("module {k}: {e}")),
            }
        }
    }
    t.finish()
}
