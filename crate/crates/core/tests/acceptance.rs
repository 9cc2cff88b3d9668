//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines stay readable.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use drgkit_core::drg::DrgError;
use drgkit_core::families::{cycle, hamming, johnson, FamilyError, DEFAULT_SIZE_CAP};
use drgkit_core::terwilliger::{
    analyze, check_dual_width_bound, random_sparse_vectors, representative_base_vertices, split_decomposition,
    verify_all, displacement_from_split, Analysis, CheckStatus, LocalAlgebra, OracleConfig, VerificationReport,
    VerifyTolerances,
};
use drgkit_core::{DrgProfile, Graph, Rational, Scalar, Subspace};

const CONTAINMENT: f64 = 1e-7;
const ORACLE: f64 = 1e-6;
const SEED: u64 = 1;

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

struct Entry {
    graph: Graph,
    rational: bool,
}

fn corpus() -> Vec<Entry> {
    let cap = DEFAULT_SIZE_CAP;
    vec![
        Entry { graph: hamming(3, 2, cap).unwrap(), rational: true },
        Entry { graph: hamming(3, 3, cap).unwrap(), rational: true },
        Entry { graph: hamming(4, 2, cap).unwrap(), rational: true },
        Entry { graph: johnson(6, 3, cap).unwrap(), rational: true },
        Entry { graph: johnson(7, 3, cap).unwrap(), rational: true },
        Entry { graph: cycle(6, cap).unwrap(), rational: true },
        Entry { graph: cycle(7, cap).unwrap(), rational: false },
    ]
}

fn run<S: Scalar>(profile: &DrgProfile<S>, x: usize, oracle: bool) -> Result<Analysis<S>, String> {
    let ordering = profile.ordering(0).map_err(|e| e.to_string())?.to_vec();
    let local = LocalAlgebra::new(profile, &ordering, x).map_err(|e| e.to_string())?;
    let config = OracleConfig::default();
    analyze(&local, oracle.then_some((SEED, &config)), &VerifyTolerances::default()).map_err(|e| format!("x={x}: {e}"))
}

fn certify<S: Scalar>(g: &Graph) -> Result<DrgProfile<S>, String> {
    DrgProfile::certify(g.clone()).map_err(|e| format!("{}: {e}", g.name()))
}

/// Dimension of `V_ij` by a direct rank count: vectors in the range of
/// `E_0 + ... + E_j` that vanish outside the ball of radius `i`.
fn brute_force_v_dims(profile: &DrgProfile<f64>, ordering: &[usize], x: usize) -> Vec<Vec<usize>> {
    let n = profile.n();
    let d = profile.diameter();
    let mut p = nalgebra::DMatrix::<f64>::zeros(n, n);
    let rank = |m: &nalgebra::DMatrix<f64>| {
        if m.nrows() == 0 {
            0
        } else {
            nalgebra::SymmetricEigen::new(m.transpose() * m).eigenvalues.iter().filter(|&&s| s > 1e-9).count()
        }
    };
    let mut out = vec![vec![0; d + 1]; d + 1];
    for j in 0..=d {
        let e = profile.idempotent(ordering[j]);
        p += nalgebra::DMatrix::from_fn(n, n, |a, b| e[(a, b)]);
        let full = rank(&p);
        for (i, row) in out.iter_mut().enumerate() {
            let outside: Vec<usize> = (0..n).filter(|&y| profile.distances().get(x, y) > i).collect();
            let sub = nalgebra::DMatrix::from_fn(outside.len(), n, |a, b| p[(outside[a], b)]);
            row[j] = full - rank(&sub);
        }
    }
    out
}

fn tilde_from(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let d = v.len() as isize - 1;
    let g = |i: isize, j: isize| if i < 0 || j < 0 { 0 } else { v[i as usize][j as usize] as isize };
    (0..=d).map(|i| (0..=d).map(|j| (g(i, j) - g(i, j - 1) - g(i - 1, j) + g(i - 1, j - 1)) as usize).collect()).collect()
}

fn hypercube_golden() -> Outcome {
    let g = hamming(3, 2, DEFAULT_SIZE_CAP).unwrap();
    let golden = vec![vec![0, 0, 0, 1], vec![0, 0, 3, 0], vec![0, 3, 0, 0], vec![1, 0, 0, 0]];
    let float = certify::<f64>(&g)?;
    let exact = certify::<Rational>(&g)?;
    for x in 0..8 {
        let brute = tilde_from(&brute_force_v_dims(&float, &[0, 1, 2, 3], x));
        ensure(brute == golden, || format!("brute force at x={x}: {brute:?}"))?;
        let f = run(&float, x, true)?;
        let e = run(&exact, x, true)?;
        for (mode, tilde, disp) in [
            ("float", f.split.vtilde_dims(), f.displacement.dims()),
            ("exact", e.split.vtilde_dims(), e.displacement.dims()),
        ] {
            ensure(tilde == golden, || format!("{mode} x={x}: Ṽ dims {tilde:?}"))?;
            ensure(disp == [8, 0, 0, 0], || format!("{mode} x={x}: V_η dims {disp:?}"))?;
        }
        for a in [&f.modules, &e.modules] {
            let modules = a.as_ref().expect("oracle ran");
            ensure(modules.iter().all(|r| r.displacement == 0), || format!("x={x}: module with η != 0"))?;
        }
    }
    Ok("8 vertices × 2 modes match the golden table".into())
}

fn conservation() -> Outcome {
    let mut runs = 0;
    for entry in corpus() {
        let float = certify::<f64>(&entry.graph)?;
        for x in 0..float.n() {
            let a = run(&float, x, false)?;
            let tilde: usize = a.split.vtilde_dims().iter().flatten().sum();
            let disp: usize = a.displacement.dims().iter().sum();
            ensure(tilde == float.n() && disp == float.n(), || {
                format!("{} x={x}: Σ dim Ṽ = {tilde}, Σ dim V_η = {disp}, n = {}", entry.graph.name(), float.n())
            })?;
            runs += 1;
        }
        if entry.rational {
            let exact = certify::<Rational>(&entry.graph)?;
            for x in representative_base_vertices(exact.distances()) {
                let a = run(&exact, x, false)?;
                let tilde: usize = a.split.vtilde_dims().iter().flatten().sum();
                ensure(tilde == exact.n() && a.displacement.dims().iter().sum::<usize>() == exact.n(), || {
                    format!("{} exact x={x}", entry.graph.name())
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} base-vertex runs"))
}

fn vanishing() -> Outcome {
    let mut runs = 0;
    for entry in corpus() {
        let float = certify::<f64>(&entry.graph)?;
        let d = float.diameter() as isize;
        for x in 0..float.n() {
            let a = run(&float, x, false)?;
            for i in 0..=d {
                for j in 0..d - i {
                    ensure(a.split.v(i, j).dim() == 0, || format!("{} x={x}: dim V({i},{j}) > 0", entry.graph.name()))?;
                }
            }
            let on_diagonal = (0..=d).any(|i| a.split.v(i, d - i).dim() > 0);
            ensure(on_diagonal, || format!("{} x={x}: every V_ij with i + j = D is zero", entry.graph.name()))?;
            ensure(a.report.check("V3").is_some_and(|c| c.status == CheckStatus::Pass), || "V3 failed".into())?;
            runs += 1;
        }
    }
    Ok(format!("{runs} base-vertex runs, antidiagonal guard holds"))
}

fn shift_actions() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for entry in corpus() {
        let float = certify::<f64>(&entry.graph)?;
        for x in 0..float.n() {
            let a = run(&float, x, false)?;
            let v4 = a.report.check("V4").expect("V4 present");
            worst = worst.max(v4.worst_residual);
            ensure(v4.status == CheckStatus::Pass && v4.worst_residual <= CONTAINMENT, || {
                format!("{} x={x}: {v4:?}", entry.graph.name())
            })?;
            runs += 1;
        }
        if entry.rational {
            let exact = certify::<Rational>(&entry.graph)?;
            for x in representative_base_vertices(exact.distances()) {
                let a = run(&exact, x, false)?;
                let v4 = a.report.check("V4").expect("V4 present");
                ensure(v4.status == CheckStatus::Pass && v4.worst_residual == 0.0, || {
                    format!("{} exact x={x}: {v4:?}", entry.graph.name())
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs, worst float residual {worst:.2e}, exact residuals 0"))
}

fn oracle_equivalence() -> Outcome {
    let cap = DEFAULT_SIZE_CAP;
    let targets: Vec<(Graph, Vec<usize>)> = vec![
        (johnson(6, 3, cap).unwrap(), (0..20).collect()),
        (cycle(6, cap).unwrap(), (0..6).collect()),
        (hamming(3, 3, cap).unwrap(), vec![0]),
    ];
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (g, vertices) in targets {
        let profile = certify::<f64>(&g)?;
        for x in vertices {
            let a = run(&profile, x, true)?;
            let v6 = a.report.check("V6").expect("V6 present");
            worst = worst.max(v6.worst_residual);
            ensure(v6.status == CheckStatus::Pass && v6.worst_residual <= ORACLE, || format!("{} x={x}: {v6:?}", g.name()))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, worst residual {worst:.2e}"))
}

fn module_laws() -> Outcome {
    let mut modules = 0;
    let mut worst = 0.0f64;
    for entry in corpus() {
        let profile = certify::<f64>(&entry.graph)?;
        let mut vertices = representative_base_vertices(profile.distances());
        vertices.push(profile.n() - 1);
        vertices.dedup();
        for x in vertices {
            let a = run(&profile, x, true)?;
            for id in ["V5", "V7"] {
                let c = a.report.check(id).expect("check present");
                worst = worst.max(c.worst_residual);
                ensure(c.status == CheckStatus::Pass && c.worst_residual <= ORACLE, || {
                    format!("{} x={x}: {c:?}", entry.graph.name())
                })?;
            }
            let records = a.modules.as_ref().expect("oracle ran");
            for r in records {
                let total: usize = r.split.iter().map(Subspace::dim).sum();
                ensure(total == r.dim(), || format!("{} x={x}: W_h not direct", entry.graph.name()))?;
            }
            modules += records.len();
        }
    }
    Ok(format!("{modules} modules, worst placement residual {worst:.2e}"))
}

fn dual_width_bound() -> Outcome {
    let mut checked = 0;
    for g in [johnson(6, 3, DEFAULT_SIZE_CAP).unwrap(), hamming(4, 2, DEFAULT_SIZE_CAP).unwrap()] {
        let profile = certify::<Rational>(&g)?;
        let ordering = profile.ordering(0).map_err(|e| e.to_string())?.to_vec();
        let n = profile.n();
        let unit = |y: usize| (0..n).map(|k| Rational::from_i64((k == y) as i64)).collect::<Vec<_>>();
        let mut vectors = random_sparse_vectors::<Rational>(n, 200, 4, SEED);
        vectors.extend((0..n).map(unit));
        vectors.push(vec![Rational::from_i64(1); n]);
        for y in 0..n {
            for z in y + 1..n {
                vectors.push(unit(y).into_iter().zip(unit(z)).map(|(a, b)| a - b).collect());
            }
        }
        for v in &vectors {
            let r = check_dual_width_bound(&profile, &ordering, v, 0.0).map_err(|e| e.to_string())?;
            ensure(r.pass, || format!("{}: {r:?}", g.name()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} vectors, zero failures"))
}

fn mode_agreement() -> Outcome {
    let mut runs = 0;
    for entry in corpus().into_iter().filter(|e| e.rational) {
        let float = certify::<f64>(&entry.graph)?;
        let exact = certify::<Rational>(&entry.graph)?;
        let mut vertices = representative_base_vertices(exact.distances());
        vertices.push(exact.n() / 2);
        vertices.push(exact.n() - 1);
        for x in vertices {
            let f = run(&float, x, false)?;
            let e = run(&exact, x, false)?;
            ensure(f.split.v_dims() == e.split.v_dims(), || format!("{} x={x}: V dims differ", entry.graph.name()))?;
            ensure(f.split.vtilde_dims() == e.split.vtilde_dims(), || format!("{} x={x}: Ṽ dims differ", entry.graph.name()))?;
            ensure(f.displacement.dims() == e.displacement.dims(), || format!("{} x={x}: V_η dims differ", entry.graph.name()))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} paired runs"))
}

fn negative_controls() -> Outcome {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    edges.retain(|&e| e != (0, 1));
    let petersen = Graph::from_edges("petersen-minus-edge", 10, &edges).unwrap();
    let witness = match DrgProfile::<f64>::certify(petersen) {
        Err(DrgError::NotDistanceRegular(w)) => w,
        other => return Err(format!("Petersen minus an edge: {:?}", other.map(|_| ()))),
    };
    ensure(witness.first_count != witness.second_count, || "witness counts agree".into())?;

    ensure(matches!(cycle(5, DEFAULT_SIZE_CAP), Err(FamilyError::DiameterTooSmall { diameter: 2 })), || {
        "cycle(5) accepted by the generator".into()
    })?;
    let pentagon = Graph::from_edges("c5", 5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
    ensure(
        DrgProfile::<f64>::certify(pentagon).err() == Some(DrgError::DiameterTooSmall { diameter: 2 }),
        || "cycle(5) accepted by certification".into(),
    )?;

    let profile = certify::<f64>(&hamming(3, 2, DEFAULT_SIZE_CAP).unwrap())?;
    let ordering = profile.ordering(0).map_err(|e| e.to_string())?.to_vec();
    let local = LocalAlgebra::new(&profile, &ordering, 0).map_err(|e| e.to_string())?;
    let mut split = split_decomposition(&local).map_err(|e| e.to_string())?;
    let disp = displacement_from_split(&split).map_err(|e| e.to_string())?;
    let random = Subspace::span(&random_sparse_vectors::<f64>(8, 3, 8, 5), 8).map_err(|e| e.to_string())?;
    split.replace_vtilde(1, 2, random);
    let report = verify_all(&local, &split, &disp, None, None, &VerifyTolerances::default());
    let v4 = report.check("V4").expect("V4 present");
    ensure(v4.status == CheckStatus::Fail, || "corrupted grid passed V4".into())?;
    let named = v4.witness.as_deref().unwrap_or("");
    ensure(named.contains("Ṽ("), || format!("witness does not name a cell: {named:?}"))?;
    Ok(format!("witness p^{}_{{{},{}}}; V4 witness {named}", witness.h, witness.i, witness.j))
}

fn full_corpus_verify() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    let failed = |name: &str, r: &VerificationReport| {
        r.checks.iter().find(|c| c.status != CheckStatus::Pass).map(|c| format!("{name} x={}: {c:?}", r.base_vertex))
    };
    for entry in corpus() {
        let name = entry.graph.name().to_string();
        let float = certify::<f64>(&entry.graph)?;
        for x in 0..float.n() {
            if let Some(why) = failed(&name, &run(&float, x, true)?.report) {
                return Err(why);
            }
            runs += 1;
        }
        if entry.rational {
            let exact = certify::<Rational>(&entry.graph)?;
            for x in representative_base_vertices(exact.distances()) {
                if let Some(why) = failed(&name, &run(&exact, x, true)?.report) {
                    return Err(why);
                }
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{runs} verify runs, all V1–V8 pass, {:.1}s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("hypercube golden table", hypercube_golden),
        ("conservation of dimension", conservation),
        ("vanishing below the antidiagonal", vanishing),
        ("shift actions", shift_actions),
        ("oracle equivalence", oracle_equivalence),
        ("per-module laws", module_laws),
        ("dual-width bound", dual_width_bound),
        ("mode agreement", mode_agreement),
        ("negative controls", negative_controls),
        ("full corpus verify", full_corpus_verify),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let outcome = if k == 0 && secs >= 5.0 { Err(format!("took {secs:.1}s (limit 5s)")) } else { outcome };
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2}. {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
