//! Serializable run output and its JSON, CSV and table renderings.

use std::fmt::Write as _;

use drgkit_core::drg::KreinTable;
use drgkit_core::terwilliger::{Analysis, CheckResult, DualWidthReport, ModuleRecord};
use drgkit_core::{DrgProfile, Scalar};
use serde::Serialize;

#[derive(Serialize)]
pub struct GraphSummary {
    pub spec: String,
    pub name: String,
    pub n: usize,
    pub edges: usize,
    pub diameter: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

#[derive(Serialize)]
pub struct Spectrum {
    pub mode: String,
    /// Eigenvalues in natural (decreasing) order, as floats.
    pub theta: Vec<f64>,
    /// The same eigenvalues as exact literals in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_exact: Option<Vec<String>>,
    pub multiplicities: Vec<usize>,
    /// Triples `[h, i, j]` in natural labels with `q^h_ij = 0`.
    pub krein_zeros: Vec<[usize; 3]>,
}

#[derive(Serialize)]
pub struct Orderings {
    pub available: Vec<Vec<usize>>,
    pub selected: usize,
}

#[derive(Serialize)]
pub struct ModuleSummary {
    pub endpoint: usize,
    pub dual_endpoint: usize,
    pub diameter: usize,
    pub dual_diameter: usize,
    pub displacement: isize,
    pub dim: usize,
}

impl From<&ModuleRecord> for ModuleSummary {
    fn from(r: &ModuleRecord) -> Self {
        Self {
            endpoint: r.endpoint,
            dual_endpoint: r.dual_endpoint,
            diameter: r.diameter,
            dual_diameter: r.dual_diameter,
            displacement: r.displacement,
            dim: r.dim(),
        }
    }
}

#[derive(Serialize)]
pub struct VertexResult {
    pub vertex: usize,
    pub ordering: Vec<usize>,
    pub theta_star: Vec<f64>,
    pub v_dims: Vec<Vec<usize>>,
    pub vtilde_dims: Vec<Vec<usize>>,
    pub displacement_dims: Vec<usize>,
    pub modules: Option<Vec<ModuleSummary>>,
    pub all_passed: bool,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub vertex: usize,
    #[serde(flatten)]
    pub check: CheckResult,
}

#[derive(Serialize)]
pub struct RunOutput {
    pub graph: GraphSummary,
    pub spectrum: Spectrum,
    pub orderings: Orderings,
    pub per_vertex: Vec<VertexResult>,
    pub checks: Vec<CheckRow>,
}

impl RunOutput {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|r| r.check.passed())
    }
}

pub fn graph_summary<S: Scalar>(spec: &str, profile: &DrgProfile<S>) -> GraphSummary {
    let p = profile.intersection_numbers();
    let d = profile.diameter();
    GraphSummary {
        spec: spec.to_string(),
        name: profile.graph().name().to_string(),
        n: profile.n(),
        edges: profile.graph().edge_count(),
        diameter: d,
        b: (0..d).map(|i| p.b(i)).collect(),
        c: (1..=d).map(|i| p.c(i)).collect(),
    }
}

fn krein_zeros<S: Scalar>(table: &KreinTable<S>) -> Vec<[usize; 3]> {
    let pattern = table.nonzero_pattern();
    let mut out = Vec::new();
    for (h, plane) in pattern.iter().enumerate() {
        for (i, row) in plane.iter().enumerate() {
            for (j, &nonzero) in row.iter().enumerate() {
                if !nonzero {
                    out.push([h, i, j]);
                }
            }
        }
    }
    out
}

pub fn spectrum<S: Scalar>(profile: &DrgProfile<S>) -> Spectrum {
    let exact = S::MODE == drgkit_core::Mode::Exact;
    Spectrum {
        mode: S::MODE.to_string(),
        theta: profile.theta().iter().map(Scalar::to_f64).collect(),
        theta_exact: exact.then(|| profile.theta().iter().map(ToString::to_string).collect()),
        multiplicities: profile.multiplicities().to_vec(),
        krein_zeros: krein_zeros(profile.krein()),
    }
}

pub fn vertex_result<S: Scalar>(vertex: usize, theta_star: &[S], a: &Analysis<S>) -> VertexResult {
    VertexResult {
        vertex,
        ordering: a.report.ordering.clone(),
        theta_star: theta_star.iter().map(Scalar::to_f64).collect(),
        v_dims: a.split.v_dims(),
        vtilde_dims: a.split.vtilde_dims(),
        displacement_dims: a.displacement.dims(),
        modules: a.modules.as_ref().map(|ms| ms.iter().map(ModuleSummary::from).collect()),
        all_passed: a.report.all_passed(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

/// One row per base vertex: `vt_i_j` columns for `dim Ṽ_ij` and `eta_k`
/// columns for `dim V_k`.
pub fn census_csv(out: &RunOutput) -> String {
    let d = out.graph.diameter;
    csv_string(|w| {
        let mut header = vec!["vertex".to_string()];
        header.extend((0..=d).flat_map(|i| (0..=d).map(move |j| format!("vt_{i}_{j}"))));
        header.extend((0..=d).map(|k| format!("eta_{k}")));
        w.write_record(&header)?;
        for v in &out.per_vertex {
            let mut row = vec![v.vertex.to_string()];
            row.extend(v.vtilde_dims.iter().flatten().map(ToString::to_string));
            row.extend(v.displacement_dims.iter().map(ToString::to_string));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

pub fn checks_csv(out: &RunOutput) -> String {
    csv_string(|w| {
        w.write_record(["vertex", "id", "name", "status", "worst_residual", "witness"])?;
        for r in &out.checks {
            let c = &r.check;
            w.write_record([
                r.vertex.to_string(),
                c.id.to_string(),
                c.name.to_string(),
                format!("{:?}", c.status).to_lowercase(),
                format!("{:e}", c.worst_residual),
                c.witness.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

fn grid(out: &mut String, label: &str, rows: &[Vec<usize>]) {
    let _ = writeln!(out, "  {label} (row i, column j):");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(out, "   {}", cells.join(""));
    }
}

fn header(out: &mut String, run: &RunOutput) {
    let g = &run.graph;
    let s = &run.spectrum;
    let _ = writeln!(out, "{} ({}): n = {}, D = {}, b = {:?}, c = {:?}", g.name, g.spec, g.n, g.diameter, g.b, g.c);
    let theta: Vec<String> = match &s.theta_exact {
        Some(t) => t.clone(),
        None => s.theta.iter().map(|x| format!("{x:.6}")).collect(),
    };
    let _ = writeln!(out, "mode {}, θ = [{}], multiplicities {:?}", s.mode, theta.join(", "), s.multiplicities);
    let _ = writeln!(out, "Krein zeros: {}", s.krein_zeros.len());
    for (k, o) in run.orderings.available.iter().enumerate() {
        let mark = if k == run.orderings.selected { " (selected)" } else { "" };
        let _ = writeln!(out, "ordering {k}: {o:?}{mark}");
    }
}

fn check_lines(out: &mut String, run: &RunOutput, vertex: usize) {
    for r in run.checks.iter().filter(|r| r.vertex == vertex) {
        let c = &r.check;
        let status = format!("{:?}", c.status).to_uppercase();
        let _ = write!(out, "  {:<7} {} {:<44} worst residual {:.2e}", status, c.id, c.name, c.worst_residual);
        if let Some(w) = &c.witness {
            let _ = write!(out, "  [{w}]");
        }
        out.push('\n');
    }
}

pub fn analyze_table(run: &RunOutput) -> String {
    let mut out = String::new();
    header(&mut out, run);
    for v in &run.per_vertex {
        let ts: Vec<String> = v.theta_star.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(out, "\nbase vertex {}: θ* = [{}]", v.vertex, ts.join(", "));
        grid(&mut out, "dim V_ij", &v.v_dims);
        grid(&mut out, "dim Ṽ_ij", &v.vtilde_dims);
        let _ = writeln!(out, "  dim V_η: {:?}", v.displacement_dims);
        if let Some(ms) = &v.modules {
            let _ = writeln!(out, "  modules (ρ, τ, d, η, dim):");
            for m in ms {
                let _ = writeln!(
                    out,
                    "    ({}, {}, {}, {}, {})",
                    m.endpoint, m.dual_endpoint, m.diameter, m.displacement, m.dim
                );
            }
        }
        check_lines(&mut out, run, v.vertex);
    }
    out
}

pub fn verify_table(run: &RunOutput) -> String {
    let mut out = String::new();
    header(&mut out, run);
    for v in &run.per_vertex {
        let _ = writeln!(out, "\nbase vertex {}:", v.vertex);
        check_lines(&mut out, run, v.vertex);
    }
    let failed = run.per_vertex.iter().filter(|v| !v.all_passed).count();
    let _ = writeln!(out, "\n{} of {} base vertices pass every check", run.per_vertex.len() - failed, run.per_vertex.len());
    out
}

pub fn census_table(run: &RunOutput) -> String {
    let mut out = String::new();
    header(&mut out, run);
    out.push('\n');
    let _ = writeln!(out, "{:>6}  {:<40} dim V_η", "vertex", "dim Ṽ_ij (row-major)");
    for v in &run.per_vertex {
        let flat: Vec<String> = v.vtilde_dims.iter().flatten().map(ToString::to_string).collect();
        let _ = writeln!(out, "{:>6}  {:<40} {:?}", v.vertex, flat.join(" "), v.displacement_dims);
    }
    out
}

#[derive(Serialize)]
pub struct DualWidthRow {
    pub source: String,
    #[serde(flatten)]
    pub report: DualWidthReport,
}

#[derive(Serialize)]
pub struct DualWidthOutput {
    pub graph: GraphSummary,
    pub ordering: Vec<usize>,
    pub vectors: Vec<DualWidthRow>,
    pub passed: usize,
    pub total: usize,
}

pub fn dual_width_csv(out: &DualWidthOutput) -> String {
    csv_string(|w| {
        w.write_record(["source", "dual_width", "bound", "support_size", "min_margin", "tightest_vertex", "pass"])?;
        for row in &out.vectors {
            let r = &row.report;
            w.write_record([
                row.source.clone(),
                r.dual_width.to_string(),
                r.bound.to_string(),
                r.support.len().to_string(),
                r.min_margin.to_string(),
                r.tightest_vertex.to_string(),
                r.pass.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn dual_width_table(out: &DualWidthOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} ({}), ordering {:?}", out.graph.name, out.graph.spec, out.ordering);
    for row in &out.vectors {
        let r = &row.report;
        let _ = writeln!(
            s,
            "{} {}: g = {}, bound D - g = {}, margin {} at vertex {}",
            if r.pass { "PASS" } else { "FAIL" },
            row.source,
            r.dual_width,
            r.bound,
            r.min_margin,
            r.tightest_vertex
        );
    }
    let _ = writeln!(s, "{}/{} PASS", out.passed, out.total);
    s
}
