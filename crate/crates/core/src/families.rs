//! Standard test families and edge-list ingestion.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::drg::{Graph, GraphError, MIN_DIAMETER};

/// Default maximum vertex count for generated or loaded graphs.
pub const DEFAULT_SIZE_CAP: usize = 512;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{n} vertices exceeds the size cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("diameter {diameter} < 3")]
    DiameterTooSmall { diameter: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// A graph request: one of the built-in families or an edge-list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Hamming { diameter: usize, q: usize },
    Johnson { n: usize, k: usize },
    Cycle { n: usize },
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self, cap: usize) -> Result<Graph, FamilyError> {
        match self {
            GraphSpec::Hamming { diameter, q } => hamming(*diameter, *q, cap),
            GraphSpec::Johnson { n, k } => johnson(*n, *k, cap),
            GraphSpec::Cycle { n } => cycle(*n, cap),
            GraphSpec::File(path) => {
                let g = parse_graph(path)?;
                if g.n() > cap {
                    return Err(FamilyError::SizeCap { n: g.n(), cap });
                }
                Ok(g)
            }
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Hamming { diameter, q } => write!(f, "hamming:{diameter},{q}"),
            GraphSpec::Johnson { n, k } => write!(f, "johnson:{n},{k}"),
            GraphSpec::Cycle { n } => write!(f, "cycle:{n}"),
            GraphSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = FamilyError;

    /// `hamming:D,q`, `johnson:n,k`, `cycle:n`, or anything else as a path.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some((family, params)) = s.split_once(':') else {
            return Ok(GraphSpec::File(PathBuf::from(s)));
        };
        let numbers = || -> Result<Vec<usize>, FamilyError> {
            params
                .split(',')
                .map(|t| {
                    t.trim().parse().map_err(|_| FamilyError::InvalidParameter(format!("`{t}` in `{s}`")))
                })
                .collect()
        };
        let expect = |want: usize, got: Vec<usize>| {
            if got.len() == want {
                Ok(got)
            } else {
                Err(FamilyError::InvalidParameter(format!("`{family}` takes {want} parameter(s), got `{params}`")))
            }
        };
        match family {
            "hamming" => expect(2, numbers()?).map(|v| GraphSpec::Hamming { diameter: v[0], q: v[1] }),
            "johnson" => expect(2, numbers()?).map(|v| GraphSpec::Johnson { n: v[0], k: v[1] }),
            "cycle" => expect(1, numbers()?).map(|v| GraphSpec::Cycle { n: v[0] }),
            _ => Ok(GraphSpec::File(PathBuf::from(s))),
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), FamilyError> {
    if n > cap {
        return Err(FamilyError::SizeCap { n, cap });
    }
    Ok(())
}

fn from_edges(name: String, n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(name, n, edges).expect("family generators produce simple connected graphs")
}

/// Hamming graph `H(D, q)`: words of length `D` over `q` letters, adjacent
/// when they differ in one position. A word is numbered by reading it as a
/// base-`q` integer.
pub fn hamming(diameter: usize, q: usize, cap: usize) -> Result<Graph, FamilyError> {
    if q < 2 {
        return Err(FamilyError::InvalidParameter(format!("hamming alphabet size {q} < 2")));
    }
    if diameter < MIN_DIAMETER {
        return Err(FamilyError::DiameterTooSmall { diameter });
    }
    let n = q.checked_pow(diameter as u32).unwrap_or(usize::MAX);
    check_cap(n, cap)?;
    let mut edges = Vec::new();
    for u in 0..n {
        let mut place = 1;
        for _ in 0..diameter {
            let digit = (u / place) % q;
            for other in digit + 1..q {
                edges.push((u, u + (other - digit) * place));
            }
            place *= q;
        }
    }
    Ok(from_edges(format!("hamming:{diameter},{q}"), n, &edges))
}

/// Colex rank of a sorted subset: `Σ_t C(s_t, t + 1)`.
fn colex_rank(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(t, &s)| binomial(s, t + 1)).sum()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Johnson graph `J(n, k)`: `k`-subsets of an `n`-set, adjacent when they
/// meet in `k - 1` points. Subsets are numbered by colex rank.
pub fn johnson(n: usize, k: usize, cap: usize) -> Result<Graph, FamilyError> {
    if k > n {
        return Err(FamilyError::InvalidParameter(format!("johnson subset size {k} exceeds {n}")));
    }
    let diameter = k.min(n - k);
    if diameter < MIN_DIAMETER {
        return Err(FamilyError::DiameterTooSmall { diameter });
    }
    let count = binomial(n, k);
    check_cap(count, cap)?;
    let mut subsets: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        subsets.push(current.clone());
        // next combination in lexicographic order
        let Some(pos) = (0..k).rev().find(|&t| current[t] < n - k + t) else {
            break;
        };
        current[pos] += 1;
        for t in pos + 1..k {
            current[t] = current[t - 1] + 1;
        }
    }
    subsets.sort_by_key(|s| colex_rank(s));
    let mut edges = Vec::new();
    for (u, a) in subsets.iter().enumerate() {
        for (v, b) in subsets.iter().enumerate().skip(u + 1) {
            let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
            if common + 1 == k {
                edges.push((u, v));
            }
        }
    }
    Ok(from_edges(format!("johnson:{n},{k}"), count, &edges))
}

/// The `n`-cycle on `0..n` in cyclic order.
pub fn cycle(n: usize, cap: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(FamilyError::InvalidParameter(format!("cycle length {n} < 3")));
    }
    if n / 2 < MIN_DIAMETER {
        return Err(FamilyError::DiameterTooSmall { diameter: n / 2 });
    }
    check_cap(n, cap)?;
    let edges: Vec<_> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    Ok(from_edges(format!("cycle:{n}"), n, &edges))
}

/// Reads an edge-list file.
pub fn parse_graph(path: &Path) -> Result<Graph, FamilyError> {
    let text = std::fs::read_to_string(path).map_err(|source| FamilyError::Io { path: path.to_owned(), source })?;
    let name = path.file_stem().map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
    parse_edge_list(&name, &text)
}

/// Parses the edge-list format: `#` comment lines, a header `n m`, then
/// exactly `m` lines `u v`.
pub fn parse_edge_list(name: &str, text: &str) -> Result<Graph, FamilyError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), FamilyError> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(FamilyError::Parse { line, message: format!("expected two integers, got `{l}`") });
        }
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| FamilyError::Parse { line, message: format!("`{t}` is not a nonnegative integer") })
        };
        Ok((num(fields[0])?, num(fields[1])?))
    };
    let (header_line, header) = lines.next().ok_or(FamilyError::Parse { line: 1, message: "missing header".into() })?;
    let (n, m) = parse_pair(header_line, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut line_of = Vec::with_capacity(m);
    for (line, l) in lines.by_ref() {
        if edges.len() == m {
            return Err(FamilyError::Parse { line, message: format!("more than the declared {m} edges") });
        }
        let (u, v) = parse_pair(line, l)?;
        for w in [u, v] {
            if w >= n {
                return Err(FamilyError::VertexOutOfRange { line, vertex: w, n });
            }
        }
        if u == v {
            return Err(FamilyError::SelfLoop { line, vertex: u });
        }
        edges.push((u, v));
        line_of.push(line);
    }
    if edges.len() != m {
        return Err(FamilyError::Parse {
            line: header_line,
            message: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(name, n, &edges).map_err(|e| match e {
        GraphError::DuplicateEdge { edge, u, v } => FamilyError::DuplicateEdge { line: line_of[edge], u, v },
        GraphError::Disconnected => FamilyError::Disconnected,
        GraphError::Empty => FamilyError::Parse { line: header_line, message: "graph has no vertices".into() },
        GraphError::SelfLoop { edge, vertex } => FamilyError::SelfLoop { line: line_of[edge], vertex },
        GraphError::VertexOutOfRange { edge, vertex, n } => {
            FamilyError::VertexOutOfRange { line: line_of[edge], vertex, n }
        }
    })
}

/// Writes a graph in the edge-list format.
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.n(), graph.edge_count());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
