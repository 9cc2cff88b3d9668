//! Distance-regular graphs and their Bose–Mesner data.

mod graph;
mod krein;
mod profile;

pub use graph::{DistanceTable, Graph};
pub use krein::{find_qpoly_orderings, qpoly_violation, KreinTable, KREIN_ZERO_REL};
pub use profile::{BoseMesner, DrgProfile};

use thiserror::Error;

/// Minimum diameter accepted for analysis.
pub const MIN_DIAMETER: usize = 3;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge {edge}: self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge}: duplicate edge {u} {v}")]
    DuplicateEdge { edge: usize, u: usize, v: usize },
    #[error("edge {edge}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// Two vertex pairs at the same distance `h` with different counts
/// `|{z : ∂(x,z) = i, ∂(z,y) = j}|`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RegularityWitness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub first: (usize, usize),
    pub first_count: u64,
    pub second: (usize, usize),
    pub second_count: u64,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DrgError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("diameter {diameter} < 3")]
    DiameterTooSmall { diameter: usize },
    #[error(
        "not distance-regular: p^{h}_{{{i},{j}}} is {} for pair {:?} but {} for pair {:?}",
        .0.first_count, .0.first, .0.second_count, .0.second,
        h = .0.h, i = .0.i, j = .0.j
    )]
    NotDistanceRegular(RegularityWitness),
    #[error("spectrum is not rational; rerun in float mode")]
    ExactModeUnsupported,
    #[error("spectral data failed validation: {0}")]
    SpectrumValidation(String),
    #[error("negative Krein parameter q^{h}_{{{i},{j}}} = {value:e}")]
    NegativeKrein { h: usize, i: usize, j: usize, value: f64 },
    #[error("graph is not Q-polynomial: no ordering of the primitive idempotents satisfies the Krein condition")]
    NotQPolynomial,
    #[error("ordering index {index} out of range ({available} Q-polynomial orderings)")]
    OrderingOutOfRange { index: usize, available: usize },
}

/// The intersection numbers `p^h_{ij}` for `0 <= h, i, j <= D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionNumbers {
    diameter: usize,
    data: Vec<u64>,
}

impl IntersectionNumbers {
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn get(&self, h: usize, i: usize, j: usize) -> u64 {
        let m = self.diameter + 1;
        self.data[(h * m + i) * m + j]
    }

    /// `k_i = p^0_{ii}`, the size of each distance-`i` sphere.
    pub fn valency(&self, i: usize) -> u64 {
        self.get(0, i, i)
    }

    /// `b_i = p^i_{1,i+1}` (zero for `i = D`).
    pub fn b(&self, i: usize) -> u64 {
        if i < self.diameter { self.get(i, 1, i + 1) } else { 0 }
    }

    /// `c_i = p^i_{1,i-1}` (zero for `i = 0`).
    pub fn c(&self, i: usize) -> u64 {
        if i > 0 { self.get(i, 1, i - 1) } else { 0 }
    }

    /// `a_i = p^i_{1i}`.
    pub fn a(&self, i: usize) -> u64 {
        self.get(i, 1, i)
    }
}

/// Certifies distance-regularity by counting `p^h_{ij}` over every ordered
/// vertex pair and comparing against the first pair seen at each distance.
pub fn check_distance_regular(dist: &DistanceTable) -> Result<IntersectionNumbers, DrgError> {
    let n = dist.n();
    let m = dist.diameter() + 1;
    let mut reference: Vec<Option<((usize, usize), Vec<u64>)>> = vec![None; m];
    let mut counts = vec![0u64; m * m];
    for x in 0..n {
        let row_x = dist.row(x);
        for y in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            let row_y = dist.row(y);
            for z in 0..n {
                counts[row_x[z] as usize * m + row_y[z] as usize] += 1;
            }
            let h = dist.get(x, y);
            match &reference[h] {
                None => reference[h] = Some(((x, y), counts.clone())),
                Some((pair, expected)) => {
                    if let Some(k) = (0..m * m).find(|&k| expected[k] != counts[k]) {
                        return Err(DrgError::NotDistanceRegular(RegularityWitness {
                            h,
                            i: k / m,
                            j: k % m,
                            first: *pair,
                            first_count: expected[k],
                            second: (x, y),
                            second_count: counts[k],
                        }));
                    }
                }
            }
        }
    }
    let mut data = Vec::with_capacity(m * m * m);
    for entry in reference {
        let (_, table) = entry.expect("every distance up to the diameter is realized");
        data.extend(table);
    }
    Ok(IntersectionNumbers { diameter: m - 1, data })
}
