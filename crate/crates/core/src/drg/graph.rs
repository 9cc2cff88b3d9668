use std::collections::VecDeque;

use crate::linalg::{Matrix, Scalar};

use super::{DrgError, GraphError};

/// Finite simple connected undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph and rejects loops, repeated edges, out-of-range
    /// endpoints and disconnected inputs.
    pub fn from_edges(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { edge: idx, vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: idx, vertex: u });
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge { edge: idx, u: u.min(v), v: u.max(v) });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let graph = Self { name: name.into(), adj };
        if graph.bfs(0).iter().any(Option::is_none) {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn adjacency_matrix<S: Scalar>(&self) -> Matrix<S> {
        let n = self.n();
        let mut m = Matrix::zeros(n, n);
        for (u, v) in self.edges() {
            m[(u, v)] = S::one();
            m[(v, u)] = S::one();
        }
        m
    }

    /// `A v` without materializing `A`.
    pub fn apply_adjacency<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        self.adj
            .iter()
            .map(|list| list.iter().fold(S::zero(), |acc, &w| acc + v[w].clone()))
            .collect()
    }

    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs path-length distances.
    pub fn distances(&self) -> Result<DistanceTable, DrgError> {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for x in 0..n {
            for d in self.bfs(x) {
                data.push(d.ok_or(DrgError::Disconnected)? as u16);
            }
        }
        let diameter = data.iter().copied().max().unwrap_or(0) as usize;
        Ok(DistanceTable { n, data, diameter })
    }
}

/// The path-length distance `∂(x, y)` for every vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    data: Vec<u16>,
    diameter: usize,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.data[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u16] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    /// Vertices at distance exactly `i` from `x`, increasing.
    pub fn sphere(&self, x: usize, i: usize) -> Vec<usize> {
        self.row(x).iter().enumerate().filter(|(_, &d)| d as usize == i).map(|(y, _)| y).collect()
    }

    pub fn eccentricity(&self, x: usize) -> usize {
        self.row(x).iter().copied().max().unwrap_or(0) as usize
    }

    /// The 0/1 matrix of the distance-`i` relation.
    pub fn distance_matrix<S: Scalar>(&self, i: usize) -> Matrix<S> {
        Matrix::from_fn(self.n, self.n, |x, y| if self.get(x, y) == i { S::one() } else { S::zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<(usize, usize)> {
        (0..n - 1).map(|i| (i, i + 1)).collect()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(Graph::from_edges("g", 3, &[(1, 1)]), Err(GraphError::SelfLoop { edge: 0, vertex: 1 }));
        assert_eq!(
            Graph::from_edges("g", 3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { edge: 1, u: 0, v: 1 })
        );
        assert_eq!(
            Graph::from_edges("g", 3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { edge: 0, vertex: 3, n: 3 })
        );
        assert_eq!(Graph::from_edges("g", 3, &[(0, 1)]), Err(GraphError::Disconnected));
        assert_eq!(Graph::from_edges("g", 0, &[]), Err(GraphError::Empty));
    }

    #[test]
    fn path_distances() {
        let g = Graph::from_edges("p4", 4, &path(4)).unwrap();
        let d = g.distances().unwrap();
        assert_eq!(d.diameter(), 3);
        assert_eq!(d.get(0, 3), 3);
        assert_eq!(d.sphere(1, 1), vec![0, 2]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.apply_adjacency(&[1.0, 0.0, 0.0, 0.0]), vec![0.0, 1.0, 0.0, 0.0]);
    }
}
