//! Simple undirected graphs stored as adjacency bit rows.
//!
//! Vertex `i` occupies bit `i` of every mask, so a vertex subset doubles as
//! the computational-basis index of the graph register in the simulator.

mod formats;
mod iso;

use std::fmt;

use thiserror::Error;

pub use formats::{encode_graph6, parse_adjacency, parse_edge_list, parse_graph6};
pub use iso::{are_isomorphic, canonical_code, CanonicalCode, CANONICAL_CODE_MAX_VERTICES};

/// Largest vertex count accepted anywhere in the toolkit.
pub const MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("graph has {n} vertices, the limit is {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("loop on vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("vertex count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("adjacency matrix error at row {row}, column {col}: {reason}")]
    Adjacency {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("edge list error in entry {entry}: {reason}")]
    EdgeList { entry: usize, reason: String },
}

fn check_vertex_count(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::NoVertices)
    } else if n > MAX_VERTICES {
        Err(GraphError::TooManyVertices {
            n,
            cap: MAX_VERTICES,
        })
    } else {
        Ok(())
    }
}

#[inline]
fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
    m: usize,
}

impl Graph {
    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_vertex_count(n)?;
        Ok(Graph {
            n,
            adj: vec![0; n],
            m: 0,
        })
    }

    /// Builds a graph from an edge list. Endpoint order within a pair is
    /// irrelevant, but each edge may appear only once.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, validating every invariant.
    pub fn from_adjacency_rows(adj: Vec<u32>) -> Result<Self, GraphError> {
        let n = adj.len();
        check_vertex_count(n)?;
        let outside = !full_mask(n);
        let mut degree_sum = 0usize;
        for (i, &row) in adj.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(GraphError::Loop(i));
            }
            if row & outside != 0 {
                return Err(GraphError::VertexOutOfRange {
                    vertex: (row & outside).trailing_zeros() as usize,
                    n,
                });
            }
            for (j, &other) in adj.iter().enumerate() {
                if (row >> j & 1) != (other >> i & 1) {
                    return Err(GraphError::Adjacency {
                        row: i,
                        col: j,
                        reason: "matrix is not symmetric".into(),
                    });
                }
            }
            degree_sum += row.count_ones() as usize;
        }
        Ok(Graph {
            n,
            adj,
            m: degree_sum / 2,
        })
    }

    fn insert_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        for v in [a, b] {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        if a == b {
            return Err(GraphError::Loop(a));
        }
        if self.has_edge(a, b) {
            return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        self.m += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Neighbourhood bit mask of vertex `v`.
    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn adjacency_rows(&self) -> &[u32] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    /// Mask with one bit set for every vertex.
    pub fn vertex_mask(&self) -> u32 {
        full_mask(self.n)
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            let above = self.adj[i] >> i >> 1;
            (0..self.n - i - 1)
                .filter(move |k| above >> k & 1 == 1)
                .map(move |k| (i, i + 1 + k))
        })
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: VertexSubset) -> usize {
        self.induced_edges_in_mask(s.mask())
    }

    /// Raw-mask variant of [`Graph::induced_edge_count`] for subset sweeps.
    /// Bits at positions `>= n` must be clear.
    #[inline]
    pub fn induced_edges_in_mask(&self, mask: u32) -> usize {
        let mut rest = mask;
        let mut twice = 0u32;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice += (self.adj[v] & mask).count_ones();
        }
        (twice / 2) as usize
    }

    /// Relabels vertex `i` as `p(i)`.
    pub fn permute(&self, p: &Permutation) -> Result<Graph, GraphError> {
        if p.len() != self.n {
            return Err(GraphError::SizeMismatch(self.n, p.len()));
        }
        let mut adj = vec![0u32; self.n];
        for (i, &row) in self.adj.iter().enumerate() {
            adj[p.apply(i)] = p.apply_mask(row);
        }
        Ok(Graph {
            n: self.n,
            adj,
            m: self.m,
        })
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| (self.adj[i] >> j & 1) as u8).collect())
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A set of vertices, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset(u32);

impl VertexSubset {
    pub fn new(mask: u32, n: usize) -> Result<Self, GraphError> {
        let outside = mask & !full_mask(n);
        if outside != 0 {
            return Err(GraphError::VertexOutOfRange {
                vertex: outside.trailing_zeros() as usize,
                n,
            });
        }
        Ok(VertexSubset(mask))
    }

    pub fn from_vertices<I>(n: usize, vertices: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = 0u32;
        for v in vertices {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(VertexSubset(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 >> v & 1 == 1
    }

    /// Member vertices in increasing order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&v| self.0 >> v & 1 == 1)
    }
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self, GraphError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(GraphError::InvalidPermutation(n));
            }
            seen[x] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Image of a vertex mask.
    pub fn apply_mask(&self, mask: u32) -> u32 {
        let mut rest = mask;
        let mut out = 0u32;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.0[v];
        }
        out
    }

    pub fn apply_subset(&self, s: VertexSubset) -> VertexSubset {
        VertexSubset(self.apply_mask(s.mask()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}
