//! Exact isomorphism testing and canonical codes for small graphs.

use std::fmt;

use super::{Graph, GraphError, Permutation};

/// Canonical codes are computed by exhaustive search, so they are limited to
/// graphs this small.
pub const CANONICAL_CODE_MAX_VERTICES: usize = 8;

/// Searches for a bijection `p` with `(i, j) ∈ E1 ⇔ (p(i), p(j)) ∈ E2`.
///
/// Backtracks over a connectivity-first vertex order of `g1`, only trying
/// targets in `g2` whose degree and sorted neighbour-degree sequence match.
/// Graphs of different order or size are reported as non-isomorphic.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Option<Permutation> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let sig1 = signatures(g1);
    let sig2 = signatures(g2);
    {
        let mut a = sig1.clone();
        let mut b = sig2.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
    }

    let order = search_order(g1);
    let candidates: Vec<u32> = order
        .iter()
        .map(|&v| {
            (0..n)
                .filter(|&w| sig2[w] == sig1[v])
                .fold(0u32, |acc, w| acc | 1 << w)
        })
        .collect();

    let mut state = Search {
        g1,
        g2,
        order: &order,
        candidates: &candidates,
        map: vec![usize::MAX; n],
        assigned_src: 0,
        assigned_dst: 0,
    };
    if state.extend(0) {
        Some(Permutation(state.map))
    } else {
        None
    }
}

fn signatures(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.vertex_count())
        .map(|v| {
            let mut nd: Vec<usize> = (0..g.vertex_count())
                .filter(|&w| g.has_edge(v, w))
                .map(|w| g.degree(w))
                .collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

/// Highest degree first, then repeatedly the vertex with most already-placed
/// neighbours, so adjacency constraints bite early.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut placed = 0u32;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                (
                    (g.neighbors(v) & placed).count_ones(),
                    g.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex remains");
        placed |= 1 << next;
        order.push(next);
    }
    order
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    order: &'a [usize],
    candidates: &'a [u32],
    map: Vec<usize>,
    assigned_src: u32,
    assigned_dst: u32,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        // images of v's already-placed neighbours
        let mut wanted = 0u32;
        let mut rest = self.g1.neighbors(v) & self.assigned_src;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            wanted |= 1 << self.map[u];
        }
        let mut free = self.candidates[depth] & !self.assigned_dst;
        while free != 0 {
            let w = free.trailing_zeros() as usize;
            free &= free - 1;
            if self.g2.neighbors(w) & self.assigned_dst != wanted {
                continue;
            }
            self.map[v] = w;
            self.assigned_src |= 1 << v;
            self.assigned_dst |= 1 << w;
            if self.extend(depth + 1) {
                return true;
            }
            self.assigned_src &= !(1 << v);
            self.assigned_dst &= !(1 << w);
        }
        self.map[v] = usize::MAX;
        false
    }
}

/// Upper-triangle adjacency bits in column-major order (the graph6 order:
/// (0,1), (0,2), (1,2), (0,3), ...), minimised over all vertex relabellings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    n: u8,
    /// First bit of the string is the most significant of `len()` bits.
    bits: u64,
}

impl CanonicalCode {
    pub fn vertex_count(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        let n = self.n as usize;
        n * (n - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// The labelled graph whose upper triangle is this code.
    pub fn to_graph(&self) -> Graph {
        let n = self.n as usize;
        let len = self.len();
        let mut adj = vec![0u32; n];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> (len - 1 - k) & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
                k += 1;
            }
        }
        Graph::from_adjacency_rows(adj).expect("code describes a simple graph")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.len();
        for k in 0..len {
            f.write_str(if self.bits >> (len - 1 - k) & 1 == 1 {
                "1"
            } else {
                "0"
            })?;
        }
        Ok(())
    }
}

/// Lexicographically smallest upper-triangle string over all `n!`
/// relabellings.
///
/// Column `k` of the string depends only on which vertices occupy positions
/// `0..=k`, so the search assigns positions left to right and abandons any
/// partial relabelling whose prefix already exceeds the best complete code.
pub fn canonical_code(g: &Graph) -> Result<CanonicalCode, GraphError> {
    let n = g.vertex_count();
    if n > CANONICAL_CODE_MAX_VERTICES {
        return Err(GraphError::TooManyVertices {
            n,
            cap: CANONICAL_CODE_MAX_VERTICES,
        });
    }
    let total = n * (n - 1) / 2;
    let mut search = CanonSearch {
        g,
        total,
        placed: Vec::with_capacity(n),
        used: 0,
        best: None,
    };
    search.descend(0, 0);
    Ok(CanonicalCode {
        n: n as u8,
        bits: search.best.unwrap_or(0),
    })
}

struct CanonSearch<'a> {
    g: &'a Graph,
    total: usize,
    placed: Vec<usize>,
    used: u32,
    best: Option<u64>,
}

impl CanonSearch<'_> {
    /// `prefix` holds the bits of columns `1..pos`, i.e. `pos(pos-1)/2` bits.
    fn descend(&mut self, pos: usize, prefix: u64) {
        let n = self.g.vertex_count();
        if pos == n {
            if self.best.is_none_or(|b| prefix < b) {
                self.best = Some(prefix);
            }
            return;
        }
        let prefix_len = pos * (pos + 1) / 2;
        for v in 0..n {
            if self.used >> v & 1 == 1 {
                continue;
            }
            let mut code = prefix;
            for &u in &self.placed {
                code = (code << 1) | self.g.has_edge(u, v) as u64;
            }
            if let Some(best) = self.best {
                let best_prefix = best >> (self.total - prefix_len);
                if code > best_prefix {
                    continue;
                }
            }
            self.placed.push(v);
            self.used |= 1 << v;
            self.descend(pos + 1, code);
            self.placed.pop();
            self.used &= !(1 << v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All permutations of 0..n by Heap's algorithm.
    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        let mut a: Vec<usize> = (0..n).collect();
        let mut c = vec![0; n];
        let mut out = vec![a.clone()];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(a.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    fn upper_triangle_string(g: &Graph) -> String {
        let n = g.vertex_count();
        let mut s = String::new();
        for j in 1..n {
            for i in 0..j {
                s.push(if g.has_edge(i, j) { '1' } else { '0' });
            }
        }
        s
    }

    fn brute_force_code(g: &Graph) -> String {
        all_permutations(g.vertex_count())
            .into_iter()
            .map(|p| upper_triangle_string(&g.permute(&Permutation(p)).unwrap()))
            .min()
            .unwrap()
    }

    fn graph_from_index(n: usize, idx: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if idx >> k & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn complete_graph_code() {
        let k3 = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(canonical_code(&k3).unwrap().to_string(), "111");
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(canonical_code(&k1).unwrap().to_string(), "");
    }

    #[test]
    fn code_matches_brute_force_exhaustively_to_five() {
        for n in 1..=5 {
            for idx in 0..1u64 << (n * (n - 1) / 2) {
                let g = graph_from_index(n, idx);
                assert_eq!(
                    canonical_code(&g).unwrap().to_string(),
                    brute_force_code(&g)
                );
            }
        }
    }

    #[test]
    fn code_round_trips_to_graph() {
        let g = graph_from_index(6, 0b101101011001011);
        let code = canonical_code(&g).unwrap();
        let h = code.to_graph();
        assert_eq!(canonical_code(&h).unwrap(), code);
        assert!(are_isomorphic(&g, &h).is_some());
    }

    #[test]
    fn rejects_large_graphs() {
        assert!(canonical_code(&Graph::empty(9).unwrap()).is_err());
    }

    #[test]
    fn isomorphism_agrees_with_codes_exhaustively_to_four() {
        for n in 1..=4 {
            let count = 1u64 << (n * (n - 1) / 2);
            let graphs: Vec<Graph> = (0..count).map(|i| graph_from_index(n, i)).collect();
            let codes: Vec<_> = graphs.iter().map(|g| canonical_code(g).unwrap()).collect();
            for a in 0..graphs.len() {
                for b in 0..graphs.len() {
                    let iso = are_isomorphic(&graphs[a], &graphs[b]);
                    assert_eq!(iso.is_some(), codes[a] == codes[b]);
                    if let Some(p) = iso {
                        assert_eq!(graphs[a].permute(&p).unwrap(), graphs[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn different_sizes_not_isomorphic() {
        let a = Graph::empty(3).unwrap();
        let b = Graph::empty(4).unwrap();
        assert!(are_isomorphic(&a, &b).is_none());
        let c = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(are_isomorphic(&a, &c).is_none());
    }
}
