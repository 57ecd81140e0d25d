use std::collections::VecDeque;

/// Vertex–edge graph of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeGraph {
    nvertices: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl PolytopeGraph {
    /// Builds the graph; each edge is normalized to `(min, max)` and deduplicated.
    pub fn new(nvertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .filter(|(u, v)| u != v)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); nvertices];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let degrees = adjacency.iter().map(Vec::len).collect();
        PolytopeGraph {
            nvertices,
            edges,
            degrees,
            adjacency,
        }
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Maximum number of internally vertex-disjoint s–t paths, capped at `cap`.
    fn disjoint_paths(&self, s: usize, t: usize, cap: usize) -> usize {
        // split v into v_in = 2v and v_out = 2v + 1
        let n = 2 * self.nvertices;
        let mut residual = vec![vec![0u32; n]; n];
        let big = self.nvertices as u32 + 1;
        for v in 0..self.nvertices {
            residual[2 * v][2 * v + 1] = if v == s || v == t { big } else { 1 };
        }
        for &(u, v) in &self.edges {
            residual[2 * u + 1][2 * v] = big;
            residual[2 * v + 1][2 * u] = big;
        }
        let (source, sink) = (2 * s + 1, 2 * t);
        let mut flow = 0;
        while flow < cap {
            let mut prev = vec![usize::MAX; n];
            prev[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(x) = queue.pop_front() {
                if x == sink {
                    break;
                }
                for y in 0..n {
                    if residual[x][y] > 0 && prev[y] == usize::MAX {
                        prev[y] = x;
                        queue.push_back(y);
                    }
                }
            }
            if prev[sink] == usize::MAX {
                break;
            }
            let mut y = sink;
            while y != source {
                let x = prev[y];
                residual[x][y] -= 1;
                residual[y][x] += 1;
                y = x;
            }
            flow += 1;
        }
        flow
    }
}

/// True iff removing fewer than `k` vertices never disconnects `g` (and `g`
/// has more than `k` vertices). Decided by unit-capacity max-flow over all
/// non-adjacent pairs.
pub fn vertex_connectivity_at_least(g: &PolytopeGraph, k: usize) -> bool {
    if g.nvertices <= k {
        return false;
    }
    if g.min_degree() < k {
        return false;
    }
    for s in 0..g.nvertices {
        for t in s + 1..g.nvertices {
            if !g.adjacent(s, t) && g.disjoint_paths(s, t, k) < k {
                return false;
            }
        }
    }
    true
}
