//! Plain undirected graphs with 1-based vertex indices.
//!
//! Used in two places: as the bounded-degree secondary factor of a product,
//! and as the input of the exact odd-chromatic oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, u32),
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(u32, u32),
    #[error("adjacency is not symmetric at ({0},{1})")]
    Asymmetric(u32, u32),
}

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<u32>>,
    max_degree: u32,
}

impl SimpleGraph {
    pub fn empty(n: u32) -> Self {
        Self {
            adj: vec![Vec::new(); n as usize],
            max_degree: 0,
        }
    }

    /// Builds from an edge list; rejects loops, out-of-range endpoints and
    /// duplicate edges.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n as usize];
        for &(a, b) in edges {
            if a < 1 || a > n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b < 1 || b > n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            adj[a as usize - 1].push(b);
            adj[b as usize - 1].push(a);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let d = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge(v as u32 + 1, d));
            }
        }
        Ok(Self::from_sorted_adj(adj))
    }

    /// Builds from explicit adjacency lists (1-based); validates symmetry,
    /// loop-freeness and index ranges.
    pub fn from_adjacency(adjacency: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let n = adjacency.len() as u32;
        let mut adj = adjacency;
        for (v0, list) in adj.iter_mut().enumerate() {
            let v = v0 as u32 + 1;
            list.sort_unstable();
            for &w in list.iter() {
                if w < 1 || w > n {
                    return Err(GraphError::VertexOutOfRange(w, n));
                }
                if w == v {
                    return Err(GraphError::Loop(v));
                }
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                let d = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge(v, d));
            }
        }
        for v0 in 0..adj.len() {
            let v = v0 as u32 + 1;
            for &w in &adj[v0] {
                if adj[w as usize - 1].binary_search(&v).is_err() {
                    return Err(GraphError::Asymmetric(v, w));
                }
            }
        }
        Ok(Self::from_sorted_adj(adj))
    }

    fn from_sorted_adj(adj: Vec<Vec<u32>>) -> Self {
        let max_degree = adj.iter().map(|l| l.len() as u32).max().unwrap_or(0);
        Self { adj, max_degree }
    }

    /// Path on `n` vertices (1-2-...-n). `n = 1` is a single isolated vertex,
    /// `n = 2` is an edge.
    pub fn path(n: u32) -> Self {
        let edges: Vec<(u32, u32)> = (1..n).map(|v| (v, v + 1)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: u32) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<(u32, u32)> = (1..n).map(|v| (v, v + 1)).collect();
        edges.push((n, 1));
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: u32) -> Self {
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                edges.push((a, b));
            }
        }
        Self::from_edges(n, &edges).unwrap()
    }

    /// Random graph with maximum degree at most `max_deg`, deterministic for
    /// a given seed. Makes a bounded number of insertion attempts, so the
    /// realized maximum degree may be below the requested bound.
    pub fn random_max_degree(n: u32, max_deg: u32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
        if n >= 2 && max_deg >= 1 {
            let attempts = 4 * (n as u64) * (max_deg as u64).max(1);
            for _ in 0..attempts {
                let a = rng.random_range(1..=n);
                let b = rng.random_range(1..=n);
                if a == b {
                    continue;
                }
                let (a0, b0) = (a as usize - 1, b as usize - 1);
                if adj[a0].len() >= max_deg as usize || adj[b0].len() >= max_deg as usize {
                    continue;
                }
                if adj[a0].contains(&b) {
                    continue;
                }
                adj[a0].push(b);
                adj[b0].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::from_sorted_adj(adj)
    }

    pub fn n(&self) -> u32 {
        self.adj.len() as u32
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.adj[v as usize - 1].len() as u32
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[v as usize - 1]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        a != b && self.adj[a as usize - 1].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Edges as (a, b) pairs with a < b, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(v0, list)| {
            let v = v0 as u32 + 1;
            list.iter().filter(move |&&w| w > v).map(move |&w| (v, w))
        })
    }

    /// Closed ball of radius 2 around `v`: `v`, its neighbours, and their
    /// neighbours. Sorted and deduplicated; size at most Δ²+1.
    pub fn ball2(&self, v: u32) -> Vec<u32> {
        let mut ball = vec![v];
        for &w in self.neighbours(v) {
            ball.push(w);
            ball.extend_from_slice(self.neighbours(w));
        }
        ball.sort_unstable();
        ball.dedup();
        ball
    }
}
