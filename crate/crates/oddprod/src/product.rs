//! Strong products and their subgraphs.
//!
//! The product H ⊠ S is never materialized. A [`ProductSubgraph`] stores the
//! host, the secondary factor, an explicit vertex set and an explicit edge
//! set; product adjacency is evaluated coordinate-wise on demand. The module
//! also computes the two bounded neighbourhood templates the colouring
//! engine is built on:
//!
//! * the support set C_v — the vertices around v whose colours must stay
//!   pairwise distinct, and
//! * the risk set R(v) — every already-coloured vertex that can share a
//!   support set with v when v is the latest vertex in lexicographic order.
//!
//! Path positions 0 and h+1 act as sentinels: templates may reach them but
//! they never hold vertices, so they simply contribute nothing.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::SimpleGraph;
use crate::host::ElimOrderedHost;
use crate::report::{rules, ValidationReport};

/// A vertex of the product space. `k` is the clique coordinate and is
/// always 1 unless the secondary factor is `PathClique`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl ProductVertex {
    pub fn new(i: u32, j: u32) -> Self {
        Self { i, j, k: 1 }
    }

    pub fn with_clique(i: u32, j: u32, k: u32) -> Self {
        Self { i, j, k }
    }
}

impl std::fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 1 {
            write!(f, "({},{})", self.i, self.j)
        } else {
            write!(f, "({},{},{})", self.i, self.j, self.k)
        }
    }
}

/// The second factor of the product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecondaryFactor {
    /// Path on positions 1..=h.
    Path { h: u32 },
    /// Path on positions 1..=h times a clique on 1..=ell.
    PathClique { h: u32, ell: u32 },
    /// Arbitrary bounded-degree graph on positions 1..=h.
    General(SimpleGraph),
}

impl SecondaryFactor {
    pub fn h(&self) -> u32 {
        match self {
            SecondaryFactor::Path { h } | SecondaryFactor::PathClique { h, .. } => *h,
            SecondaryFactor::General(g) => g.n(),
        }
    }

    pub fn ell(&self) -> u32 {
        match self {
            SecondaryFactor::PathClique { ell, .. } => *ell,
            _ => 1,
        }
    }

    /// Maximum degree of the general factor; `None` for path variants.
    pub fn delta(&self) -> Option<u32> {
        match self {
            SecondaryFactor::General(g) => Some(g.max_degree()),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SecondaryFactor::Path { .. } => "path",
            SecondaryFactor::PathClique { .. } => "path_clique",
            SecondaryFactor::General(_) => "general",
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if let SecondaryFactor::PathClique { ell, .. } = self {
            if *ell < 1 {
                report.push(rules::SECONDARY_SHAPE, vec![*ell], "ell must be at least 1");
            }
        }
        report
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProductError {
    #[error("vertex ({i},{j},{k}) outside product space r={r}, h={h}, ell={ell}")]
    InvalidVertex {
        i: u32,
        j: u32,
        k: u32,
        r: u32,
        h: u32,
        ell: u32,
    },
}

/// Position-to-index lookup over the product space.
#[derive(Debug, Clone)]
enum PositionIndex {
    Dense { h: u64, ell: u64, slots: Vec<u32> },
    Sparse(HashMap<(u32, u32, u32), u32>),
}

const NO_VERTEX: u32 = u32::MAX;

impl PositionIndex {
    fn build(r: u32, h: u32, ell: u32, vertices: &[ProductVertex]) -> Self {
        let size = r as u64 * h as u64 * ell as u64;
        let budget = 8 * vertices.len() as u64 + 4096;
        if size <= budget.min(1 << 28) {
            let mut slots = vec![NO_VERTEX; size as usize];
            let (h64, ell64) = (h as u64, ell as u64);
            for (pos, v) in vertices.iter().enumerate() {
                // Out-of-space vertices get no slot; validation reports them.
                if v.i < 1 || v.i > r || v.j < 1 || v.j > h || v.k < 1 || v.k > ell {
                    continue;
                }
                let slot = ((v.i as u64 - 1) * h64 + (v.j as u64 - 1)) * ell64 + (v.k as u64 - 1);
                slots[slot as usize] = pos as u32;
            }
            PositionIndex::Dense {
                h: h64,
                ell: ell64,
                slots,
            }
        } else {
            let map = vertices
                .iter()
                .enumerate()
                .map(|(pos, v)| ((v.i, v.j, v.k), pos as u32))
                .collect();
            PositionIndex::Sparse(map)
        }
    }

    #[inline]
    fn get(&self, i: u32, j: u32, k: u32) -> Option<u32> {
        match self {
            PositionIndex::Dense { h, ell, slots } => {
                let slot = ((i as u64 - 1) * h + (j as u64 - 1)) * ell + (k as u64 - 1);
                match slots[slot as usize] {
                    NO_VERTEX => None,
                    pos => Some(pos),
                }
            }
            PositionIndex::Sparse(map) => map.get(&(i, j, k)).copied(),
        }
    }
}

/// An explicit subgraph of H ⊠ S.
///
/// Vertices are kept in lexicographic (i, j, k) order — the processing order
/// of the colouring engine — and edges as sorted position pairs into that
/// list. Both are brought to this canonical form on construction; validity
/// (range, duplicates, product adjacency) is checked by [`validate`].
///
/// [`validate`]: ProductSubgraph::validate
#[derive(Debug, Clone)]
pub struct ProductSubgraph {
    host: ElimOrderedHost,
    secondary: SecondaryFactor,
    vertices: Vec<ProductVertex>,
    edges: Vec<(u32, u32)>,
    /// Coordinate-pair edges whose endpoints are not in `vertices`; kept so
    /// validation can report them.
    dangling: Vec<(ProductVertex, ProductVertex)>,
    index: PositionIndex,
    adj_offsets: Vec<u32>,
    adj_targets: Vec<u32>,
    /// Closed radius-2 balls per secondary position, general variant only.
    ball2_by_j: Vec<Vec<u32>>,
}

impl ProductSubgraph {
    /// Assembles a subgraph from coordinate data. Vertices are sorted (not
    /// deduplicated — duplicates are a reportable violation); edges whose
    /// endpoints resolve are stored as position pairs, the rest are kept
    /// aside for validation.
    pub fn from_parts(
        host: ElimOrderedHost,
        secondary: SecondaryFactor,
        mut vertices: Vec<ProductVertex>,
        edge_pairs: Vec<(ProductVertex, ProductVertex)>,
    ) -> Self {
        vertices.sort_unstable();
        let index = PositionIndex::build(host.r(), secondary.h(), secondary.ell(), &vertices);
        let mut edges = Vec::with_capacity(edge_pairs.len());
        let mut dangling = Vec::new();
        for (u, v) in edge_pairs {
            match (lookup(&index, u), lookup(&index, v)) {
                (Some(a), Some(b)) => edges.push(if a <= b { (a, b) } else { (b, a) }),
                _ => dangling.push((u, v)),
            }
        }
        Self::assemble(host, secondary, vertices, edges, dangling, index)
    }

    /// Assembles from pre-sorted vertices and canonical position pairs.
    /// Used by the sampler and the loader, which build in order.
    pub fn from_sorted_parts(
        host: ElimOrderedHost,
        secondary: SecondaryFactor,
        vertices: Vec<ProductVertex>,
        edges: Vec<(u32, u32)>,
    ) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] <= w[1]));
        let index = PositionIndex::build(host.r(), secondary.h(), secondary.ell(), &vertices);
        Self::assemble(host, secondary, vertices, edges, Vec::new(), index)
    }

    fn assemble(
        host: ElimOrderedHost,
        secondary: SecondaryFactor,
        vertices: Vec<ProductVertex>,
        mut edges: Vec<(u32, u32)>,
        dangling: Vec<(ProductVertex, ProductVertex)>,
        index: PositionIndex,
    ) -> Self {
        edges.sort_unstable();
        let n = vertices.len();
        let mut degrees = vec![0u32; n];
        for &(a, b) in &edges {
            degrees[a as usize] += 1;
            if a != b {
                degrees[b as usize] += 1;
            }
        }
        let mut adj_offsets = vec![0u32; n + 1];
        for v in 0..n {
            adj_offsets[v + 1] = adj_offsets[v] + degrees[v];
        }
        let mut cursor: Vec<u32> = adj_offsets[..n].to_vec();
        let mut adj_targets = vec![0u32; adj_offsets[n] as usize];
        for &(a, b) in &edges {
            adj_targets[cursor[a as usize] as usize] = b;
            cursor[a as usize] += 1;
            if a != b {
                adj_targets[cursor[b as usize] as usize] = a;
                cursor[b as usize] += 1;
            }
        }
        let ball2_by_j = match &secondary {
            SecondaryFactor::General(g) => (1..=g.n()).map(|j| g.ball2(j)).collect(),
            _ => Vec::new(),
        };
        Self {
            host,
            secondary,
            vertices,
            edges,
            dangling,
            index,
            adj_offsets,
            adj_targets,
            ball2_by_j,
        }
    }

    pub fn host(&self) -> &ElimOrderedHost {
        &self.host
    }

    pub fn secondary(&self) -> &SecondaryFactor {
        &self.secondary
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[ProductVertex] {
        &self.vertices
    }

    /// Edges as pairs of 0-based positions into [`vertices`], low first.
    ///
    /// [`vertices`]: ProductSubgraph::vertices
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn vertex_at(&self, pos: u32) -> ProductVertex {
        self.vertices[pos as usize]
    }

    /// 0-based position of `v` in the canonical vertex order, if present.
    pub fn position_of(&self, v: ProductVertex) -> Option<u32> {
        if self.in_space(v) {
            lookup(&self.index, v)
        } else {
            None
        }
    }

    pub fn neighbours_of(&self, pos: u32) -> &[u32] {
        let lo = self.adj_offsets[pos as usize] as usize;
        let hi = self.adj_offsets[pos as usize + 1] as usize;
        &self.adj_targets[lo..hi]
    }

    pub fn degree(&self, pos: u32) -> usize {
        self.neighbours_of(pos).len()
    }

    fn in_space(&self, v: ProductVertex) -> bool {
        v.i >= 1
            && v.i <= self.host.r()
            && v.j >= 1
            && v.j <= self.secondary.h()
            && v.k >= 1
            && v.k <= self.secondary.ell()
    }

    fn check_space(&self, v: ProductVertex) -> Result<(), ProductError> {
        if self.in_space(v) {
            Ok(())
        } else {
            Err(ProductError::InvalidVertex {
                i: v.i,
                j: v.j,
                k: v.k,
                r: self.host.r(),
                h: self.secondary.h(),
                ell: self.secondary.ell(),
            })
        }
    }

    /// Strong-product adjacency between two product-space vertices.
    pub fn product_adjacent(
        &self,
        u: ProductVertex,
        v: ProductVertex,
    ) -> Result<bool, ProductError> {
        self.check_space(u)?;
        self.check_space(v)?;
        Ok(product_adjacent_unchecked(&self.host, &self.secondary, u, v))
    }

    /// The support set C_v intersected with V(G), sorted. `v` may be any
    /// product-space vertex, in or out of V(G).
    pub fn support_set(&self, v: ProductVertex) -> Result<Vec<ProductVertex>, ProductError> {
        self.check_space(v)?;
        let mut out = Vec::new();
        self.for_each_support_position(v, |pos| out.push(self.vertices[pos as usize]));
        out.sort_unstable();
        Ok(out)
    }

    /// The risk set R(v) intersected with V(G), excluding v itself, sorted.
    pub fn risk_set(&self, v: ProductVertex) -> Result<Vec<ProductVertex>, ProductError> {
        self.check_space(v)?;
        let mut out = Vec::new();
        self.for_each_risk_position(v, |pos| out.push(self.vertices[pos as usize]));
        out.sort_unstable();
        Ok(out)
    }

    #[inline]
    fn lookup_pos(&self, i: u32, j: u32, k: u32) -> Option<u32> {
        self.index.get(i, j, k)
    }

    /// Calls `f` with the position of every V(G) member of C_v. Positions
    /// are visited in template order, not sorted; no position repeats.
    pub(crate) fn for_each_support_position(&self, v: ProductVertex, mut f: impl FnMut(u32)) {
        let h = self.secondary.h();
        match &self.secondary {
            SecondaryFactor::Path { .. } => {
                for &a in self.host.back_clique(v.i) {
                    for jj in window(v.j, 1, h) {
                        if let Some(pos) = self.lookup_pos(a, jj, 1) {
                            f(pos);
                        }
                    }
                }
                if let Some(pos) = self.lookup_pos(v.i, v.j, 1) {
                    f(pos);
                }
                if v.j >= 2 {
                    if let Some(pos) = self.lookup_pos(v.i, v.j - 1, 1) {
                        f(pos);
                    }
                }
            }
            SecondaryFactor::PathClique { ell, .. } => {
                for &a in self.host.back_clique(v.i) {
                    for jj in window(v.j, 1, h) {
                        for kk in 1..=*ell {
                            if let Some(pos) = self.lookup_pos(a, jj, kk) {
                                f(pos);
                            }
                        }
                    }
                }
                let lo = if v.j >= 2 { v.j - 1 } else { v.j };
                for jj in lo..=v.j {
                    for kk in 1..=*ell {
                        if let Some(pos) = self.lookup_pos(v.i, jj, kk) {
                            f(pos);
                        }
                    }
                }
            }
            SecondaryFactor::General(g) => {
                let host_part = |a: u32, f: &mut dyn FnMut(u32)| {
                    if let Some(pos) = self.lookup_pos(a, v.j, 1) {
                        f(pos);
                    }
                    for &b in g.neighbours(v.j) {
                        if let Some(pos) = self.lookup_pos(a, b, 1) {
                            f(pos);
                        }
                    }
                };
                host_part(v.i, &mut f);
                for &a in self.host.back_clique(v.i) {
                    host_part(a, &mut f);
                }
            }
        }
    }

    /// Calls `f` with the position of every V(G) member of R(v) (v itself
    /// excluded). No position repeats.
    pub(crate) fn for_each_risk_position(&self, v: ProductVertex, mut f: impl FnMut(u32)) {
        let h = self.secondary.h();
        match &self.secondary {
            SecondaryFactor::Path { .. } => {
                for &a in self.host.back_clique(v.i) {
                    for jj in window(v.j, 2, h) {
                        if let Some(pos) = self.lookup_pos(a, jj, 1) {
                            f(pos);
                        }
                    }
                }
                for back in 1..=2u32 {
                    if v.j > back {
                        if let Some(pos) = self.lookup_pos(v.i, v.j - back, 1) {
                            f(pos);
                        }
                    }
                }
            }
            SecondaryFactor::PathClique { ell, .. } => {
                for &a in self.host.back_clique(v.i) {
                    for jj in window(v.j, 2, h) {
                        for kk in 1..=*ell {
                            if let Some(pos) = self.lookup_pos(a, jj, kk) {
                                f(pos);
                            }
                        }
                    }
                }
                let lo = v.j.saturating_sub(2).max(1);
                for jj in lo..=v.j {
                    for kk in 1..=*ell {
                        if jj == v.j && kk == v.k {
                            continue;
                        }
                        if let Some(pos) = self.lookup_pos(v.i, jj, kk) {
                            f(pos);
                        }
                    }
                }
            }
            SecondaryFactor::General(_) => {
                let ball = &self.ball2_by_j[v.j as usize - 1];
                let host_part = |a: u32, f: &mut dyn FnMut(u32)| {
                    for &b in ball {
                        if a == v.i && b == v.j {
                            continue;
                        }
                        if let Some(pos) = self.lookup_pos(a, b, 1) {
                            f(pos);
                        }
                    }
                };
                host_part(v.i, &mut f);
                for &a in self.host.back_clique(v.i) {
                    host_part(a, &mut f);
                }
            }
        }
    }

    /// Calls `f` with every product-space vertex u such that `g` ∈ C_u.
    /// For the path-clique variant C_u does not depend on u's clique
    /// coordinate, so centres are reported once with k = 1.
    pub(crate) fn for_each_support_centre(&self, g: ProductVertex, mut f: impl FnMut(ProductVertex)) {
        let h = self.secondary.h();
        match &self.secondary {
            SecondaryFactor::Path { .. } | SecondaryFactor::PathClique { .. } => {
                // g ∈ C_{(i,j)} iff (g.i ∈ C_i and |g.j − j| ≤ 1)
                //               or (i = g.i and j ∈ {g.j, g.j+1}).
                for &i in self.host.forward_star(g.i) {
                    for j in window(g.j, 1, h) {
                        f(ProductVertex::new(i, j));
                    }
                }
                f(ProductVertex::new(g.i, g.j));
                if g.j < h {
                    f(ProductVertex::new(g.i, g.j + 1));
                }
            }
            SecondaryFactor::General(sg) => {
                // g ∈ C_{(i,j)} iff i ∈ {g.i} ∪ forward_star(g.i)
                //              and j ∈ {g.j} ∪ N_I(g.j).
                let secondary_part = |i: u32, f: &mut dyn FnMut(ProductVertex)| {
                    f(ProductVertex::new(i, g.j));
                    for &j in sg.neighbours(g.j) {
                        f(ProductVertex::new(i, j));
                    }
                };
                secondary_part(g.i, &mut f);
                for &i in self.host.forward_star(g.i) {
                    secondary_part(i, &mut f);
                }
            }
        }
    }

    /// All product-space vertices u with `g` ∈ C_u, sorted. For the
    /// path-clique variant centres are reported once with k = 1, since C_u
    /// does not depend on the centre's clique coordinate.
    pub fn support_centres(&self, g: ProductVertex) -> Result<Vec<ProductVertex>, ProductError> {
        self.check_space(g)?;
        let mut out = Vec::new();
        self.for_each_support_centre(g, |u| out.push(u));
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Checks the subgraph invariants: coordinates in range, no duplicate
    /// vertices, all edges resolvable, loop-free, duplicate-free, and
    /// product-adjacent. The host itself is validated separately.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.secondary.validate();
        let is_clique_variant = matches!(self.secondary, SecondaryFactor::PathClique { .. });
        for (pos, v) in self.vertices.iter().enumerate() {
            let in_range = self.in_space(*v) && (is_clique_variant || v.k == 1);
            if !in_range {
                report.push(
                    rules::SUBGRAPH_VERTEX_RANGE,
                    vec![pos as u32 + 1],
                    format!("vertex ({},{},{}) outside the product space", v.i, v.j, v.k),
                );
            }
        }
        for (pos, w) in self.vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                report.push(
                    rules::SUBGRAPH_DUPLICATE_VERTEX,
                    vec![pos as u32 + 1, pos as u32 + 2],
                    format!("duplicate vertex ({},{},{})", w[0].i, w[0].j, w[0].k),
                );
            }
        }
        for (u, v) in &self.dangling {
            report.push(
                rules::SUBGRAPH_ENDPOINT,
                vec![],
                format!(
                    "edge ({},{},{})-({},{},{}) has an endpoint outside the vertex set",
                    u.i, u.j, u.k, v.i, v.j, v.k
                ),
            );
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                report.push(
                    rules::SUBGRAPH_LOOP,
                    vec![a + 1],
                    format!("loop at vertex position {}", a + 1),
                );
                continue;
            }
            if e > 0 && self.edges[e - 1] == (a, b) {
                report.push(
                    rules::SUBGRAPH_DUPLICATE_EDGE,
                    vec![a + 1, b + 1],
                    format!("duplicate edge between positions {} and {}", a + 1, b + 1),
                );
            }
            let (u, v) = (self.vertices[a as usize], self.vertices[b as usize]);
            if !(self.in_space(u) && self.in_space(v))
                || !product_adjacent_unchecked(&self.host, &self.secondary, u, v)
            {
                report.push(
                    rules::SUBGRAPH_ADJACENCY,
                    vec![a + 1, b + 1],
                    format!(
                        "edge ({},{},{})-({},{},{}) is not a strong-product edge",
                        u.i, u.j, u.k, v.i, v.j, v.k
                    ),
                );
            }
        }
        report
    }

    /// Induced subgraph on the first `len` vertices in lexicographic order.
    /// Positions of surviving vertices are unchanged.
    pub fn lex_prefix(&self, len: usize) -> ProductSubgraph {
        let vertices = self.vertices[..len].to_vec();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| (a as usize) < len && (b as usize) < len)
            .collect();
        ProductSubgraph::from_sorted_parts(self.host.clone(), self.secondary.clone(), vertices, edges)
    }

    /// Forgets the product structure: vertices become 1..=n by position.
    pub fn to_simple_graph(&self) -> SimpleGraph {
        let edges: Vec<(u32, u32)> = self.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        SimpleGraph::from_edges(self.n() as u32, &edges).expect("canonical edges are simple")
    }
}

fn lookup(index: &PositionIndex, v: ProductVertex) -> Option<u32> {
    // Guard before slot arithmetic; out-of-space coordinates have no slot.
    if v.i == 0 || v.j == 0 || v.k == 0 {
        return None;
    }
    match index {
        PositionIndex::Dense { h, ell, slots } => {
            if v.j as u64 > *h || v.k as u64 > *ell {
                return None;
            }
            let slot = ((v.i as u64 - 1) * h + (v.j as u64 - 1)) * ell + (v.k as u64 - 1);
            if slot as usize >= slots.len() {
                return None;
            }
            match slots[slot as usize] {
                NO_VERTEX => None,
                pos => Some(pos),
            }
        }
        PositionIndex::Sparse(map) => map.get(&(v.i, v.j, v.k)).copied(),
    }
}

/// Secondary positions within `radius` of `j`, clipped to 1..=h, ascending.
#[inline]
fn window(j: u32, radius: u32, h: u32) -> std::ops::RangeInclusive<u32> {
    let lo = j.saturating_sub(radius).max(1);
    let hi = (j + radius).min(h);
    lo..=hi
}

/// Strong-product adjacency, coordinates assumed in range.
pub(crate) fn product_adjacent_unchecked(
    host: &ElimOrderedHost,
    secondary: &SecondaryFactor,
    u: ProductVertex,
    v: ProductVertex,
) -> bool {
    if u == v {
        return false;
    }
    let host_ok = u.i == v.i || host.has_edge(u.i, v.i);
    if !host_ok {
        return false;
    }
    match secondary {
        SecondaryFactor::Path { .. } | SecondaryFactor::PathClique { .. } => {
            // Clique coordinates are always equal-or-adjacent.
            u.j == v.j || u.j.abs_diff(v.j) == 1
        }
        SecondaryFactor::General(g) => u.j == v.j || g.has_edge(u.j, v.j),
    }
}

/// Free-function form of product adjacency with range checks, for callers
/// that have not assembled a subgraph yet.
pub fn product_adjacent(
    host: &ElimOrderedHost,
    secondary: &SecondaryFactor,
    u: ProductVertex,
    v: ProductVertex,
) -> Result<bool, ProductError> {
    for w in [u, v] {
        if w.i < 1
            || w.i > host.r()
            || w.j < 1
            || w.j > secondary.h()
            || w.k < 1
            || w.k > secondary.ell()
        {
            return Err(ProductError::InvalidVertex {
                i: w.i,
                j: w.j,
                k: w.k,
                r: host.r(),
                h: secondary.h(),
                ell: secondary.ell(),
            });
        }
    }
    Ok(product_adjacent_unchecked(host, secondary, u, v))
}

/// Bernoulli vertex/edge sampling of the product. Every product position is
/// kept with probability `q_vertex`; every product edge with both endpoints
/// kept is included with probability `p_edge`. Deterministic for a given
/// seed; the result is already canonical.
pub fn sample_subgraph(
    host: ElimOrderedHost,
    secondary: SecondaryFactor,
    q_vertex: f64,
    p_edge: f64,
    seed: u64,
) -> ProductSubgraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = host.r();
    let h = secondary.h();
    let ell = secondary.ell();

    let mut vertices = Vec::new();
    for i in 1..=r {
        for j in 1..=h {
            for k in 1..=ell {
                if rng.random::<f64>() < q_vertex {
                    vertices.push(ProductVertex::with_clique(i, j, k));
                }
            }
        }
    }

    // Edges: enumerate each kept vertex's lexicographically smaller product
    // neighbours in a fixed order, drawing once per candidate pair.
    let probe = ProductSubgraph::from_sorted_parts(
        host,
        secondary,
        vertices,
        Vec::new(),
    );
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for pos in 0..probe.n() as u32 {
        let v = probe.vertex_at(pos);
        let candidate = |w_pos: Option<u32>, edges: &mut Vec<(u32, u32)>, rng: &mut ChaCha8Rng| {
            if let Some(w) = w_pos {
                if rng.random::<f64>() < p_edge {
                    edges.push((w, pos));
                }
            }
        };
        match probe.secondary() {
            SecondaryFactor::Path { .. } => {
                if v.j >= 2 {
                    candidate(probe.lookup_pos(v.i, v.j - 1, 1), &mut edges, &mut rng);
                }
                for &a in probe.host().back_clique(v.i) {
                    for jj in window(v.j, 1, h) {
                        candidate(probe.lookup_pos(a, jj, 1), &mut edges, &mut rng);
                    }
                }
            }
            SecondaryFactor::PathClique { ell, .. } => {
                for kk in 1..v.k {
                    candidate(probe.lookup_pos(v.i, v.j, kk), &mut edges, &mut rng);
                }
                if v.j >= 2 {
                    for kk in 1..=*ell {
                        candidate(probe.lookup_pos(v.i, v.j - 1, kk), &mut edges, &mut rng);
                    }
                }
                for &a in probe.host().back_clique(v.i) {
                    for jj in window(v.j, 1, h) {
                        for kk in 1..=*ell {
                            candidate(probe.lookup_pos(a, jj, kk), &mut edges, &mut rng);
                        }
                    }
                }
            }
            SecondaryFactor::General(g) => {
                for &b in g.neighbours(v.j) {
                    if b < v.j {
                        candidate(probe.lookup_pos(v.i, b, 1), &mut edges, &mut rng);
                    }
                }
                for &a in probe.host().back_clique(v.i) {
                    candidate(probe.lookup_pos(a, v.j, 1), &mut edges, &mut rng);
                    for &b in g.neighbours(v.j) {
                        candidate(probe.lookup_pos(a, b, 1), &mut edges, &mut rng);
                    }
                }
            }
        }
    }

    let ProductSubgraph {
        host, secondary, vertices, ..
    } = probe;
    ProductSubgraph::from_sorted_parts(host, secondary, vertices, edges)
}
