//! The greedy colouring engine.
//!
//! Vertices are processed in lexicographic order. For the current vertex v
//! two forbidden colour sets are collected:
//!
//! * X — the colours already placed on the risk set R(v). Avoiding X keeps
//!   every support set rainbow, which in turn keeps the colouring proper.
//! * Y — for each already-coloured neighbour w of v, if exactly one colour
//!   has odd multiplicity among w's coloured neighbours, that colour is
//!   added to Y. Avoiding Y preserves oddness at every earlier vertex.
//!
//! v then receives the smallest palette colour outside X ∪ Y. The palette
//! sizes per variant are chosen so that |X| + |Y| is always strictly below
//! the palette, so a free colour exists for every valid instance; running
//! out of colours signals a bug or an invalid input rather than a normal
//! outcome.
//!
//! Per-vertex parity bookkeeping (a colour bitmask plus an odd-colour count
//! and xor) makes the Y lookup O(1) per neighbour, so a run costs
//! O(Σ_v (|R(v)| + deg v) + n·palette/64) plus the hash-free position
//! lookups inside the risk templates.

use thiserror::Error;

use crate::product::{ProductSubgraph, ProductVertex, SecondaryFactor};

/// A total colour assignment, parallel to the instance's canonical vertex
/// order. Colours are 1-based and bounded by `palette`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    palette: u32,
    colours: Vec<u32>,
}

impl Colouring {
    pub fn new(palette: u32, colours: Vec<u32>) -> Self {
        Self { palette, colours }
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn get(&self, pos: u32) -> u32 {
        self.colours[pos as usize]
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Number of distinct colours actually used.
    pub fn colours_used(&self) -> u32 {
        let mut seen = vec![false; self.palette as usize + 1];
        let mut used = 0;
        for &c in &self.colours {
            let slot = (c as usize).min(self.palette as usize);
            if !seen[slot] {
                seen[slot] = true;
                used += 1;
            }
        }
        used
    }
}

/// Telemetry from one greedy run: distinct colours used and the largest
/// forbidden sets seen at any step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    pub colours_used: u32,
    pub max_x: u32,
    pub max_y: u32,
    pub max_xy: u32,
    pub steps: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("instance has a {found} secondary factor, expected {expected}")]
    VariantMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("palette of size {palette} exhausted at vertex ({i},{j},{k}); this signals a bug or an invalid instance")]
    PaletteExhausted { palette: u32, i: u32, j: u32, k: u32 },
    #[error("partial colouring covers {found} vertices, expected the {expected} lex-smaller ones")]
    PartialDomainMismatch { expected: usize, found: usize },
    #[error("vertex ({i},{j},{k}) is not in the subgraph")]
    VertexNotInSubgraph { i: u32, j: u32, k: u32 },
}

/// The palette size guaranteed to suffice for the instance's variant.
pub fn default_palette(g: &ProductSubgraph) -> u32 {
    let t = g.host().t();
    match g.secondary() {
        SecondaryFactor::Path { .. } => 8 * t + 4,
        SecondaryFactor::PathClique { ell, .. } => 8 * ell * t + 5 * ell - 1,
        SecondaryFactor::General(i) => {
            let d = i.max_degree();
            (d * d + d) * (t + 1) + 2 * t + 1
        }
    }
}

/// Colours a subgraph of H ⊠ P with palette 8t+4.
pub fn colour_ttree_path(g: &ProductSubgraph) -> Result<(Colouring, RunStats), ColouringError> {
    expect_variant(g, "path")?;
    colour_with_palette(g, default_palette(g))
}

/// Colours a subgraph of H ⊠ P ⊠ K_ℓ with palette 8ℓt+5ℓ−1.
pub fn colour_ttree_path_clique(
    g: &ProductSubgraph,
) -> Result<(Colouring, RunStats), ColouringError> {
    expect_variant(g, "path_clique")?;
    colour_with_palette(g, default_palette(g))
}

/// Colours a subgraph of H ⊠ I with palette (Δ²+Δ)(t+1)+2t+1.
pub fn colour_ttree_maxdeg(g: &ProductSubgraph) -> Result<(Colouring, RunStats), ColouringError> {
    expect_variant(g, "general")?;
    colour_with_palette(g, default_palette(g))
}

/// Variant-dispatching convenience wrapper.
pub fn colour_subgraph(g: &ProductSubgraph) -> Result<(Colouring, RunStats), ColouringError> {
    colour_with_palette(g, default_palette(g))
}

fn expect_variant(g: &ProductSubgraph, expected: &'static str) -> Result<(), ColouringError> {
    let found = g.secondary().kind_name();
    if found == expected {
        Ok(())
    } else {
        Err(ColouringError::VariantMismatch { expected, found })
    }
}

/// Word-mask over colours 1..=palette.
struct ColourMask {
    words: Vec<u64>,
    distinct: u32,
}

impl ColourMask {
    fn new(word_count: usize) -> Self {
        Self {
            words: vec![0; word_count],
            distinct: 0,
        }
    }

    #[inline]
    fn insert(&mut self, colour: u32) {
        let bit = colour as usize - 1;
        let word = &mut self.words[bit / 64];
        let mask = 1u64 << (bit % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.distinct += 1;
        }
    }

    fn clear(&mut self) {
        self.words.fill(0);
        self.distinct = 0;
    }
}

/// Runs the greedy pass with an explicit palette size. Exposed so callers
/// can experiment below the guaranteed bound; exhaustion is then a
/// reportable outcome rather than a bug.
pub fn colour_with_palette(
    g: &ProductSubgraph,
    palette: u32,
) -> Result<(Colouring, RunStats), ColouringError> {
    assert!(palette >= 1, "palette must have at least one colour");
    let n = g.n();
    let words = (palette as usize).div_ceil(64);

    let mut colours = vec![0u32; n];
    // Parity bookkeeping per vertex: bitmask of colours with odd
    // multiplicity among coloured neighbours, their count, and their xor
    // (the xor names the unique odd colour when the count is 1).
    let mut parity = vec![0u64; n * words];
    let mut odd_count = vec![0u32; n];
    let mut odd_xor = vec![0u32; n];

    let mut mask_x = ColourMask::new(words);
    let mut mask_y = ColourMask::new(words);
    let mut used = ColourMask::new(words);
    let mut stats = RunStats::default();

    for pos in 0..n as u32 {
        let v = g.vertex_at(pos);

        mask_x.clear();
        g.for_each_risk_position(v, |w| {
            if w < pos {
                mask_x.insert(colours[w as usize]);
            }
        });

        mask_y.clear();
        for &w in g.neighbours_of(pos) {
            if w < pos && odd_count[w as usize] == 1 {
                mask_y.insert(odd_xor[w as usize]);
            }
        }

        let mut chosen = None;
        let mut xy = 0u32;
        for word in 0..words {
            let blocked = mask_x.words[word] | mask_y.words[word];
            xy += blocked.count_ones();
            if chosen.is_none() {
                let mut free = !blocked;
                if word == words - 1 && !(palette as usize).is_multiple_of(64) {
                    free &= (1u64 << (palette % 64)) - 1;
                }
                if free != 0 {
                    chosen = Some(word as u32 * 64 + free.trailing_zeros() + 1);
                }
            }
        }
        let colour = chosen.ok_or(ColouringError::PaletteExhausted {
            palette,
            i: v.i,
            j: v.j,
            k: v.k,
        })?;

        colours[pos as usize] = colour;
        used.insert(colour);
        stats.max_x = stats.max_x.max(mask_x.distinct);
        stats.max_y = stats.max_y.max(mask_y.distinct);
        stats.max_xy = stats.max_xy.max(xy);
        stats.steps += 1;

        for &w in g.neighbours_of(pos) {
            if w < pos {
                flip(&mut parity, &mut odd_count, &mut odd_xor, words, w, colour);
                flip(
                    &mut parity,
                    &mut odd_count,
                    &mut odd_xor,
                    words,
                    pos,
                    colours[w as usize],
                );
            }
        }
    }

    stats.colours_used = used.distinct;
    Ok((Colouring::new(palette, colours), stats))
}

#[inline]
fn flip(
    parity: &mut [u64],
    odd_count: &mut [u32],
    odd_xor: &mut [u32],
    words: usize,
    vertex: u32,
    colour: u32,
) {
    let bit = colour as usize - 1;
    let word = &mut parity[vertex as usize * words + bit / 64];
    let mask = 1u64 << (bit % 64);
    *word ^= mask;
    if *word & mask != 0 {
        odd_count[vertex as usize] += 1;
    } else {
        odd_count[vertex as usize] -= 1;
    }
    odd_xor[vertex as usize] ^= colour;
}

/// Recomputes the forbidden sets (X, Y) for `v` from scratch, given the
/// colours of exactly the lexicographically smaller vertices. This is the
/// reference route for the engine's incremental bookkeeping; both are
/// returned as sorted colour lists.
pub fn forbidden_sets(
    g: &ProductSubgraph,
    v: ProductVertex,
    partial: &[u32],
) -> Result<(Vec<u32>, Vec<u32>), ColouringError> {
    let pos = g
        .position_of(v)
        .ok_or(ColouringError::VertexNotInSubgraph {
            i: v.i,
            j: v.j,
            k: v.k,
        })?;
    if partial.len() != pos as usize {
        return Err(ColouringError::PartialDomainMismatch {
            expected: pos as usize,
            found: partial.len(),
        });
    }

    let mut x = Vec::new();
    g.for_each_risk_position(v, |w| {
        if w < pos {
            x.push(partial[w as usize]);
        }
    });
    x.sort_unstable();
    x.dedup();

    let mut y = Vec::new();
    for &w in g.neighbours_of(pos) {
        if w >= pos {
            continue;
        }
        // Odd-multiplicity colours among w's coloured neighbours.
        let mut seen: Vec<u32> = g
            .neighbours_of(w)
            .iter()
            .filter(|&&u| u < pos)
            .map(|&u| partial[u as usize])
            .collect();
        seen.sort_unstable();
        let mut odd = Vec::new();
        let mut idx = 0;
        while idx < seen.len() {
            let mut run = idx + 1;
            while run < seen.len() && seen[run] == seen[idx] {
                run += 1;
            }
            if (run - idx) % 2 == 1 {
                odd.push(seen[idx]);
            }
            idx = run;
        }
        if odd.len() == 1 {
            y.push(odd[0]);
        }
    }
    y.sort_unstable();
    y.dedup();
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::ElimOrderedHost;
    use crate::product::sample_subgraph;
    use crate::verify::{verify_odd, verify_proper, verify_support_distinct};

    fn edge_host() -> ElimOrderedHost {
        ElimOrderedHost::new(1, vec![vec![], vec![1]])
    }

    /// The three-vertex path (1,1)-(1,2)-(1,3) inside a single host column.
    fn path3() -> ProductSubgraph {
        let host = ElimOrderedHost::new(1, vec![vec![]]);
        sample_subgraph(host, SecondaryFactor::Path { h: 3 }, 1.0, 1.0, 0)
    }

    #[test]
    fn forbidden_sets_of_first_vertex_are_empty() {
        let g = path3();
        let (x, y) = forbidden_sets(&g, ProductVertex::new(1, 1), &[]).unwrap();
        assert!(x.is_empty());
        assert!(y.is_empty());
    }

    #[test]
    fn forbidden_sets_single_edge() {
        // G is the diagonal-free edge (1,1)-(2,1); colouring (1,1) with 1
        // forbids 1 via the risk set, and Y stays empty because (1,1) has
        // no coloured neighbours of its own.
        let host = edge_host();
        let vertices = vec![ProductVertex::new(1, 1), ProductVertex::new(2, 1)];
        let edges = vec![(ProductVertex::new(1, 1), ProductVertex::new(2, 1))];
        let g = ProductSubgraph::from_parts(host, SecondaryFactor::Path { h: 1 }, vertices, edges);
        assert!(g.validate().ok());
        let (x, y) = forbidden_sets(&g, ProductVertex::new(2, 1), &[1]).unwrap();
        assert_eq!(x, vec![1]);
        assert!(y.is_empty());
    }

    #[test]
    fn forbidden_sets_path_interior() {
        let g = path3();
        let (x, y) = forbidden_sets(&g, ProductVertex::new(1, 3), &[1, 2]).unwrap();
        assert_eq!(x, vec![1, 2]);
        assert_eq!(y, vec![1]);
    }

    #[test]
    fn forbidden_sets_contract_errors() {
        let g = path3();
        let err = forbidden_sets(&g, ProductVertex::new(1, 3), &[1]);
        assert_eq!(
            err,
            Err(ColouringError::PartialDomainMismatch {
                expected: 2,
                found: 1
            })
        );
        let err = forbidden_sets(&g, ProductVertex::new(2, 1), &[]);
        assert!(matches!(
            err,
            Err(ColouringError::VertexNotInSubgraph { .. })
        ));
    }

    #[test]
    fn colours_path_of_three_with_three_colours() {
        let g = path3();
        let (colouring, stats) = colour_ttree_path(&g).unwrap();
        assert_eq!(colouring.colours(), &[1, 2, 3]);
        assert_eq!(stats.colours_used, 3);
        assert_eq!(colouring.palette(), 12);
        assert!(verify_proper(&g, &colouring).unwrap().ok());
        assert!(verify_odd(&g, &colouring).unwrap().0.ok());
        assert!(verify_support_distinct(&g, &colouring).unwrap().ok());
    }

    #[test]
    fn empty_and_single_vertex() {
        let host = edge_host();
        let empty = ProductSubgraph::from_parts(
            host.clone(),
            SecondaryFactor::Path { h: 2 },
            Vec::new(),
            Vec::new(),
        );
        let (colouring, stats) = colour_ttree_path(&empty).unwrap();
        assert!(colouring.is_empty());
        assert_eq!(stats.colours_used, 0);
        assert_eq!(stats.steps, 0);

        let single = ProductSubgraph::from_parts(
            host,
            SecondaryFactor::Path { h: 2 },
            vec![ProductVertex::new(2, 2)],
            Vec::new(),
        );
        let (colouring, stats) = colour_ttree_path(&single).unwrap();
        assert_eq!(colouring.colours(), &[1]);
        assert_eq!(stats.colours_used, 1);
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let g = path3();
        assert_eq!(
            colour_ttree_path_clique(&g),
            Err(ColouringError::VariantMismatch {
                expected: "path_clique",
                found: "path"
            })
        );
        assert!(colour_ttree_maxdeg(&g).is_err());
    }

    #[test]
    fn maxdeg_palette_formulas() {
        use crate::graph::SimpleGraph;
        use crate::host::random_t_tree;
        for t in 1..=2u32 {
            let host = random_t_tree(t, 5, 3).unwrap();
            // Δ=0: a single-vertex factor leaves G inside one host layer.
            let g0 = sample_subgraph(
                host.clone(),
                SecondaryFactor::General(SimpleGraph::path(1)),
                1.0,
                1.0,
                1,
            );
            assert_eq!(default_palette(&g0), 2 * t + 1);
            let (c0, _) = colour_ttree_maxdeg(&g0).unwrap();
            assert!(verify_proper(&g0, &c0).unwrap().ok());
            assert!(verify_odd(&g0, &c0).unwrap().0.ok());

            // Δ=1 (K_2): (1+1)(t+1)+2t+1 = 4t+3.
            let g1 = sample_subgraph(
                host.clone(),
                SecondaryFactor::General(SimpleGraph::path(2)),
                1.0,
                1.0,
                1,
            );
            assert_eq!(default_palette(&g1), 4 * t + 3);

            // Δ=2 (longer path): 6(t+1)+2t+1 = 8t+7.
            let g2 = sample_subgraph(
                host,
                SecondaryFactor::General(SimpleGraph::path(6)),
                1.0,
                1.0,
                1,
            );
            assert_eq!(default_palette(&g2), 8 * t + 7);
            let (c2, _) = colour_ttree_maxdeg(&g2).unwrap();
            assert!(verify_proper(&g2, &c2).unwrap().ok());
            assert!(verify_odd(&g2, &c2).unwrap().0.ok());
            assert!(verify_support_distinct(&g2, &c2).unwrap().ok());
        }
    }

    #[test]
    fn path_clique_single_vertex() {
        let host = ElimOrderedHost::new(1, vec![vec![]]);
        let g = ProductSubgraph::from_parts(
            host,
            SecondaryFactor::PathClique { h: 2, ell: 3 },
            vec![ProductVertex::with_clique(1, 1, 1)],
            Vec::new(),
        );
        let (colouring, _) = colour_ttree_path_clique(&g).unwrap();
        assert_eq!(colouring.colours(), &[1]);
    }

    #[test]
    fn path_clique_full_product_within_bound() {
        use crate::host::random_t_tree;
        let host = random_t_tree(2, 3, 0).unwrap(); // triangle
        let g = sample_subgraph(
            host,
            SecondaryFactor::PathClique { h: 2, ell: 2 },
            1.0,
            1.0,
            0,
        );
        let (colouring, stats) = colour_ttree_path_clique(&g).unwrap();
        assert_eq!(colouring.palette(), 8 * 2 * 2 + 5 * 2 - 1); // 41
        assert!(stats.colours_used <= 41);
        assert!(verify_proper(&g, &colouring).unwrap().ok());
        assert!(verify_odd(&g, &colouring).unwrap().0.ok());
        assert!(verify_support_distinct(&g, &colouring).unwrap().ok());
    }

    #[test]
    fn palette_one_exhausts_on_an_edge() {
        let host = ElimOrderedHost::new(1, vec![vec![]]);
        let g = sample_subgraph(host, SecondaryFactor::Path { h: 2 }, 1.0, 1.0, 0);
        let err = colour_with_palette(&g, 1);
        assert_eq!(
            err,
            Err(ColouringError::PaletteExhausted {
                palette: 1,
                i: 1,
                j: 2,
                k: 1
            })
        );
    }
}
