//! Exact odd chromatic numbers by exhaustive search.
//!
//! The oracle minimizes the number of distinct colours over all proper odd
//! colourings. Colourings are enumerated in canonical form — a vertex may
//! only use colours 1..=(1 + largest colour used so far) — so each colour
//! partition is visited once. Properness prunes branches as soon as an edge
//! inside the coloured prefix goes monochromatic; oddness cannot be pruned
//! mid-search (parities keep flipping as neighbours are coloured), so it is
//! checked only on complete assignments. A branch whose largest colour
//! already matches the best known solution cannot improve it and is cut.
//!
//! Strictly desk-scale: the vertex cap makes the tool refuse rather than
//! hang.

use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::graph::SimpleGraph;

pub const DEFAULT_VERTEX_CAP: u32 = 12;

/// Hard ceiling on the configurable cap; the leaf parity check uses a
/// 128-bit mask and anything near this size is out of reach anyway.
pub const MAX_VERTEX_CAP: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the cap of {cap}; raise the cap to force the search")]
    VertexCapExceeded { n: u32, cap: u32 },
    #[error("vertex cap {cap} above the supported maximum of {max}")]
    CapTooLarge { cap: u32, max: u32 },
}

/// Smallest `c <= max_colours` such that a proper odd colouring of `g`
/// using `c` colours exists, or `None` if no such `c` exists.
pub fn exact_odd_chromatic(
    g: &SimpleGraph,
    max_colours: u32,
    vertex_cap: u32,
) -> Result<Option<u32>, OracleError> {
    if vertex_cap > MAX_VERTEX_CAP {
        return Err(OracleError::CapTooLarge {
            cap: vertex_cap,
            max: MAX_VERTEX_CAP,
        });
    }
    let n = g.n();
    if n > vertex_cap {
        return Err(OracleError::VertexCapExceeded { n, cap: vertex_cap });
    }
    if n == 0 {
        return Ok(Some(0));
    }
    // Colouring every vertex distinctly is always proper and odd, so the
    // optimum is at most n; nothing above max_colours is interesting.
    let hard_cap = max_colours.min(n);
    if hard_cap == 0 {
        return Ok(None);
    }

    let adj: Vec<Vec<u32>> = (1..=n).map(|v| g.neighbours(v).to_vec()).collect();
    let search = Search {
        adj: &adj,
        n: n as usize,
        hard_cap: hard_cap as u8,
        best: AtomicU32::new(u32::MAX),
    };

    // Canonical prefixes of bounded depth form the work items for the
    // parallel split; each is completed independently and the results
    // merge by minimum, so the answer does not depend on scheduling.
    let depth = (n as usize).min(5);
    let mut prefixes = Vec::new();
    search.enumerate_prefixes(&mut vec![0u8; n as usize], 0, depth, 0, &mut prefixes);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        prefixes.par_iter().for_each(|(colours, max_used)| {
            let mut colours = colours.clone();
            search.descend(&mut colours, depth, *max_used);
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (colours, max_used) in &prefixes {
            let mut colours = colours.clone();
            search.descend(&mut colours, depth, *max_used);
        }
    }

    match search.best.load(Ordering::Relaxed) {
        u32::MAX => Ok(None),
        best => Ok(Some(best)),
    }
}

struct Search<'a> {
    adj: &'a [Vec<u32>],
    n: usize,
    hard_cap: u8,
    best: AtomicU32,
}

impl Search<'_> {
    fn enumerate_prefixes(
        &self,
        colours: &mut Vec<u8>,
        v: usize,
        depth: usize,
        max_used: u8,
        out: &mut Vec<(Vec<u8>, u8)>,
    ) {
        if v == depth {
            out.push((colours.clone(), max_used));
            return;
        }
        let limit = (max_used + 1).min(self.hard_cap);
        for c in 1..=limit {
            if self.clashes(colours, v, c) {
                continue;
            }
            colours[v] = c;
            self.enumerate_prefixes(colours, v + 1, depth, max_used.max(c), out);
            colours[v] = 0;
        }
    }

    /// True if an already-coloured neighbour of `v` holds colour `c`.
    /// Neighbour ids are 1-based; vertices at 0-based index below `v` are
    /// the coloured ones.
    #[inline]
    fn clashes(&self, colours: &[u8], v: usize, c: u8) -> bool {
        self.adj[v]
            .iter()
            .any(|&w| (w as usize - 1) < v && colours[w as usize - 1] == c)
    }

    fn descend(&self, colours: &mut Vec<u8>, v: usize, max_used: u8) {
        if max_used as u32 >= self.best.load(Ordering::Relaxed) {
            return;
        }
        if v == self.n {
            if self.is_odd(colours) {
                self.best.fetch_min(max_used as u32, Ordering::Relaxed);
            }
            return;
        }
        let limit = (max_used + 1).min(self.hard_cap);
        for c in 1..=limit {
            if self.clashes(colours, v, c) {
                continue;
            }
            colours[v] = c;
            self.descend(colours, v + 1, max_used.max(c));
            colours[v] = 0;
        }
    }

    fn is_odd(&self, colours: &[u8]) -> bool {
        for v in 0..self.n {
            if self.adj[v].is_empty() {
                continue;
            }
            let mut parity = 0u128;
            for &w in &self.adj[v] {
                parity ^= 1u128 << (colours[w as usize - 1] - 1);
            }
            if parity == 0 {
                return false;
            }
        }
        true
    }
}
