//! Independent verifiers for properness, oddness, and support-set colour
//! distinctness.
//!
//! These recompute everything from the instance and the finished colouring;
//! none of the greedy engine's incremental state is consulted. The
//! support-distinctness check enumerates candidate support centres by
//! inverting the template around each subgraph vertex, so it never scans
//! the full product space.

use thiserror::Error;

use crate::colouring::Colouring;
use crate::par;
use crate::product::{ProductSubgraph, ProductVertex};
use crate::report::{rules, ValidationReport, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContractError {
    #[error("colouring covers {found} vertices, instance has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("colour {colour} at position {position} outside palette 1..={palette}")]
    ColourOutOfRange {
        position: u32,
        colour: u32,
        palette: u32,
    },
}

/// Per-vertex witness colours for oddness: for every non-isolated vertex,
/// a colour with odd multiplicity in its neighbourhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddWitness {
    pub per_vertex: Vec<Option<u32>>,
}

fn check_contract(g: &ProductSubgraph, c: &Colouring) -> Result<(), ContractError> {
    if c.len() != g.n() {
        return Err(ContractError::LengthMismatch {
            expected: g.n(),
            found: c.len(),
        });
    }
    for (pos, &colour) in c.colours().iter().enumerate() {
        if colour < 1 || colour > c.palette() {
            return Err(ContractError::ColourOutOfRange {
                position: pos as u32 + 1,
                colour,
                palette: c.palette(),
            });
        }
    }
    Ok(())
}

/// Checks that no edge is monochromatic.
pub fn verify_proper(
    g: &ProductSubgraph,
    c: &Colouring,
) -> Result<ValidationReport, ContractError> {
    check_contract(g, c)?;
    let edges = g.edges();
    let found = par::map_range(edges.len(), |e| {
        let (a, b) = edges[e];
        if c.get(a) == c.get(b) {
            let (u, v) = (g.vertex_at(a), g.vertex_at(b));
            Some(Violation {
                rule: rules::COLOURING_PROPER,
                indices: vec![a + 1, b + 1],
                message: format!("edge {u}-{v} is monochromatic in colour {}", c.get(a)),
            })
        } else {
            None
        }
    });
    Ok(ValidationReport {
        violations: found.into_iter().flatten().collect(),
    })
}

/// Checks that every non-isolated vertex sees some colour an odd number of
/// times. On success the witness records one such colour per vertex.
pub fn verify_odd(
    g: &ProductSubgraph,
    c: &Colouring,
) -> Result<(ValidationReport, Option<OddWitness>), ContractError> {
    check_contract(g, c)?;
    let per_vertex = par::map_range(g.n(), |pos| odd_check_one(g, c, pos as u32));
    let mut report = ValidationReport::new();
    let mut witness = Vec::with_capacity(g.n());
    for entry in per_vertex {
        match entry {
            Ok(w) => witness.push(w),
            Err(violation) => {
                report.violations.push(violation);
                witness.push(None);
            }
        }
    }
    let witness = report.ok().then_some(OddWitness {
        per_vertex: witness,
    });
    Ok((report, witness))
}

/// Smallest odd-multiplicity colour around `pos`, or a violation carrying
/// the full multiplicity histogram.
fn odd_check_one(g: &ProductSubgraph, c: &Colouring, pos: u32) -> Result<Option<u32>, Violation> {
    let neighbours = g.neighbours_of(pos);
    if neighbours.is_empty() {
        return Ok(None);
    }
    let mut seen: Vec<u32> = neighbours.iter().map(|&w| c.get(w)).collect();
    seen.sort_unstable();
    let mut histogram = Vec::new();
    let mut odd_colour = None;
    let mut idx = 0;
    while idx < seen.len() {
        let mut run = idx + 1;
        while run < seen.len() && seen[run] == seen[idx] {
            run += 1;
        }
        let count = run - idx;
        histogram.push((seen[idx], count));
        if count % 2 == 1 && odd_colour.is_none() {
            odd_colour = Some(seen[idx]);
        }
        idx = run;
    }
    match odd_colour {
        Some(colour) => Ok(Some(colour)),
        None => {
            let hist = histogram
                .iter()
                .map(|(colour, count)| format!("{colour}:{count}"))
                .collect::<Vec<_>>()
                .join(" ");
            Err(Violation {
                rule: rules::COLOURING_ODD,
                indices: vec![pos + 1],
                message: format!(
                    "vertex {} sees every colour an even number of times ({hist})",
                    g.vertex_at(pos)
                ),
            })
        }
    }
}

/// Checks that every support set whose intersection with V(G) has at least
/// two vertices is rainbow.
pub fn verify_support_distinct(
    g: &ProductSubgraph,
    c: &Colouring,
) -> Result<ValidationReport, ContractError> {
    check_contract(g, c)?;
    let mut centres: Vec<ProductVertex> = Vec::new();
    for &v in g.vertices() {
        g.for_each_support_centre(v, |u| centres.push(u));
    }
    centres.sort_unstable();
    centres.dedup();

    let found = par::map_slice(&centres, |&u| {
        let mut members: Vec<(u32, u32)> = Vec::new(); // (colour, position)
        g.for_each_support_position(u, |pos| members.push((c.get(pos), pos)));
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0].0 == w[1].0 {
                let (pa, pb) = (w[0].1, w[1].1);
                return Some(Violation {
                    rule: rules::COLOURING_SUPPORT,
                    indices: vec![pa + 1, pb + 1],
                    message: format!(
                        "support set of {u} assigns colour {} to both {} and {}",
                        w[0].0,
                        g.vertex_at(pa),
                        g.vertex_at(pb)
                    ),
                });
            }
        }
        None
    });
    Ok(ValidationReport {
        violations: found.into_iter().flatten().collect(),
    })
}
