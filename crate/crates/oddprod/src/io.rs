//! On-disk formats: JSON instance and colouring documents, DOT export, and
//! the run-statistics CSV.
//!
//! Documents use 1-based indices throughout, matching the x_1..x_r,
//! y_1..y_h convention; path sentinel positions are never serialized.
//! Instance edges reference 1-based positions in the document's vertex
//! list, so a dangling endpoint cannot be written at all. Serialization is
//! canonical — vertices lex-sorted, edges sorted low-position-first — and
//! byte-stable for a given instance.

use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::{Colouring, RunStats};
use crate::graph::SimpleGraph;
use crate::host::ElimOrderedHost;
use crate::product::{ProductSubgraph, ProductVertex, SecondaryFactor};
use crate::report::{rules, ValidationReport};

pub const INSTANCE_FORMAT_VERSION: u32 = 1;
pub const COLOURING_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("semantic error [{rule}]: {message}")]
    Semantic { rule: &'static str, message: String },
    #[error("document failed validation: {0}")]
    Invalid(ValidationReport),
}

impl LoadError {
    fn syntax(err: &serde_json::Error) -> Self {
        LoadError::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    /// The machine-readable rule id of the first failure.
    pub fn rule(&self) -> &'static str {
        match self {
            LoadError::Syntax { .. } => rules::DOC_SYNTAX,
            LoadError::Version { .. } => rules::DOC_VERSION,
            LoadError::Semantic { rule, .. } => rule,
            LoadError::Invalid(report) => report.first().map_or(rules::DOC_SHAPE, |v| v.rule),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    format_version: u32,
    host: HostDoc,
    secondary: SecondaryDoc,
    vertices: Vec<Vec<u32>>,
    edges: Vec<[u32; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HostDoc {
    t: u32,
    r: u32,
    back_cliques: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SecondaryDoc {
    kind: String,
    h: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ColouringDoc {
    format_version: u32,
    palette: u32,
    colours: Vec<u32>,
}

/// Generic graph document accepted by the oracle.
#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    format_version: u32,
    n: u32,
    edges: Vec<[u32; 2]>,
}

/// Parses, validates, and canonicalizes an instance document.
pub fn load_instance(text: &str) -> Result<ProductSubgraph, LoadError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| LoadError::syntax(&e))?;
    if doc.format_version != INSTANCE_FORMAT_VERSION {
        return Err(LoadError::Version {
            found: doc.format_version,
            expected: INSTANCE_FORMAT_VERSION,
        });
    }

    if doc.host.r as usize != doc.host.back_cliques.len() {
        return Err(LoadError::Semantic {
            rule: rules::DOC_SHAPE,
            message: format!(
                "host.r is {} but back_cliques lists {} vertices",
                doc.host.r,
                doc.host.back_cliques.len()
            ),
        });
    }
    let host = ElimOrderedHost::new(doc.host.t, doc.host.back_cliques);
    let host_report = host.validate();
    if !host_report.ok() {
        return Err(LoadError::Invalid(host_report));
    }

    let secondary = match doc.secondary.kind.as_str() {
        "path" => SecondaryFactor::Path { h: doc.secondary.h },
        "path_clique" => {
            let ell = doc.secondary.ell.ok_or(LoadError::Semantic {
                rule: rules::DOC_KIND,
                message: "path_clique secondary needs an ell field".into(),
            })?;
            if ell < 1 {
                return Err(LoadError::Semantic {
                    rule: rules::SECONDARY_SHAPE,
                    message: "ell must be at least 1".into(),
                });
            }
            SecondaryFactor::PathClique {
                h: doc.secondary.h,
                ell,
            }
        }
        "general" => {
            let adjacency = doc.secondary.adjacency.ok_or(LoadError::Semantic {
                rule: rules::DOC_KIND,
                message: "general secondary needs an adjacency field".into(),
            })?;
            if adjacency.len() as u32 != doc.secondary.h {
                return Err(LoadError::Semantic {
                    rule: rules::DOC_SHAPE,
                    message: format!(
                        "secondary.h is {} but adjacency lists {} vertices",
                        doc.secondary.h,
                        adjacency.len()
                    ),
                });
            }
            let graph = SimpleGraph::from_adjacency(adjacency).map_err(|e| LoadError::Semantic {
                rule: rules::SECONDARY_SHAPE,
                message: e.to_string(),
            })?;
            SecondaryFactor::General(graph)
        }
        other => {
            return Err(LoadError::Semantic {
                rule: rules::DOC_KIND,
                message: format!("unknown secondary kind {other:?}"),
            })
        }
    };

    let want_arity = if matches!(secondary, SecondaryFactor::PathClique { .. }) {
        3
    } else {
        2
    };
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for (pos, coords) in doc.vertices.iter().enumerate() {
        if coords.len() != want_arity {
            return Err(LoadError::Semantic {
                rule: rules::SUBGRAPH_VERTEX_RANGE,
                message: format!(
                    "vertex {} has {} coordinates, expected {want_arity}",
                    pos + 1,
                    coords.len()
                ),
            });
        }
        let k = if want_arity == 3 { coords[2] } else { 1 };
        vertices.push(ProductVertex::with_clique(coords[0], coords[1], k));
    }

    // Edges reference 1-based positions in the document's vertex list.
    let mut edge_pairs = Vec::with_capacity(doc.edges.len());
    for (e, &[a, b]) in doc.edges.iter().enumerate() {
        let lookup = |p: u32| -> Result<ProductVertex, LoadError> {
            if p < 1 || p as usize > vertices.len() {
                Err(LoadError::Semantic {
                    rule: rules::SUBGRAPH_ENDPOINT,
                    message: format!(
                        "edge {} references position {p}, vertex list has {} entries",
                        e + 1,
                        vertices.len()
                    ),
                })
            } else {
                Ok(vertices[p as usize - 1])
            }
        };
        edge_pairs.push((lookup(a)?, lookup(b)?));
    }

    let g = ProductSubgraph::from_parts(host, secondary, vertices, edge_pairs);
    let report = g.validate();
    if !report.ok() {
        return Err(LoadError::Invalid(report));
    }
    Ok(g)
}

/// Serializes an instance in canonical form, newline-terminated.
pub fn save_instance(g: &ProductSubgraph) -> String {
    let secondary = match g.secondary() {
        SecondaryFactor::Path { h } => SecondaryDoc {
            kind: "path".into(),
            h: *h,
            ell: None,
            adjacency: None,
        },
        SecondaryFactor::PathClique { h, ell } => SecondaryDoc {
            kind: "path_clique".into(),
            h: *h,
            ell: Some(*ell),
            adjacency: None,
        },
        SecondaryFactor::General(graph) => SecondaryDoc {
            kind: "general".into(),
            h: graph.n(),
            ell: None,
            adjacency: Some(graph.adjacency().to_vec()),
        },
    };
    let with_k = matches!(g.secondary(), SecondaryFactor::PathClique { .. });
    let vertices = g
        .vertices()
        .iter()
        .map(|v| {
            if with_k {
                vec![v.i, v.j, v.k]
            } else {
                vec![v.i, v.j]
            }
        })
        .collect();
    let edges = g.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect();
    let doc = InstanceDoc {
        format_version: INSTANCE_FORMAT_VERSION,
        host: HostDoc {
            t: g.host().t(),
            r: g.host().r(),
            back_cliques: g.host().back_cliques().to_vec(),
        },
        secondary,
        vertices,
        edges,
    };
    let mut text = serde_json::to_string(&doc).expect("instance serialization cannot fail");
    text.push('\n');
    text
}

pub fn load_colouring(text: &str) -> Result<Colouring, LoadError> {
    let doc: ColouringDoc = serde_json::from_str(text).map_err(|e| LoadError::syntax(&e))?;
    if doc.format_version != COLOURING_FORMAT_VERSION {
        return Err(LoadError::Version {
            found: doc.format_version,
            expected: COLOURING_FORMAT_VERSION,
        });
    }
    for (pos, &c) in doc.colours.iter().enumerate() {
        if c < 1 || c > doc.palette {
            return Err(LoadError::Semantic {
                rule: rules::DOC_SHAPE,
                message: format!(
                    "colour {c} at position {} outside palette 1..={}",
                    pos + 1,
                    doc.palette
                ),
            });
        }
    }
    Ok(Colouring::new(doc.palette, doc.colours))
}

pub fn save_colouring(c: &Colouring) -> String {
    let doc = ColouringDoc {
        format_version: COLOURING_FORMAT_VERSION,
        palette: c.palette(),
        colours: c.colours().to_vec(),
    };
    let mut text = serde_json::to_string(&doc).expect("colouring serialization cannot fail");
    text.push('\n');
    text
}

/// Loads a generic graph document (`{"format_version":1,"n":..,"edges":[..]}`)
/// for the oracle.
pub fn load_generic_graph(text: &str) -> Result<SimpleGraph, LoadError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| LoadError::syntax(&e))?;
    if doc.format_version != 1 {
        return Err(LoadError::Version {
            found: doc.format_version,
            expected: 1,
        });
    }
    let edges: Vec<(u32, u32)> = doc.edges.iter().map(|&[a, b]| (a, b)).collect();
    SimpleGraph::from_edges(doc.n, &edges).map_err(|e| LoadError::Semantic {
        rule: rules::DOC_SHAPE,
        message: e.to_string(),
    })
}

/// Stable DOT rendering: one node per vertex labelled `(i,j)` or
/// `(i,j,k)`, an optional `colour` attribute, and one line per edge, all
/// in canonical order so output can be diffed.
pub fn export_dot(g: &ProductSubgraph, colouring: Option<&Colouring>) -> String {
    let mut out = String::from("graph oddprod {\n");
    for (pos, v) in g.vertices().iter().enumerate() {
        match colouring {
            Some(c) => {
                out.push_str(&format!("  \"{v}\" [colour={}];\n", c.get(pos as u32)));
            }
            None => out.push_str(&format!("  \"{v}\";\n")),
        }
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            g.vertex_at(a),
            g.vertex_at(b)
        ));
    }
    out.push_str("}\n");
    out
}

pub const STATS_CSV_HEADER: &str =
    "variant,t,h,ell,delta,n,m,seed,palette,colours_used,max_X,max_Y,max_XY,millis";

/// Everything a stats row needs besides the run's [`RunStats`].
#[derive(Debug, Clone)]
pub struct RunMeta {
    pub variant: &'static str,
    pub t: u32,
    pub h: u32,
    pub ell: Option<u32>,
    pub delta: Option<u32>,
    pub n: usize,
    pub m: usize,
    /// Instance seed; `None` for runs on externally supplied files.
    pub seed: Option<u64>,
    pub palette: u32,
}

impl RunMeta {
    pub fn for_instance(g: &ProductSubgraph, seed: Option<u64>, palette: u32) -> Self {
        let (variant, ell, delta) = match g.secondary() {
            SecondaryFactor::Path { .. } => ("thm1", None, None),
            SecondaryFactor::PathClique { ell, .. } => ("thm3", Some(*ell), None),
            SecondaryFactor::General(i) => ("thm4", None, Some(i.max_degree())),
        };
        Self {
            variant,
            t: g.host().t(),
            h: g.secondary().h(),
            ell,
            delta,
            n: g.n(),
            m: g.m(),
            seed,
            palette,
        }
    }
}

fn opt_field<T: std::fmt::Display>(value: Option<T>) -> String {
    value.map_or_else(String::new, |v| v.to_string())
}

/// One CSV row, newline-terminated, matching [`STATS_CSV_HEADER`].
pub fn stats_csv_row(meta: &RunMeta, stats: &RunStats, millis: f64) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3}\n",
        meta.variant,
        meta.t,
        meta.h,
        opt_field(meta.ell),
        opt_field(meta.delta),
        meta.n,
        meta.m,
        opt_field(meta.seed),
        meta.palette,
        stats.colours_used,
        stats.max_x,
        stats.max_y,
        stats.max_xy,
        millis
    )
}

/// Appends rows to a CSV file, writing the header first when the file is
/// new or empty. Appends must be serialized by the caller.
pub fn append_stats_csv(path: &Path, rows: &[String]) -> std::io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if file.metadata()?.len() == 0 {
        writeln!(file, "{STATS_CSV_HEADER}")?;
    }
    for row in rows {
        file.write_all(row.as_bytes())?;
    }
    Ok(())
}
