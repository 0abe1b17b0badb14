//! Validation reporting shared by host, product, and colouring checks.
//!
//! Every check in this crate reports failures as a list of [`Violation`]s,
//! each tagged with a stable machine-readable rule id from [`rules`]. A
//! report with no violations means the checked object is valid.

use serde::Serialize;

/// Stable rule identifiers carried by violations and load errors.
pub mod rules {
    pub const HOST_INDEX: &str = "host/index";
    pub const HOST_SIZE: &str = "host/size";
    pub const HOST_CLIQUE: &str = "host/clique";
    pub const HOST_STAR: &str = "host/star";
    pub const SECONDARY_SHAPE: &str = "secondary/shape";
    pub const SUBGRAPH_VERTEX_RANGE: &str = "subgraph/vertex-range";
    pub const SUBGRAPH_DUPLICATE_VERTEX: &str = "subgraph/duplicate-vertex";
    pub const SUBGRAPH_ENDPOINT: &str = "subgraph/endpoint";
    pub const SUBGRAPH_LOOP: &str = "subgraph/loop";
    pub const SUBGRAPH_DUPLICATE_EDGE: &str = "subgraph/duplicate-edge";
    pub const SUBGRAPH_ADJACENCY: &str = "subgraph/adjacency";
    pub const COLOURING_PROPER: &str = "colouring/proper";
    pub const COLOURING_ODD: &str = "colouring/odd";
    pub const COLOURING_SUPPORT: &str = "colouring/support-distinct";
    pub const DOC_SYNTAX: &str = "doc/syntax";
    pub const DOC_VERSION: &str = "doc/version";
    pub const DOC_SHAPE: &str = "doc/shape";
    pub const DOC_KIND: &str = "doc/kind";
}

/// One failed rule, with the indices it implicates.
///
/// Index semantics depend on the rule: host rules use 1-based host vertex
/// indices, subgraph and colouring rules use 1-based positions into the
/// instance's vertex list (plus coordinates where noted in the message).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub indices: Vec<u32>,
    pub message: String,
}

/// Outcome of a validation pass: valid iff there are no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &'static str, indices: Vec<u32>, message: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            indices,
            message: message.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// First violation, if any. Handy for one-line error surfaces.
    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            write!(f, "ok")
        } else {
            let first = &self.violations[0];
            write!(
                f,
                "{} violation(s), first [{}]: {}",
                self.violations.len(),
                first.rule,
                first.message
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ok_iff_empty() {
        let mut report = ValidationReport::new();
        assert!(report.ok());
        report.push(rules::HOST_SIZE, vec![3], "too big");
        assert!(!report.ok());
        assert_eq!(report.first().unwrap().rule, rules::HOST_SIZE);
    }
}
