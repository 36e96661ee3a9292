//! Metric graphs with semi-infinite leads: data model and structural queries.
//!
//! Edge lengths are parsed from exact decimal strings and stored as exact
//! rationals, so equilaterality is an exact equality test rather than a
//! floating-point comparison.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{parse_rat, C64, CMatrix, Rat};

/// Coupling condition at a vertex.
#[derive(Debug, Clone)]
pub enum CouplingSpec {
    /// Continuity plus vanishing sum of outgoing derivatives (also called
    /// Kirchhoff, free or Neumann coupling).
    Standard,
    /// Wavefunction vanishes at the vertex; only supported at degree 1.
    Dirichlet,
    /// Arbitrary unitary coupling matrix of size `(n+m)×(n+m)`, internal
    /// slots first, lead slots last.
    General(CMatrix),
}

/// A vertex: its lead count and coupling condition.
#[derive(Debug, Clone)]
pub struct VertexSpec {
    pub id: String,
    pub leads: usize,
    pub coupling: CouplingSpec,
}

/// A finite internal edge with an exact positive length. The `from`/`to`
/// orientation is a parametrization choice only; it fixes which of the two
/// directed bonds is the forward one.
#[derive(Debug, Clone)]
pub struct InternalEdge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: Rat,
}

/// Which end of an internal edge touches a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeEnd {
    From,
    To,
}

/// A metric graph with leads.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<VertexSpec>,
    edges: Vec<InternalEdge>,
    /// Per vertex, incident internal edge ends in edge-list order; a loop
    /// contributes both of its ends. The position in this list is the slot
    /// the edge end occupies in the vertex scattering matrix.
    incidence: Vec<Vec<(usize, EdgeEnd)>>,
}

impl MetricGraph {
    /// Assemble a graph from vertex specs and index-based edges.
    ///
    /// Panics if an edge endpoint is out of range; semantic invariants
    /// (positive lengths, unitarity, Dirichlet degree) are checked by
    /// [`MetricGraph::validate`] instead.
    pub fn new(vertices: Vec<VertexSpec>, edges: Vec<InternalEdge>) -> Self {
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (idx, e) in edges.iter().enumerate() {
            assert!(e.from < vertices.len() && e.to < vertices.len(), "edge endpoint out of range");
            incidence[e.from].push((idx, EdgeEnd::From));
            incidence[e.to].push((idx, EdgeEnd::To));
        }
        Self { vertices, edges, incidence }
    }

    /// Parse from the JSON input format.
    pub fn from_json_str(input: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_graph()
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn edges(&self) -> &[InternalEdge] {
        &self.edges
    }

    /// Number of internal edges, `N`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of leads, `M`.
    pub fn lead_count(&self) -> usize {
        self.vertices.iter().map(|v| v.leads).sum()
    }

    /// Incident internal edge ends at a vertex, in slot order.
    pub fn incident_ends(&self, v: usize) -> &[(usize, EdgeEnd)] {
        &self.incidence[v]
    }

    /// Number of internal edge ends at a vertex (a loop counts twice).
    pub fn internal_degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Full degree: internal ends plus leads.
    pub fn degree(&self, v: usize) -> usize {
        self.internal_degree(v) + self.vertices[v].leads
    }

    /// Sum of internal edge lengths.
    pub fn volume(&self) -> Rat {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    /// Slot of a given edge end in the vertex scattering matrix at `v`.
    pub fn slot_of(&self, v: usize, edge: usize, end: EdgeEnd) -> usize {
        self.incidence[v]
            .iter()
            .position(|&(e, s)| e == edge && s == end)
            .expect("edge end not incident to vertex")
    }

    /// Resolve a vertex id to its index.
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// True when the two vertices are joined by at least one internal edge.
    /// Leads never create adjacency.
    pub fn neighbors(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    /// Check every invariant; the report is empty iff the graph is
    /// admissible for analysis.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for e in &self.edges {
            if e.length <= num_traits::Zero::zero() {
                violations.push(Violation {
                    kind: ViolationKind::NonpositiveLength,
                    message: format!("edge `{}` has nonpositive length", e.id),
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                violations.push(Violation {
                    kind: ViolationKind::DuplicateId,
                    message: format!("duplicate vertex id `{}`", v.id),
                });
            }
        }
        seen.clear();
        for e in &self.edges {
            if !seen.insert(e.id.as_str()) {
                violations.push(Violation {
                    kind: ViolationKind::DuplicateId,
                    message: format!("duplicate edge id `{}`", e.id),
                });
            }
        }
        for (idx, v) in self.vertices.iter().enumerate() {
            let degree = self.degree(idx);
            if degree == 0 {
                violations.push(Violation {
                    kind: ViolationKind::IsolatedVertex,
                    message: format!("vertex `{}` has degree 0", v.id),
                });
            }
            match &v.coupling {
                CouplingSpec::Standard => {}
                CouplingSpec::Dirichlet => {
                    if degree != 1 {
                        violations.push(Violation {
                            kind: ViolationKind::DirichletDegree,
                            message: format!(
                                "vertex `{}`: Dirichlet coupling requires degree 1, found {degree}",
                                v.id
                            ),
                        });
                    }
                }
                CouplingSpec::General(u) => {
                    if u.rows() != degree || u.cols() != degree {
                        violations.push(Violation {
                            kind: ViolationKind::BadCouplingDimension,
                            message: format!(
                                "vertex `{}`: coupling matrix is {}×{}, expected {degree}×{degree}",
                                v.id,
                                u.rows(),
                                u.cols()
                            ),
                        });
                    } else if u.unitarity_defect() > 1e-12 {
                        violations.push(Violation {
                            kind: ViolationKind::NotUnitary,
                            message: format!("vertex `{}`: coupling matrix not unitary", v.id),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Vertices connecting the same number of internal edge ends and leads.
    pub fn balanced_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].leads > 0 && self.internal_degree(v) == self.vertices[v].leads)
            .collect()
    }

    /// Structural summary used to pick pipelines and check theorem
    /// hypotheses.
    pub fn structural_flags(&self) -> StructuralFlags {
        let equilateral = !self.edges.is_empty()
            && self.edges.iter().all(|e| e.length == self.edges[0].length);
        let common_length = equilateral.then(|| self.edges[0].length.clone());
        let has_loops = self.edges.iter().any(|e| e.from == e.to);
        let mut has_parallel_edges = false;
        for (i, a) in self.edges.iter().enumerate() {
            for b in &self.edges[i + 1..] {
                let same = (a.from, a.to) == (b.from, b.to) || (a.from, a.to) == (b.to, b.from);
                if same {
                    has_parallel_edges = true;
                }
            }
        }
        let balanced = self.balanced_vertices();
        let balanced_nonneighbor_count = balanced
            .iter()
            .filter(|&&v| balanced.iter().all(|&w| w == v || !self.neighbors(v, w)))
            .count();
        StructuralFlags {
            equilateral,
            common_length,
            has_loops,
            has_parallel_edges,
            balanced_nonneighbor_count,
        }
    }

    /// Common edge length, or [`Error::NotEquilateral`].
    pub fn common_length(&self) -> Result<Rat> {
        let flags = self.structural_flags();
        flags.common_length.ok_or(Error::NotEquilateral)
    }
}

/// Output of [`MetricGraph::structural_flags`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralFlags {
    /// All internal edges share one exact length. An edgeless graph is not
    /// considered equilateral (there is no common length to report).
    pub equilateral: bool,
    pub common_length: Option<Rat>,
    pub has_loops: bool,
    pub has_parallel_edges: bool,
    /// Balanced vertices adjacent (via an internal edge) to no other
    /// balanced vertex.
    pub balanced_nonneighbor_count: usize,
}

/// Kind of invariant violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonpositiveLength,
    NotUnitary,
    BadCouplingDimension,
    DirichletDegree,
    IsolatedVertex,
    DuplicateId,
}

/// One invariant violation.
#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

/// Result of [`MetricGraph::validate`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// JSON input format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct GraphFile {
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
}

#[derive(Deserialize)]
struct VertexFile {
    id: String,
    #[serde(default)]
    leads: usize,
    #[serde(default)]
    coupling: Option<CouplingFile>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CouplingFile {
    Named(String),
    General { unitary: Vec<Vec<ComplexFile>> },
}

#[derive(Deserialize)]
struct ComplexFile {
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct EdgeFile {
    id: String,
    from: String,
    to: String,
    length: String,
}

impl GraphFile {
    fn into_graph(self) -> Result<MetricGraph> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in self.vertices {
            let coupling = match v.coupling {
                None => CouplingSpec::Standard,
                Some(CouplingFile::Named(name)) => match name.as_str() {
                    "standard" => CouplingSpec::Standard,
                    "dirichlet" => CouplingSpec::Dirichlet,
                    other => {
                        return Err(Error::Parse(format!(
                            "vertex `{}`: unknown coupling `{other}`",
                            v.id
                        )))
                    }
                },
                Some(CouplingFile::General { unitary }) => {
                    let rows = unitary.len();
                    if unitary.iter().any(|r| r.len() != rows) {
                        return Err(Error::Parse(format!(
                            "vertex `{}`: coupling matrix is not square",
                            v.id
                        )));
                    }
                    CouplingSpec::General(CMatrix::from_fn(rows, rows, |i, j| {
                        C64::new(unitary[i][j].re, unitary[i][j].im)
                    }))
                }
            };
            vertices.push(VertexSpec {
                id: v.id,
                leads: v.leads,
                coupling,
            });
        }
        let index_of = |id: &str| vertices.iter().position(|v| v.id == id);
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            let from = index_of(&e.from).ok_or_else(|| {
                Error::Parse(format!("edge `{}` references unknown vertex `{}`", e.id, e.from))
            })?;
            let to = index_of(&e.to).ok_or_else(|| {
                Error::Parse(format!("edge `{}` references unknown vertex `{}`", e.id, e.to))
            })?;
            let length = parse_rat(&e.length).ok_or_else(|| {
                Error::Parse(format!("edge `{}` has unparseable length `{}`", e.id, e.length))
            })?;
            edges.push(InternalEdge {
                id: e.id,
                from,
                to,
                length,
            });
        }
        Ok(MetricGraph::new(vertices, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::samples;

    #[test]
    fn three_star_is_valid_and_has_one_balanced_vertex() {
        let g = samples::three_star();
        assert!(g.validate().is_valid());
        let center = g.vertex_index("v4").unwrap();
        assert_eq!(g.balanced_vertices(), vec![center]);
    }

    #[test]
    fn complete_k4_has_all_vertices_balanced() {
        let g = samples::complete_k4();
        assert!(g.validate().is_valid());
        assert_eq!(g.balanced_vertices().len(), 4);
    }

    #[test]
    fn zero_length_edge_is_flagged() {
        let mut g = samples::dirichlet_interval();
        // Force an inadmissible length through the index-based constructor.
        let mut edges = g.edges().to_vec();
        edges[0].length = rat(0, 1);
        g = MetricGraph::new(g.vertices().to_vec(), edges);
        let report = g.validate();
        assert!(!report.is_valid());
        assert!(report.violations[0].message.contains("nonpositive length"));
        assert_eq!(report.violations[0].kind, ViolationKind::NonpositiveLength);
    }

    #[test]
    fn non_unitary_coupling_is_flagged() {
        let mut u = CMatrix::zeros(2, 2);
        u[(0, 0)] = C64::new(1.0, 0.0);
        u[(1, 1)] = C64::new(2.0, 0.0);
        let g = MetricGraph::new(
            vec![
                VertexSpec { id: "a".into(), leads: 1, coupling: CouplingSpec::General(u) },
                VertexSpec { id: "b".into(), leads: 0, coupling: CouplingSpec::Dirichlet },
            ],
            vec![InternalEdge { id: "e".into(), from: 0, to: 1, length: rat(1, 1) }],
        );
        let report = g.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::NotUnitary && v.message.contains("not unitary")));
    }

    #[test]
    fn dirichlet_beyond_degree_one_is_flagged() {
        let g = MetricGraph::new(
            vec![
                VertexSpec { id: "a".into(), leads: 0, coupling: CouplingSpec::Dirichlet },
                VertexSpec { id: "b".into(), leads: 0, coupling: CouplingSpec::Dirichlet },
            ],
            vec![
                InternalEdge { id: "e1".into(), from: 0, to: 1, length: rat(1, 1) },
                InternalEdge { id: "e2".into(), from: 0, to: 1, length: rat(1, 1) },
            ],
        );
        let report = g.validate();
        assert!(report.violations.iter().any(|v| v.kind == ViolationKind::DirichletDegree));
    }

    #[test]
    fn graph_without_leads_has_no_balanced_vertices() {
        let g = samples::dirichlet_interval();
        assert!(g.balanced_vertices().is_empty());
    }

    #[test]
    fn structural_flags_on_square_with_diagonal() {
        let g = samples::square_with_diagonal();
        let flags = g.structural_flags();
        assert!(flags.equilateral);
        assert_eq!(flags.common_length, Some(rat(1, 1)));
        assert!(!flags.has_loops);
        assert!(!flags.has_parallel_edges);
        assert_eq!(flags.balanced_nonneighbor_count, 0);
    }

    #[test]
    fn parallel_edges_are_flagged() {
        let g = MetricGraph::new(
            vec![
                VertexSpec { id: "a".into(), leads: 1, coupling: CouplingSpec::Standard },
                VertexSpec { id: "b".into(), leads: 1, coupling: CouplingSpec::Standard },
            ],
            vec![
                InternalEdge { id: "e1".into(), from: 0, to: 1, length: rat(1, 1) },
                InternalEdge { id: "e2".into(), from: 1, to: 0, length: rat(1, 1) },
            ],
        );
        assert!(g.structural_flags().has_parallel_edges);
    }

    #[test]
    fn isolated_balanced_vertex_in_a_path() {
        // Path v0 − v1 − v2 − v3; only v1 balanced (2 internal ends, 2 leads).
        let std = |id: &str, leads: usize| VertexSpec {
            id: id.into(),
            leads,
            coupling: CouplingSpec::Standard,
        };
        let g = MetricGraph::new(
            vec![std("v0", 2), std("v1", 2), std("v2", 1), std("v3", 0)],
            vec![
                InternalEdge { id: "e1".into(), from: 0, to: 1, length: rat(1, 1) },
                InternalEdge { id: "e2".into(), from: 1, to: 2, length: rat(1, 1) },
                InternalEdge { id: "e3".into(), from: 2, to: 3, length: rat(1, 1) },
            ],
        );
        let flags = g.structural_flags();
        assert_eq!(g.balanced_vertices(), vec![1]);
        assert_eq!(flags.balanced_nonneighbor_count, 1);
    }

    #[test]
    fn structural_flags_is_pure() {
        let g = samples::complete_k4();
        assert_eq!(g.structural_flags(), g.structural_flags());
    }

    #[test]
    fn json_roundtrip_with_general_coupling() {
        let input = r#"{
            "vertices": [
                { "id": "v1", "leads": 1,
                  "coupling": { "unitary": [[{"re":0,"im":0},{"re":1,"im":0}],
                                             [{"re":1,"im":0},{"re":0,"im":0}]] } },
                { "id": "v2", "leads": 0, "coupling": "dirichlet" }
            ],
            "edges": [ { "id": "e1", "from": "v1", "to": "v2", "length": "0.5" } ]
        }"#;
        let g = MetricGraph::from_json_str(input).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.edges()[0].length, rat(1, 2));
    }

    #[test]
    fn unknown_vertex_reference_is_a_parse_error() {
        let input = r#"{
            "vertices": [ { "id": "v1", "leads": 1, "coupling": "standard" } ],
            "edges": [ { "id": "e1", "from": "v1", "to": "nope", "length": "1" } ]
        }"#;
        assert!(matches!(MetricGraph::from_json_str(input), Err(Error::Parse(_))));
    }
}
