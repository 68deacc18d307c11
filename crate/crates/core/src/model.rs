//! Combinatorial models `(P, Λ)` of 4-dimensional quasitoric orbifolds.
//!
//! Only the cyclic list of characteristic vectors is stored. The polygon
//! itself carries no information beyond its number of edges, so no geometry
//! is kept. Edges are listed in clockwise order and vertex `i` is the corner
//! where edge `i` meets edge `i + 1 (mod m)`.
//!
//! File format: a UTF-8 JSON object `{"edges": [[x, y], ...]}` with at
//! least three integer pairs. The canonical serialization has no whitespace
//! and keeps the stored order. Unknown keys are ignored on input.

use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::lattice::{det2, is_primitive, LatticeInt, Vector2};

/// One problem found while validating an edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    TooFewEdges { count: usize },
    NotPrimitive { edge: usize },
    DependentAdjacent { vertex: usize },
}

impl Finding {
    pub fn kind(&self) -> &'static str {
        match self {
            Finding::TooFewEdges { .. } => "TooFewEdges",
            Finding::NotPrimitive { .. } => "NotPrimitive",
            Finding::DependentAdjacent { .. } => "DependentAdjacent",
        }
    }

    /// Edge or vertex index the finding refers to, if any.
    pub fn index(&self) -> Option<usize> {
        match self {
            Finding::TooFewEdges { .. } => None,
            Finding::NotPrimitive { edge } => Some(*edge),
            Finding::DependentAdjacent { vertex } => Some(*vertex),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::TooFewEdges { count } => write!(f, "model has {count} edges, at least 3 required"),
            Finding::NotPrimitive { edge } => write!(f, "characteristic vector of edge {edge} is not primitive"),
            Finding::DependentAdjacent { vertex } => {
                write!(f, "characteristic vectors meeting at vertex {vertex} are linearly dependent")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub positively_omnioriented: bool,
    pub failures: Vec<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Parse(String),
    #[error("invalid model: {}", summarize(.0))]
    Validation(ValidationReport),
}

fn summarize(report: &ValidationReport) -> String {
    report
        .failures
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks an arbitrary edge list without requiring it to form a model.
pub fn validate_edges<I: LatticeInt>(edges: &[Vector2<I>]) -> ValidationReport {
    let n = edges.len();
    let mut failures = Vec::new();
    if n < 3 {
        failures.push(Finding::TooFewEdges { count: n });
    }
    for (i, e) in edges.iter().enumerate() {
        if !is_primitive(e) {
            failures.push(Finding::NotPrimitive { edge: i });
        }
    }
    let mut positive = n >= 3;
    for i in 0..n {
        let d = det2(&edges[i], &edges[(i + 1) % n]);
        if d.is_zero() {
            failures.push(Finding::DependentAdjacent { vertex: i });
        }
        if !d.is_positive() {
            positive = false;
        }
    }
    ValidationReport {
        valid: failures.is_empty(),
        positively_omnioriented: positive,
        failures,
    }
}

/// Corner of the polygon where edge `index` meets edge `index + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex<I> {
    pub index: usize,
    pub first: Vector2<I>,
    pub second: Vector2<I>,
    pub det: I,
}

impl<I: LatticeInt> Vertex<I> {
    pub fn new(index: usize, first: Vector2<I>, second: Vector2<I>) -> Self {
        let det = det2(&first, &second);
        Self { index, first, second, det }
    }

    /// Order of the local group, `|det|`.
    pub fn order(&self) -> I {
        self.det.abs()
    }

    pub fn is_smooth(&self) -> bool {
        self.det.abs().is_one()
    }
}

/// A valid model: at least three primitive vectors, adjacent pairs independent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model<I> {
    edges: Vec<Vector2<I>>,
}

impl<I: LatticeInt> Model<I> {
    pub fn new(edges: Vec<Vector2<I>>) -> Result<Self, ModelError> {
        let report = validate_edges(&edges);
        if report.valid {
            Ok(Self { edges })
        } else {
            Err(ModelError::Validation(report))
        }
    }

    pub fn from_i64(edges: &[(i64, i64)]) -> Result<Self, ModelError> {
        Self::new(edges.iter().map(|&(x, y)| Vector2::from_i64(x, y)).collect())
    }

    pub fn edges(&self) -> &[Vector2<I>] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Vector2<I>> {
        self.edges
    }

    /// Number of edges (equal to the number of vertices).
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> &Vector2<I> {
        &self.edges[i % self.edges.len()]
    }

    pub fn vertex(&self, i: usize) -> Vertex<I> {
        let n = self.len();
        let i = i % n;
        Vertex::new(i, self.edges[i].clone(), self.edges[(i + 1) % n].clone())
    }

    pub fn vertices(&self) -> Vec<Vertex<I>> {
        (0..self.len()).map(|i| self.vertex(i)).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_edges(&self.edges)
    }

    pub fn is_positively_omnioriented(&self) -> bool {
        self.vertices().iter().all(|v| v.det.is_positive())
    }

    /// True when every vertex is smooth, i.e. the model is a manifold.
    pub fn is_manifold(&self) -> bool {
        self.vertices().iter().all(Vertex::is_smooth)
    }

    /// Cyclic rotation: the new list starts at edge `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut edges = self.edges.clone();
        let n = edges.len();
        edges.rotate_left(shift % n);
        Self { edges }
    }

    pub fn parse(text: &[u8]) -> Result<Self, ModelError> {
        Self::new(parse_edges(text)?)
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> String {
        edges_to_json(&self.edges)
    }
}

impl<I: LatticeInt> fmt::Display for Model<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Parses a model document into an unvalidated edge list.
pub fn parse_edges<I: LatticeInt>(text: &[u8]) -> Result<Vec<Vector2<I>>, ModelError> {
    let doc: Value = serde_json::from_slice(text).map_err(|e| ModelError::Parse(e.to_string()))?;
    let edges = doc
        .as_object()
        .ok_or_else(|| ModelError::Parse("top level must be an object".into()))?
        .get("edges")
        .ok_or_else(|| ModelError::Parse("missing \"edges\"".into()))?
        .as_array()
        .ok_or_else(|| ModelError::Parse("\"edges\" must be an array".into()))?;
    edges
        .iter()
        .enumerate()
        .map(|(i, e)| match e.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Vector2::new(parse_int(x, i)?, parse_int(y, i)?)),
            _ => Err(ModelError::Parse(format!("edge {i} must be a pair [x, y]"))),
        })
        .collect()
}

fn parse_int<I: LatticeInt>(v: &Value, edge: usize) -> Result<I, ModelError> {
    let bad = || ModelError::Parse(format!("edge {edge} has a non-integer coordinate"));
    let Value::Number(n) = v else {
        return Err(bad());
    };
    let literal = n.to_string();
    if literal.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    literal.parse::<I>().map_err(|_| bad())
}

pub fn edges_to_json<I: LatticeInt>(edges: &[Vector2<I>]) -> String {
    let body = edges
        .iter()
        .map(|e| format!("[{},{}]", e.x, e.y))
        .collect::<Vec<_>>()
        .join(",");
    format!("{{\"edges\":[{body}]}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Model<BigInt>;

    const X: &[(i64, i64)] = &[(1, 0), (0, 1), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)];
    const Y: &[(i64, i64)] = &[(1, 0), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)];

    fn dets(m: &M) -> Vec<i64> {
        m.vertices().iter().map(|v| i64::try_from(&v.det).unwrap()).collect()
    }

    #[test]
    fn parse_triangle_and_x() {
        let t = M::parse(br#"{"edges":[[1,0],[0,1],[-1,-1]]}"#).unwrap();
        assert_eq!(t.len(), 3);
        let x = M::parse(br#"{"edges":[[1,0],[0,1],[-1,2],[-2,3],[1,-2],[0,1],[-1,-1]]}"#).unwrap();
        assert_eq!(x, M::from_i64(X).unwrap());
    }

    #[test]
    fn parse_rejects_non_primitive() {
        let err = M::parse(br#"{"edges":[[1,0],[2,4],[-1,-1]]}"#).unwrap_err();
        match err {
            ModelError::Validation(r) => {
                assert!(!r.valid);
                assert!(r.failures.contains(&Finding::NotPrimitive { edge: 1 }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        for doc in [
            &b"not json"[..],
            br#"[[1,0]]"#,
            br#"{"edge":[]}"#,
            br#"{"edges":[[1,0,3],[0,1],[1,1]]}"#,
            br#"{"edges":[[1.5,0],[0,1],[1,1]]}"#,
            br#"{"edges":[[1e2,0],[0,1],[1,1]]}"#,
            br#"{"edges":[["1",0],[0,1],[1,1]]}"#,
        ] {
            assert!(matches!(M::parse(doc), Err(ModelError::Parse(_))), "{}", String::from_utf8_lossy(doc));
        }
    }

    #[test]
    fn parse_too_few_edges() {
        let err = M::parse(br#"{"edges":[[1,0],[0,1]]}"#).unwrap_err();
        assert!(matches!(err, ModelError::Validation(r) if r.failures.contains(&Finding::TooFewEdges { count: 2 })));
    }

    #[test]
    fn parse_big_integers() {
        let doc = br#"{"edges":[[1,0],[123456789012345678901234567890,1],[-1,-1]]}"#;
        let m = M::parse(doc).unwrap();
        assert_eq!(m.to_json(), String::from_utf8_lossy(doc));
    }

    #[test]
    fn validate_examples() {
        let r = M::from_i64(X).unwrap().validate();
        assert!(r.valid && r.positively_omnioriented);

        let square = validate_edges(&[(1, 0), (0, 1), (-1, 0), (0, -1)].map(|(x, y)| Vector2::<BigInt>::from_i64(x, y)));
        assert!(square.valid && square.positively_omnioriented);

        let bad = validate_edges(&[(1, 0), (-1, 0), (0, 1)].map(|(x, y)| Vector2::<BigInt>::from_i64(x, y)));
        assert!(!bad.valid);
        assert_eq!(bad.failures, vec![Finding::DependentAdjacent { vertex: 0 }]);
        assert!(!bad.positively_omnioriented);
    }

    #[test]
    fn negative_orientation_is_valid_but_not_positive() {
        let r = M::from_i64(&[(1, 0), (-1, -1), (0, 1)]).unwrap().validate();
        assert!(r.valid);
        assert!(!r.positively_omnioriented);
    }

    #[test]
    fn vertex_dets() {
        assert_eq!(dets(&M::from_i64(&[(1, 0), (0, 1), (-1, -1)]).unwrap()), vec![1, 1, 1]);
        assert_eq!(dets(&M::from_i64(Y).unwrap()), vec![2, 1, 1, 1, 1, 1]);
        assert_eq!(dets(&M::from_i64(X).unwrap()), vec![1; 7]);
    }

    #[test]
    fn canonical_roundtrip() {
        let text = b"{ \"edges\" : [ [1, 0], [0,1],\n [-1,-1] ], \"name\": \"cp2\" }";
        let m = M::parse(text).unwrap();
        let canon = m.to_json();
        assert_eq!(canon, r#"{"edges":[[1,0],[0,1],[-1,-1]]}"#);
        assert_eq!(M::parse(canon.as_bytes()).unwrap().to_json(), canon);
    }

    #[test]
    fn rotation_keeps_dets_cyclically() {
        let x = M::from_i64(Y).unwrap();
        let r = x.rotated(2);
        assert_eq!(r.edge(0), x.edge(2));
        let mut d = dets(&x);
        d.rotate_left(2);
        assert_eq!(dets(&r), d);
    }
}
