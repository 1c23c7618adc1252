//! Exact decomposability: the summand space of the 1-skeleton, summand
//! extraction, and indecomposability certificates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{self, ArithError, Scalar, Vector};
use crate::equiv::{homothetic, EquivError};
use crate::families::{minkowski_sum, FamilyError};
use crate::hull::{convex_hull, edge_graph, face_lattice, GeometricGraph, Hull, HullError, VPolytope, Vertex};

mod certificate;
mod chain;
mod theorem;

pub use certificate::{certify_indecomposable, certify_with, verify_certificate, verify_skew_gluing, Certificate, Claim, FacetTouch};
pub use chain::{find_triangular_chain, verify_triangular_chain, ChainMode, TriangularChain};
pub use theorem::{check_main_theorem_instance, line_configuration, LineConfiguration, MainTheoremReport, Step, StepStatus};

/// Default cap on chain-search node expansions.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("edge graph is disconnected")]
    Disconnected,
    #[error("edge {0}-{1} has equal endpoints")]
    DegenerateEdge(String, String),
    #[error("polytope is indecomposable (summand space has dimension {0})")]
    Indecomposable(usize),
    #[error("polytope is decomposable: summand space has dimension {dimension} > {expected}")]
    DecomposableInput { dimension: usize, expected: usize },
    #[error("summand extraction failed verification: {0}")]
    ExtractionFailed(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
}

/// Hull, vertex polytope (irredundant, in incidence order) and edge graph.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub hull: Hull,
    pub vertices: VPolytope,
    pub graph: GeometricGraph,
}

pub fn skeleton(p: &VPolytope) -> Result<Skeleton, DecompError> {
    let hull = convex_hull(p)?;
    let vertices = hull.vertex_polytope(p);
    let lattice = face_lattice(&hull.incidence)?;
    let graph = edge_graph(&lattice, &vertices)?;
    Ok(Skeleton { hull, vertices, graph })
}

/// Displacement fields preserving every edge direction. Each basis field
/// lists one vector per graph node, in node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandSpace {
    pub dim: usize,
    pub labels: Vec<String>,
    pub basis: Vec<Vec<Vector>>,
}

impl SummandSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Translations and scaling always contribute `d + 1`.
    pub fn is_trivial(&self) -> bool {
        self.dimension() <= self.dim + 1
    }

    pub fn field_map(&self, field: usize) -> BTreeMap<String, Vector> {
        self.labels.iter().cloned().zip(self.basis[field].iter().cloned()).collect()
    }
}

/// Rows of the linear system `f(u) - f(v) ∥ u - v`, one per edge and
/// non-pivot coordinate. Unknown `(v, k)` sits at column `v * d + k`.
pub(crate) fn edge_constraints(g: &GeometricGraph, d: usize) -> Result<Vec<Vec<BigInt>>, DecompError> {
    let mut rows = Vec::new();
    for &(a, b) in &g.edges {
        let w = arith::primitive(arith::integer_row(&(&g.points[a] - &g.points[b]).0));
        let Some(j) = w.iter().position(|c| !c.is_zero()) else {
            return Err(DecompError::DegenerateEdge(g.labels[a].clone(), g.labels[b].clone()));
        };
        for k in (0..d).filter(|&k| k != j) {
            let mut row = vec![BigInt::zero(); g.node_count() * d];
            row[a * d + k] = w[j].clone();
            row[b * d + k] = -w[j].clone();
            row[a * d + j] = -w[k].clone();
            row[b * d + j] = w[k].clone();
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn summand_space(g: &GeometricGraph, d: usize) -> Result<SummandSpace, DecompError> {
    if !g.is_connected() {
        return Err(DecompError::Disconnected);
    }
    let rows = edge_constraints(g, d)?;
    let cols = g.node_count() * d;
    let kernel = arith::eliminate(rows, cols, true).kernel();
    let basis = kernel
        .into_iter()
        .map(|k| {
            k.chunks(d)
                .map(|c| Vector(c.iter().cloned().map(Scalar::from_integer).collect()))
                .collect()
        })
        .collect();
    Ok(SummandSpace {
        dim: d,
        labels: g.labels.clone(),
        basis,
    })
}

/// Rank of the edge-constraint system; the summand space has dimension
/// `n d - rank`.
pub(crate) fn constraint_rank(g: &GeometricGraph, d: usize) -> Result<usize, DecompError> {
    let rows = edge_constraints(g, d)?;
    Ok(arith::eliminate(rows, g.node_count() * d, false).rank())
}

/// `true` iff the summand space is larger than translations plus scaling.
pub fn is_decomposable(p: &VPolytope) -> Result<(bool, SummandSpace), DecompError> {
    let sk = skeleton(p)?;
    let space = summand_space(&sk.graph, p.dim)?;
    Ok((!space.is_trivial(), space))
}

/// Edge coefficients `t_e` with `f(u) - f(v) = t_e (u - v)`.
fn edge_coefficients(g: &GeometricGraph, field: &[Vector]) -> Vec<Scalar> {
    g.edges
        .iter()
        .map(|&(a, b)| {
            let w = &g.points[a] - &g.points[b];
            let j = w.0.iter().position(|c| !c.is_zero()).expect("edge endpoints differ");
            (&field[a][j] - &field[b][j]) / &w[j]
        })
        .collect()
}

/// Splits a decomposable polytope into two summands, neither homothetic to
/// it, and verifies the sum exactly.
pub fn extract_summands(p: &VPolytope) -> Result<(VPolytope, VPolytope), DecompError> {
    let sk = skeleton(p)?;
    let space = summand_space(&sk.graph, p.dim)?;
    if space.is_trivial() {
        return Err(DecompError::Indecomposable(space.dimension()));
    }
    let g = &sk.graph;
    let (field, coeffs) = space
        .basis
        .iter()
        .map(|f| (f, edge_coefficients(g, f)))
        .find(|(_, c)| c.iter().any(|t| *t != c[0]))
        .ok_or_else(|| DecompError::ExtractionFailed("every basis field is a homothety".into()))?;
    let m = coeffs.iter().min().expect("graph has edges").clone();
    let big_m = coeffs.iter().max().expect("graph has edges").clone();
    let spread = &big_m - &m;
    let mut q = Vec::new();
    let mut r = Vec::new();
    for (i, label) in g.labels.iter().enumerate() {
        let x = &g.points[i];
        let gx = (&field[i] - &x.scale(&m)).scale(&(Scalar::from_integer(1.into()) / &spread));
        r.push(Vertex {
            label: label.clone(),
            point: x - &gx,
        });
        q.push(Vertex {
            label: label.clone(),
            point: gx,
        });
    }
    let q = VPolytope { dim: p.dim, vertices: q };
    let r = VPolytope { dim: p.dim, vertices: r };
    let q = dedup_points(&q).irredundant();
    let r = dedup_points(&r).irredundant();
    check_summand_pair(&sk.vertices, &q, &r).map_err(DecompError::ExtractionFailed)?;
    Ok((q, r))
}

/// Drops repeated points, keeping the first label.
fn dedup_points(p: &VPolytope) -> VPolytope {
    let mut seen = std::collections::BTreeSet::new();
    VPolytope {
        dim: p.dim,
        vertices: p.vertices.iter().filter(|v| seen.insert(v.point.clone())).cloned().collect(),
    }
}

/// `q + r = p` exactly and neither summand is a homothet of `p`.
pub(crate) fn check_summand_pair(p: &VPolytope, q: &VPolytope, r: &VPolytope) -> Result<(), String> {
    if q.dim != p.dim || r.dim != p.dim {
        return Err("summand dimension differs".into());
    }
    let sum = minkowski_sum(q, r).map_err(|e| e.to_string())?;
    if !sum.same_hull(p) {
        return Err("q + r differs from p".into());
    }
    let p = p.irredundant();
    for (name, s) in [("q", q), ("r", r)] {
        if homothetic(&p, &s.irredundant()).is_some() {
            return Err(format!("{name} is homothetic to p"));
        }
    }
    Ok(())
}

/// Coefficient spread helper for tests: `(min, max)` edge coefficient of a
/// field.
#[cfg(test)]
fn coefficient_range(g: &GeometricGraph, field: &[Vector]) -> (Scalar, Scalar) {
    let c = edge_coefficients(g, field);
    (c.iter().min().unwrap().clone(), c.iter().max().unwrap().clone())
}
