//! Vertex/facet conversion, face lattices, edge graphs, generic slices and
//! admissible projective maps.

mod dd;
mod lattice;
mod ops;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{self, integer_row, primitive, ArithError, Hyperplane, Scalar, Vector};

pub use lattice::{edge_graph, edges_from_incidence, face_lattice, Face, FaceLattice, GeometricGraph};
pub use ops::{cross_section, projective_map, ProjectiveMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("points span an affine space of dimension {affine_dim}, expected {dim}")]
    NotFullDimensional { affine_dim: isize, dim: usize },
    #[error("{points} points exceed the configured limit of {limit}")]
    TooManyPoints { points: usize, limit: usize },
    #[error("ambient dimension {dim} exceeds the supported maximum {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("redundant points (not vertices): {0:?}")]
    RedundantPoints(Vec<String>),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("point {label:?} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("inconsistent incidence: {0}")]
    InconsistentIncidence(String),
    #[error("vertex {0:?} lies on the slicing hyperplane")]
    VertexOnHyperplane(String),
    #[error("hyperplane does not meet the polytope")]
    EmptyIntersection,
    #[error("projective map not admissible: {0}")]
    NotAdmissible(String),
    #[error("projective map is singular")]
    SingularMap,
    #[error("projective image is not combinatorially equivalent to its source")]
    CombinatoricsChanged,
    #[error("lattice and polytope labels disagree")]
    LabelMismatch,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub label: String,
    pub point: Vector,
}

/// Labeled point set in Q^d.
#[derive(Clone, PartialEq, Eq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<Vertex>,
}

impl fmt::Debug for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VPolytope(d={}; ", self.dim)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", v.label, v.point)?;
        }
        write!(f, ")")
    }
}

impl VPolytope {
    /// Checks label uniqueness and coordinate lengths. Irredundancy is
    /// checked separately by [`VPolytope::validate`].
    pub fn new<L: Into<String>>(dim: usize, points: Vec<(L, Vector)>) -> Result<Self, HullError> {
        let mut seen = HashSet::new();
        let mut vertices = Vec::with_capacity(points.len());
        for (label, point) in points {
            let label = label.into();
            if point.len() != dim {
                return Err(HullError::DimensionMismatch {
                    label,
                    expected: dim,
                    found: point.len(),
                });
            }
            if !seen.insert(label.clone()) {
                return Err(HullError::DuplicateLabel(label));
            }
            vertices.push(Vertex { label, point });
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.label.clone()).collect()
    }

    pub fn points(&self) -> Vec<Vector> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn point(&self, label: &str) -> Option<&Vector> {
        self.vertices.iter().find(|v| v.label == label).map(|v| &v.point)
    }

    pub fn affine_dimension(&self) -> isize {
        let pts: Vec<&Vector> = self.vertices.iter().map(|v| &v.point).collect();
        arith::affine_dimension(&pts)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dimension() == self.dim as isize
    }

    /// Rejects point sets containing non-vertices (duplicates included).
    pub fn validate(&self) -> Result<(), HullError> {
        let keep = extreme_point_indices(&self.points());
        if keep.len() == self.len() {
            return Ok(());
        }
        let kept: HashSet<usize> = keep.into_iter().collect();
        Err(HullError::RedundantPoints(
            (0..self.len())
                .filter(|i| !kept.contains(i))
                .map(|i| self.vertices[i].label.clone())
                .collect(),
        ))
    }

    /// Drops non-vertices, keeping labels and order of the survivors.
    pub fn irredundant(&self) -> VPolytope {
        let keep = extreme_point_indices(&self.points());
        VPolytope {
            dim: self.dim,
            vertices: keep.into_iter().map(|i| self.vertices[i].clone()).collect(),
        }
    }

    /// The point set as a vector set, for geometric equality checks.
    pub fn point_set(&self) -> BTreeSet<Vector> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    /// Geometric equality of the two convex hulls.
    pub fn same_hull(&self, other: &VPolytope) -> bool {
        self.dim == other.dim && self.irredundant().point_set() == other.irredundant().point_set()
    }

    /// Injective coordinate projection onto the affine hull's dimension.
    /// Full-dimensional inputs come back unchanged.
    pub fn full_dimensional_view(&self) -> VPolytope {
        let coords = independent_coordinates(&self.points());
        if coords.len() == self.dim {
            return self.clone();
        }
        VPolytope {
            dim: coords.len(),
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    label: v.label.clone(),
                    point: Vector(coords.iter().map(|&c| v.point[c].clone()).collect()),
                })
                .collect(),
        }
    }

    pub fn centroid(&self) -> Vector {
        centroid(self.vertices.iter().map(|v| &v.point), self.dim)
    }

    pub fn translate(&self, t: &Vector) -> VPolytope {
        self.map_points(|p| p + t)
    }

    pub fn map_points(&self, f: impl Fn(&Vector) -> Vector) -> VPolytope {
        VPolytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    label: v.label.clone(),
                    point: f(&v.point),
                })
                .collect(),
        }
    }
}

pub(crate) fn centroid<'a>(pts: impl Iterator<Item = &'a Vector>, dim: usize) -> Vector {
    let mut sum = Vector::zeros(dim);
    let mut n = 0i64;
    for p in pts {
        sum = &sum + p;
        n += 1;
    }
    sum.scale(&(Scalar::from_integer(BigInt::from(1)) / Scalar::from_integer(BigInt::from(n.max(1)))))
}

/// Inequality description `normal · x >= offset` for every facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub facets: Vec<Hyperplane>,
}

impl HPolytope {
    pub fn contains(&self, x: &Vector) -> bool {
        self.facets.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Vertices of the bounded polyhedron `{x : h.slack(x) >= 0 for all h}`;
    /// empty when infeasible.
    pub fn vertices(&self) -> Vec<Vector> {
        let d = self.dim;
        let mut rows: Vec<Vec<BigInt>> = self
            .facets
            .iter()
            .map(|h| {
                let mut row = vec![-h.offset.clone()];
                row.extend(h.normal.0.iter().cloned());
                primitive(integer_row(&row))
            })
            .collect();
        let mut t_row = vec![BigInt::zero(); d + 1];
        t_row[0] = BigInt::from(1);
        rows.push(t_row);
        let mut out: Vec<Vector> = dd::extreme_rays(&rows, d + 1)
            .into_iter()
            .filter(|r| r.coords[0].is_positive())
            .map(|r| {
                let t = Scalar::from_integer(r.coords[0].clone());
                Vector(
                    r.coords[1..]
                        .iter()
                        .map(|c| Scalar::from_integer(c.clone()) / &t)
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Vertex-facet incidence. Vertices are indexed as in `labels`; each facet
/// is stored as the set of vertex indices lying on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub dim: usize,
    pub labels: Vec<String>,
    pub facets: Vec<FixedBitSet>,
}

impl IncidenceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn incident(&self, vertex: usize, facet: usize) -> bool {
        self.facets[facet].contains(vertex)
    }

    /// Facets containing `vertex`.
    pub fn vertex_facets(&self, vertex: usize) -> Vec<usize> {
        (0..self.facets.len()).filter(|&f| self.facets[f].contains(vertex)).collect()
    }

    pub fn facet_labels(&self, facet: usize) -> BTreeSet<String> {
        self.facets[facet].ones().map(|v| self.labels[v].clone()).collect()
    }

    /// Facets as label sets, for label-level comparisons between realizations.
    pub fn labeled_facets(&self) -> BTreeSet<BTreeSet<String>> {
        (0..self.facets.len()).map(|f| self.facet_labels(f)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullOptions {
    pub max_points: usize,
    pub max_dim: usize,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions {
            max_points: 64,
            max_dim: 8,
        }
    }
}

/// Result of [`convex_hull`]: facets, incidence over the irredundant points
/// and the labels of input points that are not vertices.
#[derive(Debug, Clone)]
pub struct Hull {
    pub hpoly: HPolytope,
    pub incidence: IncidenceMatrix,
    pub redundant: Vec<String>,
    /// Input index of each incidence row.
    pub vertex_indices: Vec<usize>,
}

impl Hull {
    /// The irredundant points of the source, in input order.
    pub fn vertex_polytope(&self, source: &VPolytope) -> VPolytope {
        VPolytope {
            dim: source.dim,
            vertices: self.vertex_indices.iter().map(|&i| source.vertices[i].clone()).collect(),
        }
    }
}

pub fn convex_hull(p: &VPolytope) -> Result<Hull, HullError> {
    convex_hull_with(p, HullOptions::default())
}

pub fn convex_hull_with(p: &VPolytope, opts: HullOptions) -> Result<Hull, HullError> {
    if p.dim > opts.max_dim {
        return Err(HullError::DimensionTooLarge {
            dim: p.dim,
            limit: opts.max_dim,
        });
    }
    if p.len() > opts.max_points {
        return Err(HullError::TooManyPoints {
            points: p.len(),
            limit: opts.max_points,
        });
    }
    let affine_dim = p.affine_dimension();
    if affine_dim != p.dim as isize {
        return Err(HullError::NotFullDimensional { affine_dim, dim: p.dim });
    }
    let points = p.points();
    let (facets, zero_sets) = facets_of(&points, p.dim);
    let vertex_indices = vertex_indices(&points, p.dim, &facets, &zero_sets);

    let kept: HashSet<usize> = vertex_indices.iter().copied().collect();
    let redundant = (0..p.len())
        .filter(|i| !kept.contains(i))
        .map(|i| p.vertices[i].label.clone())
        .collect();

    let n = vertex_indices.len();
    let incidence_sets = zero_sets
        .iter()
        .map(|z| {
            let mut s = FixedBitSet::with_capacity(n);
            for (row, &orig) in vertex_indices.iter().enumerate() {
                if z.contains(orig) {
                    s.insert(row);
                }
            }
            s
        })
        .collect();
    Ok(Hull {
        hpoly: HPolytope { dim: p.dim, facets },
        incidence: IncidenceMatrix {
            dim: p.dim,
            labels: vertex_indices.iter().map(|&i| p.vertices[i].label.clone()).collect(),
            facets: incidence_sets,
        },
        redundant,
        vertex_indices,
    })
}

/// Facets (canonical, inward) of a full-dimensional point set together with
/// the set of input indices on each, sorted by hyperplane.
fn facets_of(points: &[Vector], dim: usize) -> (Vec<Hyperplane>, Vec<FixedBitSet>) {
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut row = vec![Scalar::from_integer(BigInt::from(1))];
            row.extend(p.0.iter().cloned());
            primitive(integer_row(&row))
        })
        .collect();
    let rays = dd::extreme_rays(&rows, dim + 1);
    let mut facets: Vec<(Hyperplane, FixedBitSet)> = rays
        .into_iter()
        .map(|r| {
            let normal = Vector(r.coords[1..].iter().cloned().map(Scalar::from_integer).collect());
            let offset = Scalar::from_integer(-r.coords[0].clone());
            (Hyperplane { normal, offset }.canonical_oriented(), r.zero)
        })
        .collect();
    facets.sort_by(|a, b| a.0.cmp(&b.0));
    facets.dedup_by(|a, b| a.0 == b.0);
    facets.into_iter().unzip()
}

/// Input indices that are vertices: the normals of the facets through the
/// point have full rank, and no earlier input point coincides with it.
fn vertex_indices(points: &[Vector], dim: usize, facets: &[Hyperplane], zero: &[FixedBitSet]) -> Vec<usize> {
    let mut seen = HashSet::new();
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vector> = facets
                .iter()
                .zip(zero)
                .filter(|(_, z)| z.contains(i))
                .map(|(h, _)| h.normal.clone())
                .collect();
            normals.len() >= dim && arith::rank(&normals).expect("same length") == dim && seen.insert(points[i].clone())
        })
        .collect()
}

/// Coordinates (0-based) whose projection is injective on the affine hull.
pub(crate) fn independent_coordinates(points: &[Vector]) -> Vec<usize> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p - first).collect();
    if diffs.is_empty() {
        return Vec::new();
    }
    arith::eliminate(arith::to_integer_matrix(&diffs), dim, false).pivots
}

/// Indices of the extreme points of an arbitrary finite point set (any
/// affine dimension), first occurrence of duplicates kept.
pub fn extreme_point_indices(points: &[Vector]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let coords = independent_coordinates(points);
    let k = coords.len();
    if k == 0 {
        return vec![0];
    }
    let projected: Vec<Vector> = points
        .iter()
        .map(|p| Vector(coords.iter().map(|&c| p[c].clone()).collect()))
        .collect();
    let (facets, zero) = facets_of(&projected, k);
    vertex_indices(&projected, k, &facets, &zero)
}

/// Facets by exhaustive enumeration of affinely independent d-subsets.
/// Slow; kept as an independent cross-check of [`convex_hull`].
pub fn brute_force_facets(points: &[Vector], dim: usize) -> Vec<Hyperplane> {
    let n = points.len();
    let mut found = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    if n < dim {
        return Vec::new();
    }
    loop {
        let rows: Vec<Vector> = subset
            .iter()
            .map(|&i| {
                let mut r = vec![Scalar::from_integer(BigInt::from(-1))];
                r.extend(points[i].0.iter().cloned());
                Vector(r)
            })
            .collect();
        let ker = arith::nullspace(&rows).expect("uniform rows");
        if ker.len() == 1 {
            let y = &ker[0];
            let normal = Vector(y.0[1..].to_vec());
            if !normal.is_zero() {
                let h = Hyperplane {
                    normal,
                    offset: y.0[0].clone(),
                };
                let slacks: Vec<Scalar> = points.iter().map(|p| h.slack(p)).collect();
                if slacks.iter().all(|s| !s.is_negative()) {
                    found.insert(h.canonical_oriented());
                } else if slacks.iter().all(|s| !s.is_positive()) {
                    found.insert(h.flipped().canonical_oriented());
                }
            }
        }
        if !next_combination(&mut subset, n) {
            return found.into_iter().collect();
        }
    }
}

/// Advances `subset` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] != i + n - k) else {
        return false;
    };
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}
