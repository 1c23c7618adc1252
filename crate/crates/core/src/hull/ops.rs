use num_traits::{One, Signed, Zero};

use super::{convex_hull, edge_graph, face_lattice, HullError, VPolytope, Vertex};
use crate::arith::{self, Hyperplane, Scalar, Vector};

/// Slices `p` by a hyperplane avoiding all vertices. Section vertices are
/// labelled `u|v` after the crossed edge, `u` on the negative side.
pub fn cross_section(p: &VPolytope, h: &Hyperplane) -> Result<VPolytope, HullError> {
    let hull = convex_hull(p)?;
    let vp = hull.vertex_polytope(p);
    let slack: Vec<Scalar> = vp.vertices.iter().map(|v| h.slack(&v.point)).collect();
    if let Some(i) = slack.iter().position(Zero::is_zero) {
        return Err(HullError::VertexOnHyperplane(vp.vertices[i].label.clone()));
    }
    let lat = face_lattice(&hull.incidence)?;
    let g = edge_graph(&lat, &vp)?;
    let mut out = Vec::new();
    for &(a, b) in &g.edges {
        if slack[a].is_positive() == slack[b].is_positive() {
            continue;
        }
        let (lo, hi) = if slack[a].is_negative() { (a, b) } else { (b, a) };
        let t = &slack[lo] / (&slack[lo] - &slack[hi]);
        let (u, v) = (&vp.vertices[lo].point, &vp.vertices[hi].point);
        let point = u.add_scaled(&t, &(v - u));
        out.push((format!("{}|{}", vp.vertices[lo].label, vp.vertices[hi].label), point));
    }
    if out.is_empty() {
        return Err(HullError::EmptyIntersection);
    }
    VPolytope::new(p.dim, out)
}

/// `x -> (A x + b) / (c · x + delta)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveMap {
    pub linear: Vec<Vector>,
    pub translation: Vector,
    pub denominator: Vector,
    pub delta: Scalar,
}

impl ProjectiveMap {
    pub fn identity(dim: usize) -> Self {
        ProjectiveMap {
            linear: (1..=dim).map(|i| Vector::unit(dim, i)).collect(),
            translation: Vector::zeros(dim),
            denominator: Vector::zeros(dim),
            delta: Scalar::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// The (d+1)x(d+1) homogeneous matrix `[[A, b], [c, delta]]`.
    pub fn homogeneous(&self) -> Vec<Vector> {
        let mut rows: Vec<Vector> = self
            .linear
            .iter()
            .zip(&self.translation.0)
            .map(|(row, b)| {
                let mut r = row.0.clone();
                r.push(b.clone());
                Vector(r)
            })
            .collect();
        let mut last = self.denominator.0.clone();
        last.push(self.delta.clone());
        rows.push(Vector(last));
        rows
    }

    pub fn denominator_at(&self, x: &Vector) -> Scalar {
        self.denominator.dot(x) + &self.delta
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let den = self.denominator_at(x);
        Vector(
            self.linear
                .iter()
                .zip(&self.translation.0)
                .map(|(row, b)| (row.dot(x) + b) / &den)
                .collect(),
        )
    }
}

/// Applies an admissible projective map (positive denominator on every
/// vertex, invertible homogeneous matrix) and checks that the image has the
/// same labelled facet structure.
pub fn projective_map(p: &VPolytope, map: &ProjectiveMap) -> Result<VPolytope, HullError> {
    let d = p.dim;
    if map.dim() != d || map.linear.len() != d || map.denominator.len() != d || map.linear.iter().any(|r| r.len() != d) {
        return Err(HullError::NotAdmissible(format!("map is not {d}-dimensional")));
    }
    for v in &p.vertices {
        if !map.denominator_at(&v.point).is_positive() {
            return Err(HullError::NotAdmissible(format!(
                "denominator is not positive at {}",
                v.label
            )));
        }
    }
    if arith::rank(&map.homogeneous())? != d + 1 {
        return Err(HullError::SingularMap);
    }
    let image = VPolytope {
        dim: d,
        vertices: p
            .vertices
            .iter()
            .map(|v| Vertex {
                label: v.label.clone(),
                point: map.apply(&v.point),
            })
            .collect(),
    };
    if p.is_full_dimensional() {
        let before = convex_hull(p)?;
        let after = convex_hull(&image)?;
        if before.redundant != after.redundant || before.incidence.labeled_facets() != after.incidence.labeled_facets() {
            return Err(HullError::CombinatoricsChanged);
        }
    }
    Ok(image)
}
