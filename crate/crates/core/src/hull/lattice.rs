use std::collections::{BTreeSet, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::{HullError, IncidenceMatrix, VPolytope};
use crate::arith::Vector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// -1 for the empty face, d for the polytope itself.
    pub rank: isize,
    pub vertices: FixedBitSet,
}

/// All faces of a polytope, graded by dimension.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub dim: usize,
    pub labels: Vec<String>,
    /// Sorted by rank, then by vertex set.
    pub faces: Vec<Face>,
}

impl FaceLattice {
    /// `(f_0, ..., f_{d-1})`
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim as isize)
            .map(|r| self.faces.iter().filter(|f| f.rank == r).count())
            .collect()
    }

    pub fn faces_of_rank(&self, rank: isize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.rank == rank)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn face_labels(&self, face: &Face) -> BTreeSet<String> {
        face.vertices.ones().map(|v| self.labels[v].clone()).collect()
    }
}

/// Builds the face lattice top-down: the facets of a rank-k face are the
/// inclusion-maximal proper intersections with facets of the polytope.
pub fn face_lattice(inc: &IncidenceMatrix) -> Result<FaceLattice, HullError> {
    let n = inc.vertex_count();
    let d = inc.dim;
    let mut top = FixedBitSet::with_capacity(n);
    top.insert_range(..);

    let mut layers: Vec<Vec<FixedBitSet>> = Vec::new();
    let mut facets: Vec<FixedBitSet> = inc.facets.clone();
    facets.sort_by(|a, b| a.ones().cmp(b.ones()));
    facets.dedup();
    layers.push(facets.clone());

    for _rank in (0..d as isize - 1).rev() {
        let upper = layers.last().expect("nonempty");
        let mut next: HashSet<FixedBitSet> = HashSet::new();
        for face in upper {
            let mut candidates: Vec<FixedBitSet> = Vec::new();
            for facet in &inc.facets {
                let mut c = face.clone();
                c.intersect_with(facet);
                if c != *face && !c.is_clear() {
                    candidates.push(c);
                }
            }
            candidates.sort_by_key(|c| std::cmp::Reverse(c.count_ones(..)));
            let mut maximal: Vec<FixedBitSet> = Vec::new();
            for c in candidates {
                if !maximal.iter().any(|m| c.is_subset(m)) {
                    maximal.push(c);
                }
            }
            next.extend(maximal);
        }
        let mut layer: Vec<FixedBitSet> = next.into_iter().collect();
        layer.sort_by(|a, b| a.ones().cmp(b.ones()));
        layers.push(layer);
    }

    if d >= 2 {
        let ridges = &layers[1];
        for r in ridges {
            let containing = inc.facets.iter().filter(|f| r.is_subset(f)).count();
            if containing != 2 {
                let labels: Vec<&str> = r.ones().map(|v| inc.labels[v].as_str()).collect();
                return Err(HullError::InconsistentIncidence(format!(
                    "ridge {labels:?} lies in {containing} facets"
                )));
            }
        }
    }
    if let Some(vertices) = layers.last() {
        if vertices.len() != n || vertices.iter().any(|v| v.count_ones(..) != 1) {
            return Err(HullError::InconsistentIncidence(
                "rank-0 faces are not the vertices".into(),
            ));
        }
    }

    let mut faces = vec![Face {
        rank: -1,
        vertices: FixedBitSet::with_capacity(n),
    }];
    for (i, layer) in layers.into_iter().rev().enumerate() {
        faces.extend(layer.into_iter().map(|v| Face {
            rank: i as isize,
            vertices: v,
        }));
    }
    faces.push(Face {
        rank: d as isize,
        vertices: top,
    });
    Ok(FaceLattice {
        dim: d,
        labels: inc.labels.clone(),
        faces,
    })
}

/// A graph whose nodes are points; edges are index pairs `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricGraph {
    pub labels: Vec<String>,
    pub points: Vec<Vector>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl GeometricGraph {
    pub fn new(labels: Vec<String>, points: Vec<Vector>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        GeometricGraph { labels, points, edges }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn has_labeled_edge(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge(i, j),
            _ => false,
        }
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All triples of pairwise adjacent nodes, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let adj = self.neighbors();
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for &c in &adj[a] {
                if c > b && self.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort();
        out
    }

    /// Subgraph induced on `nodes` (indices into this graph), relabelled
    /// in the given order.
    pub fn induced(&self, nodes: &[usize]) -> GeometricGraph {
        let pos = |v: usize| nodes.iter().position(|&n| n == v);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect::<Vec<_>>();
        GeometricGraph::new(
            nodes.iter().map(|&v| self.labels[v].clone()).collect(),
            nodes.iter().map(|&v| self.points[v].clone()).collect(),
            edges,
        )
    }

    pub fn labeled_edges(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.labels[a].clone(), self.labels[b].clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }
}

/// The 1-skeleton: rank-1 faces of the lattice, embedded at the polytope's
/// points.
pub fn edge_graph(lat: &FaceLattice, p: &VPolytope) -> Result<GeometricGraph, HullError> {
    let points = lat
        .labels
        .iter()
        .map(|l| p.point(l).cloned().ok_or(HullError::LabelMismatch))
        .collect::<Result<Vec<_>, _>>()?;
    if p.len() != lat.labels.len() {
        return Err(HullError::LabelMismatch);
    }
    let edges = lat.faces_of_rank(1).map(|f| {
        let mut it = f.vertices.ones();
        let a = it.next().expect("edge has two vertices");
        let b = it.next().expect("edge has two vertices");
        (a, b)
    });
    Ok(GeometricGraph::new(lat.labels.clone(), points, edges))
}

/// Edge test straight from the incidence: `{u, v}` is an edge iff the
/// facets containing both meet exactly in `{u, v}`.
pub fn edges_from_incidence(inc: &IncidenceMatrix) -> BTreeSet<(usize, usize)> {
    let n = inc.vertex_count();
    let mut out = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let mut common = FixedBitSet::with_capacity(n);
            common.insert_range(..);
            let mut any = false;
            for f in &inc.facets {
                if f.contains(u) && f.contains(v) {
                    common.intersect_with(f);
                    any = true;
                }
            }
            if any && common.count_ones(..) == 2 {
                out.insert((u, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;
    use crate::hull::tests::{cube, simplex};

    #[test]
    fn square_and_cube_f_vectors() {
        let lat = face_lattice(&convex_hull(&cube(2)).unwrap().incidence).unwrap();
        assert_eq!(lat.f_vector(), vec![4, 4]);
        let lat = face_lattice(&convex_hull(&cube(3)).unwrap().incidence).unwrap();
        assert_eq!(lat.f_vector(), vec![8, 12, 6]);
        let lat = face_lattice(&convex_hull(&cube(4)).unwrap().incidence).unwrap();
        assert_eq!(lat.f_vector(), vec![16, 32, 24, 8]);
        assert_eq!(lat.euler_characteristic(), 0);
    }

    #[test]
    fn cube_edge_graph() {
        let c = cube(3);
        let h = convex_hull(&c).unwrap();
        let lat = face_lattice(&h.incidence).unwrap();
        let g = edge_graph(&lat, &c).unwrap();
        assert_eq!(g.edges.len(), 12);
        assert_eq!(g.edges, edges_from_incidence(&h.incidence));
        assert!(g.is_connected());
        assert!(g.triangles().is_empty());
    }

    #[test]
    fn simplex_graph_is_complete() {
        let s = simplex(4);
        let lat = face_lattice(&convex_hull(&s).unwrap().incidence).unwrap();
        let g = edge_graph(&lat, &s).unwrap();
        assert_eq!(g.edges.len(), 10);
        assert_eq!(g.triangles().len(), 10);
        assert_eq!(lat.f_vector(), vec![5, 10, 10, 5]);
    }

    #[test]
    fn broken_incidence_is_rejected() {
        let mut inc = convex_hull(&cube(3)).unwrap().incidence;
        inc.facets.pop();
        assert!(matches!(face_lattice(&inc), Err(HullError::InconsistentIncidence(_))));
    }

    #[test]
    fn label_mismatch() {
        let lat = face_lattice(&convex_hull(&cube(2)).unwrap().incidence).unwrap();
        assert_eq!(edge_graph(&lat, &simplex(2)).unwrap_err(), HullError::LabelMismatch);
    }
}
