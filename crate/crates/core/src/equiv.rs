//! Combinatorial equivalence through vertex-facet incidence isomorphism,
//! homothety detection, and the segment-scaling correspondence check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Scalar, Vector};
use crate::families::{segment_sum, FamilyError};
use crate::hull::{convex_hull, HullError, IncidenceMatrix, VPolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("{0} has redundant points {1:?}")]
    Redundant(&'static str, Vec<String>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("segment-scaling correspondence failed: {0}")]
    Lemma1(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Vertex bijection (by label) and facet bijection (by hull facet index).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeIsomorphism {
    pub vertices: Vec<(String, String)>,
    pub facets: Vec<(usize, usize)>,
}

impl LatticeIsomorphism {
    pub fn vertex_map(&self) -> BTreeMap<String, String> {
        self.vertices.iter().cloned().collect()
    }

    pub fn inverse(&self) -> LatticeIsomorphism {
        let mut vertices: Vec<_> = self.vertices.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        vertices.sort();
        let mut facets: Vec<_> = self.facets.iter().map(|&(a, b)| (b, a)).collect();
        facets.sort();
        LatticeIsomorphism { vertices, facets }
    }

    /// `other ∘ self`
    pub fn then(&self, other: &LatticeIsomorphism) -> LatticeIsomorphism {
        let vm = other.vertex_map();
        let fm: BTreeMap<usize, usize> = other.facets.iter().copied().collect();
        LatticeIsomorphism {
            vertices: self.vertices.iter().map(|(a, b)| (a.clone(), vm[b].clone())).collect(),
            facets: self.facets.iter().map(|&(a, b)| (a, fm[&b])).collect(),
        }
    }

    /// Labels whose image differs from themselves.
    pub fn moved(&self) -> BTreeMap<String, String> {
        self.vertices.iter().filter(|(a, b)| a != b).cloned().collect()
    }

    /// Checks the maps against two incidence matrices.
    pub fn is_valid_for(&self, source: &IncidenceMatrix, target: &IncidenceMatrix) -> bool {
        let vm = self.vertex_map();
        if vm.len() != source.vertex_count() || self.facets.len() != source.facet_count() || source.facet_count() != target.facet_count() {
            return false;
        }
        let images: BTreeSet<&String> = vm.values().collect();
        if images.len() != target.vertex_count() {
            return false;
        }
        self.facets.iter().all(|&(f, g)| {
            let mapped: BTreeSet<String> = source.facet_labels(f).iter().filter_map(|l| vm.get(l).cloned()).collect();
            g < target.facet_count() && mapped == target.facet_labels(g)
        })
    }
}

fn checked_incidence(p: &VPolytope, name: &'static str) -> Result<IncidenceMatrix, EquivError> {
    let hull = convex_hull(p)?;
    if !hull.redundant.is_empty() {
        return Err(EquivError::Redundant(name, hull.redundant));
    }
    Ok(hull.incidence)
}

/// Some isomorphism between the face lattices of `p1` and `p2`, or `None`
/// when none exists.
pub fn combinatorially_equivalent(p1: &VPolytope, p2: &VPolytope) -> Result<Option<LatticeIsomorphism>, EquivError> {
    let a = checked_incidence(p1, "first polytope")?;
    let b = checked_incidence(p2, "second polytope")?;
    Ok(incidence_isomorphism(&a, &b))
}

/// A colour with the sorted colours of its neighbours.
type Signature = (usize, Vec<usize>);

/// Joint colour refinement of the vertex-facet incidence graphs of both
/// inputs. Returns (vertex colours, facet colours) per matrix.
fn refine(a: &IncidenceMatrix, b: &IncidenceMatrix) -> [(Vec<usize>, Vec<usize>); 2] {
    let mats = [a, b];
    let mut colors: [(Vec<usize>, Vec<usize>); 2] = [
        (vec![0; a.vertex_count()], vec![1; a.facet_count()]),
        (vec![0; b.vertex_count()], vec![1; b.facet_count()]),
    ];
    let vertex_facets: Vec<Vec<Vec<usize>>> = mats
        .iter()
        .map(|m| (0..m.vertex_count()).map(|v| m.vertex_facets(v)).collect())
        .collect();
    let mut classes = 2;
    loop {
        let mut dict: HashMap<Signature, usize> = HashMap::new();
        let mut next: [(Vec<usize>, Vec<usize>); 2] = Default::default();
        // Signatures are collected for both sides before numbering, in a
        // canonical order, so equal signatures get equal colours.
        let mut sigs: Vec<(usize, bool, usize, Signature)> = Vec::new();
        for (k, m) in mats.iter().enumerate() {
            let (vc, fc) = &colors[k];
            for v in 0..m.vertex_count() {
                let mut nb: Vec<usize> = vertex_facets[k][v].iter().map(|&f| fc[f]).collect();
                nb.sort_unstable();
                sigs.push((k, true, v, (vc[v], nb)));
            }
            for (f, facet) in m.facets.iter().enumerate() {
                let mut nb: Vec<usize> = facet.ones().map(|v| vc[v]).collect();
                nb.sort_unstable();
                sigs.push((k, false, f, (fc[f], nb)));
            }
        }
        let mut ordered: Vec<&Signature> = sigs.iter().map(|s| &s.3).collect();
        ordered.sort();
        ordered.dedup();
        for s in ordered {
            let id = dict.len();
            dict.insert(s.clone(), id);
        }
        next[0] = (vec![0; a.vertex_count()], vec![0; a.facet_count()]);
        next[1] = (vec![0; b.vertex_count()], vec![0; b.facet_count()]);
        for (k, is_vertex, i, sig) in &sigs {
            let c = dict[sig];
            if *is_vertex {
                next[*k].0[*i] = c;
            } else {
                next[*k].1[*i] = c;
            }
        }
        colors = next;
        if dict.len() == classes {
            return colors;
        }
        classes = dict.len();
    }
}

fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Base label with trailing primes removed, used to prefer the "same"
/// vertex when breaking ties.
fn stem(label: &str) -> &str {
    label.trim_end_matches('\'')
}

/// Backtracking search for a vertex bijection carrying facets onto facets.
pub fn incidence_isomorphism(a: &IncidenceMatrix, b: &IncidenceMatrix) -> Option<LatticeIsomorphism> {
    let n = a.vertex_count();
    let m = a.facet_count();
    if a.dim != b.dim || n != b.vertex_count() || m != b.facet_count() {
        return None;
    }
    let [(va, fa), (vb, fb)] = refine(a, b);
    if histogram(&va) != histogram(&vb) || histogram(&fa) != histogram(&fb) {
        return None;
    }

    let class_size = histogram(&va);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&va[v]], va[v], v));

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut c: Vec<usize> = (0..n).filter(|&w| vb[w] == va[v]).collect();
            c.sort_by_key(|&w| (stem(&b.labels[w]) != stem(&a.labels[v]), b.labels[w].clone()));
            c
        })
        .collect();
    let facet_cands: Vec<Vec<usize>> = (0..m).map(|f| (0..m).filter(|&g| fb[g] == fa[f]).collect()).collect();

    struct Search<'s> {
        a: &'s IncidenceMatrix,
        b: &'s IncidenceMatrix,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize, facets: Vec<Vec<usize>>) -> Option<Vec<Vec<usize>>> {
            if depth == self.order.len() {
                return Some(facets);
            }
            let v = self.order[depth];
            for wi in 0..self.candidates[v].len() {
                let w = self.candidates[v][wi];
                if self.used[w] {
                    continue;
                }
                let mut narrowed = Vec::with_capacity(facets.len());
                let mut dead = false;
                for (f, cands) in facets.iter().enumerate() {
                    let inside = self.a.facets[f].contains(v);
                    let kept: Vec<usize> = cands.iter().copied().filter(|&g| self.b.facets[g].contains(w) == inside).collect();
                    if kept.is_empty() {
                        dead = true;
                        break;
                    }
                    narrowed.push(kept);
                }
                if dead {
                    continue;
                }
                self.map[v] = Some(w);
                self.used[w] = true;
                if let Some(done) = self.go(depth + 1, narrowed) {
                    return Some(done);
                }
                self.map[v] = None;
                self.used[w] = false;
            }
            None
        }
    }

    let mut search = Search {
        a,
        b,
        order,
        candidates,
        map: vec![None; n],
        used: vec![false; n],
    };
    let facets = search.go(0, facet_cands)?;
    let facet_map: Vec<usize> = facets.iter().map(|c| c[0]).collect();
    let distinct: BTreeSet<usize> = facet_map.iter().copied().collect();
    if distinct.len() != m || facets.iter().any(|c| c.len() != 1) {
        return None;
    }
    let mut vertices: Vec<(String, String)> = (0..n)
        .map(|v| (a.labels[v].clone(), b.labels[search.map[v].expect("complete")].clone()))
        .collect();
    vertices.sort();
    Some(LatticeIsomorphism {
        vertices,
        facets: facet_map.into_iter().enumerate().collect(),
    })
}

/// `target = ratio * source + shift` as point sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomothetyWitness {
    pub ratio: Scalar,
    pub shift: Vector,
}

/// Positive homothety between the two point sets, if any. The
/// lexicographically extreme points must correspond, which pins down the
/// only candidate.
pub fn homothetic(p1: &VPolytope, p2: &VPolytope) -> Option<HomothetyWitness> {
    let s1 = p1.point_set();
    let s2 = p2.point_set();
    if p1.dim != p2.dim || s1.len() != s2.len() || s1.is_empty() {
        return None;
    }
    let (min1, max1) = (s1.first()?, s1.last()?);
    let (min2, max2) = (s2.first()?, s2.last()?);
    let span1 = max1 - min1;
    let span2 = max2 - min2;
    let ratio = match span1.0.iter().position(|c| !c.is_zero()) {
        None => Scalar::one(),
        Some(j) => &span2[j] / &span1[j],
    };
    if !ratio.is_positive() || span1.scale(&ratio) != span2 {
        return None;
    }
    let shift = min2 - &min1.scale(&ratio);
    let image: BTreeSet<Vector> = s1.iter().map(|p| &p.scale(&ratio) + &shift).collect();
    (image == s2).then_some(HomothetyWitness { ratio, shift })
}

#[derive(Debug, Clone)]
pub struct Lemma1Report {
    pub vertices: usize,
    /// Facets off the translated end (`F`).
    pub base_facets: usize,
    /// Facets on the translated end (`F + a` against `F + k a`).
    pub top_facets: usize,
    /// Facets containing a translated edge (`F + [0, a]`).
    pub side_facets: usize,
    pub isomorphism: LatticeIsomorphism,
}

/// Builds `p + [0, a]` and `p + [0, k a]` and checks that the natural
/// correspondence (`q <-> q`, `q + a <-> q + k a`) matches vertices and
/// facets of each kind, and that a lattice isomorphism is found.
pub fn verify_lemma1(p: &VPolytope, a: &Vector, k: &Scalar) -> Result<Lemma1Report, EquivError> {
    if a.is_zero() {
        return Err(EquivError::InvalidArgument("direction is zero".into()));
    }
    if !k.is_positive() || k.is_one() {
        return Err(EquivError::InvalidArgument(format!("k = {k} must be positive and different from 1")));
    }
    let p1 = segment_sum(p, a, &Scalar::one())?;
    let p2 = segment_sum(p, a, k)?;
    let inc1 = checked_incidence(&p1, "p + [0, a]")?;
    let inc2 = checked_incidence(&p2, "p + [0, ka]")?;

    let labels1: BTreeSet<&String> = inc1.labels.iter().collect();
    let labels2: BTreeSet<&String> = inc2.labels.iter().collect();
    if labels1 != labels2 {
        let diff: Vec<&String> = labels1.symmetric_difference(&labels2).copied().collect();
        return Err(EquivError::Lemma1(format!("vertex correspondence fails at {diff:?}")));
    }

    let facets2 = inc2.labeled_facets();
    let (mut base, mut top, mut side) = (0, 0, 0);
    for f in 0..inc1.facet_count() {
        let set = inc1.facet_labels(f);
        let shifted = set.iter().filter(|l| l.ends_with('^')).count();
        match shifted {
            0 => base += 1,
            s if s == set.len() => top += 1,
            _ => side += 1,
        }
        if !facets2.contains(&set) {
            return Err(EquivError::Lemma1(format!("facet {set:?} of p + [0, a] has no counterpart")));
        }
    }
    if inc1.facet_count() != inc2.facet_count() {
        return Err(EquivError::Lemma1(format!(
            "facet counts differ: {} vs {}",
            inc1.facet_count(),
            inc2.facet_count()
        )));
    }
    let isomorphism = incidence_isomorphism(&inc1, &inc2)
        .ok_or_else(|| EquivError::Lemma1("no lattice isomorphism found".into()))?;
    Ok(Lemma1Report {
        vertices: inc1.vertex_count(),
        base_facets: base,
        top_facets: top,
        side_facets: side,
        isomorphism,
    })
}
