use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::chain::{find_triangular_chain, verify_triangular_chain, ChainMode, TriangularChain};
use super::{check_summand_pair, constraint_rank, edge_constraints, skeleton, summand_space, DecompError, Skeleton};
use crate::arith::{self, Scalar, Vector};
use crate::hull::{GeometricGraph, VPolytope};

/// A facet (by its canonical equation) and a chain vertex lying on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetTouch {
    pub facet: String,
    pub vertex: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Indecomposable,
    Decomposable,
}

/// Self-contained proof object, checked by [`verify_certificate`] against
/// the polytope alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    ChainCoversVertices {
        triangles: Vec<[String; 3]>,
    },
    SubgraphTouchesFacets {
        triangles: Vec<[String; 3]>,
        facets: Vec<FacetTouch>,
    },
    /// Two indecomposable vertex-disjoint subgraphs joined by two edges on
    /// skew lines. Edges run from the first part to the second.
    SkewGluing {
        parts: Box<[Certificate; 2]>,
        edges: [[String; 2]; 2],
    },
    RankWitness {
        dimension: usize,
        #[serde(rename = "basisFields")]
        basis_fields: Vec<BTreeMap<String, Vector>>,
    },
    SummandPair {
        #[serde(with = "crate::io::vpoly_text")]
        q: VPolytope,
        #[serde(with = "crate::io::vpoly_text")]
        r: VPolytope,
    },
}

impl Certificate {
    pub fn claim(&self) -> Claim {
        match self {
            Certificate::SummandPair { .. } => Claim::Decomposable,
            _ => Claim::Indecomposable,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ChainCoversVertices { .. } => "ChainCoversVertices",
            Certificate::SubgraphTouchesFacets { .. } => "SubgraphTouchesFacets",
            Certificate::SkewGluing { .. } => "SkewGluing",
            Certificate::RankWitness { .. } => "RankWitness",
            Certificate::SummandPair { .. } => "SummandPair",
        }
    }

    fn chain(triangles: &[[String; 3]]) -> TriangularChain {
        TriangularChain {
            triangles: triangles.to_vec(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> DecompError {
    DecompError::InvalidCertificate(msg.into())
}

/// Vertex set of an indecomposable subgraph certificate, after checking it
/// inside the subgraph of `g` it induces.
fn subgraph_vertices(cert: &Certificate, g: &GeometricGraph) -> Result<BTreeSet<String>, DecompError> {
    match cert {
        Certificate::ChainCoversVertices { triangles } => {
            let chain = Certificate::chain(triangles);
            let labels = chain.vertex_labels();
            let nodes = labels
                .iter()
                .map(|l| g.index_of(l).ok_or_else(|| DecompError::UnknownLabel(l.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            if !verify_triangular_chain(&g.induced(&nodes), &chain, ChainMode::CoverVertices, None)? {
                return Err(invalid("triangular chain is not valid"));
            }
            Ok(labels)
        }
        Certificate::SkewGluing { parts, edges } => {
            let [a, b] = parts.as_ref();
            let e1 = (edges[0][0].as_str(), edges[0][1].as_str());
            let e2 = (edges[1][0].as_str(), edges[1][1].as_str());
            if !verify_skew_gluing(a, b, e1, e2, g)? {
                return Err(invalid("connector edges are not disjoint skew edges"));
            }
            let mut all = subgraph_vertices(a, g)?;
            all.extend(subgraph_vertices(b, g)?);
            Ok(all)
        }
        other => Err(invalid(format!("{} does not certify a subgraph", other.kind()))),
    }
}

/// Checks the two parts and the connecting edges `[a_1, b_1]`, `[a_2, b_2]`
/// (`a_i` in the first part, `b_i` in the second). Invalid parts and
/// misassigned endpoints are errors; non-edges, shared endpoints and
/// non-skew lines give `false`.
pub fn verify_skew_gluing(
    cert_a: &Certificate,
    cert_b: &Certificate,
    e1: (&str, &str),
    e2: (&str, &str),
    g: &GeometricGraph,
) -> Result<bool, DecompError> {
    let a = subgraph_vertices(cert_a, g)?;
    let b = subgraph_vertices(cert_b, g)?;
    if !a.is_disjoint(&b) {
        return Err(invalid("glued parts share vertices"));
    }
    for (x, y) in [e1, e2] {
        if !a.contains(x) || !b.contains(y) {
            return Err(invalid(format!("edge {x}-{y} does not run from the first part to the second")));
        }
    }
    if e1.0 == e2.0 || e1.1 == e2.1 {
        return Ok(false);
    }
    if !g.has_labeled_edge(e1.0, e1.1) || !g.has_labeled_edge(e2.0, e2.1) {
        return Ok(false);
    }
    let pt = |l: &str| &g.points[g.index_of(l).expect("checked above")];
    Ok(arith::lines_skew(pt(e1.0), pt(e1.1), pt(e2.0), pt(e2.1))?)
}

fn facet_equations(sk: &Skeleton) -> Vec<String> {
    sk.hull.hpoly.facets.iter().map(|h| h.equation()).collect()
}

/// Checks `cert` against `p`. `Ok(())` means the certificate proves its
/// claim; a refuted certificate gives `InvalidCertificate`.
pub fn verify_certificate(cert: &Certificate, p: &VPolytope) -> Result<(), DecompError> {
    let sk = skeleton(p)?;
    let g = &sk.graph;
    let d = p.dim;
    match cert {
        Certificate::ChainCoversVertices { triangles } => {
            if verify_triangular_chain(g, &Certificate::chain(triangles), ChainMode::CoverVertices, None)? {
                Ok(())
            } else {
                Err(invalid("chain does not cover the graph"))
            }
        }
        Certificate::SubgraphTouchesFacets { triangles, facets } => {
            let chain = Certificate::chain(triangles);
            if !verify_triangular_chain(g, &chain, ChainMode::TouchFacets, Some(&sk.hull.incidence))? {
                return Err(invalid("chain does not touch every facet"));
            }
            let labels = chain.vertex_labels();
            let equations = facet_equations(&sk);
            let listed: BTreeMap<&str, &str> = facets.iter().map(|t| (t.facet.as_str(), t.vertex.as_str())).collect();
            for (f, eq) in equations.iter().enumerate() {
                let vertex = listed.get(eq.as_str()).ok_or_else(|| invalid(format!("facet {eq} not listed")))?;
                let on_facet = sk.hull.incidence.facet_labels(f).contains(*vertex);
                if !on_facet || !labels.contains(*vertex) {
                    return Err(invalid(format!("{vertex} is not a chain vertex on {eq}")));
                }
            }
            if listed.len() != equations.len() {
                return Err(invalid("facet map lists hyperplanes that are not facets"));
            }
            Ok(())
        }
        Certificate::SkewGluing { .. } => {
            let covered = subgraph_vertices(cert, g)?;
            if covered.len() == g.node_count() {
                return Ok(());
            }
            let inc = &sk.hull.incidence;
            let untouched = (0..inc.facet_count()).find(|&f| inc.facet_labels(f).is_disjoint(&covered));
            match untouched {
                None => Ok(()),
                Some(f) => Err(invalid(format!("glued subgraph misses facet {}", sk.hull.hpoly.facets[f].equation()))),
            }
        }
        Certificate::RankWitness { dimension, basis_fields } => {
            if *dimension != d + 1 || basis_fields.len() != *dimension {
                return Err(invalid(format!("rank witness must list {} fields", d + 1)));
            }
            let n = g.node_count();
            let expected_rank = n * d - (d + 1);
            if constraint_rank(g, d)? != expected_rank {
                return Err(invalid("edge constraints leave more than translations and scaling"));
            }
            let rows = edge_constraints(g, d)?;
            let mut flat = Vec::with_capacity(basis_fields.len());
            for field in basis_fields {
                let keys: BTreeSet<&String> = field.keys().collect();
                let labels: BTreeSet<&String> = g.labels.iter().collect();
                if keys != labels {
                    return Err(invalid("basis field labels differ from the vertices"));
                }
                let mut x = Vec::with_capacity(n * d);
                for l in &g.labels {
                    let v = &field[l];
                    if v.len() != d {
                        return Err(invalid(format!("field value at {l} has wrong length")));
                    }
                    x.extend(v.0.iter().cloned());
                }
                let x = Vector(x);
                for row in &rows {
                    let r = Vector(row.iter().cloned().map(Scalar::from_integer).collect());
                    if !r.dot(&x).is_zero() {
                        return Err(invalid("basis field bends an edge"));
                    }
                }
                flat.push(x);
            }
            if arith::rank(&flat)? != *dimension {
                return Err(invalid("basis fields are dependent"));
            }
            Ok(())
        }
        Certificate::SummandPair { q, r } => check_summand_pair(&sk.vertices, q, r).map_err(invalid),
    }
}

pub fn certify_indecomposable(p: &VPolytope) -> Result<Certificate, DecompError> {
    certify_with(p, super::DEFAULT_BUDGET)
}

/// Tries, in order: a vertex-covering chain (fewer than `2d` vertices), a
/// facet-touching chain, a skew gluing of two chain-covered halves, and
/// finally the rank witness.
pub fn certify_with(p: &VPolytope, budget: usize) -> Result<Certificate, DecompError> {
    let sk = skeleton(p)?;
    let d = p.dim;
    let g = &sk.graph;
    let space = summand_space(g, d)?;
    if !space.is_trivial() {
        return Err(DecompError::DecomposableInput {
            dimension: space.dimension(),
            expected: d + 1,
        });
    }
    let n = g.node_count();
    if n < 2 * d {
        if let Some(c) = find_triangular_chain(g, ChainMode::CoverVertices, None, budget) {
            return Ok(Certificate::ChainCoversVertices { triangles: c.triangles });
        }
    }
    let inc = &sk.hull.incidence;
    if let Some(c) = find_triangular_chain(g, ChainMode::TouchFacets, Some(inc), budget) {
        let labels = c.vertex_labels();
        let facets = sk
            .hull
            .hpoly
            .facets
            .iter()
            .enumerate()
            .map(|(f, h)| FacetTouch {
                facet: h.equation(),
                vertex: inc.facet_labels(f).intersection(&labels).next().expect("chain touches facet").clone(),
            })
            .collect();
        return Ok(Certificate::SubgraphTouchesFacets {
            triangles: c.triangles,
            facets,
        });
    }
    if let Some(c) = find_skew_gluing(&sk, budget) {
        return Ok(c);
    }
    Ok(Certificate::RankWitness {
        dimension: space.dimension(),
        basis_fields: (0..space.dimension()).map(|f| space.field_map(f)).collect(),
    })
}

/// Two-sided splits of the vertices by thresholds of a linear functional:
/// coordinate axes first, then facet normals. Most balanced splits first.
fn candidate_partitions(sk: &Skeleton) -> Vec<Vec<bool>> {
    let d = sk.vertices.dim;
    let pts = &sk.graph.points;
    let mut directions: Vec<Vector> = (1..=d).map(|i| Vector::unit(d, i)).collect();
    directions.extend(sk.hull.hpoly.facets.iter().map(|h| h.normal.clone()));
    let mut seen = BTreeSet::new();
    let mut out: Vec<(usize, usize, Vec<bool>)> = Vec::new();
    for w in &directions {
        let vals: Vec<_> = pts.iter().map(|x| w.dot(x)).collect();
        let mut levels = vals.clone();
        levels.sort();
        levels.dedup();
        for t in &levels[..levels.len().saturating_sub(1)] {
            let side: Vec<bool> = vals.iter().map(|v| v > t).collect();
            if seen.insert(side.clone()) {
                let upper = side.iter().filter(|&&s| s).count();
                let imbalance = upper.abs_diff(pts.len() - upper);
                out.push((imbalance, out.len(), side));
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, _, s)| s).collect()
}

fn find_skew_gluing(sk: &Skeleton, budget: usize) -> Option<Certificate> {
    let g = &sk.graph;
    for side in candidate_partitions(sk) {
        let lower: Vec<usize> = (0..g.node_count()).filter(|&v| !side[v]).collect();
        let upper: Vec<usize> = (0..g.node_count()).filter(|&v| side[v]).collect();
        let Some(ca) = find_triangular_chain(&g.induced(&lower), ChainMode::CoverVertices, None, budget) else {
            continue;
        };
        let Some(cb) = find_triangular_chain(&g.induced(&upper), ChainMode::CoverVertices, None, budget) else {
            continue;
        };
        let mut connectors: Vec<(usize, usize)> = g
            .edges
            .iter()
            .filter(|&&(a, b)| side[a] != side[b])
            .map(|&(a, b)| if side[a] { (b, a) } else { (a, b) })
            .collect();
        connectors.sort_by(|x, y| (&g.points[x.0], &g.points[x.1]).cmp(&(&g.points[y.0], &g.points[y.1])));
        for (i, &(a1, b1)) in connectors.iter().enumerate() {
            for &(a2, b2) in &connectors[i + 1..] {
                if a1 == a2 || b1 == b2 {
                    continue;
                }
                let skew = arith::lines_skew(&g.points[a1], &g.points[b1], &g.points[a2], &g.points[b2]).unwrap_or(false);
                if skew {
                    let l = |v: usize| g.labels[v].clone();
                    return Some(Certificate::SkewGluing {
                        parts: Box::new([
                            Certificate::ChainCoversVertices { triangles: ca.triangles },
                            Certificate::ChainCoversVertices { triangles: cb.triangles },
                        ]),
                        edges: [[l(a1), l(b1)], [l(a2), l(b2)]],
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, ConstructionParams, FamilyId};
    use crate::hull::tests::{cube, simplex};

    fn pprime4() -> VPolytope {
        build_family(FamilyId::Pprime, &ConstructionParams::new(4)).unwrap()
    }

    fn edge_set(edges: &[[String; 2]; 2]) -> BTreeSet<BTreeSet<String>> {
        edges.iter().map(|e| e.iter().cloned().collect()).collect()
    }

    fn pair(a: &str, b: &str) -> BTreeSet<String> {
        [a.to_string(), b.to_string()].into()
    }

    #[test]
    fn pprime4_skew_gluing_on_a2c2_and_bd() {
        let p = pprime4();
        let cert = certify_indecomposable(&p).unwrap();
        let Certificate::SkewGluing { edges, .. } = &cert else {
            panic!("expected skew gluing, got {}", cert.kind());
        };
        assert_eq!(edge_set(edges), [pair("A2", "C2'"), pair("B", "D")].into());
        verify_certificate(&cert, &p).unwrap();
    }

    #[test]
    fn parallel_connectors_are_rejected() {
        let p = pprime4();
        let Certificate::SkewGluing { parts, .. } = certify_indecomposable(&p).unwrap() else {
            panic!()
        };
        let g = skeleton(&p).unwrap().graph;
        let [a, b] = parts.as_ref();
        // lower part first
        let (lo, hi) = if subgraph_vertices(a, &g).unwrap().contains("A") { (a, b) } else { (b, a) };
        assert!(verify_skew_gluing(lo, hi, ("A2", "C2'"), ("B", "D"), &g).unwrap());
        assert!(!verify_skew_gluing(lo, hi, ("A2", "C2'"), ("A", "C'"), &g).unwrap());
        assert!(!verify_skew_gluing(lo, hi, ("B", "D"), ("B", "D"), &g).unwrap());
        assert!(verify_skew_gluing(lo, hi, ("C2'", "A2"), ("B", "D"), &g).is_err());
    }

    #[test]
    fn decomposable_input_is_an_error() {
        let p = build_family(FamilyId::P, &ConstructionParams::new(4)).unwrap();
        assert!(matches!(
            certify_indecomposable(&p),
            Err(DecompError::DecomposableInput { expected: 5, .. })
        ));
    }

    #[test]
    fn simplex_gets_covering_chain() {
        let s = simplex(4);
        let cert = certify_indecomposable(&s).unwrap();
        assert!(matches!(cert, Certificate::ChainCoversVertices { .. }));
        verify_certificate(&cert, &s).unwrap();
    }

    #[test]
    fn rank_witness_round_trip_and_tamper() {
        let p = pprime4();
        let sk = skeleton(&p).unwrap();
        let space = summand_space(&sk.graph, 4).unwrap();
        let cert = Certificate::RankWitness {
            dimension: 5,
            basis_fields: (0..5).map(|f| space.field_map(f)).collect(),
        };
        verify_certificate(&cert, &p).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"kind\":\"RankWitness\""));
        assert!(json.contains("basisFields"));
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let Certificate::RankWitness { mut basis_fields, .. } = cert else { unreachable!() };
        basis_fields[0].insert("A".into(), Vector::from_ints(&[7, 0, 0, 0]));
        let bad = Certificate::RankWitness { dimension: 5, basis_fields };
        assert!(verify_certificate(&bad, &p).is_err());
        // The rank witness cannot certify a decomposable polytope.
        let c = cube(3);
        let space = summand_space(&skeleton(&c).unwrap().graph, 3).unwrap();
        let fake = Certificate::RankWitness {
            dimension: 4,
            basis_fields: (0..4).map(|f| space.field_map(f)).collect(),
        };
        assert!(verify_certificate(&fake, &c).is_err());
    }

    #[test]
    fn summand_pair_certificate() {
        let c = cube(2);
        let (q, r) = super::super::extract_summands(&c).unwrap();
        let cert = Certificate::SummandPair { q, r };
        assert_eq!(cert.claim(), Claim::Decomposable);
        verify_certificate(&cert, &c).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let Certificate::SummandPair { q, .. } = cert else { unreachable!() };
        let wrong = Certificate::SummandPair { q: q.clone(), r: q };
        assert!(verify_certificate(&wrong, &c).is_err());
    }

    #[test]
    fn skew_gluing_json_round_trip() {
        let p = pprime4();
        let cert = certify_indecomposable(&p).unwrap();
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        verify_certificate(&back, &p).unwrap();
    }
}
