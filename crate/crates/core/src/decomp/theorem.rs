//! Step-by-step check of the segment-summand theorem on a concrete polytope:
//! at most `4d - 5` vertices and a segment summand imply that a
//! combinatorially equivalent realization is decomposable, with the
//! intermediate objects of the argument computed exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::chain::{find_triangular_chain, ChainMode, TriangularChain};
use super::{is_decomposable, skeleton, DecompError, Skeleton};
use crate::arith::{self, int, Hyperplane, Scalar, Vector};
use crate::equiv::combinatorially_equivalent;
use crate::families::segment_summand_check;
use crate::hull::{convex_hull, cross_section, projective_map, ProjectiveMap, VPolytope, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub name: &'static str,
    pub status: StepStatus,
    pub detail: String,
}

/// Configuration of a family of lines in Q^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineConfiguration {
    Parallel,
    Concurrent(Vector),
    Neither,
}

#[derive(Debug, Clone, Default)]
pub struct MainTheoremReport {
    pub steps: Vec<Step>,
    pub direction: Option<Vector>,
    pub chain: Option<TriangularChain>,
    pub concurrency_point: Option<Vector>,
    /// Realization with parallel connectors, after projective normalization.
    pub normalized: Option<VPolytope>,
}

pub const STEP_NAMES: [&str; 9] = [
    "vertex bound",
    "segment summand",
    "vertex partition",
    "parallel sections",
    "sections equivalent",
    "triangular chain",
    "connector lines",
    "concurrent realization",
    "projective normalization",
];

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.steps.len() == STEP_NAMES.len() && self.steps.iter().all(|s| s.status == StepStatus::Passed)
    }

    /// The first failed step, if any.
    pub fn failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| s.status == StepStatus::Failed)
    }

    pub fn precondition_failed(&self) -> bool {
        self.steps.first().is_some_and(|s| s.status == StepStatus::Failed)
    }

    fn pass(&mut self, detail: impl Into<String>) {
        let name = STEP_NAMES[self.steps.len()];
        self.steps.push(Step {
            name,
            status: StepStatus::Passed,
            detail: detail.into(),
        });
    }

    /// Records a failure and marks the remaining steps skipped.
    fn fail(mut self, detail: impl Into<String>) -> Self {
        let name = STEP_NAMES[self.steps.len()];
        self.steps.push(Step {
            name,
            status: StepStatus::Failed,
            detail: detail.into(),
        });
        for name in &STEP_NAMES[self.steps.len()..] {
            self.steps.push(Step {
                name,
                status: StepStatus::Skipped,
                detail: String::new(),
            });
        }
        self
    }
}

impl fmt::Display for MainTheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let tag = match s.status {
                StepStatus::Passed => "ok",
                StepStatus::Failed => "FAILED",
                StepStatus::Skipped => "skipped",
            };
            writeln!(f, "{:<26} {:<8} {}", s.name, tag, s.detail)?;
        }
        Ok(())
    }
}

/// Classifies lines given by point pairs.
pub fn line_configuration(lines: &[(Vector, Vector)]) -> LineConfiguration {
    let Some((a0, b0)) = lines.first() else {
        return LineConfiguration::Parallel;
    };
    let d0 = b0 - a0;
    let Some((a1, b1)) = lines.iter().find(|(a, b)| !arith::parallel(&(b - a), &d0)) else {
        return LineConfiguration::Parallel;
    };
    let Some(z) = intersect(a0, &d0, a1, &(b1 - a1)) else {
        return LineConfiguration::Neither;
    };
    let through = |(a, b): &(Vector, Vector)| {
        let to_z = &z - a;
        to_z.is_zero() || arith::parallel(&to_z, &(b - a))
    };
    if lines.iter().all(through) {
        LineConfiguration::Concurrent(z)
    } else {
        LineConfiguration::Neither
    }
}

/// Common point of two non-parallel lines `a + s u` and `b + t v`, if any.
fn intersect(a: &Vector, u: &Vector, b: &Vector, v: &Vector) -> Option<Vector> {
    let d = a.len();
    let rhs = b - a;
    for i in 0..d {
        for j in i + 1..d {
            // s u - t v = b - a on coordinates i, j
            let det = &u[i] * -&v[j] + &v[i] * &u[j];
            if det.is_zero() {
                continue;
            }
            let s = (&rhs[i] * -&v[j] + &v[i] * &rhs[j]) / &det;
            let z = a.add_scaled(&s, u);
            let to_z = &z - b;
            return (to_z.is_zero() || arith::parallel(&to_z, v)).then_some(z);
        }
    }
    None
}

/// Edge directions grouped into parallel classes, largest class first.
fn parallel_classes(sk: &Skeleton) -> Vec<Vector> {
    let g = &sk.graph;
    let mut classes: BTreeMap<Vector, usize> = BTreeMap::new();
    for &(a, b) in &g.edges {
        let w = arith::primitive(arith::integer_row(&(&g.points[b] - &g.points[a]).0));
        let sign_flip = w.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let dir = Vector(
            w.into_iter()
                .map(|c| Scalar::from_integer(if sign_flip { -c } else { c }))
                .collect(),
        );
        *classes.entry(dir).or_insert(0) += 1;
    }
    let mut out: Vec<(usize, Vector)> = classes.into_iter().map(|(v, n)| (n, v)).collect();
    out.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
    out.into_iter().map(|(_, v)| v).collect()
}

/// Lines through the endpoints of the crossed edges, keyed by section label.
fn connector_lines(q: &VPolytope, section: &VPolytope) -> BTreeMap<String, (Vector, Vector)> {
    section
        .vertices
        .iter()
        .map(|v| {
            let (lo, hi) = v.label.split_once('|').expect("section labels are lo|hi");
            let p = |l: &str| q.point(l).expect("crossed edge endpoints are vertices").clone();
            (v.label.clone(), (p(lo), p(hi)))
        })
        .collect()
}

/// Pairwise coplanarity of the connector lines of every chain triangle.
fn triangles_coplanar(chain: &TriangularChain, lines: &BTreeMap<String, (Vector, Vector)>) -> bool {
    chain.triangles.iter().all(|t| {
        (0..3).all(|i| {
            (i + 1..3).all(|j| {
                let (a1, b1) = &lines[&t[i]];
                let (a2, b2) = &lines[&t[j]];
                arith::lines_coplanar(a1, b1, a2, b2).unwrap_or(false)
            })
        })
    })
}

fn chain_lines(chain: &TriangularChain, lines: &BTreeMap<String, (Vector, Vector)>) -> Vec<(Vector, Vector)> {
    chain.vertex_labels().iter().map(|l| lines[l].clone()).collect()
}

fn labels(p: &VPolytope) -> String {
    p.labels().join(",")
}

pub fn check_main_theorem_instance(p: &VPolytope, budget: usize) -> Result<MainTheoremReport, DecompError> {
    let mut report = MainTheoremReport::default();
    let sk = skeleton(p)?;
    let d = p.dim;
    let n = sk.vertices.len();
    let bound = (4 * d).saturating_sub(5);
    if n > bound {
        return Ok(report.fail(format!(
            "{n} vertices exceed 4d-5 = {bound}; the segment-summand argument does not apply (minimality boundary)"
        )));
    }
    report.pass(format!("{n} <= {bound}"));

    // Segment summand [0, mu u].
    let mut found = None;
    for u in parallel_classes(&sk) {
        if let Some(s) = segment_summand_check(&sk.vertices, &u)? {
            found = Some((u, s.mu));
            break;
        }
    }
    let Some((u, mu)) = found else {
        return Ok(report.fail("no edge direction is a segment summand"));
    };
    report.direction = Some(u.clone());
    report.pass(format!("u = {u}, mu = {mu}"));

    // Bottom vertices have inner facet normals summing to a positive
    // multiple along u; top vertices the opposite.
    let inc = &sk.hull.incidence;
    let facets = &sk.hull.hpoly.facets;
    let mut bottom = Vec::new();
    let mut top = Vec::new();
    for (v, vertex) in sk.vertices.vertices.iter().enumerate() {
        let s: Scalar = inc.vertex_facets(v).iter().map(|&f| facets[f].normal.dot(&u)).sum();
        if s.is_positive() {
            bottom.push(v);
        } else if s.is_negative() {
            top.push(v);
        } else {
            return Ok(report.fail(format!("vertex {} has no side", vertex.label)));
        }
    }
    let g = &sk.graph;
    for (side, other) in [(&bottom, &top), (&top, &bottom)] {
        for &v in side.iter() {
            let k = other.iter().filter(|&&w| g.has_edge(v, w)).count();
            if k > 1 {
                return Ok(report.fail(format!("{} has {k} neighbours across", g.labels[v])));
            }
        }
    }
    let height = |v: &usize| sk.vertices.vertices[*v].point.dot(&u);
    let lo = bottom.iter().map(height).max().expect("bottom side nonempty");
    let hi = top.iter().map(height).min().expect("top side nonempty");
    // Stretch the segment until a hyperplane normal to u separates the sides.
    let step = &mu * u.dot(&u);
    let stretch = if lo < hi {
        Scalar::zero()
    } else {
        ((&lo - &hi) / &step).floor() + Scalar::one()
    };
    let shift = u.scale(&(&stretch * &mu));
    let q = VPolytope {
        dim: d,
        vertices: sk
            .vertices
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| Vertex {
                label: v.label.clone(),
                point: if top.contains(&i) { &v.point + &shift } else { v.point.clone() },
            })
            .collect(),
    };
    if !stretch.is_zero() && convex_hull(&q)?.incidence.labeled_facets() != inc.labeled_facets() {
        return Ok(report.fail("stretched polytope changed combinatorially"));
    }
    let hi = hi + &stretch * &step;
    let names = |side: &[usize]| side.iter().map(|&v| g.labels[v].clone()).collect::<Vec<_>>().join(",");
    report.pass(format!(
        "A = {{{}}}, B = {{{}}}, segment stretched by {}",
        names(&bottom),
        names(&top),
        &stretch + Scalar::one()
    ));

    // Two parallel separating sections.
    let gap = &hi - &lo;
    let c1 = &lo + &gap / int(3);
    let c2 = &lo + &gap * int(2) / int(3);
    let s1 = cross_section(&q, &Hyperplane::new(u.clone(), c1.clone())?)?;
    let s2 = cross_section(&q, &Hyperplane::new(u.clone(), c2.clone())?)?;
    if s1.labels() != s2.labels() {
        return Ok(report.fail("sections cross different edges"));
    }
    report.pass(format!("u.x = {c1} and u.x = {c2}, {} vertices each", s1.len()));

    let f1 = s1.full_dimensional_view();
    let f2 = s2.full_dimensional_view();
    if combinatorially_equivalent(&f1, &f2)?.is_none() {
        return Ok(report.fail("sections are not combinatorially equivalent"));
    }
    let h1 = convex_hull(&f1)?;
    if h1.incidence.labeled_facets() != convex_hull(&f2)?.incidence.labeled_facets() {
        return Ok(report.fail("translate correspondence does not preserve facets"));
    }
    report.pass(format!("sections match vertex for vertex ({})", labels(&f1)));

    let small = bottom.len().min(top.len());
    if small > 2 * d - 3 {
        return Ok(report.fail(format!("smaller side has {small} > 2d-3 vertices")));
    }
    let section_sk = skeleton(&f1)?;
    let Some(chain) = find_triangular_chain(&section_sk.graph, ChainMode::TouchFacets, Some(&section_sk.hull.incidence), budget)
    else {
        return Ok(report.fail("no facet-touching triangular chain in the section"));
    };
    report.pass(format!("smaller side {small} <= {}, chain of {} triangles", 2 * d - 3, chain.triangles.len()));
    report.chain = Some(chain.clone());

    let lines = connector_lines(&q, &s1);
    if !triangles_coplanar(&chain, &lines) {
        return Ok(report.fail("connector lines of a chain triangle are skew"));
    }
    if line_configuration(&chain_lines(&chain, &lines)) != LineConfiguration::Parallel {
        return Ok(report.fail("connector lines are not parallel"));
    }
    report.pass("chain connectors pairwise coplanar and parallel");

    // A projectively equivalent copy whose connectors meet at a finite point.
    let max_height = q.vertices.iter().map(|v| v.point.dot(&u).abs()).max().expect("vertices");
    let s = Scalar::one() / (int(2) * (Scalar::one() + max_height));
    let tilt = ProjectiveMap {
        denominator: u.scale(&s),
        ..ProjectiveMap::identity(d)
    };
    let tilted = projective_map(&q, &tilt)?;
    let expected_z = u.scale(&(Scalar::one() / (&s * u.dot(&u))));
    let tilted_lines: BTreeMap<String, (Vector, Vector)> = lines
        .iter()
        .map(|(l, (a, b))| (l.clone(), (tilt.apply(a), tilt.apply(b))))
        .collect();
    if !triangles_coplanar(&chain, &tilted_lines) {
        return Ok(report.fail("tilted connector lines of a chain triangle are skew"));
    }
    let z = match line_configuration(&chain_lines(&chain, &tilted_lines)) {
        LineConfiguration::Concurrent(z) if z == expected_z => z,
        other => return Ok(report.fail(format!("tilted connectors are not concurrent at {expected_z}: {other:?}"))),
    };
    let tilted_hull = convex_hull(&tilted)?;
    let Some(outside) = tilted_hull.hpoly.facets.iter().find(|h| h.slack(&z).is_negative()) else {
        return Ok(report.fail("concurrency point lies in the polytope"));
    };
    report.concurrency_point = Some(z.clone());
    report.pass(format!("connectors concurrent at {z}, outside via {}", outside.equation()));

    // Send z to infinity along e_j.
    let alpha = &outside.normal;
    let j = alpha.0.iter().position(|c| !c.is_zero()).expect("nonzero normal");
    let ej = Vector::unit(d, j + 1);
    let normalize = ProjectiveMap {
        linear: (1..=d).map(|i| Vector::unit(d, i)).collect(),
        translation: &ej - &z,
        denominator: alpha.clone(),
        delta: -alpha.dot(&z),
    };
    let image = projective_map(&tilted, &normalize)?;
    let image_lines: Vec<(Vector, Vector)> = chain_lines(&chain, &tilted_lines)
        .iter()
        .map(|(a, b)| (normalize.apply(a), normalize.apply(b)))
        .collect();
    if line_configuration(&image_lines) != LineConfiguration::Parallel {
        return Ok(report.fail("normalized connectors are not parallel"));
    }
    if convex_hull(&image)?.incidence.labeled_facets() != inc.labeled_facets() {
        return Ok(report.fail("normalized polytope is not equivalent to the input"));
    }
    if !is_decomposable(&image)?.0 {
        return Ok(report.fail("normalized polytope is indecomposable"));
    }
    report.pass(format!("connectors parallel to e_{}, image equivalent and decomposable", j + 1));
    report.normalized = Some(image);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, ConstructionParams, FamilyId};
    use crate::hull::tests::cube;

    pub(crate) fn simplex_prism(d: usize) -> VPolytope {
        let mut pts = Vec::new();
        for i in 0..d {
            for (tag, h) in [("lo", 0), ("hi", 1)] {
                let mut c = vec![0; d];
                if i > 0 {
                    c[i - 1] = 1;
                }
                c[d - 1] = h;
                pts.push((format!("{tag}{i}"), Vector::from_ints(&c)));
            }
        }
        VPolytope::new(d, pts).unwrap()
    }

    #[test]
    fn prism_passes_every_step() {
        let r = check_main_theorem_instance(&simplex_prism(4), 10_000).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.direction, Some(Vector::unit(4, 4)));
        assert!(r.concurrency_point.is_some());
    }

    #[test]
    fn p4_and_cube4_hit_the_vertex_bound() {
        let p = build_family(FamilyId::P, &ConstructionParams::new(4)).unwrap();
        let r = check_main_theorem_instance(&p, 10_000).unwrap();
        assert!(r.precondition_failed());
        assert!(r.failure().unwrap().detail.contains("12 vertices exceed 4d-5 = 11"));
        assert!(r.steps[1..].iter().all(|s| s.status == StepStatus::Skipped));
        assert!(check_main_theorem_instance(&cube(4), 10).unwrap().precondition_failed());
    }

    #[test]
    fn sheared_prism_needs_stretching() {
        // Lateral edges along (1, 0, 0, 1) but short relative to the base
        // spread along that direction.
        let base = simplex_prism(4);
        let q = base.map_points(|x| {
            let mut y = x.clone();
            y.0[0] = &y.0[0] * int(5) + &y.0[3];
            y
        });
        let r = check_main_theorem_instance(&q, 10_000).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn line_configurations() {
        let l = |a: &[i64], b: &[i64]| (Vector::from_ints(a), Vector::from_ints(b));
        assert_eq!(line_configuration(&[l(&[0, 0, 0], &[0, 0, 1]), l(&[1, 0, 0], &[1, 0, 2])]), LineConfiguration::Parallel);
        assert_eq!(
            line_configuration(&[l(&[1, 0, 0], &[2, 0, 0]), l(&[0, 1, 0], &[0, 3, 0]), l(&[0, 0, 1], &[0, 0, 5])]),
            LineConfiguration::Concurrent(Vector::zeros(3))
        );
        assert_eq!(
            line_configuration(&[l(&[0, 0, 0], &[1, 0, 0]), l(&[0, 1, 1], &[0, 2, 1])]),
            LineConfiguration::Neither
        );
    }
}
