//! Parametric constructions of the conditionally decomposable families,
//! plus pyramid stacking and Minkowski sums.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{frac, int, ArithError, Hyperplane, Scalar, Vector};
use crate::equiv::combinatorially_equivalent;
use crate::hull::{convex_hull, extreme_point_indices, HPolytope, HullError, VPolytope, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family {family} needs d >= {min}, got {d}")]
    DimensionTooSmall { family: FamilyId, d: usize, min: usize },
    #[error("invalid epsilon: {0}")]
    InvalidEps(String),
    #[error("{family} with eps = {eps} is not combinatorially equivalent to its unperturbed partner")]
    NotEquivalent { family: FamilyId, eps: String },
    #[error("facet index {index} out of range ({count} facets)")]
    InvalidFacet { index: usize, count: usize },
    #[error("no admissible stacking height found")]
    NoAdmissibleHeight,
    #[error("stacking height must be positive")]
    NonPositiveHeight,
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("segment direction is zero")]
    ZeroDirection,
    #[error("segment scale must be positive")]
    NonPositiveScale,
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    P,
    Pprime,
    BarP,
    BarPprime,
    Q,
    Qprime,
    DeltaBase,
    StackedQ,
    StackedQprime,
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId::P,
        FamilyId::Pprime,
        FamilyId::BarP,
        FamilyId::BarPprime,
        FamilyId::Q,
        FamilyId::Qprime,
        FamilyId::DeltaBase,
        FamilyId::StackedQ,
        FamilyId::StackedQprime,
    ];

    pub fn uses_eps(self) -> bool {
        matches!(
            self,
            FamilyId::Pprime | FamilyId::BarPprime | FamilyId::Qprime | FamilyId::StackedQprime
        )
    }

    /// The unperturbed family a primed family must be equivalent to.
    pub fn partner(self) -> Option<FamilyId> {
        match self {
            FamilyId::Pprime => Some(FamilyId::P),
            FamilyId::BarPprime => Some(FamilyId::BarP),
            FamilyId::Qprime => Some(FamilyId::Q),
            FamilyId::StackedQprime => Some(FamilyId::StackedQ),
            _ => None,
        }
    }

    pub fn min_dim(self) -> usize {
        3
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FamilyId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub d: usize,
    pub eps: Scalar,
    pub stack_height: Scalar,
}

impl ConstructionParams {
    pub fn new(d: usize) -> Self {
        ConstructionParams {
            d,
            eps: frac(1, 10),
            stack_height: Scalar::one(),
        }
    }

    pub fn with_eps(mut self, eps: Scalar) -> Self {
        self.eps = eps;
        self
    }
}

/// Builds a family member and, for perturbed families, confirms it is
/// combinatorially equivalent to the unperturbed partner.
pub fn build_family(f: FamilyId, params: &ConstructionParams) -> Result<VPolytope, FamilyError> {
    let p = build_family_unchecked(f, params)?;
    if let Some(partner) = f.partner() {
        let base = build_family_unchecked(partner, params)?;
        let equivalent = combinatorially_equivalent(&base, &p).map_err(|_| FamilyError::NotEquivalent {
            family: f,
            eps: params.eps.to_string(),
        })?;
        if equivalent.is_none() {
            return Err(FamilyError::NotEquivalent {
                family: f,
                eps: params.eps.to_string(),
            });
        }
    }
    Ok(p)
}

/// Coordinates straight from the formulas, without the equivalence check.
pub fn build_family_unchecked(f: FamilyId, params: &ConstructionParams) -> Result<VPolytope, FamilyError> {
    let d = params.d;
    if d < f.min_dim() {
        return Err(FamilyError::DimensionTooSmall {
            family: f,
            d,
            min: f.min_dim(),
        });
    }
    let eps = &params.eps;
    if f.uses_eps() && !eps.is_positive() {
        return Err(FamilyError::InvalidEps(format!("{eps} is not positive")));
    }
    if f == FamilyId::Pprime && eps.is_one() {
        return Err(FamilyError::InvalidEps("3eps/(eps-1) is undefined at eps = 1".into()));
    }
    if f == FamilyId::BarPprime && *eps == int(3) {
        return Err(FamilyError::InvalidEps("3eps/(eps-3) is undefined at eps = 3".into()));
    }
    if !params.stack_height.is_positive() {
        return Err(FamilyError::NonPositiveHeight);
    }

    let p = match f {
        FamilyId::P | FamilyId::Pprime | FamilyId::BarP | FamilyId::BarPprime | FamilyId::DeltaBase => {
            p_family(f, d, eps)
        }
        FamilyId::Q | FamilyId::Qprime => q_family(f == FamilyId::Qprime, d, eps),
        FamilyId::StackedQ => {
            let q = q_family(false, d, eps);
            // Apexes collinear along e_d over the bottom barycenter, so the
            // result is a bipyramid plus the segment [0, 3 e_d].
            let bottom: Vec<&Vector> = q.vertices.iter().filter(|v| v.point[d - 1].is_zero()).map(|v| &v.point).collect();
            let b0 = crate::hull::centroid(bottom.into_iter(), d);
            let h = &params.stack_height;
            let ed = Vector::unit(d, d);
            let below = b0.add_scaled(&-h, &ed);
            let above = b0.add_scaled(&(int(3) + h), &ed);
            let floor = Hyperplane::new(ed.clone(), int(0))?;
            let roof = Hyperplane::new(ed.clone(), int(3))?.flipped();
            check_stacked(&q, &[(&below, floor), (&above, roof)])?;
            let mut pts: Vec<(String, Vector)> = q.vertices.into_iter().map(|v| (v.label, v.point)).collect();
            pts.push(("Bottom".into(), below));
            pts.push(("Top".into(), above));
            VPolytope::new(d, pts)?
        }
        FamilyId::StackedQprime => {
            let q = q_family(true, d, eps);
            let top = facet_index_of(&q, &Hyperplane::new(Vector::unit(d, d), int(3))?.flipped())?;
            let with_top = stack_pyramid_labeled(&q, top, &params.stack_height, "Top")?;
            let bottom = facet_index_of(&with_top, &Hyperplane::new(Vector::unit(d, d), int(0))?)?;
            let mut stacked = stack_pyramid_labeled(&with_top, bottom, &params.stack_height, "Bottom")?;
            // keep the same vertex order as StackedQ
            let bottom_vertex = stacked.vertices.pop().expect("apex");
            let top_vertex = stacked.vertices.pop().expect("apex");
            stacked.vertices.push(bottom_vertex);
            stacked.vertices.push(top_vertex);
            stacked
        }
    };
    Ok(p)
}

/// Each apex must lie beyond exactly the facet it was placed over.
fn check_stacked(q: &VPolytope, apexes: &[(&Vector, Hyperplane)]) -> Result<(), FamilyError> {
    let facets = convex_hull(q)?.hpoly.facets;
    for (apex, over) in apexes {
        let over = over.canonical_oriented();
        for f in &facets {
            let slack = f.slack(apex);
            let ok = if *f == over { slack.is_negative() } else { slack.is_positive() };
            if !ok {
                return Err(FamilyError::NoAdmissibleHeight);
            }
        }
    }
    Ok(())
}

fn p_family(f: FamilyId, d: usize, eps: &Scalar) -> VPolytope {
    let k = d - 2;
    let a_i = |i: usize| if i < k { Vector::unit(d, i) } else { Vector::zeros(d) };
    let e = |i: usize| Vector::unit(d, i);
    let primed = matches!(f, FamilyId::Pprime | FamilyId::BarPprime);
    // x_{d-2} shift of the perturbed C_i
    let c_shift = match f {
        FamilyId::Pprime => int(3) * eps / (eps - int(1)),
        FamilyId::BarPprime => int(3) * eps / (eps - int(3)),
        _ => Scalar::zero(),
    };
    let mut pts: Vec<(String, Vector)> = Vec::new();
    for i in 1..=k {
        pts.push((format!("A{i}"), a_i(i)));
    }
    for i in 1..=k {
        pts.push((format!("B{i}"), &a_i(i) + &e(d - 2)));
    }
    for i in 1..=k {
        let c = a_i(i).add_scaled(&int(3), &e(d - 1));
        if primed {
            pts.push((format!("C{i}'"), c.add_scaled(&c_shift, &e(d - 2))));
        } else {
            pts.push((format!("C{i}"), c));
        }
    }
    for i in 1..=k {
        pts.push((format!("D{i}"), (&a_i(i) + &e(d - 2)).add_scaled(&int(3), &e(d - 1))));
    }
    let tail = |x: i64, y: i64, z: i64| {
        let mut v = Vector::zeros(d);
        v.0[d - 3] = int(x);
        v.0[d - 2] = int(y);
        v.0[d - 1] = int(z);
        v
    };
    let c_prime = {
        let mut v = Vector::zeros(d);
        v.0[d - 3] = -eps.clone();
        v.0[d - 2] = int(2) - eps;
        v.0[d - 1] = int(1);
        v
    };
    match f {
        FamilyId::P | FamilyId::Pprime => {
            pts.push(("A".into(), tail(0, 1, 1)));
            pts.push(("B".into(), tail(1, 0, 1)));
            if primed {
                pts.push(("C'".into(), c_prime));
            } else {
                pts.push(("C".into(), tail(0, 2, 1)));
            }
            pts.push(("D".into(), tail(1, 3, 1)));
        }
        FamilyId::BarP | FamilyId::BarPprime => {
            pts.push(("Abar".into(), tail(0, -1, 1)));
            pts.push(("Bbar".into(), tail(1, 0, 1)));
            if primed {
                pts.push(("Cbar'".into(), c_prime));
            } else {
                pts.push(("Cbar".into(), tail(0, 2, 1)));
            }
            pts.push(("Dbar".into(), tail(1, 3, 1)));
        }
        _ => {}
    }
    VPolytope::new(d, pts).expect("labels are distinct")
}

fn q_family(primed: bool, d: usize, eps: &Scalar) -> VPolytope {
    let k = d - 1;
    let a_i = |i: usize| if i < k { Vector::unit(d, i) } else { Vector::zeros(d) };
    let (e_lat, e_up) = (Vector::unit(d, d - 1), Vector::unit(d, d));
    let mut pts: Vec<(String, Vector)> = Vec::new();
    for i in 1..=k {
        pts.push((format!("A{i}"), a_i(i)));
    }
    for i in 1..=k {
        pts.push((format!("B{i}"), &a_i(i) + &e_lat));
    }
    for i in 1..=k {
        let c = a_i(i).add_scaled(&int(3), &e_up);
        if primed {
            pts.push((format!("C{i}'"), c.add_scaled(&-eps.clone(), &e_lat)));
        } else {
            pts.push((format!("C{i}"), c));
        }
    }
    for i in 1..=k {
        pts.push((format!("D{i}"), (&a_i(i) + &e_lat).add_scaled(&int(3), &e_up)));
    }
    VPolytope::new(d, pts).expect("labels are distinct")
}

/// Index of the facet of `p` supported by `h` (compared in canonical
/// inward form).
pub fn facet_index_of(p: &VPolytope, h: &Hyperplane) -> Result<usize, FamilyError> {
    let hull = convex_hull(p)?;
    let target = h.canonical_oriented();
    hull.hpoly
        .facets
        .iter()
        .position(|f| *f == target)
        .ok_or(FamilyError::InvalidFacet {
            index: usize::MAX,
            count: hull.hpoly.facets.len(),
        })
}

/// Adds an apex beyond facet `facet_index` of `p` (facet order as returned
/// by [`convex_hull`]) and beneath every other facet.
pub fn stack_pyramid(p: &VPolytope, facet_index: usize, h: &Scalar) -> Result<VPolytope, FamilyError> {
    let mut label = "apex".to_string();
    let mut n = 1;
    while p.index_of(&label).is_some() {
        n += 1;
        label = format!("apex{n}");
    }
    stack_pyramid_labeled(p, facet_index, h, &label)
}

pub fn stack_pyramid_labeled(p: &VPolytope, facet_index: usize, h: &Scalar, label: &str) -> Result<VPolytope, FamilyError> {
    if !h.is_positive() {
        return Err(FamilyError::NonPositiveHeight);
    }
    let hull = convex_hull(p)?;
    let facets = &hull.hpoly.facets;
    if facet_index >= facets.len() {
        return Err(FamilyError::InvalidFacet {
            index: facet_index,
            count: facets.len(),
        });
    }
    let facet = &facets[facet_index];
    let vp = hull.vertex_polytope(p);
    let on_facet = hull.incidence.facets[facet_index].ones().map(|i| &vp.vertices[i].point);
    let center = crate::hull::centroid(on_facet, p.dim);
    let max_abs = facet.normal.0.iter().map(|c| c.abs()).max().expect("nonzero normal");
    let outward = facet.normal.scale(&(-Scalar::one() / max_abs));
    let mut height = h.clone();
    for _ in 0..=64 {
        let apex = center.add_scaled(&height, &outward);
        let beyond = facet.slack(&apex).is_negative();
        let beneath = facets
            .iter()
            .enumerate()
            .all(|(i, g)| i == facet_index || g.slack(&apex).is_positive());
        if beyond && beneath {
            let mut pts: Vec<(String, Vector)> = vp.vertices.iter().map(|v| (v.label.clone(), v.point.clone())).collect();
            pts.push((label.to_string(), apex));
            return Ok(VPolytope::new(p.dim, pts)?);
        }
        height /= int(2);
    }
    Err(FamilyError::NoAdmissibleHeight)
}

/// Hull of all pairwise sums, labelled `a+b`, non-vertices removed.
pub fn minkowski_sum(p: &VPolytope, q: &VPolytope) -> Result<VPolytope, FamilyError> {
    if p.dim != q.dim {
        return Err(FamilyError::DimensionMismatch(p.dim, q.dim));
    }
    let p = p.irredundant();
    let q = q.irredundant();
    let mut sums = Vec::with_capacity(p.len() * q.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(Vertex {
                label: format!("{}+{}", a.label, b.label),
                point: &a.point + &b.point,
            });
        }
    }
    Ok(keep_extreme(p.dim, sums))
}

fn keep_extreme(dim: usize, candidates: Vec<Vertex>) -> VPolytope {
    let points: Vec<Vector> = candidates.iter().map(|v| v.point.clone()).collect();
    let keep = extreme_point_indices(&points);
    VPolytope {
        dim,
        vertices: keep.into_iter().map(|i| candidates[i].clone()).collect(),
    }
}

/// `p + [0, k a]`; vertices keep their label at the base end and get a
/// trailing `^` at the translated end.
pub fn segment_sum(p: &VPolytope, a: &Vector, k: &Scalar) -> Result<VPolytope, FamilyError> {
    if a.len() != p.dim {
        return Err(FamilyError::DimensionMismatch(p.dim, a.len()));
    }
    if a.is_zero() {
        return Err(FamilyError::ZeroDirection);
    }
    if !k.is_positive() {
        return Err(FamilyError::NonPositiveScale);
    }
    let shift = a.scale(k);
    let p = p.irredundant();
    let mut candidates = p.vertices.clone();
    candidates.extend(p.vertices.iter().map(|v| Vertex {
        label: format!("{}^", v.label),
        point: &v.point + &shift,
    }));
    Ok(keep_extreme(p.dim, candidates))
}

/// A segment summand `[0, mu u]` with `p = core + [0, mu u]`.
#[derive(Debug, Clone)]
pub struct SegmentSummand {
    pub mu: Scalar,
    pub core: VPolytope,
}

/// Looks for the largest `mu > 0` among vertex-difference projections onto
/// `u` such that `p = (p ∩ (p - mu u)) + [0, mu u]`.
pub fn segment_summand_check(p: &VPolytope, u: &Vector) -> Result<Option<SegmentSummand>, FamilyError> {
    if u.len() != p.dim {
        return Err(FamilyError::DimensionMismatch(p.dim, u.len()));
    }
    if u.is_zero() {
        return Err(FamilyError::ZeroDirection);
    }
    let hull = convex_hull(p)?;
    let vp = hull.vertex_polytope(p);
    let uu = u.dot(u);
    let proj: Vec<Scalar> = vp.vertices.iter().map(|v| v.point.dot(u)).collect();
    let mut candidates: Vec<Scalar> = Vec::new();
    for a in &proj {
        for b in &proj {
            let mu = (a - b) / &uu;
            if mu.is_positive() {
                candidates.push(mu);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let target = vp.point_set();
    for mu in candidates.into_iter().rev() {
        let shift = u.scale(&mu);
        let mut facets = hull.hpoly.facets.clone();
        for h in &hull.hpoly.facets {
            // x + mu u must satisfy h
            facets.push(Hyperplane {
                normal: h.normal.clone(),
                offset: &h.offset - h.normal.dot(&shift),
            });
        }
        let core_points = HPolytope { dim: p.dim, facets }.vertices();
        if core_points.is_empty() {
            continue;
        }
        let mut sums: Vec<Vector> = core_points.clone();
        sums.extend(core_points.iter().map(|c| c + &shift));
        let keep = extreme_point_indices(&sums);
        let sum_set: std::collections::BTreeSet<Vector> = keep.into_iter().map(|i| sums[i].clone()).collect();
        if sum_set == target {
            let core = label_like(p.dim, core_points, &vp);
            return Ok(Some(SegmentSummand { mu, core }));
        }
    }
    Ok(None)
}

/// Labels points after matching vertices of `reference`, else `c<i>`.
fn label_like(dim: usize, points: Vec<Vector>, reference: &VPolytope) -> VPolytope {
    let vertices = points
        .into_iter()
        .enumerate()
        .map(|(i, point)| {
            let label = reference
                .vertices
                .iter()
                .find(|v| v.point == point)
                .map(|v| v.label.clone())
                .unwrap_or_else(|| format!("c{i}"));
            Vertex { label, point }
        })
        .collect();
    VPolytope { dim, vertices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::{face_lattice, FaceLattice};

    fn hull_counts(p: &VPolytope) -> (usize, usize) {
        let h = convex_hull(p).unwrap();
        assert!(h.redundant.is_empty(), "redundant: {:?}", h.redundant);
        (h.incidence.vertex_count(), h.incidence.facet_count())
    }

    fn lattice(p: &VPolytope) -> FaceLattice {
        face_lattice(&convex_hull(p).unwrap().incidence).unwrap()
    }

    fn cube(d: usize) -> VPolytope {
        let pts = (0..1u32 << d)
            .map(|m| {
                let c: Vec<i64> = (0..d).map(|i| ((m >> i) & 1) as i64).collect();
                (format!("v{m}"), Vector::from_ints(&c))
            })
            .collect();
        VPolytope::new(d, pts).unwrap()
    }

    fn build(f: FamilyId, d: usize) -> VPolytope {
        build_family(f, &ConstructionParams::new(d)).unwrap()
    }

    #[test]
    fn p4_coordinates() {
        let p = build(FamilyId::P, 4);
        assert_eq!(p.len(), 12);
        assert_eq!(p.point("A").unwrap(), &Vector::from_ints(&[0, 0, 1, 1]));
        assert_eq!(p.point("B").unwrap(), &Vector::from_ints(&[0, 1, 0, 1]));
        assert_eq!(p.point("C").unwrap(), &Vector::from_ints(&[0, 0, 2, 1]));
        assert_eq!(p.point("D").unwrap(), &Vector::from_ints(&[0, 1, 3, 1]));
        assert_eq!(p.point("A1").unwrap(), &Vector::from_ints(&[1, 0, 0, 0]));
        assert_eq!(p.point("A2").unwrap(), &Vector::from_ints(&[0, 0, 0, 0]));
        assert_eq!(p.point("D1").unwrap(), &Vector::from_ints(&[1, 1, 3, 0]));
    }

    #[test]
    fn pprime4_coordinates() {
        let p = build(FamilyId::Pprime, 4);
        assert_eq!(p.point("C'").unwrap(), &Vector(vec![int(0), frac(-1, 10), frac(19, 10), int(1)]));
        assert_eq!(p.point("C1'").unwrap(), &Vector(vec![int(1), frac(-1, 3), int(3), int(0)]));
        assert_eq!(p.point("C2'").unwrap(), &Vector(vec![int(0), frac(-1, 3), int(3), int(0)]));
    }

    #[test]
    fn p3_has_eight_vertices_and_facets() {
        assert_eq!(hull_counts(&build(FamilyId::P, 3)), (8, 8));
        assert_eq!(hull_counts(&build(FamilyId::BarP, 3)), (8, 8));
    }

    #[test]
    fn family_sizes() {
        for d in 4..=6 {
            assert_eq!(hull_counts(&build(FamilyId::P, d)), (4 * d - 4, d + 5));
            assert_eq!(hull_counts(&build(FamilyId::BarP, d)), (4 * d - 4, d + 5));
            assert_eq!(build(FamilyId::StackedQ, d).len(), 4 * d - 2);
        }
    }

    #[test]
    fn primed_families_are_irredundant() {
        for f in [FamilyId::Pprime, FamilyId::BarPprime, FamilyId::Qprime, FamilyId::StackedQprime] {
            for d in 3..=5 {
                build(f, d).validate().unwrap();
            }
        }
    }

    #[test]
    fn delta_base_is_combinatorial_cube() {
        let delta = build(FamilyId::DeltaBase, 4);
        assert_eq!(delta.len(), 8);
        assert_eq!(delta.affine_dimension(), 3);
        assert_eq!(lattice(&delta.full_dimensional_view()).f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            build_family(FamilyId::P, &ConstructionParams::new(2)),
            Err(FamilyError::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            build_family(FamilyId::Pprime, &ConstructionParams::new(4).with_eps(int(0))),
            Err(FamilyError::InvalidEps(_))
        ));
        assert!(matches!(
            build_family(FamilyId::Pprime, &ConstructionParams::new(4).with_eps(int(1))),
            Err(FamilyError::InvalidEps(_))
        ));
        // Large eps breaks the combinatorial type.
        assert!(matches!(
            build_family(FamilyId::Pprime, &ConstructionParams::new(4).with_eps(int(5))),
            Err(FamilyError::NotEquivalent { .. }) | Err(FamilyError::Hull(_))
        ));
    }

    #[test]
    fn stacked_q_matches_generic_stacking() {
        for d in 3..=5 {
            let q = build(FamilyId::Q, d);
            let top = facet_index_of(&q, &Hyperplane::new(Vector::unit(d, d), int(3)).unwrap().flipped()).unwrap();
            let s1 = stack_pyramid_labeled(&q, top, &int(1), "Top").unwrap();
            let bottom = facet_index_of(&s1, &Hyperplane::new(Vector::unit(d, d), int(0)).unwrap()).unwrap();
            let s2 = stack_pyramid_labeled(&s1, bottom, &int(1), "Bottom").unwrap();
            assert_eq!(s2.point_set(), build(FamilyId::StackedQ, d).point_set());
        }
    }

    #[test]
    fn stacking_over_cube_square() {
        let c = cube(3);
        let s = stack_pyramid(&c, 0, &int(1)).unwrap();
        assert_eq!(hull_counts(&s), (9, 9));
        for v in &c.vertices {
            assert_eq!(s.point(&v.label), Some(&v.point));
        }
        assert!(matches!(
            stack_pyramid(&c, 6, &int(1)),
            Err(FamilyError::InvalidFacet { index: 6, count: 6 })
        ));
    }

    #[test]
    fn stacking_halves_height_until_beneath() {
        // A tall apex over a cube face would see the neighbouring faces too.
        let c = cube(3);
        let s = stack_pyramid(&c, 0, &int(1000)).unwrap();
        assert_eq!(hull_counts(&s), (9, 9));
    }

    #[test]
    fn stacking_a_simplex_facet_of_p4() {
        let p = build(FamilyId::P, 4);
        let h = Hyperplane::new(Vector::from_ints(&[0, -1, 1, 1]), int(3)).unwrap();
        let idx = facet_index_of(&p, &h.flipped()).unwrap();
        let s = stack_pyramid(&p, idx, &int(1)).unwrap();
        assert_eq!(hull_counts(&s), (13, 12));
    }

    #[test]
    fn minkowski_basics() {
        let seg1 = VPolytope::new(2, vec![("o", Vector::from_ints(&[0, 0])), ("x", Vector::from_ints(&[1, 0]))]).unwrap();
        let seg2 = VPolytope::new(2, vec![("o", Vector::from_ints(&[0, 0])), ("y", Vector::from_ints(&[0, 1]))]).unwrap();
        let sq = minkowski_sum(&seg1, &seg2).unwrap();
        assert_eq!(sq.point_set(), cube(2).point_set());
        let pt = VPolytope::new(3, vec![("t", Vector::from_ints(&[1, 2, 3]))]).unwrap();
        let c = cube(3);
        assert_eq!(minkowski_sum(&c, &pt).unwrap().point_set(), c.translate(&Vector::from_ints(&[1, 2, 3])).point_set());
        assert!(matches!(minkowski_sum(&c, &seg1), Err(FamilyError::DimensionMismatch(3, 2))));
    }

    #[test]
    fn segment_sums() {
        let c = cube(3);
        let box_ = segment_sum(&c, &Vector::unit(3, 1), &int(1)).unwrap();
        assert_eq!(lattice(&box_).f_vector(), vec![8, 12, 6]);
        let tri = VPolytope::new(
            2,
            vec![("a", Vector::from_ints(&[0, 0])), ("b", Vector::from_ints(&[2, 0])), ("c", Vector::from_ints(&[0, 2]))],
        )
        .unwrap();
        // Direction along an edge: quadrilateral; generic direction: pentagon.
        assert_eq!(segment_sum(&tri, &Vector::from_ints(&[1, 0]), &int(1)).unwrap().len(), 4);
        assert_eq!(segment_sum(&tri, &Vector::from_ints(&[1, 1]), &int(1)).unwrap().len(), 5);
        assert!(matches!(segment_sum(&tri, &Vector::zeros(2), &int(1)), Err(FamilyError::ZeroDirection)));
        assert!(matches!(segment_sum(&tri, &Vector::unit(2, 1), &int(0)), Err(FamilyError::NonPositiveScale)));
    }

    #[test]
    fn segment_summand_examples() {
        let sq = cube(2);
        let s = segment_summand_check(&sq, &Vector::unit(2, 1)).unwrap().unwrap();
        assert_eq!(s.mu, int(1));
        assert_eq!(
            s.core.point_set(),
            [Vector::from_ints(&[0, 0]), Vector::from_ints(&[0, 1])].into_iter().collect()
        );
        let simplex = VPolytope::new(
            3,
            vec![
                ("o", Vector::zeros(3)),
                ("x", Vector::unit(3, 1)),
                ("y", Vector::unit(3, 2)),
                ("z", Vector::unit(3, 3)),
            ],
        )
        .unwrap();
        for u in [[1, 0, 0], [1, 1, 1], [0, -1, 2]] {
            assert!(segment_summand_check(&simplex, &Vector::from_ints(&u)).unwrap().is_none());
        }
        let p = build(FamilyId::P, 4);
        let s = segment_summand_check(&p, &Vector::unit(4, 3)).unwrap().unwrap();
        assert!(s.mu.is_positive());
        assert!(s.core.len() < 12);
    }
}
