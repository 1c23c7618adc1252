use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use polyforge::arith::{frac, int, Scalar, Vector};
use polyforge::families::{build_family, ConstructionParams, FamilyId};
use polyforge::hull::{convex_hull, VPolytope};

fn labels(items: &[String]) -> BTreeSet<String> {
    items.iter().cloned().collect()
}

fn expected_facet_sets(d: usize) -> Vec<BTreeSet<String>> {
    let k = d - 2;
    let idx = |tags: &str, range: &mut dyn Iterator<Item = usize>| -> Vec<String> {
        let r: Vec<usize> = range.collect();
        tags.chars().flat_map(|t| r.iter().map(move |i| format!("{t}{i}"))).collect()
    };
    let apex = |s: &str| s.chars().map(|c| c.to_string()).collect::<Vec<_>>();
    let mut out = vec![labels(&idx("ABCD", &mut (1..=k)))];
    for j in 1..=d - 3 {
        let mut v = idx("ABCD", &mut (1..=k).filter(|&i| i != j));
        v.extend(apex("ABCD"));
        out.push(labels(&v));
    }
    let mut v = idx("ABCD", &mut (1..=d - 3));
    v.extend(apex("ABCD"));
    out.push(labels(&v));
    for (tags, tail) in [("AC", "AC"), ("BD", "BD"), ("C", "CD"), ("A", "AB"), ("CD", "D"), ("AB", "B")] {
        let mut v = idx(tags, &mut (1..=k));
        v.extend(apex(tail));
        out.push(labels(&v));
    }
    out.sort();
    out
}

#[test]
fn p_facet_vertex_sets() {
    for d in 4..=7 {
        let p = build_family(FamilyId::P, &ConstructionParams::new(d)).unwrap();
        let h = convex_hull(&p).unwrap();
        let mut found: Vec<_> = h.incidence.labeled_facets().into_iter().collect();
        found.sort();
        assert_eq!(found, expected_facet_sets(d), "d = {d}");
    }
}

fn point(p: &VPolytope, label: &str) -> Vector {
    p.point(label).unwrap_or_else(|| panic!("no vertex {label}")).clone()
}

fn combination(p: &VPolytope, terms: &[(Scalar, &str)]) -> (Vector, Scalar) {
    let mut x = Vector::zeros(p.dim);
    let mut total = Scalar::zero();
    for (c, l) in terms {
        x = x.add_scaled(c, &point(p, l));
        total += c;
    }
    (x, total)
}

type Terms<'a> = Vec<(Scalar, &'a str)>;

/// Midpoints of the non-edges C'B_i and C'D_i written as convex combinations
/// of other vertices of P'.
#[test]
fn pprime_non_edge_identities() {
    let half = frac(1, 2);
    for eps in [frac(1, 10), frac(1, 5), frac(1, 20)] {
        let e = &eps;
        let one = || int(1);
        for d in 4..=6 {
            let p = build_family(FamilyId::Pprime, &ConstructionParams::new(d).with_eps(eps.clone())).unwrap();
            for i in 1..=d - 2 {
                let (bi, di, ai, ci) = (format!("B{i}"), format!("D{i}"), format!("A{i}"), format!("C{i}'"));
                let cases: Vec<(Terms, Terms)> = vec![
                    (
                        vec![(half.clone(), &bi), (half.clone(), "C'")],
                        vec![
                            ((int(2) + e) / int(6), &bi),
                            (half.clone(), "A"),
                            ((one() - e) * (one() - e) / (int(6) * (one() + int(2) * e)), &di),
                            (e * (one() - e) / (int(2) * (one() + int(2) * e)), &ci),
                        ],
                    ),
                    (
                        vec![(half.clone(), &di), (half.clone(), "C'")],
                        vec![
                            ((one() + e) / int(6), &ai),
                            ((one() - e * e) / (int(3) * (one() + int(2) * e)), &ci),
                            (e / (int(2) * (one() + int(2) * e)), &di),
                            (half.clone(), "D"),
                        ],
                    ),
                ];
                for (lhs, rhs) in cases {
                    let (x, _) = combination(&p, &lhs);
                    let (y, total) = combination(&p, &rhs);
                    assert_eq!(total, int(1), "weights sum, eps={eps}, d={d}, i={i}");
                    assert!(rhs.iter().all(|(c, _)| !c.is_negative()), "negative weight, eps={eps}");
                    assert_eq!(x, y, "eps={eps}, d={d}, i={i}");
                }
            }
        }
    }
}

/// The stated combination for the midpoint of B and C_i' does not
/// evaluate to that midpoint, so the non-edge is checked directly: the
/// midpoint lies in the hull of the remaining vertices.
#[test]
fn b_ci_prime_midpoint_is_interior_to_the_rest() {
    for d in 4..=6 {
        let p = build_family(FamilyId::Pprime, &ConstructionParams::new(d)).unwrap();
        for i in 1..=d - 2 {
            let ci = format!("C{i}'");
            let mid = (&point(&p, "B") + &point(&p, &ci)).scale(&frac(1, 2));
            let rest: Vec<(String, Vector)> = p
                .vertices
                .iter()
                .filter(|v| v.label != "B" && v.label != ci)
                .map(|v| (v.label.clone(), v.point.clone()))
                .collect();
            let rest = VPolytope::new(d, rest).unwrap();
            assert!(convex_hull(&rest).unwrap().hpoly.contains(&mid), "d={d}, i={i}");
        }
    }
}

#[test]
fn vertex_counts() {
    for d in 3..=6 {
        for f in FamilyId::ALL {
            let p = build_family(f, &ConstructionParams::new(d)).unwrap();
            if f != FamilyId::DeltaBase {
                assert!(convex_hull(&p).unwrap().redundant.is_empty(), "{f}({d}) has redundant points");
            }
            let expected_v = match f {
                FamilyId::Q | FamilyId::Qprime => 4 * d - 4,
                FamilyId::StackedQ | FamilyId::StackedQprime => 4 * d - 2,
                FamilyId::DeltaBase => 4 * d - 8,
                _ => 4 * d - 4,
            };
            assert_eq!(p.len(), expected_v, "{f}({d})");
        }
    }
}

#[test]
fn primed_families_reject_degenerate_eps() {
    let bad = ConstructionParams::new(4).with_eps(int(1));
    assert!(build_family(FamilyId::Pprime, &bad).is_err());
    let bad = ConstructionParams::new(4).with_eps(int(3));
    assert!(build_family(FamilyId::BarPprime, &bad).is_err());
    let bad = ConstructionParams::new(4).with_eps(int(0));
    assert!(build_family(FamilyId::Qprime, &bad).is_err());
}
