#![allow(dead_code)]

use polyforge::arith::{frac, int, Hyperplane, Scalar, Vector};
use polyforge::hull::{ProjectiveMap, VPolytope};
use num_traits::Signed;
use rand::Rng;

pub fn simplex(d: usize) -> VPolytope {
    let mut pts = vec![("o".to_string(), Vector::zeros(d))];
    for i in 1..=d {
        pts.push((format!("e{i}"), Vector::unit(d, i)));
    }
    VPolytope::new(d, pts).unwrap()
}

pub fn cube(d: usize) -> VPolytope {
    let pts = (0..1u32 << d)
        .map(|m| {
            let c: Vec<i64> = (0..d).map(|i| ((m >> i) & 1) as i64).collect();
            (format!("v{m}"), Vector::from_ints(&c))
        })
        .collect();
    VPolytope::new(d, pts).unwrap()
}

pub fn cross_polytope(d: usize) -> VPolytope {
    let mut pts = Vec::new();
    for i in 1..=d {
        pts.push((format!("p{i}"), Vector::unit(d, i)));
        pts.push((format!("m{i}"), Vector::unit(d, i).scale(&int(-1))));
    }
    VPolytope::new(d, pts).unwrap()
}

/// Prism over the standard (d-1)-simplex, height along e_d.
pub fn simplex_prism(d: usize) -> VPolytope {
    let mut pts = Vec::new();
    for (lift, tag) in [(0, "a"), (1, "b")] {
        let mut base = Vector::zeros(d);
        base.0[d - 1] = int(lift);
        pts.push((format!("{tag}0"), base.clone()));
        for i in 1..d {
            pts.push((format!("{tag}{i}"), &base + &Vector::unit(d, i)));
        }
    }
    VPolytope::new(d, pts).unwrap()
}

pub fn plane(coeffs: &[Scalar], c: Scalar) -> Hyperplane {
    Hyperplane::new(Vector(coeffs.to_vec()), c).unwrap()
}

/// Rational in [-range, range] with denominator 1..=3.
pub fn random_scalar<R: Rng>(rng: &mut R, range: i64) -> Scalar {
    let den = rng.gen_range(1..=3);
    frac(rng.gen_range(-range * den..=range * den), den)
}

/// Hull of `n` random rational points, retried until full-dimensional.
pub fn random_polytope<R: Rng>(rng: &mut R, d: usize, n: usize) -> VPolytope {
    loop {
        let pts: Vec<(String, Vector)> = (0..n)
            .map(|i| (format!("p{i}"), Vector((0..d).map(|_| random_scalar(rng, 4)).collect())))
            .collect();
        if let Ok(p) = VPolytope::new(d, pts) {
            if p.is_full_dimensional() {
                return p.irredundant();
            }
        }
    }
}

pub fn random_nonzero_vector<R: Rng>(rng: &mut R, d: usize) -> Vector {
    loop {
        let v = Vector((0..d).map(|_| int(rng.gen_range(-3..=3))).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

/// A projective map whose denominator is at least 1/2 on every vertex of
/// `p`. It may still be singular; the caller retries.
pub fn random_admissible_map<R: Rng>(rng: &mut R, p: &VPolytope) -> ProjectiveMap {
    let d = p.dim;
    let linear = (1..=d)
        .map(|i| {
            let mut row = Vector((0..d).map(|_| int(rng.gen_range(-1..=1))).collect());
            row.0[i - 1] += int(rng.gen_range(1..=3));
            row
        })
        .collect();
    let translation = Vector((0..d).map(|_| int(rng.gen_range(-2..=2))).collect());
    let raw = Vector((0..d).map(|_| int(rng.gen_range(-2..=2))).collect());
    let worst = p.vertices.iter().map(|v| raw.dot(&v.point).abs()).max().unwrap_or_else(|| int(0));
    let denominator = raw.scale(&(int(1) / (int(2) * worst + int(1))));
    ProjectiveMap {
        linear,
        translation,
        denominator,
        delta: int(1),
    }
}
