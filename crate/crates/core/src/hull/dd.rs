//! Double description: extreme rays of a pointed cone `{y : row · y >= 0}`.
//!
//! Rays are primitive integer vectors; adjacency uses the combinatorial
//! test (no third ray whose zero set contains the common zero set).

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{eliminate, primitive};

#[derive(Debug, Clone)]
pub(crate) struct Ray {
    pub coords: Vec<BigInt>,
    /// Indices of input rows that vanish on this ray.
    pub zero: FixedBitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Extreme rays of `{y : rows[i] · y >= 0}`. The rows must span the whole
/// space (`dim` columns), which makes the cone pointed.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Vec<Ray> {
    let m = rows.len();
    // Greedy basis: first rows in input order raising the rank.
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    for i in 0..m {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&b| rows[b].clone()).collect();
        trial.push(rows[i].clone());
        if eliminate(trial, dim, false).rank() == basis.len() + 1 {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "cone rows must have full rank");

    let mut processed = FixedBitSet::with_capacity(m);
    for &b in &basis {
        processed.insert(b);
    }

    // Simplicial start: ray j is tight on every basis row but j.
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for (j, &bj) in basis.iter().enumerate() {
        let others: Vec<Vec<BigInt>> = basis
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &b)| rows[b].clone())
            .collect();
        let mut y = if others.is_empty() {
            vec![BigInt::from(1)]
        } else {
            let ker = eliminate(others, dim, true).kernel();
            debug_assert_eq!(ker.len(), 1);
            ker.into_iter().next().expect("one-dimensional kernel")
        };
        if dot(&rows[bj], &y).is_negative() {
            for c in y.iter_mut() {
                *c = -&*c;
            }
        }
        let mut zero = FixedBitSet::with_capacity(m);
        for &b in &basis {
            if b != bj {
                zero.insert(b);
            }
        }
        rays.push(Ray { coords: y, zero });
    }

    for (i, row) in rows.iter().enumerate().take(m) {
        if processed.contains(i) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();

        let mut created = Vec::new();
        if !minus.is_empty() {
            for &p in &plus {
                for &q in &minus {
                    let mut common = rays[p].zero.clone();
                    common.intersect_with(&rays[q].zero);
                    if common.count_ones(..) + 2 < dim {
                        continue;
                    }
                    let blocked = rays
                        .iter()
                        .enumerate()
                        .any(|(k, r)| k != p && k != q && common.is_subset(&r.zero));
                    if blocked {
                        continue;
                    }
                    let (vp, vq) = (&values[p], &values[q]);
                    let coords: Vec<BigInt> = rays[q]
                        .coords
                        .iter()
                        .zip(&rays[p].coords)
                        .map(|(yq, yp)| vp * yq - vq * yp)
                        .collect();
                    let mut zero = common;
                    zero.insert(i);
                    created.push(Ray {
                        coords: primitive(coords),
                        zero,
                    });
                }
            }
        }

        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_zero() {
                r.zero.insert(i);
                next.push(r);
            } else if values[k].is_positive() {
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
        processed.insert(i);
    }
    rays
}
